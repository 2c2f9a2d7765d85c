use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::time::Instant;

use super::index::DiscTree;
use super::pterm::{canonical_pair, from_term, match_into, skolemize, PTerm, Subst};
use super::trace::{GoalProof, Justification, ProofTrace, Side, Step, TraceEquation};
use super::{
    overlap, overlap_renamed, Dir, GoalOutcome, Limits, ProofOutcome, ProofStatus, Resource,
    RewriteRule, RewriteSystem, Stats, Strategy, TermOrdering,
};
use crate::term::Identity;

/// Positions are packed into a word: bit `i` is the branch taken at
/// depth `i`. Terms within the size limit are far shallower than 64.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct PackedPath {
    bits: u64,
    len: u8,
}

impl PackedPath {
    fn pack(path: &[u8]) -> Option<PackedPath> {
        if path.len() >= 64 {
            return None;
        }
        let bits = path
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, b)| acc | (u64::from(*b) << i));
        Some(PackedPath {
            bits,
            len: path.len() as u8,
        })
    }

    fn unpack(self) -> Vec<u8> {
        (0..self.len)
            .map(|i| ((self.bits >> i) & 1) as u8)
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Item {
    Pair {
        outer: u32,
        outer_dir: Dir,
        inner: u32,
        inner_dir: Dir,
        path: PackedPath,
    },
    /// An equation to (re)process: an axiom, or an active equation that
    /// was simplified by a newer one.
    Given(u32),
}

/// Queue entry; the heap pops the lightest, oldest first.
#[derive(PartialEq, Eq, Debug)]
struct Passive {
    weight: u32,
    seq: u64,
    item: Item,
}

impl Ord for Passive {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .cmp(&self.weight)
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Passive {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Entry {
    rule: RewriteRule,
    justification: Justification,
}

struct Goal {
    lhs: PTerm,
    rhs: PTerm,
    proof: Option<GoalProof>,
}

struct Engine {
    ord: TermOrdering,
    limits: Limits,
    entries: Vec<Entry>,
    alive: Vec<bool>,
    active: Vec<u32>,
    index: DiscTree<(u32, Dir)>,
    passive: BinaryHeap<Passive>,
    seq: u64,
    goals: Vec<Goal>,
    stats: Stats,
}

impl Engine {
    fn new(strategy: &Strategy) -> Engine {
        Engine {
            ord: strategy.ordering,
            limits: strategy.limits,
            entries: Vec::new(),
            alive: Vec::new(),
            active: Vec::new(),
            index: DiscTree::new(),
            passive: BinaryHeap::new(),
            seq: 0,
            goals: Vec::new(),
            stats: Stats::default(),
        }
    }

    fn push(&mut self, weight: u32, item: Item) {
        self.seq += 1;
        self.passive.push(Passive {
            weight,
            seq: self.seq,
            item,
        });
    }

    fn add_entry(&mut self, rule: RewriteRule, justification: Justification) -> u32 {
        self.entries.push(Entry {
            rule,
            justification,
        });
        self.alive.push(false);
        (self.entries.len() - 1) as u32
    }

    fn rewrite_root(&self, t: &PTerm, found: &mut Vec<(u32, Dir)>) -> Option<(PTerm, u32, Dir)> {
        found.clear();
        self.index.generalizations(t, found);
        found.iter().find_map(|&(id, dir)| {
            self.entries[id as usize]
                .rule
                .apply_at_root(t, dir, &self.ord)
                .map(|out| (out, id, dir))
        })
    }

    fn normalize(&self, t: &PTerm, side: Side, steps: &mut Vec<Step>) -> PTerm {
        let mut path = Vec::new();
        let mut found = Vec::new();
        self.normalize_at(t, &mut path, side, steps, &mut found)
    }

    fn normalize_at(
        &self,
        t: &PTerm,
        path: &mut Vec<u8>,
        side: Side,
        steps: &mut Vec<Step>,
        found: &mut Vec<(u32, Dir)>,
    ) -> PTerm {
        let t = match t {
            PTerm::App(a) => {
                path.push(0);
                let l = self.normalize_at(&a.left, path, side, steps, found);
                path.pop();
                path.push(1);
                let r = self.normalize_at(&a.right, path, side, steps, found);
                path.pop();
                if l == a.left && r == a.right {
                    t.clone()
                } else {
                    PTerm::app(l, r)
                }
            }
            _ => t.clone(),
        };
        match self.rewrite_root(&t, found) {
            Some((next, eq, dir)) => {
                steps.push(Step {
                    side,
                    path: path.clone(),
                    eq,
                    dir,
                });
                self.normalize_at(&next, path, side, steps, found)
            }
            None => t,
        }
    }

    /// An active equation that has `a = b` (or `b = a`) as an instance.
    fn subsumer(&self, a: &PTerm, b: &PTerm) -> Option<u32> {
        let mut found = Vec::new();
        for (x, y) in [(a, b), (b, a)] {
            found.clear();
            self.index.generalizations(x, &mut found);
            for &(id, dir) in &found {
                let (l, r) = self.entries[id as usize].rule.sides(dir);
                let mut s = Subst::new();
                if match_into(l, x, &mut s) && match_into(r, y, &mut s) {
                    return Some(id);
                }
            }
        }
        None
    }

    fn reducible_by(&self, t: &PTerm, rule: &RewriteRule) -> bool {
        if rule
            .dirs()
            .iter()
            .any(|&d| rule.apply_at_root(t, d, &self.ord).is_some())
        {
            return true;
        }
        match t {
            PTerm::App(a) => self.reducible_by(&a.left, rule) || self.reducible_by(&a.right, rule),
            _ => false,
        }
    }

    fn index_entry(&mut self, id: u32, insert: bool) {
        let rule = self.entries[id as usize].rule.clone();
        for &dir in rule.dirs() {
            let lhs = rule.sides(dir).0;
            if insert {
                self.index.insert(lhs, (id, dir));
            } else {
                self.index.remove(lhs, &(id, dir));
            }
        }
    }

    fn activate(&mut self, id: u32) {
        let rule = self.entries[id as usize].rule.clone();
        // Active equations the new one simplifies go back to the queue.
        let simplified: Vec<u32> = self
            .active
            .iter()
            .copied()
            .filter(|&other| {
                let r = &self.entries[other as usize].rule;
                self.reducible_by(&r.lhs, &rule) || self.reducible_by(&r.rhs, &rule)
            })
            .collect();
        for other in simplified {
            self.alive[other as usize] = false;
            self.index_entry(other, false);
            let weight = self.entries[other as usize].rule.lhs.size()
                + self.entries[other as usize].rule.rhs.size();
            self.push(weight, Item::Given(other));
        }
        self.active.retain(|&a| self.alive[a as usize]);

        self.alive[id as usize] = true;
        self.active.push(id);
        self.index_entry(id, true);
        self.stats.activated += 1;

        for other in self.active.clone() {
            self.superpose(id, other);
            if other != id {
                self.superpose(other, id);
            }
        }
    }

    fn superpose(&mut self, outer: u32, inner: u32) {
        let o = self.entries[outer as usize].rule.clone();
        let i = &self.entries[inner as usize].rule;
        let shift = o.lhs.max_var().max(o.rhs.max_var()).map_or(0, |v| v + 1);
        let i = RewriteRule {
            lhs: i.lhs.shift_vars(shift),
            rhs: i.rhs.shift_vars(shift),
            oriented: i.oriented,
        };
        for &outer_dir in o.dirs() {
            let positions = o.sides(outer_dir).0.nonvar_positions();
            for &inner_dir in i.dirs() {
                for path in &positions {
                    let Some((a, b)) =
                        overlap_renamed(&o, outer_dir, &i, inner_dir, path, Some(&self.ord))
                    else {
                        continue;
                    };
                    if a == b || a.size().max(b.size()) > self.limits.max_term_size {
                        continue;
                    }
                    let Some(path) = PackedPath::pack(path) else {
                        continue;
                    };
                    self.stats.critical_pairs += 1;
                    self.push(
                        a.size() + b.size(),
                        Item::Pair {
                            outer,
                            outer_dir,
                            inner,
                            inner_dir,
                            path,
                        },
                    );
                }
            }
        }
    }

    fn check_goals(&mut self) -> bool {
        for k in 0..self.goals.len() {
            if self.goals[k].proof.is_some() {
                continue;
            }
            let mut steps = Vec::new();
            let a = self.normalize(&self.goals[k].lhs, Side::Left, &mut steps);
            let b = self.normalize(&self.goals[k].rhs, Side::Right, &mut steps);
            let via = if a == b {
                None
            } else {
                match self.subsumer(&a, &b) {
                    Some(id) => Some(id),
                    None => continue,
                }
            };
            let goal = &mut self.goals[k];
            goal.proof = Some(GoalProof {
                index: k,
                lhs: goal.lhs.clone(),
                rhs: goal.rhs.clone(),
                steps,
                via,
            });
        }
        !self.goals.is_empty() && self.goals.iter().all(|g| g.proof.is_some())
    }

    /// Takes one queue item to a normalized equation ready to activate.
    fn process(&mut self, item: Item) -> Option<u32> {
        let (raw, base, from) = match item {
            Item::Pair {
                outer,
                outer_dir,
                inner,
                inner_dir,
                path,
            } => {
                if !self.alive[outer as usize] || !self.alive[inner as usize] {
                    return None;
                }
                let path = path.unpack();
                let o = &self.entries[outer as usize].rule;
                let i = &self.entries[inner as usize].rule;
                let raw = overlap(o, outer_dir, i, inner_dir, &path, Some(&self.ord))?;
                let base = Justification::CriticalPair {
                    outer,
                    outer_dir,
                    inner,
                    inner_dir,
                    path,
                    steps: Vec::new(),
                };
                (raw, base, None)
            }
            Item::Given(id) => {
                let r = &self.entries[id as usize].rule;
                let base = Justification::Simplified {
                    from: id,
                    steps: Vec::new(),
                };
                ((r.lhs.clone(), r.rhs.clone()), base, Some(id))
            }
        };
        self.stats.processed += 1;
        let mut steps = Vec::new();
        let a = self.normalize(&raw.0, Side::Left, &mut steps);
        let b = self.normalize(&raw.1, Side::Right, &mut steps);
        if a == b
            || a.size().max(b.size()) > self.limits.max_term_size
            || self.subsumer(&a, &b).is_some()
        {
            return None;
        }
        if let (Some(id), true) = (from, steps.is_empty()) {
            return Some(id);
        }
        let justification = match base {
            Justification::CriticalPair {
                outer,
                outer_dir,
                inner,
                inner_dir,
                path,
                ..
            } => Justification::CriticalPair {
                outer,
                outer_dir,
                inner,
                inner_dir,
                path,
                steps,
            },
            Justification::Simplified { from, .. } => Justification::Simplified { from, steps },
            Justification::Axiom { .. } => unreachable!("axioms enter as given equations"),
        };
        let (a, b) = canonical_pair(&a, &b);
        let rule = RewriteRule::new(a, b, &self.ord);
        Some(self.add_entry(rule, justification))
    }

    fn run(&mut self) -> ProofStatus {
        let start = Instant::now();
        let status = loop {
            if self.check_goals() {
                break ProofStatus::Proved;
            }
            if self.stats.processed >= self.limits.max_processed {
                break ProofStatus::ResourceOut(Resource::Processed);
            }
            if start.elapsed().as_secs_f64() >= self.limits.max_seconds {
                break ProofStatus::ResourceOut(Resource::Time);
            }
            let Some(next) = self.passive.pop() else {
                break ProofStatus::Saturated;
            };
            if let Some(id) = self.process(next.item) {
                self.activate(id);
            }
        };
        self.stats.elapsed = start.elapsed();
        self.stats.active = self.active.len();
        status
    }

    fn trace(&self) -> ProofTrace {
        let mut needed = BTreeSet::new();
        let mut stack: Vec<u32> = self
            .goals
            .iter()
            .filter_map(|g| g.proof.as_ref())
            .flat_map(|p| p.parents())
            .collect();
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                stack.extend(self.entries[id as usize].justification.parents());
            }
        }
        ProofTrace {
            equations: needed
                .into_iter()
                .map(|id| {
                    let e = &self.entries[id as usize];
                    TraceEquation {
                        id,
                        justification: e.justification.clone(),
                        lhs: e.rule.lhs.clone(),
                        rhs: e.rule.rhs.clone(),
                    }
                })
                .collect(),
            goals: self.goals.iter().filter_map(|g| g.proof.clone()).collect(),
        }
    }

    fn outcome(self, status: ProofStatus) -> ProofOutcome {
        let goals = self
            .goals
            .iter()
            .map(|g| {
                let mut steps = Vec::new();
                GoalOutcome {
                    proved: g.proof.is_some(),
                    normal_forms: (
                        self.normalize(&g.lhs, Side::Left, &mut steps),
                        self.normalize(&g.rhs, Side::Right, &mut steps),
                    ),
                }
            })
            .collect();
        let trace = (status == ProofStatus::Proved).then(|| self.trace());
        let system = RewriteSystem {
            rules: self
                .active
                .iter()
                .map(|&id| self.entries[id as usize].rule.clone())
                .collect(),
            ordering: self.ord,
        };
        ProofOutcome {
            status,
            goals,
            stats: self.stats,
            trace,
            system,
        }
    }
}

/// Runs completion on prover terms. Goals must be ground (Skolemized).
pub fn derive_terms(
    axioms: &[(PTerm, PTerm)],
    goals: &[(PTerm, PTerm)],
    strategy: &Strategy,
) -> ProofOutcome {
    let mut engine = Engine::new(strategy);
    for (index, (l, r)) in axioms.iter().enumerate() {
        if l == r {
            continue;
        }
        let rule = RewriteRule::new(l.clone(), r.clone(), &engine.ord);
        let weight = l.size() + r.size();
        let id = engine.add_entry(rule, Justification::Axiom { index });
        engine.push(weight, Item::Given(id));
    }
    engine.goals = goals
        .iter()
        .map(|(l, r)| Goal {
            lhs: l.clone(),
            rhs: r.clone(),
            proof: None,
        })
        .collect();
    let status = engine.run();
    engine.outcome(status)
}

pub fn axiom_terms(axioms: &[Identity]) -> Vec<(PTerm, PTerm)> {
    axioms
        .iter()
        .map(|a| {
            let vars = a.variables();
            (from_term(&a.lhs, &vars), from_term(&a.rhs, &vars))
        })
        .collect()
}

pub fn goal_terms(goals: &[Identity]) -> Vec<(PTerm, PTerm)> {
    goals
        .iter()
        .map(|g| {
            let vars = g.variables();
            (skolemize(&g.lhs, &vars), skolemize(&g.rhs, &vars))
        })
        .collect()
}

/// Tries to prove each goal from the axioms.
pub fn derive(axioms: &[Identity], goals: &[Identity], strategy: &Strategy) -> ProofOutcome {
    derive_terms(&axiom_terms(axioms), &goal_terms(goals), strategy)
}

/// Completion without goals: runs until the queue is empty or a limit is
/// reached.
pub fn complete(axioms: &[Identity], strategy: &Strategy) -> ProofOutcome {
    derive(axioms, &[], strategy)
}
