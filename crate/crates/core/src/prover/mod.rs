//! Unit-equational theorem proving by ordered (unfailing) completion.
//!
//! Equations that the term ordering cannot orient stay in the active set
//! and are used in both directions, for superposition and for rewriting
//! instances whose left side is larger than the right. Goals are
//! Skolemized and checked after every new active equation.

mod completion;
pub mod index;
pub mod order;
pub mod pterm;
pub mod trace;

use std::fmt;
use std::time::Duration;

pub use completion::{axiom_terms, complete, derive, derive_terms, goal_terms};
pub use order::{OrderKind, TermOrdering};
pub use pterm::{PTerm, Subst};
pub use trace::{ProofTrace, ReplayError};

use pterm::{match_into, unify_into};

/// Which way an equation is used: left to right or right to left.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn symbol(self) -> char {
        match self {
            Dir::Forward => '>',
            Dir::Backward => '<',
        }
    }
}

/// An equation of the active set. `oriented` means `lhs > rhs` in the
/// ordering and the equation is only used left to right.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteRule {
    pub lhs: PTerm,
    pub rhs: PTerm,
    pub oriented: bool,
}

const BOTH: [Dir; 2] = [Dir::Forward, Dir::Backward];

impl RewriteRule {
    /// Orients the equation if the ordering allows, larger side first.
    pub fn new(lhs: PTerm, rhs: PTerm, ord: &TermOrdering) -> RewriteRule {
        if ord.greater(&lhs, &rhs) {
            RewriteRule {
                lhs,
                rhs,
                oriented: true,
            }
        } else if ord.greater(&rhs, &lhs) {
            RewriteRule {
                lhs: rhs,
                rhs: lhs,
                oriented: true,
            }
        } else {
            RewriteRule {
                lhs,
                rhs,
                oriented: false,
            }
        }
    }

    pub fn sides(&self, dir: Dir) -> (&PTerm, &PTerm) {
        match dir {
            Dir::Forward => (&self.lhs, &self.rhs),
            Dir::Backward => (&self.rhs, &self.lhs),
        }
    }

    pub fn dirs(&self) -> &'static [Dir] {
        if self.oriented {
            &BOTH[..1]
        } else {
            &BOTH
        }
    }

    fn max_var(&self) -> Option<u32> {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    /// One rewrite step at the root of `t`, if this rule applies in
    /// direction `dir` under the ordering.
    pub fn apply_at_root(&self, t: &PTerm, dir: Dir, ord: &TermOrdering) -> Option<PTerm> {
        let (l, r) = self.sides(dir);
        let mut s = Subst::new();
        if !match_into(l, t, &mut s) {
            return None;
        }
        let out = s.apply_closed(r)?;
        (self.oriented || ord.greater(t, &out)).then_some(out)
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.oriented { "->" } else { "=" };
        write!(f, "{} {arrow} {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteSystem {
    pub rules: Vec<RewriteRule>,
    pub ordering: TermOrdering,
}

impl RewriteSystem {
    pub fn normalize(&self, t: &PTerm) -> PTerm {
        normalize(t, &self.rules, &self.ordering)
    }
}

/// Innermost normalization: arguments first, then the root, repeated
/// until no rule applies. Unoriented rules rewrite only when the result
/// is smaller.
pub fn normalize(t: &PTerm, rules: &[RewriteRule], ord: &TermOrdering) -> PTerm {
    let t = match t {
        PTerm::App(a) => {
            let l = normalize(&a.left, rules, ord);
            let r = normalize(&a.right, rules, ord);
            if l == a.left && r == a.right {
                t.clone()
            } else {
                PTerm::app(l, r)
            }
        }
        _ => t.clone(),
    };
    for rule in rules {
        for &dir in rule.dirs() {
            if let Some(next) = rule.apply_at_root(&t, dir, ord) {
                return normalize(&next, rules, ord);
            }
        }
    }
    t
}

/// Superposes `inner` (used in `dir_i`) into the subterm at `path` of
/// `outer`'s left side (used in `dir_o`). Variables of `inner` are renamed
/// apart first. With `ord`, overlaps whose instantiated equations are used
/// against the ordering are dropped.
pub fn overlap(
    outer: &RewriteRule,
    dir_o: Dir,
    inner: &RewriteRule,
    dir_i: Dir,
    path: &[u8],
    ord: Option<&TermOrdering>,
) -> Option<(PTerm, PTerm)> {
    let shift = outer.max_var().map_or(0, |v| v + 1);
    let renamed = RewriteRule {
        lhs: inner.lhs.shift_vars(shift),
        rhs: inner.rhs.shift_vars(shift),
        oriented: inner.oriented,
    };
    overlap_renamed(outer, dir_o, &renamed, dir_i, path, ord)
}

/// [`overlap`] for an `inner` whose variables are already apart from
/// `outer`'s.
pub(crate) fn overlap_renamed(
    outer: &RewriteRule,
    dir_o: Dir,
    inner: &RewriteRule,
    dir_i: Dir,
    path: &[u8],
    ord: Option<&TermOrdering>,
) -> Option<(PTerm, PTerm)> {
    let (lo, ro) = outer.sides(dir_o);
    let (li, ri) = inner.sides(dir_i);
    let sub = lo.at(path)?;
    match (sub, li) {
        (PTerm::Var(_), _) => return None,
        (PTerm::Const(a), PTerm::Const(b)) if a != b => return None,
        (PTerm::Const(_), PTerm::App(_)) | (PTerm::App(_), PTerm::Const(_)) => return None,
        _ => {}
    }
    let mut s = Subst::new();
    if !unify_into(sub, li, &mut s) {
        return None;
    }
    if let Some(ord) = ord {
        if !outer.oriented && ord.greater(&s.apply(ro), &s.apply(lo)) {
            return None;
        }
        if !inner.oriented && ord.greater(&s.apply(ri), &s.apply(li)) {
            return None;
        }
    }
    Some((s.apply(&lo.replace(path, ri.clone())), s.apply(ro)))
}

/// Every overlap of one rule's left side into a non-variable subterm of
/// the other's, in both roles and every usable direction. Trivial pairs
/// are left out.
pub fn critical_pairs(
    r1: &RewriteRule,
    r2: &RewriteRule,
    ord: &TermOrdering,
) -> Vec<(PTerm, PTerm)> {
    let mut out = Vec::new();
    for (outer, inner) in [(r1, r2), (r2, r1)] {
        for &dir_o in outer.dirs() {
            for &dir_i in inner.dirs() {
                for path in outer.sides(dir_o).0.nonvar_positions() {
                    if let Some((a, b)) = overlap(outer, dir_o, inner, dir_i, &path, Some(ord)) {
                        if a != b {
                            out.push((a, b));
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Limits {
    pub max_seconds: f64,
    /// Passive equations taken out of the queue.
    pub max_processed: u64,
    /// Equations with a side larger than this are dropped.
    pub max_term_size: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_seconds: 300.0,
            max_processed: 200_000,
            max_term_size: 60,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Resource {
    Time,
    Processed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProofStatus {
    Proved,
    Saturated,
    ResourceOut(Resource),
}

impl ProofStatus {
    pub fn label(self) -> &'static str {
        match self {
            ProofStatus::Proved => "proved",
            ProofStatus::Saturated => "saturated-without-proof",
            ProofStatus::ResourceOut(_) => "resource-out",
        }
    }
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofStatus::ResourceOut(Resource::Time) => write!(f, "resource-out (time)"),
            ProofStatus::ResourceOut(Resource::Processed) => write!(f, "resource-out (processed)"),
            s => f.write_str(s.label()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Stats {
    /// Active equations at the end.
    pub active: usize,
    /// Equations that were ever activated (including simplified copies).
    pub activated: usize,
    pub critical_pairs: u64,
    pub processed: u64,
    pub elapsed: Duration,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoalOutcome {
    pub proved: bool,
    /// Normal forms of the Skolemized sides when the run stopped.
    pub normal_forms: (PTerm, PTerm),
}

#[derive(Clone, PartialEq, Debug)]
pub struct ProofOutcome {
    pub status: ProofStatus,
    pub goals: Vec<GoalOutcome>,
    pub stats: Stats,
    /// Present when every goal was proved.
    pub trace: Option<ProofTrace>,
    pub system: RewriteSystem,
}

/// Ordering plus limits, with a name for reports.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Strategy {
    pub name: &'static str,
    pub ordering: TermOrdering,
    pub limits: Limits,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            name: "kbo-default",
            ordering: TermOrdering::KBO,
            limits: Limits::default(),
        }
    }
}

impl Strategy {
    pub fn lpo() -> Strategy {
        Strategy {
            name: "lpo",
            ordering: TermOrdering::LPO,
            ..Strategy::default()
        }
    }
}
