//! Proof traces: the equations a proof depends on, each with how it was
//! obtained, in a line-oriented text format that can be checked
//! independently of the prover.
//!
//! ```text
//! <id> <kind> <parents> <detail...> : <lhs> = <rhs>
//! 0 axiom - a0 : ((X0 * X0) * X1) = X1
//! 4 cp 0,2 0> 2< 0 L-@2> : (e * X0) = X0
//! 5 simp 4,1 4 R1@1> : ...
//! g0 goal 5 L-@5> = : (c1 * c2) = (c2 * c1)
//! ```
//!
//! `a<k>` names the k-th axiom. A critical pair line names the outer
//! equation and direction, the inner one, and the position in the outer
//! left side. Rewrite steps are `<side><path>@<id><dir>`, applied in
//! order; `-` is the root position or an empty list. A goal line ends
//! with `=` when both sides were rewritten to the same term, or with the
//! id of an equation the rewritten goal is an instance of.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::pterm::{canonical_pair, match_into, parse_pterm, unify_into, PTerm, Subst};
use super::Dir;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub side: Side,
    pub path: Vec<u8>,
    pub eq: u32,
    pub dir: Dir,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Axiom {
        index: usize,
    },
    CriticalPair {
        outer: u32,
        outer_dir: Dir,
        inner: u32,
        inner_dir: Dir,
        path: Vec<u8>,
        steps: Vec<Step>,
    },
    Simplified {
        from: u32,
        steps: Vec<Step>,
    },
}

impl Justification {
    /// Equations this one was built from, including rewriting steps.
    pub fn parents(&self) -> BTreeSet<u32> {
        let (mut set, steps): (BTreeSet<u32>, &[Step]) = match self {
            Justification::Axiom { .. } => (BTreeSet::new(), &[]),
            Justification::CriticalPair {
                outer,
                inner,
                steps,
                ..
            } => ([*outer, *inner].into(), steps),
            Justification::Simplified { from, steps } => ([*from].into(), steps),
        };
        set.extend(steps.iter().map(|s| s.eq));
        set
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceEquation {
    pub id: u32,
    pub justification: Justification,
    pub lhs: PTerm,
    pub rhs: PTerm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoalProof {
    pub index: usize,
    /// The Skolemized goal.
    pub lhs: PTerm,
    pub rhs: PTerm,
    pub steps: Vec<Step>,
    /// Equation the rewritten goal is an instance of; `None` when the
    /// sides became identical.
    pub via: Option<u32>,
}

impl GoalProof {
    pub fn parents(&self) -> BTreeSet<u32> {
        let mut set: BTreeSet<u32> = self.steps.iter().map(|s| s.eq).collect();
        set.extend(self.via);
        set
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProofTrace {
    pub equations: Vec<TraceEquation>,
    pub goals: Vec<GoalProof>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: equation {id} is not defined earlier")]
    UnknownEquation { line: usize, id: u32 },
    #[error("line {line}: equation id {id} is used twice")]
    DuplicateId { line: usize, id: u32 },
    #[error("line {line}: axiom a{index} does not exist or differs")]
    AxiomMismatch { line: usize, index: usize },
    #[error("line {line}: the overlap does not unify")]
    BadOverlap { line: usize },
    #[error("line {line}: rewrite step {step} does not apply")]
    BadStep { line: usize, step: usize },
    #[error("line {line}: the stated equation is not the one derived")]
    Mismatch { line: usize },
    #[error("line {line}: goal g{index} does not exist or differs")]
    GoalMismatch { line: usize, index: usize },
    #[error("line {line}: the goal sides are not joined")]
    NotJoined { line: usize },
    #[error("goal g{0} has no proof")]
    MissingGoal(usize),
}

fn write_path(f: &mut fmt::Formatter<'_>, path: &[u8]) -> fmt::Result {
    if path.is_empty() {
        return f.write_str("-");
    }
    path.iter().try_for_each(|b| write!(f, "{b}"))
}

fn write_steps(f: &mut fmt::Formatter<'_>, steps: &[Step]) -> fmt::Result {
    if steps.is_empty() {
        return f.write_str("-");
    }
    for (i, s) in steps.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(if s.side == Side::Left { "L" } else { "R" })?;
        write_path(f, &s.path)?;
        write!(f, "@{}{}", s.eq, s.dir.symbol())?;
    }
    Ok(())
}

fn write_parents(f: &mut fmt::Formatter<'_>, parents: &BTreeSet<u32>) -> fmt::Result {
    if parents.is_empty() {
        return f.write_str("-");
    }
    let list: Vec<String> = parents.iter().map(u32::to_string).collect();
    f.write_str(&list.join(","))
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for eq in &self.equations {
            let (kind, parents) = match &eq.justification {
                Justification::Axiom { .. } => ("axiom", BTreeSet::new()),
                Justification::CriticalPair { .. } => ("cp", eq.justification.parents()),
                Justification::Simplified { .. } => ("simp", eq.justification.parents()),
            };
            write!(f, "{} {kind} ", eq.id)?;
            write_parents(f, &parents)?;
            match &eq.justification {
                Justification::Axiom { index } => write!(f, " a{index}")?,
                Justification::CriticalPair {
                    outer,
                    outer_dir,
                    inner,
                    inner_dir,
                    path,
                    steps,
                } => {
                    write!(
                        f,
                        " {outer}{} {inner}{} ",
                        outer_dir.symbol(),
                        inner_dir.symbol()
                    )?;
                    write_path(f, path)?;
                    f.write_str(" ")?;
                    write_steps(f, steps)?;
                }
                Justification::Simplified { from, steps } => {
                    write!(f, " {from} ")?;
                    write_steps(f, steps)?;
                }
            }
            writeln!(f, " : {} = {}", eq.lhs, eq.rhs)?;
        }
        for g in &self.goals {
            write!(f, "g{} goal ", g.index)?;
            write_parents(f, &g.parents())?;
            f.write_str(" ")?;
            write_steps(f, &g.steps)?;
            match g.via {
                Some(id) => write!(f, " {id}")?,
                None => f.write_str(" =")?,
            }
            writeln!(f, " : {} = {}", g.lhs, g.rhs)?;
        }
        Ok(())
    }
}

struct LineParser {
    line: usize,
}

impl LineParser {
    fn err(&self, message: impl Into<String>) -> ReplayError {
        ReplayError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T, ReplayError> {
        s.parse().map_err(|_| self.err(format!("bad number `{s}`")))
    }

    fn path(&self, s: &str) -> Result<Vec<u8>, ReplayError> {
        if s == "-" {
            return Ok(Vec::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(self.err(format!("bad position `{s}`"))),
            })
            .collect()
    }

    fn dir(&self, c: Option<char>) -> Result<Dir, ReplayError> {
        match c {
            Some('>') => Ok(Dir::Forward),
            Some('<') => Ok(Dir::Backward),
            _ => Err(self.err("missing direction")),
        }
    }

    /// `12>` or `3<`.
    fn eq_dir(&self, s: &str) -> Result<(u32, Dir), ReplayError> {
        let mut chars = s.chars();
        let dir = self.dir(chars.next_back())?;
        Ok((self.num(chars.as_str())?, dir))
    }

    fn steps(&self, s: &str) -> Result<Vec<Step>, ReplayError> {
        if s == "-" {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|item| {
                let side = match item.chars().next() {
                    Some('L') => Side::Left,
                    Some('R') => Side::Right,
                    _ => return Err(self.err(format!("bad step `{item}`"))),
                };
                let (path, rest) = item[1..]
                    .split_once('@')
                    .ok_or_else(|| self.err(format!("bad step `{item}`")))?;
                let (eq, dir) = self.eq_dir(rest)?;
                Ok(Step {
                    side,
                    path: self.path(path)?,
                    eq,
                    dir,
                })
            })
            .collect()
    }

    fn term(&self, s: &str) -> Result<PTerm, ReplayError> {
        parse_pterm(s.trim()).map_err(|e| self.err(e.to_string()))
    }
}

impl ProofTrace {
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text format. Blank lines and lines starting with `#`
    /// are skipped.
    pub fn parse(text: &str) -> Result<ProofTrace, ReplayError> {
        let mut trace = ProofTrace::default();
        for (i, raw) in text.lines().enumerate() {
            let p = LineParser { line: i + 1 };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, eq) = line
                .split_once(" : ")
                .ok_or_else(|| p.err("missing ` : `"))?;
            let (lhs, rhs) = eq.split_once(" = ").ok_or_else(|| p.err("missing ` = `"))?;
            let (lhs, rhs) = (p.term(lhs)?, p.term(rhs)?);
            let fields: Vec<&str> = head.split_whitespace().collect();
            if fields.len() < 3 {
                return Err(p.err("too few fields"));
            }
            let detail = &fields[3..];
            match fields[1] {
                "axiom" => {
                    let [a] = detail else {
                        return Err(p.err("axiom takes one detail field"));
                    };
                    let index =
                        p.num(a.strip_prefix('a').ok_or_else(|| p.err("expected a<k>"))?)?;
                    trace.equations.push(TraceEquation {
                        id: p.num(fields[0])?,
                        justification: Justification::Axiom { index },
                        lhs,
                        rhs,
                    });
                }
                "cp" => {
                    let [o, i, path, steps] = detail else {
                        return Err(p.err("cp takes four detail fields"));
                    };
                    let (outer, outer_dir) = p.eq_dir(o)?;
                    let (inner, inner_dir) = p.eq_dir(i)?;
                    trace.equations.push(TraceEquation {
                        id: p.num(fields[0])?,
                        justification: Justification::CriticalPair {
                            outer,
                            outer_dir,
                            inner,
                            inner_dir,
                            path: p.path(path)?,
                            steps: p.steps(steps)?,
                        },
                        lhs,
                        rhs,
                    });
                }
                "simp" => {
                    let [from, steps] = detail else {
                        return Err(p.err("simp takes two detail fields"));
                    };
                    trace.equations.push(TraceEquation {
                        id: p.num(fields[0])?,
                        justification: Justification::Simplified {
                            from: p.num(from)?,
                            steps: p.steps(steps)?,
                        },
                        lhs,
                        rhs,
                    });
                }
                "goal" => {
                    let [steps, via] = detail else {
                        return Err(p.err("goal takes two detail fields"));
                    };
                    let index = p.num(
                        fields[0]
                            .strip_prefix('g')
                            .ok_or_else(|| p.err("expected g<k>"))?,
                    )?;
                    trace.goals.push(GoalProof {
                        index,
                        lhs,
                        rhs,
                        steps: p.steps(steps)?,
                        via: if *via == "=" { None } else { Some(p.num(via)?) },
                    });
                }
                other => return Err(p.err(format!("unknown kind `{other}`"))),
            }
        }
        Ok(trace)
    }

    /// Re-derives every equation and goal from the axioms using only
    /// unification, substitution and rewriting, and checks that every
    /// goal is proved. Equations are compared up to variable renaming and
    /// the order of their sides. `goals` are the Skolemized goals.
    pub fn replay(
        &self,
        axioms: &[(PTerm, PTerm)],
        goals: &[(PTerm, PTerm)],
    ) -> Result<(), ReplayError> {
        let mut known: HashMap<u32, (PTerm, PTerm)> = HashMap::new();
        // Lines are numbered as in the text form, equations first.
        for (n, eq) in self.equations.iter().enumerate() {
            let line = n + 1;
            let lookup = |id: u32| {
                known
                    .get(&id)
                    .cloned()
                    .ok_or(ReplayError::UnknownEquation { line, id })
            };
            let derived = match &eq.justification {
                Justification::Axiom { index } => {
                    axioms
                        .get(*index)
                        .cloned()
                        .ok_or(ReplayError::AxiomMismatch {
                            line,
                            index: *index,
                        })?
                }
                Justification::CriticalPair {
                    outer,
                    outer_dir,
                    inner,
                    inner_dir,
                    path,
                    steps,
                } => {
                    let o = lookup(*outer)?;
                    let i = lookup(*inner)?;
                    let pair = superpose(&o, *outer_dir, &i, *inner_dir, path)
                        .ok_or(ReplayError::BadOverlap { line })?;
                    apply_steps(pair, steps, &known, line)?
                }
                Justification::Simplified { from, steps } => {
                    apply_steps(lookup(*from)?, steps, &known, line)?
                }
            };
            if !same_equation(&derived, &(eq.lhs.clone(), eq.rhs.clone())) {
                return Err(match eq.justification {
                    Justification::Axiom { index } => ReplayError::AxiomMismatch { line, index },
                    _ => ReplayError::Mismatch { line },
                });
            }
            if known
                .insert(eq.id, (eq.lhs.clone(), eq.rhs.clone()))
                .is_some()
            {
                return Err(ReplayError::DuplicateId { line, id: eq.id });
            }
        }
        let mut proved = vec![false; goals.len()];
        for (n, g) in self.goals.iter().enumerate() {
            let line = self.equations.len() + n + 1;
            match goals.get(g.index) {
                Some((l, r)) if *l == g.lhs && *r == g.rhs => {}
                _ => {
                    return Err(ReplayError::GoalMismatch {
                        line,
                        index: g.index,
                    })
                }
            }
            let (a, b) = apply_steps((g.lhs.clone(), g.rhs.clone()), &g.steps, &known, line)?;
            let joined = match g.via {
                None => a == b,
                Some(id) => {
                    let eq = known
                        .get(&id)
                        .ok_or(ReplayError::UnknownEquation { line, id })?;
                    is_instance(eq, &a, &b)
                }
            };
            if !joined {
                return Err(ReplayError::NotJoined { line });
            }
            proved[g.index] = true;
        }
        match proved.iter().position(|p| !p) {
            Some(k) => Err(ReplayError::MissingGoal(k)),
            None => Ok(()),
        }
    }
}

fn sides(eq: &(PTerm, PTerm), dir: Dir) -> (&PTerm, &PTerm) {
    match dir {
        Dir::Forward => (&eq.0, &eq.1),
        Dir::Backward => (&eq.1, &eq.0),
    }
}

fn superpose(
    outer: &(PTerm, PTerm),
    dir_o: Dir,
    inner: &(PTerm, PTerm),
    dir_i: Dir,
    path: &[u8],
) -> Option<(PTerm, PTerm)> {
    let (lo, ro) = sides(outer, dir_o);
    let shift = outer
        .0
        .max_var()
        .max(outer.1.max_var())
        .map_or(0, |v| v + 1);
    let (li, ri) = sides(inner, dir_i);
    let (li, ri) = (li.shift_vars(shift), ri.shift_vars(shift));
    let sub = lo.at(path)?;
    if sub.is_var() {
        return None;
    }
    let mut s = Subst::new();
    if !unify_into(sub, &li, &mut s) {
        return None;
    }
    Some((s.apply(&lo.replace(path, ri)), s.apply(ro)))
}

fn apply_steps(
    mut pair: (PTerm, PTerm),
    steps: &[Step],
    known: &HashMap<u32, (PTerm, PTerm)>,
    line: usize,
) -> Result<(PTerm, PTerm), ReplayError> {
    for (k, step) in steps.iter().enumerate() {
        let bad = ReplayError::BadStep { line, step: k };
        let eq = known
            .get(&step.eq)
            .ok_or(ReplayError::UnknownEquation { line, id: step.eq })?;
        let (l, r) = sides(eq, step.dir);
        let target = match step.side {
            Side::Left => &mut pair.0,
            Side::Right => &mut pair.1,
        };
        let sub = target.at(&step.path).ok_or(bad.clone())?;
        let mut s = Subst::new();
        if !match_into(l, sub, &mut s) {
            return Err(bad);
        }
        let out = s.apply_closed(r).ok_or(bad)?;
        *target = target.replace(&step.path, out);
    }
    Ok(pair)
}

fn same_equation(a: &(PTerm, PTerm), b: &(PTerm, PTerm)) -> bool {
    let ca = canonical_pair(&a.0, &a.1);
    ca == canonical_pair(&b.0, &b.1) || ca == canonical_pair(&b.1, &b.0)
}

fn is_instance(eq: &(PTerm, PTerm), a: &PTerm, b: &PTerm) -> bool {
    [(a, b), (b, a)].into_iter().any(|(x, y)| {
        let mut s = Subst::new();
        match_into(&eq.0, x, &mut s) && match_into(&eq.1, y, &mut s)
    })
}
