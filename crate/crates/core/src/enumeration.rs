//! Candidate single axioms `T = x` of a prescribed leaf multiset, and
//! their quotient under explicit symmetry conventions.
//!
//! Orbit minima use the term order of [`Term`]: leaf sequence first, then
//! preorder shape code. Identities compare left side first.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::term::{mirror, Identity, Symbol, Term, Var};

pub const MAX_SHAPE_LEAVES: usize = 12;

/// Count the published candidate list is said to have.
pub const REFERENCE_CANDIDATE_COUNT: usize = 1323;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EnumerationError {
    #[error("shape enumeration is limited to 1..={MAX_SHAPE_LEAVES} leaves, got {0}")]
    LeafBound(usize),
    #[error("right-hand variable {0} must occur exactly once in the leaf multiset")]
    RhsNotUnique(Var),
}

/// Full binary tree without labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaf_count(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Fills the leaves left to right from `labels`.
    pub fn label(&self, labels: &[Symbol]) -> Term {
        let mut it = labels.iter();
        let t = self.label_from(&mut it);
        debug_assert!(it.next().is_none());
        t
    }

    fn label_from<'a>(&self, it: &mut impl Iterator<Item = &'a Symbol>) -> Term {
        match self {
            Shape::Leaf => Term::leaf(*it.next().expect("too few labels")),
            Shape::Node(l, r) => {
                let l = l.label_from(it);
                let r = r.label_from(it);
                Term::product(l, r)
            }
        }
    }
}

/// All shapes with `n_leaves` leaves. Ordered by the size of the left
/// subtree, then recursively.
pub fn enumerate_shapes(n_leaves: usize) -> Result<Vec<Shape>, EnumerationError> {
    if n_leaves == 0 || n_leaves > MAX_SHAPE_LEAVES {
        return Err(EnumerationError::LeafBound(n_leaves));
    }
    let mut table: Vec<Vec<Shape>> = vec![Vec::new(), vec![Shape::Leaf]];
    for n in 2..=n_leaves {
        let mut here = Vec::new();
        for left in 1..n {
            for l in &table[left] {
                for r in &table[n - left] {
                    here.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        table.push(here);
    }
    Ok(table.swap_remove(n_leaves))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CandidateSpec {
    pub leaves: BTreeMap<Symbol, usize>,
    pub rhs: Var,
}

impl Default for CandidateSpec {
    /// One `x`, one `e`, two `y`, two `z`; right side `x`.
    fn default() -> Self {
        let v = |c| Symbol::Var(Var::new(c).unwrap());
        CandidateSpec {
            leaves: BTreeMap::from([(Symbol::E, 1), (v('x'), 1), (v('y'), 2), (v('z'), 2)]),
            rhs: Var::new('x').unwrap(),
        }
    }
}

impl CandidateSpec {
    pub fn validate(&self) -> Result<(), EnumerationError> {
        if self.leaves.get(&Symbol::Var(self.rhs)).copied() != Some(1) {
            return Err(EnumerationError::RhsNotUnique(self.rhs));
        }
        let n = self.leaf_count();
        if n == 0 || n > MAX_SHAPE_LEAVES {
            return Err(EnumerationError::LeafBound(n));
        }
        Ok(())
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.values().sum()
    }
}

/// Distinct arrangements of a multiset in lexicographic order.
pub fn multiset_permutations(items: &BTreeMap<Symbol, usize>) -> Vec<Vec<Symbol>> {
    fn go(
        remaining: &mut Vec<(Symbol, usize)>,
        prefix: &mut Vec<Symbol>,
        total: usize,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if prefix.len() == total {
            out.push(prefix.clone());
            return;
        }
        for i in 0..remaining.len() {
            if remaining[i].1 == 0 {
                continue;
            }
            remaining[i].1 -= 1;
            prefix.push(remaining[i].0);
            go(remaining, prefix, total, out);
            prefix.pop();
            remaining[i].1 += 1;
        }
    }
    let mut remaining: Vec<(Symbol, usize)> = items.iter().map(|(s, n)| (*s, *n)).collect();
    let total = remaining.iter().map(|(_, n)| n).sum();
    let mut out = Vec::new();
    go(
        &mut remaining,
        &mut Vec::with_capacity(total),
        total,
        &mut out,
    );
    out
}

/// Every `T = rhs` with `T` a labeling of a shape by the multiset. Shapes
/// vary slowest.
pub fn enumerate_candidates(spec: &CandidateSpec) -> Result<Vec<Identity>, EnumerationError> {
    spec.validate()?;
    let shapes = enumerate_shapes(spec.leaf_count())?;
    let labelings = multiset_permutations(&spec.leaves);
    let rhs = Term::Var(spec.rhs);
    let mut out = Vec::with_capacity(shapes.len() * labelings.len());
    for shape in &shapes {
        for labels in &labelings {
            out.push(Identity::new(shape.label(labels), rhs.clone()));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct SymmetryConvention {
    /// Reverse every product (both sides; the right side of a candidate is
    /// a single variable, so only the left side changes).
    pub mirror: bool,
    /// Rename `y ↔ z`.
    pub variable_swap: bool,
}

impl SymmetryConvention {
    pub const NONE: SymmetryConvention = SymmetryConvention {
        mirror: false,
        variable_swap: false,
    };
    pub const BOTH: SymmetryConvention = SymmetryConvention {
        mirror: true,
        variable_swap: true,
    };

    pub fn group_order(self) -> usize {
        (1 + usize::from(self.mirror)) * (1 + usize::from(self.variable_swap))
    }

    pub fn label(self) -> &'static str {
        match (self.mirror, self.variable_swap) {
            (false, false) => "none",
            (true, false) => "mirror",
            (false, true) => "swap",
            (true, true) => "mirror+swap",
        }
    }

    pub fn all() -> [SymmetryConvention; 4] {
        [
            SymmetryConvention::NONE,
            SymmetryConvention {
                mirror: true,
                variable_swap: false,
            },
            SymmetryConvention {
                mirror: false,
                variable_swap: true,
            },
            SymmetryConvention::BOTH,
        ]
    }
}

pub fn swap_yz(id: &Identity) -> Identity {
    let y = Var::new('y').unwrap();
    let z = Var::new('z').unwrap();
    id.relabel(&|s| match s {
        Symbol::Var(v) if v == y => Symbol::Var(z),
        Symbol::Var(v) if v == z => Symbol::Var(y),
        other => other,
    })
}

pub fn mirror_identity(id: &Identity) -> Identity {
    Identity::new(mirror(&id.lhs), mirror(&id.rhs))
}

/// Orbit of `id` under the group generated by the enabled symmetries.
pub fn orbit(id: &Identity, conv: SymmetryConvention) -> Vec<Identity> {
    let mut out = vec![id.clone()];
    if conv.mirror {
        out.push(mirror_identity(id));
    }
    if conv.variable_swap {
        let swapped: Vec<Identity> = out.iter().map(swap_yz).collect();
        out.extend(swapped);
    }
    out
}

pub fn canonicalize(id: &Identity, conv: SymmetryConvention) -> Identity {
    orbit(id, conv)
        .into_iter()
        .min()
        .expect("orbit contains id")
}

pub fn count_candidates(
    spec: &CandidateSpec,
    conv: SymmetryConvention,
) -> Result<usize, EnumerationError> {
    Ok(canonical_candidates(spec, conv)?.len())
}

/// Canonical representatives, sorted.
pub fn canonical_candidates(
    spec: &CandidateSpec,
    conv: SymmetryConvention,
) -> Result<Vec<Identity>, EnumerationError> {
    let set: BTreeSet<Identity> = enumerate_candidates(spec)?
        .iter()
        .map(|id| canonicalize(id, conv))
        .collect();
    Ok(set.into_iter().collect())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountReport {
    pub leaf_count: usize,
    pub shapes: usize,
    pub labelings: usize,
    pub counts: Vec<(SymmetryConvention, usize)>,
    pub reference: usize,
}

impl CountReport {
    pub fn matches_reference(&self) -> Option<SymmetryConvention> {
        self.counts
            .iter()
            .find(|(_, n)| *n == self.reference)
            .map(|(c, _)| *c)
    }

    /// Lines in the formula file comment style.
    pub fn render(&self) -> String {
        let mut s = format!(
            "# leaves: {}  shapes: {}  labelings per shape: {}\n",
            self.leaf_count, self.shapes, self.labelings
        );
        for (conv, n) in &self.counts {
            s.push_str(&format!("# candidates under {:<12} {}\n", conv.label(), n));
        }
        s.push_str(&format!("# reference count: {}\n", self.reference));
        match self.matches_reference() {
            Some(c) => s.push_str(&format!(
                "# reference reproduced by convention {}\n",
                c.label()
            )),
            None => s.push_str("# reference count not reproduced by any convention tried\n"),
        }
        s
    }
}

pub fn count_report(spec: &CandidateSpec) -> Result<CountReport, EnumerationError> {
    spec.validate()?;
    let counts = SymmetryConvention::all()
        .into_iter()
        .map(|c| count_candidates(spec, c).map(|n| (c, n)))
        .collect::<Result<_, _>>()?;
    Ok(CountReport {
        leaf_count: spec.leaf_count(),
        shapes: enumerate_shapes(spec.leaf_count())?.len(),
        labelings: multiset_permutations(&spec.leaves).len(),
        counts,
        reference: REFERENCE_CANDIDATE_COUNT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_identity;

    #[test]
    fn small_shape_counts() {
        assert_eq!(enumerate_shapes(1).unwrap().len(), 1);
        assert_eq!(enumerate_shapes(3).unwrap().len(), 2);
        assert_eq!(enumerate_shapes(6).unwrap().len(), 42);
        assert_eq!(enumerate_shapes(0), Err(EnumerationError::LeafBound(0)));
        assert_eq!(enumerate_shapes(13), Err(EnumerationError::LeafBound(13)));
    }

    #[test]
    fn single_leaf_spec() {
        let spec = CandidateSpec {
            leaves: BTreeMap::from([(Symbol::Var(Var::new('x').unwrap()), 1)]),
            rhs: Var::new('x').unwrap(),
        };
        let ids = enumerate_candidates(&spec).unwrap();
        assert_eq!(ids, vec![parse_identity("x = x").unwrap()]);
    }

    #[test]
    fn rhs_must_be_unique() {
        let spec = CandidateSpec {
            rhs: Var::new('y').unwrap(),
            ..CandidateSpec::default()
        };
        assert!(matches!(
            enumerate_candidates(&spec),
            Err(EnumerationError::RhsNotUnique(_))
        ));
    }

    #[test]
    fn default_spec_contains_first_fixture() {
        let ids = enumerate_candidates(&CandidateSpec::default()).unwrap();
        assert_eq!(ids.len(), 7560);
        assert!(ids.contains(&parse_identity("((e·xy)·yz)z = x").unwrap()));
    }

    #[test]
    fn canonical_forms() {
        let id = parse_identity("((e·xy)·yz)z = x").unwrap();
        assert_eq!(canonicalize(&id, SymmetryConvention::NONE), id);
        let c = canonicalize(&id, SymmetryConvention::BOTH);
        assert_eq!(canonicalize(&c, SymmetryConvention::BOTH), c);
        assert!(orbit(&id, SymmetryConvention::BOTH).contains(&c));
        assert_eq!(orbit(&id, SymmetryConvention::BOTH).len(), 4);
    }

    #[test]
    fn report_mentions_reference() {
        let r = count_report(&CandidateSpec::default()).unwrap();
        assert_eq!(r.counts[0].1, 7560);
        assert_eq!(r.counts[3].1, 1890);
        assert_eq!(r.matches_reference(), None);
        assert!(r.render().contains("1323"));
    }
}
