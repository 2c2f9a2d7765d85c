//! Theoremhood in the variety of Boolean groups.
//!
//! Two independent routes: counting variable occurrences, and evaluating
//! both sides in the two-element group `({0,1}, xor, 0)`, which generates
//! the variety.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::term::{occurrences, Identity, Symbol, Term, Var};

/// Upper bound on distinct variables for the exhaustive Z₂ check.
pub const Z2_MAX_VARS: usize = 20;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DecisionError {
    #[error("identity has {0} distinct variables, the Z2 check handles at most {Z2_MAX_VARS}")]
    TooManyVariables(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecisionResult {
    pub is_theorem: bool,
    /// A falsifying assignment into `{0,1}`; present iff `!is_theorem`.
    pub witness: Option<BTreeMap<Var, u8>>,
}

/// True iff every variable occurs an even number of times across both
/// sides. `e` does not count.
pub fn parity_decide(id: &Identity) -> bool {
    let mut counts = occurrences(&id.lhs);
    for (s, n) in occurrences(&id.rhs) {
        *counts.entry(s).or_insert(0) += n;
    }
    counts
        .iter()
        .all(|(s, n)| matches!(s, Symbol::E) || n % 2 == 0)
}

/// Value of `t` in Z₂ with `e ↦ 0`; variable `vars[i]` takes bit `i` of
/// `assignment`.
pub fn eval_z2(t: &Term, vars: &[Var], assignment: u32) -> u8 {
    match t {
        Term::Const => 0,
        Term::Var(v) => {
            let i = vars
                .iter()
                .position(|w| w == v)
                .expect("unassigned variable");
            ((assignment >> i) & 1) as u8
        }
        Term::Product(l, r) => eval_z2(l, vars, assignment) ^ eval_z2(r, vars, assignment),
    }
}

/// Exhaustive check over all `2^k` assignments, in increasing binary
/// order with the alphabetically first variable as the low bit. The first
/// disagreeing assignment is returned as the witness.
pub fn z2_decide(id: &Identity) -> Result<DecisionResult, DecisionError> {
    let vars = id.variables();
    if vars.len() > Z2_MAX_VARS {
        return Err(DecisionError::TooManyVariables(vars.len()));
    }
    for a in 0..(1u32 << vars.len()) {
        if eval_z2(&id.lhs, &vars, a) != eval_z2(&id.rhs, &vars, a) {
            let witness = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (*v, ((a >> i) & 1) as u8))
                .collect();
            return Ok(DecisionResult {
                is_theorem: false,
                witness: Some(witness),
            });
        }
    }
    Ok(DecisionResult {
        is_theorem: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_identity;

    fn id(s: &str) -> Identity {
        parse_identity(s).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert!(parity_decide(&id("((e·xy)·yz)z = x")));
        assert!(parity_decide(&id("(ex·yz)z·y = x")));
        assert!(parity_decide(&id("x·y = y·x")));
        assert!(!parity_decide(&id("x·y = x")));
        assert!(parity_decide(&id("x·e = x")));
        assert!(parity_decide(&id("e = e")));
        assert!(!parity_decide(&id("x = e")));
    }

    #[test]
    fn z2_examples() {
        assert!(z2_decide(&id("((e·xy)·yz)z = x")).unwrap().is_theorem);
        assert!(z2_decide(&id("e = e")).unwrap().is_theorem);
        let r = z2_decide(&id("x·y = x")).unwrap();
        assert!(!r.is_theorem);
        let x = Var::new('x').unwrap();
        let y = Var::new('y').unwrap();
        assert_eq!(r.witness, Some(BTreeMap::from([(x, 0), (y, 1)])));
    }

    #[test]
    fn variable_bound() {
        let letters: Vec<char> = ('a'..='z').filter(|&c| c != 'e').take(21).collect();
        let lhs: String = letters.iter().collect();
        let r = z2_decide(&id(&format!("{lhs} = {lhs}")));
        assert_eq!(r, Err(DecisionError::TooManyVariables(21)));
    }

    #[test]
    fn witness_falsifies() {
        for s in ["x·y = x", "x = e", "xyz = zy", "e(xy) = y·x·x"] {
            let ident = id(s);
            let r = z2_decide(&ident).unwrap();
            let w = r.witness.expect("not a theorem");
            let vars = ident.variables();
            let a = vars
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, v)| acc | (u32::from(w[v]) << i));
            assert_ne!(eval_z2(&ident.lhs, &vars, a), eval_z2(&ident.rhs, &vars, a));
        }
    }
}
