mod common;

use std::collections::HashMap;

use boolax::decision::{parity_decide, z2_decide};
use boolax::prover::pterm::{from_term, skolemize, PTerm, Subst};
use boolax::prover::{complete, normalize, ProofStatus, RewriteSystem, Strategy, TermOrdering};
use boolax::term::{
    mirror, occurrences, parse_identity, parse_term, print_term, print_term_ascii, Identity,
    Symbol, Term,
};
use common::{all_terms, random_term, symbols};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn term_from_seed(seed: u64, max_leaves: usize, names: &str) -> Term {
    let mut rng = StdRng::seed_from_u64(seed);
    let leaves = rng.gen_range(1..=max_leaves);
    random_term(&mut rng, leaves, &symbols(names))
}

proptest! {
    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let t = term_from_seed(seed, 12, "exyzuv");
        prop_assert_eq!(parse_term(&print_term(&t)).unwrap(), t.clone());
        prop_assert_eq!(parse_term(&print_term_ascii(&t)).unwrap(), t);
    }

    #[test]
    fn mirror_is_an_involution_preserving_occurrences(seed in any::<u64>()) {
        let t = term_from_seed(seed, 12, "exyz");
        prop_assert_eq!(mirror(&mirror(&t)), t.clone());
        prop_assert_eq!(occurrences(&mirror(&t)), occurrences(&t));
    }

    #[test]
    fn parity_matches_z2_on_random_identities(a in any::<u64>(), b in any::<u64>()) {
        let id = Identity::new(term_from_seed(a, 8, "exyzu"), term_from_seed(b, 8, "exyzu"));
        prop_assert_eq!(parity_decide(&id), z2_decide(&id).unwrap().is_theorem);
    }
}

fn random_pterm(rng: &mut StdRng, depth: u32) -> PTerm {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            PTerm::Var(rng.gen_range(0..3))
        } else {
            PTerm::Const(rng.gen_range(0..3))
        };
    }
    PTerm::app(random_pterm(rng, depth - 1), random_pterm(rng, depth - 1))
}

#[test]
fn orderings_are_reduction_orderings() {
    let mut rng = StdRng::seed_from_u64(7);
    for ord in [TermOrdering::KBO, TermOrdering::LPO] {
        let mut comparable = 0;
        for _ in 0..20_000 {
            let s = random_pterm(&mut rng, 4);
            let t = random_pterm(&mut rng, 4);
            let u = random_pterm(&mut rng, 4);
            assert!(!ord.greater(&s, &s));
            if ord.greater(&s, &t) {
                comparable += 1;
                assert!(!ord.greater(&t, &s), "{s} > {t} both ways");
                if ord.greater(&t, &u) {
                    assert!(ord.greater(&s, &u), "transitivity {s} {t} {u}");
                }
                let ctx_left = PTerm::app(u.clone(), s.clone());
                assert!(ord.greater(&ctx_left, &PTerm::app(u.clone(), t.clone())));
                assert!(ord.greater(
                    &PTerm::app(s.clone(), u.clone()),
                    &PTerm::app(t.clone(), u.clone())
                ));
                let mut sigma = Subst::new();
                for v in 0..3 {
                    sigma.bind(v, random_pterm(&mut rng, 2).shift_vars(10));
                }
                assert!(
                    ord.greater(&sigma.apply(&s), &sigma.apply(&t)),
                    "stability {s} {t}"
                );
            }
            if s.size() > 1 {
                // Subterm property.
                if let PTerm::App(a) = &s {
                    assert!(ord.greater(&s, &a.left) && ord.greater(&s, &a.right));
                }
            }
        }
        assert!(comparable > 1000);
    }
}

/// A bounded completion run of the Boolean-group axioms. It does not
/// saturate, but the rules it contains already decide ground identities.
fn boolean_group_system() -> RewriteSystem {
    let axioms: Vec<Identity> = ["(x·y)·z = x·(y·z)", "e·x = x", "x·x = e"]
        .iter()
        .map(|s| parse_identity(s).unwrap())
        .collect();
    let mut strategy = Strategy::default();
    strategy.limits.max_processed = 2000;
    let out = complete(&axioms, &strategy);
    assert!(matches!(out.status, ProofStatus::ResourceOut(_)));
    out.system
}

#[test]
fn normalization_is_idempotent() {
    let system = boolean_group_system();
    let mut rng = StdRng::seed_from_u64(11);
    let syms = symbols("exyzu");
    let vars = boolax::term::parse_term("xyzu").unwrap().variables();
    for _ in 0..500 {
        let leaves = rng.gen_range(1..=14);
        let t = random_term(&mut rng, leaves, &syms);
        for p in [from_term(&t, &vars), skolemize(&t, &vars)] {
            let n = system.normalize(&p);
            assert_eq!(normalize(&n, &system.rules, &system.ordering), n);
        }
    }
}

/// Two ground terms have the same normal form exactly when every
/// variable occurs with the same parity in both, which is what the
/// parity criterion says about the identity between them.
#[test]
fn normal_forms_agree_with_parity() {
    let system = boolean_group_system();
    let syms = symbols("xyze");
    let vars = boolax::term::parse_term("xyz").unwrap().variables();
    let mut by_form: HashMap<PTerm, (Term, [bool; 3])> = HashMap::new();
    let mut by_parity: HashMap<[bool; 3], PTerm> = HashMap::new();
    let mut checked = 0;
    for leaves in 1..=6 {
        for t in all_terms(leaves, &syms) {
            let occ = occurrences(&t);
            let odd: [bool; 3] = std::array::from_fn(|i| {
                occ.get(&Symbol::Var(vars[i])).copied().unwrap_or(0) % 2 == 1
            });
            let nf = system.normalize(&skolemize(&t, &vars));
            if let Some((other, p)) = by_form.get(&nf) {
                assert_eq!(*p, odd, "{other} and {t} share a normal form");
                assert!(parity_decide(&Identity::new(other.clone(), t.clone())));
            } else {
                by_form.insert(nf.clone(), (t.clone(), odd));
            }
            let first = by_parity.entry(odd).or_insert(nf.clone());
            assert_eq!(
                *first, nf,
                "{t} has a second normal form for its parity class"
            );
            checked += 1;
        }
    }
    assert_eq!(by_form.len(), 8);
    assert_eq!(checked, 187_796);
}

#[test]
fn catalan_oracle() {
    let shapes: Vec<usize> = (1..=9)
        .map(|n| boolax::enumeration::enumerate_shapes(n).unwrap().len())
        .collect();
    let closed: Vec<usize> = (0..9).map(|k| common::catalan(k) as usize).collect();
    assert_eq!(shapes, closed);
    assert_eq!(common::catalan(5), 42);
}
