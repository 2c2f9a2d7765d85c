mod common;

use boolax::decision::parity_decide;
use boolax::models::{
    find_models, is_boolean_group, is_trivializing, satisfies, CayleyTable, ModelQuery, SearchMode, TrivialVerdict,
};
use boolax::term::{parse_identity, Identity};
use common::{all_terms, naive_models, random_term, symbols, table_cells};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn id(s: &str) -> Identity {
    parse_identity(s).unwrap()
}

#[test]
fn fixed_examples() {
    let a = id("((e·xy)·yz)z = x");
    let at = |n| find_models(&ModelQuery::new(vec![a.clone()], n, SearchMode::FindAll)).unwrap();
    assert_eq!(at(2).tables, vec![CayleyTable::xor()]);
    assert_eq!(at(3).count, 0);
    assert_eq!(at(4).tables, vec![CayleyTable::klein()]);
    let none = find_models(&ModelQuery::new(vec![id("x = e")], 2, SearchMode::Count)).unwrap();
    assert_eq!(none.count, 0);
    assert!(satisfies(&CayleyTable::xor(), &a));
    assert!(!satisfies(&CayleyTable::xor(), &id("x·y = x")));
    assert!(!is_boolean_group(&CayleyTable::cyclic(3)));
    assert!(is_boolean_group(&CayleyTable::klein()));
}

#[test]
fn random_identities_match_naive_enumeration() {
    let mut rng = StdRng::seed_from_u64(3);
    let syms = symbols("exyz");
    for _ in 0..40 {
        let l = rng.gen_range(1..=5);
        let r = rng.gen_range(1..=3);
        let ident = Identity::new(random_term(&mut rng, l, &syms), random_term(&mut rng, r, &syms));
        for n in 1..=2 {
            let got: Vec<Vec<usize>> = find_models(&ModelQuery::new(vec![ident.clone()], n, SearchMode::FindAll))
                .unwrap()
                .tables
                .iter()
                .map(table_cells)
                .collect();
            let mut sorted = got.clone();
            sorted.sort();
            let mut want = naive_models(std::slice::from_ref(&ident), n);
            want.sort();
            assert_eq!(sorted, want, "{ident} at n={n}");
        }
    }
}

#[test]
fn returned_tables_satisfy_the_query() {
    let mut rng = StdRng::seed_from_u64(5);
    let syms = symbols("exyz");
    for _ in 0..30 {
        let ident = Identity::new(random_term(&mut rng, 4, &syms), random_term(&mut rng, 2, &syms));
        for n in 3..=4 {
            let mut q = ModelQuery::new(vec![ident.clone()], n, SearchMode::FindAll);
            q.limit = Some(200);
            for t in find_models(&q).unwrap().tables {
                assert!(satisfies(&t, &ident), "{ident}\n{t}");
            }
        }
    }
}

#[test]
fn parity_failures_never_have_the_xor_model() {
    let syms = symbols("exy");
    let mut checked = 0;
    for total in 2..=5 {
        for left in 1..total {
            for l in all_terms(left, &syms) {
                for r in all_terms(total - left, &syms) {
                    let ident = Identity::new(l.clone(), r);
                    if parity_decide(&ident) {
                        continue;
                    }
                    let set = find_models(&ModelQuery::new(vec![ident.clone()], 2, SearchMode::FindAll)).unwrap();
                    assert!(!set.tables.contains(&CayleyTable::xor()), "{ident}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn trivializing_examples() {
    assert_eq!(is_trivializing(&id("x = e"), 6), Ok(TrivialVerdict::TrivialUpTo(6)));
    assert_eq!(is_trivializing(&id("x·y = z"), 6), Ok(TrivialVerdict::TrivialUpTo(6)));
    match is_trivializing(&id("x·y = x"), 6) {
        Ok(TrivialVerdict::NontrivialModel(t)) => {
            assert_eq!(t.size(), 2);
            assert!(satisfies(&t, &id("x·y = x")));
        }
        other => panic!("{other:?}"),
    }
    assert!(is_trivializing(&id("x = e"), 7).is_err());
}
