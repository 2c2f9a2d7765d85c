use boolax::enumeration::{enumerate_candidates, CandidateSpec};
use boolax::fixtures::{fixtures, FIXTURE_FILE};
use boolax::pipeline::{classify, run_batch, ClassifyConfig, Verdict};
use boolax::prover::Limits;
use boolax::term::{
    occurrences, parse_formula_file, parse_identity, print_term, write_formula_file, Identity, Symbol, TaggedFormula,
    Term,
};

fn quick_config() -> ClassifyConfig {
    let mut c = ClassifyConfig {
        model_sizes: 3,
        trivial_bound: 3,
        ..ClassifyConfig::default()
    };
    c.strategy.limits = Limits {
        max_processed: 300,
        ..c.strategy.limits
    };
    c
}

#[test]
fn fixtures_round_trip() {
    let fs = fixtures();
    assert_eq!(fs.len(), 11);
    let text = write_formula_file(&fs);
    let (again, errors) = parse_formula_file(&text);
    assert!(errors.is_empty());
    for (f, e) in fs.iter().zip(&again) {
        assert_eq!(f, &e.formula);
        let reparsed = boolax::term::parse_term(&print_term(&f.identity.lhs)).unwrap();
        assert_eq!(reparsed, f.identity.lhs);
        let occ = occurrences(&reparsed);
        let count = |c| occ.get(&Symbol::from_char(c).unwrap()).copied().unwrap_or(0);
        assert_eq!([count('e'), count('x'), count('y'), count('z')], [1, 1, 2, 2], "{}", f.tag);
        assert_eq!(f.identity.rhs, Term::var('x'));
    }
}

#[test]
fn fixture_batch_summary() {
    let r = run_batch(FIXTURE_FILE, &quick_config()).unwrap();
    assert_eq!(r.summary.formulas, 11);
    assert_eq!(r.summary.parity_pass, 11);
    assert_eq!(r.summary.trivializing, 0);
    for c in &r.formulas {
        assert_eq!(c.models.iter().map(|m| m.count).collect::<Vec<_>>(), [1, 1, 0]);
        assert_eq!(c.verdict, Verdict::BooleanTheoremCandidate);
    }
}

/// Odd entries get an extra `y` factor, which breaks parity.
fn mixed_candidates() -> Vec<TaggedFormula> {
    let all = enumerate_candidates(&CandidateSpec::default()).unwrap();
    all.iter()
        .step_by(all.len() / 100)
        .take(100)
        .enumerate()
        .map(|(i, c)| {
            let identity = if i % 2 == 1 {
                Identity::new(Term::product(c.lhs.clone(), Term::var('y')), c.rhs.clone())
            } else {
                c.clone()
            };
            TaggedFormula {
                tag: format!("c{i}"),
                identity,
            }
        })
        .collect()
}

#[test]
fn batch_parity_count_matches_independent_count() {
    let list = mixed_candidates();
    let independent = list
        .iter()
        .filter(|f| {
            let mut occ = occurrences(&f.identity.lhs);
            for (s, n) in occurrences(&f.identity.rhs) {
                *occ.entry(s).or_insert(0) += n;
            }
            occ.iter().all(|(s, n)| *s == Symbol::E || n % 2 == 0)
        })
        .count();
    assert_eq!(independent, 50);
    let r = run_batch(&write_formula_file(&list), &quick_config()).unwrap();
    assert_eq!(r.summary.formulas, 100);
    assert_eq!(r.summary.parity_pass, independent);
    for c in &r.formulas {
        assert!(!(c.parity && c.verdict == Verdict::Trivializing), "{}", c.tag);
        assert!(c.z2_agrees);
    }
}

#[test]
fn worker_count_does_not_change_the_report() {
    let text = write_formula_file(&mixed_candidates()[..24]);
    let reports: Vec<String> = [1, 2, 8]
        .into_iter()
        .map(|workers| {
            let c = ClassifyConfig {
                workers,
                ..quick_config()
            };
            run_batch(&text, &c).unwrap().to_json()
        })
        .collect();
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}

#[test]
fn classify_examples() {
    let f = |tag: &str, s: &str| TaggedFormula {
        tag: tag.into(),
        identity: parse_identity(s).unwrap(),
    };
    let c = classify(&f("80R4u", "((e·xy)·yz)z = x"), &ClassifyConfig::default()).unwrap();
    assert!(c.parity);
    assert_eq!(c.proof.status, "proved");
    assert!(c.models.iter().all(|m| m.all_boolean_groups));
    assert_eq!(c.verdict, Verdict::BooleanTheoremCandidate);

    let c = classify(&f("t", "x = e"), &ClassifyConfig::default()).unwrap();
    assert_eq!(c.verdict, Verdict::Trivializing);

    let c = classify(&f("extra-z", "((e·xy)·yz)z·z = x"), &quick_config()).unwrap();
    assert!(!c.parity);
    assert!(c.trivial.is_some());
}
