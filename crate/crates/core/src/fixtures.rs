//! The eleven tagged formulas, in the file format.
//!
//! Tags are page, column and position coordinates; `u`/`d` stand for the
//! up/down arrows. The first eight are listed as single axioms, the last
//! three as axioms for finite models only.

use crate::term::{parse_formula_file, TaggedFormula};

pub const FIXTURE_FILE: &str = "\
# listed as single axioms
80R4u: ((e·xy)·yz)z = x
81R1d: e((x·yz)y·z) = x
81L2d: e(xy·z)·yz = x
81R2d: ((e·xy)·zy)z = x
81L3d: (e(x·yz)·y)z = x
81R3d: e((x·yz)z·y) = x
81M2d: e(xy·zy)·z = x
81R3u: e((xy·z)·yz) = x
# listed as axioms for finite models only
81L2: (ex·yz)y·z = x
81M2: (ex·y)z·yz = x
81R1: (ex·yz)z·y = x
";

/// Tags of the formulas listed as axioms for finite models only.
pub const FINITE_ONLY: [&str; 3] = ["81L2", "81M2", "81R1"];

pub fn fixtures() -> Vec<TaggedFormula> {
    let (entries, errors) = parse_formula_file(FIXTURE_FILE);
    assert!(
        errors.is_empty(),
        "embedded fixtures must parse: {errors:?}"
    );
    entries.into_iter().map(|e| e.formula).collect()
}

pub fn fixture(tag: &str) -> Option<TaggedFormula> {
    fixtures().into_iter().find(|f| f.tag == tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{occurrences, parse_term, print_term, Term};
    use std::collections::BTreeMap;

    #[test]
    fn eleven_with_the_candidate_shape() {
        let fs = fixtures();
        assert_eq!(fs.len(), 11);
        let want_lhs: BTreeMap<_, _> = occurrences(&parse_term("exyyzz").unwrap());
        for f in &fs {
            assert_eq!(occurrences(&f.identity.lhs), want_lhs, "{}", f.tag);
            assert_eq!(f.identity.rhs, Term::var('x'), "{}", f.tag);
            let again = parse_term(&print_term(&f.identity.lhs)).unwrap();
            assert_eq!(again, f.identity.lhs);
        }
        for tag in FINITE_ONLY {
            assert!(fixture(tag).is_some());
        }
    }
}
