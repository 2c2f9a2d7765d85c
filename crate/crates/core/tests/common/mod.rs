//! Reference implementations used as test oracles. They are written
//! independently of the library's search and enumeration code.

#![allow(dead_code)]

use boolax::term::{Identity, Symbol, Term, Var};
use rand::Rng;

/// `C(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> u64 {
    let mut c = 1u64;
    for i in 0..k {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Every term with exactly `leaves` leaves drawn from `symbols`.
pub fn all_terms(leaves: usize, symbols: &[Symbol]) -> Vec<Term> {
    if leaves == 1 {
        return symbols.iter().map(|s| Term::leaf(*s)).collect();
    }
    let mut out = Vec::new();
    for left in 1..leaves {
        let ls = all_terms(left, symbols);
        let rs = all_terms(leaves - left, symbols);
        for l in &ls {
            for r in &rs {
                out.push(Term::product(l.clone(), r.clone()));
            }
        }
    }
    out
}

pub fn symbols(names: &str) -> Vec<Symbol> {
    names
        .chars()
        .map(|c| Symbol::from_char(c).unwrap())
        .collect()
}

pub fn random_term(rng: &mut impl Rng, leaves: usize, symbols: &[Symbol]) -> Term {
    if leaves == 1 {
        return Term::leaf(symbols[rng.gen_range(0..symbols.len())]);
    }
    let left = rng.gen_range(1..leaves);
    Term::product(
        random_term(rng, left, symbols),
        random_term(rng, leaves - left, symbols),
    )
}

fn eval(t: &Term, n: usize, cells: &[usize], assign: &[(Var, usize)]) -> usize {
    match t {
        Term::Const => 0,
        Term::Var(v) => assign.iter().find(|(w, _)| w == v).unwrap().1,
        Term::Product(l, r) => cells[eval(l, n, cells, assign) * n + eval(r, n, cells, assign)],
    }
}

fn holds(id: &Identity, n: usize, cells: &[usize]) -> bool {
    let vars = id.variables();
    let mut values = vec![0usize; vars.len()];
    loop {
        let assign: Vec<(Var, usize)> = vars.iter().copied().zip(values.iter().copied()).collect();
        if eval(&id.lhs, n, cells, &assign) != eval(&id.rhs, n, cells, &assign) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == values.len() {
                return true;
            }
            values[i] += 1;
            if values[i] < n {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

/// All `n^(n²)` tables (row-major cells, `e` read as element 0) that
/// satisfy every identity.
pub fn naive_models(ids: &[Identity], n: usize) -> Vec<Vec<usize>> {
    let mut cells = vec![0usize; n * n];
    let mut out = Vec::new();
    loop {
        if ids.iter().all(|id| holds(id, n, &cells)) {
            out.push(cells.clone());
        }
        let mut i = 0;
        loop {
            if i == cells.len() {
                return out;
            }
            cells[i] += 1;
            if cells[i] < n {
                break;
            }
            cells[i] = 0;
            i += 1;
        }
    }
}

pub fn table_cells(t: &boolax::models::CayleyTable) -> Vec<usize> {
    t.rows().concat()
}
