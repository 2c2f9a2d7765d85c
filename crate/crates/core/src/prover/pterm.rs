//! First-order terms over one binary product, constants and numbered
//! variables, with substitution, matching and unification.
//!
//! Constant `0` is `e`; higher constants are Skolem constants standing for
//! the variables of a goal.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::term::{Symbol, Term, Var};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum PTerm {
    Var(u32),
    Const(u32),
    App(Arc<AppNode>),
}

#[derive(PartialEq, Eq, Hash)]
pub struct AppNode {
    pub left: PTerm,
    pub right: PTerm,
    size: u32,
}

pub const E: PTerm = PTerm::Const(0);

impl PTerm {
    pub fn app(left: PTerm, right: PTerm) -> PTerm {
        let size = 1 + left.size() + right.size();
        PTerm::App(Arc::new(AppNode { left, right, size }))
    }

    /// Number of symbols.
    pub fn size(&self) -> u32 {
        match self {
            PTerm::App(a) => a.size,
            _ => 1,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, PTerm::Var(_))
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            PTerm::Var(v) => Some(*v),
            PTerm::Const(_) => None,
            PTerm::App(a) => a.left.max_var().max(a.right.max_var()),
        }
    }

    pub fn contains_var(&self, v: u32) -> bool {
        match self {
            PTerm::Var(w) => *w == v,
            PTerm::Const(_) => false,
            PTerm::App(a) => a.left.contains_var(v) || a.right.contains_var(v),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(u32)) {
        match self {
            PTerm::Var(v) => f(*v),
            PTerm::Const(_) => {}
            PTerm::App(a) => {
                a.left.for_each_var(f);
                a.right.for_each_var(f);
            }
        }
    }

    /// True if every variable of `self` occurs in `other`.
    pub fn vars_within(&self, other: &PTerm) -> bool {
        let mut ok = true;
        self.for_each_var(&mut |v| ok &= other.contains_var(v));
        ok
    }

    pub fn shift_vars(&self, by: u32) -> PTerm {
        match self {
            PTerm::Var(v) => PTerm::Var(v + by),
            PTerm::Const(_) => self.clone(),
            PTerm::App(a) => PTerm::app(a.left.shift_vars(by), a.right.shift_vars(by)),
        }
    }

    pub fn at(&self, path: &[u8]) -> Option<&PTerm> {
        let mut t = self;
        for &step in path {
            match t {
                PTerm::App(a) => t = if step == 0 { &a.left } else { &a.right },
                _ => return None,
            }
        }
        Some(t)
    }

    /// Replaces the subterm at `path`.
    pub fn replace(&self, path: &[u8], with: PTerm) -> PTerm {
        match path.split_first() {
            None => with,
            Some((&step, rest)) => match self {
                PTerm::App(a) => {
                    if step == 0 {
                        PTerm::app(a.left.replace(rest, with), a.right.clone())
                    } else {
                        PTerm::app(a.left.clone(), a.right.replace(rest, with))
                    }
                }
                _ => panic!("path leaves the term"),
            },
        }
    }

    /// Paths of all non-variable subterms, preorder.
    pub fn nonvar_positions(&self) -> Vec<Vec<u8>> {
        fn go(t: &PTerm, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            match t {
                PTerm::Var(_) => {}
                PTerm::Const(_) => out.push(path.clone()),
                PTerm::App(a) => {
                    out.push(path.clone());
                    path.push(0);
                    go(&a.left, path, out);
                    path.pop();
                    path.push(1);
                    go(&a.right, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for PTerm {
    /// Fully parenthesized: `X0`, `e`, `c1`, `(s * t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PTerm::Var(v) => write!(f, "X{v}"),
            PTerm::Const(0) => write!(f, "e"),
            PTerm::Const(c) => write!(f, "c{c}"),
            PTerm::App(a) => write!(f, "({} * {})", a.left, a.right),
        }
    }
}

impl fmt::Debug for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("bad term syntax at byte {pos}: {msg}")]
pub struct PTermParseError {
    pub pos: usize,
    pub msg: &'static str,
}

/// Reads the `Display` syntax back.
pub fn parse_pterm(s: &str) -> Result<PTerm, PTermParseError> {
    let bytes = s.as_bytes();
    let mut at = 0;
    let t = parse_at(bytes, &mut at)?;
    skip_ws(bytes, &mut at);
    if at != bytes.len() {
        return Err(PTermParseError {
            pos: at,
            msg: "trailing input",
        });
    }
    Ok(t)
}

fn skip_ws(b: &[u8], at: &mut usize) {
    while *at < b.len() && b[*at].is_ascii_whitespace() {
        *at += 1;
    }
}

fn number(b: &[u8], at: &mut usize) -> Result<u32, PTermParseError> {
    let start = *at;
    while *at < b.len() && b[*at].is_ascii_digit() {
        *at += 1;
    }
    std::str::from_utf8(&b[start..*at])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or(PTermParseError {
            pos: start,
            msg: "expected a number",
        })
}

fn parse_at(b: &[u8], at: &mut usize) -> Result<PTerm, PTermParseError> {
    skip_ws(b, at);
    let err = |pos, msg| Err(PTermParseError { pos, msg });
    match b.get(*at) {
        Some(b'X') => {
            *at += 1;
            Ok(PTerm::Var(number(b, at)?))
        }
        Some(b'c') => {
            *at += 1;
            Ok(PTerm::Const(number(b, at)?))
        }
        Some(b'e') => {
            *at += 1;
            Ok(E)
        }
        Some(b'(') => {
            *at += 1;
            let l = parse_at(b, at)?;
            skip_ws(b, at);
            if b.get(*at) != Some(&b'*') {
                return err(*at, "expected '*'");
            }
            *at += 1;
            let r = parse_at(b, at)?;
            skip_ws(b, at);
            if b.get(*at) != Some(&b')') {
                return err(*at, "expected ')'");
            }
            *at += 1;
            Ok(PTerm::app(l, r))
        }
        _ => err(*at, "expected a term"),
    }
}

/// Variable bindings indexed by variable number.
#[derive(Clone, Default, Debug)]
pub struct Subst {
    bindings: Vec<Option<PTerm>>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn get(&self, v: u32) -> Option<&PTerm> {
        self.bindings.get(v as usize).and_then(Option::as_ref)
    }

    pub fn bind(&mut self, v: u32, t: PTerm) {
        let i = v as usize;
        if self.bindings.len() <= i {
            self.bindings.resize(i + 1, None);
        }
        self.bindings[i] = Some(t);
    }

    pub fn clear(&mut self) {
        self.bindings.clear();
    }

    /// Applies the substitution, following chains of bindings.
    pub fn apply(&self, t: &PTerm) -> PTerm {
        match t {
            PTerm::Var(v) => match self.get(*v) {
                Some(b) => self.apply(b),
                None => t.clone(),
            },
            PTerm::Const(_) => t.clone(),
            PTerm::App(a) => PTerm::app(self.apply(&a.left), self.apply(&a.right)),
        }
    }

    /// Applies the substitution; `None` if some variable is unbound.
    pub fn apply_closed(&self, t: &PTerm) -> Option<PTerm> {
        match t {
            PTerm::Var(v) => self.get(*v).cloned(),
            PTerm::Const(_) => Some(t.clone()),
            PTerm::App(a) => Some(PTerm::app(
                self.apply_closed(&a.left)?,
                self.apply_closed(&a.right)?,
            )),
        }
    }

    fn resolve<'a>(&'a self, mut t: &'a PTerm) -> &'a PTerm {
        while let PTerm::Var(v) = t {
            match self.get(*v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &PTerm) -> bool {
        match self.resolve(t) {
            PTerm::Var(w) => *w == v,
            PTerm::Const(_) => false,
            PTerm::App(a) => self.occurs(v, &a.left) || self.occurs(v, &a.right),
        }
    }
}

/// One-way matching: extends `subst` so that `subst(pattern) == target`.
/// Variables of `target` are treated as constants.
pub fn match_into(pattern: &PTerm, target: &PTerm, subst: &mut Subst) -> bool {
    match (pattern, target) {
        (PTerm::Var(v), _) => match subst.get(*v) {
            Some(b) => b == target,
            None => {
                subst.bind(*v, target.clone());
                true
            }
        },
        (PTerm::Const(a), PTerm::Const(b)) => a == b,
        (PTerm::App(p), PTerm::App(t)) => {
            p.size <= t.size
                && match_into(&p.left, &t.left, subst)
                && match_into(&p.right, &t.right, subst)
        }
        _ => false,
    }
}

pub fn matches(pattern: &PTerm, target: &PTerm) -> Option<Subst> {
    let mut s = Subst::new();
    match_into(pattern, target, &mut s).then_some(s)
}

/// Syntactic unification with occurs check. The result is triangular;
/// use [`Subst::apply`] to read it.
pub fn unify_into(a: &PTerm, b: &PTerm, subst: &mut Subst) -> bool {
    let a = subst.resolve(a).clone();
    let b = subst.resolve(b).clone();
    match (&a, &b) {
        (PTerm::Var(x), PTerm::Var(y)) if x == y => true,
        (PTerm::Var(x), t) | (t, PTerm::Var(x)) => {
            if subst.occurs(*x, t) {
                false
            } else {
                subst.bind(*x, t.clone());
                true
            }
        }
        (PTerm::Const(x), PTerm::Const(y)) => x == y,
        (PTerm::App(p), PTerm::App(q)) => {
            unify_into(&p.left, &q.left, subst) && unify_into(&p.right, &q.right, subst)
        }
        _ => false,
    }
}

pub fn unify(a: &PTerm, b: &PTerm) -> Option<Subst> {
    let mut s = Subst::new();
    unify_into(a, b, &mut s).then_some(s)
}

/// Renames variables to `0, 1, ...` in order of first occurrence across
/// both terms.
pub fn canonical_pair(a: &PTerm, b: &PTerm) -> (PTerm, PTerm) {
    let mut map: Vec<(u32, u32)> = Vec::new();
    fn go(t: &PTerm, map: &mut Vec<(u32, u32)>) -> PTerm {
        match t {
            PTerm::Var(v) => {
                let next = map.len() as u32;
                let to = match map.iter().find(|(from, _)| from == v) {
                    Some((_, to)) => *to,
                    None => {
                        map.push((*v, next));
                        next
                    }
                };
                PTerm::Var(to)
            }
            PTerm::Const(_) => t.clone(),
            PTerm::App(n) => {
                let l = go(&n.left, map);
                let r = go(&n.right, map);
                PTerm::app(l, r)
            }
        }
    }
    let a = go(a, &mut map);
    let b = go(b, &mut map);
    (a, b)
}

/// Variables become `Var(i)` with `i` the index in `vars`.
pub fn from_term(t: &Term, vars: &[Var]) -> PTerm {
    match t {
        Term::Const => E,
        Term::Var(v) => {
            PTerm::Var(vars.iter().position(|w| w == v).expect("variable listed") as u32)
        }
        Term::Product(l, r) => PTerm::app(from_term(l, vars), from_term(r, vars)),
    }
}

/// Variables become Skolem constants `Const(1 + i)` with `i` the index in
/// `vars`.
pub fn skolemize(t: &Term, vars: &[Var]) -> PTerm {
    match t {
        Term::Const => E,
        Term::Var(v) => {
            PTerm::Const(1 + vars.iter().position(|w| w == v).expect("variable listed") as u32)
        }
        Term::Product(l, r) => PTerm::app(skolemize(l, vars), skolemize(r, vars)),
    }
}

/// Letters used when printing prover terms in infix notation.
const LETTERS: &[u8] = b"xyzuvwabcdfghijklmnopqrst";

/// Back to the infix notation, variables named `x, y, z, u, ...` by
/// number. `None` if there are Skolem constants or too many variables.
pub fn to_term(t: &PTerm) -> Option<Term> {
    Some(match t {
        PTerm::Var(v) => Term::Var(Var::new(*LETTERS.get(*v as usize)? as char)?),
        PTerm::Const(0) => Term::Const,
        PTerm::Const(_) => return None,
        PTerm::App(a) => Term::product(to_term(&a.left)?, to_term(&a.right)?),
    })
}

/// Like [`to_term`] but Skolem constant `1 + i` prints as `vars[i]`.
pub fn unskolemize(t: &PTerm, vars: &[Var]) -> Option<Term> {
    Some(match t {
        PTerm::Var(_) => return None,
        PTerm::Const(0) => Term::Const,
        PTerm::Const(c) => Term::leaf(Symbol::Var(*vars.get(*c as usize - 1)?)),
        PTerm::App(a) => Term::product(unskolemize(&a.left, vars)?, unskolemize(&a.right, vars)?),
    })
}
