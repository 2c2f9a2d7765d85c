//! Terms over the language `{·, e}`, identities between them, and the
//! infix notation used to write them down.
//!
//! The grammar (whitespace is insignificant except as juxtaposition):
//!
//! ```text
//! term   := factor ('·' factor)*      left-associative
//! factor := atom atom*                left-associative, binds tighter than '·'
//! atom   := 'e' | letter | '(' term ')'
//! ```
//!
//! `*` and `⋅` are accepted as aliases for `·`. So `e·xy` is `e·(xy)` and
//! `xy·z` is `(xy)·z`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A variable: a single lowercase ASCII letter other than `e`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u8);

impl Var {
    pub fn new(c: char) -> Option<Var> {
        if c.is_ascii_lowercase() && c != 'e' {
            Some(Var(c as u8))
        } else {
            None
        }
    }

    pub fn name(self) -> char {
        self.0 as char
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A leaf label: the constant `e` or a variable. `e` sorts before every
/// variable, variables sort alphabetically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    E,
    Var(Var),
}

impl Symbol {
    pub fn name(self) -> char {
        match self {
            Symbol::E => 'e',
            Symbol::Var(v) => v.name(),
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        if c == 'e' {
            Some(Symbol::E)
        } else {
            Var::new(c).map(Symbol::Var)
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const,
    Var(Var),
    Product(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(c: char) -> Term {
        Term::Var(Var::new(c).expect("not a variable letter"))
    }

    pub fn product(l: Term, r: Term) -> Term {
        Term::Product(Box::new(l), Box::new(r))
    }

    pub fn leaf(s: Symbol) -> Term {
        match s {
            Symbol::E => Term::Const,
            Symbol::Var(v) => Term::Var(v),
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, Term::Product(..))
    }

    /// Number of leaves.
    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Product(l, r) => l.leaf_count() + r.leaf_count(),
            _ => 1,
        }
    }

    /// Number of symbols (leaves plus product nodes).
    pub fn size(&self) -> usize {
        match self {
            Term::Product(l, r) => 1 + l.size() + r.size(),
            _ => 1,
        }
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Const => out.push(Symbol::E),
            Term::Var(v) => out.push(Symbol::Var(*v)),
            Term::Product(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Preorder shape code: `true` for a product node, `false` for a leaf.
    pub fn shape_code(&self) -> Vec<bool> {
        let mut out = Vec::new();
        self.collect_shape(&mut out);
        out
    }

    fn collect_shape(&self, out: &mut Vec<bool>) {
        match self {
            Term::Product(l, r) => {
                out.push(true);
                l.collect_shape(out);
                r.collect_shape(out);
            }
            _ => out.push(false),
        }
    }

    /// Distinct variables in order of first appearance.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for s in self.leaves() {
            if let Symbol::Var(v) = s {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Applies `f` to every leaf label.
    pub fn relabel(&self, f: &impl Fn(Symbol) -> Symbol) -> Term {
        match self {
            Term::Const => Term::leaf(f(Symbol::E)),
            Term::Var(v) => Term::leaf(f(Symbol::Var(*v))),
            Term::Product(l, r) => Term::product(l.relabel(f), r.relabel(f)),
        }
    }
}

impl Ord for Term {
    /// Leaf sequence first, then preorder shape code. Together these
    /// determine a term, so the order is total and agrees with `==`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.leaves()
            .cmp(&other.leaves())
            .then_with(|| self.shape_code().cmp(&other.shape_code()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const => write!(f, "e"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Product(l, r) => write!(f, "Product({l:?}, {r:?})"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Identity {
        Identity { lhs, rhs }
    }

    /// Distinct variables of both sides, sorted alphabetically.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.lhs.variables();
        for v in self.rhs.variables() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort();
        vs
    }

    pub fn relabel(&self, f: &impl Fn(Symbol) -> Symbol) -> Identity {
        Identity::new(self.lhs.relabel(f), self.rhs.relabel(f))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl std::str::FromStr for Identity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TaggedFormula {
    pub tag: String,
    pub identity: Identity,
}

/// Parse failure; `pos` is a character offset into the input.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {found:?} at position {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("unbalanced ')' at position {pos}")]
    UnbalancedClose { pos: usize },
    #[error("unclosed '(' opened at position {pos}")]
    UnclosedOpen { pos: usize },
    #[error("illegal character {found:?} at position {pos}")]
    Illegal { pos: usize, found: char },
    #[error("expected exactly one '=', found {0}")]
    EqualsCount(usize),
    #[error("{side} side: {source}")]
    Side {
        side: &'static str,
        #[source]
        source: Box<ParseError>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok {
    Dot,
    Open,
    Close,
    Leaf(Symbol),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    for (pos, c) in input.chars().enumerate() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '·' | '*' | '⋅' => Tok::Dot,
            '(' => Tok::Open,
            ')' => Tok::Close,
            c => match Symbol::from_char(c) {
                Some(s) => Tok::Leaf(s),
                None => return Err(ParseError::Illegal { pos, found: c }),
            },
        };
        toks.push((pos, tok));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    /// Positions of currently open parentheses.
    open: Vec<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, Tok)> {
        self.toks.get(self.at).copied()
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.factor()?;
        while let Some((_, Tok::Dot)) = self.peek() {
            self.at += 1;
            let rhs = self.factor()?;
            acc = Term::product(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while let Some((_, Tok::Leaf(_) | Tok::Open)) = self.peek() {
            let rhs = self.atom()?;
            acc = Term::product(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            None => match self.open.last() {
                Some(&pos) => Err(ParseError::UnclosedOpen { pos }),
                None => Err(ParseError::UnexpectedEnd { pos: self.end }),
            },
            Some((_, Tok::Leaf(s))) => {
                self.at += 1;
                Ok(Term::leaf(s))
            }
            Some((pos, Tok::Open)) => {
                self.at += 1;
                self.open.push(pos);
                let inner = self.term()?;
                match self.peek() {
                    Some((_, Tok::Close)) => {
                        self.at += 1;
                        self.open.pop();
                        Ok(inner)
                    }
                    Some((p, Tok::Dot)) => Err(ParseError::Unexpected {
                        pos: p, found: '·'
                    }),
                    Some((p, _)) => Err(ParseError::Unexpected { pos: p, found: '(' }),
                    None => Err(ParseError::UnclosedOpen { pos }),
                }
            }
            Some((pos, Tok::Close)) => {
                if self.open.is_empty() {
                    Err(ParseError::UnbalancedClose { pos })
                } else {
                    Err(ParseError::Unexpected { pos, found: ')' })
                }
            }
            Some((pos, Tok::Dot)) => Err(ParseError::Unexpected { pos, found: '·' }),
        }
    }
}

pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: &toks,
        at: 0,
        end: input.chars().count(),
        open: Vec::new(),
    };
    let t = p.term()?;
    match p.peek() {
        None => Ok(t),
        Some((pos, Tok::Close)) => Err(ParseError::UnbalancedClose { pos }),
        Some((pos, tok)) => Err(ParseError::Unexpected {
            pos,
            found: match tok {
                Tok::Dot => '·',
                Tok::Open => '(',
                Tok::Close => ')',
                Tok::Leaf(s) => s.name(),
            },
        }),
    }
}

pub fn parse_identity(input: &str) -> Result<Identity, ParseError> {
    let parts: Vec<&str> = input.split('=').collect();
    if parts.len() != 2 {
        return Err(ParseError::EqualsCount(parts.len() - 1));
    }
    let side = |name: &'static str, text: &str| {
        parse_term(text).map_err(|e| ParseError::Side {
            side: name,
            source: Box::new(e),
        })
    };
    Ok(Identity::new(
        side("left", parts[0])?,
        side("right", parts[1])?,
    ))
}

/// Shortest renderings of a term at the three grammar levels.
struct Renderings {
    /// Anything the `term` rule accepts.
    term: String,
    /// A juxtaposition sequence with no top-level '·'.
    factor: String,
    atom: String,
}

fn render(t: &Term, dot: &str) -> Renderings {
    match t {
        Term::Product(l, r) => {
            let l = render(l, dot);
            let r = render(r, dot);
            let factor = format!("{}{}", l.factor, r.atom);
            let dotted = format!("{}{}{}", l.term, dot, r.factor);
            let term = if dotted.chars().count() < factor.chars().count() {
                dotted
            } else {
                factor.clone()
            };
            let atom = format!("({term})");
            Renderings { term, factor, atom }
        }
        leaf => {
            let s = match leaf {
                Term::Var(v) => v.name().to_string(),
                _ => "e".to_string(),
            };
            Renderings {
                term: s.clone(),
                factor: s.clone(),
                atom: s,
            }
        }
    }
}

/// Renders a term with as few characters as the grammar allows, using
/// juxtaposition unless a '·' is strictly shorter (`xy`, `x·yz`, `e·xy·yz·z`).
pub fn print_term(t: &Term) -> String {
    render(t, "·").term
}

/// Same as [`print_term`] with `*` in place of `·`.
pub fn print_term_ascii(t: &Term) -> String {
    render(t, "*").term
}

pub fn print_identity_ascii(id: &Identity) -> String {
    format!(
        "{} = {}",
        print_term_ascii(&id.lhs),
        print_term_ascii(&id.rhs)
    )
}

/// Leaf-occurrence counts of `e` and every variable.
pub fn occurrences(t: &Term) -> BTreeMap<Symbol, usize> {
    let mut counts = BTreeMap::new();
    for s in t.leaves() {
        *counts.entry(s).or_insert(0) += 1;
    }
    counts
}

pub fn mirror(t: &Term) -> Term {
    match t {
        Term::Product(l, r) => Term::product(mirror(r), mirror(l)),
        leaf => leaf.clone(),
    }
}

/// One rejected line of a formula file (1-based line number).
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("line {line}: {message}")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

/// A formula-file entry together with its 1-based source line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FileEntry {
    pub line: usize,
    pub formula: TaggedFormula,
}

/// Reads the formula file format: one identity per line, optionally
/// prefixed by `TAG:`, `#` to end of line is a comment, blank lines are
/// skipped. Untagged entries are tagged `L<line>`. Bad lines are
/// collected and the rest of the file is still read.
pub fn parse_formula_file(text: &str) -> (Vec<FileEntry>, Vec<LineError>) {
    let mut entries: Vec<FileEntry> = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (tag, body) = match content.split_once(':') {
            Some((tag, body)) => (tag.trim().to_string(), body),
            None => (format!("L{line}"), content),
        };
        if tag.is_empty() || tag.chars().any(char::is_whitespace) {
            errors.push(LineError {
                line,
                message: format!("bad tag {tag:?}"),
            });
            continue;
        }
        if entries.iter().any(|e| e.formula.tag == tag) {
            errors.push(LineError {
                line,
                message: format!("duplicate tag {tag:?}"),
            });
            continue;
        }
        match parse_identity(body) {
            Ok(identity) => entries.push(FileEntry {
                line,
                formula: TaggedFormula { tag, identity },
            }),
            Err(e) => errors.push(LineError {
                line,
                message: e.to_string(),
            }),
        }
    }
    (entries, errors)
}

/// Writes formulas in the file format, ASCII `*` for the product.
pub fn write_formula_file<'a>(formulas: impl IntoIterator<Item = &'a TaggedFormula>) -> String {
    let mut out = String::new();
    for f in formulas {
        out.push_str(&f.tag);
        out.push_str(": ");
        out.push_str(&print_identity_ascii(&f.identity));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: Term, r: Term) -> Term {
        Term::product(l, r)
    }
    fn v(c: char) -> Term {
        Term::var(c)
    }

    #[test]
    fn parses_displayed_formulas() {
        let t = parse_term("((e·xy)·yz)z").unwrap();
        let want = p(
            p(p(Term::Const, p(v('x'), v('y'))), p(v('y'), v('z'))),
            v('z'),
        );
        assert_eq!(t, want);

        let t = parse_term("e(xy·z)·yz").unwrap();
        let want = p(
            p(Term::Const, p(p(v('x'), v('y')), v('z'))),
            p(v('y'), v('z')),
        );
        assert_eq!(t, want);
    }

    #[test]
    fn juxtaposition_is_left_associative() {
        assert_eq!(parse_term("xyz").unwrap(), p(p(v('x'), v('y')), v('z')));
        assert_eq!(parse_term("x y z").unwrap(), parse_term("xyz").unwrap());
        assert_eq!(parse_term("x*y*z").unwrap(), parse_term("xyz").unwrap());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_term("x··y"),
            Err(ParseError::Unexpected { pos: 2, .. })
        ));
        assert_eq!(parse_term(""), Err(ParseError::Empty));
        assert_eq!(parse_term("   "), Err(ParseError::Empty));
        assert_eq!(parse_term("(xy"), Err(ParseError::UnclosedOpen { pos: 0 }));
        assert_eq!(
            parse_term("xy)"),
            Err(ParseError::UnbalancedClose { pos: 2 })
        );
        assert_eq!(
            parse_term("x+y"),
            Err(ParseError::Illegal { pos: 1, found: '+' })
        );
        assert_eq!(
            parse_term("xE"),
            Err(ParseError::Illegal { pos: 1, found: 'E' })
        );
        assert!(parse_term("x·").is_err());
        assert!(parse_term("()").is_err());
    }

    #[test]
    fn identities() {
        let id = parse_identity("((e·xy)·yz)z = x").unwrap();
        assert_eq!(id.rhs, v('x'));
        assert_eq!(id.lhs, parse_term("((e*xy)*yz)z").unwrap());
        assert_eq!(
            parse_identity("e = e").unwrap(),
            Identity::new(Term::Const, Term::Const)
        );
        assert!(matches!(
            parse_identity("x = "),
            Err(ParseError::Side { side: "right", .. })
        ));
        assert_eq!(parse_identity("x"), Err(ParseError::EqualsCount(0)));
        assert_eq!(parse_identity("x = y = z"), Err(ParseError::EqualsCount(2)));
    }

    #[test]
    fn printing() {
        assert_eq!(print_term(&v('x')), "x");
        assert_eq!(print_term(&p(p(v('x'), v('y')), v('z'))), "xyz");
        assert_eq!(print_term(&p(v('x'), p(v('y'), v('z')))), "x·yz");
        let t = parse_term("((e·xy)·yz)z").unwrap();
        assert_eq!(print_term(&t), "e·xy·yz·z");
        assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
        assert_eq!(parse_term(&print_term_ascii(&t)).unwrap(), t);
    }

    #[test]
    fn occurrence_counts() {
        let t = parse_term("((e·xy)·yz)z").unwrap();
        let occ = occurrences(&t);
        let x = Symbol::Var(Var::new('x').unwrap());
        let y = Symbol::Var(Var::new('y').unwrap());
        let z = Symbol::Var(Var::new('z').unwrap());
        assert_eq!(
            occ,
            BTreeMap::from([(Symbol::E, 1), (x, 1), (y, 2), (z, 2)])
        );
        assert_eq!(occurrences(&v('x')), BTreeMap::from([(x, 1)]));
        assert_eq!(
            occurrences(&p(Term::Const, Term::Const)),
            BTreeMap::from([(Symbol::E, 2)])
        );
    }

    #[test]
    fn mirror_swaps_children() {
        let t = p(v('x'), p(v('y'), v('z')));
        assert_eq!(mirror(&t), p(p(v('z'), v('y')), v('x')));
        assert_eq!(mirror(&v('x')), v('x'));
    }

    #[test]
    fn term_order_is_leaf_sequence_then_shape() {
        let a = parse_term("x(yz)").unwrap();
        let b = parse_term("xyz").unwrap();
        assert_eq!(a.leaves(), b.leaves());
        // Left comb has code [1,1,0,0,0], right comb [1,0,1,0,0].
        assert!(b > a);
        assert!(parse_term("e·x").unwrap() < parse_term("x·e").unwrap());
    }

    #[test]
    fn formula_file() {
        let text = "# header\n\nA: x = x\n  yx = xy # comment\nA: e = e\nB: x + y\nC: e*x = x\n";
        let (entries, errors) = parse_formula_file(text);
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].formula.tag, "A");
        assert_eq!(entries[1].formula.tag, "L4");
        assert_eq!(entries[2].formula.tag, "C");
        assert_eq!(entries[2].line, 7);
        assert_eq!(errors.len(), 2);
        assert_eq!(errors[0].line, 5);
        assert!(errors[0].message.contains("duplicate"));
        assert_eq!(errors[1].line, 6);

        let written = write_formula_file(entries.iter().map(|e| &e.formula));
        let (again, errs) = parse_formula_file(&written);
        assert!(errs.is_empty());
        let ids: Vec<_> = again.iter().map(|e| e.formula.clone()).collect();
        let orig: Vec<_> = entries.iter().map(|e| e.formula.clone()).collect();
        assert_eq!(ids, orig);
    }
}
