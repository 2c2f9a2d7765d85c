//! Finite models: Cayley tables with a designated element for `e`, and a
//! backtracking search for tables satisfying a set of identities.
//!
//! The search keeps a set of possible values per cell. It decides the
//! undecided cell with the fewest remaining values, preferring the cell
//! that blocks evaluation of the most ground instances and then the first
//! in row-major order, and tries values in increasing order. After every decision it
//! scans all ground instances of the identities: an instance whose two
//! sides are fully decided must agree, and an instance with exactly one
//! undecided cell removes from that cell every value that would falsify
//! it (a cell left with one value is thereby fixed). Scanning repeats to a
//! fixpoint before the next decision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{Identity, Term, Var};

pub const MAX_MODEL_SIZE: usize = 6;

/// Largest number of ground instances the search will scan per pass.
pub const MAX_INSTANCES: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelError {
    #[error("variable {0} is unassigned")]
    Unassigned(Var),
    #[error("model size must be in 1..={MAX_MODEL_SIZE}, got {0}")]
    SizeBound(usize),
    #[error("{0} ground instances exceed the search limit of {MAX_INSTANCES}")]
    TooManyInstances(usize),
    #[error("invalid table: {0}")]
    InvalidTable(String),
}

/// A finite groupoid on `0..n` with `e` interpreted as `e_index`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct CayleyTable {
    n: usize,
    e_index: usize,
    cells: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    e: usize,
    rows: Vec<Vec<usize>>,
}

impl TryFrom<TableJson> for CayleyTable {
    type Error = ModelError;

    fn try_from(j: TableJson) -> Result<Self, Self::Error> {
        let t = CayleyTable::from_rows(j.e, j.rows)?;
        if t.n != j.n {
            return Err(ModelError::InvalidTable(format!(
                "n = {} but {} rows",
                j.n, t.n
            )));
        }
        Ok(t)
    }
}

impl From<CayleyTable> for TableJson {
    fn from(t: CayleyTable) -> Self {
        TableJson {
            n: t.n,
            e: t.e_index,
            rows: t.rows(),
        }
    }
}

impl CayleyTable {
    pub fn new(n: usize, e_index: usize, cells: Vec<usize>) -> Result<CayleyTable, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidTable("empty domain".into()));
        }
        if e_index >= n {
            return Err(ModelError::InvalidTable(format!(
                "e = {e_index} outside 0..{n}"
            )));
        }
        if cells.len() != n * n {
            return Err(ModelError::InvalidTable(format!(
                "{} cells for a table of size {n}",
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().find(|&&c| c >= n) {
            return Err(ModelError::InvalidTable(format!(
                "entry {bad} outside 0..{n}"
            )));
        }
        Ok(CayleyTable { n, e_index, cells })
    }

    pub fn from_rows(e_index: usize, rows: Vec<Vec<usize>>) -> Result<CayleyTable, ModelError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ModelError::InvalidTable("table is not square".into()));
        }
        CayleyTable::new(n, e_index, rows.into_iter().flatten().collect())
    }

    /// The two-element group with `0` as identity.
    pub fn xor() -> CayleyTable {
        CayleyTable::new(2, 0, vec![0, 1, 1, 0]).unwrap()
    }

    /// The Klein four-group on `0..4` with `0` as identity (bitwise xor).
    pub fn klein() -> CayleyTable {
        let cells = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
        CayleyTable::new(4, 0, cells).unwrap()
    }

    /// Addition modulo `n`.
    pub fn cyclic(n: usize) -> CayleyTable {
        let cells = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        CayleyTable::new(n, 0, cells).unwrap()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn e_index(&self) -> usize {
        self.e_index
    }

    pub fn get(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

impl fmt::Display for CayleyTable {
    /// Human-readable grid with row and column headers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, e = {}", self.n, self.e_index)?;
        write!(f, " ·|")?;
        for b in 0..self.n {
            write!(f, " {b}")?;
        }
        writeln!(f)?;
        writeln!(f, "--+{}", "--".repeat(self.n))?;
        for a in 0..self.n {
            write!(f, " {a}|")?;
            for b in 0..self.n {
                write!(f, " {}", self.get(a, b))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn evaluate(
    t: &Term,
    tab: &CayleyTable,
    assign: &BTreeMap<Var, usize>,
) -> Result<usize, ModelError> {
    Ok(match t {
        Term::Const => tab.e_index,
        Term::Var(v) => *assign.get(v).ok_or(ModelError::Unassigned(*v))?,
        Term::Product(l, r) => tab.get(evaluate(l, tab, assign)?, evaluate(r, tab, assign)?),
    })
}

/// Exhaustive over all `n^k` assignments of the identity's variables.
pub fn satisfies(tab: &CayleyTable, id: &Identity) -> bool {
    let vars = id.variables();
    let mut values = vec![0usize; vars.len()];
    loop {
        let assign: BTreeMap<Var, usize> =
            vars.iter().copied().zip(values.iter().copied()).collect();
        let l = evaluate(&id.lhs, tab, &assign).expect("all variables assigned");
        let r = evaluate(&id.rhs, tab, &assign).expect("all variables assigned");
        if l != r {
            return false;
        }
        if !odometer(&mut values, tab.n) {
            return true;
        }
    }
}

/// Advances a base-`n` counter; false once it wraps around.
fn odometer(values: &mut [usize], n: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < n {
            return true;
        }
        *v = 0;
    }
    false
}

/// Associative, `e` a two-sided identity, and every element squares to `e`.
pub fn is_boolean_group(tab: &CayleyTable) -> bool {
    let n = tab.n;
    let e = tab.e_index;
    for a in 0..n {
        if tab.get(e, a) != a || tab.get(a, e) != a || tab.get(a, a) != e {
            return false;
        }
        for b in 0..n {
            for c in 0..n {
                if tab.get(tab.get(a, b), c) != tab.get(a, tab.get(b, c)) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    FindAll,
    FindOne,
    Count,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelQuery {
    pub identities: Vec<Identity>,
    pub size: usize,
    pub mode: SearchMode,
    /// Stop after this many models (`FindAll` and `Count`).
    pub limit: Option<usize>,
    /// Least-number symmetry pruning. Off gives raw labeled-table counts.
    pub least_number: bool,
}

impl ModelQuery {
    pub fn new(identities: Vec<Identity>, size: usize, mode: SearchMode) -> ModelQuery {
        ModelQuery {
            identities,
            size,
            mode,
            limit: None,
            least_number: false,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ModelSet {
    /// Models found (always counted, stored unless the mode is `Count`).
    pub count: u64,
    pub tables: Vec<CayleyTable>,
    /// False if the search stopped at the limit or at the first model.
    pub exhausted: bool,
}

pub fn find_models(q: &ModelQuery) -> Result<ModelSet, ModelError> {
    let limit = match q.mode {
        SearchMode::FindOne => Some(1),
        _ => q.limit,
    };
    let store = q.mode != SearchMode::Count;
    let mut out = ModelSet::default();
    let flow = search_models(&q.identities, q.size, q.least_number, |t| {
        out.count += 1;
        if store {
            out.tables.push(t.clone());
        }
        match limit {
            Some(l) if out.count as usize >= l => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    })?;
    out.exhausted = flow.is_continue();
    Ok(out)
}

/// Runs the search and hands each model to `visit` in search order.
/// Returns `Break` if the visitor stopped it.
pub fn search_models(
    identities: &[Identity],
    n: usize,
    least_number: bool,
    mut visit: impl FnMut(&CayleyTable) -> ControlFlow<()>,
) -> Result<ControlFlow<()>, ModelError> {
    if n == 0 || n > MAX_MODEL_SIZE {
        return Err(ModelError::SizeBound(n));
    }
    let compiled: Vec<Compiled> = identities.iter().map(Compiled::new).collect();
    let instances: usize = compiled
        .iter()
        .map(|c| n.checked_pow(c.vars as u32).unwrap_or(usize::MAX))
        .fold(0usize, usize::saturating_add);
    if instances > MAX_INSTANCES {
        return Err(ModelError::TooManyInstances(instances));
    }
    let mut s = Search {
        n,
        cells: vec![UNDEF; n * n],
        domains: vec![(1u16 << n) - 1; n * n],
        trail: Vec::new(),
        compiled,
        least_number,
        scratch: Vec::new(),
        blocking: vec![0; n * n],
    };
    Ok(s.run(&mut visit))
}

const UNDEF: u8 = u8::MAX;

#[derive(Clone, Copy, Debug)]
enum Node {
    Const,
    Var(usize),
    App(usize, usize),
}

/// Both sides flattened to postorder node lists over variable slots.
struct Compiled {
    vars: usize,
    lhs: Vec<Node>,
    rhs: Vec<Node>,
}

impl Compiled {
    fn new(id: &Identity) -> Compiled {
        let vars = id.variables();
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        flatten(&id.lhs, &vars, &mut lhs);
        flatten(&id.rhs, &vars, &mut rhs);
        Compiled {
            vars: vars.len(),
            lhs,
            rhs,
        }
    }
}

fn flatten(t: &Term, vars: &[Var], out: &mut Vec<Node>) -> usize {
    let node = match t {
        Term::Const => Node::Const,
        Term::Var(v) => Node::Var(vars.iter().position(|w| w == v).unwrap()),
        Term::Product(l, r) => {
            let l = flatten(l, vars, out);
            let r = flatten(r, vars, out);
            Node::App(l, r)
        }
    };
    out.push(node);
    out.len() - 1
}

/// Result of evaluating one side of a ground instance on a partial table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Partial {
    Val(u8),
    /// Evaluation reached this undecided cell.
    Open(usize),
}

/// A hypothetical value for one undecided cell.
type Hole = Option<(usize, u8)>;

struct Conflict;

struct Search {
    n: usize,
    cells: Vec<u8>,
    /// Bitmask of values still possible for each cell.
    domains: Vec<u16>,
    /// Previous `(cell, value, domain)` for undo.
    trail: Vec<(usize, u8, u16)>,
    compiled: Vec<Compiled>,
    least_number: bool,
    scratch: Vec<u8>,
    /// Per cell, the number of instance sides whose evaluation stopped
    /// there in the last propagation pass.
    blocking: Vec<u32>,
}

impl Search {
    fn eval(&mut self, nodes: &[Node], assign: &[u8], hole: Hole) -> Partial {
        self.scratch.clear();
        for node in nodes {
            let v = match *node {
                Node::Const => 0,
                Node::Var(i) => assign[i],
                Node::App(l, r) => {
                    let cell = self.scratch[l] as usize * self.n + self.scratch[r] as usize;
                    match (self.cells[cell], hole) {
                        (_, Some((h, v))) if h == cell => v,
                        (UNDEF, _) => return Partial::Open(cell),
                        (v, _) => v,
                    }
                }
            };
            self.scratch.push(v);
        }
        Partial::Val(*self.scratch.last().unwrap())
    }

    fn save(&mut self, cell: usize) {
        self.trail
            .push((cell, self.cells[cell], self.domains[cell]));
    }

    fn assign(&mut self, cell: usize, v: u8) -> Result<(), Conflict> {
        if self.domains[cell] & (1 << v) == 0 {
            return Err(Conflict);
        }
        self.save(cell);
        self.cells[cell] = v;
        self.domains[cell] = 1 << v;
        Ok(())
    }

    /// Restricts a cell to `keep`; fixes the value once one remains.
    fn restrict(&mut self, cell: usize, keep: u16) -> Result<bool, Conflict> {
        let d = self.domains[cell] & keep;
        if d == self.domains[cell] {
            return Ok(false);
        }
        if d == 0 {
            return Err(Conflict);
        }
        self.save(cell);
        self.domains[cell] = d;
        if d.is_power_of_two() {
            self.cells[cell] = d.trailing_zeros() as u8;
        }
        Ok(true)
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (c, v, d) = self.trail.pop().unwrap();
            self.cells[c] = v;
            self.domains[c] = d;
        }
    }

    /// Checks one ground instance. If exactly one cell is undecided, the
    /// values of that cell that falsify the instance are removed.
    fn check(&mut self, c: &Compiled, assign: &[u8]) -> Result<bool, Conflict> {
        let l = self.eval(&c.lhs, assign, None);
        let r = self.eval(&c.rhs, assign, None);
        let cell = match (l, r) {
            (Partial::Val(a), Partial::Val(b)) => {
                return if a == b { Ok(false) } else { Err(Conflict) }
            }
            (Partial::Open(cell), _) | (_, Partial::Open(cell)) => cell,
        };
        if let Partial::Open(c) = l {
            self.blocking[c] += 1;
        }
        if let Partial::Open(c) = r {
            self.blocking[c] += 1;
        }
        let mut keep = 0u16;
        for v in 0..self.n as u8 {
            if self.domains[cell] & (1 << v) == 0 {
                continue;
            }
            let hole = Some((cell, v));
            match (
                self.eval(&c.lhs, assign, hole),
                self.eval(&c.rhs, assign, hole),
            ) {
                (Partial::Val(a), Partial::Val(b)) => {
                    if a == b {
                        keep |= 1 << v;
                    }
                }
                // A second undecided cell: nothing to conclude.
                _ => return Ok(false),
            }
        }
        self.restrict(cell, keep)
    }

    /// Propagation to a fixpoint over all ground instances.
    fn propagate(&mut self) -> Result<(), Conflict> {
        let compiled = std::mem::take(&mut self.compiled);
        let result = self.propagate_with(&compiled);
        self.compiled = compiled;
        result
    }

    fn propagate_with(&mut self, compiled: &[Compiled]) -> Result<(), Conflict> {
        let n = self.n;
        loop {
            self.blocking.iter_mut().for_each(|b| *b = 0);
            let mut changed = false;
            for c in compiled {
                let mut assign = vec![0u8; c.vars];
                loop {
                    changed |= self.check(c, &assign)?;
                    if !odometer_u8(&mut assign, n) {
                        break;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Undecided cell with the fewest remaining values, first in
    /// row-major order among equals.
    fn next_cell(&self) -> Option<usize> {
        (0..self.cells.len())
            .filter(|&c| self.cells[c] == UNDEF)
            .min_by_key(|&c| {
                (
                    self.domains[c].count_ones(),
                    std::cmp::Reverse(self.blocking[c]),
                )
            })
    }

    /// Values worth trying at `cell`. With least-number pruning, every
    /// element not mentioned so far is interchangeable, so only the
    /// smallest such element is tried.
    fn candidates(&self, cell: usize) -> Vec<u8> {
        let n = self.n;
        let domain = self.domains[cell];
        let in_domain = |v: usize| domain & (1 << v) != 0;
        if !self.least_number {
            return (0..n).filter(|&v| in_domain(v)).map(|v| v as u8).collect();
        }
        let mut mentioned = vec![false; n];
        mentioned[0] = true;
        mentioned[cell / n] = true;
        mentioned[cell % n] = true;
        for (c, &v) in self.cells.iter().enumerate() {
            if v != UNDEF {
                mentioned[c / n] = true;
                mentioned[c % n] = true;
                mentioned[v as usize] = true;
            }
        }
        let fresh = (0..n).find(|&v| !mentioned[v]);
        (0..n)
            .filter(|&v| (mentioned[v] || Some(v) == fresh) && in_domain(v))
            .map(|v| v as u8)
            .collect()
    }

    fn run(&mut self, visit: &mut impl FnMut(&CayleyTable) -> ControlFlow<()>) -> ControlFlow<()> {
        let mark = self.trail.len();
        if self.propagate().is_err() {
            self.undo(mark);
            return ControlFlow::Continue(());
        }
        let flow = match self.next_cell() {
            None => {
                let cells = self.cells.iter().map(|&c| c as usize).collect();
                visit(&CayleyTable {
                    n: self.n,
                    e_index: 0,
                    cells,
                })
            }
            Some(cell) => {
                let mut flow = ControlFlow::Continue(());
                for v in self.candidates(cell) {
                    let inner = self.trail.len();
                    if self.assign(cell, v).is_ok() {
                        flow = self.run(visit);
                    }
                    self.undo(inner);
                    if flow.is_break() {
                        break;
                    }
                }
                flow
            }
        };
        self.undo(mark);
        flow
    }
}

fn odometer_u8(values: &mut [u8], n: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if (*v as usize) < n {
            return true;
        }
        *v = 0;
    }
    false
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TrivialVerdict {
    /// No model with 2..=bound elements.
    TrivialUpTo(usize),
    NontrivialModel(CayleyTable),
}

/// Looks for a model with at least two elements, sizes `2..=up_to_n`.
/// Finding none is finite evidence, not a proof, that the identity only
/// has the one-element model.
pub fn is_trivializing(id: &Identity, up_to_n: usize) -> Result<TrivialVerdict, ModelError> {
    if up_to_n > MAX_MODEL_SIZE {
        return Err(ModelError::SizeBound(up_to_n));
    }
    for n in 2..=up_to_n {
        let mut found = None;
        let _ = search_models(std::slice::from_ref(id), n, true, |t| {
            found = Some(t.clone());
            ControlFlow::Break(())
        })?;
        if let Some(t) = found {
            return Ok(TrivialVerdict::NontrivialModel(t));
        }
    }
    Ok(TrivialVerdict::TrivialUpTo(up_to_n))
}
