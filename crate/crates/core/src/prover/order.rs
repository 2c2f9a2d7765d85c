//! Reduction orderings on [`PTerm`]: Knuth–Bendix with unit weights and
//! lexicographic path ordering. Both use the precedence
//! `e < c1 < c2 < ... < ·`.

use std::cmp::Ordering;

use super::pterm::PTerm;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum OrderKind {
    #[default]
    Kbo,
    Lpo,
}

/// Term ordering. KBO gives every symbol and variable weight 1, so the
/// weight of a term is its size.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TermOrdering {
    pub kind: OrderKind,
}

impl TermOrdering {
    pub const KBO: TermOrdering = TermOrdering {
        kind: OrderKind::Kbo,
    };
    pub const LPO: TermOrdering = TermOrdering {
        kind: OrderKind::Lpo,
    };

    pub fn greater(&self, s: &PTerm, t: &PTerm) -> bool {
        match self.kind {
            OrderKind::Kbo => kbo_greater(s, t),
            OrderKind::Lpo => lpo_greater(s, t),
        }
    }

    /// `None` when the terms are incomparable.
    pub fn compare(&self, s: &PTerm, t: &PTerm) -> Option<Ordering> {
        if s == t {
            Some(Ordering::Equal)
        } else if self.greater(s, t) {
            Some(Ordering::Greater)
        } else if self.greater(t, s) {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// Precedence on heads: constants by number, the product above all.
fn head_rank(t: &PTerm) -> u64 {
    match t {
        PTerm::Const(c) => u64::from(*c),
        PTerm::App(_) => u64::MAX,
        PTerm::Var(_) => unreachable!("variables have no precedence"),
    }
}

/// Occurrence balance of variables: `+1` per occurrence in `s`, `-1` per
/// occurrence in `t`. A short list; equations rarely have many variables.
fn var_balance_ok(s: &PTerm, t: &PTerm) -> bool {
    let mut bal: Vec<(u32, i32)> = Vec::new();
    let mut add = |v: u32, d: i32| match bal.iter_mut().find(|(w, _)| *w == v) {
        Some((_, n)) => *n += d,
        None => bal.push((v, d)),
    };
    s.for_each_var(&mut |v| add(v, 1));
    t.for_each_var(&mut |v| add(v, -1));
    bal.iter().all(|(_, n)| *n >= 0)
}

pub fn kbo_greater(s: &PTerm, t: &PTerm) -> bool {
    if s == t || s.is_var() {
        return false;
    }
    let (ws, wt) = (s.size(), t.size());
    if ws < wt || !var_balance_ok(s, t) {
        return false;
    }
    if ws > wt {
        return true;
    }
    match (s, t) {
        // Equal weight with the variable condition means `t` is a
        // variable occurring in `s`; with unit weights that forces `s`
        // to be that variable.
        (_, PTerm::Var(_)) => false,
        (PTerm::App(a), PTerm::App(b)) => {
            if a.left != b.left {
                kbo_greater(&a.left, &b.left)
            } else {
                kbo_greater(&a.right, &b.right)
            }
        }
        _ => head_rank(s) > head_rank(t),
    }
}

pub fn lpo_greater(s: &PTerm, t: &PTerm) -> bool {
    match (s, t) {
        (PTerm::Var(_), _) => false,
        (_, PTerm::Var(v)) => s != t && s.contains_var(*v),
        (PTerm::Const(a), PTerm::Const(b)) => a > b,
        (PTerm::Const(_), PTerm::App(_)) => false,
        (PTerm::App(a), _) => {
            if a.left == *t || a.right == *t || lpo_greater(&a.left, t) || lpo_greater(&a.right, t)
            {
                return true;
            }
            match t {
                PTerm::App(b) => {
                    let lex = if a.left != b.left {
                        lpo_greater(&a.left, &b.left)
                    } else {
                        lpo_greater(&a.right, &b.right)
                    };
                    lex && lpo_greater(s, &b.left) && lpo_greater(s, &b.right)
                }
                _ => true,
            }
        }
    }
}
