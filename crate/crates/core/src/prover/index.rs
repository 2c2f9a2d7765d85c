//! Discrimination tree over preorder symbol strings, for retrieving the
//! stored patterns that may generalize a query term. Variables in
//! patterns are wildcards; repeated variables are left to the matcher.

use super::pterm::PTerm;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Key {
    App,
    Const(u32),
    Star,
}

struct Node<T> {
    children: Vec<(Key, usize)>,
    entries: Vec<T>,
}

impl<T> Node<T> {
    fn new() -> Self {
        Node {
            children: Vec::new(),
            entries: Vec::new(),
        }
    }
}

pub struct DiscTree<T> {
    nodes: Vec<Node<T>>,
    len: usize,
}

impl<T> Default for DiscTree<T> {
    fn default() -> Self {
        DiscTree {
            nodes: vec![Node::new()],
            len: 0,
        }
    }
}

fn keys(t: &PTerm, out: &mut Vec<Key>) {
    match t {
        PTerm::Var(_) => out.push(Key::Star),
        PTerm::Const(c) => out.push(Key::Const(*c)),
        PTerm::App(a) => {
            out.push(Key::App);
            keys(&a.left, out);
            keys(&a.right, out);
        }
    }
}

/// Preorder keys of a query and, for each position, the position just
/// past its subterm.
fn query_keys(t: &PTerm, keys: &mut Vec<Key>, skip: &mut Vec<usize>) {
    let at = keys.len();
    skip.push(0);
    match t {
        PTerm::Var(_) => keys.push(Key::Star),
        PTerm::Const(c) => keys.push(Key::Const(*c)),
        PTerm::App(a) => {
            keys.push(Key::App);
            query_keys(&a.left, keys, skip);
            query_keys(&a.right, keys, skip);
        }
    }
    skip[at] = keys.len();
}

impl<T: Clone + PartialEq> DiscTree<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, pattern: &PTerm, value: T) {
        let mut ks = Vec::new();
        keys(pattern, &mut ks);
        let mut node = 0;
        for k in ks {
            node = match self.nodes[node].children.iter().find(|(c, _)| *c == k) {
                Some(&(_, next)) => next,
                None => {
                    self.nodes.push(Node::new());
                    let next = self.nodes.len() - 1;
                    self.nodes[node].children.push((k, next));
                    next
                }
            };
        }
        self.nodes[node].entries.push(value);
        self.len += 1;
    }

    /// Removes one entry equal to `value` stored under `pattern`.
    pub fn remove(&mut self, pattern: &PTerm, value: &T) -> bool {
        let mut ks = Vec::new();
        keys(pattern, &mut ks);
        let mut node = 0;
        for k in ks {
            match self.nodes[node].children.iter().find(|(c, _)| *c == k) {
                Some(&(_, next)) => node = next,
                None => return false,
            }
        }
        let entries = &mut self.nodes[node].entries;
        match entries.iter().position(|e| e == value) {
            Some(i) => {
                entries.remove(i);
                self.len -= 1;
                true
            }
            None => false,
        }
    }

    /// Entries whose pattern could match `query`, in insertion order per
    /// leaf; the caller still has to run the matcher.
    pub fn generalizations(&self, query: &PTerm, out: &mut Vec<T>) {
        let mut ks = Vec::new();
        let mut skip = Vec::new();
        query_keys(query, &mut ks, &mut skip);
        self.walk(0, 0, &ks, &skip, out);
    }

    fn walk(&self, node: usize, at: usize, ks: &[Key], skip: &[usize], out: &mut Vec<T>) {
        let n = &self.nodes[node];
        if at == ks.len() {
            out.extend(n.entries.iter().cloned());
            return;
        }
        for &(k, next) in &n.children {
            if k == Key::Star {
                self.walk(next, skip[at], ks, skip, out);
            } else if k == ks[at] {
                self.walk(next, at + 1, ks, skip, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::pterm::{matches, parse_pterm};

    #[test]
    fn retrieves_exactly_the_candidates() {
        let pats = [
            "(X0 * e)",
            "(X0 * X0)",
            "((X0 * X1) * X2)",
            "X0",
            "e",
            "(e * X0)",
        ];
        let mut tree = DiscTree::new();
        for (i, p) in pats.iter().enumerate() {
            tree.insert(&parse_pterm(p).unwrap(), i);
        }
        for q in ["((c1 * e) * e)", "(e * e)", "(c1 * c2)", "c1", "e"] {
            let q = parse_pterm(q).unwrap();
            let mut got = Vec::new();
            tree.generalizations(&q, &mut got);
            for (i, p) in pats.iter().enumerate() {
                if matches(&parse_pterm(p).unwrap(), &q).is_some() {
                    assert!(got.contains(&i), "{p} should be found for {q}");
                }
            }
        }
        assert!(tree.remove(&parse_pterm("X0").unwrap(), &3));
        assert!(!tree.remove(&parse_pterm("X0").unwrap(), &3));
        assert_eq!(tree.len(), 5);
    }
}
