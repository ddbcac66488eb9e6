//! Finite strict partial orders on `0..n`.
//!
//! A [`FinitePoset`] stores the full transitive relation as a boolean table,
//! so order queries are O(1). Layered graphs produce these for the homology
//! machinery, but any acyclic relation can be closed into one.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation contains a cycle through element {0}")]
    Cycle(usize),
    #[error("element index {0} out of range for poset of size {1}")]
    OutOfRange(usize, usize),
}

/// Strict partial order on elements `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    len: usize,
    // less[a * len + b] == true  iff  a < b
    less: Vec<bool>,
}

impl FinitePoset {
    /// Empty relation (antichain) on `n` elements.
    pub fn antichain(n: usize) -> Self {
        FinitePoset { len: n, less: vec![false; n * n] }
    }

    /// Transitively closes `a < b` pairs into a strict order.
    ///
    /// Fails if the generated relation would contain a cycle.
    pub fn from_less_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut p = FinitePoset::antichain(n);
        for &(a, b) in pairs {
            if a >= n {
                return Err(PosetError::OutOfRange(a, n));
            }
            if b >= n {
                return Err(PosetError::OutOfRange(b, n));
            }
            p.less[a * n + b] = true;
        }
        // Floyd-Warshall closure; fine at this scale.
        for k in 0..n {
            for a in 0..n {
                if p.less[a * n + k] {
                    for b in 0..n {
                        if p.less[k * n + b] {
                            p.less[a * n + b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            if p.less[a * n + a] {
                return Err(PosetError::Cycle(a));
            }
        }
        Ok(p)
    }

    /// Builds directly from an already-transitive, already-acyclic table.
    pub(crate) fn from_closed_relation(len: usize, less: Vec<bool>) -> Self {
        debug_assert_eq!(less.len(), len * len);
        FinitePoset { len, less }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Is `a` strictly below `b`?
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a * self.len + b]
    }

    /// Sub-poset on the given elements, which must be strictly increasing.
    /// Element `k` of the result corresponds to `members[k]`.
    pub fn restrict(&self, members: &[usize]) -> FinitePoset {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]), "members must be sorted");
        let n = members.len();
        let mut less = vec![false; n * n];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                less[i * n + j] = self.less(a, b);
            }
        }
        FinitePoset { len: n, less }
    }

    /// Open interval (x, y): all z with x < z < y.
    pub fn open_interval(&self, x: usize, y: usize) -> (Vec<usize>, FinitePoset) {
        let members: Vec<usize> =
            (0..self.len).filter(|&z| self.less(x, z) && self.less(z, y)).collect();
        let sub = self.restrict(&members);
        (members, sub)
    }

    /// Elements with nothing below them.
    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len).filter(|&a| (0..self.len).all(|b| !self.less(b, a))).collect()
    }

    /// Elements with nothing above them.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len).filter(|&a| (0..self.len).all(|b| !self.less(a, b))).collect()
    }

    /// Largest `d` such that a chain x_0 < ... < x_d exists; -1 when empty.
    pub fn longest_chain_degree(&self) -> i64 {
        let mut below: Vec<i64> = vec![-1; self.len]; // longest chain degree ending at i
        let mut order: Vec<usize> = (0..self.len).collect();
        order.sort_by_key(|&a| (0..self.len).filter(|&b| self.less(b, a)).count());
        let mut best = -1i64;
        for &a in &order {
            let d = (0..self.len)
                .filter(|&b| self.less(b, a))
                .map(|b| below[b] + 1)
                .max()
                .unwrap_or(0);
            below[a] = d;
            best = best.max(d);
        }
        best
    }
}
