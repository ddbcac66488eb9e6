//! Brute-force graded dimensions of B(Γ) straight from its presentation.
//!
//! B(Γ) is the quotient of the tensor algebra on the positive vertices by
//! the ideal killing non-edge products vw together with, for every vertex v
//! of level at least 2, the sums v·(Σ_{w ∈ S(v)} w). Working modulo the
//! monomial part from the start, a degree-n basis candidate is a descending
//! edge path of n positive vertices, and each remaining relation becomes a
//! 0/1 vector supported on those path words: pick an insertion site — a path
//! word prefix ending in some v with |v| ≥ 2, plus a compatible suffix — and
//! sum over the middle letter w ∈ S(v). The graded dimension is then
//! #words − rank(relations), with the rank taken exactly over the chosen
//! field. None of this assumes uniformity, which makes it an independent
//! check on the cohomological formula for h(B).

use std::collections::HashMap;

use crate::field::FieldSpec;
use crate::graph::{LayeredGraph, Vertex};
use crate::linalg::IntMatrix;

/// A descending edge path through positive vertices; the monomials that
/// survive the monomial relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    letters: Vec<usize>,
}

impl PathWord {
    pub fn letters(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.letters.iter().map(|&k| Vertex(k))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Human-readable form, e.g. "a.b2.c1".
    pub fn display(&self, g: &LayeredGraph) -> String {
        let ids: Vec<&str> = self.letters().map(|v| g.id(v)).collect();
        ids.join(".")
    }
}

/// All length-n descending edge paths in V_+, in lexicographic order of
/// canonical vertex indices.
pub fn enumerate_path_words(g: &LayeredGraph, n: usize) -> Vec<PathWord> {
    assert!(n >= 1, "path words have at least one letter");
    assert!(g.is_valid(), "path words of an invalid layered graph are undefined");
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    for v in g.vertices() {
        if g.level(v) > 0 {
            current.push(v.index());
            extend_words(g, n, &mut current, &mut out);
            current.pop();
        }
    }
    out
}

fn extend_words(g: &LayeredGraph, n: usize, current: &mut Vec<usize>, out: &mut Vec<PathWord>) {
    if current.len() == n {
        out.push(PathWord { letters: current.clone() });
        return;
    }
    let last = Vertex(*current.last().unwrap());
    for w in g.successor_set(last) {
        if g.level(w) > 0 {
            current.push(w.index());
            extend_words(g, n, current, out);
            current.pop();
        }
    }
}

/// The degree-n piece of the presentation: basis path words plus one 0/1
/// relation vector per insertion site that keeps at least one term.
pub struct PathWordSystem {
    degree: usize,
    field: FieldSpec,
    basis: Vec<PathWord>,
    /// Sorted index supports into `basis`; all coefficients are 1.
    relations: Vec<Vec<usize>>,
}

impl PathWordSystem {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[PathWord] {
        &self.basis
    }

    pub fn relations(&self) -> &[Vec<usize>] {
        &self.relations
    }

    pub fn relation_rank(&self) -> usize {
        let mut m = IntMatrix::zeros(self.relations.len(), self.basis.len());
        for (r, support) in self.relations.iter().enumerate() {
            for &c in support {
                m.set(r, c, 1);
            }
        }
        m.rank(self.field)
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - self.relation_rank()
    }
}

pub fn relation_vectors(g: &LayeredGraph, n: usize, field: FieldSpec) -> PathWordSystem {
    assert!(n >= 2, "relations only appear in degree 2 and up");
    let basis = enumerate_path_words(g, n);
    let position: HashMap<&[usize], usize> =
        basis.iter().enumerate().map(|(k, w)| (w.letters.as_slice(), k)).collect();

    let mut relations: Vec<Vec<usize>> = Vec::new();
    for k in 1..n {
        let suffix_len = n - k - 1;
        let suffixes = if suffix_len == 0 {
            vec![PathWord { letters: Vec::new() }]
        } else {
            enumerate_path_words(g, suffix_len)
        };
        for prefix in enumerate_path_words(g, k) {
            let v = Vertex(*prefix.letters.last().unwrap());
            if g.level(v) < 2 {
                continue;
            }
            // |v| >= 2 puts every successor at level >= 1, i.e. inside V_+.
            let middles = g.successor_set(v);
            for q in &suffixes {
                let mut support = Vec::new();
                for &w in &middles {
                    if let Some(&q1) = q.letters.first() {
                        if !g.covers(w, Vertex(q1)) {
                            continue;
                        }
                    }
                    let mut term = Vec::with_capacity(n);
                    term.extend_from_slice(&prefix.letters);
                    term.push(w.index());
                    term.extend_from_slice(&q.letters);
                    // Every term assembled this way is a path word.
                    support.push(position[term.as_slice()]);
                }
                if !support.is_empty() {
                    support.sort_unstable();
                    relations.push(support);
                }
            }
        }
    }
    PathWordSystem { degree: n, field, basis, relations }
}

/// dim B_0 .. dim B_max_degree over the chosen field.
pub fn b_graded_dims(g: &LayeredGraph, max_degree: usize, field: FieldSpec) -> Vec<usize> {
    assert!(g.is_valid(), "graded dimensions of an invalid layered graph are undefined");
    let mut dims = vec![1usize];
    if max_degree >= 1 {
        dims.push(g.positive_vertex_count());
    }
    for n in 2..=max_degree {
        dims.push(relation_vectors(g, n, field).dim());
    }
    dims
}
