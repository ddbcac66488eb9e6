//! Reduced order (co)homology of finite posets.
//!
//! An i-chain is a strictly increasing tuple x_0 < ... < x_i; the single
//! (-1)-chain is the empty tuple, so reduced homology is computed against the
//! augmented complex. Boundary maps are the usual alternating face sums, and
//! Betti numbers come from exact ranks over the chosen field. Over a field
//! the reduced cohomology of the order complex has the same dimensions as
//! homology; both ranks are computed and the equality is asserted on every
//! call rather than taken on faith.

use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::field::FieldSpec;
use crate::linalg::IntMatrix;
use crate::poset::FinitePoset;

/// A chain, as strictly increasing element indices. Empty = the (-1)-chain.
pub type Chain = Vec<usize>;

/// The l-th face of a chain: the chain with its l-th element removed.
pub fn face(chain: &[usize], l: usize) -> Chain {
    assert!(l < chain.len(), "face index {l} out of range for a {}-chain", chain.len() as i64 - 1);
    let mut f = chain.to_vec();
    f.remove(l);
    f
}

/// All chains of a poset up to a degree cap, grouped by degree.
#[derive(Debug, Clone)]
pub struct ChainTable {
    max_degree: i64,
    by_degree: Vec<Vec<Chain>>, // index d + 1 holds the d-chains
    index: Vec<HashMap<Chain, usize>>,
}

impl ChainTable {
    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    /// Number of d-chains; 0 outside the enumerated range, except that the
    /// (-1)-chain always exists.
    pub fn count(&self, d: i64) -> usize {
        if d == -1 {
            1
        } else if d < -1 || d > self.max_degree {
            0
        } else {
            self.by_degree[(d + 1) as usize].len()
        }
    }

    pub fn chains(&self, d: i64) -> &[Chain] {
        const EMPTY: &[Chain] = &[];
        if d < -1 || d > self.max_degree {
            EMPTY
        } else {
            &self.by_degree[(d + 1) as usize]
        }
    }

    pub fn position(&self, d: i64, chain: &[usize]) -> Option<usize> {
        if d < -1 || d > self.max_degree {
            return None;
        }
        self.index[(d + 1) as usize].get(chain).copied()
    }
}

/// Enumerates every d-chain for -1 <= d <= max_degree, in lexicographic
/// order of element indices within each degree.
pub fn enumerate_chains(p: &FinitePoset, max_degree: i64) -> ChainTable {
    let cap = max_degree.max(-1);
    let mut by_degree: Vec<Vec<Chain>> = vec![Vec::new(); (cap + 2) as usize];
    by_degree[0].push(Vec::new());
    if cap >= 0 && !p.is_empty() {
        let n = p.len();
        let ups: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).filter(|&b| p.less(a, b)).collect()).collect();
        let mut chain: Chain = Vec::new();
        for start in 0..n {
            chain.push(start);
            extend(&ups, cap, &mut chain, &mut by_degree);
            chain.pop();
        }
    }
    let index = by_degree
        .iter()
        .map(|chains| {
            chains.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect::<HashMap<_, _>>()
        })
        .collect();
    ChainTable { max_degree: cap, by_degree, index }
}

fn extend(ups: &[Vec<usize>], cap: i64, chain: &mut Chain, out: &mut [Vec<Chain>]) {
    let d = chain.len() as i64 - 1;
    out[(d + 1) as usize].push(chain.clone());
    if d == cap {
        return;
    }
    let last = *chain.last().unwrap();
    for &next in &ups[last] {
        chain.push(next);
        extend(ups, cap, chain, out);
        chain.pop();
    }
}

/// The matrix of d_i : C_i -> C_{i-1}. Rows are (i-1)-chains, columns are
/// i-chains; column x has entry (-1)^l at its l-th face.
pub fn boundary_matrix(table: &ChainTable, i: i64) -> IntMatrix {
    let rows = table.count(i - 1);
    let cols = table.count(i);
    let mut m = IntMatrix::zeros(rows, cols);
    if i < 0 || cols == 0 || rows == 0 {
        return m;
    }
    for (col, chain) in table.chains(i).iter().enumerate() {
        for l in 0..chain.len() {
            let f = face(chain, l);
            let row = table
                .position(i - 1, &f)
                .expect("face of an enumerated chain must be enumerated");
            let sign = if l % 2 == 0 { 1 } else { -1 };
            m.set(row, col, sign);
        }
    }
    m
}

/// Dimensions of reduced (co)homology, by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    field: FieldSpec,
    dims: Vec<usize>, // index d + 1 holds dim in degree d
}

impl BettiTable {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Highest degree carried by the table (the longest chain degree).
    pub fn top_degree(&self) -> i64 {
        self.dims.len() as i64 - 2
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < -1 || d > self.top_degree() {
            0
        } else {
            self.dims[(d + 1) as usize]
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Degrees -1..=top with their dimensions.
    pub fn entries(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.dims.iter().enumerate().map(|(k, &v)| (k as i64 - 1, v))
    }

    /// sum_i (-1)^i dim, which must reproduce the Möbius function.
    pub fn alternating_sum(&self) -> i64 {
        self.entries()
            .map(|(d, v)| if d.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // Emitted as {"field": ..., "dims": {"-1": ..., "0": ..., ...}} with
        // degrees in ascending numeric order.
        let mut outer = serializer.serialize_map(Some(2))?;
        outer.serialize_entry("field", &self.field.label())?;
        let dims: Vec<(String, usize)> =
            self.entries().map(|(d, v)| (d.to_string(), v)).collect();
        struct Dims(Vec<(String, usize)>);
        impl Serialize for Dims {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in &self.0 {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
        outer.serialize_entry("dims", &Dims(dims))?;
        outer.end()
    }
}

/// Reduced (co)homology dimensions of the order complex over `field`.
pub fn reduced_cohomology_dims(p: &FinitePoset, field: FieldSpec) -> BettiTable {
    let top = p.longest_chain_degree();
    let table = enumerate_chains(p, top);
    // rank d_i for i in 0..=top; boundary maps outside that range are zero.
    let mut ranks: Vec<usize> = Vec::with_capacity((top + 1).max(0) as usize);
    for i in 0..=top {
        let m = boundary_matrix(&table, i);
        let r = m.rank(field);
        let r_dual = m.transpose().rank(field);
        assert_eq!(r, r_dual, "homology and cohomology ranks must agree in degree {i}");
        ranks.push(r);
    }
    let rank_d = |i: i64| -> usize {
        if i < 0 || i > top {
            0
        } else {
            ranks[i as usize]
        }
    };
    let mut dims = Vec::with_capacity((top + 2) as usize);
    for d in -1..=top {
        let c = table.count(d);
        dims.push(c - rank_d(d) - rank_d(d + 1));
    }
    let betti = BettiTable { field, dims };
    debug_assert_eq!(betti.alternating_sum(), mobius(p), "Euler relation must hold");
    betti
}

/// Möbius function of the bounded extension, mu(0̂, 1̂).
///
/// By definition this is c_0 - c_1 + c_2 - ... where c_i counts i-chains
/// from 0̂ to 1̂. Such a chain is (0̂, z_1, ..., z_{i-1}, 1̂) with the z's a
/// chain of P, so mu(P) = -1 + sum_j (-1)^j |Ch_j(P)|. The signed chain
/// count is accumulated by dynamic programming rather than enumeration.
pub fn mobius(p: &FinitePoset) -> i64 {
    let n = p.len();
    // t[a] = signed count over chains with maximum a of (-1)^(length - 1).
    let mut t = vec![0i128; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (0..n).filter(|&b| p.less(b, a)).count());
    for &a in &order {
        let below: i128 = (0..n).filter(|&b| p.less(b, a)).map(|b| t[b]).sum();
        t[a] = 1 - below;
    }
    let total: i128 = t.iter().sum();
    i64::try_from(-1 + total).expect("Möbius value exceeds i64")
}

/// One interval that breaks the Cohen-Macaulay property. `None` endpoints
/// are the adjoined bottom/top used in strict mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmFailure {
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    /// Degree with nonvanishing homology.
    pub degree: i64,
    pub dim: usize,
    /// Longest chain degree of the open interval.
    pub interval_top: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmReport {
    pub cohen_macaulay: bool,
    pub strict: bool,
    pub failures: Vec<CmFailure>,
}

/// Checks that every open interval (x, y) has homology concentrated in its
/// top degree. With `strict`, the intervals of the bounded extension P̂ —
/// (0̂, y), (x, 1̂) and (0̂, 1̂) — are required to behave as well.
pub fn is_cohen_macaulay(p: &FinitePoset, field: FieldSpec, strict: bool) -> CmReport {
    let n = p.len();
    let mut failures = Vec::new();
    let mut check = |lower: Option<usize>, upper: Option<usize>, members: Vec<usize>| {
        let sub = p.restrict(&members);
        let top = sub.longest_chain_degree();
        let betti = reduced_cohomology_dims(&sub, field);
        for (d, v) in betti.entries() {
            if d < top && v > 0 {
                failures.push(CmFailure { lower, upper, degree: d, dim: v, interval_top: top });
            }
        }
    };
    for x in 0..n {
        for y in 0..n {
            if p.less(x, y) {
                let members: Vec<usize> =
                    (0..n).filter(|&z| p.less(x, z) && p.less(z, y)).collect();
                check(Some(x), Some(y), members);
            }
        }
    }
    if strict {
        for y in 0..n {
            check(None, Some(y), (0..n).filter(|&z| p.less(z, y)).collect());
        }
        for x in 0..n {
            check(Some(x), None, (0..n).filter(|&z| p.less(x, z)).collect());
        }
        check(None, None, (0..n).collect());
    }
    CmReport { cohen_macaulay: failures.is_empty(), strict, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_poset(n: usize) -> FinitePoset {
        let pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        FinitePoset::from_less_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn empty_poset_has_minus_one_homology() {
        let p = FinitePoset::antichain(0);
        let t = enumerate_chains(&p, p.longest_chain_degree());
        assert_eq!(t.count(-1), 1);
        assert_eq!(t.count(0), 0);
        let betti = reduced_cohomology_dims(&p, FieldSpec::Rationals);
        assert_eq!(betti.dim(-1), 1);
        assert_eq!(betti.top_degree(), -1);
        assert_eq!(mobius(&p), -1);
    }

    #[test]
    fn antichain_of_three() {
        let p = FinitePoset::antichain(3);
        let t = enumerate_chains(&p, p.longest_chain_degree());
        assert_eq!(t.count(-1), 1);
        assert_eq!(t.count(0), 3);
        assert_eq!(t.count(1), 0);
        let betti = reduced_cohomology_dims(&p, FieldSpec::Rationals);
        assert_eq!(betti.dim(-1), 0, "nonempty poset");
        assert_eq!(betti.dim(0), 2, "three components");
        assert_eq!(mobius(&p), 2);
        assert_eq!(betti.alternating_sum(), 2);
    }

    #[test]
    fn single_point_is_acyclic() {
        let p = FinitePoset::antichain(1);
        let betti = reduced_cohomology_dims(&p, FieldSpec::Rationals);
        assert!(betti.is_trivial());
        assert_eq!(mobius(&p), 0);
    }

    #[test]
    fn chains_are_contractible() {
        for n in 1..5 {
            let p = chain_poset(n);
            let betti = reduced_cohomology_dims(&p, FieldSpec::Rationals);
            assert!(betti.is_trivial(), "chain of {n} elements must be acyclic");
            assert_eq!(mobius(&p), 0);
        }
    }

    #[test]
    fn faces_and_boundaries() {
        assert_eq!(face(&[2, 5, 9], 0), vec![5, 9]);
        assert_eq!(face(&[2, 5, 9], 2), vec![2, 5]);

        let p = chain_poset(3);
        let t = enumerate_chains(&p, 2);
        // Chains: degree 0: three; degree 1: (0,1),(0,2),(1,2); degree 2: (0,1,2).
        assert_eq!(t.count(1), 3);
        assert_eq!(t.count(2), 1);
        let d1 = boundary_matrix(&t, 1);
        let d2 = boundary_matrix(&t, 2);
        assert!(d1.mul(&d2).is_zero(), "d∘d = 0");
        let d0 = boundary_matrix(&t, 0);
        assert!(d0.mul(&d1).is_zero());
        // Augmentation has a single row of ones.
        assert_eq!((d0.rows(), d0.cols()), (1, 3));
        assert_eq!(d0.get(0, 0), 1);
    }

    #[test]
    fn face_of_empty_chain_panics() {
        let r = std::panic::catch_unwind(|| face(&[], 0));
        assert!(r.is_err());
    }

    #[test]
    fn boundary_is_zero_map_when_no_lower_chains() {
        let p = FinitePoset::antichain(2);
        let t = enumerate_chains(&p, 0);
        let d_minus1 = boundary_matrix(&t, -1);
        assert_eq!((d_minus1.rows(), d_minus1.cols()), (0, 1));
        assert!(d_minus1.is_zero());
    }

    #[test]
    fn chain_enumeration_is_lexicographic() {
        let p = FinitePoset::from_less_pairs(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let t = enumerate_chains(&p, 2);
        assert_eq!(
            t.chains(1),
            &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(t.chains(2), &[vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(t.position(2, &[1, 2, 3]), Some(1));
        assert_eq!(t.position(1, &[3, 2]), None);
    }

    #[test]
    fn circle_from_four_points() {
        // Proper part of the face poset of a square boundary: four vertices
        // a, b and four "edges" above them, ordered to make a 4-cycle.
        // Elements 0..4 are points, 4..8 are arcs; arc 4+i covers points i
        // and (i+1) % 4. Order complex is an 8-cycle: H_1 = 1.
        let mut pairs = Vec::new();
        for i in 0..4usize {
            pairs.push((i, 4 + i));
            pairs.push(((i + 1) % 4, 4 + i));
        }
        let p = FinitePoset::from_less_pairs(8, &pairs).unwrap();
        let betti = reduced_cohomology_dims(&p, FieldSpec::Rationals);
        assert_eq!(betti.dim(0), 0);
        assert_eq!(betti.dim(1), 1);
        // -1 for the bounding chain; the 8 points cancel the 8 comparable pairs.
        assert_eq!(mobius(&p), -1);
        assert_eq!(betti.alternating_sum(), mobius(&p));
    }

    #[test]
    fn betti_table_serializes_in_degree_order() {
        let p = FinitePoset::antichain(3);
        let betti = reduced_cohomology_dims(&p, FieldSpec::Rationals);
        let json = serde_json::to_string(&betti).unwrap();
        assert_eq!(json, r#"{"field":"Q","dims":{"-1":0,"0":2}}"#);
    }

    #[test]
    fn mod_two_can_differ_from_rationals() {
        // Face poset of the 6-vertex triangulation of the projective plane
        // (hemi-icosahedron). The order complex is its barycentric
        // subdivision, so homology is that of RP^2: trivial over Q, but
        // one-dimensional in degrees 1 and 2 over F_2.
        let tris: [[usize; 3]; 10] = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
        ];
        let mut edges: Vec<[usize; 2]> = Vec::new();
        for t in &tris {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                if !edges.contains(&[a, b]) {
                    edges.push([a, b]);
                }
            }
        }
        edges.sort();
        assert_eq!(edges.len(), 15, "RP^2_6 has a complete 1-skeleton");

        // Elements: 0..6 vertices, 6..21 edges, 21..31 triangles.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            pairs.push((e[0], 6 + k));
            pairs.push((e[1], 6 + k));
        }
        for (k, t) in tris.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let e = edges.iter().position(|x| *x == [a, b]).unwrap();
                pairs.push((6 + e, 21 + k));
            }
        }
        let p = FinitePoset::from_less_pairs(31, &pairs).unwrap();

        let over_q = reduced_cohomology_dims(&p, FieldSpec::Rationals);
        assert!(over_q.is_trivial(), "RP^2 is rationally acyclic: {over_q:?}");
        let over_f2 = reduced_cohomology_dims(&p, FieldSpec::PrimeField(2));
        assert_eq!(over_f2.dim(0), 0);
        assert_eq!(over_f2.dim(1), 1);
        assert_eq!(over_f2.dim(2), 1);
        // The Euler relation holds over every field.
        assert_eq!(over_q.alternating_sum(), mobius(&p));
        assert_eq!(over_f2.alternating_sum(), mobius(&p));
    }
}
