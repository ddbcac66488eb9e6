//! Exact rank computation for integer matrices.
//!
//! Boundary matrices and relation matrices both have entries in {-1, 0, 1},
//! so a matrix is stored over the integers and interpreted in the chosen
//! field only when its rank is taken: fraction-free Bareiss elimination with
//! big-integer arithmetic for the rationals, ordinary elimination for `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{inv_mod, FieldSpec};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Integer matrix product, for checking identities like d.d = 0.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur.checked_add(a.checked_mul(rhs.get(k, j)).unwrap()).unwrap());
                }
            }
        }
        out
    }

    /// Rank of the matrix viewed over the given field.
    pub fn rank(&self, field: FieldSpec) -> usize {
        match field {
            FieldSpec::Rationals => self.rank_rationals(),
            FieldSpec::PrimeField(p) => self.rank_mod(p),
        }
    }

    /// Fraction-free Gaussian elimination (Bareiss). All intermediate values
    /// are integers — minors of the input — and every division is exact.
    fn rank_rationals(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect();
        let mut prev = BigInt::one();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Smallest-magnitude pivot keeps growth down on these sparse,
            // mostly-unimodular matrices.
            let mut pivot: Option<usize> = None;
            for i in r..self.rows {
                if !m[i][c].is_zero()
                    && pivot.is_none_or(|p| m[i][c].abs() < m[p][c].abs())
                {
                    pivot = Some(i);
                }
            }
            let Some(p_row) = pivot else { continue };
            m.swap(r, p_row);
            let (head, tail) = m.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                // Even rows with a zero in the pivot column must be scaled
                // by pivot/prev, or later divisions stop being exact.
                for j in (c + 1)..self.cols {
                    let num = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
                row[c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }

    fn rank_mod(&self, p: u64) -> usize {
        let pi = p as i64;
        let mut m: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).rem_euclid(pi) as u64).collect())
            .collect();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p_row) = (r..self.rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, p_row);
            let inv = inv_mod(m[r][c], p);
            for x in &mut m[r][c..] {
                *x = mulp(*x, inv, p);
            }
            let (head, tail) = m.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = mulp(f, pivot_row[j], p);
                    row[j] = (row[j] + p - sub) % p;
                }
            }
            r += 1;
        }
        r
    }
}

fn mulp(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}
