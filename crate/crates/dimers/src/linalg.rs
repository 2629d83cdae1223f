//! Exact rank computations over the rationals.
//!
//! Matrices are given as sparse integer rows.  Elimination is fraction-free:
//! a row is reduced against a pivot row by cross-multiplying with the two
//! leading entries, and every stored row is divided by the gcd of its
//! entries, so all intermediate values stay integral and small.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A sparse integer vector: column index to non-zero entry.
pub type SparseVec = BTreeMap<usize, BigInt>;

/// Builds a sparse vector from `(column, coefficient)` pairs, adding
/// repeated columns together and dropping zeros.
pub fn sparse(entries: impl IntoIterator<Item = (usize, i64)>) -> SparseVec {
    let mut v = SparseVec::new();
    for (c, x) in entries {
        *v.entry(c).or_insert_with(BigInt::zero) += x;
    }
    v.retain(|_, x| !x.is_zero());
    v
}

fn normalize(v: &mut SparseVec) {
    let g = v.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::from(1) {
        for x in v.values_mut() {
            *x /= &g;
        }
    }
    if v.values().next().is_some_and(|x| x.is_negative()) {
        for x in v.values_mut() {
            *x = -&*x;
        }
    }
}

/// `a·row − b·pivot` where `a`, `b` are the leading entries of pivot and row.
fn eliminate(row: &SparseVec, pivot: &SparseVec, col: usize) -> SparseVec {
    let a = &pivot[&col];
    let b = &row[&col];
    let mut out = SparseVec::new();
    for (&c, x) in row {
        out.insert(c, a * x);
    }
    for (&c, y) in pivot {
        let e = out.entry(c).or_insert_with(BigInt::zero);
        *e -= b * y;
    }
    out.retain(|_, x| !x.is_zero());
    normalize(&mut out);
    out
}

/// An incrementally built row-echelon basis of a row space.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    /// An empty basis.
    pub fn new() -> Echelon {
        Echelon::default()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        normalize(&mut v);
        while let Some((&c, _)) = v.iter().next() {
            match self.pivots.get(&c) {
                Some(p) => v = eliminate(&v, p, c),
                None => break,
            }
        }
        v
    }

    /// Adds `v` to the basis; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        match r.keys().next() {
            Some(&c) => {
                self.pivots.insert(c, r);
                true
            }
            None => false,
        }
    }

    /// Current rank.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Rank over `Q` of the matrix whose rows are `rows`.
pub fn rank(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Rank over `Q` of a dense integer matrix.
pub fn rank_dense(rows: &[Vec<i64>]) -> usize {
    rank(rows.iter().map(|r| sparse(r.iter().copied().enumerate())))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank via floating point Gaussian elimination with partial pivoting;
    /// adequate as an oracle for small, well-conditioned integer matrices.
    fn float_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            else {
                break;
            };
            if m[p][c].abs() < 1e-9 {
                continue;
            }
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank {
                    let f = m[r][c] / m[rank][c];
                    #[allow(clippy::needless_range_loop)]
                    for k in 0..cols {
                        m[r][k] -= f * m[rank][k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_dense(&[]), 0);
        assert_eq!(rank_dense(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank_dense(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(
            rank_dense(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]),
            2
        );
        assert_eq!(rank_dense(&[vec![2, 0], vec![0, 3]]), 2);
    }

    #[test]
    fn agrees_with_float_oracle() {
        // Deterministic pseudo-random small matrices.
        let mut s: u64 = 12345;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 33) % 5) as i64 - 2
        };
        for n in 1..7 {
            for _ in 0..40 {
                let mut rows: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..n + 1).map(|_| next()).collect())
                    .collect();
                if n > 2 {
                    // Force a dependency now and then.
                    let dep: Vec<i64> = rows[0]
                        .iter()
                        .zip(&rows[1])
                        .map(|(a, b)| 2 * a - b)
                        .collect();
                    rows[n - 1] = dep;
                }
                assert_eq!(rank_dense(&rows), float_rank(&rows), "{rows:?}");
            }
        }
    }

    #[test]
    fn membership() {
        let mut e = Echelon::new();
        e.insert(sparse([(0, 1), (1, 1)]));
        e.insert(sparse([(1, 1), (2, 1)]));
        assert!(e.reduce(sparse([(0, 1), (2, -1)])).is_empty());
        assert!(!e.reduce(sparse([(0, 1)])).is_empty());
    }
}
