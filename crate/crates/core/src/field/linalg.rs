//! Exact elimination over the rationals.
//!
//! `rank` runs fraction-free (Bareiss) elimination on an integer matrix
//! obtained by clearing denominators row by row. `kernel_basis` and `solve`
//! go through a reduced row echelon form over the rationals; the two routes
//! are independent and are cross-checked in the tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{zero_vector, Matrix, Vector};
use super::scalar::{mul_mod, pow_mod};
use super::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: matrix has {rows} rows, right-hand side has length {rhs}")]
pub struct DimensionMismatch {
    pub rows: usize,
    pub rhs: usize,
}

/// Rank over the rationals via fraction-free elimination.
pub fn rank(m: &Matrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return 0;
    }
    let mut a = integer_rows(m);
    let rows = a.len();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // Bareiss: the division is exact.
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    m.to_dense()
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Reduced row echelon form together with the pivot columns.
pub struct Rref {
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

pub fn rref(m: &Matrix) -> Rref {
    rref_dense(m.to_dense(), m.cols())
}

fn rref_dense(mut a: Vec<Vector>, cols: usize) -> Rref {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Rref { rows: a, pivots, cols }
}

/// Basis of the null space; one vector per free column, with a 1 in that column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let n = m.cols();
    let Rref { rows, pivots, .. } = rref(m);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = zero_vector(n);
            v[free] = Scalar::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
/// A returned solution has been checked by substitution.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vector>, DimensionMismatch> {
    if m.rows() != b.len() {
        return Err(DimensionMismatch { rows: m.rows(), rhs: b.len() });
    }
    let n = m.cols();
    let mut aug = m.to_dense();
    for (row, y) in aug.iter_mut().zip(b) {
        row.push(y.clone());
    }
    let Rref { rows, pivots, .. } = rref_dense(aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = zero_vector(n);
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    assert_eq!(m.mul_vec(&x), b, "solve produced a vector that fails substitution");
    Ok(Some(x))
}

/// Indices of a maximal linearly independent prefix-greedy subset of `vectors`.
pub fn independent_subset(len: usize, vectors: &[Vector]) -> Vec<usize> {
    rref(&Matrix::from_columns(len, vectors)).pivots
}

/// Coordinates with respect to a fixed list of linearly independent vectors.
///
/// Precomputes the row operations that bring the basis to `[I; 0]`, so each
/// query is a single matrix-vector product.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    ambient: usize,
    rank: usize,
    transform: Vec<Vector>,
}

impl SpanSolver {
    /// Panics if `basis` is linearly dependent.
    pub fn new(ambient: usize, basis: &[Vector]) -> Self {
        let k = basis.len();
        let aug: Vec<Vector> = (0..ambient)
            .map(|r| {
                let mut row: Vector = basis.iter().map(|v| v[r].clone()).collect();
                row.extend((0..ambient).map(|c| if c == r { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        let red = rref_dense(aug, k + ambient);
        assert!(
            red.pivots.len() >= k && red.pivots[..k].iter().copied().eq(0..k),
            "SpanSolver basis is linearly dependent"
        );
        // [B | I] has full row rank, so no rows were dropped and the right
        // block is the invertible transform E with E B = [I; 0].
        let transform: Vec<Vector> = red.rows.iter().map(|row| row[k..].to_vec()).collect();
        SpanSolver { ambient, rank: k, transform }
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient, "SpanSolver: wrong vector length");
        let mut y = Vec::with_capacity(self.transform.len());
        for row in &self.transform {
            let mut acc = Scalar::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            y.push(acc);
        }
        if y[self.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        y.truncate(self.rank);
        Some(y)
    }
}

/// Rank modulo a prime, or `None` when some denominator vanishes mod `p`.
/// Used only as a fast filter inside randomized searches.
pub fn rank_mod_p(m: &Matrix, p: u64) -> Option<usize> {
    let mut a = vec![vec![0u64; m.cols()]; m.rows()];
    for (r, c, x) in m.entries() {
        a[r][c] = x.mod_p(p)?;
    }
    let rows = a.len();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        for i in (r + 1)..rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = mul_mod(a[i][c], inv, p);
            for j in c..cols {
                let sub = mul_mod(f, a[r][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
        r += 1;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::zero(0, 0)), 0);
        assert_eq!(rank(&Matrix::identity(3)), 3);
        assert_eq!(rank(&Matrix::from_int_rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zero(2, 3)).len(), 3);
        let k = kernel_basis(&Matrix::from_int_rows(&[&[1, 1]]));
        assert_eq!(k, vec![vec![s(-1), s(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![s(3), s(-1)];
        assert_eq!(solve(&Matrix::identity(2), &b).unwrap(), Some(b.clone()));
        let m = Matrix::from_int_rows(&[&[1, 1]]);
        let x = solve(&m, &[s(2)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], s(2));
        assert_eq!(solve(&Matrix::from_int_rows(&[&[0]]), &[s(1)]).unwrap(), None);
        assert!(solve(&m, &[s(1), s(2)]).is_err());
    }

    #[test]
    fn span_solver_coordinates() {
        let basis = vec![vec![s(1), s(1), s(0)], vec![s(0), s(1), s(1)]];
        let sv = SpanSolver::new(3, &basis);
        assert_eq!(sv.coords(&[s(2), s(5), s(3)]), Some(vec![s(2), s(3)]));
        assert_eq!(sv.coords(&[s(1), s(0), s(0)]), None);
        let empty = SpanSolver::new(2, &[]);
        assert_eq!(empty.coords(&[s(0), s(0)]), Some(vec![]));
        assert_eq!(empty.coords(&[s(1), s(0)]), None);
    }

    #[test]
    fn mod_p_rank_bounds_rational_rank() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(rank_mod_p(&m, 101), Some(2));
        // det = -2 vanishes mod 2
        assert_eq!(rank_mod_p(&m, 2), Some(1));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |xs| {
                let rows = (0..r)
                    .map(|i| (0..c).map(|j| Scalar::from_frac(xs[i * c + j].0, xs[i * c + j].1)).collect())
                    .collect();
                Matrix::from_rows(rows, c)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            prop_assert_eq!(rank(&m), rref(&m).pivots.len());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn solve_is_verified(m in small_matrix(), seed in proptest::collection::vec(-3i64..=3, 5)) {
            let x0: Vector = (0..m.cols()).map(|i| s(seed[i])).collect();
            let b = m.mul_vec(&x0);
            let x = solve(&m, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
        }
    }
}
