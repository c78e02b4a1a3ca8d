use std::collections::BTreeMap;

use super::Scalar;

/// Dense column vector over the rationals.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    assert_eq!(acc.len(), v.len(), "vector length mismatch");
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Sparse matrix over the rationals. Only nonzero entries are stored, keyed
/// by `(row, col)`, so iteration order is deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Matrix({}x{}) [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Scalar::one());
        }
        m
    }

    pub fn scalar_identity(n: usize, c: &Scalar) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let mut m = Matrix::zero(rows.len(), cols);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, x) in row.into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(), cols)
    }

    /// Builds a `rows x columns.len()` matrix whose j-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has wrong length");
            for (r, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.entries.insert((r, c), x.clone());
                }
            }
        }
        m
    }

    /// Fails if an index is out of bounds.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Scalar)>,
    ) -> Result<Self, (usize, usize)> {
        let mut m = Matrix::zero(rows, cols);
        for ((r, c), x) in entries {
            if r >= rows || c >= cols {
                return Err((r, c));
            }
            m.set(r, c, x);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if x.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), x);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        let v = self.get(r, c) + x;
        self.set(r, c, v);
    }

    /// Nonzero entries in `(row, col)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), x)| (r, c, x))
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        let mut cols = vec![zero_vector(self.rows); self.cols];
        for (&(r, c), x) in &self.entries {
            cols[c][r] = x.clone();
        }
        cols
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![zero_vector(self.cols); self.rows];
        for (&(r, c), x) in &self.entries {
            d[r][c] = x.clone();
        }
        d
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), x)| ((c, r), x.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        if c.is_zero() {
            return Matrix::zero(self.rows, self.cols);
        }
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|(&k, x)| (k, c * x)).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let mut out = self.clone();
        for (&(r, c), x) in &other.entries {
            out.add_at(r, c, x);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(r, c), x) in &other.entries {
            by_row.entry(r).or_default().push((c, x));
        }
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    *acc.entry((i, j)).or_default() += a * b;
                }
            }
        }
        acc.retain(|_, x| !x.is_zero());
        Matrix { rows: self.rows, cols: other.cols, entries: acc }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let mut out = zero_vector(self.rows);
        for (&(r, c), x) in &self.entries {
            if !v[c].is_zero() {
                out[r] += x * &v[c];
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for (&(r, c), x) in &block.entries {
            self.add_at(r0 + r, c0 + c, x);
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zero(rows, cols);
        for (&(r, c), x) in self.entries.range((r0, 0)..(r0 + rows, 0)) {
            if c >= c0 && c < c0 + cols {
                m.entries.insert((r - r0, c - c0), x.clone());
            }
        }
        m
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        let mut m = Matrix::zero(a.rows + b.rows, a.cols + b.cols);
        m.place(0, 0, a);
        m.place(a.rows, a.cols, b);
        m
    }

    /// Kronecker product `a ⊗ b`, with row index `i * b.rows + k`.
    pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
        let mut m = Matrix::zero(a.rows * b.rows, a.cols * b.cols);
        for (&(i, j), x) in &a.entries {
            for (&(k, l), y) in &b.entries {
                m.entries.insert((i * b.rows + k, j * b.cols + l), x * y);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m = Matrix::zero(2, 2);
        m.set(0, 1, Scalar::from_int(3));
        m.add_at(0, 1, &Scalar::from_int(-3));
        assert!(m.is_zero());
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn product_and_kron() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[0, 1]]);
        let b = Matrix::from_int_rows(&[&[1, -2], &[0, 1]]);
        assert_eq!(a.mul(&b), Matrix::identity(2));
        let k = Matrix::kron(&Matrix::identity(2), &a);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(2, 3), Scalar::from_int(2));
        assert_eq!(a.submatrix(0, 1, 1, 1).get(0, 0), Scalar::from_int(2));
    }
}
