//! Cochain complexes of finite-dimensional graded vector spaces.
//!
//! Sign conventions, fixed once for the whole crate:
//!
//! * grading is cohomological, differentials raise degree by one;
//! * shift: `C[r]^n = C^(n+r)` with differential `(-1)^r d`;
//! * hom complex: `d(f) = d∘f - (-1)^|f| f∘d`;
//! * tensor product: `d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy`;
//! * mapping cone of `f: S -> T`: `S[1] ⊕ T` with differential `[[-d, 0], [f, d]]`.
//!
//! Bases are the stored ones; matrices are always written in stored bases.

mod chain_map;
mod cohomology;

pub use chain_map::ChainMap;
pub use cohomology::Cohomology;

use std::collections::BTreeMap;

use crate::field::{Matrix, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("differential in degree {degree} has shape {found:?}, expected {expected:?}")]
    Shape { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("d∘d is nonzero starting in degree {degree}")]
    NotSquareZero { degree: i32 },
    #[error("component in degree {degree} has shape {found:?}, expected {expected:?}")]
    MapShape { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("map does not commute with the differentials in degree {degree}")]
    NotChainMap { degree: i32 },
}

/// Dimensions of a finite-support graded vector space. Zero degrees are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedVectorSpace {
    dims: BTreeMap<i32, usize>,
}

impl GradedVectorSpace {
    pub fn new(dims: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut out = BTreeMap::new();
        for (n, d) in dims {
            if d > 0 {
                *out.entry(n).or_insert(0) += d;
            }
        }
        GradedVectorSpace { dims: out }
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.dims.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().map(|(&n, &d)| (n, d))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CochainComplex {
    space: GradedVectorSpace,
    /// `d[n]: C^n -> C^(n+1)`; zero matrices are not stored.
    d: BTreeMap<i32, Matrix>,
}

impl CochainComplex {
    /// Checks shapes and `d∘d = 0`.
    pub fn new(
        dims: impl IntoIterator<Item = (i32, usize)>,
        differentials: impl IntoIterator<Item = (i32, Matrix)>,
    ) -> Result<Self, ComplexError> {
        let space = GradedVectorSpace::new(dims);
        let mut d = BTreeMap::new();
        for (n, m) in differentials {
            let expected = (space.dim(n + 1), space.dim(n));
            if m.shape() != expected {
                return Err(ComplexError::Shape { degree: n, expected, found: m.shape() });
            }
            if !m.is_zero() {
                d.insert(n, m);
            }
        }
        let c = CochainComplex { space, d };
        for (&n, dn) in &c.d {
            if let Some(next) = c.d.get(&(n + 1)) {
                if !next.mul(dn).is_zero() {
                    return Err(ComplexError::NotSquareZero { degree: n });
                }
            }
        }
        Ok(c)
    }

    pub fn zero() -> Self {
        CochainComplex::default()
    }

    /// `k^dim` concentrated in a single degree.
    pub fn concentrated(degree: i32, dim: usize) -> Self {
        CochainComplex::new([(degree, dim)], []).expect("no differentials")
    }

    /// The two-term complex `k^dim -> k^dim` in degrees `degree, degree+1`
    /// with differential `c * id`.
    pub fn two_term(degree: i32, dim: usize, c: &Scalar) -> Self {
        CochainComplex::new([(degree, dim), (degree + 1, dim)], [(degree, Matrix::scalar_identity(dim, c))])
            .expect("square-zero")
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn dim(&self, n: i32) -> usize {
        self.space.dim(n)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.space.support()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.space.support().next()?;
        let hi = self.space.support().last()?;
        Some((lo, hi))
    }

    /// `d^n` as a `dim(n+1) x dim(n)` matrix (possibly zero).
    pub fn differential(&self, n: i32) -> Matrix {
        self.d.get(&n).cloned().unwrap_or_else(|| Matrix::zero(self.dim(n + 1), self.dim(n)))
    }

    /// Nonzero differentials.
    pub fn differentials(&self) -> impl Iterator<Item = (i32, &Matrix)> {
        self.d.iter().map(|(&n, m)| (n, m))
    }

    pub fn apply_d(&self, n: i32, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.dim(n), "vector length does not match degree {n}");
        match self.d.get(&n) {
            Some(m) => m.mul_vec(v),
            None => vec![Scalar::zero(); self.dim(n + 1)],
        }
    }

    pub fn cohomology(&self, n: i32) -> Cohomology {
        Cohomology::compute(self, n)
    }

    /// `dim H^n` for every degree in the support.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        self.support().map(|n| (n, self.cohomology(n).dim())).filter(|&(_, d)| d > 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.support().all(|n| self.cohomology(n).dim() == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space.iter().map(|(n, d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// `C[r]`: `C[r]^n = C^(n+r)`, differential multiplied by `(-1)^r`.
    pub fn shift(&self, r: i32) -> CochainComplex {
        let sign = Scalar::sign(r as i64);
        CochainComplex {
            space: GradedVectorSpace::new(self.space.iter().map(|(n, d)| (n - r, d))),
            d: self.d.iter().map(|(&n, m)| (n - r, m.scale(&sign))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &CochainComplex) -> CochainComplex {
        let degrees: Vec<i32> = self.support().chain(other.support()).collect();
        let dims = degrees.iter().map(|&n| (n, self.dim(n) + other.dim(n)));
        let diffs: Vec<(i32, Matrix)> =
            degrees.iter().map(|&n| (n, Matrix::block_diag(&self.differential(n), &other.differential(n)))).collect();
        let mut uniq = BTreeMap::new();
        for (n, d) in dims {
            uniq.insert(n, d);
        }
        CochainComplex::new(uniq, diffs).expect("direct sum of complexes is a complex")
    }

    /// Total complex of `C ⊗ D`. In degree `n` the basis runs over `p` ascending
    /// (with `q = n - p`), then `x ⊗ y` with index `x * dim D^q + y`.
    pub fn tensor(&self, other: &CochainComplex) -> CochainComplex {
        let layout = TensorLayout::new(self, other);
        let mut diffs = Vec::new();
        for &n in layout.blocks.keys() {
            let rows = layout.dim(n + 1);
            let cols = layout.dim(n);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(rows, cols);
            for &(p, off) in &layout.blocks[&n] {
                let q = n - p;
                // dx ⊗ y
                if let Some(target) = layout.offset(n + 1, p + 1) {
                    let block = Matrix::kron(&self.differential(p), &Matrix::identity(other.dim(q)));
                    m.place(target, off, &block);
                }
                // (-1)^p x ⊗ dy
                if let Some(target) = layout.offset(n + 1, p) {
                    let block = Matrix::kron(&Matrix::identity(self.dim(p)), &other.differential(q))
                        .scale(&Scalar::sign(p as i64));
                    m.place(target, off, &block);
                }
            }
            diffs.push((n, m));
        }
        let dims: Vec<(i32, usize)> = layout.blocks.keys().map(|&n| (n, layout.dim(n))).collect();
        CochainComplex::new(dims, diffs).expect("tensor product of complexes is a complex")
    }
}

/// Degreewise block layout of a tensor product `C ⊗ D`.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    /// degree n -> [(p, offset)] for the blocks `C^p ⊗ D^(n-p)`
    blocks: BTreeMap<i32, Vec<(i32, usize)>>,
    dims: BTreeMap<i32, usize>,
    right_dims: BTreeMap<i32, usize>,
}

impl TensorLayout {
    pub fn new(left: &CochainComplex, right: &CochainComplex) -> Self {
        let mut blocks: BTreeMap<i32, Vec<(i32, usize)>> = BTreeMap::new();
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        // Outer loop over p ascending, so blocks within a degree are ordered by p.
        for (p, dp) in left.space.iter() {
            for (q, dq) in right.space.iter() {
                let n = p + q;
                let entry = dims.entry(n).or_insert(0);
                blocks.entry(n).or_default().push((p, *entry));
                *entry += dp * dq;
            }
        }
        let right_dims = right.space.iter().collect();
        TensorLayout { blocks, dims, right_dims }
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    /// Offset of the block `C^p ⊗ D^(n-p)` inside degree `n`.
    pub fn offset(&self, n: i32, p: i32) -> Option<usize> {
        self.blocks.get(&n)?.iter().find(|&&(pp, _)| pp == p).map(|&(_, off)| off)
    }

    /// Index of `x ⊗ y` with `x` the `a`-th basis vector of `C^p`, `y` the `b`-th of `D^q`.
    pub fn index(&self, p: i32, a: usize, q: i32, b: usize) -> Option<usize> {
        let off = self.offset(p + q, p)?;
        Some(off + a * self.right_dims.get(&q).copied().unwrap_or(0) + b)
    }
}

/// `Hom(C, D)` with `Hom^n = ∏_i Hom(C^i, D^(i+n))`.
///
/// Basis of degree `n`: blocks by source degree `i` ascending; inside a block
/// the matrix unit `E_(r,c)` (target index `r`, source index `c`) has index
/// `r * dim C^i + c`.
pub fn hom_complex(source: &CochainComplex, target: &CochainComplex) -> CochainComplex {
    let layout = HomLayout::new(source, target);
    let mut diffs = Vec::new();
    for &n in layout.blocks.keys() {
        let rows = layout.dim(n + 1);
        let cols = layout.dim(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(rows, cols);
        for col in 0..cols {
            let f = layout.unit_map(n, col);
            let df = layout.differential_of(source, target, n, &f);
            let v = layout.flatten(n + 1, &df);
            for (r, x) in v.into_iter().enumerate() {
                m.set(r, col, x);
            }
        }
        diffs.push((n, m));
    }
    let dims: Vec<(i32, usize)> = layout.blocks.keys().map(|&n| (n, layout.dim(n))).collect();
    CochainComplex::new(dims, diffs).expect("hom complex is a complex")
}

/// Block layout of `Hom(C, D)`; converts between flat coordinates and
/// families of matrices indexed by source degree.
#[derive(Debug, Clone)]
pub struct HomLayout {
    blocks: BTreeMap<i32, Vec<(i32, usize, usize, usize)>>, // n -> [(i, rows, cols, offset)]
}

impl HomLayout {
    pub fn new(source: &CochainComplex, target: &CochainComplex) -> Self {
        let mut blocks: BTreeMap<i32, Vec<(i32, usize, usize, usize)>> = BTreeMap::new();
        for (i, ci) in source.space.iter() {
            for (j, dj) in target.space.iter() {
                let n = j - i;
                let list = blocks.entry(n).or_default();
                let off = list.last().map_or(0, |&(_, r, c, o)| o + r * c);
                list.push((i, dj, ci, off));
            }
        }
        HomLayout { blocks }
    }

    pub fn dim(&self, n: i32) -> usize {
        self.blocks.get(&n).and_then(|l| l.last()).map_or(0, |&(_, r, c, o)| o + r * c)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.blocks.keys().copied()
    }

    /// Unflattens a degree-`n` coordinate vector into components by source degree.
    pub fn unflatten(&self, n: i32, v: &[Scalar]) -> BTreeMap<i32, Matrix> {
        let mut out = BTreeMap::new();
        if let Some(list) = self.blocks.get(&n) {
            for &(i, rows, cols, off) in list {
                let mut m = Matrix::zero(rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m.set(r, c, v[off + r * cols + c].clone());
                    }
                }
                out.insert(i, m);
            }
        }
        out
    }

    pub fn flatten(&self, n: i32, comps: &BTreeMap<i32, Matrix>) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim(n)];
        if let Some(list) = self.blocks.get(&n) {
            for &(i, _, cols, off) in list {
                if let Some(m) = comps.get(&i) {
                    for (r, c, x) in m.entries() {
                        v[off + r * cols + c] = x.clone();
                    }
                }
            }
        }
        v
    }

    fn unit_map(&self, n: i32, idx: usize) -> BTreeMap<i32, Matrix> {
        let mut v = vec![Scalar::zero(); self.dim(n)];
        v[idx] = Scalar::one();
        self.unflatten(n, &v)
    }

    fn differential_of(
        &self,
        source: &CochainComplex,
        target: &CochainComplex,
        n: i32,
        f: &BTreeMap<i32, Matrix>,
    ) -> BTreeMap<i32, Matrix> {
        let sign = Scalar::sign(n as i64);
        let mut out = BTreeMap::new();
        for (i, _) in source.space.iter() {
            let rows = target.dim(i + n + 1);
            let cols = source.dim(i);
            let mut m = Matrix::zero(rows, cols);
            if let Some(fi) = f.get(&i) {
                m = m.add(&target.differential(i + n).mul(fi));
            }
            if let Some(fi1) = f.get(&(i + 1)) {
                m = m.sub(&fi1.mul(&source.differential(i)).scale(&sign));
            }
            out.insert(i, m);
        }
        out
    }
}
