use std::collections::BTreeMap;

use crate::field::{rank, Matrix, Scalar};

use super::{CochainComplex, ComplexError};

/// A graded map `source -> target` of some degree; component `n` sends
/// `source^n` to `target^(n+degree)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: CochainComplex,
    target: CochainComplex,
    degree: i32,
    components: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    /// Checks shapes only; use [`ChainMap::is_closed`] for compatibility with `d`.
    pub fn new(
        source: CochainComplex,
        target: CochainComplex,
        degree: i32,
        components: impl IntoIterator<Item = (i32, Matrix)>,
    ) -> Result<Self, ComplexError> {
        let mut comps = BTreeMap::new();
        for (n, m) in components {
            let expected = (target.dim(n + degree), source.dim(n));
            if m.shape() != expected {
                return Err(ComplexError::MapShape { degree: n, expected, found: m.shape() });
            }
            if !m.is_zero() {
                comps.insert(n, m);
            }
        }
        Ok(ChainMap { source, target, degree, components: comps })
    }

    pub fn identity(c: &CochainComplex) -> Self {
        let comps: Vec<(i32, Matrix)> = c.space().iter().map(|(n, d)| (n, Matrix::identity(d))).collect();
        ChainMap::new(c.clone(), c.clone(), 0, comps).expect("identity has matching shapes")
    }

    pub fn zero(source: &CochainComplex, target: &CochainComplex, degree: i32) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), degree, components: BTreeMap::new() }
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn component(&self, n: i32) -> Matrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.target.dim(n + self.degree), self.source.dim(n)))
    }

    pub fn components(&self) -> impl Iterator<Item = (i32, &Matrix)> {
        self.components.iter().map(|(&n, m)| (n, m))
    }

    /// First degree where `d∘f ≠ (-1)^deg f∘d`, if any.
    pub fn closedness_defect(&self) -> Option<i32> {
        let sign = Scalar::sign(self.degree as i64);
        let degrees: Vec<i32> = self.source.support().collect();
        degrees.into_iter().find(|&n| {
            let lhs = self.target.differential(n + self.degree).mul(&self.component(n));
            let rhs = self.component(n + 1).mul(&self.source.differential(n)).scale(&sign);
            lhs != rhs
        })
    }

    pub fn is_closed(&self) -> bool {
        self.closedness_defect().is_none()
    }

    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        assert_eq!(first.target, self.source, "composable maps required");
        let degree = self.degree + first.degree;
        let comps: Vec<(i32, Matrix)> =
            first.source.support().map(|n| (n, self.component(n + first.degree).mul(&first.component(n)))).collect();
        ChainMap::new(first.source.clone(), self.target.clone(), degree, comps).expect("shapes compose")
    }

    /// Matrix of `H^n(source) -> H^n(target)` in representative bases.
    /// Requires a closed degree-0 map.
    pub fn induced_map(&self, n: i32) -> Result<Matrix, ComplexError> {
        if let Some(degree) = self.closedness_defect() {
            return Err(ComplexError::NotChainMap { degree });
        }
        let hs = self.source.cohomology(n);
        let ht = self.target.cohomology(n + self.degree);
        let f = self.component(n);
        let cols: Vec<_> = hs
            .representatives()
            .iter()
            .map(|z| ht.class_of(&f.mul_vec(z)).expect("closed maps send cycles to cycles"))
            .collect();
        Ok(Matrix::from_columns(ht.dim(), &cols))
    }

    /// Whether every induced map on cohomology is an isomorphism.
    pub fn is_quasi_iso(&self) -> Result<bool, ComplexError> {
        if let Some(degree) = self.closedness_defect() {
            return Err(ComplexError::NotChainMap { degree });
        }
        assert_eq!(self.degree, 0, "quasi-isomorphisms are degree-0 maps");
        let degrees: std::collections::BTreeSet<i32> = self.source.support().chain(self.target.support()).collect();
        for n in degrees {
            let m = self.induced_map(n)?;
            if m.rows() != m.cols() || rank(&m) != m.rows() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mapping cone `source[1] ⊕ target` with differential `[[-d, 0], [f, d]]`.
    pub fn mapping_cone(&self) -> Result<CochainComplex, ComplexError> {
        if let Some(degree) = self.closedness_defect() {
            return Err(ComplexError::NotChainMap { degree });
        }
        assert_eq!(self.degree, 0, "cones are taken of degree-0 maps");
        let s = &self.source;
        let t = &self.target;
        let degrees: std::collections::BTreeSet<i32> = s.support().map(|n| n - 1).chain(t.support()).collect();
        let dims: Vec<(i32, usize)> = degrees.iter().map(|&n| (n, s.dim(n + 1) + t.dim(n))).collect();
        let diffs: Vec<(i32, Matrix)> = degrees
            .iter()
            .map(|&n| {
                let mut m = Matrix::zero(s.dim(n + 2) + t.dim(n + 1), s.dim(n + 1) + t.dim(n));
                m.place(0, 0, &s.differential(n + 1).neg());
                m.place(s.dim(n + 2), 0, &self.component(n + 1));
                m.place(s.dim(n + 2), s.dim(n + 1), &t.differential(n));
                (n, m)
            })
            .collect();
        Ok(CochainComplex::new(dims, diffs).expect("cone of a chain map is a complex"))
    }

    /// Independent route to [`ChainMap::is_quasi_iso`]: the mapping cone is acyclic.
    pub fn cone_is_acyclic(&self) -> Result<bool, ComplexError> {
        Ok(self.mapping_cone()?.is_acyclic())
    }
}
