use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::complex::ChainMap;
use crate::field::Matrix;

use super::{DgCategory, Element};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("object map has {found} entries, source has {expected} objects")]
    ObjectCount { expected: usize, found: usize },
    #[error("object {0} is sent outside the target")]
    ObjectOutOfRange(usize),
    #[error("hom map {from}->{to} degree {degree} has shape {found:?}, expected {expected:?}")]
    Shape { from: String, to: String, degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("invalid functor: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<FunctorViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    NotChainMap { source: String, target: String, degree: i32 },
    Unit { object: String },
    Composition { objects: [String; 3], degrees: (i32, i32), indices: (usize, usize) },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::NotChainMap { source, target, degree } => {
                write!(f, "hom map {source}->{target} does not commute with d in degree {degree}")
            }
            FunctorViolation::Unit { object } => write!(f, "unit of {object} is not preserved"),
            FunctorViolation::Composition { objects: [x, y, z], degrees: (p, q), indices: (a, b) } => write!(
                f,
                "composition not preserved for g = {y}->{z} degree {p} basis {a}, f = {x}->{y} degree {q} basis {b}"
            ),
        }
    }
}

/// A dg functor given by an object map and degreewise matrices
/// `hom(x, y)^n -> hom'(Fx, Fy)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgFunctor {
    source: Arc<DgCategory>,
    target: Arc<DgCategory>,
    objects: Vec<usize>,
    maps: BTreeMap<(usize, usize), BTreeMap<i32, Matrix>>,
}

impl DgFunctor {
    /// Checks shapes; the functor axioms are checked by [`DgFunctor::validate`].
    pub fn new(
        source: Arc<DgCategory>,
        target: Arc<DgCategory>,
        objects: Vec<usize>,
        maps: BTreeMap<(usize, usize), BTreeMap<i32, Matrix>>,
    ) -> Result<Self, FunctorError> {
        if objects.len() != source.len() {
            return Err(FunctorError::ObjectCount { expected: source.len(), found: objects.len() });
        }
        if let Some(i) = objects.iter().position(|&o| o >= target.len()) {
            return Err(FunctorError::ObjectOutOfRange(i));
        }
        let mut clean = BTreeMap::new();
        for ((x, y), comps) in maps {
            if x >= source.len() || y >= source.len() {
                return Err(FunctorError::ObjectOutOfRange(x.max(y)));
            }
            let mut kept = BTreeMap::new();
            for (n, m) in comps {
                let expected = (target.hom(objects[x], objects[y]).dim(n), source.hom(x, y).dim(n));
                if m.shape() != expected {
                    return Err(FunctorError::Shape {
                        from: source.name(x).into(),
                        to: source.name(y).into(),
                        degree: n,
                        expected,
                        found: m.shape(),
                    });
                }
                if !m.is_zero() {
                    kept.insert(n, m);
                }
            }
            if !kept.is_empty() {
                clean.insert((x, y), kept);
            }
        }
        Ok(DgFunctor { source, target, objects, maps: clean })
    }

    pub fn identity(t: Arc<DgCategory>) -> Self {
        let mut maps = BTreeMap::new();
        for x in 0..t.len() {
            for y in 0..t.len() {
                let comps = t.hom(x, y).space().iter().map(|(n, d)| (n, Matrix::identity(d))).collect();
                maps.insert((x, y), comps);
            }
        }
        DgFunctor::new(t.clone(), t.clone(), (0..t.len()).collect(), maps).expect("identity functor")
    }

    /// Inclusion of the full subcategory `sub` (whose objects must be named
    /// as in `t`) into `t`.
    pub fn inclusion(sub: Arc<DgCategory>, t: Arc<DgCategory>) -> Option<Self> {
        let objects: Vec<usize> = sub.objects().iter().map(|o| t.index_of(o)).collect::<Option<_>>()?;
        let mut maps = BTreeMap::new();
        for x in 0..sub.len() {
            for y in 0..sub.len() {
                if sub.hom(x, y) != t.hom(objects[x], objects[y]) {
                    return None;
                }
                let comps = sub.hom(x, y).space().iter().map(|(n, d)| (n, Matrix::identity(d))).collect();
                maps.insert((x, y), comps);
            }
        }
        DgFunctor::new(sub, t, objects, maps).ok()
    }

    /// `x ↦ (x, a0)`, `f ↦ f ⊗ e_(a0)` into `t ⊗ a`, where `a0` is the first
    /// object of `a` and `product` is `tensor(t, a)`.
    pub fn tensor_inclusion(t: Arc<DgCategory>, a: &DgCategory, product: Arc<DgCategory>) -> Self {
        let m = a.len();
        let unit = a.unit(0);
        let objects: Vec<usize> = (0..t.len()).map(|x| x * m).collect();
        let mut maps = BTreeMap::new();
        for x in 0..t.len() {
            for y in 0..t.len() {
                let layout = crate::complex::TensorLayout::new(t.hom(x, y), a.hom(0, 0));
                let mut comps = BTreeMap::new();
                for (n, d) in t.hom(x, y).space().iter() {
                    let mut mat = Matrix::zero(product.hom(x * m, y * m).dim(n), d);
                    for i in 0..d {
                        for (j, c) in unit.iter().enumerate() {
                            if !c.is_zero() {
                                mat.set(layout.index(n, i, 0, j).expect("degree-0 unit"), i, c.clone());
                            }
                        }
                    }
                    comps.insert(n, mat);
                }
                maps.insert((x, y), comps);
            }
        }
        DgFunctor::new(t, product, objects, maps).expect("tensor inclusion shapes")
    }

    pub fn source(&self) -> &Arc<DgCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgCategory> {
        &self.target
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.objects
    }

    pub fn component(&self, x: usize, y: usize, n: i32) -> Matrix {
        self.maps.get(&(x, y)).and_then(|m| m.get(&n)).cloned().unwrap_or_else(|| {
            Matrix::zero(self.target.hom(self.objects[x], self.objects[y]).dim(n), self.source.hom(x, y).dim(n))
        })
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), BTreeMap<i32, Matrix>> {
        &self.maps
    }

    pub fn hom_map(&self, x: usize, y: usize) -> ChainMap {
        let src = self.source.hom(x, y).clone();
        let tgt = self.target.hom(self.objects[x], self.objects[y]).clone();
        let comps: Vec<(i32, Matrix)> = src.support().map(|n| (n, self.component(x, y, n))).collect();
        ChainMap::new(src, tgt, 0, comps).expect("shapes checked on construction")
    }

    pub fn apply(&self, x: usize, y: usize, f: &Element) -> Element {
        Element::new(f.degree, self.component(x, y, f.degree).mul_vec(&f.coords))
    }

    pub fn validate(&self) -> Vec<FunctorViolation> {
        let s = &self.source;
        let t = &self.target;
        let mut out = Vec::new();
        let n = s.len();
        for x in 0..n {
            for y in 0..n {
                if let Some(degree) = self.hom_map(x, y).closedness_defect() {
                    out.push(FunctorViolation::NotChainMap {
                        source: s.name(x).into(),
                        target: s.name(y).into(),
                        degree,
                    });
                }
            }
            if self.apply(x, x, &s.unit_element(x)) != t.unit_element(self.objects[x]) {
                out.push(FunctorViolation::Unit { object: s.name(x).into() });
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (fx, fy, fz) = (self.objects[x], self.objects[y], self.objects[z]);
                    for (p, dp) in s.hom(y, z).space().iter() {
                        for (q, dq) in s.hom(x, y).space().iter() {
                            for a in 0..dp {
                                let g = Element::basis(p, dp, a);
                                let fg = self.apply(y, z, &g);
                                for b in 0..dq {
                                    let f = Element::basis(q, dq, b);
                                    let lhs = self.apply(x, z, &s.compose(x, y, z, &g, &f));
                                    let rhs = t.compose(fx, fy, fz, &fg, &self.apply(x, y, &f));
                                    if lhs != rhs {
                                        out.push(FunctorViolation::Composition {
                                            objects: [s.name(x), s.name(y), s.name(z)].map(str::to_string),
                                            degrees: (p, q),
                                            indices: (a, b),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), FunctorError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(FunctorError::Invalid(v))
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &DgFunctor) -> DgFunctor {
        assert_eq!(first.target, self.source, "composable functors required");
        let objects: Vec<usize> = first.objects.iter().map(|&o| self.objects[o]).collect();
        let mut maps = BTreeMap::new();
        let s = &first.source;
        for x in 0..s.len() {
            for y in 0..s.len() {
                let comps = s
                    .hom(x, y)
                    .support()
                    .map(|n| (n, self.component(first.objects[x], first.objects[y], n).mul(&first.component(x, y, n))))
                    .collect();
                maps.insert((x, y), comps);
            }
        }
        DgFunctor::new(first.source.clone(), self.target.clone(), objects, maps).expect("composite shapes")
    }

    /// First pair `(x, y)` whose hom map is not a quasi-isomorphism.
    pub fn first_non_quasi_iso(&self) -> Result<Option<(usize, usize)>, FunctorError> {
        self.ensure_valid()?;
        for x in 0..self.source.len() {
            for y in 0..self.source.len() {
                if !self.hom_map(x, y).is_quasi_iso().expect("validated chain map") {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }

    /// Every hom map is a quasi-isomorphism.
    pub fn is_dk_embedding(&self) -> Result<bool, FunctorError> {
        Ok(self.first_non_quasi_iso()?.is_none())
    }
}
