//! Finite dg categories, dg functors and their homotopy categories.
//!
//! `hom(x, y)` is the complex of morphisms `x -> y`. Composition
//! `hom(y, z) ⊗ hom(x, y) -> hom(x, z)` is stored as structure constants:
//! for degrees `(p, q)` an entry `(a, b, c, s)` says that the `a`-th basis
//! vector of `hom(y, z)^p` composed with the `b`-th basis vector of
//! `hom(x, y)^q` has coefficient `s` on the `c`-th basis vector of
//! `hom(x, z)^(p+q)`.

mod constructions;
mod equivalence;
mod functor;
mod homotopy;
mod validate;

pub use constructions::{delta1, extension_algebra, opposite, square_zero_algebra, tensor, unit_category};
pub use equivalence::{
    graded_equivalence_check, is_dk_equivalence, DkReport, Essential, EssentialWitness, GradedReport, HomFailure,
};
pub use functor::{DgFunctor, FunctorError, FunctorViolation};
pub use homotopy::{is_isomorphism_in_h0, HomotopyCategory, NotACycle};
pub use validate::{ValidationReport, Violation};

use std::collections::BTreeMap;

use crate::complex::CochainComplex;
use crate::field::{Scalar, Vector};

/// Structure constants of one `(p, q)` block: `(a, b, c, s)`.
pub type CompBlock = Vec<(usize, usize, usize, Scalar)>;

/// A homogeneous element of some hom complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pub degree: i32,
    pub coords: Vector,
}

impl Element {
    pub fn new(degree: i32, coords: Vector) -> Self {
        Element { degree, coords }
    }

    pub fn zero(degree: i32, dim: usize) -> Self {
        Element { degree, coords: vec![Scalar::zero(); dim] }
    }

    pub fn basis(degree: i32, dim: usize, i: usize) -> Self {
        Element { degree, coords: crate::field::unit_vector(dim, i) }
    }

    pub fn is_zero(&self) -> bool {
        crate::field::is_zero_vector(&self.coords)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Element { degree: self.degree, coords: crate::field::scale_vector(c, &self.coords) }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &Element) -> Self {
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        Element { degree: self.degree, coords: crate::field::add_vectors(&self.coords, &other.coords) }
    }

    pub fn sub(&self, other: &Element) -> Self {
        self.add(&other.neg())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("duplicate object {0:?}")]
    DuplicateObject(String),
    #[error("object name {0:?} is empty or contains a reserved character")]
    BadObjectName(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unit of {object:?} has length {found}, expected {expected}")]
    UnitShape { object: String, expected: usize, found: usize },
    #[error("composition {objects:?} degrees ({p},{q}): entry {entry:?} out of range")]
    CompShape { objects: [String; 3], p: i32, q: i32, entry: (usize, usize, usize) },
    #[error("unit not closed at {0:?}")]
    UnitNotClosed(String),
}

/// Raw data of a category, used for construction and for mutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryParts {
    pub objects: Vec<String>,
    pub homs: BTreeMap<(usize, usize), CochainComplex>,
    pub comp: BTreeMap<(usize, usize, usize), BTreeMap<(i32, i32), CompBlock>>,
    pub units: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgCategory {
    objects: Vec<String>,
    /// every ordered pair is present, zero complexes included
    homs: BTreeMap<(usize, usize), CochainComplex>,
    comp: BTreeMap<(usize, usize, usize), BTreeMap<(i32, i32), CompBlock>>,
    units: Vec<Vector>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains('|')
}

impl DgCategory {
    /// Checks shapes and index ranges. The category axioms are checked by
    /// [`DgCategory::validate`].
    pub fn from_parts(parts: CategoryParts) -> Result<Self, CategoryError> {
        let CategoryParts { objects, mut homs, comp, units } = parts;
        for (i, o) in objects.iter().enumerate() {
            if !valid_name(o) {
                return Err(CategoryError::BadObjectName(o.clone()));
            }
            if objects[..i].contains(o) {
                return Err(CategoryError::DuplicateObject(o.clone()));
            }
        }
        let n = objects.len();
        if let Some(&(x, y)) = homs.keys().find(|&&(x, y)| x >= n || y >= n) {
            return Err(CategoryError::UnknownObject(format!("#{}", x.max(y))));
        }
        for x in 0..n {
            for y in 0..n {
                homs.entry((x, y)).or_default();
            }
        }
        let mut comp_clean = BTreeMap::new();
        for ((x, y, z), blocks) in comp {
            if x >= n || y >= n || z >= n {
                return Err(CategoryError::UnknownObject(format!("#{}", x.max(y).max(z))));
            }
            let mut clean = BTreeMap::new();
            for ((p, q), mut entries) in blocks {
                let (dg, df, dc) = (homs[&(y, z)].dim(p), homs[&(x, y)].dim(q), homs[&(x, z)].dim(p + q));
                for &(a, b, c, _) in &entries {
                    if a >= dg || b >= df || c >= dc {
                        return Err(CategoryError::CompShape {
                            objects: [objects[x].clone(), objects[y].clone(), objects[z].clone()],
                            p,
                            q,
                            entry: (a, b, c),
                        });
                    }
                }
                entries.retain(|e| !e.3.is_zero());
                entries.sort_by_key(|e| (e.0, e.1, e.2));
                // merge repeated index triples
                let mut merged: CompBlock = Vec::with_capacity(entries.len());
                for e in entries {
                    match merged.last_mut() {
                        Some(last) if (last.0, last.1, last.2) == (e.0, e.1, e.2) => last.3 += &e.3,
                        _ => merged.push(e),
                    }
                }
                merged.retain(|e| !e.3.is_zero());
                if !merged.is_empty() {
                    clean.insert((p, q), merged);
                }
            }
            if !clean.is_empty() {
                comp_clean.insert((x, y, z), clean);
            }
        }
        if units.len() != n {
            return Err(CategoryError::UnitShape {
                object: objects.get(units.len()).cloned().unwrap_or_default(),
                expected: n,
                found: units.len(),
            });
        }
        for (x, u) in units.iter().enumerate() {
            let expected = homs[&(x, x)].dim(0);
            if u.len() != expected {
                return Err(CategoryError::UnitShape { object: objects[x].clone(), expected, found: u.len() });
            }
        }
        Ok(DgCategory { objects, homs, comp: comp_clean, units })
    }

    pub fn into_parts(self) -> CategoryParts {
        CategoryParts { objects: self.objects, homs: self.homs, comp: self.comp, units: self.units }
    }

    pub fn to_parts(&self) -> CategoryParts {
        self.clone().into_parts()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn hom(&self, x: usize, y: usize) -> &CochainComplex {
        &self.homs[&(x, y)]
    }

    pub fn comp_blocks(&self, x: usize, y: usize, z: usize) -> impl Iterator<Item = ((i32, i32), &CompBlock)> {
        self.comp.get(&(x, y, z)).into_iter().flat_map(|m| m.iter().map(|(&k, v)| (k, v)))
    }

    pub fn comp_block(&self, x: usize, y: usize, z: usize, p: i32, q: i32) -> &[(usize, usize, usize, Scalar)] {
        self.comp.get(&(x, y, z)).and_then(|m| m.get(&(p, q))).map_or(&[], |v| v.as_slice())
    }

    pub fn unit(&self, x: usize) -> &Vector {
        &self.units[x]
    }

    pub fn unit_element(&self, x: usize) -> Element {
        Element::new(0, self.units[x].clone())
    }

    pub fn zero_element(&self, x: usize, y: usize, degree: i32) -> Element {
        Element::zero(degree, self.hom(x, y).dim(degree))
    }

    pub fn basis_element(&self, x: usize, y: usize, degree: i32, i: usize) -> Element {
        Element::basis(degree, self.hom(x, y).dim(degree), i)
    }

    /// `g ∘ f` for `f` in `hom(x, y)` and `g` in `hom(y, z)`.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: &Element, f: &Element) -> Element {
        debug_assert_eq!(g.coords.len(), self.hom(y, z).dim(g.degree));
        debug_assert_eq!(f.coords.len(), self.hom(x, y).dim(f.degree));
        let degree = g.degree + f.degree;
        let mut out = vec![Scalar::zero(); self.hom(x, z).dim(degree)];
        for (a, b, c, s) in self.comp_block(x, y, z, g.degree, f.degree) {
            let (ga, fb) = (&g.coords[*a], &f.coords[*b]);
            if !ga.is_zero() && !fb.is_zero() {
                out[*c] += &(&(s * ga) * fb);
            }
        }
        Element { degree, coords: out }
    }

    /// Differential of `f` in `hom(x, y)`.
    pub fn d(&self, x: usize, y: usize, f: &Element) -> Element {
        Element { degree: f.degree + 1, coords: self.hom(x, y).apply_d(f.degree, &f.coords) }
    }

    pub fn is_cycle(&self, x: usize, y: usize, f: &Element) -> bool {
        self.d(x, y, f).is_zero()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// Full subcategory on the given objects, in the given order.
    pub fn full_subcategory(&self, keep: &[usize]) -> DgCategory {
        let mut parts = CategoryParts {
            objects: keep.iter().map(|&i| self.objects[i].clone()).collect(),
            homs: BTreeMap::new(),
            comp: BTreeMap::new(),
            units: keep.iter().map(|&i| self.units[i].clone()).collect(),
        };
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                parts.homs.insert((i, j), self.hom(x, y).clone());
                for (k, &z) in keep.iter().enumerate() {
                    if let Some(b) = self.comp.get(&(x, y, z)) {
                        parts.comp.insert((i, j, k), b.clone());
                    }
                }
            }
        }
        DgCategory::from_parts(parts).expect("subcategory of a well-formed category")
    }
}
