use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::Cohomology;
use crate::field::{rank, Matrix, Vector};

use super::{DgCategory, Element};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("element of {from}->{to} is not a degree-0 cycle")]
pub struct NotACycle {
    pub from: String,
    pub to: String,
}

/// `H^0` (or all of `H^*`) of a dg category with the induced composition,
/// in the representative bases of [`Cohomology`].
#[derive(Debug, Clone)]
pub struct HomotopyCategory {
    cat: Arc<DgCategory>,
    graded: bool,
    groups: BTreeMap<(usize, usize, i32), Cohomology>,
}

impl HomotopyCategory {
    /// Hom sets `H^0`.
    pub fn new(cat: Arc<DgCategory>) -> Self {
        Self::build(cat, false)
    }

    /// Hom sets `H^n` for every degree.
    pub fn graded(cat: Arc<DgCategory>) -> Self {
        Self::build(cat, true)
    }

    fn build(cat: Arc<DgCategory>, graded: bool) -> Self {
        let mut groups = BTreeMap::new();
        for x in 0..cat.len() {
            for y in 0..cat.len() {
                let h = cat.hom(x, y);
                if graded {
                    for n in h.support() {
                        groups.insert((x, y, n), h.cohomology(n));
                    }
                } else {
                    groups.insert((x, y, 0), h.cohomology(0));
                }
            }
        }
        HomotopyCategory { cat, graded, groups }
    }

    pub fn category(&self) -> &Arc<DgCategory> {
        &self.cat
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    fn group(&self, x: usize, y: usize, n: i32) -> Option<&Cohomology> {
        assert!(self.graded || n == 0, "ungraded homotopy category only has degree 0");
        self.groups.get(&(x, y, n))
    }

    pub fn dim(&self, x: usize, y: usize, n: i32) -> usize {
        self.group(x, y, n).map_or(0, Cohomology::dim)
    }

    /// Degrees with nonzero cohomology.
    pub fn degrees(&self, x: usize, y: usize) -> Vec<i32> {
        self.groups.range((x, y, i32::MIN)..=(x, y, i32::MAX)).filter(|(_, h)| h.dim() > 0).map(|(k, _)| k.2).collect()
    }

    /// Representative cycle of the `i`-th basis class.
    pub fn representative(&self, x: usize, y: usize, n: i32, i: usize) -> Element {
        let h = self.group(x, y, n).expect("nonzero group");
        Element::new(n, h.representatives()[i].clone())
    }

    /// Class of a cycle, `None` for non-cycles.
    pub fn class_of(&self, x: usize, y: usize, f: &Element) -> Option<Vector> {
        match self.group(x, y, f.degree) {
            Some(h) => h.class_of(&f.coords),
            None => f.is_zero().then(Vec::new),
        }
    }

    /// Class of `g ∘ f` from classes of `g` in `H^p(y, z)` and `f` in `H^q(x, y)`.
    pub fn compose(
        &self,
        x: usize,
        y: usize,
        z: usize,
        (p, g): (i32, &[crate::field::Scalar]),
        (q, f): (i32, &[crate::field::Scalar]),
    ) -> Vector {
        let lift = |a: usize, b: usize, n: i32, c: &[crate::field::Scalar]| {
            let mut e = self.cat.zero_element(a, b, n);
            if let Some(h) = self.group(a, b, n) {
                for (coef, rep) in c.iter().zip(h.representatives()) {
                    crate::field::axpy(&mut e.coords, coef, rep);
                }
            }
            e
        };
        let gf = self.cat.compose(x, y, z, &lift(y, z, p, g), &lift(x, y, q, f));
        self.class_of(x, z, &gf).expect("composite of cycles is a cycle")
    }

    pub fn identity(&self, x: usize) -> Vector {
        self.class_of(x, x, &self.cat.unit_element(x)).expect("unit is a cycle")
    }

    /// Matrix of `[f] ∘ -: H^n(z, x) -> H^(n+|f|)(z, y)` for a cycle `f: x -> y`.
    pub fn post_composition(&self, z: usize, x: usize, y: usize, f: &Element, n: i32) -> Matrix {
        let rows = self.dim(z, y, n + f.degree);
        let cols: Vec<Vector> = (0..self.dim(z, x, n))
            .map(|i| {
                let u = self.representative(z, x, n, i);
                self.class_of(z, y, &self.cat.compose(z, x, y, f, &u)).expect("cycle")
            })
            .collect();
        Matrix::from_columns(rows, &cols)
    }

    /// Matrix of `- ∘ [f]: H^n(y, z) -> H^(n+|f|)(x, z)` for a cycle `f: x -> y`.
    pub fn pre_composition(&self, x: usize, y: usize, z: usize, f: &Element, n: i32) -> Matrix {
        let rows = self.dim(x, z, n + f.degree);
        let cols: Vec<Vector> = (0..self.dim(y, z, n))
            .map(|i| {
                let u = self.representative(y, z, n, i);
                self.class_of(x, z, &self.cat.compose(x, y, z, &u, f)).expect("cycle")
            })
            .collect();
        Matrix::from_columns(rows, &cols)
    }

    /// Checks the unit and associativity laws on basis classes; returns the
    /// first failing description.
    pub fn check(&self) -> Result<(), String> {
        let n = self.cat.len();
        let degs = |x: usize, y: usize| -> Vec<i32> {
            if self.graded {
                self.degrees(x, y)
            } else {
                vec![0]
            }
        };
        for x in 0..n {
            for y in 0..n {
                for d in degs(x, y) {
                    for i in 0..self.dim(x, y, d) {
                        let f = crate::field::unit_vector(self.dim(x, y, d), i);
                        if self.compose(x, y, y, (0, &self.identity(y)), (d, &f)) != f
                            || self.compose(x, x, y, (d, &f), (0, &self.identity(x))) != f
                        {
                            return Err(format!("unit law fails on H^{d}({}, {})", self.cat.name(x), self.cat.name(y)));
                        }
                    }
                }
            }
        }
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for p in degs(y, z) {
                            for q in degs(x, y) {
                                for r in degs(w, x) {
                                    for a in 0..self.dim(y, z, p) {
                                        let h = crate::field::unit_vector(self.dim(y, z, p), a);
                                        for b in 0..self.dim(x, y, q) {
                                            let g = crate::field::unit_vector(self.dim(x, y, q), b);
                                            let hg = self.compose(x, y, z, (p, &h), (q, &g));
                                            for c in 0..self.dim(w, x, r) {
                                                let f = crate::field::unit_vector(self.dim(w, x, r), c);
                                                let left = self.compose(w, x, z, (p + q, &hg), (r, &f));
                                                let gf = self.compose(w, x, y, (q, &g), (r, &f));
                                                let right = self.compose(w, y, z, (p, &h), (q + r, &gf));
                                                if left != right {
                                                    return Err("associativity fails on cohomology".into());
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether the cycle `f: x -> y` is an isomorphism in `H^0`: post-composition
/// `H^0(z, x) -> H^0(z, y)` must be bijective for every object `z`.
pub fn is_isomorphism_in_h0(h0: &HomotopyCategory, x: usize, y: usize, f: &Element) -> Result<bool, NotACycle> {
    let t = h0.category();
    if f.degree != 0 || !t.is_cycle(x, y, f) {
        return Err(NotACycle { from: t.name(x).into(), to: t.name(y).into() });
    }
    Ok((0..t.len()).all(|z| {
        let m = h0.post_composition(z, x, y, f, 0);
        m.rows() == m.cols() && rank(&m) == m.rows()
    }))
}
