//! Right dg modules over a finite dg category.
//!
//! A module `M` has a complex `M(x)` for every object and actions
//! `M(y) ⊗ hom(x, y) -> M(x)`, stored like composition: for degrees `(p, q)`
//! an entry `(a, b, c, s)` says that basis vector `a` of `M(y)^p` acted on by
//! basis vector `b` of `hom(x, y)^q` has coefficient `s` on basis vector `c`
//! of `M(x)^(p+q)`. The axioms are `d(m·u) = dm·u + (-1)^|m| m·du`,
//! `(m·u)·v = m·(u∘v)` and `m·e = m`. Maps satisfy `φ(m·u) = φ(m)·u`.

mod cells;
mod hom;
mod ops;

pub use cells::{
    cell_map, realize_cell, verify_morita, verify_retract, yoneda_map, Cell, CellError, CellPresentation,
    MoritaCertificate, MoritaFailure, MoritaReport, ObjectCertificate, RetractCertificate, RetractFailure,
};
pub use hom::{module_category, yoneda_functor, ModuleCategory, ModuleHomComplex};
pub use ops::{direct_sum, homotopy_cofiber, is_weakly_representable, representable, shift, suspension, zero_module};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::complex::{ChainMap, CochainComplex};
use crate::dgcat::{CompBlock, DgCategory, Element};
use crate::field::{Matrix, Scalar};

pub type ActionBlocks = BTreeMap<(i32, i32), CompBlock>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("module has {found} values, base has {expected} objects")]
    ValueCount { expected: usize, found: usize },
    #[error("action {x}<-{y} degrees ({p},{q}): entry {entry:?} out of range")]
    ActionShape { x: String, y: String, p: i32, q: i32, entry: (usize, usize, usize) },
    #[error("object index {0} out of range")]
    UnknownObject(usize),
    #[error("modules over different base categories")]
    BaseMismatch,
    #[error("component at {object} degree {degree} has shape {found:?}, expected {expected:?}")]
    MapShape { object: String, degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("map is not closed of degree 0")]
    NotClosed,
    #[error("maps are not composable")]
    NotComposable,
    #[error(transparent)]
    Category(#[from] crate::dgcat::CategoryError),
}

/// A violated module identity, located by objects, degrees and basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleViolation {
    /// `m·e ≠ m` for basis vector `index` of `M(object)^degree`.
    Unit { object: String, degree: i32, index: usize },
    /// Leibniz rule for `m` in `M(y)^p`, `u` in `hom(x, y)^q`.
    Leibniz { objects: [String; 2], degrees: (i32, i32), indices: (usize, usize) },
    /// `(m·u)·v ≠ m·(u∘v)` for `m` in `M(y)^p`, `u: x -> y`, `v: w -> x`.
    Associativity { objects: [String; 3], degrees: (i32, i32, i32), indices: (usize, usize, usize) },
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::Unit { object, degree, index } => {
                write!(f, "unit does not act as identity on {object} degree {degree} basis {index}")
            }
            ModuleViolation::Leibniz { objects: [x, y], degrees: (p, q), indices: (a, b) } => {
                write!(f, "Leibniz rule fails for m in M({y}) degree {p} basis {a}, u = {x}->{y} degree {q} basis {b}")
            }
            ModuleViolation::Associativity { objects: [w, x, y], degrees: (p, q, r), indices: (a, b, c) } => write!(
                f,
                "associativity fails for m in M({y}) degree {p} basis {a}, u = {x}->{y} degree {q} basis {b}, \
                 v = {w}->{x} degree {r} basis {c}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgModule {
    base: Arc<DgCategory>,
    values: Vec<CochainComplex>,
    actions: BTreeMap<(usize, usize), ActionBlocks>,
}

/// Sorts entries, merges repeated index triples and drops zeros.
pub(crate) fn canonical_block(mut entries: CompBlock) -> CompBlock {
    entries.sort_by_key(|e| (e.0, e.1, e.2));
    let mut merged: CompBlock = Vec::with_capacity(entries.len());
    for e in entries {
        match merged.last_mut() {
            Some(last) if (last.0, last.1, last.2) == (e.0, e.1, e.2) => last.3 += &e.3,
            _ => merged.push(e),
        }
    }
    merged.retain(|e| !e.3.is_zero());
    merged
}

impl DgModule {
    /// Checks shapes; the module axioms are checked by [`DgModule::validate`].
    pub fn new(
        base: Arc<DgCategory>,
        values: Vec<CochainComplex>,
        actions: BTreeMap<(usize, usize), ActionBlocks>,
    ) -> Result<Self, ModuleError> {
        let n = base.len();
        if values.len() != n {
            return Err(ModuleError::ValueCount { expected: n, found: values.len() });
        }
        let mut clean = BTreeMap::new();
        for ((x, y), blocks) in actions {
            if x >= n || y >= n {
                return Err(ModuleError::UnknownObject(x.max(y)));
            }
            let mut kept = ActionBlocks::new();
            for ((p, q), entries) in blocks {
                let (dm, du, dc) = (values[y].dim(p), base.hom(x, y).dim(q), values[x].dim(p + q));
                if let Some(&(a, b, c, _)) = entries.iter().find(|&&(a, b, c, _)| a >= dm || b >= du || c >= dc) {
                    return Err(ModuleError::ActionShape {
                        x: base.name(x).into(),
                        y: base.name(y).into(),
                        p,
                        q,
                        entry: (a, b, c),
                    });
                }
                let entries = canonical_block(entries);
                if !entries.is_empty() {
                    kept.insert((p, q), entries);
                }
            }
            if !kept.is_empty() {
                clean.insert((x, y), kept);
            }
        }
        Ok(DgModule { base, values, actions: clean })
    }

    pub fn base(&self) -> &Arc<DgCategory> {
        &self.base
    }

    pub fn value(&self, x: usize) -> &CochainComplex {
        &self.values[x]
    }

    pub fn values(&self) -> &[CochainComplex] {
        &self.values
    }

    pub fn actions(&self) -> &BTreeMap<(usize, usize), ActionBlocks> {
        &self.actions
    }

    pub fn action_block(&self, x: usize, y: usize, p: i32, q: i32) -> &[(usize, usize, usize, Scalar)] {
        self.actions.get(&(x, y)).and_then(|m| m.get(&(p, q))).map_or(&[], |v| v.as_slice())
    }

    /// Every value is zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// `m·u` for `m` in `M(y)` and `u` in `hom(x, y)`.
    pub fn act(&self, x: usize, y: usize, m: &Element, u: &Element) -> Element {
        debug_assert_eq!(m.coords.len(), self.values[y].dim(m.degree));
        debug_assert_eq!(u.coords.len(), self.base.hom(x, y).dim(u.degree));
        let degree = m.degree + u.degree;
        let mut out = vec![Scalar::zero(); self.values[x].dim(degree)];
        for (a, b, c, s) in self.action_block(x, y, m.degree, u.degree) {
            let (ma, ub) = (&m.coords[*a], &u.coords[*b]);
            if !ma.is_zero() && !ub.is_zero() {
                out[*c] += &(&(s * ma) * ub);
            }
        }
        Element::new(degree, out)
    }

    pub fn d(&self, x: usize, m: &Element) -> Element {
        Element::new(m.degree + 1, self.values[x].apply_d(m.degree, &m.coords))
    }

    pub fn validate(&self) -> Vec<ModuleViolation> {
        let t = &self.base;
        let n = t.len();
        let name = |x: usize| t.name(x).to_string();
        let mut out = Vec::new();
        for x in 0..n {
            let e = t.unit_element(x);
            for (p, dp) in self.values[x].space().iter() {
                for a in 0..dp {
                    let m = Element::basis(p, dp, a);
                    if self.act(x, x, &m, &e) != m {
                        out.push(ModuleViolation::Unit { object: name(x), degree: p, index: a });
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for (p, dp) in self.values[y].space().iter() {
                    for (q, dq) in t.hom(x, y).space().iter() {
                        for a in 0..dp {
                            let m = Element::basis(p, dp, a);
                            let dm = self.d(y, &m);
                            for b in 0..dq {
                                let u = Element::basis(q, dq, b);
                                let lhs = self.d(x, &self.act(x, y, &m, &u));
                                let mdu = self.act(x, y, &m, &t.d(x, y, &u));
                                let first = self.act(x, y, &dm, &u);
                                let rhs = if p % 2 == 0 { first.add(&mdu) } else { first.sub(&mdu) };
                                if lhs != rhs {
                                    out.push(ModuleViolation::Leibniz {
                                        objects: [name(x), name(y)],
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
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    self.associativity(w, x, y, &mut out);
                }
            }
        }
        out
    }

    fn associativity(&self, w: usize, x: usize, y: usize, out: &mut Vec<ModuleViolation>) {
        let t = &self.base;
        let (mv, hu, hv) = (&self.values[y], t.hom(x, y), t.hom(w, x));
        if mv.is_zero() || hu.is_zero() || hv.is_zero() {
            return;
        }
        for (p, dp) in mv.space().iter() {
            for (q, dq) in hu.space().iter() {
                for a in 0..dp {
                    let m = Element::basis(p, dp, a);
                    for b in 0..dq {
                        let u = Element::basis(q, dq, b);
                        let mu = self.act(x, y, &m, &u);
                        for (r, dr) in hv.space().iter() {
                            for c in 0..dr {
                                let v = Element::basis(r, dr, c);
                                let left = self.act(w, x, &mu, &v);
                                let right = self.act(w, y, &m, &t.compose(w, x, y, &u, &v));
                                if left != right {
                                    out.push(ModuleViolation::Associativity {
                                        objects: [t.name(w), t.name(x), t.name(y)].map(str::to_string),
                                        degrees: (p, q, r),
                                        indices: (a, b, c),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// A homogeneous map of modules: for each object, matrices
/// `M(x)^n -> N(x)^(n+degree)` keyed by `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    degree: i32,
    components: Vec<BTreeMap<i32, Matrix>>,
}

fn same(a: &Arc<DgModule>, b: &Arc<DgModule>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ModuleMap {
    pub fn new(
        source: Arc<DgModule>,
        target: Arc<DgModule>,
        degree: i32,
        components: Vec<BTreeMap<i32, Matrix>>,
    ) -> Result<Self, ModuleError> {
        if source.base != target.base {
            return Err(ModuleError::BaseMismatch);
        }
        let n = source.base.len();
        if components.len() != n {
            return Err(ModuleError::ValueCount { expected: n, found: components.len() });
        }
        let mut clean = Vec::with_capacity(n);
        for (x, comps) in components.into_iter().enumerate() {
            let mut kept = BTreeMap::new();
            for (k, m) in comps {
                let expected = (target.values[x].dim(k + degree), source.values[x].dim(k));
                if m.shape() != expected {
                    return Err(ModuleError::MapShape {
                        object: source.base.name(x).into(),
                        degree: k,
                        expected,
                        found: m.shape(),
                    });
                }
                if !m.is_zero() {
                    kept.insert(k, m);
                }
            }
            clean.push(kept);
        }
        Ok(ModuleMap { source, target, degree, components: clean })
    }

    pub fn identity(m: Arc<DgModule>) -> Self {
        let comps =
            m.values.iter().map(|v| v.space().iter().map(|(k, d)| (k, Matrix::identity(d))).collect()).collect();
        ModuleMap::new(m.clone(), m, 0, comps).expect("identity shapes")
    }

    pub fn zero(source: Arc<DgModule>, target: Arc<DgModule>, degree: i32) -> Self {
        let n = source.base.len();
        ModuleMap { source, target, degree, components: vec![BTreeMap::new(); n] }
    }

    pub fn source(&self) -> &Arc<DgModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgModule> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn components(&self) -> &[BTreeMap<i32, Matrix>] {
        &self.components
    }

    pub fn component(&self, x: usize, k: i32) -> Matrix {
        self.components[x]
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.target.values[x].dim(k + self.degree), self.source.values[x].dim(k)))
    }

    pub fn chain_map(&self, x: usize) -> ChainMap {
        let comps: Vec<(i32, Matrix)> = self.components[x].iter().map(|(&k, m)| (k, m.clone())).collect();
        ChainMap::new(self.source.values[x].clone(), self.target.values[x].clone(), self.degree, comps)
            .expect("shapes checked on construction")
    }

    pub fn apply(&self, x: usize, m: &Element) -> Element {
        Element::new(m.degree + self.degree, self.component(x, m.degree).mul_vec(&m.coords))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_empty())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let comps = self.components.iter().map(|m| m.iter().map(|(&k, a)| (k, a.scale(c))).collect()).collect();
        ModuleMap::new(self.source.clone(), self.target.clone(), self.degree, comps).expect("same shapes")
    }

    pub fn add(&self, other: &ModuleMap) -> Self {
        assert!(self.degree == other.degree, "adding maps of different degrees");
        let comps = (0..self.components.len())
            .map(|x| {
                let keys: std::collections::BTreeSet<i32> =
                    self.components[x].keys().chain(other.components[x].keys()).copied().collect();
                keys.into_iter().map(|k| (k, self.component(x, k).add(&other.component(x, k)))).collect()
            })
            .collect();
        ModuleMap::new(self.source.clone(), self.target.clone(), self.degree, comps).expect("same shapes")
    }

    pub fn sub(&self, other: &ModuleMap) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// `self ∘ first`, no signs.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        if !same(&first.target, &self.source) {
            return Err(ModuleError::NotComposable);
        }
        let comps = first
            .components
            .iter()
            .enumerate()
            .map(|(x, c)| c.iter().map(|(&k, m)| (k, self.component(x, k + first.degree).mul(m))).collect())
            .collect();
        ModuleMap::new(first.source.clone(), self.target.clone(), self.degree + first.degree, comps)
    }

    /// `Dφ = d∘φ - (-1)^l φ∘d`.
    pub fn d(&self) -> ModuleMap {
        let sg = Scalar::sign(self.degree as i64);
        let comps = (0..self.components.len())
            .map(|x| {
                let (s, t) = (&self.source.values[x], &self.target.values[x]);
                s.support()
                    .map(|k| {
                        let a = t.differential(k + self.degree).mul(&self.component(x, k));
                        let b = self.component(x, k + 1).mul(&s.differential(k)).scale(&sg);
                        (k, a.sub(&b))
                    })
                    .collect()
            })
            .collect();
        ModuleMap::new(self.source.clone(), self.target.clone(), self.degree + 1, comps).expect("differential shapes")
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// First `(x, y, p, q, a, b)` with `φ(m·u) ≠ φ(m)·u`.
    pub fn naturality_defect(&self) -> Option<(usize, usize, i32, i32, usize, usize)> {
        let t = &self.source.base;
        for x in 0..t.len() {
            for y in 0..t.len() {
                for (p, dp) in self.source.values[y].space().iter() {
                    for (q, dq) in t.hom(x, y).space().iter() {
                        for a in 0..dp {
                            let m = Element::basis(p, dp, a);
                            let fm = self.apply(y, &m);
                            for b in 0..dq {
                                let u = Element::basis(q, dq, b);
                                let lhs = self.apply(x, &self.source.act(x, y, &m, &u));
                                let rhs = self.target.act(x, y, &fm, &u);
                                if lhs != rhs {
                                    return Some((x, y, p, q, a, b));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_defect().is_none()
    }

    /// Closed of degree 0 and a quasi-isomorphism at every object.
    pub fn is_pointwise_quasi_iso(&self) -> bool {
        self.degree == 0
            && self.is_closed()
            && (0..self.components.len()).all(|x| self.chain_map(x).is_quasi_iso().unwrap_or(false))
    }
}

#[cfg(test)]
mod tests;
