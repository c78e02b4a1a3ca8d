//! One-sided twisted complexes over a dg category (the pre-tr construction).
//!
//! All matrices are indexed `(row, column) = (target summand, source summand)`.
//! For `K = (⊕ C_i[r_i], q)` the entry `q[(t, s)]` lies in `hom(C_s, C_t)` in
//! raw degree `1 + r_t - r_s`, and the Maurer–Cartan equation reads
//! `(-1)^(r_t) d q_ts + Σ_m q_tm ∘ q_ms = 0`.
//!
//! A degree-`l` morphism `f: K -> K'` has entries `f[(t, s)]` in
//! `hom(C_s, C'_t)` of raw degree `l + r'_t - r_s`, differential
//! `(Df)_ts = (-1)^(r'_t) d f_ts + (q' f)_ts - (-1)^l (f q)_ts`, and
//! composition is matrix multiplication.

mod alpha;
mod checks;
mod hom;
mod iso;

pub use alpha::{alpha, alpha_map};
pub use checks::{
    budgeted_objects, fill_in, is_pretriangulated, pretr_category, triangle_axioms, triangle_objects, verify_fill_in,
    CaseResult, PretrReport, TriangleReport, Witness,
};
pub use hom::{hom_twisted, TwistedHomComplex};
pub use iso::{find_h0_iso, verify_h0_iso};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcat::{DgCategory, Element};
use crate::field::Scalar;

/// Entries of a matrix over the base, keyed `(target, source)`; zero entries
/// are never stored.
pub type Entries = BTreeMap<(usize, usize), Element>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistedError {
    #[error("summand {0} refers to an unknown object")]
    UnknownObject(usize),
    #[error("entry {from}->{to} refers to a missing summand")]
    OutOfRange { from: usize, to: usize },
    #[error("entry {from}->{to} has degree {found}, expected {expected}")]
    Degree { from: usize, to: usize, expected: i32, found: i32 },
    #[error("entry {from}->{to} has {found} coordinates, expected {expected}")]
    Length { from: usize, to: usize, expected: usize, found: usize },
    #[error("Maurer-Cartan equation fails at entry {from}->{to}")]
    MaurerCartan { from: usize, to: usize },
    #[error("q is not triangular; pass the general flag to accept it")]
    NotTriangular,
    #[error("twisted complexes over different base categories")]
    BaseMismatch,
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("cone requires a closed degree-0 morphism")]
    NotClosed,
    #[error(transparent)]
    Category(#[from] crate::dgcat::CategoryError),
}

/// `(⊕ C_i[r_i], q)` over a base category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedComplex {
    base: Arc<DgCategory>,
    summands: Vec<(usize, i32)>,
    q: Entries,
    general: bool,
}

fn sign(k: i32) -> Scalar {
    Scalar::sign(k as i64)
}

/// Adds `e` to entry `key`, creating it if needed.
pub(crate) fn accumulate(out: &mut Entries, key: (usize, usize), e: Element) {
    if e.is_zero() {
        return;
    }
    match out.get_mut(&key) {
        Some(cur) => *cur = cur.add(&e),
        None => {
            out.insert(key, e);
        }
    }
}

pub(crate) fn prune(mut e: Entries) -> Entries {
    e.retain(|_, v| !v.is_zero());
    e
}

/// `(g f)_ts = Σ_m g_tm ∘ f_ms`; `src`, `mid`, `tgt` are the summand objects.
pub(crate) fn compose_entries(
    base: &DgCategory,
    src: &[usize],
    mid: &[usize],
    tgt: &[usize],
    g: &Entries,
    f: &Entries,
) -> Entries {
    let mut out = Entries::new();
    for (&(m, s), fe) in f {
        for (&(t, m2), ge) in g {
            if m2 == m {
                accumulate(&mut out, (t, s), base.compose(src[s], mid[m], tgt[t], ge, fe));
            }
        }
    }
    prune(out)
}

/// Support graph of `q` has no cycles.
fn is_acyclic(n: usize, q: &Entries) -> bool {
    let mut indeg = vec![0usize; n];
    for &(t, s) in q.keys() {
        if t == s {
            return false;
        }
        indeg[t] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(s) = stack.pop() {
        seen += 1;
        for &(t, s2) in q.keys() {
            if s2 == s {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
    }
    seen == n
}

impl TwistedComplex {
    /// Checks degrees, the Maurer–Cartan equation and, unless `allow_general`
    /// is set, that `q` is triangular for some order of the summands.
    pub fn new(
        base: Arc<DgCategory>,
        summands: Vec<(usize, i32)>,
        q: Entries,
        allow_general: bool,
    ) -> Result<Self, TwistedError> {
        if let Some(i) = summands.iter().position(|&(x, _)| x >= base.len()) {
            return Err(TwistedError::UnknownObject(i));
        }
        let n = summands.len();
        for (&(t, s), e) in &q {
            if t >= n || s >= n {
                return Err(TwistedError::OutOfRange { from: s, to: t });
            }
            let expected = 1 + summands[t].1 - summands[s].1;
            if e.degree != expected {
                return Err(TwistedError::Degree { from: s, to: t, expected, found: e.degree });
            }
            let len = base.hom(summands[s].0, summands[t].0).dim(expected);
            if e.coords.len() != len {
                return Err(TwistedError::Length { from: s, to: t, expected: len, found: e.coords.len() });
            }
        }
        let q = prune(q);
        let triangular = is_acyclic(n, &q);
        if !triangular && !allow_general {
            return Err(TwistedError::NotTriangular);
        }
        let k = TwistedComplex { base, summands, q, general: !triangular };
        if let Some((s, t)) = k.maurer_cartan_defect() {
            return Err(TwistedError::MaurerCartan { from: s, to: t });
        }
        Ok(k)
    }

    /// A single object with no twisting.
    pub fn embed(base: Arc<DgCategory>, x: usize) -> Self {
        assert!(x < base.len(), "object out of range");
        TwistedComplex { base, summands: vec![(x, 0)], q: Entries::new(), general: false }
    }

    /// The empty twisted complex, a zero object.
    pub fn zero(base: Arc<DgCategory>) -> Self {
        TwistedComplex { base, summands: Vec::new(), q: Entries::new(), general: false }
    }

    pub fn base(&self) -> &Arc<DgCategory> {
        &self.base
    }

    pub fn summands(&self) -> &[(usize, i32)] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn objects(&self) -> Vec<usize> {
        self.summands.iter().map(|&(x, _)| x).collect()
    }

    pub fn q(&self) -> &Entries {
        &self.q
    }

    /// `q` from summand `from` to summand `to`.
    pub fn q_entry(&self, from: usize, to: usize) -> Option<&Element> {
        self.q.get(&(to, from))
    }

    pub fn is_general(&self) -> bool {
        self.general
    }

    /// First entry `(from, to)` where the Maurer–Cartan equation fails.
    pub fn maurer_cartan_defect(&self) -> Option<(usize, usize)> {
        let objs = self.objects();
        let mut lhs = Entries::new();
        for (&(t, s), e) in &self.q {
            accumulate(&mut lhs, (t, s), self.base.d(objs[s], objs[t], e).scale(&sign(self.summands[t].1)));
        }
        for ((t, s), e) in compose_entries(&self.base, &objs, &objs, &objs, &self.q, &self.q) {
            accumulate(&mut lhs, (t, s), e);
        }
        prune(lhs).keys().next().map(|&(t, s)| (s, t))
    }

    /// `K[n]`: shifts move by `n` and `q` is multiplied by `(-1)^n`.
    pub fn shift(&self, n: i32) -> Self {
        let sg = sign(n);
        TwistedComplex {
            base: self.base.clone(),
            summands: self.summands.iter().map(|&(x, r)| (x, r + n)).collect(),
            q: self.q.iter().map(|(&k, e)| (k, e.scale(&sg))).collect(),
            general: self.general,
        }
    }

    /// Identity morphism, units on the diagonal.
    pub fn identity(&self) -> TwistedHom {
        let entries = (0..self.len()).map(|i| ((i, i), self.base.unit_element(self.summands[i].0))).collect();
        TwistedHom { source: self.clone(), target: self.clone(), degree: 0, entries: prune(entries) }
    }

    /// Raw degree of entry `(t, s)` of a degree-`l` morphism `self -> target`.
    fn raw_degree(&self, target: &TwistedComplex, l: i32, t: usize, s: usize) -> i32 {
        l + target.summands[t].1 - self.summands[s].1
    }
}

/// A homogeneous morphism of twisted complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedHom {
    source: TwistedComplex,
    target: TwistedComplex,
    degree: i32,
    entries: Entries,
}

impl TwistedHom {
    pub fn new(
        source: TwistedComplex,
        target: TwistedComplex,
        degree: i32,
        entries: Entries,
    ) -> Result<Self, TwistedError> {
        if source.base != target.base {
            return Err(TwistedError::BaseMismatch);
        }
        for (&(t, s), e) in &entries {
            if t >= target.len() || s >= source.len() {
                return Err(TwistedError::OutOfRange { from: s, to: t });
            }
            let expected = source.raw_degree(&target, degree, t, s);
            if e.degree != expected {
                return Err(TwistedError::Degree { from: s, to: t, expected, found: e.degree });
            }
            let len = source.base.hom(source.summands[s].0, target.summands[t].0).dim(expected);
            if e.coords.len() != len {
                return Err(TwistedError::Length { from: s, to: t, expected: len, found: e.coords.len() });
            }
        }
        Ok(TwistedHom { source, target, degree, entries: prune(entries) })
    }

    pub(crate) fn from_parts_unchecked(
        source: TwistedComplex,
        target: TwistedComplex,
        degree: i32,
        entries: Entries,
    ) -> Self {
        TwistedHom { source, target, degree, entries: prune(entries) }
    }

    pub fn zero(source: TwistedComplex, target: TwistedComplex, degree: i32) -> Self {
        TwistedHom { source, target, degree, entries: Entries::new() }
    }

    pub fn source(&self) -> &TwistedComplex {
        &self.source
    }

    pub fn target(&self) -> &TwistedComplex {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    /// Entry from source summand `s` to target summand `t`, zero if absent.
    pub fn entry(&self, t: usize, s: usize) -> Element {
        self.entries.get(&(t, s)).cloned().unwrap_or_else(|| {
            let e = self.source.raw_degree(&self.target, self.degree, t, s);
            self.source.base.zero_element(self.source.summands[s].0, self.target.summands[t].0, e)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let entries = self.entries.iter().map(|(&k, e)| (k, e.scale(c))).collect();
        TwistedHom { entries: prune(entries), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &TwistedHom) -> Self {
        assert!(
            self.degree == other.degree && self.source == other.source && self.target == other.target,
            "adding morphisms with different endpoints"
        );
        let mut entries = self.entries.clone();
        for (&k, e) in &other.entries {
            accumulate(&mut entries, k, e.clone());
        }
        TwistedHom { entries: prune(entries), ..self.clone() }
    }

    pub fn sub(&self, other: &TwistedHom) -> Self {
        self.add(&other.neg())
    }

    /// The twisted differential.
    pub fn d(&self) -> TwistedHom {
        let (k, k2) = (&self.source, &self.target);
        let base = &k.base;
        let (so, to) = (k.objects(), k2.objects());
        let mut out = Entries::new();
        for (&(t, s), e) in &self.entries {
            accumulate(&mut out, (t, s), base.d(so[s], to[t], e).scale(&sign(k2.summands[t].1)));
        }
        for ((t, s), e) in compose_entries(base, &so, &to, &to, &k2.q, &self.entries) {
            accumulate(&mut out, (t, s), e);
        }
        let c = -sign(self.degree);
        for ((t, s), e) in compose_entries(base, &so, &so, &to, &self.entries, &k.q) {
            accumulate(&mut out, (t, s), e.scale(&c));
        }
        TwistedHom { source: k.clone(), target: k2.clone(), degree: self.degree + 1, entries: prune(out) }
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &TwistedHom) -> Result<TwistedHom, TwistedError> {
        if first.target != self.source {
            return Err(TwistedError::NotComposable);
        }
        let entries = compose_entries(
            &self.source.base,
            &first.source.objects(),
            &self.source.objects(),
            &self.target.objects(),
            &self.entries,
            &first.entries,
        );
        Ok(TwistedHom {
            source: first.source.clone(),
            target: self.target.clone(),
            degree: self.degree + first.degree,
            entries,
        })
    }

    /// `f[n] = (-1)^(n l) f` between the shifted complexes.
    pub fn shift(&self, n: i32) -> TwistedHom {
        let sg = sign(n * self.degree);
        TwistedHom {
            source: self.source.shift(n),
            target: self.target.shift(n),
            degree: self.degree,
            entries: self.entries.iter().map(|(&k, e)| (k, e.scale(&sg))).collect(),
        }
    }
}

/// `cone(f) = (A[1] ⊕ B, [[-q_A, 0], [f, q_B]])` for a closed degree-0 `f: A -> B`.
pub fn cone(f: &TwistedHom) -> Result<TwistedComplex, TwistedError> {
    if f.degree != 0 || !f.is_closed() {
        return Err(TwistedError::NotClosed);
    }
    let a = f.source.shift(1);
    let b = &f.target;
    let na = a.len();
    let mut summands = a.summands.clone();
    summands.extend_from_slice(&b.summands);
    let mut q = a.q.clone();
    for (&(t, s), e) in &b.q {
        q.insert((na + t, na + s), e.clone());
    }
    for (&(t, s), e) in &f.entries {
        q.insert((na + t, s), e.clone());
    }
    TwistedComplex::new(f.source.base.clone(), summands, q, a.general || b.general)
}

/// The canonical maps `i: B -> cone(f)`, `p: cone(f) -> A[1]` and the
/// homotopy `h: A -> cone(f)` of degree `-1` with `D h = i ∘ f`.
pub fn cone_maps(f: &TwistedHom, c: &TwistedComplex) -> (TwistedHom, TwistedHom, TwistedHom) {
    let a = &f.source;
    let b = &f.target;
    let base = &a.base;
    let na = a.len();
    let unit = |x: usize| base.unit_element(x);
    let i_entries = (0..b.len()).map(|t| ((na + t, t), unit(b.summands[t].0))).collect();
    let p_entries: Entries = (0..na).map(|s| ((s, s), unit(a.summands[s].0))).collect();
    let i = TwistedHom::from_parts_unchecked(b.clone(), c.clone(), 0, i_entries);
    let p = TwistedHom::from_parts_unchecked(c.clone(), a.shift(1), 0, p_entries.clone());
    let h = TwistedHom::from_parts_unchecked(a.clone(), c.clone(), -1, p_entries);
    (i, p, h)
}

#[cfg(test)]
mod tests;
