//! DK-equivalence, checked two independent ways.
//!
//! [`is_dk_equivalence`] tests quasi-isomorphisms through induced maps on
//! cohomology and finds essential-surjectivity witnesses with the Yoneda
//! criterion. [`graded_equivalence_check`] compares ranks of cycle and
//! boundary spaces directly and looks for two-sided inverses in the graded
//! homotopy category, ruling candidates out by comparing cohomology tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{kernel_basis, rank, solve, Matrix, Scalar, Vector};
use crate::search::{Budget, Outcome, Pencil};
use crate::Verdict;

use super::{is_isomorphism_in_h0, DgFunctor, Element, FunctorError, HomotopyCategory};

/// A hom map that fails to be a quasi-isomorphism, with the offending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomFailure {
    pub source: String,
    pub target: String,
    pub degree: i32,
}

/// `forward: F(object) -> y'` and `backward: y' -> F(object)`, mutually
/// inverse in `H^0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialWitness {
    pub object: usize,
    pub forward: Element,
    pub backward: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Essential {
    Witness(EssentialWitness),
    /// No source object can work; one refutation per source object.
    Refuted(Vec<(usize, String)>),
    Unresolved,
}

impl Essential {
    fn verdict(&self) -> Verdict {
        match self {
            Essential::Witness(_) => Verdict::Pass,
            Essential::Refuted(_) => Verdict::Fail,
            Essential::Unresolved => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkReport {
    pub hom_failures: Vec<HomFailure>,
    /// One entry per target object.
    pub essential: Vec<(usize, Essential)>,
}

pub type GradedReport = DkReport;

impl DkReport {
    pub fn verdict(&self) -> Verdict {
        let ess = Verdict::all(self.essential.iter().map(|(_, e)| e.verdict()));
        if self.hom_failures.is_empty() {
            ess
        } else {
            Verdict::Fail
        }
    }

    pub fn is_equivalence(&self) -> bool {
        self.verdict() == Verdict::Pass
    }
}

pub fn is_dk_equivalence(f: &DgFunctor, budget: &Budget) -> Result<DkReport, FunctorError> {
    f.ensure_valid()?;
    let s = f.source();
    let t = f.target();
    let mut hom_failures = Vec::new();
    for x in 0..s.len() {
        for y in 0..s.len() {
            let m = f.hom_map(x, y);
            let degrees: std::collections::BTreeSet<i32> = m.source().support().chain(m.target().support()).collect();
            for n in degrees {
                let ind = m.induced_map(n).expect("validated functor");
                if ind.rows() != ind.cols() || rank(&ind) != ind.rows() {
                    hom_failures.push(HomFailure { source: s.name(x).into(), target: s.name(y).into(), degree: n });
                    break;
                }
            }
        }
    }
    let h0 = HomotopyCategory::new(t.clone());
    let mut essential = Vec::new();
    for y in 0..t.len() {
        let mut refutations = Vec::new();
        let mut found = None;
        for x in 0..s.len() {
            match yoneda_witness(&h0, f.object(x), y, budget) {
                Outcome::Found((fwd, bwd)) => {
                    found = Some(EssentialWitness { object: x, forward: fwd, backward: bwd });
                    break;
                }
                Outcome::Refuted(r) => refutations.push((x, r.to_string())),
                Outcome::NotFoundWithinBudget => {}
            }
        }
        let e = match found {
            Some(w) => Essential::Witness(w),
            None if refutations.len() == s.len() => Essential::Refuted(refutations),
            None => Essential::Unresolved,
        };
        essential.push((y, e));
    }
    Ok(DkReport { hom_failures, essential })
}

/// An `H^0`-isomorphism `a -> b` with its inverse, found by the Yoneda
/// criterion.
pub(crate) fn yoneda_witness(
    h0: &HomotopyCategory,
    a: usize,
    b: usize,
    budget: &Budget,
) -> Outcome<(Element, Element)> {
    let t = h0.category();
    let params = h0.dim(a, b, 0);
    let reps: Vec<Element> = (0..params).map(|i| h0.representative(a, b, 0, i)).collect();
    let mut pencil = Pencil::new(params);
    for z in 0..t.len() {
        let terms: Vec<Matrix> = reps.iter().map(|r| h0.post_composition(z, a, b, r, 0)).collect();
        pencil.push(h0.dim(z, b, 0), h0.dim(z, a, 0), terms);
    }
    let hint = (a == b).then(|| h0.identity(a));
    match pencil.search(hint.as_deref(), budget) {
        Outcome::Found(coeffs) => {
            let mut fwd = t.zero_element(a, b, 0);
            for (c, r) in coeffs.iter().zip(&reps) {
                crate::field::axpy(&mut fwd.coords, c, &r.coords);
            }
            if !is_isomorphism_in_h0(h0, a, b, &fwd).expect("combination of cycles") {
                return Outcome::NotFoundWithinBudget;
            }
            // [g][f] = [id_a] is linear in g
            let pre = h0.pre_composition(a, b, a, &fwd, 0);
            let Some(g) = solve(&pre, &h0.identity(a)).expect("shapes") else {
                return Outcome::NotFoundWithinBudget;
            };
            let mut bwd = t.zero_element(b, a, 0);
            for (c, i) in g.iter().zip(0..) {
                crate::field::axpy(&mut bwd.coords, c, &h0.representative(b, a, 0, i).coords);
            }
            let fg = h0.class_of(b, b, &t.compose(b, a, b, &fwd, &bwd));
            if fg != Some(h0.identity(b)) {
                return Outcome::NotFoundWithinBudget;
            }
            Outcome::Found((fwd, bwd))
        }
        Outcome::Refuted(r) => Outcome::Refuted(r),
        Outcome::NotFoundWithinBudget => Outcome::NotFoundWithinBudget,
    }
}

fn cohomology_dim_by_rank(c: &crate::complex::CochainComplex, n: i32) -> usize {
    c.dim(n) - rank(&c.differential(n)) - rank(&c.differential(n - 1))
}

/// Rank of the induced map on `H^n`, as `dim(F(Z) + B') - dim B'`.
fn induced_rank(m: &crate::complex::ChainMap, n: i32) -> usize {
    let z = kernel_basis(&m.source().differential(n));
    let comp = m.component(n);
    let rows = m.target().dim(n);
    let images: Vec<Vector> = z.iter().map(|v| comp.mul_vec(v)).collect();
    let b = m.target().differential(n - 1);
    let mut stacked = Matrix::zero(rows, images.len() + b.cols());
    stacked.place(0, 0, &Matrix::from_columns(rows, &images));
    stacked.place(0, images.len(), &b);
    rank(&stacked) - rank(&b)
}

/// Independent check through the graded homotopy category.
pub fn graded_equivalence_check(f: &DgFunctor, budget: &Budget) -> Result<GradedReport, FunctorError> {
    f.ensure_valid()?;
    let s = f.source();
    let t = f.target();
    let mut hom_failures = Vec::new();
    for x in 0..s.len() {
        for y in 0..s.len() {
            let m = f.hom_map(x, y);
            let (lo, hi) = support_bounds(m.source(), m.target());
            for n in lo..=hi {
                let hs = cohomology_dim_by_rank(m.source(), n);
                let ht = cohomology_dim_by_rank(m.target(), n);
                if hs != ht || induced_rank(&m, n) != hs {
                    hom_failures.push(HomFailure { source: s.name(x).into(), target: s.name(y).into(), degree: n });
                    break;
                }
            }
        }
    }
    let hs = HomotopyCategory::graded(t.clone());
    let table = |a: usize, b: usize| -> Vec<(i32, usize)> {
        hs.degrees(a, b).into_iter().map(|n| (n, hs.dim(a, b, n))).collect()
    };
    let mut essential = Vec::new();
    for y in 0..t.len() {
        let mut obstructions = Vec::new();
        let mut found = None;
        for x in 0..s.len() {
            let fx = f.object(x);
            let mismatch = (0..t.len()).find_map(|z| {
                if table(z, y) != table(z, fx) {
                    Some(format!("H*({0}, {1}) differs from H*({0}, {2})", t.name(z), t.name(y), t.name(fx)))
                } else if table(y, z) != table(fx, z) {
                    Some(format!("H*({1}, {0}) differs from H*({2}, {0})", t.name(z), t.name(y), t.name(fx)))
                } else {
                    None
                }
            });
            if let Some(m) = mismatch {
                obstructions.push((x, m));
                continue;
            }
            if let Some(w) = two_sided_inverse_search(&hs, fx, y, budget) {
                found = Some(EssentialWitness { object: x, forward: w.0, backward: w.1 });
                break;
            }
        }
        let e = match found {
            Some(w) => Essential::Witness(w),
            None if obstructions.len() == s.len() => Essential::Refuted(obstructions),
            None => Essential::Unresolved,
        };
        essential.push((y, e));
    }
    Ok(DkReport { hom_failures, essential })
}

fn support_bounds(a: &crate::complex::CochainComplex, b: &crate::complex::CochainComplex) -> (i32, i32) {
    let lo = a.support().chain(b.support()).min().unwrap_or(0);
    let hi = a.support().chain(b.support()).max().unwrap_or(-1);
    (lo, hi)
}

/// Tries candidate classes `f ∈ H^0(a, b)`; for each, solves the linear
/// system `[g][f] = 1, [f][g] = 1` for `g ∈ H^0(b, a)`.
fn two_sided_inverse_search(hs: &HomotopyCategory, a: usize, b: usize, budget: &Budget) -> Option<(Element, Element)> {
    let t = hs.category();
    let (nf, ng) = (hs.dim(a, b, 0), hs.dim(b, a, 0));
    let mut candidates: Vec<Vector> = Vec::new();
    if a == b {
        candidates.push(hs.identity(a));
    }
    candidates.extend((0..nf).map(|i| crate::field::unit_vector(nf, i)));
    candidates.push(vec![Scalar::one(); nf]);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x9e37_79b9);
    let h = budget.height.max(1);
    for _ in 0..budget.random_trials {
        candidates.push((0..nf).map(|_| Scalar::from_int(rng.gen_range(-h..=h))).collect());
    }
    let (ia, ib) = (hs.identity(a), hs.identity(b));
    for cf in candidates {
        // columns: the basis classes of H^0(b, a); rows: H^0(a,a) then H^0(b,b)
        let mut m = Matrix::zero(ia.len() + ib.len(), ng);
        for j in 0..ng {
            let gj = crate::field::unit_vector(ng, j);
            let gf = hs.compose(a, b, a, (0, &gj), (0, &cf));
            let fg = hs.compose(b, a, b, (0, &cf), (0, &gj));
            for (i, v) in gf.iter().chain(fg.iter()).enumerate() {
                m.set(i, j, v.clone());
            }
        }
        let rhs: Vector = ia.iter().chain(ib.iter()).cloned().collect();
        if let Some(g) = solve(&m, &rhs).expect("shapes") {
            let lift = |x: usize, y: usize, c: &[Scalar]| {
                let mut e = t.zero_element(x, y, 0);
                for (coef, i) in c.iter().zip(0..) {
                    crate::field::axpy(&mut e.coords, coef, &hs.representative(x, y, 0, i).coords);
                }
                e
            };
            return Some((lift(a, b, &cf), lift(b, a, &g)));
        }
    }
    None
}
