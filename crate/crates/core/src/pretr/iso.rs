use std::collections::BTreeSet;

use crate::complex::ChainMap;
use crate::field::{Matrix, Vector};
use crate::search::{Budget, Outcome, Pencil};

use super::{TwistedComplex, TwistedError, TwistedHom, TwistedHomComplex};

/// Post-composition `Hom(B, K) -> Hom(B, K')` with `f`, for each base object `B`.
fn evaluation_maps(f: &TwistedHom) -> Vec<ChainMap> {
    let base = f.source().base();
    (0..base.len())
        .map(|b| {
            let e = TwistedComplex::embed(base.clone(), b);
            let s = TwistedHomComplex::new(&e, f.source()).expect("same base");
            let t = TwistedHomComplex::new(&e, f.target()).expect("same base");
            let comps: Vec<(i32, Matrix)> = s
                .complex()
                .space()
                .iter()
                .map(|(n, dim)| {
                    let cols: Vec<Vector> =
                        (0..dim).map(|i| t.flatten(&f.compose(&s.basis(n, i)).expect("composable"))).collect();
                    (n, Matrix::from_columns(t.dim(n + f.degree()), &cols))
                })
                .collect();
            ChainMap::new(s.complex().clone(), t.complex().clone(), f.degree(), comps).expect("shapes")
        })
        .collect()
}

/// `f` is closed of degree 0 and evaluation against every base object is a
/// quasi-isomorphism. For one-sided twisted complexes this makes `f` an
/// isomorphism in `H^0` of the pre-tr category.
pub fn verify_h0_iso(f: &TwistedHom) -> bool {
    !f.source().is_general()
        && !f.target().is_general()
        && f.degree() == 0
        && f.is_closed()
        && evaluation_maps(f).iter().all(|m| m.is_quasi_iso().unwrap_or(false))
}

/// Searches the closed degree-0 classes `K -> K'` for one whose evaluations
/// are all quasi-isomorphisms. Every `Found` passed [`verify_h0_iso`].
pub fn find_h0_iso(
    k: &TwistedComplex,
    k2: &TwistedComplex,
    budget: &Budget,
) -> Result<Outcome<TwistedHom>, TwistedError> {
    let hom = TwistedHomComplex::new(k, k2)?;
    let h0 = hom.complex().cohomology(0);
    let reps: Vec<TwistedHom> = h0.representatives().iter().map(|v| hom.unflatten(0, v)).collect();
    let base = k.base();
    let mut pencil = Pencil::new(reps.len());
    for b in 0..base.len() {
        let e = TwistedComplex::embed(base.clone(), b);
        let s = TwistedHomComplex::new(&e, k)?;
        let t = TwistedHomComplex::new(&e, k2)?;
        let degrees: BTreeSet<i32> = s.complex().support().chain(t.complex().support()).collect();
        for n in degrees {
            let (hs, ht) = (s.complex().cohomology(n), t.complex().cohomology(n));
            let terms: Vec<Matrix> = reps
                .iter()
                .map(|f| {
                    let cols: Vec<Vector> = hs
                        .representatives()
                        .iter()
                        .map(|z| {
                            let img = f.compose(&s.unflatten(n, z)).expect("composable");
                            ht.class_of(&t.flatten(&img)).expect("cycles compose to cycles")
                        })
                        .collect();
                    Matrix::from_columns(ht.dim(), &cols)
                })
                .collect();
            pencil.push(ht.dim(), hs.dim(), terms);
        }
    }
    let hint = (k == k2).then(|| h0.class_of(&hom.flatten(&k.identity())).expect("identity is a cycle"));
    Ok(match pencil.search(hint.as_deref(), budget) {
        Outcome::Found(coeffs) => {
            let mut f = TwistedHom::zero(k.clone(), k2.clone(), 0);
            for (c, r) in coeffs.iter().zip(&reps) {
                f = f.add(&r.scale(c));
            }
            if verify_h0_iso(&f) {
                Outcome::Found(f)
            } else {
                Outcome::NotFoundWithinBudget
            }
        }
        Outcome::Refuted(r) => Outcome::Refuted(r),
        Outcome::NotFoundWithinBudget => Outcome::NotFoundWithinBudget,
    })
}
