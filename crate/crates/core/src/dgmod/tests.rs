use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::corpus::{morita_certificate, morita_functor, morita_target, shift_modules};
use crate::dgcat::{
    delta1, extension_algebra, square_zero_algebra, tensor, unit_category, DgCategory, DgFunctor, Element,
};
use crate::field::{Matrix, Scalar};
use crate::pretr::{alpha, cone, Entries, TwistedComplex, TwistedHom};
use crate::search::{Budget, Outcome, Refutation};
use crate::Verdict;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn cats() -> Vec<Arc<DgCategory>> {
    vec![Arc::new(unit_category()), Arc::new(delta1()), Arc::new(square_zero_algebra())]
}

fn cohomology_dims(c: &crate::complex::CochainComplex) -> BTreeMap<i32, usize> {
    c.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect()
}

#[test]
fn representables_are_modules() {
    for t in cats() {
        for x in 0..t.len() {
            let r = representable(t.clone(), x);
            assert!(r.validate().is_empty());
            assert!(shift(&r, 3).validate().is_empty());
            assert!(direct_sum(&r, &r).unwrap().validate().is_empty());
        }
        assert!(zero_module(t.clone()).validate().is_empty());
    }
}

#[test]
fn broken_action_is_located() {
    let t = Arc::new(delta1());
    let r = representable(t.clone(), 1);
    let mut actions = r.actions().clone();
    // f·e_0 = -f in hom(0, 1)
    actions.get_mut(&(0, 0)).unwrap().get_mut(&(0, 0)).unwrap()[0].3 = s(-1);
    let bad = DgModule::new(t, r.values().to_vec(), actions).unwrap();
    let v = bad.validate();
    assert!(v.iter().any(|x| matches!(x, ModuleViolation::Unit { .. })), "{v:?}");
}

#[test]
fn yoneda_lemma_for_homs() {
    // Hom(h_x, h_y) ≃ hom(x, y)
    for t in cats() {
        for x in 0..t.len() {
            for y in 0..t.len() {
                let h =
                    ModuleHomComplex::new(Arc::new(representable(t.clone(), x)), Arc::new(representable(t.clone(), y)))
                        .unwrap();
                assert_eq!(cohomology_dims(h.complex()), cohomology_dims(t.hom(x, y)));
                assert_eq!(h.complex().space(), t.hom(x, y).space());
            }
        }
    }
}

#[test]
fn yoneda_map_of_unit_is_identity() {
    for t in cats() {
        for x in 0..t.len() {
            let r = Arc::new(representable(t.clone(), x));
            let y = yoneda_map(&t, x, r.clone(), &t.unit_element(x)).unwrap();
            assert_eq!(y.components(), ModuleMap::identity(r).components());
        }
    }
}

#[test]
fn hom_complex_coordinates_round_trip() {
    let t = Arc::new(square_zero_algebra());
    let r = Arc::new(representable(t.clone(), 0));
    let h = ModuleHomComplex::new(r.clone(), r.clone()).unwrap();
    let id = ModuleMap::identity(r.clone());
    let c = h.coords_of(&id).unwrap();
    assert_eq!(h.map_of(0, &c).components(), id.components());
    for l in h.complex().support() {
        for i in 0..h.dim(l) {
            let f = h.basis_map(l, i);
            assert!(f.is_natural());
            // d on coordinates agrees with the module-map differential
            let df = h.coords_of(&f.d()).unwrap();
            assert_eq!(df, h.complex().apply_d(l, &Element::basis(l, h.dim(l), i).coords));
        }
    }
    // a non-natural map has no coordinates
    let mut comps = vec![BTreeMap::new()];
    comps[0].insert(0, Matrix::from_int_rows(&[&[1, 0], &[0, 0]]));
    let bad = ModuleMap::new(r.clone(), r, 0, comps).unwrap();
    assert!(!bad.is_natural());
    assert!(h.coords_of(&bad).is_none());
}

#[test]
fn cofiber_of_identity_is_acyclic() {
    for t in cats() {
        for x in 0..t.len() {
            let r = Arc::new(representable(t.clone(), x));
            let c = homotopy_cofiber(&ModuleMap::identity(r)).unwrap();
            assert!(c.validate().is_empty());
            assert!(c.values().iter().all(|v| v.is_acyclic()));
        }
    }
}

#[test]
fn suspension_shifts_values() {
    let t = Arc::new(square_zero_algebra());
    let r = representable(t.clone(), 0);
    let m = suspension(&r);
    assert_eq!(m.value(0).dim(-1), r.value(0).dim(0));
    assert_eq!(m.value(0).dim(0), r.value(0).dim(1));
    assert_eq!(shift(&m, -1), r);
    let h = ModuleHomComplex::new(Arc::new(r.clone()), Arc::new(m)).unwrap();
    let base: BTreeMap<i32, usize> = cohomology_dims(t.hom(0, 0)).into_iter().map(|(d, n)| (d - 1, n)).collect();
    assert_eq!(cohomology_dims(h.complex()), base);
}

#[test]
fn weak_representability() {
    let b = Budget::default();
    let t = Arc::new(delta1());
    for x in 0..t.len() {
        let r = Arc::new(representable(t.clone(), x));
        let Outcome::Found((c, m)) = is_weakly_representable(&r, &b) else { panic!("representable") };
        assert_eq!(c, x);
        assert!(yoneda_map(&t, c, r.clone(), &m).unwrap().is_pointwise_quasi_iso());
    }
    // the simple module at 1 is not representable in Δ¹
    let f = TwistedHom::new(
        TwistedComplex::embed(t.clone(), 0),
        TwistedComplex::embed(t.clone(), 1),
        0,
        Entries::from([((0, 0), Element::new(0, vec![s(1)]))]),
    )
    .unwrap();
    let simple = Arc::new(alpha(&cone(&f).unwrap()));
    assert!(is_weakly_representable(&simple, &b).is_refuted());
    let k = Arc::new(unit_category());
    let z = Arc::new(zero_module(k.clone()));
    assert!(matches!(is_weakly_representable(&z, &b), Outcome::Refuted(Refutation::NonSquare { .. })));
    let shifted = Arc::new(shift(&representable(k, 0), 1));
    assert!(is_weakly_representable(&shifted, &b).is_refuted());
}

#[test]
fn cells_realize_to_twisted_modules() {
    let t = Arc::new(delta1());
    let one = CellPresentation::new(t.clone(), vec![Cell { object: 1, degree: 0, attach: vec![] }]);
    assert_eq!(realize_cell(&one).unwrap().values(), representable(t.clone(), 1).values());

    // the arrow 0 -> 1 attached: a cell at 0 in degree -1 killing the arrow
    let arrow = Element::new(0, vec![s(1)]);
    let p = CellPresentation::new(
        t.clone(),
        vec![
            Cell { object: 1, degree: 0, attach: vec![] },
            Cell { object: 0, degree: -1, attach: vec![(0, arrow.clone())] },
        ],
    );
    let m = realize_cell(&p).unwrap();
    assert!(m.validate().is_empty());
    assert_eq!(cohomology_dims(m.value(0)), BTreeMap::new());
    assert_eq!(cohomology_dims(m.value(1)), BTreeMap::from([(0, 1)]));

    let late = CellPresentation::new(t.clone(), vec![Cell { object: 0, degree: 0, attach: vec![(0, arrow.clone())] }]);
    assert_eq!(realize_cell(&late).unwrap_err(), CellError::NotEarlier { cell: 0, to: 0 });
    let wrong = CellPresentation::new(
        t.clone(),
        vec![Cell { object: 1, degree: 0, attach: vec![] }, Cell { object: 0, degree: 0, attach: vec![(0, arrow)] }],
    );
    assert_eq!(realize_cell(&wrong).unwrap_err(), CellError::Degree { cell: 1, to: 0, expected: 1, found: 0 });

    // a non-closed attaching map
    let a = Arc::new(square_zero_algebra());
    let bad = CellPresentation::new(
        a.clone(),
        vec![
            Cell { object: 0, degree: 0, attach: vec![] },
            Cell { object: 0, degree: -1, attach: vec![(0, Element::new(0, vec![s(0), s(1)]))] },
        ],
    );
    assert_eq!(realize_cell(&bad).unwrap_err(), CellError::NotACycle(1));
}

#[test]
fn identity_retract() {
    let t = Arc::new(delta1());
    for x in 0..t.len() {
        let p = CellPresentation::new(t.clone(), vec![Cell { object: x, degree: 0, attach: vec![] }]);
        let module = Arc::new(representable(t.clone(), x));
        let c = Arc::new(realize_cell(&p).unwrap());
        let i = yoneda_map(&t, x, c, &p.generator(0)).unwrap();
        let r = cell_map(&p, module.clone(), &[t.unit_element(x)]).unwrap();
        let h = ModuleMap::zero(module.clone(), module.clone(), -1);
        let cert = RetractCertificate { module: module.clone(), presentation: p.clone(), i: i.clone(), r, h };
        assert_eq!(verify_retract(&cert), Ok(()));

        // r = 0 leaves r∘i - id = -id, which is not null-homotopic
        let zero_r = cell_map(&p, module.clone(), &[t.zero_element(x, x, 0)]).unwrap();
        let h = ModuleMap::zero(module.clone(), module.clone(), -1);
        let cert = RetractCertificate { module, presentation: p, i, r: zero_r, h };
        assert!(matches!(verify_retract(&cert), Err(RetractFailure::Homotopy { .. })));
    }
}

#[test]
fn morita_certificate_verifies() {
    let mc = morita_target();
    assert!(mc.category().validate().is_ok());
    let report = verify_morita(&morita_certificate(&mc, false));
    assert_eq!(report.verdict(), Verdict::Pass, "{report}");
    assert_eq!(report.label(), "certified Morita equivalence");
}

#[test]
fn flipped_attaching_sign_is_rejected() {
    let mc = morita_target();
    let report = verify_morita(&morita_certificate(&mc, true));
    assert_eq!(report.verdict(), Verdict::Fail);
    let (name, r) = &report.objects[2];
    assert_eq!(name, "cone(id)");
    assert_eq!(r, &Err(MoritaFailure::Retract(RetractFailure::NotClosed("r"))));
    assert!(report.objects[..2].iter().all(|(_, r)| r.is_ok()));
}

#[test]
fn corrupted_homotopy_is_rejected() {
    let mc = morita_target();
    let mut cert = morita_certificate(&mc, false);
    cert.objects[2].h = cert.objects[2].h.scale(&s(2));
    let report = verify_morita(&cert);
    assert!(matches!(report.objects[2].1, Err(MoritaFailure::Retract(RetractFailure::Homotopy { .. }))));
    cert.objects.pop();
    assert_eq!(verify_morita(&cert).objects[2].1, Err(MoritaFailure::Missing));
}

#[test]
fn morita_requires_a_dk_embedding() {
    let t = Arc::new(delta1());
    let w = extension_algebra(0, None);
    let f = DgFunctor::tensor_inclusion(t.clone(), &w, Arc::new(tensor(&t, &w)));
    let report = verify_morita(&MoritaCertificate { functor: f, objects: vec![] });
    assert!(report.embedding.is_err());
    assert_eq!(report.verdict(), Verdict::Fail);
}

#[test]
fn module_categories_are_dg_categories() {
    let mc = shift_modules(1);
    assert!(mc.category().validate().is_ok());
    let f = morita_functor(&morita_target());
    assert!(f.validate().is_empty());
    assert!(f.is_dk_embedding().unwrap());
}
