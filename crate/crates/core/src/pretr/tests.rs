use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::complex::{hom_complex, CochainComplex};
use crate::dgcat::{delta1, extension_algebra, square_zero_algebra, unit_category};
use crate::dgmod::{homotopy_cofiber, representable, ModuleHomComplex};
use crate::field::Matrix;
use crate::search::{Budget, Outcome, Refutation};
use crate::Verdict;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn el(degree: i32, coords: &[i64]) -> Element {
    Element::new(degree, coords.iter().map(|&c| s(c)).collect())
}

fn k() -> Arc<DgCategory> {
    Arc::new(unit_category())
}

fn id_map(t: &Arc<DgCategory>, x: usize) -> TwistedHom {
    TwistedComplex::embed(t.clone(), x).identity()
}

fn arrow(t: &Arc<DgCategory>) -> TwistedHom {
    let e = |x| TwistedComplex::embed(t.clone(), x);
    TwistedHom::new(e(0), e(1), 0, Entries::from([((0, 0), el(0, &[1]))])).unwrap()
}

fn cohomology_dims(c: &CochainComplex) -> BTreeMap<i32, usize> {
    c.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect()
}

fn dims(c: &CochainComplex) -> BTreeMap<i32, usize> {
    c.space().iter().filter(|&(_, d)| d > 0).collect()
}

#[test]
fn construction_errors() {
    let a = Arc::new(square_zero_algebra());
    let summands = vec![(0, 0), (0, -1)];
    // a is not closed, so q = a violates Maurer-Cartan
    let err = TwistedComplex::new(a.clone(), summands.clone(), Entries::from([((1, 0), el(0, &[0, 1]))]), false);
    assert_eq!(err.unwrap_err(), TwistedError::MaurerCartan { from: 0, to: 1 });
    assert!(TwistedComplex::new(a.clone(), summands.clone(), Entries::from([((1, 0), el(0, &[1, 0]))]), false).is_ok());
    let err = TwistedComplex::new(a.clone(), summands.clone(), Entries::from([((1, 0), el(1, &[1]))]), false);
    assert_eq!(err.unwrap_err(), TwistedError::Degree { from: 0, to: 1, expected: 0, found: 1 });
    let err = TwistedComplex::new(a.clone(), summands.clone(), Entries::from([((1, 0), el(0, &[1]))]), false);
    assert!(matches!(err.unwrap_err(), TwistedError::Length { expected: 2, found: 1, .. }));
    let err = TwistedComplex::new(a.clone(), summands, Entries::from([((2, 0), el(0, &[1, 0]))]), false);
    assert_eq!(err.unwrap_err(), TwistedError::OutOfRange { from: 0, to: 2 });
    assert_eq!(
        TwistedComplex::new(a, vec![(3, 0)], Entries::new(), false).unwrap_err(),
        TwistedError::UnknownObject(0)
    );
}

#[test]
fn cyclic_q_needs_the_general_flag() {
    // w in degree 1 with w∘w = 0
    let t = Arc::new(extension_algebra(1, None));
    let q = Entries::from([((0, 1), el(1, &[1])), ((1, 0), el(1, &[1]))]);
    let summands = vec![(0, 0), (0, 0)];
    assert_eq!(
        TwistedComplex::new(t.clone(), summands.clone(), q.clone(), false).unwrap_err(),
        TwistedError::NotTriangular
    );
    let g = TwistedComplex::new(t, summands, q, true).unwrap();
    assert!(g.is_general());
    assert!(!verify_h0_iso(&g.identity()));
}

#[test]
fn end_of_cone_of_identity() {
    let t = k();
    let c = cone(&id_map(&t, 0)).unwrap();
    assert_eq!(c.summands(), &[(0, 1), (0, 0)]);
    let h = hom_twisted(&c, &c).unwrap();
    // totalization of cone(id_k) is k -> k in degrees -1, 0
    let tot = CochainComplex::two_term(-1, 1, &Scalar::one());
    let oracle = hom_complex(&tot, &tot);
    assert_eq!(dims(&h), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
    assert_eq!(dims(&h), dims(&oracle));
    assert!(h.is_acyclic());
    assert!(oracle.is_acyclic());
}

#[test]
fn morphism_algebra() {
    let t = Arc::new(square_zero_algebra());
    let e = TwistedComplex::embed(t.clone(), 0);
    let c = cone(&e.identity()).unwrap();
    let hc = TwistedHomComplex::new(&c, &c).unwrap();
    for l in hc.complex().support() {
        for i in 0..hc.dim(l) {
            let f = hc.basis(l, i);
            assert!(f.d().d().is_zero());
            assert_eq!(c.identity().compose(&f).unwrap(), f);
            assert_eq!(f.compose(&c.identity()).unwrap(), f);
            assert_eq!(hc.unflatten(l, &hc.flatten(&f)), f);
        }
    }
    let err = e.identity().compose(&c.identity()).unwrap_err();
    assert_eq!(err, TwistedError::NotComposable);
    assert_eq!(cone(&hc.basis(-1, 0)).unwrap_err(), TwistedError::NotClosed);
}

#[test]
fn shift_round_trip_and_hom_degrees() {
    let t = Arc::new(delta1());
    let c = cone(&arrow(&t)).unwrap();
    for n in -3..=3 {
        assert_eq!(c.shift(n).shift(-n), c);
        let f = c.identity();
        assert_eq!(f.shift(n).shift(-n), f);
        let h = hom_twisted(&c, &c).unwrap();
        let hn = hom_twisted(&c.shift(n), &c).unwrap();
        let shifted: BTreeMap<i32, usize> = cohomology_dims(&h).into_iter().map(|(d, v)| (d + n, v)).collect();
        assert_eq!(cohomology_dims(&hn), shifted);
        // shifting both sides negates the differential for odd n
        let both = hom_twisted(&c.shift(n), &c.shift(n)).unwrap();
        assert_eq!(both.space(), h.space());
        for (d, m) in h.differentials() {
            let expected = if n % 2 == 0 { m.clone() } else { m.neg() };
            assert_eq!(both.differential(d), expected);
        }
    }
}

#[test]
fn cone_maps_satisfy_identities() {
    let t = Arc::new(delta1());
    let f = arrow(&t);
    let c = cone(&f).unwrap();
    let (i, p, h) = cone_maps(&f, &c);
    assert!(i.is_closed() && p.is_closed());
    assert_eq!(i.compose(&f).unwrap(), h.d());
    assert!(p.compose(&i).unwrap().is_zero());
}

#[test]
fn alpha_of_embedded_object_is_representable() {
    for t in [k(), Arc::new(delta1()), Arc::new(square_zero_algebra())] {
        for x in 0..t.len() {
            let a = alpha(&TwistedComplex::embed(t.clone(), x));
            let r = representable(t.clone(), x);
            assert_eq!(a.values(), r.values());
            for y in 0..t.len() {
                for z in 0..t.len() {
                    for p in a.value(z).support() {
                        for i in 0..a.value(z).dim(p) {
                            let m = Element::basis(p, a.value(z).dim(p), i);
                            for q in t.hom(y, z).support() {
                                for j in 0..t.hom(y, z).dim(q) {
                                    let u = t.basis_element(y, z, q, j);
                                    assert_eq!(a.act(y, z, &m, &u), r.act(y, z, &m, &u));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn alpha_of_cone_is_cofiber() {
    let t = Arc::new(delta1());
    for f in [arrow(&t), id_map(&t, 0), id_map(&t, 1)] {
        let lhs = alpha(&cone(&f).unwrap());
        let rhs = homotopy_cofiber(&alpha_map(&f)).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.validate().is_empty());
    }
}

#[test]
fn alpha_is_fully_faithful_on_small_objects() {
    let t = Arc::new(delta1());
    let budget = Budget { shift_range: 1, ..Budget::default() };
    let objects = budgeted_objects(&t, &budget);
    let picks = ["[]", "0", "1", "1[1]", "cone(0->1:0)"];
    let chosen: Vec<&TwistedComplex> =
        picks.iter().map(|n| &objects.iter().find(|(m, _)| m == n).expect("named object").1).collect();
    for a in &chosen {
        for b in &chosen {
            let h = hom_twisted(a, b).unwrap();
            let m = ModuleHomComplex::new(Arc::new(alpha(a)), Arc::new(alpha(b))).unwrap();
            assert_eq!(cohomology_dims(&h), cohomology_dims(m.complex()));
        }
    }
}

#[test]
fn alpha_map_respects_composition() {
    let t = Arc::new(delta1());
    let f = arrow(&t);
    let c = cone(&f).unwrap();
    let (i, _, _) = cone_maps(&f, &c);
    let lhs = alpha_map(&i.compose(&f).unwrap());
    let rhs = alpha_map(&i).compose(&alpha_map(&f)).unwrap();
    assert_eq!(lhs.components(), rhs.components());
}

#[test]
fn h0_isomorphisms() {
    let budget = Budget::default();
    let t = Arc::new(delta1());
    let c = cone(&arrow(&t)).unwrap();
    let Outcome::Found(w) = find_h0_iso(&c, &c, &budget).unwrap() else { panic!("self iso") };
    assert!(verify_h0_iso(&w));

    let u = k();
    let zero = TwistedComplex::zero(u.clone());
    let cid = cone(&id_map(&u, 0)).unwrap();
    let Outcome::Found(w) = find_h0_iso(&cid, &zero, &budget).unwrap() else { panic!("contractible") };
    assert!(verify_h0_iso(&w));

    let e = TwistedComplex::embed(u.clone(), 0);
    let out = find_h0_iso(&e, &e.shift(1), &budget).unwrap();
    assert!(matches!(out, Outcome::Refuted(Refutation::NonSquare { .. })), "{out:?}");
    assert!(find_h0_iso(&e, &zero, &budget).unwrap().is_refuted());
    // the zero morphism k -> k is closed but not an isomorphism
    assert!(!verify_h0_iso(&TwistedHom::zero(e.clone(), e, 0)));
}

#[test]
fn delta1_is_not_pretriangulated() {
    let t = Arc::new(delta1());
    let r = is_pretriangulated(&t, &Budget { shift_range: 1, ..Budget::default() }, None);
    assert_eq!(r.zero.verdict, Verdict::Fail);
    assert!(r.shifts.iter().all(|c| c.verdict == Verdict::Fail));
    let arrow_cone = r.cones.iter().find(|c| c.case == "cone(0->1:0)").unwrap();
    assert_eq!(arrow_cone.verdict, Verdict::Fail);
    assert_eq!(r.verdict(), Verdict::Fail);
}

#[test]
fn closure_of_delta1_is_pretriangulated() {
    let t = Arc::new(delta1());
    let budget = Budget { shift_range: 1, ..Budget::default() };
    let objects = budgeted_objects(&t, &budget);
    let p = Arc::new(pretr_category(&objects).unwrap());
    assert!(p.validate().is_ok());
    let probes: Vec<usize> = ["0", "1"].iter().map(|n| p.index_of(n).unwrap()).collect();
    let r = is_pretriangulated(&p, &budget, Some(&probes));
    for c in r.cases() {
        assert_eq!(c.verdict, Verdict::Pass, "{}: {}", c.case, c.detail);
        assert!(c.witness.as_ref().unwrap().verify());
    }
}

#[test]
fn triangle_axioms_hold_for_twisted_complexes() {
    let t = Arc::new(delta1());
    let budget = Budget::default();
    let objects = triangle_objects(&t, None, &budget);
    let r = triangle_axioms(&objects, &budget);
    assert!(!r.tr1.is_empty() && !r.tr3.is_empty());
    for c in r.cases() {
        assert_eq!(c.verdict, Verdict::Pass, "{}: {}", c.case, c.detail);
    }
    for c in r.tr2.iter().chain(&r.tr3) {
        assert!(c.witness.as_ref().unwrap().verify(), "{}", c.case);
    }
}

#[test]
fn fill_in_requires_a_commuting_square() {
    let t = k();
    let e = TwistedComplex::embed(t.clone(), 0);
    let id = e.identity();
    let zero = TwistedHom::zero(e.clone(), e.clone(), 0);
    // the square id∘id = id∘0 does not commute, and no fill-in exists
    assert!(fill_in(&id, &zero, &id, &id).is_none());
    let c = fill_in(&id, &id, &id, &id).unwrap();
    assert!(verify_fill_in(&id, &id, &id, &id, &c));
    let cid = cone(&id).unwrap();
    // cone(id) is contractible, so even the zero map fills the identity square
    assert!(verify_fill_in(&id, &id, &id, &id, &TwistedHom::zero(cid.clone(), cid.clone(), 0)));
    assert!(!verify_fill_in(&id, &id, &id, &id, &TwistedHom::zero(cid.clone(), cid, 1)));
    assert!(fill_in(&zero, &zero, &id, &zero).is_some());
}

/// Twisted complex over `k` with `a` summands in shift `r+1`, `b` in shift
/// `r` and `q` the given `b x a` matrix, plus its totalization.
fn two_level(r: i32, a: usize, b: usize, q: &[i64]) -> (TwistedComplex, CochainComplex) {
    let mut summands = vec![(0, r + 1); a];
    summands.extend(vec![(0, r); b]);
    let mut entries = Entries::new();
    let mut m = Matrix::zero(b, a);
    for t in 0..b {
        for j in 0..a {
            let x = q[t * a + j];
            entries.insert((a + t, j), el(0, &[x]));
            m.set(t, j, s(x));
        }
    }
    let k = TwistedComplex::new(k(), summands, entries, false).unwrap();
    let diffs = if a > 0 && b > 0 { vec![(-r - 1, m)] } else { vec![] };
    let tot = CochainComplex::new([(-r - 1, a), (-r, b)], diffs).unwrap();
    (k, tot)
}

fn two_level_strategy() -> impl Strategy<Value = (i32, usize, usize, Vec<i64>)> {
    (-2i32..=2, 0usize..=2, 0usize..=2)
        .prop_flat_map(|(r, a, b)| (Just(r), Just(a), Just(b), prop::collection::vec(-2i64..=2, a * b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hom_twisted_matches_totalized_hom(x in two_level_strategy(), y in two_level_strategy()) {
        let (k1, t1) = two_level(x.0, x.1, x.2, &x.3);
        let (k2, t2) = two_level(y.0, y.1, y.2, &y.3);
        let h = hom_twisted(&k1, &k2).unwrap();
        let oracle = hom_complex(&t1, &t2);
        prop_assert_eq!(dims(&h), dims(&oracle));
        prop_assert_eq!(cohomology_dims(&h), cohomology_dims(&oracle));
    }

    #[test]
    fn composition_is_associative_and_leibniz(
        i in 0usize..64, j in 0usize..64, l in 0usize..64, shift in -1i32..=1,
    ) {
        let t = Arc::new(square_zero_algebra());
        let e = TwistedComplex::embed(t.clone(), 0);
        let c = cone(&e.identity()).unwrap().shift(shift);
        let hc = TwistedHomComplex::new(&c, &c).unwrap();
        let all: Vec<TwistedHom> =
            hc.complex().space().iter().flat_map(|(d, n)| (0..n).map(move |i| (d, i))).map(|(d, i)| hc.basis(d, i)).collect();
        let (f, g, h) = (&all[i % all.len()], &all[j % all.len()], &all[l % all.len()]);
        let gf = g.compose(f).unwrap();
        prop_assert_eq!(h.compose(&gf).unwrap(), h.compose(g).unwrap().compose(f).unwrap());
        let sign = if g.degree() % 2 == 0 { s(1) } else { s(-1) };
        let leibniz = g.d().compose(f).unwrap().add(&g.compose(&f.d()).unwrap().scale(&sign));
        prop_assert_eq!(gf.d(), leibniz);
    }
}
