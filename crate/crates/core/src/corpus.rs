//! The shipped examples: base categories, their closures, module categories,
//! functors and the Morita certificate.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgcat::{
    delta1, extension_algebra, opposite, square_zero_algebra, tensor, unit_category, DgCategory, DgFunctor, Element,
};
use crate::dgmod::{
    direct_sum, homotopy_cofiber, module_category, representable, shift, yoneda_functor, zero_module, Cell,
    CellPresentation, DgModule, ModuleCategory, ModuleMap, MoritaCertificate, ObjectCertificate,
};
use crate::field::{solve, Matrix, Scalar};

pub fn base_categories() -> Vec<(String, DgCategory)> {
    vec![
        ("k".into(), unit_category()),
        ("delta1".into(), delta1()),
        ("square-zero".into(), square_zero_algebra()),
        ("ext(-1,2)".into(), extension_algebra(-1, Some(Scalar::from_int(2)))),
        ("ext(1)".into(), extension_algebra(1, None)),
    ]
}

/// Tensor and opposite closures of `k` and `Δ¹`.
pub fn closure_categories() -> Vec<(String, DgCategory)> {
    let (k, d) = (unit_category(), delta1());
    vec![
        ("k⊗k".into(), tensor(&k, &k)),
        ("k⊗delta1".into(), tensor(&k, &d)),
        ("delta1⊗k".into(), tensor(&d, &k)),
        ("delta1⊗delta1".into(), tensor(&d, &d)),
        ("k^op".into(), opposite(&k)),
        ("delta1^op".into(), opposite(&d)),
        ("(delta1⊗delta1)^op".into(), opposite(&tensor(&d, &d))),
        ("delta1⊗square-zero".into(), tensor(&d, &square_zero_algebra())),
    ]
}

/// Modules over `k`: the zero module and `k[n]` for `|n| <= range`, a
/// subcategory of perfect modules closed under the shifts and cones that
/// stay in range.
pub fn shift_modules(range: i32) -> ModuleCategory {
    let t = Arc::new(unit_category());
    let rep = representable(t.clone(), 0);
    let mut named = vec![("0".to_string(), zero_module(t))];
    for n in -range..=range {
        let name = if n == 0 { "k".to_string() } else { format!("k[{n}]") };
        named.push((name, shift(&rep, n)));
    }
    module_category(named).expect("modules over k")
}

/// `k`, `k⊕k` and `cone(id_k)` as modules over `k`.
pub fn morita_target() -> ModuleCategory {
    let t = Arc::new(unit_category());
    let rep = Arc::new(representable(t, 0));
    let sum = direct_sum(&rep, &rep).expect("same base");
    let cone = homotopy_cofiber(&ModuleMap::identity(rep.clone())).expect("identity is closed");
    module_category(vec![("k".into(), (*rep).clone()), ("k+k".into(), sum), ("cone(id)".into(), cone)])
        .expect("modules over k")
}

/// The Yoneda inclusion `{k} -> {k, k⊕k, cone(id_k)}`.
pub fn morita_functor(mc: &ModuleCategory) -> DgFunctor {
    yoneda_functor(Arc::new(unit_category()), mc, vec![0]).expect("module 0 is the representable")
}

fn single(
    m: &Arc<DgModule>,
    n: &Arc<DgModule>,
    rows: usize,
    cols: usize,
    entries: &[(usize, usize)],
    degree: i32,
    at: i32,
) -> ModuleMap {
    let mut mat = Matrix::zero(rows, cols);
    for &(r, c) in entries {
        mat.set(r, c, Scalar::one());
    }
    ModuleMap::new(m.clone(), n.clone(), degree, vec![BTreeMap::from([(at, mat)])]).expect("shapes")
}

/// Retract certificates for every object of [`morita_target`]. With
/// `flip_attaching_sign` the cone cell is attached by `-id`, which makes the
/// retraction fail to be closed.
pub fn morita_certificate(mc: &ModuleCategory, flip_attaching_sign: bool) -> MoritaCertificate {
    let t = mc.category().clone();
    let (k, sum, cone) = (mc.module(0), mc.module(1), mc.module(2));
    let unit = t.unit_element(0);
    let zero = |x: usize, y: usize, d: i32| t.zero_element(x, y, d);
    let cell = |degree: i32, attach: Vec<(usize, Element)>| Cell { object: 0, degree, attach };

    let k_cert = ObjectCertificate {
        object: 0,
        presentation: CellPresentation::new(t.clone(), vec![cell(0, vec![])]),
        i: unit.clone(),
        r: vec![unit.clone()],
        h: zero(0, 0, -1),
    };

    let proj = |j| mc.element_of(1, 0, &single(sum, k, 1, 2, &[(0, j)], 0, 0)).expect("natural");
    let incl = |j| mc.element_of(0, 1, &single(k, sum, 2, 1, &[(j, 0)], 0, 0)).expect("natural");
    let i_sum = Element::new(0, [proj(0).coords, proj(1).coords].concat());
    let sum_cert = ObjectCertificate {
        object: 1,
        presentation: CellPresentation::new(t.clone(), vec![cell(0, vec![]), cell(0, vec![])]),
        i: i_sum,
        r: vec![incl(0), incl(1)],
        h: zero(1, 1, -1),
    };

    let sign = if flip_attaching_sign { Scalar::from_int(-1) } else { Scalar::one() };
    let cone_cells = vec![cell(0, vec![]), cell(-1, vec![(0, unit.scale(&sign))])];
    let presentation = CellPresentation::new(t.clone(), cone_cells);
    // k -> cone(id)^(-1), the suspended copy of k
    let top = mc.element_of(0, 2, &single(k, cone, cone.value(0).dim(-1), 1, &[(0, 0)], -1, 0)).expect("natural");
    let bottom = t.d(0, 2, &top);
    let id = t.unit_element(2);
    let dh = t.hom(2, 2).differential(-1);
    let h = solve(&dh, &id.neg().coords).expect("shapes").expect("cone(id) is contractible");
    let cells_dim = crate::dgmod::realize_cell(&presentation).expect("valid cells").value(2).dim(0);
    let cone_cert = ObjectCertificate {
        object: 2,
        presentation,
        i: Element::zero(0, cells_dim),
        r: vec![bottom, top],
        h: Element::new(-1, h),
    };

    MoritaCertificate { functor: morita_functor(mc), objects: vec![k_cert, sum_cert, cone_cert] }
}

/// Every category of the corpus, module categories included.
pub fn all_categories() -> Vec<(String, Arc<DgCategory>)> {
    let mut out: Vec<(String, Arc<DgCategory>)> =
        base_categories().into_iter().chain(closure_categories()).map(|(n, c)| (n, Arc::new(c))).collect();
    out.push(("perf(k)".into(), shift_modules(2).category().clone()));
    out.push(("morita-target".into(), morita_target().category().clone()));
    out
}

/// Fixed functors: identities, inclusions, inflations by acyclic and
/// non-acyclic extensions, and the Morita inclusion.
pub fn fixed_functors() -> Vec<(String, DgFunctor)> {
    let t = Arc::new(delta1());
    let mut out = vec![
        ("id(delta1)".to_string(), DgFunctor::identity(t.clone())),
        ("id(square-zero)".to_string(), DgFunctor::identity(Arc::new(square_zero_algebra()))),
        ("{0}->delta1".to_string(), DgFunctor::inclusion(Arc::new(t.full_subcategory(&[0])), t.clone()).expect("sub")),
        ("{1}->delta1".to_string(), DgFunctor::inclusion(Arc::new(t.full_subcategory(&[1])), t.clone()).expect("sub")),
    ];
    for m in [-1, 0, 2] {
        let a = extension_algebra(m, Some(Scalar::from_int(m as i64 + 3)));
        out.push((format!("delta1->delta1⊗ext({m},{})", m + 3), inflation(&t, &a)));
        let w = extension_algebra(m, None);
        out.push((format!("delta1->delta1⊗ext({m})"), inflation(&t, &w)));
    }
    out.push(("morita-inclusion".to_string(), morita_functor(&morita_target())));
    out
}

fn inflation(t: &Arc<DgCategory>, a: &DgCategory) -> DgFunctor {
    DgFunctor::tensor_inclusion(t.clone(), a, Arc::new(tensor(t, a)))
}

/// `count` seeded random inflations `T -> T⊗A` along acyclic extensions
/// `A = k ⊕ (u -> v)`, some composed twice.
pub fn random_functors(seed: u64, count: usize) -> Vec<(String, DgFunctor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = base_categories();
    (0..count)
        .map(|i| {
            let (bname, base) = &bases[rng.gen_range(0..3)];
            let base = Arc::new(base.clone());
            let mut name = bname.clone();
            let mut f = DgFunctor::identity(base.clone());
            let depth = rng.gen_range(1..=2);
            for _ in 0..depth {
                let m = rng.gen_range(-2..=2);
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-4i64..=4);
                }
                let den = rng.gen_range(1i64..=3);
                let a = extension_algebra(m, Some(Scalar::from_frac(c, den)));
                let g = inflation(f.target(), &a);
                name = format!("{name}⊗ext({m},{c}/{den})");
                f = g.compose(&f);
            }
            (format!("random#{i}:{name}"), f)
        })
        .collect()
}
