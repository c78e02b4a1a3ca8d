use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::dgcat::{CategoryParts, CompBlock, DgCategory, Element};
use crate::field::{solve, Matrix, Scalar, Vector};
use crate::search::{Budget, Outcome};
use crate::Verdict;

use super::{
    cone, cone_maps, find_h0_iso, verify_h0_iso, Entries, TwistedComplex, TwistedError, TwistedHom, TwistedHomComplex,
};

/// Data that lets a passing case be re-verified independently of the search
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// An `H^0`-isomorphism.
    Iso(TwistedHom),
    /// A fill-in `c: cone(f) -> cone(g)` of the square `b∘f ≃ g∘a`.
    FillIn { f: TwistedHom, g: TwistedHom, a: TwistedHom, b: TwistedHom, c: TwistedHom },
}

impl Witness {
    pub fn verify(&self) -> bool {
        match self {
            Witness::Iso(w) => verify_h0_iso(w),
            Witness::FillIn { f, g, a, b, c } => verify_fill_in(f, g, a, b, c),
        }
    }
}

/// One checked case of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub case: String,
    pub verdict: Verdict,
    pub detail: String,
    pub witness: Option<Witness>,
}

impl CaseResult {
    fn new(case: String, verdict: Verdict, detail: impl Into<String>) -> Self {
        CaseResult { case, verdict, detail: detail.into(), witness: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PretrReport {
    pub zero: CaseResult,
    pub shifts: Vec<CaseResult>,
    pub cones: Vec<CaseResult>,
}

impl PretrReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(std::iter::once(&self.zero).chain(&self.shifts).chain(&self.cones).map(|c| c.verdict))
    }

    pub fn cases(&self) -> impl Iterator<Item = &CaseResult> {
        std::iter::once(&self.zero).chain(&self.shifts).chain(&self.cones)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleReport {
    pub tr1: Vec<CaseResult>,
    pub tr2: Vec<CaseResult>,
    pub tr3: Vec<CaseResult>,
}

impl TriangleReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.cases().map(|c| c.verdict))
    }

    pub fn cases(&self) -> impl Iterator<Item = &CaseResult> {
        self.tr1.iter().chain(&self.tr2).chain(&self.tr3)
    }
}

fn unique_name(used: &mut BTreeSet<String>, name: String) -> String {
    let mut candidate = name.clone();
    let mut k = 1;
    while used.contains(&candidate) {
        k += 1;
        candidate = format!("{name}#{k}");
    }
    used.insert(candidate.clone());
    candidate
}

/// The degree-0 morphism with the single entry `f` between embedded objects.
fn embedded_map(base: &Arc<DgCategory>, x: usize, y: usize, f: Element) -> TwistedHom {
    let entries = Entries::from([((0, 0), f)]);
    TwistedHom::new(TwistedComplex::embed(base.clone(), x), TwistedComplex::embed(base.clone(), y), 0, entries)
        .expect("degree-0 element")
}

/// A basis of the degree-0 cycles `hom(x, y)`.
fn cycle_basis(base: &DgCategory, x: usize, y: usize) -> Vec<Element> {
    base.hom(x, y).cohomology(0).cycle_basis().iter().map(|v| Element::new(0, v.clone())).collect()
}

/// The zero object, every object, its shifts within the budget and the
/// cones of the degree-0 cycle basis morphisms between objects.
pub fn budgeted_objects(base: &Arc<DgCategory>, budget: &Budget) -> Vec<(String, TwistedComplex)> {
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut out = vec![(unique_name(&mut used, "[]".into()), TwistedComplex::zero(base.clone()))];
    for x in 0..base.len() {
        out.push((unique_name(&mut used, base.name(x).into()), TwistedComplex::embed(base.clone(), x)));
    }
    let r = budget.shift_range;
    for x in 0..base.len() {
        for n in (-r..=r).filter(|&n| n != 0) {
            let k = TwistedComplex::embed(base.clone(), x).shift(n);
            out.push((unique_name(&mut used, format!("{}[{n}]", base.name(x))), k));
        }
    }
    if budget.max_summands >= 2 {
        for x in 0..base.len() {
            for y in 0..base.len() {
                for (i, f) in cycle_basis(base, x, y).into_iter().enumerate() {
                    let c = cone(&embedded_map(base, x, y, f)).expect("cycle");
                    out.push((unique_name(&mut used, format!("cone({}->{}:{i})", base.name(x), base.name(y))), c));
                }
            }
        }
    }
    out
}

/// The full dg subcategory of twisted complexes on the given objects.
pub fn pretr_category(objects: &[(String, TwistedComplex)]) -> Result<DgCategory, TwistedError> {
    let n = objects.len();
    let mut homs = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            homs.insert((i, j), TwistedHomComplex::new(&objects[i].1, &objects[j].1)?);
        }
    }
    let mut comp = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (hg, hf, hc) = (&homs[&(y, z)], &homs[&(x, y)], &homs[&(x, z)]);
                let mut blocks: BTreeMap<(i32, i32), CompBlock> = BTreeMap::new();
                for (p, dp) in hg.complex().space().iter() {
                    for (q, dq) in hf.complex().space().iter() {
                        for a in 0..dp {
                            let g = hg.basis(p, a);
                            for b in 0..dq {
                                let gf = g.compose(&hf.basis(q, b)).expect("composable");
                                for (c, s) in hc.flatten(&gf).into_iter().enumerate() {
                                    if !s.is_zero() {
                                        blocks.entry((p, q)).or_default().push((a, b, c, s));
                                    }
                                }
                            }
                        }
                    }
                }
                if !blocks.is_empty() {
                    comp.insert((x, y, z), blocks);
                }
            }
        }
    }
    let units = (0..n).map(|x| homs[&(x, x)].flatten(&objects[x].1.identity())).collect();
    let parts = CategoryParts {
        objects: objects.iter().map(|(s, _)| s.clone()).collect(),
        homs: homs.into_iter().map(|(k, h)| (k, h.complex().clone())).collect(),
        comp,
        units,
    };
    DgCategory::from_parts(parts).map_err(TwistedError::Category)
}

/// Looks for an `H^0`-isomorphism from `k` to one of `targets`.
fn iso_to_some(case: String, k: &TwistedComplex, targets: &[(String, TwistedComplex)], budget: &Budget) -> CaseResult {
    let mut refuted = Vec::new();
    for (name, t) in targets {
        match find_h0_iso(k, t, budget).expect("same base") {
            Outcome::Found(f) => {
                return CaseResult {
                    case,
                    verdict: Verdict::Pass,
                    detail: format!("isomorphic to {name}"),
                    witness: Some(Witness::Iso(f)),
                };
            }
            Outcome::Refuted(r) => refuted.push(format!("{name}: {r}")),
            Outcome::NotFoundWithinBudget => {}
        }
    }
    if refuted.len() == targets.len() {
        let detail = if refuted.is_empty() { "no candidate objects".to_string() } else { refuted.join("; ") };
        CaseResult::new(case, Verdict::Fail, format!("not isomorphic to any object: {detail}"))
    } else {
        CaseResult::new(case, Verdict::Inconclusive, "no isomorphism found within budget")
    }
}

/// Zero object, shifts and cones, each witnessed by an `H^0`-isomorphism to
/// an object of `t`. Shifts and cones are taken of the `probes` (all objects
/// when `None`); the targets are always all objects.
pub fn is_pretriangulated(t: &Arc<DgCategory>, budget: &Budget, probes: Option<&[usize]>) -> PretrReport {
    let all: Vec<usize> = (0..t.len()).collect();
    let probes = probes.unwrap_or(&all);
    let targets: Vec<(String, TwistedComplex)> =
        all.iter().map(|&y| (t.name(y).to_string(), TwistedComplex::embed(t.clone(), y))).collect();
    let empty = TwistedComplex::zero(t.clone());

    let mut zero_refuted = Vec::new();
    let mut zero = None;
    for (name, k) in &targets {
        match find_h0_iso(k, &empty, budget).expect("same base") {
            Outcome::Found(f) => {
                zero = Some(CaseResult {
                    case: "zero object".into(),
                    verdict: Verdict::Pass,
                    detail: format!("{name} is a zero object"),
                    witness: Some(Witness::Iso(f)),
                });
                break;
            }
            Outcome::Refuted(r) => zero_refuted.push(format!("{name}: {r}")),
            Outcome::NotFoundWithinBudget => {}
        }
    }
    let zero = zero.unwrap_or_else(|| {
        if zero_refuted.len() == targets.len() {
            let why = if targets.is_empty() { "no objects".to_string() } else { zero_refuted.join("; ") };
            CaseResult::new("zero object".into(), Verdict::Fail, format!("no object is a zero object: {why}"))
        } else {
            CaseResult::new("zero object".into(), Verdict::Inconclusive, "no zero object found within budget")
        }
    });

    let mut shifts = Vec::new();
    let r = budget.shift_range;
    for &x in probes {
        for n in (-r..=r).filter(|&n| n != 0) {
            let k = TwistedComplex::embed(t.clone(), x).shift(n);
            shifts.push(iso_to_some(format!("{}[{n}]", t.name(x)), &k, &targets, budget));
        }
    }

    let mut cones = Vec::new();
    for &x in probes {
        for &y in probes {
            for (i, f) in cycle_basis(t, x, y).into_iter().enumerate() {
                let c = cone(&embedded_map(t, x, y, f)).expect("cycle");
                cones.push(iso_to_some(format!("cone({}->{}:{i})", t.name(x), t.name(y)), &c, &targets, budget));
            }
        }
    }
    PretrReport { zero, shifts, cones }
}

/// A basis of the closed degree-0 morphisms `a -> b`.
fn closed_basis(a: &TwistedComplex, b: &TwistedComplex) -> Vec<TwistedHom> {
    let h = TwistedHomComplex::new(a, b).expect("same base");
    h.complex().cohomology(0).cycle_basis().iter().map(|v| h.unflatten(0, v)).collect()
}

fn is_boundary(f: &TwistedHom) -> bool {
    let h = TwistedHomComplex::new(f.source(), f.target()).expect("same base");
    h.complex().cohomology(f.degree()).is_boundary(&h.flatten(f))
}

fn tr1_case(case: String, f: &TwistedHom) -> CaseResult {
    let c = cone(f).expect("closed");
    let (i, p, h) = cone_maps(f, &c);
    let mut problems = Vec::new();
    if !i.is_closed() {
        problems.push("B -> cone(f) is not closed");
    }
    if !p.is_closed() {
        problems.push("cone(f) -> A[1] is not closed");
    }
    if i.compose(f).expect("composable") != h.d() {
        problems.push("i∘f is not the boundary of the canonical homotopy");
    }
    if !p.compose(&i).expect("composable").is_zero() {
        problems.push("p∘i is not zero");
    }
    if !is_boundary(&f.shift(1).compose(&p).expect("composable")) {
        problems.push("f[1]∘p is not a boundary");
    }
    if problems.is_empty() {
        CaseResult::new(case, Verdict::Pass, "A -> B -> cone(f) -> A[1] with consecutive composites null-homotopic")
    } else {
        CaseResult::new(case, Verdict::Fail, problems.join("; "))
    }
}

fn tr2_case(case: String, f: &TwistedHom, budget: &Budget) -> CaseResult {
    let c = cone(f).expect("closed");
    let (i, _, _) = cone_maps(f, &c);
    let rotated = cone(&i).expect("closed");
    let a1 = f.source().shift(1);
    match find_h0_iso(&rotated, &a1, budget).expect("same base") {
        Outcome::Found(w) => CaseResult {
            case,
            verdict: Verdict::Pass,
            detail: "cone(B -> cone(f)) is isomorphic to A[1]".into(),
            witness: Some(Witness::Iso(w)),
        },
        Outcome::Refuted(r) => CaseResult::new(case, Verdict::Fail, format!("cone(B -> cone(f)) is not A[1]: {r}")),
        Outcome::NotFoundWithinBudget => CaseResult::new(case, Verdict::Inconclusive, "no isomorphism within budget"),
    }
}

/// Solves for a closed `c: cone(f) -> cone(f')` with `c∘i ≃ i'∘b` and
/// `p'∘c ≃ a[1]∘p`. The solution set is an affine space, so `None` means
/// no fill-in exists.
pub fn fill_in(f: &TwistedHom, g: &TwistedHom, a: &TwistedHom, b: &TwistedHom) -> Option<TwistedHom> {
    let (c1, c2) = (cone(f).ok()?, cone(g).ok()?);
    let (i1, p1, _) = cone_maps(f, &c1);
    let (i2, p2, _) = cone_maps(g, &c2);
    let a1 = a.shift(1);
    let hc = TwistedHomComplex::new(&c1, &c2).ok()?;
    let hu = TwistedHomComplex::new(f.target(), &c2).ok()?;
    let hv = TwistedHomComplex::new(&c1, &a1.target().clone()).ok()?;
    let (nc, nu, nv) = (hc.dim(0), hu.dim(-1), hv.dim(-1));
    let (r1, r2, r3) = (hc.dim(1), hu.dim(0), hv.dim(0));
    let mut m = Matrix::zero(r1 + r2 + r3, nc + nu + nv);
    for j in 0..nc {
        let cj = hc.basis(0, j);
        let col: Vec<Vector> = vec![
            hc.flatten(&cj.d()),
            hu.flatten(&cj.compose(&i1).expect("composable")),
            hv.flatten(&p2.compose(&cj).expect("composable")),
        ];
        for (r, x) in col.concat().into_iter().enumerate() {
            m.set(r, j, x);
        }
    }
    m.place(r1, nc, &hu.complex().differential(-1).neg());
    m.place(r1 + r2, nc + nu, &hv.complex().differential(-1).neg());
    let rhs: Vector = [
        vec![Scalar::zero(); r1],
        hu.flatten(&i2.compose(b).expect("composable")),
        hv.flatten(&a1.compose(&p1).expect("composable")),
    ]
    .concat();
    let sol = solve(&m, &rhs).expect("shapes")?;
    let c = hc.unflatten(0, &sol[..nc]);
    verify_fill_in(f, g, a, b, &c).then_some(c)
}

/// `c` is closed of degree 0 with `c∘i ≃ i'∘b` and `p'∘c ≃ a[1]∘p`.
pub fn verify_fill_in(f: &TwistedHom, g: &TwistedHom, a: &TwistedHom, b: &TwistedHom, c: &TwistedHom) -> bool {
    let (Ok(c1), Ok(c2)) = (cone(f), cone(g)) else { return false };
    if c.source() != &c1 || c.target() != &c2 || c.degree() != 0 || !c.is_closed() {
        return false;
    }
    let shapes =
        a.source() == f.source() && a.target() == g.source() && b.source() == f.target() && b.target() == g.target();
    if !shapes || a.degree() != 0 || b.degree() != 0 {
        return false;
    }
    let (i1, p1, _) = cone_maps(f, &c1);
    let (i2, p2, _) = cone_maps(g, &c2);
    let a1 = a.shift(1);
    is_boundary(&c.compose(&i1).expect("composable").sub(&i2.compose(b).expect("composable")))
        && is_boundary(&p2.compose(c).expect("composable").sub(&a1.compose(&p1).expect("composable")))
}

fn tr3_case(case: String, f: &TwistedHom, g: &TwistedHom, a: &TwistedHom, b: &TwistedHom) -> CaseResult {
    match fill_in(f, g, a, b) {
        Some(c) => {
            let w = Witness::FillIn { f: f.clone(), g: g.clone(), a: a.clone(), b: b.clone(), c };
            CaseResult { case, verdict: Verdict::Pass, detail: "fill-in found".into(), witness: Some(w) }
        }
        None => CaseResult::new(case, Verdict::Fail, "the linear system for a fill-in has no solution"),
    }
}

/// TR1 and TR2 for every closed degree-0 basis morphism between the given
/// objects, and TR3 for the commuting squares between single-summand
/// objects together with the identity squares.
pub fn triangle_axioms(objects: &[(String, TwistedComplex)], budget: &Budget) -> TriangleReport {
    let mut report = TriangleReport { tr1: Vec::new(), tr2: Vec::new(), tr3: Vec::new() };
    let mut morphisms: BTreeMap<(usize, usize), Vec<TwistedHom>> = BTreeMap::new();
    for (x, (nx, a)) in objects.iter().enumerate() {
        for (y, (ny, b)) in objects.iter().enumerate() {
            if a.len() + 1 + b.len() > budget.max_summands.max(2) + 1 && a.len() + b.len() > budget.max_summands {
                continue;
            }
            let basis = closed_basis(a, b);
            for (i, f) in basis.iter().enumerate() {
                let case = format!("{nx}->{ny}:{i}");
                report.tr1.push(tr1_case(case.clone(), f));
                report.tr2.push(tr2_case(case.clone(), f, budget));
                report.tr3.push(tr3_case(format!("{case} identity square"), f, f, &a.identity(), &b.identity()));
            }
            morphisms.insert((x, y), basis);
        }
    }
    let singles: Vec<usize> = (0..objects.len()).filter(|&i| objects[i].1.len() == 1).collect();
    for &x in &singles {
        for &y in &singles {
            for &x2 in &singles {
                for &y2 in &singles {
                    let name = |i: usize| objects[i].0.as_str();
                    let fs = &morphisms[&(x, y)];
                    let gs = &morphisms[&(x2, y2)];
                    let as_ = &morphisms[&(x, x2)];
                    let bs = &morphisms[&(y, y2)];
                    for (i, f) in fs.iter().enumerate() {
                        for (j, g) in gs.iter().enumerate() {
                            for (k, a) in as_.iter().enumerate() {
                                for (l, b) in bs.iter().enumerate() {
                                    let square =
                                        b.compose(f).expect("composable").sub(&g.compose(a).expect("composable"));
                                    if !is_boundary(&square) {
                                        continue;
                                    }
                                    let case = format!(
                                        "square {}->{}:{i} / {}->{}:{j} via {k},{l}",
                                        name(x),
                                        name(y),
                                        name(x2),
                                        name(y2)
                                    );
                                    report.tr3.push(tr3_case(case, f, g, a, b));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Embedded objects of `probes` plus the cones of their basis morphisms
/// and the zero object: the objects on which [`triangle_axioms`] runs.
pub fn triangle_objects(
    t: &Arc<DgCategory>,
    probes: Option<&[usize]>,
    budget: &Budget,
) -> Vec<(String, TwistedComplex)> {
    let all: Vec<usize> = (0..t.len()).collect();
    let probes = probes.unwrap_or(&all);
    let mut used = BTreeSet::new();
    let mut out = vec![(unique_name(&mut used, "[]".into()), TwistedComplex::zero(t.clone()))];
    for &x in probes {
        out.push((unique_name(&mut used, t.name(x).into()), TwistedComplex::embed(t.clone(), x)));
    }
    if budget.max_summands >= 2 {
        for &x in probes {
            for &y in probes {
                for (i, f) in cycle_basis(t, x, y).into_iter().enumerate() {
                    let c = cone(&embedded_map(t, x, y, f)).expect("cycle");
                    out.push((unique_name(&mut used, format!("cone({}->{}:{i})", t.name(x), t.name(y))), c));
                }
            }
        }
    }
    out
}
