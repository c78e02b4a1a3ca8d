//! One function per subcommand, each producing a [`Report`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dgkit::dgcat::{
    graded_equivalence_check, is_dk_equivalence, opposite, tensor, DgCategory, DgFunctor, DkReport, Essential,
    HomotopyCategory,
};
use dgkit::dgmod::{is_weakly_representable, realize_cell, verify_morita, verify_retract, DgModule};
use dgkit::format::{self, WorkspaceData};
use dgkit::pretr::{
    alpha, budgeted_objects, cone, is_pretriangulated, pretr_category, triangle_axioms, triangle_objects, CaseResult,
    Witness,
};
use dgkit::search::{Budget, Outcome};
use dgkit::Verdict;

use crate::report::{Finding, Report, WitnessData};
use crate::workspace::{pick, Workspace, WorkspaceError};
use crate::Command;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

type Result<T> = std::result::Result<T, CommandError>;

struct Ctx {
    name: &'static str,
    inputs: Vec<String>,
    ws: Workspace,
    budget: Budget,
}

impl Ctx {
    fn load(name: &'static str, files: &[PathBuf], budget: &Budget) -> Result<Self> {
        Ok(Ctx {
            name,
            inputs: files.iter().map(|p| p.display().to_string()).collect(),
            ws: Workspace::load(files)?,
            budget: budget.clone(),
        })
    }

    fn report(&self, findings: Vec<Finding>) -> Report {
        Report::new(self.name, &self.inputs, findings, &self.budget)
    }
}

/// Every entity of a kind, or the one named.
fn select<'a, V>(
    kind: &'static str,
    map: &'a BTreeMap<String, V>,
    name: Option<&str>,
) -> Result<Vec<(&'a str, &'a V)>> {
    match name {
        Some(_) => Ok(vec![pick(kind, map, name)?]),
        None if map.is_empty() => Err(WorkspaceError::Missing(kind).into()),
        None => Ok(map.iter().map(|(k, v)| (k.as_str(), v)).collect()),
    }
}

fn object(t: &DgCategory, category: &str, name: &str) -> Result<usize> {
    t.index_of(name).ok_or_else(|| {
        WorkspaceError::Unresolved { kind: "object", name: name.into(), location: format!("category {category}") }
            .into()
    })
}

fn objects(t: &DgCategory, category: &str, names: &[String]) -> Result<Option<Vec<usize>>> {
    if names.is_empty() {
        return Ok(None);
    }
    names.iter().map(|n| object(t, category, n)).collect::<Result<Vec<_>>>().map(Some)
}

pub fn execute(command: &Command, budget: &Budget) -> Result<Report> {
    use Command as C;
    let ctx = |name, inputs: &crate::Inputs| Ctx::load(name, &inputs.files, budget);
    match command {
        C::Validate { inputs, category } => validate(&ctx("validate", inputs)?, category.as_deref()),
        C::Cohomology { inputs, category, from, to, at, deg } => cohomology(
            &ctx("cohomology", inputs)?,
            category.as_deref(),
            at.as_deref().or(from.as_deref()),
            at.as_deref().or(to.as_deref()),
            *deg,
        ),
        C::H0 { inputs, category } => h0(&ctx("h0", inputs)?, category.as_deref()),
        C::Tensor { inputs, left, right, name } => tensor_cmd(&ctx("tensor", inputs)?, left, right, name.as_deref()),
        C::Op { inputs, category, name } => op(&ctx("op", inputs)?, category.as_deref(), name.as_deref()),
        C::DkCheck { inputs, functor, graded } => dk_check(&ctx("dk-check", inputs)?, functor.as_deref(), *graded),
        C::EmbedCheck { inputs, functor } => embed_check(&ctx("embed-check", inputs)?, functor.as_deref()),
        C::Cone { inputs, morphism, name } => cone_cmd(&ctx("cone", inputs)?, morphism.as_deref(), name.as_deref()),
        C::Shift { inputs, twisted, by, name } => {
            shift(&ctx("shift", inputs)?, twisted.as_deref(), *by, name.as_deref())
        }
        C::Alpha { inputs, twisted, name } => alpha_cmd(&ctx("alpha", inputs)?, twisted.as_deref(), name.as_deref()),
        C::PretrCheck { inputs, category, probe, closure } => {
            pretr_check(&ctx("pretr-check", inputs)?, category.as_deref(), probe, *closure)
        }
        C::TrAxioms { inputs, category, probe } => tr_axioms(&ctx("tr-axioms", inputs)?, category.as_deref(), probe),
        C::ModuleValidate { inputs, module, representable } => {
            module_validate(&ctx("module-validate", inputs)?, module.as_deref(), *representable)
        }
        C::CellRealize { inputs, presentation, name } => {
            cell_realize(&ctx("cell-realize", inputs)?, presentation.as_deref(), name.as_deref())
        }
        C::RetractVerify { inputs, retract } => retract_verify(&ctx("retract-verify", inputs)?, retract.as_deref()),
        C::MoritaVerify { inputs, certificate } => {
            morita_verify(&ctx("morita-verify", inputs)?, certificate.as_deref())
        }
        C::CorpusRun { dir } => corpus_run(dir, budget),
    }
}

fn category_findings(name: &str, t: &DgCategory) -> Vec<Finding> {
    let case = format!("category {name}");
    let r = t.validate();
    if r.is_ok() {
        return vec![Finding::pass(case, format!("{} objects; unit, Leibniz and associativity laws hold", t.len()))];
    }
    r.violations.iter().map(|v| Finding::fail(&case, v.to_string())).collect()
}

fn functor_findings(name: &str, f: &DgFunctor) -> Vec<Finding> {
    let case = format!("functor {name}");
    let v = f.validate();
    if v.is_empty() {
        return vec![Finding::pass(case, "preserves degrees, differentials, composition and units")];
    }
    v.iter().map(|v| Finding::fail(&case, v.to_string())).collect()
}

fn module_findings(name: &str, m: &DgModule) -> Vec<Finding> {
    let case = format!("module {name}");
    let v = m.validate();
    if v.is_empty() {
        return vec![Finding::pass(case, "unit, Leibniz and associativity laws hold")];
    }
    v.iter().map(|v| Finding::fail(&case, v.to_string())).collect()
}

fn validate(ctx: &Ctx, category: Option<&str>) -> Result<Report> {
    let mut findings = Vec::new();
    for (name, t) in select("category", &ctx.ws.categories, category)? {
        findings.extend(category_findings(name, t));
    }
    if category.is_none() {
        for (name, f) in &ctx.ws.functors {
            findings.extend(functor_findings(name, f));
        }
    }
    Ok(ctx.report(findings))
}

fn cohomology(
    ctx: &Ctx,
    category: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    deg: Option<i32>,
) -> Result<Report> {
    let (cname, t) = pick("category", &ctx.ws.categories, category)?;
    let range = |n: Option<&str>| -> Result<Vec<usize>> {
        match n {
            Some(n) => Ok(vec![object(t, cname, n)?]),
            None => Ok((0..t.len()).collect()),
        }
    };
    let mut findings = Vec::new();
    for x in range(from)? {
        for y in range(to)? {
            let h = t.hom(x, y);
            let case = |n: i32| format!("H^{n}({}, {})", t.name(x), t.name(y));
            match deg {
                Some(n) => findings.push(Finding::pass(case(n), format!("dimension {}", h.cohomology(n).dim()))),
                None => {
                    let dims: Vec<(i32, usize)> = h.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect();
                    if dims.is_empty() {
                        findings
                            .push(Finding::pass(format!("H^*({}, {})", t.name(x), t.name(y)), "zero in every degree"));
                    }
                    for (n, d) in dims {
                        findings.push(Finding::pass(case(n), format!("dimension {d}")));
                    }
                }
            }
        }
    }
    Ok(ctx.report(findings))
}

fn h0(ctx: &Ctx, category: Option<&str>) -> Result<Report> {
    let (_, t) = pick("category", &ctx.ws.categories, category)?;
    let h = HomotopyCategory::new(t.clone());
    let mut findings = Vec::new();
    for x in 0..t.len() {
        for y in 0..t.len() {
            findings.push(Finding::pass(
                format!("H^0({}, {})", t.name(x), t.name(y)),
                format!("dimension {}", h.dim(x, y, 0)),
            ));
        }
    }
    findings.push(match h.check() {
        Ok(()) => Finding::pass("composition", "unit and associativity laws hold on classes"),
        Err(e) => Finding::fail("composition", e),
    });
    Ok(ctx.report(findings))
}

fn category_output(name: &str, t: &DgCategory) -> WorkspaceData {
    let mut out = WorkspaceData::default();
    out.categories.insert(name.into(), format::category_to_data(t));
    out
}

fn tensor_cmd(ctx: &Ctx, left: &str, right: &str, name: Option<&str>) -> Result<Report> {
    let (l, a) = pick("category", &ctx.ws.categories, Some(left))?;
    let (r, b) = pick("category", &ctx.ws.categories, Some(right))?;
    let name = name.map_or_else(|| format!("{l}⊗{r}"), str::to_string);
    let t = tensor(a, b);
    Ok(ctx.report(category_findings(&name, &t)).with_output(category_output(&name, &t)))
}

fn op(ctx: &Ctx, category: Option<&str>, name: Option<&str>) -> Result<Report> {
    let (n, a) = pick("category", &ctx.ws.categories, category)?;
    let name = name.map_or_else(|| format!("{n}^op"), str::to_string);
    let t = opposite(a);
    Ok(ctx.report(category_findings(&name, &t)).with_output(category_output(&name, &t)))
}

/// Findings of a DK report; `target` names the functor's target category.
pub fn dk_findings(f: &DgFunctor, target: &str, r: &DkReport) -> Vec<Finding> {
    let (s, t) = (f.source(), f.target());
    let mut findings = Vec::new();
    for h in &r.hom_failures {
        findings.push(Finding::fail(
            format!("quasi-full-faithfulness {}->{}", h.source, h.target),
            format!(
                "hom({0}, {1}) -> hom(F{0}, F{1}) is not a quasi-isomorphism in degree {2}",
                h.source, h.target, h.degree
            ),
        ));
    }
    if r.hom_failures.is_empty() {
        findings.push(Finding::pass("quasi-full-faithfulness", "every hom map is a quasi-isomorphism"));
    }
    for (y, e) in &r.essential {
        let case = format!("essential surjectivity {}", t.name(*y));
        findings.push(match e {
            Essential::Witness(w) => {
                let fx = f.object(w.object);
                Finding::pass(case, format!("{} ≅ F({}) = {} in H^0", t.name(*y), s.name(w.object), t.name(fx)))
                    .with_witness(WitnessData::H0Inverse {
                        category: target.into(),
                        image: t.name(fx).into(),
                        object: t.name(*y).into(),
                        forward: format::element_to_data(&w.forward),
                        backward: format::element_to_data(&w.backward),
                    })
            }
            Essential::Refuted(reasons) => {
                let why: Vec<String> = reasons.iter().map(|(x, r)| format!("F({}): {r}", s.name(*x))).collect();
                Finding::fail(case, format!("{} is not H^0-isomorphic to any F(x); {}", t.name(*y), why.join("; ")))
            }
            Essential::Unresolved => Finding::new(case, Verdict::Inconclusive, "no isomorphism found within budget"),
        });
    }
    findings
}

/// Runs one of the two DK checkers; an invalid functor gives its violations.
pub fn dk_check_functor(name: &str, f: &DgFunctor, target: &str, graded: bool, budget: &Budget) -> Vec<Finding> {
    let r = if graded { graded_equivalence_check(f, budget) } else { is_dk_equivalence(f, budget) };
    match r {
        Ok(r) => dk_findings(f, target, &r),
        Err(_) => functor_findings(name, f),
    }
}

fn dk_check(ctx: &Ctx, functor: Option<&str>, graded: bool) -> Result<Report> {
    let (name, f) = pick("functor", &ctx.ws.functors, functor)?;
    let target = &ctx.ws.data.functors[name].target;
    Ok(ctx.report(dk_check_functor(name, f, target, graded, &ctx.budget)))
}

fn embed_check(ctx: &Ctx, functor: Option<&str>) -> Result<Report> {
    let (name, f) = pick("functor", &ctx.ws.functors, functor)?;
    if f.ensure_valid().is_err() {
        return Ok(ctx.report(functor_findings(name, f)));
    }
    let s = f.source();
    let mut findings = Vec::new();
    for x in 0..s.len() {
        for y in 0..s.len() {
            let m = f.hom_map(x, y);
            let case = format!("hom {}->{}", s.name(x), s.name(y));
            let degrees: std::collections::BTreeSet<i32> = m.source().support().chain(m.target().support()).collect();
            let bad = degrees.into_iter().find(|&n| {
                let ind = m.induced_map(n).expect("validated functor");
                ind.rows() != ind.cols() || dgkit::field::rank(&ind) != ind.rows()
            });
            findings.push(match bad {
                None => Finding::pass(case, "quasi-isomorphism"),
                Some(n) => Finding::fail(case, format!("induced map on H^{n} is not bijective")),
            });
        }
    }
    Ok(ctx.report(findings))
}

fn twisted_output(name: &str, k: &dgkit::pretr::TwistedComplex, base: &str) -> WorkspaceData {
    let mut out = WorkspaceData::default();
    out.twisted.insert(name.into(), format::twisted_to_data(k, base));
    out
}

fn mc_finding(k: &dgkit::pretr::TwistedComplex) -> Finding {
    match k.maurer_cartan_defect() {
        None => Finding::pass("twisted complex", format!("{} summands; Maurer-Cartan equation holds", k.len())),
        Some((i, j)) => Finding::fail("twisted complex", format!("Maurer-Cartan equation fails at {i}->{j}")),
    }
}

fn cone_cmd(ctx: &Ctx, morphism: Option<&str>, name: Option<&str>) -> Result<Report> {
    let (m, f) = pick("morphism", &ctx.ws.morphisms, morphism)?;
    let base = &ctx.ws.data.twisted[&ctx.ws.data.morphisms[m].source].base;
    let c = cone(f).map_err(|e| CommandError::Usage(format!("morphism {m}: {e}")))?;
    let name = name.map_or_else(|| format!("cone({m})"), str::to_string);
    Ok(ctx.report(vec![mc_finding(&c)]).with_output(twisted_output(&name, &c, base)))
}

fn shift(ctx: &Ctx, twisted: Option<&str>, by: i32, name: Option<&str>) -> Result<Report> {
    let (n, k) = pick("twisted complex", &ctx.ws.twisted, twisted)?;
    let base = &ctx.ws.data.twisted[n].base;
    let s = k.shift(by);
    let name = name.map_or_else(|| format!("{n}[{by}]"), str::to_string);
    Ok(ctx.report(vec![mc_finding(&s)]).with_output(twisted_output(&name, &s, base)))
}

fn alpha_cmd(ctx: &Ctx, twisted: Option<&str>, name: Option<&str>) -> Result<Report> {
    let (n, k) = pick("twisted complex", &ctx.ws.twisted, twisted)?;
    let base = &ctx.ws.data.twisted[n].base;
    let m = alpha(k);
    let name = name.map_or_else(|| format!("alpha({n})"), str::to_string);
    let mut out = WorkspaceData::default();
    out.modules.insert(name.clone(), format::module_to_data(&m, base));
    Ok(ctx.report(module_findings(&name, &m)).with_output(out))
}

fn case_finding(base: &str, c: &CaseResult) -> Finding {
    let f = Finding::new(&c.case, c.verdict, &c.detail);
    match &c.witness {
        Some(Witness::Iso(w)) => {
            f.with_witness(WitnessData::H0Iso { base: base.into(), morphism: format::inline_morphism_to_data(w, base) })
        }
        Some(Witness::FillIn { f: ff, g, a, b, c }) => {
            let m = |x| format::inline_morphism_to_data(x, base);
            f.with_witness(WitnessData::FillIn { base: base.into(), f: m(ff), g: m(g), a: m(a), b: m(b), c: m(c) })
        }
        None => f,
    }
}

fn pretr_check(ctx: &Ctx, category: Option<&str>, probe: &[String], closure: bool) -> Result<Report> {
    let (name, t) = pick("category", &ctx.ws.categories, category)?;
    if !closure {
        let probes = objects(t, name, probe)?;
        let r = is_pretriangulated(t, &ctx.budget, probes.as_deref());
        return Ok(ctx.report(r.cases().map(|c| case_finding(name, c)).collect()));
    }
    let objs = budgeted_objects(t, &ctx.budget);
    let p = Arc::new(pretr_category(&objs).map_err(|e| CommandError::Usage(e.to_string()))?);
    let pname = format!("pretr({name})");
    // the embedded objects keep their names
    let probes: Vec<usize> = match objects(t, name, probe)? {
        Some(ps) => ps.into_iter().map(|x| 1 + x).collect(),
        None => (1..=t.len()).collect(),
    };
    let r = is_pretriangulated(&p, &ctx.budget, Some(&probes));
    let findings = r.cases().map(|c| case_finding(&pname, c)).collect();
    Ok(ctx.report(findings).with_output(category_output(&pname, &p)))
}

fn tr_axioms(ctx: &Ctx, category: Option<&str>, probe: &[String]) -> Result<Report> {
    let (name, t) = pick("category", &ctx.ws.categories, category)?;
    let probes = objects(t, name, probe)?;
    let objs = triangle_objects(t, probes.as_deref(), &ctx.budget);
    let r = triangle_axioms(&objs, &ctx.budget);
    let findings = [("TR1", &r.tr1), ("TR2", &r.tr2), ("TR3", &r.tr3)]
        .into_iter()
        .flat_map(|(ax, cases)| {
            cases.iter().map(move |c| {
                let mut f = case_finding(name, c);
                f.case = format!("{ax} {}", f.case);
                f
            })
        })
        .collect();
    Ok(ctx.report(findings))
}

fn module_validate(ctx: &Ctx, module: Option<&str>, representable: bool) -> Result<Report> {
    let mut findings = Vec::new();
    for (name, m) in select("module", &ctx.ws.modules, module)? {
        let mut fs = module_findings(name, m);
        let valid = fs.iter().all(|f| f.verdict == Verdict::Pass);
        if representable && valid {
            let case = format!("representability {name}");
            let t = m.base();
            fs.push(match is_weakly_representable(m, &ctx.budget) {
                Outcome::Found((x, el)) => {
                    Finding::pass(case, format!("quasi-isomorphic to the representable at {}", t.name(x))).with_witness(
                        WitnessData::Representing {
                            module: name.into(),
                            object: t.name(x).into(),
                            element: format::element_to_data(&el),
                        },
                    )
                }
                Outcome::Refuted(r) => Finding::fail(case, format!("not quasi-representable: {r}")),
                Outcome::NotFoundWithinBudget => {
                    Finding::new(case, Verdict::Inconclusive, "no representing element within budget")
                }
            });
        }
        findings.extend(fs);
    }
    Ok(ctx.report(findings))
}

fn cell_realize(ctx: &Ctx, presentation: Option<&str>, name: Option<&str>) -> Result<Report> {
    let (n, p) = pick("presentation", &ctx.ws.presentations, presentation)?;
    let base = &ctx.ws.data.presentations[n].base;
    let m = realize_cell(p).map_err(|e| CommandError::Usage(format!("presentation {n}: {e}")))?;
    let name = name.map_or_else(|| format!("|{n}|"), str::to_string);
    let mut out = WorkspaceData::default();
    out.modules.insert(name.clone(), format::module_to_data(&m, base));
    Ok(ctx.report(module_findings(&name, &m)).with_output(out))
}

fn retract_verify(ctx: &Ctx, retract: Option<&str>) -> Result<Report> {
    let findings = select("retract", &ctx.ws.retracts, retract)?
        .into_iter()
        .map(|(name, r)| match verify_retract(r) {
            Ok(()) => Finding::pass(format!("retract {name}"), "r∘i ≃ id through h"),
            Err(e) => Finding::fail(format!("retract {name}"), e.to_string()),
        })
        .collect();
    Ok(ctx.report(findings))
}

/// Findings for one Morita certificate: the verdict, the embedding and one per object.
pub fn morita_findings(name: &str, cert: &dgkit::dgmod::MoritaCertificate) -> Vec<Finding> {
    let r = verify_morita(cert);
    let mut findings = vec![Finding::new(format!("certificate {name}"), r.verdict(), r.label())];
    findings.push(match &r.embedding {
        Ok(()) => Finding::pass(format!("{name}: DK-embedding"), "every hom map is a quasi-isomorphism"),
        Err(e) => Finding::fail(format!("{name}: DK-embedding"), e.clone()),
    });
    for (obj, res) in &r.objects {
        findings.push(match res {
            Ok(()) => Finding::pass(format!("{name}: object {obj}"), "retract of a cell module verified"),
            Err(e) => Finding::fail(format!("{name}: object {obj}"), e.to_string()),
        });
    }
    findings
}

fn morita_verify(ctx: &Ctx, certificate: Option<&str>) -> Result<Report> {
    let mut findings = Vec::new();
    for (name, c) in select("morita certificate", &ctx.ws.morita, certificate)? {
        findings.extend(morita_findings(name, c));
    }
    Ok(ctx.report(findings))
}

/// Verdict of every default check on every entity of a workspace, keyed by
/// `"<kind> <name>"`.
pub fn entity_verdicts(ws: &Workspace, budget: &Budget) -> BTreeMap<String, Verdict> {
    let all = |fs: Vec<Finding>| Verdict::all(fs.iter().map(|f| f.verdict));
    let mut out = BTreeMap::new();
    for (n, t) in &ws.categories {
        out.insert(format!("category {n}"), all(category_findings(n, t)));
    }
    for (n, f) in &ws.functors {
        let target = &ws.data.functors[n].target;
        out.insert(format!("functor {n}"), all(dk_check_functor(n, f, target, false, budget)));
    }
    for (n, m) in &ws.modules {
        out.insert(format!("module {n}"), all(module_findings(n, m)));
    }
    for (n, r) in &ws.retracts {
        out.insert(format!("retract {n}"), if verify_retract(r).is_ok() { Verdict::Pass } else { Verdict::Fail });
    }
    for (n, c) in &ws.morita {
        out.insert(format!("morita {n}"), verify_morita(c).verdict());
    }
    out
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| CommandError::Io { path: dir.display().to_string(), message: e.to_string() };
    let mut files: Vec<PathBuf> =
        std::fs::read_dir(dir).map_err(io)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>().map_err(io)?;
    files.retain(|p| p.extension().is_some_and(|e| e == "json") && p.file_name().is_some_and(|n| n != "expected.json"));
    files.sort();
    Ok(files)
}

fn corpus_run(dir: &Path, budget: &Budget) -> Result<Report> {
    let exp_path = dir.join("expected.json");
    let text = std::fs::read_to_string(&exp_path)
        .map_err(|e| CommandError::Io { path: exp_path.display().to_string(), message: e.to_string() })?;
    let expected: BTreeMap<String, BTreeMap<String, Verdict>> =
        serde_json::from_str(&text).map_err(|e| WorkspaceError::Parse {
            path: exp_path.display().to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    let files = read_dir_sorted(dir)?;
    let mut findings = Vec::new();
    for path in &files {
        let file = path.file_name().map(|n| n.to_string_lossy().to_string()).unwrap_or_default();
        let ws = Workspace::load(&[path])?;
        let want = expected.get(&file);
        for (entity, got) in entity_verdicts(&ws, budget) {
            let case = format!("{file}: {entity}");
            findings.push(match want.and_then(|w| w.get(&entity)) {
                Some(&e) if e == got => Finding::pass(case, format!("{got} as expected")),
                Some(&e) => Finding::fail(case, format!("expected {e}, got {got}")),
                None => Finding::new(case, Verdict::Inconclusive, format!("{got}; no expectation recorded")),
            });
        }
    }
    for (file, entities) in &expected {
        if !files.iter().any(|p| p.file_name().is_some_and(|n| n.to_string_lossy() == file.as_str())) {
            for entity in entities.keys() {
                findings.push(Finding::fail(format!("{file}: {entity}"), "expected file is missing"));
            }
        }
    }
    let inputs: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    Ok(Report::new("corpus-run", &inputs, findings, budget))
}
