//! The nine acceptance criteria, one line each.

mod common;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use dgkit::corpus::{
    all_categories, base_categories, closure_categories, fixed_functors, random_functors, shift_modules,
};
use dgkit::dgcat::{delta1, graded_equivalence_check, is_dk_equivalence, unit_category, DgCategory};
use dgkit::dgmod::{homotopy_cofiber, ModuleHomComplex};
use dgkit::format::{self, CategoryData};
use dgkit::pretr::{
    alpha, alpha_map, budgeted_objects, cone, find_h0_iso, hom_twisted, is_pretriangulated, pretr_category,
    triangle_axioms, triangle_objects, verify_h0_iso, TwistedComplex, TwistedHom, TwistedHomComplex,
};
use dgkit::search::{Budget, Outcome};
use dgkit::Verdict;
use dgkit_cli::report::{verify_report_witnesses, Report};
use dgkit_cli::{run, Workspace};

use common::{complex_of, flip_sign, scalar_paths, Category};

type Check = (bool, String);

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus(file: &str) -> String {
    corpus_dir().join(file).display().to_string()
}

/// Mutants per category, spread evenly over its nonzero scalars.
const MUTANTS_PER_CATEGORY: usize = 120;

enum Decision {
    Accepted,
    Rejected { located: bool },
}

fn library_decision(v: &serde_json::Value) -> Decision {
    let data: CategoryData = match serde_json::from_value(v.clone()) {
        Ok(d) => d,
        Err(_) => return Decision::Rejected { located: false },
    };
    match format::category_from_data("mutant", &data) {
        Err(e) => Decision::Rejected { located: e.location.starts_with("mutant") },
        Ok(t) => {
            let r = t.validate();
            if r.is_ok() {
                Decision::Accepted
            } else {
                Decision::Rejected { located: r.violations.iter().all(|x| !x.to_string().is_empty()) }
            }
        }
    }
}

fn c1_structure() -> Check {
    let mut originals = 0;
    for (_, t) in all_categories() {
        let v = serde_json::to_value(format::category_to_data(&t)).unwrap();
        if !t.validate().is_ok() || !Category::from_json(&v).is_valid() {
            return (false, "a corpus category is rejected".into());
        }
        originals += 1;
    }
    let (mut total, mut equivalent, mut false_pass, mut false_fail, mut unlocated) = (0, 0, 0, 0, 0);
    for (_, t) in all_categories() {
        let v = serde_json::to_value(format::category_to_data(&t)).unwrap();
        let paths = scalar_paths(&v);
        let step = paths.len().div_ceil(MUTANTS_PER_CATEGORY).max(1);
        for p in paths.iter().step_by(step) {
            let m = flip_sign(&v, p);
            total += 1;
            let oracle_valid = Category::from_json(&m).is_valid();
            match (library_decision(&m), oracle_valid) {
                (Decision::Accepted, true) => equivalent += 1,
                (Decision::Accepted, false) => false_pass += 1,
                (Decision::Rejected { .. }, true) => {
                    equivalent += 1;
                    false_fail += 1;
                }
                (Decision::Rejected { located }, false) => {
                    if !located {
                        unlocated += 1;
                    }
                }
            }
        }
    }
    let ok = total >= 200 && false_pass == 0 && false_fail == 0 && unlocated == 0;
    (
        ok,
        format!(
            "{originals} categories valid; {total} mutants, {false_pass} false passes (tolerance 0), \
             {equivalent} equivalent by oracle, {false_fail} wrongly rejected, {unlocated} unlocated"
        ),
    )
}

fn c2_contractibility() -> Check {
    let b = Budget::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for t in [Arc::new(unit_category()), Arc::new(delta1())] {
        for x in 0..t.len() {
            let k = TwistedComplex::embed(t.clone(), x);
            let c = cone(&k.identity()).unwrap();
            let end = hom_twisted(&c, &c).unwrap();
            let h = complex_of(&format::complex_to_data(&end)).cohomology();
            let zero = TwistedComplex::zero(t.clone());
            let iso = matches!(find_h0_iso(&c, &zero, &b).unwrap(), Outcome::Found(w) if verify_h0_iso(&w));
            let back = matches!(find_h0_iso(&zero, &c, &b).unwrap(), Outcome::Found(w) if verify_h0_iso(&w));
            ok &= h.is_empty() && end.is_acyclic() && iso && back;
            lines.push(format!("cone(id_{}): dim End = {}, H* = {:?}", t.name(x), end.total_dim(), h));
        }
    }
    (ok, format!("{}; H^0-isomorphic to the zero object both ways", lines.join(", ")))
}

/// Degree-0 cycles of `hom(a, b)`, one per basis vector of the cycle space.
fn closed_maps(a: &TwistedComplex, b: &TwistedComplex) -> Vec<TwistedHom> {
    let h = TwistedHomComplex::new(a, b).unwrap();
    h.complex().cohomology(0).cycle_basis().iter().map(|v| h.unflatten(0, v)).collect()
}

fn c3_alpha_cone() -> Check {
    let budget = Budget { shift_range: 1, ..Budget::default() };
    let (mut checked, mut mismatches) = (0, 0);
    for (_, t) in base_categories().into_iter().chain(closure_categories()) {
        let t = Arc::new(t);
        let objs = budgeted_objects(&t, &budget);
        for (_, a) in &objs {
            for (_, b) in &objs {
                if a.len() + b.len() > budget.max_summands {
                    continue;
                }
                for f in closed_maps(a, b) {
                    checked += 1;
                    let lhs = alpha(&cone(&f).unwrap());
                    let rhs = homotopy_cofiber(&alpha_map(&f)).unwrap();
                    if lhs != rhs {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    (
        checked > 0 && mismatches == 0,
        format!("{checked} closed degree-0 maps, {mismatches} mismatches (exact equality)"),
    )
}

fn c4_alpha_embedding() -> Check {
    let budget = Budget::default();
    let (mut pairs, mut mismatches) = (0, 0);
    for t in [Arc::new(delta1()), Arc::new(unit_category())] {
        let objs = budgeted_objects(&t, &budget);
        let modules: Vec<_> = objs.iter().map(|(_, k)| Arc::new(alpha(k))).collect();
        for (i, (_, a)) in objs.iter().enumerate() {
            for (j, (_, b)) in objs.iter().enumerate() {
                pairs += 1;
                let tw = complex_of(&format::complex_to_data(&hom_twisted(a, b).unwrap())).cohomology();
                let mh = ModuleHomComplex::new(modules[i].clone(), modules[j].clone()).unwrap();
                let md = complex_of(&format::complex_to_data(mh.complex())).cohomology();
                if tw != md {
                    mismatches += 1;
                }
            }
        }
    }
    (mismatches == 0, format!("{pairs} budgeted pairs over delta1 and k, {mismatches} degreewise mismatches"))
}

fn c5_triangles() -> Check {
    let budget = Budget::default();
    let cats: Vec<(String, Arc<DgCategory>)> = all_categories();
    let (mut cases, mut tr3, mut bad, mut unverified) = (0, 0, Vec::new(), 0);
    for (name, t) in &cats {
        let r = triangle_axioms(&triangle_objects(t, None, &budget), &budget);
        for c in r.cases() {
            cases += 1;
            if c.verdict != Verdict::Pass {
                bad.push(format!("{name}: {} ({})", c.case, c.verdict));
            }
            if let Some(w) = &c.witness {
                if !w.verify() {
                    unverified += 1;
                }
            }
        }
        tr3 += r.tr3.len();
    }
    let ok = bad.is_empty() && unverified == 0 && tr3 > 0;
    let first = bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default();
    (
        ok,
        format!(
            "{} categories, {cases} cases ({tr3} TR3 fill-ins), {} not passing{first}, {unverified} unverified witnesses",
            cats.len(),
            bad.len()
        ),
    )
}

fn c6_pretriangulated() -> Check {
    let budget = Budget::default();
    let k = Arc::new(unit_category());
    let rk = is_pretriangulated(&k, &budget, None);
    let k_fails = rk.verdict() == Verdict::Fail && rk.cases().all(|c| c.verdict != Verdict::Inconclusive);

    let perf = shift_modules(2).category().clone();
    let probes = [perf.index_of("0").unwrap(), perf.index_of("k").unwrap()];
    let rp = is_pretriangulated(&perf, &budget, Some(&probes));
    let perf_passes =
        rp.verdict() == Verdict::Pass && rp.cases().all(|c| c.witness.as_ref().is_some_and(|w| w.verify()));

    let small = Budget { shift_range: 1, ..Budget::default() };
    let objs = budgeted_objects(&k, &small);
    let closure = Arc::new(pretr_category(&objs).unwrap());
    let rc = is_pretriangulated(&closure, &small, Some(&[1]));
    let closure_passes = rc.verdict() == Verdict::Pass;
    (
        k_fails && perf_passes && closure_passes,
        format!(
            "k: {} ({} cases, none inconclusive: {}); perf(k) probes 0,k: {} ({} cases); closure of k: {}",
            rk.verdict(),
            rk.cases().count(),
            k_fails,
            rp.verdict(),
            rp.cases().count(),
            rc.verdict()
        ),
    )
}

fn c7_morita_separation() -> Check {
    let dk = run(["dgkit", "--format", "json", "dk-check", &corpus("morita.json")]);
    let mv = run(["dgkit", "--format", "json", "morita-verify", &corpus("morita.json")]);
    let flipped = run(["dgkit", "--format", "json", "morita-verify", &corpus("morita-flipped.json")]);
    let report: Report = match serde_json::from_str(&dk.stdout) {
        Ok(r) => r,
        Err(e) => return (false, format!("dk-check report unreadable: {e}; {}", dk.stderr)),
    };
    let cone_finding =
        report.findings.iter().any(|f| f.case == "essential surjectivity cone(id)" && f.verdict == Verdict::Fail);
    let ok = dk.code == 1 && cone_finding && mv.code == 0 && flipped.code == 1;
    (
        ok,
        format!(
            "dk-check exit {} (cone(id) counterexample: {cone_finding}), morita-verify exit {}, flipped certificate exit {}",
            dk.code, mv.code, flipped.code
        ),
    )
}

fn c8_graded_cross_check() -> Check {
    let budget = Budget::default();
    let functors: Vec<_> = fixed_functors().into_iter().chain(random_functors(0, 25)).collect();
    let (mut agree, mut inconclusive) = (0, 0);
    let mut disagreements = Vec::new();
    for (name, f) in &functors {
        let a = is_dk_equivalence(f, &budget).unwrap().verdict();
        let b = graded_equivalence_check(f, &budget).unwrap().verdict();
        if a == b {
            agree += 1;
        } else {
            disagreements.push(name.clone());
        }
        if a == Verdict::Inconclusive || b == Verdict::Inconclusive {
            inconclusive += 1;
        }
    }
    (
        disagreements.is_empty() && inconclusive == 0,
        format!(
            "{agree}/{} functors agree (25 randomized), {inconclusive} inconclusive {disagreements:?}",
            functors.len()
        ),
    )
}

fn invocations() -> Vec<Vec<String>> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let (d, m, p, c) = (corpus("delta1.json"), corpus("morita.json"), corpus("perf.json"), corpus("categories.json"));
    let (i, e, f) = (corpus("inclusion.json"), corpus("empty.json"), corpus("functors.json"));
    vec![
        s(&["validate", &c]),
        s(&["validate", &f]),
        s(&["cohomology", &d]),
        s(&["cohomology", &e, "--at", "x", "--deg", "0"]),
        s(&["h0", &d]),
        s(&["tensor", &c, "--left", "delta1", "--right", "square-zero"]),
        s(&["op", &c, "--category", "delta1⊗delta1"]),
        s(&["dk-check", &i]),
        s(&["dk-check", &i, "--graded"]),
        s(&["dk-check", &m]),
        s(&["dk-check", &f, "--functor", "delta1->delta1⊗ext(-1,2)"]),
        s(&["dk-check", &f, "--functor", "delta1->delta1⊗ext(-1,2)", "--graded"]),
        s(&["embed-check", &m]),
        s(&["cone", &d]),
        s(&["shift", &d, "--twisted", "x1", "--by", "3"]),
        s(&["alpha", &d, "--twisted", "x0"]),
        s(&["pretr-check", &c, "--category", "k"]),
        s(&["pretr-check", &p, "--probe", "0", "--probe", "k"]),
        s(&["pretr-check", &d, "--closure", "--budget", "shift_range=1"]),
        s(&["tr-axioms", &d]),
        s(&["tr-axioms", &c, "--category", "square-zero"]),
        s(&["module-validate", &d, "--representable"]),
        s(&["cell-realize", &d]),
        s(&["retract-verify", &d]),
        s(&["morita-verify", &m]),
        s(&["morita-verify", &corpus("morita-flipped.json")]),
        s(&["corpus-run", "--dir", &corpus_dir().display().to_string()]),
    ]
}

fn c9_determinism() -> Check {
    let (mut runs, mut witnesses) = (0, 0);
    let mut problems = Vec::new();
    for args in invocations() {
        let argv: Vec<String> =
            ["dgkit", "--format", "json", "--seed", "7"].iter().map(|s| s.to_string()).chain(args.clone()).collect();
        let first = run(&argv);
        let second = run(&argv);
        runs += 1;
        if first.code == dgkit_cli::INPUT_ERROR {
            problems.push(format!("{}: {}", args[0], first.stderr.trim()));
            continue;
        }
        if first.stdout != second.stdout || first.code != second.code {
            problems.push(format!("{}: output differs between runs", args[0]));
        }
        let report: Report = serde_json::from_str(&first.stdout).unwrap();
        if report.to_json() != first.stdout {
            problems.push(format!("{}: report does not round-trip", args[0]));
        }
        let inputs = match Workspace::load(&report.inputs) {
            Ok(ws) => ws,
            Err(_) if args[0] == "corpus-run" => {
                // inputs are separate workspaces
                let mut n = 0;
                for path in &report.inputs {
                    n += Workspace::load(&[path]).map(|_| 1).unwrap_or(0);
                }
                if n != report.inputs.len() {
                    problems.push("corpus-run: an input does not reload".into());
                }
                continue;
            }
            Err(e) => {
                problems.push(format!("{}: {e}", args[0]));
                continue;
            }
        };
        match verify_report_witnesses(&first.stdout, &inputs) {
            Ok(n) => witnesses += n,
            Err(e) => problems.push(format!("{}: {e}", args[0])),
        }
    }
    (
        problems.is_empty() && witnesses > 0,
        format!("{runs} commands run twice byte-identical; {witnesses} witnesses re-verified on reload; problems: {problems:?}"),
    )
}

fn main() {
    let criteria: [(u8, &str, fn() -> Check); 9] = [
        (1, "structure suite", c1_structure),
        (2, "contractibility of cone(id)", c2_contractibility),
        (3, "alpha-cone compatibility", c3_alpha_cone),
        (4, "alpha is a DK-embedding on budgeted pre-tr", c4_alpha_embedding),
        (5, "triangle axioms", c5_triangles),
        (6, "pretriangulated checker", c6_pretriangulated),
        (7, "Morita strictly weaker than DK", c7_morita_separation),
        (8, "graded-criterion cross-check", c8_graded_cross_check),
        (9, "determinism and witness soundness", c9_determinism),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id} [{}] {title}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
