//! The shipped corpus as workspace files, with the verdict expected of every
//! entity. `corpus/` in the repository is this module's output.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use dgkit::corpus::{
    all_categories, fixed_functors, morita_certificate, morita_functor, morita_target, random_functors, shift_modules,
};
use dgkit::dgcat::{delta1, DgCategory, DgFunctor, Element};
use dgkit::dgmod::{
    cell_map, realize_cell, representable, yoneda_map, Cell, CellPresentation, ModuleMap, RetractCertificate,
};
use dgkit::field::Scalar;
use dgkit::format::{self, CategoryData, WorkspaceData};
use dgkit::pretr::{alpha, cone, Entries, TwistedComplex, TwistedHom};
use dgkit::Verdict;

/// Seed of the randomized functors.
pub const RANDOM_SEED: u64 = 0;
pub const RANDOM_COUNT: usize = 25;

pub struct ShippedFile {
    pub name: String,
    pub data: WorkspaceData,
    /// `"<kind> <name>"` to the verdict `corpus-run` must reproduce.
    pub expected: BTreeMap<String, Verdict>,
}

impl ShippedFile {
    fn new(name: &str) -> Self {
        ShippedFile { name: name.into(), data: WorkspaceData::default(), expected: BTreeMap::new() }
    }

    fn category(&mut self, name: &str, t: &DgCategory) {
        self.data.categories.insert(name.into(), format::category_to_data(t));
        self.expected.insert(format!("category {name}"), Verdict::Pass);
    }

    fn functor(&mut self, name: &str, f: &DgFunctor, source: &str, target: &str, expected: Verdict) {
        self.data.functors.insert(name.into(), format::functor_to_data(f, source, target));
        self.expected.insert(format!("functor {name}"), expected);
    }
}

fn categories() -> ShippedFile {
    let mut file = ShippedFile::new("categories.json");
    for (name, t) in all_categories() {
        file.category(&name, &t);
    }
    file
}

fn empty() -> ShippedFile {
    let mut file = ShippedFile::new("empty.json");
    let data = CategoryData {
        objects: vec!["x".into()],
        homs: BTreeMap::new(),
        comp: BTreeMap::new(),
        units: BTreeMap::from([("x".into(), vec![])]),
    };
    file.data.categories.insert("empty".into(), data);
    file.expected.insert("category empty".into(), Verdict::Pass);
    file
}

fn delta1_file() -> ShippedFile {
    let mut file = ShippedFile::new("delta1.json");
    let t = Arc::new(delta1());
    file.category("delta1", &t);
    let base = "delta1";
    let (x0, x1) = (TwistedComplex::embed(t.clone(), 0), TwistedComplex::embed(t.clone(), 1));
    let arrow = Element::new(0, vec![Scalar::one()]);
    let f = TwistedHom::new(x0.clone(), x1.clone(), 0, Entries::from([((0, 0), arrow.clone())])).expect("degree 0");
    file.data.twisted.insert("x0".into(), format::twisted_to_data(&x0, base));
    file.data.twisted.insert("x1".into(), format::twisted_to_data(&x1, base));
    file.data.morphisms.insert("f".into(), format::morphism_to_data(&f, "x0", "x1"));

    for x in 0..t.len() {
        let name = format!("h{}", t.name(x));
        file.data.modules.insert(name.clone(), format::module_to_data(&representable(t.clone(), x), base));
        file.expected.insert(format!("module {name}"), Verdict::Pass);
    }
    let simple = alpha(&cone(&f).expect("closed"));
    file.data.modules.insert("simple".into(), format::module_to_data(&simple, base));
    file.expected.insert("module simple".into(), Verdict::Pass);

    let cells = CellPresentation::new(
        t.clone(),
        vec![Cell { object: 1, degree: 0, attach: vec![] }, Cell { object: 0, degree: -1, attach: vec![(0, arrow)] }],
    );
    file.data.presentations.insert("cone-cells".into(), format::presentation_to_data(&cells, base));

    let one = CellPresentation::new(t.clone(), vec![Cell { object: 1, degree: 0, attach: vec![] }]);
    let module = Arc::new(representable(t.clone(), 1));
    let c = Arc::new(realize_cell(&one).expect("one cell"));
    let i = yoneda_map(&t, 1, c, &one.generator(0)).expect("cycle");
    let r = cell_map(&one, module.clone(), &[t.unit_element(1)]).expect("unit");
    let h = ModuleMap::zero(module.clone(), module.clone(), -1);
    let cert = RetractCertificate { module, presentation: one, i, r, h };
    file.data.retracts.insert("h1-retract".into(), format::retract_to_data(&cert, "h1", base));
    file.expected.insert("retract h1-retract".into(), Verdict::Pass);
    file
}

fn inclusion() -> ShippedFile {
    let mut file = ShippedFile::new("inclusion.json");
    let t = Arc::new(delta1());
    let sub = Arc::new(t.full_subcategory(&[0]));
    file.category("delta1", &t);
    file.category("{0}", &sub);
    let f = DgFunctor::inclusion(sub, t).expect("full subcategory");
    file.functor("F", &f, "{0}", "delta1", Verdict::Fail);
    file
}

/// Fixed functors are DK-equivalences exactly when they are identities or
/// inflations along acyclic extensions.
fn fixed_expectation(name: &str) -> Verdict {
    let acyclic =
        name.contains("⊗ext(") && name.ends_with(')') && name.rsplit("⊗ext(").next().is_some_and(|s| s.contains(','));
    if name.starts_with("id(") || acyclic {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn functors(name: &str, list: Vec<(String, DgFunctor)>, expect: impl Fn(&str) -> Verdict) -> ShippedFile {
    let mut file = ShippedFile::new(name);
    for (n, f) in list {
        let (s, t) = (format!("{n}.source"), format!("{n}.target"));
        file.category(&s, f.source());
        file.category(&t, f.target());
        file.functor(&n, &f, &s, &t, expect(&n));
    }
    file
}

fn morita(name: &str, certificate: &str, flipped: bool) -> ShippedFile {
    let mut file = ShippedFile::new(name);
    let mc = morita_target();
    let f = morita_functor(&mc);
    file.category("k", f.source());
    file.category("T", mc.category());
    file.functor("F", &f, "k", "T", Verdict::Fail);
    let cert = morita_certificate(&mc, flipped);
    file.data.morita.insert(certificate.into(), format::morita_to_data(&cert, "F", "T"));
    file.expected.insert(format!("morita {certificate}"), if flipped { Verdict::Fail } else { Verdict::Pass });
    file
}

fn perf() -> ShippedFile {
    let mut file = ShippedFile::new("perf.json");
    file.category("perf(k)", shift_modules(2).category());
    file
}

pub fn shipped_files() -> Vec<ShippedFile> {
    vec![
        categories(),
        delta1_file(),
        empty(),
        functors("functors.json", fixed_functors(), fixed_expectation),
        inclusion(),
        morita("morita.json", "certificate", false),
        morita("morita-flipped.json", "flipped", true),
        perf(),
        functors("random-functors.json", random_functors(RANDOM_SEED, RANDOM_COUNT), |_| Verdict::Pass),
    ]
}

/// File name to canonical contents, `expected.json` included.
pub fn render() -> BTreeMap<String, String> {
    let files = shipped_files();
    let mut out = BTreeMap::new();
    let mut expected = BTreeMap::new();
    for f in files {
        out.insert(f.name.clone(), format::to_canonical_json(&f.data));
        expected.insert(f.name, f.expected);
    }
    out.insert("expected.json".into(), format::to_canonical_json(&expected));
    out
}

pub fn write(dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in render() {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}
