//! Reports, their two renderings, and re-verification of witnesses.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use dgkit::dgcat::{DgCategory, HomotopyCategory};
use dgkit::dgmod::yoneda_map;
use dgkit::format::{self, ElementData, InlineMorphismData, WorkspaceData};
use dgkit::pretr::{verify_fill_in, verify_h0_iso};
use dgkit::search::Budget;
use dgkit::Verdict;

use crate::workspace::Workspace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
    pub seed: u64,
    pub budget: Budget,
    /// Entities constructed by the command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<WorkspaceData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub case: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessData>,
}

impl Finding {
    pub fn new(case: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Self {
        Finding { case: case.into(), verdict, detail: detail.into(), witness: None }
    }

    pub fn pass(case: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(case, Verdict::Pass, detail)
    }

    pub fn fail(case: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(case, Verdict::Fail, detail)
    }

    pub fn with_witness(mut self, w: WitnessData) -> Self {
        self.witness = Some(w);
        self
    }
}

/// Everything needed to re-check a positive finding. Categories are named;
/// a name resolves against the inputs and then the report's own output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WitnessData {
    /// A closed degree-0 map of twisted complexes inducing an isomorphism in `H^0`.
    H0Iso { base: String, morphism: InlineMorphismData },
    /// A fill-in `c: cone(f) -> cone(g)` for the square `b∘f ≃ g∘a`.
    FillIn {
        base: String,
        f: InlineMorphismData,
        g: InlineMorphismData,
        a: InlineMorphismData,
        b: InlineMorphismData,
        c: InlineMorphismData,
    },
    /// `forward: image -> object` and `backward`, inverse in `H^0(category)`.
    H0Inverse { category: String, image: String, object: String, forward: ElementData, backward: ElementData },
    /// A cycle `element` of `M(object)^0` whose Yoneda map is a quasi-isomorphism.
    Representing { module: String, object: String, element: ElementData },
}

impl Report {
    pub fn new(command: &str, inputs: &[String], findings: Vec<Finding>, budget: &Budget) -> Self {
        let verdict = Verdict::all(findings.iter().map(|f| f.verdict));
        Report {
            command: command.into(),
            inputs: inputs.to_vec(),
            verdict,
            findings,
            seed: budget.seed,
            budget: budget.clone(),
            output: None,
        }
    }

    pub fn with_output(mut self, output: WorkspaceData) -> Self {
        self.output = Some(output);
        self
    }

    pub fn to_json(&self) -> String {
        format::to_canonical_json(self)
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let b = &self.budget;
        let _ = writeln!(s, "dgkit {}: {}", self.command, self.verdict.as_str().to_uppercase());
        let _ = writeln!(s, "inputs: {}", self.inputs.join(", "));
        let _ = writeln!(
            s,
            "seed: {}  budget: max_summands={} shift_range={} random_trials={} height={} exhaustive_cap={}",
            self.seed, b.max_summands, b.shift_range, b.random_trials, b.height, b.exhaustive_cap
        );
        let width = self.findings.iter().map(|f| f.case.chars().count()).max().unwrap_or(0);
        for f in &self.findings {
            let mark = match f.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Inconclusive => "????",
            };
            let w = if f.witness.is_some() { " [witness]" } else { "" };
            let _ = writeln!(s, "  {mark}  {:<width$}  {}{w}", f.case, f.detail);
        }
        if let Some(out) = &self.output {
            let names: Vec<String> = out
                .categories
                .keys()
                .map(|n| format!("category {n}"))
                .chain(out.twisted.keys().map(|n| format!("twisted complex {n}")))
                .chain(out.modules.keys().map(|n| format!("module {n}")))
                .collect();
            let _ = writeln!(s, "output: {}", names.join(", "));
        }
        s
    }
}

fn category<'a>(
    name: &str,
    inputs: &'a Workspace,
    output: &'a Option<Workspace>,
) -> Result<&'a Arc<DgCategory>, String> {
    inputs
        .categories
        .get(name)
        .or_else(|| output.as_ref().and_then(|o| o.categories.get(name)))
        .ok_or_else(|| format!("witness refers to unknown category {name:?}"))
}

fn check_witness(w: &WitnessData, inputs: &Workspace, output: &Option<Workspace>) -> Result<bool, String> {
    let e = |e: format::FormatError| e.to_string();
    Ok(match w {
        WitnessData::H0Iso { base, morphism } => {
            let t = category(base, inputs, output)?;
            verify_h0_iso(&format::inline_morphism_from_data("witness", morphism, t.clone()).map_err(e)?)
        }
        WitnessData::FillIn { base, f, g, a, b, c } => {
            let t = category(base, inputs, output)?;
            let m = |d: &InlineMorphismData| format::inline_morphism_from_data("witness", d, t.clone()).map_err(e);
            verify_fill_in(&m(f)?, &m(g)?, &m(a)?, &m(b)?, &m(c)?)
        }
        WitnessData::H0Inverse { category: name, image, object, forward, backward } => {
            let t = category(name, inputs, output)?;
            let idx = |o: &str| t.index_of(o).ok_or_else(|| format!("unknown object {o:?}"));
            let (a, b) = (idx(image)?, idx(object)?);
            let (f, g) = (format::element_from_data(forward), format::element_from_data(backward));
            if f.degree != 0
                || g.degree != 0
                || f.coords.len() != t.hom(a, b).dim(0)
                || g.coords.len() != t.hom(b, a).dim(0)
            {
                return Ok(false);
            }
            if !t.is_cycle(a, b, &f) || !t.is_cycle(b, a, &g) {
                return Ok(false);
            }
            let h0 = HomotopyCategory::new(t.clone());
            h0.class_of(a, a, &t.compose(a, b, a, &g, &f)) == Some(h0.identity(a))
                && h0.class_of(b, b, &t.compose(b, a, b, &f, &g)) == Some(h0.identity(b))
        }
        WitnessData::Representing { module, object, element } => {
            let m = inputs
                .modules
                .get(module)
                .or_else(|| output.as_ref().and_then(|o| o.modules.get(module)))
                .ok_or_else(|| format!("witness refers to unknown module {module:?}"))?;
            let t = m.base().clone();
            let x = t.index_of(object).ok_or_else(|| format!("unknown object {object:?}"))?;
            let el = format::element_from_data(element);
            if el.degree != 0 || el.coords.len() != m.value(x).dim(0) || !m.d(x, &el).is_zero() {
                return Ok(false);
            }
            yoneda_map(&t, x, m.clone(), &el).map_err(|e| e.to_string())?.is_pointwise_quasi_iso()
        }
    })
}

/// Re-verifies every witness in a serialized report against the inputs it
/// names. Returns the number of witnesses checked; any witness that fails
/// is an error naming its case.
pub fn verify_report_witnesses(text: &str, inputs: &Workspace) -> Result<usize, String> {
    let report: Report = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let output = match &report.output {
        Some(data) => {
            let mut merged = data.clone();
            // constructed entities may refer to input categories
            for (k, v) in &inputs.data.categories {
                merged.categories.entry(k.clone()).or_insert_with(|| v.clone());
            }
            Some(Workspace::from_data(merged).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let mut checked = 0;
    for f in &report.findings {
        if let Some(w) = &f.witness {
            if !check_witness(w, inputs, &output)? {
                return Err(format!("witness of case {:?} does not verify", f.case));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Counts findings by verdict.
pub fn tally(report: &Report) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for f in &report.findings {
        *m.entry(f.verdict.as_str()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn corpus(file: &str) -> String {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file).display().to_string()
    }

    #[test]
    fn tally_and_table() {
        let findings = vec![Finding::pass("a", "fine"), Finding::fail("b", "broken"), Finding::pass("c", "")];
        let r = Report::new("validate", &["f.json".into()], findings, &Budget::default());
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(tally(&r), BTreeMap::from([("fail", 1), ("pass", 2)]));
        let t = r.to_table();
        assert!(t.starts_with("dgkit validate: FAIL\n"));
        assert!(t.contains("  FAIL  b  broken"));
    }

    #[test]
    fn tampered_witness_is_caught() {
        let out = crate::run(["dgkit", "--format", "json", "dk-check", &corpus("inclusion.json")]);
        let ws = Workspace::load(&[corpus("inclusion.json")]).unwrap();
        assert_eq!(verify_report_witnesses(&out.stdout, &ws), Ok(1));
        let mut r: Report = serde_json::from_str(&out.stdout).unwrap();
        for f in &mut r.findings {
            if let Some(WitnessData::H0Inverse { forward, .. }) = &mut f.witness {
                forward.coords = vec![dgkit::field::Scalar::from_int(0); forward.coords.len()];
            }
        }
        assert!(verify_report_witnesses(&r.to_json(), &ws).is_err());
    }

    #[test]
    fn fill_in_witnesses_survive_serialization() {
        let out = crate::run(["dgkit", "--format", "json", "tr-axioms", &corpus("delta1.json")]);
        let ws = Workspace::load(&[corpus("delta1.json")]).unwrap();
        let n = verify_report_witnesses(&out.stdout, &ws).unwrap();
        let r: Report = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(n, r.findings.iter().filter(|f| f.witness.is_some()).count());
        assert!(r.findings.iter().any(|f| matches!(f.witness, Some(WitnessData::FillIn { .. }))));
    }
}
