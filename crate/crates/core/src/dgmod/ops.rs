use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::CochainComplex;
use crate::dgcat::{DgCategory, Element};
use crate::field::{Matrix, Vector};
use crate::search::{Budget, Outcome, Pencil};

use super::{cells::yoneda_map, ActionBlocks, DgModule, ModuleError, ModuleMap};

/// `hom(-, x)`, acting by precomposition.
pub fn representable(t: Arc<DgCategory>, x: usize) -> DgModule {
    let values = (0..t.len()).map(|y| t.hom(y, x).clone()).collect();
    let mut actions = BTreeMap::new();
    for y in 0..t.len() {
        for z in 0..t.len() {
            let blocks: ActionBlocks = t.comp_blocks(y, z, x).map(|(k, b)| (k, b.clone())).collect();
            if !blocks.is_empty() {
                actions.insert((y, z), blocks);
            }
        }
    }
    DgModule::new(t, values, actions).expect("representable shapes")
}

pub fn zero_module(t: Arc<DgCategory>) -> DgModule {
    let n = t.len();
    DgModule::new(t, vec![CochainComplex::zero(); n], BTreeMap::new()).expect("zero module")
}

/// `M[n]`: values shifted by `n`, action constants unchanged.
pub fn shift(m: &DgModule, n: i32) -> DgModule {
    let values = m.values.iter().map(|v| v.shift(n)).collect();
    let actions = m
        .actions
        .iter()
        .map(|(&k, blocks)| (k, blocks.iter().map(|(&(p, q), b)| ((p - n, q), b.clone())).collect()))
        .collect();
    DgModule::new(m.base.clone(), values, actions).expect("shifted shapes")
}

/// `M[1]`.
pub fn suspension(m: &DgModule) -> DgModule {
    shift(m, 1)
}

/// `M ⊕ N`, with `M` first in every degree.
pub fn direct_sum(m: &DgModule, n: &DgModule) -> Result<DgModule, ModuleError> {
    if m.base != n.base {
        return Err(ModuleError::BaseMismatch);
    }
    let values = m.values.iter().zip(&n.values).map(|(a, b)| a.direct_sum(b)).collect();
    let mut actions: BTreeMap<(usize, usize), ActionBlocks> = m.actions.clone();
    for (&(x, y), blocks) in &n.actions {
        for (&(p, q), entries) in blocks {
            let (oa, oc) = (m.values[y].dim(p), m.values[x].dim(p + q));
            let block = actions.entry((x, y)).or_default().entry((p, q)).or_default();
            block.extend(entries.iter().map(|(a, b, c, s)| (a + oa, *b, c + oc, s.clone())));
        }
    }
    DgModule::new(m.base.clone(), values, actions)
}

/// Pointwise mapping cone `M[1] ⊕ N` of a closed degree-0 map.
pub fn homotopy_cofiber(f: &ModuleMap) -> Result<DgModule, ModuleError> {
    if f.degree != 0 || !f.is_closed() {
        return Err(ModuleError::NotClosed);
    }
    let (m, n) = (&f.source, &f.target);
    let values = (0..m.base.len()).map(|x| f.chain_map(x).mapping_cone().expect("closed map")).collect();
    let mut actions: BTreeMap<(usize, usize), ActionBlocks> = BTreeMap::new();
    for (&(x, y), blocks) in &m.actions {
        for (&(p, q), entries) in blocks {
            actions.entry((x, y)).or_default().entry((p - 1, q)).or_default().extend(entries.iter().cloned());
        }
    }
    for (&(x, y), blocks) in &n.actions {
        for (&(p, q), entries) in blocks {
            let (oa, oc) = (m.values[y].dim(p + 1), m.values[x].dim(p + q + 1));
            let block = actions.entry((x, y)).or_default().entry((p, q)).or_default();
            block.extend(entries.iter().map(|(a, b, c, s)| (a + oa, *b, c + oc, s.clone())));
        }
    }
    DgModule::new(m.base.clone(), values, actions)
}

/// Searches for `c` and a cycle `m` in `M(c)^0` whose Yoneda map
/// `hom(-, c) -> M` is a quasi-isomorphism at every object. Refuted only if
/// every object is refuted.
pub fn is_weakly_representable(m: &Arc<DgModule>, budget: &Budget) -> Outcome<(usize, Element)> {
    let t = m.base.clone();
    let mut first_refutation = None;
    let mut all_refuted = true;
    for c in 0..t.len() {
        let h0 = m.values[c].cohomology(0);
        let reps: Vec<Element> = h0.representatives().iter().map(|v| Element::new(0, v.clone())).collect();
        let mut pencil = Pencil::new(reps.len());
        for b in 0..t.len() {
            let (src, tgt) = (t.hom(b, c), &m.values[b]);
            let degrees: std::collections::BTreeSet<i32> = src.support().chain(tgt.support()).collect();
            for n in degrees {
                let (hs, ht) = (src.cohomology(n), tgt.cohomology(n));
                let terms: Vec<Matrix> = reps
                    .iter()
                    .map(|r| {
                        let cols: Vec<Vector> = hs
                            .representatives()
                            .iter()
                            .map(|z| {
                                let img = m.act(b, c, r, &Element::new(n, z.clone()));
                                ht.class_of(&img.coords).expect("cycles act to cycles")
                            })
                            .collect();
                        Matrix::from_columns(ht.dim(), &cols)
                    })
                    .collect();
                pencil.push(ht.dim(), hs.dim(), terms);
            }
        }
        match pencil.search(None, budget) {
            Outcome::Found(coeffs) => {
                let mut elem = Element::zero(0, m.values[c].dim(0));
                for (k, r) in coeffs.iter().zip(&reps) {
                    crate::field::axpy(&mut elem.coords, k, &r.coords);
                }
                let y = yoneda_map(&t, c, m.clone(), &elem).expect("shapes");
                if y.is_pointwise_quasi_iso() {
                    return Outcome::Found((c, elem));
                }
                all_refuted = false;
            }
            Outcome::Refuted(r) => {
                first_refutation.get_or_insert(r);
            }
            Outcome::NotFoundWithinBudget => all_refuted = false,
        }
    }
    match first_refutation {
        Some(r) if all_refuted => Outcome::Refuted(r),
        None if all_refuted => {
            // no objects at all
            Outcome::Refuted(crate::search::Refutation::Exhaustive { bound: 0, params: 0 })
        }
        _ => Outcome::NotFoundWithinBudget,
    }
}
