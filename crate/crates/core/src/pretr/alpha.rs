use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgmod::{ActionBlocks, DgModule, ModuleMap};
use crate::field::{Matrix, Vector};

use super::{TwistedComplex, TwistedHom, TwistedHomComplex};

fn evaluations(k: &TwistedComplex) -> Vec<TwistedHomComplex> {
    let base = k.base();
    (0..base.len())
        .map(|b| TwistedHomComplex::new(&TwistedComplex::embed(base.clone(), b), k).expect("same base"))
        .collect()
}

/// `α(K)(B) = Hom(B, K) = ⊕ hom(B, C_t)[r_t]` with differential `d + q` and
/// the right action `(x·u)_t = x_t ∘ u`.
pub fn alpha(k: &TwistedComplex) -> DgModule {
    let base = k.base().clone();
    let evals = evaluations(k);
    let mut actions: BTreeMap<(usize, usize), ActionBlocks> = BTreeMap::new();
    for x in 0..base.len() {
        for y in 0..base.len() {
            let blocks = actions.entry((x, y)).or_default();
            for p in evals[y].complex().support() {
                for (t, &(ct, rt)) in k.summands().iter().enumerate() {
                    let Some(oy) = evals[y].offset(p, t, 0) else { continue };
                    for ((e, q), entries) in base.comp_blocks(x, y, ct) {
                        if e != p + rt {
                            continue;
                        }
                        let ox = evals[x].offset(p + q, t, 0).expect("composite lands in the layout");
                        let block = blocks.entry((p, q)).or_default();
                        block.extend(entries.iter().map(|(a, b, c, s)| (oy + a, *b, ox + c, s.clone())));
                    }
                }
            }
        }
    }
    let values = evals.iter().map(|e| e.complex().clone()).collect();
    DgModule::new(base, values, actions).expect("alpha shapes")
}

/// `α(f)_B(x) = f ∘ x`.
pub fn alpha_map(f: &TwistedHom) -> ModuleMap {
    let (src, tgt) = (evaluations(f.source()), evaluations(f.target()));
    let comps = src
        .iter()
        .zip(&tgt)
        .map(|(s, t)| {
            s.complex()
                .space()
                .iter()
                .map(|(n, dim)| {
                    let cols: Vec<Vector> =
                        (0..dim).map(|i| t.flatten(&f.compose(&s.basis(n, i)).expect("composable"))).collect();
                    (n, Matrix::from_columns(t.dim(n + f.degree()), &cols))
                })
                .collect()
        })
        .collect();
    ModuleMap::new(Arc::new(alpha(f.source())), Arc::new(alpha(f.target())), f.degree(), comps)
        .expect("alpha map shapes")
}
