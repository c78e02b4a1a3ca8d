use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{hom_complex, CochainComplex};
use crate::dgcat::{CategoryParts, CompBlock, DgCategory, DgFunctor, Element};
use crate::field::{kernel_basis, Matrix, Scalar, SpanSolver, Vector};

use super::{DgModule, ModuleError, ModuleMap};

/// Block `(x, i)` of the ambient space in degree `l`: a matrix
/// `N(x)^(i+l) x M(x)^i` stored row-major at `offset`.
#[derive(Debug, Clone, Copy)]
struct Block {
    x: usize,
    i: i32,
    rows: usize,
    cols: usize,
    offset: usize,
}

/// `Hom(M, N)`: families of maps `M(x) -> N(x)` commuting with the action.
/// Each degree is a subspace of the product over objects of the graded hom
/// spaces, with basis a kernel basis of the naturality constraints.
#[derive(Debug, Clone)]
pub struct ModuleHomComplex {
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    blocks: BTreeMap<i32, Vec<Block>>,
    bases: BTreeMap<i32, Vec<Vector>>,
    solvers: BTreeMap<i32, SpanSolver>,
    complex: CochainComplex,
}

impl ModuleHomComplex {
    pub fn new(source: Arc<DgModule>, target: Arc<DgModule>) -> Result<Self, ModuleError> {
        if source.base != target.base {
            return Err(ModuleError::BaseMismatch);
        }
        let n = source.base.len();
        let mut blocks: BTreeMap<i32, Vec<Block>> = BTreeMap::new();
        for x in 0..n {
            for (i, cols) in source.value(x).space().iter() {
                for (j, rows) in target.value(x).space().iter() {
                    let list = blocks.entry(j - i).or_default();
                    let offset = list.last().map_or(0, |b| b.offset + b.rows * b.cols);
                    list.push(Block { x, i, rows, cols, offset });
                }
            }
        }
        let mut out = ModuleHomComplex {
            source,
            target,
            blocks,
            bases: BTreeMap::new(),
            solvers: BTreeMap::new(),
            complex: CochainComplex::zero(),
        };
        let degrees: Vec<i32> = out.blocks.keys().copied().collect();
        for &l in &degrees {
            let basis = kernel_basis(&out.constraints(l));
            out.solvers.insert(l, SpanSolver::new(out.ambient_dim(l), &basis));
            out.bases.insert(l, basis);
        }
        let per_object: Vec<CochainComplex> =
            (0..n).map(|x| hom_complex(out.source.value(x), out.target.value(x))).collect();
        let mut diffs = Vec::new();
        for &l in &degrees {
            let (rows, cols) = (out.dim(l + 1), out.dim(l));
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(rows, cols);
            for (c, v) in out.bases[&l].iter().enumerate() {
                let dv = out.ambient_d(&per_object, l, v);
                let coords = out.solvers[&(l + 1)].coords(&dv).expect("differential preserves naturality");
                for (r, x) in coords.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            diffs.push((l, m));
        }
        let dims: Vec<(i32, usize)> = degrees.iter().map(|&l| (l, out.dim(l))).collect();
        out.complex = CochainComplex::new(dims, diffs).expect("module hom complex squares to zero");
        Ok(out)
    }

    pub fn source(&self) -> &Arc<DgModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgModule> {
        &self.target
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn dim(&self, l: i32) -> usize {
        self.bases.get(&l).map_or(0, |b| b.len())
    }

    fn ambient_dim(&self, l: i32) -> usize {
        self.blocks.get(&l).and_then(|v| v.last()).map_or(0, |b| b.offset + b.rows * b.cols)
    }

    fn block(&self, l: i32, x: usize, i: i32) -> Option<&Block> {
        self.blocks.get(&l)?.iter().find(|b| b.x == x && b.i == i)
    }

    /// Rows: for every `(x, y)`, basis `m` of `M(y)^p`, basis `u` of
    /// `hom(x, y)^q` and coordinate `k` of `N(x)^(p+q+l)`, the `k`-th
    /// coordinate of `φ_x(m·u) - φ_y(m)·u`.
    fn constraints(&self, l: i32) -> Matrix {
        let t = self.source.base().clone();
        let (m_mod, n_mod) = (&self.source, &self.target);
        let mut entries: Vec<((usize, usize), Scalar)> = Vec::new();
        let mut row = 0usize;
        for x in 0..t.len() {
            for y in 0..t.len() {
                for (p, dp) in m_mod.value(y).space().iter() {
                    for (q, dq) in t.hom(x, y).space().iter() {
                        let kdim = n_mod.value(x).dim(p + q + l);
                        if kdim == 0 {
                            continue;
                        }
                        let src_block = self.block(l, x, p + q);
                        let dst_block = self.block(l, y, p);
                        let m_entries = m_mod.action_block(x, y, p, q);
                        let n_entries = n_mod.action_block(x, y, p + l, q);
                        for a in 0..dp {
                            for b in 0..dq {
                                if let Some(blk) = src_block {
                                    for (_, _, c, s) in m_entries.iter().filter(|e| e.0 == a && e.1 == b) {
                                        for k in 0..kdim {
                                            entries.push(((row + k, blk.offset + k * blk.cols + c), s.clone()));
                                        }
                                    }
                                }
                                if let Some(blk) = dst_block {
                                    for (r, _, k, s) in n_entries.iter().filter(|e| e.1 == b) {
                                        entries.push(((row + k, blk.offset + r * blk.cols + a), -s.clone()));
                                    }
                                }
                                row += kdim;
                            }
                        }
                    }
                }
            }
        }
        // repeated positions are summed
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (k, v) in entries {
            *acc.entry(k).or_insert_with(Scalar::zero) += &v;
        }
        Matrix::from_entries(row, self.ambient_dim(l), acc).expect("constraint indices in range")
    }

    fn ambient_d(&self, per_object: &[CochainComplex], l: i32, v: &[Scalar]) -> Vector {
        let mut out = vec![Scalar::zero(); self.ambient_dim(l + 1)];
        let comps = self.unflatten_ambient(l, v);
        for (x, c) in comps.iter().enumerate() {
            let layout = crate::complex::HomLayout::new(self.source.value(x), self.target.value(x));
            let flat = layout.flatten(l, c);
            let dflat = per_object[x].apply_d(l, &flat);
            let dcomps = layout.unflatten(l + 1, &dflat);
            for (i, m) in dcomps {
                if let Some(b) = self.block(l + 1, x, i) {
                    for (r, col, val) in m.entries() {
                        out[b.offset + r * b.cols + col] = val.clone();
                    }
                }
            }
        }
        out
    }

    fn unflatten_ambient(&self, l: i32, v: &[Scalar]) -> Vec<BTreeMap<i32, Matrix>> {
        let mut comps = vec![BTreeMap::new(); self.source.base().len()];
        for b in self.blocks.get(&l).into_iter().flatten() {
            let mut m = Matrix::zero(b.rows, b.cols);
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r, c, v[b.offset + r * b.cols + c].clone());
                }
            }
            comps[b.x].insert(b.i, m);
        }
        comps
    }

    fn flatten_ambient(&self, f: &ModuleMap) -> Vector {
        let l = f.degree();
        let mut v = vec![Scalar::zero(); self.ambient_dim(l)];
        for (x, comps) in f.components().iter().enumerate() {
            for (&i, m) in comps {
                let Some(b) = self.block(l, x, i) else { continue };
                for (r, c, val) in m.entries() {
                    v[b.offset + r * b.cols + c] = val.clone();
                }
            }
        }
        v
    }

    /// Coordinates of a natural map in the basis of its degree.
    pub fn coords_of(&self, f: &ModuleMap) -> Option<Vector> {
        let l = f.degree();
        match self.solvers.get(&l) {
            Some(s) => s.coords(&self.flatten_ambient(f)),
            None => f.is_zero().then(Vec::new),
        }
    }

    pub fn map_of(&self, l: i32, coords: &[Scalar]) -> ModuleMap {
        assert_eq!(coords.len(), self.dim(l), "coordinate vector length");
        let mut v = vec![Scalar::zero(); self.ambient_dim(l)];
        for (c, b) in coords.iter().zip(self.bases.get(&l).into_iter().flatten()) {
            crate::field::axpy(&mut v, c, b);
        }
        let comps = self.unflatten_ambient(l, &v);
        ModuleMap::new(self.source.clone(), self.target.clone(), l, comps).expect("layout shapes")
    }

    pub fn basis_map(&self, l: i32, i: usize) -> ModuleMap {
        self.map_of(l, &crate::field::unit_vector(self.dim(l), i))
    }
}

/// A full dg subcategory of modules together with its hom complexes.
#[derive(Debug, Clone)]
pub struct ModuleCategory {
    modules: Vec<Arc<DgModule>>,
    homs: BTreeMap<(usize, usize), ModuleHomComplex>,
    category: Arc<DgCategory>,
}

impl ModuleCategory {
    pub fn category(&self) -> &Arc<DgCategory> {
        &self.category
    }

    pub fn module(&self, i: usize) -> &Arc<DgModule> {
        &self.modules[i]
    }

    pub fn modules(&self) -> &[Arc<DgModule>] {
        &self.modules
    }

    pub fn hom(&self, i: usize, j: usize) -> &ModuleHomComplex {
        &self.homs[&(i, j)]
    }

    /// The category element of a natural map `module(i) -> module(j)`.
    pub fn element_of(&self, i: usize, j: usize, f: &ModuleMap) -> Option<Element> {
        Some(Element::new(f.degree(), self.homs[&(i, j)].coords_of(f)?))
    }
}

/// The dg category on the given named modules, composition being
/// composition of maps.
pub fn module_category(named: Vec<(String, DgModule)>) -> Result<ModuleCategory, ModuleError> {
    let (names, modules): (Vec<String>, Vec<Arc<DgModule>>) = named.into_iter().map(|(n, m)| (n, Arc::new(m))).unzip();
    if modules.iter().any(|m| m.base() != modules[0].base()) {
        return Err(ModuleError::BaseMismatch);
    }
    let n = modules.len();
    let mut homs = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            homs.insert((i, j), ModuleHomComplex::new(modules[i].clone(), modules[j].clone())?);
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
                            let g = hg.basis_map(p, a);
                            for b in 0..dq {
                                let f = hf.basis_map(q, b);
                                let gf = g.compose(&f).expect("composable");
                                let coords = hc.coords_of(&gf).expect("composite of natural maps is natural");
                                for (c, s) in coords.into_iter().enumerate() {
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
    let units = (0..n)
        .map(|x| homs[&(x, x)].coords_of(&ModuleMap::identity(modules[x].clone())).expect("identity is natural"))
        .collect();
    let parts = CategoryParts {
        objects: names,
        homs: homs.iter().map(|(&k, h)| (k, h.complex().clone())).collect(),
        comp,
        units,
    };
    let category = Arc::new(DgCategory::from_parts(parts)?);
    Ok(ModuleCategory { modules, homs, category })
}

/// `x ↦ objects[x]`, `u ↦ (v ↦ u∘v)` into a module category whose module
/// `objects[x]` is the representable at `x`. `None` if some module is not
/// literally representable.
pub fn yoneda_functor(t: Arc<DgCategory>, mc: &ModuleCategory, objects: Vec<usize>) -> Option<DgFunctor> {
    for (x, &o) in objects.iter().enumerate() {
        if **mc.module(o) != super::representable(t.clone(), x) {
            return None;
        }
    }
    let mut maps = BTreeMap::new();
    for x in 0..t.len() {
        for y in 0..t.len() {
            let h = mc.hom(objects[x], objects[y]);
            let mut comps = BTreeMap::new();
            for (n, d) in t.hom(x, y).space().iter() {
                let cols: Vec<Vector> = (0..d)
                    .map(|i| {
                        let u = t.basis_element(x, y, n, i);
                        let f = postcompose(&t, mc.module(objects[x]), mc.module(objects[y]), x, y, &u);
                        h.coords_of(&f).expect("left composition is natural")
                    })
                    .collect();
                comps.insert(n, Matrix::from_columns(h.dim(n), &cols));
            }
            maps.insert((x, y), comps);
        }
    }
    DgFunctor::new(t, mc.category().clone(), objects, maps).ok()
}

/// `v ↦ u∘v` from `hom(-, x)` to `hom(-, y)`.
fn postcompose(t: &DgCategory, rx: &Arc<DgModule>, ry: &Arc<DgModule>, x: usize, y: usize, u: &Element) -> ModuleMap {
    let comps = (0..t.len())
        .map(|b| {
            t.hom(b, x)
                .space()
                .iter()
                .map(|(k, d)| {
                    let cols: Vec<Vector> =
                        (0..d).map(|i| t.compose(b, x, y, u, &t.basis_element(b, x, k, i)).coords).collect();
                    (k, Matrix::from_columns(t.hom(b, y).dim(k + u.degree), &cols))
                })
                .collect()
        })
        .collect();
    ModuleMap::new(rx.clone(), ry.clone(), u.degree, comps).expect("postcomposition shapes")
}
