use std::collections::BTreeMap;

use crate::complex::{CochainComplex, TensorLayout};
use crate::field::{Matrix, Scalar};

use super::{CategoryParts, DgCategory};

fn one() -> Scalar {
    Scalar::one()
}

/// The unit dg algebra: one object `*` with endomorphisms `k` in degree 0.
pub fn unit_category() -> DgCategory {
    let mut parts = CategoryParts {
        objects: vec!["*".into()],
        homs: BTreeMap::new(),
        comp: BTreeMap::new(),
        units: vec![vec![one()]],
    };
    parts.homs.insert((0, 0), CochainComplex::concentrated(0, 1));
    parts.comp.insert((0, 0, 0), BTreeMap::from([((0, 0), vec![(0, 0, 0, one())])]));
    DgCategory::from_parts(parts).expect("unit category")
}

/// Two objects `0`, `1` with `hom(0,0) = hom(1,1) = hom(0,1) = k` and
/// `hom(1,0) = 0`, all in degree 0.
pub fn delta1() -> DgCategory {
    let k = CochainComplex::concentrated(0, 1);
    let homs = BTreeMap::from([((0, 0), k.clone()), ((1, 1), k.clone()), ((0, 1), k)]);
    let unit_block = || BTreeMap::from([((0, 0), vec![(0, 0, 0, one())])]);
    let mut comp = BTreeMap::new();
    for key in [(0, 0, 0), (1, 1, 1), (0, 0, 1), (0, 1, 1)] {
        comp.insert(key, unit_block());
    }
    DgCategory::from_parts(CategoryParts {
        objects: vec!["0".into(), "1".into()],
        homs,
        comp,
        units: vec![vec![one()], vec![one()]],
    })
    .expect("delta1")
}

/// One object with endomorphisms spanned by `e, a` in degree 0 and `u` in
/// degree 1, `d a = u`, unit `e`, all other products zero.
pub fn square_zero_algebra() -> DgCategory {
    let hom = CochainComplex::new([(0, 2), (1, 1)], [(0, Matrix::from_int_rows(&[&[0, 1]]))]).expect("d² = 0");
    let block00 = vec![(0, 0, 0, one()), (0, 1, 1, one()), (1, 0, 1, one())];
    let block01 = vec![(0, 0, 0, one())];
    let block10 = vec![(0, 0, 0, one())];
    let comp = BTreeMap::from([((0, 0, 0), BTreeMap::from([((0, 0), block00), ((0, 1), block01), ((1, 0), block10)]))]);
    DgCategory::from_parts(CategoryParts {
        objects: vec!["*".into()],
        homs: BTreeMap::from([((0, 0), hom)]),
        comp,
        units: vec![vec![one(), Scalar::zero()]],
    })
    .expect("square-zero algebra")
}

/// One object `*` with unit `e` in degree 0 and, when `scale` is given,
/// `u` in degree `m`, `v` in degree `m+1` with `d u = scale * v`; otherwise a
/// single closed `w` in degree `m`. All products not involving `e` vanish.
/// With a nonzero scale the inclusion of `k e` is a quasi-isomorphism.
pub fn extension_algebra(m: i32, scale: Option<Scalar>) -> DgCategory {
    let extra: Vec<i32> = match scale {
        Some(_) => vec![m, m + 1],
        None => vec![m],
    };
    let mut dims: BTreeMap<i32, usize> = BTreeMap::from([(0, 1)]);
    // index of each extra generator inside its degree
    let mut idx = Vec::new();
    for &d in &extra {
        let slot = dims.entry(d).or_insert(0);
        idx.push(*slot);
        *slot += 1;
    }
    let mut diffs = Vec::new();
    if let Some(c) = &scale {
        let mut dm = Matrix::zero(dims[&(m + 1)], dims[&m]);
        dm.set(idx[1], idx[0], c.clone());
        diffs.push((m, dm));
    }
    let hom = CochainComplex::new(dims.clone(), diffs).expect("d² = 0");
    let mut blocks: BTreeMap<(i32, i32), super::CompBlock> = BTreeMap::new();
    blocks.entry((0, 0)).or_default().push((0, 0, 0, one()));
    for (&d, &i) in extra.iter().zip(&idx) {
        blocks.entry((0, d)).or_default().push((0, i, i, one()));
        blocks.entry((d, 0)).or_default().push((i, 0, i, one()));
    }
    let mut unit = vec![Scalar::zero(); dims[&0]];
    unit[0] = one();
    DgCategory::from_parts(CategoryParts {
        objects: vec!["*".into()],
        homs: BTreeMap::from([((0, 0), hom)]),
        comp: BTreeMap::from([((0, 0, 0), blocks)]),
        units: vec![unit],
    })
    .expect("extension algebra")
}

/// Tensor product. Objects are `(x,x')`, homs are tensor products of complexes
/// and `(g⊗g')∘(f⊗f') = (-1)^(|g'||f|) (g∘f)⊗(g'∘f')`.
pub fn tensor(t: &DgCategory, u: &DgCategory) -> DgCategory {
    let (n, m) = (t.len(), u.len());
    let idx = |x: usize, x2: usize| x * m + x2;
    let mut objects = Vec::with_capacity(n * m);
    for x in 0..n {
        for x2 in 0..m {
            objects.push(format!("({},{})", t.name(x), u.name(x2)));
        }
    }
    let mut homs = BTreeMap::new();
    let mut layouts = BTreeMap::new();
    for x in 0..n {
        for x2 in 0..m {
            for y in 0..n {
                for y2 in 0..m {
                    let (a, b) = (t.hom(x, y), u.hom(x2, y2));
                    homs.insert((idx(x, x2), idx(y, y2)), a.tensor(b));
                    layouts.insert((idx(x, x2), idx(y, y2)), TensorLayout::new(a, b));
                }
            }
        }
    }
    let mut comp = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for x2 in 0..m {
                    for y2 in 0..m {
                        for z2 in 0..m {
                            let (xx, yy, zz) = (idx(x, x2), idx(y, y2), idx(z, z2));
                            let (lg, lf, lc) = (&layouts[&(yy, zz)], &layouts[&(xx, yy)], &layouts[&(xx, zz)]);
                            let mut blocks: BTreeMap<(i32, i32), super::CompBlock> = BTreeMap::new();
                            for ((p1, q1), e1) in t.comp_blocks(x, y, z) {
                                for ((p2, q2), e2) in u.comp_blocks(x2, y2, z2) {
                                    let sign = Scalar::sign((p2 as i64) * (q1 as i64));
                                    let block = blocks.entry((p1 + p2, q1 + q2)).or_default();
                                    for (a1, b1, c1, s1) in e1 {
                                        for (a2, b2, c2, s2) in e2 {
                                            let a = lg.index(p1, *a1, p2, *a2).expect("layout");
                                            let b = lf.index(q1, *b1, q2, *b2).expect("layout");
                                            let c = lc.index(p1 + q1, *c1, p2 + q2, *c2).expect("layout");
                                            block.push((a, b, c, &(&sign * s1) * s2));
                                        }
                                    }
                                }
                            }
                            if !blocks.is_empty() {
                                comp.insert((xx, yy, zz), blocks);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut units = Vec::with_capacity(n * m);
    for x in 0..n {
        for x2 in 0..m {
            let l = &layouts[&(idx(x, x2), idx(x, x2))];
            let mut v = vec![Scalar::zero(); l.dim(0)];
            for (i, a) in t.unit(x).iter().enumerate() {
                for (j, b) in u.unit(x2).iter().enumerate() {
                    if !a.is_zero() && !b.is_zero() {
                        v[l.index(0, i, 0, j).expect("layout")] = a * b;
                    }
                }
            }
            units.push(v);
        }
    }
    DgCategory::from_parts(CategoryParts { objects, homs, comp, units }).expect("tensor of categories")
}

/// Opposite category: `op(x, y) = hom(y, x)` and `f ∘op g = (-1)^(|f||g|) g ∘ f`.
pub fn opposite(t: &DgCategory) -> DgCategory {
    let n = t.len();
    let mut homs = BTreeMap::new();
    let mut comp = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            homs.insert((x, y), t.hom(y, x).clone());
            for z in 0..n {
                // op(y,z) ⊗ op(x,y) -> op(x,z) is hom(z,y) ⊗ hom(y,x) -> hom(z,x),
                // read off from hom(y,x) ⊗ hom(z,y) -> hom(z,x) with factors swapped.
                let mut blocks = BTreeMap::new();
                for ((p, q), entries) in t.comp_blocks(z, y, x) {
                    let sign = Scalar::sign((p as i64) * (q as i64));
                    let swapped: super::CompBlock =
                        entries.iter().map(|(a, b, c, s)| (*b, *a, *c, &sign * s)).collect();
                    blocks.insert((q, p), swapped);
                }
                if !blocks.is_empty() {
                    comp.insert((x, y, z), blocks);
                }
            }
        }
    }
    let units = (0..n).map(|x| t.unit(x).clone()).collect();
    DgCategory::from_parts(CategoryParts { objects: t.objects().to_vec(), homs, comp, units })
        .expect("opposite category")
}
