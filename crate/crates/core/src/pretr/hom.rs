use std::collections::BTreeMap;

use crate::complex::CochainComplex;
use crate::dgcat::Element;
use crate::field::{Matrix, Scalar, Vector};

use super::{Entries, TwistedComplex, TwistedError, TwistedHom};

#[derive(Debug, Clone, Copy)]
struct Slot {
    t: usize,
    s: usize,
    raw: i32,
    offset: usize,
    dim: usize,
}

/// The hom complex `Hom(K, K')` with its coordinate layout. In degree `l`
/// the basis runs over target summands `t`, then source summands `s`, then
/// the basis of `hom(C_s, C'_t)` in raw degree `l + r'_t - r_s`.
#[derive(Debug, Clone)]
pub struct TwistedHomComplex {
    source: TwistedComplex,
    target: TwistedComplex,
    slots: BTreeMap<i32, Vec<Slot>>,
    complex: CochainComplex,
}

impl TwistedHomComplex {
    pub fn new(source: &TwistedComplex, target: &TwistedComplex) -> Result<Self, TwistedError> {
        if source.base != target.base {
            return Err(TwistedError::BaseMismatch);
        }
        let base = &source.base;
        let mut slots: BTreeMap<i32, Vec<Slot>> = BTreeMap::new();
        for (t, &(ct, rt)) in target.summands.iter().enumerate() {
            for (s, &(cs, rs)) in source.summands.iter().enumerate() {
                for (e, dim) in base.hom(cs, ct).space().iter() {
                    let l = e - rt + rs;
                    let list = slots.entry(l).or_default();
                    let offset = list.last().map_or(0, |x| x.offset + x.dim);
                    list.push(Slot { t, s, raw: e, offset, dim });
                }
            }
        }
        let mut out = TwistedHomComplex {
            source: source.clone(),
            target: target.clone(),
            slots,
            complex: CochainComplex::zero(),
        };
        let degrees: Vec<i32> = out.slots.keys().copied().collect();
        let mut diffs = Vec::new();
        for &l in &degrees {
            let (rows, cols) = (out.dim(l + 1), out.dim(l));
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zero(rows, cols);
            for c in 0..cols {
                let df = out.basis(l, c).d();
                for (r, x) in out.flatten(&df).into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            diffs.push((l, m));
        }
        let dims: Vec<(i32, usize)> = degrees.iter().map(|&l| (l, out.dim(l))).collect();
        out.complex = CochainComplex::new(dims, diffs).expect("twisted differential squares to zero");
        Ok(out)
    }

    pub fn source(&self) -> &TwistedComplex {
        &self.source
    }

    pub fn target(&self) -> &TwistedComplex {
        &self.target
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn dim(&self, l: i32) -> usize {
        self.slots.get(&l).and_then(|v| v.last()).map_or(0, |x| x.offset + x.dim)
    }

    /// Offset of the block `(t, s)` in degree `l`.
    pub fn offset(&self, l: i32, t: usize, s: usize) -> Option<usize> {
        self.slots.get(&l)?.iter().find(|x| x.t == t && x.s == s).map(|x| x.offset)
    }

    pub fn flatten(&self, f: &TwistedHom) -> Vector {
        let l = f.degree;
        let mut v = vec![Scalar::zero(); self.dim(l)];
        for (&(t, s), e) in &f.entries {
            let off = self.offset(l, t, s).expect("entry inside the layout");
            for (i, x) in e.coords.iter().enumerate() {
                v[off + i] = x.clone();
            }
        }
        v
    }

    pub fn unflatten(&self, l: i32, v: &[Scalar]) -> TwistedHom {
        assert_eq!(v.len(), self.dim(l), "coordinate vector length");
        let mut entries = Entries::new();
        for x in self.slots.get(&l).into_iter().flatten() {
            let e = Element::new(x.raw, v[x.offset..x.offset + x.dim].to_vec());
            if !e.is_zero() {
                entries.insert((x.t, x.s), e);
            }
        }
        TwistedHom::from_parts_unchecked(self.source.clone(), self.target.clone(), l, entries)
    }

    pub fn basis(&self, l: i32, i: usize) -> TwistedHom {
        self.unflatten(l, &crate::field::unit_vector(self.dim(l), i))
    }
}

/// `Hom(K, K')` as a cochain complex.
pub fn hom_twisted(source: &TwistedComplex, target: &TwistedComplex) -> Result<CochainComplex, TwistedError> {
    Ok(TwistedHomComplex::new(source, target)?.complex)
}
