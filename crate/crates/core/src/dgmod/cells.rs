use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::dgcat::{DgCategory, DgFunctor, Element};
use crate::field::{Matrix, Vector};
use crate::pretr::{alpha, Entries, TwistedComplex, TwistedError};
use crate::Verdict;

use super::{representable, DgModule, ModuleMap};

/// One cell: a free generator at `object` in `degree` whose differential is
/// `Σ gen_c'·u` over the attachments `(c', u)`, each `c'` an earlier cell and
/// `u` in `hom(object, object_c')` of degree `degree + 1 - degree_c'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub object: usize,
    pub degree: i32,
    pub attach: Vec<(usize, Element)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPresentation {
    pub base: Arc<DgCategory>,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CellError {
    #[error("cell {0} sits at an unknown object")]
    UnknownObject(usize),
    #[error("cell {cell} attaches to cell {to}, which is not earlier")]
    NotEarlier { cell: usize, to: usize },
    #[error("cell {cell} attaches to cell {to} in degree {found}, expected {expected}")]
    Degree { cell: usize, to: usize, expected: i32, found: i32 },
    #[error("cell {cell} attaches to cell {to} with {found} coordinates, expected {expected}")]
    Length { cell: usize, to: usize, expected: usize, found: usize },
    #[error("attaching map of cell {0} is not a cycle")]
    NotACycle(usize),
    #[error("image of cell {cell} has degree {found_degree} and {found_len} coordinates, expected {expected_degree} and {expected_len}")]
    Image { cell: usize, expected_degree: i32, expected_len: usize, found_degree: i32, found_len: usize },
    #[error("{0} images given for {1} cells")]
    ImageCount(usize, usize),
    #[error("element has degree {found_degree} and {found_len} coordinates, expected {expected_len} coordinates")]
    Element { found_degree: i32, found_len: usize, expected_len: usize },
}

impl CellPresentation {
    pub fn new(base: Arc<DgCategory>, cells: Vec<Cell>) -> Self {
        CellPresentation { base, cells }
    }

    /// The twisted complex `⊕ x_c[-n_c]` with `q` given by the attachments.
    pub fn twisted(&self) -> Result<TwistedComplex, CellError> {
        let t = &self.base;
        let mut q = Entries::new();
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.object >= t.len() {
                return Err(CellError::UnknownObject(c));
            }
            for (to, u) in &cell.attach {
                let to = *to;
                if to >= c {
                    return Err(CellError::NotEarlier { cell: c, to });
                }
                let expected = cell.degree + 1 - self.cells[to].degree;
                if u.degree != expected {
                    return Err(CellError::Degree { cell: c, to, expected, found: u.degree });
                }
                let len = t.hom(cell.object, self.cells[to].object).dim(expected);
                if u.coords.len() != len {
                    return Err(CellError::Length { cell: c, to, expected: len, found: u.coords.len() });
                }
                crate::pretr::accumulate(&mut q, (to, c), u.clone());
            }
        }
        let summands = self.cells.iter().map(|c| (c.object, -c.degree)).collect();
        TwistedComplex::new(t.clone(), summands, q, false).map_err(|e| match e {
            TwistedError::MaurerCartan { from, .. } => CellError::NotACycle(from),
            other => unreachable!("cell data checked before: {other}"),
        })
    }

    /// Coordinates offset of cell `c` in `|C|(b)^k`, and the block size.
    fn slot(&self, b: usize, k: i32, c: usize) -> (usize, usize) {
        let mut off = 0;
        for cell in &self.cells[..c] {
            off += self.base.hom(b, cell.object).dim(k - cell.degree);
        }
        (off, self.base.hom(b, self.cells[c].object).dim(k - self.cells[c].degree))
    }

    /// The generator of cell `c` as an element of `|C|(x_c)^(n_c)`.
    pub fn generator(&self, c: usize) -> Element {
        let cell = &self.cells[c];
        let (x, n) = (cell.object, cell.degree);
        let total: usize = self.cells.iter().map(|d| self.base.hom(x, d.object).dim(n - d.degree)).sum();
        let (off, _) = self.slot(x, n, c);
        let mut v = vec![crate::field::Scalar::zero(); total];
        for (i, s) in self.base.unit(x).iter().enumerate() {
            v[off + i] = s.clone();
        }
        Element::new(n, v)
    }
}

/// The semi-free module of a presentation.
pub fn realize_cell(p: &CellPresentation) -> Result<DgModule, CellError> {
    Ok(alpha(&p.twisted()?))
}

/// `u ↦ m·u` from `hom(-, x)` to `n`, of degree `|m|`.
pub fn yoneda_map(t: &Arc<DgCategory>, x: usize, n: Arc<DgModule>, m: &Element) -> Result<ModuleMap, CellError> {
    let expected_len = n.value(x).dim(m.degree);
    if m.coords.len() != expected_len {
        return Err(CellError::Element { found_degree: m.degree, found_len: m.coords.len(), expected_len });
    }
    let rep = Arc::new(representable(t.clone(), x));
    let comps = (0..t.len())
        .map(|b| {
            t.hom(b, x)
                .space()
                .iter()
                .map(|(k, d)| {
                    let cols: Vec<Vector> =
                        (0..d).map(|i| n.act(b, x, m, &t.basis_element(b, x, k, i)).coords).collect();
                    (k, Matrix::from_columns(n.value(b).dim(k + m.degree), &cols))
                })
                .collect()
        })
        .collect();
    Ok(ModuleMap::new(rep, n, m.degree, comps).expect("Yoneda map shapes"))
}

/// `gen_c·u ↦ m_c·u` from `|C|` to `n`, with `m_c` in `n(x_c)^(n_c)`.
pub fn cell_map(p: &CellPresentation, n: Arc<DgModule>, images: &[Element]) -> Result<ModuleMap, CellError> {
    if images.len() != p.cells.len() {
        return Err(CellError::ImageCount(images.len(), p.cells.len()));
    }
    for (c, (cell, m)) in p.cells.iter().zip(images).enumerate() {
        let len = n.value(cell.object).dim(cell.degree);
        if m.degree != cell.degree || m.coords.len() != len {
            return Err(CellError::Image {
                cell: c,
                expected_degree: cell.degree,
                expected_len: len,
                found_degree: m.degree,
                found_len: m.coords.len(),
            });
        }
    }
    let source = Arc::new(realize_cell(p)?);
    let t = &p.base;
    let comps = (0..t.len())
        .map(|b| {
            source
                .value(b)
                .space()
                .iter()
                .map(|(k, dim)| {
                    let mut cols = vec![vec![crate::field::Scalar::zero(); n.value(b).dim(k)]; dim];
                    for (c, cell) in p.cells.iter().enumerate() {
                        let (off, len) = p.slot(b, k, c);
                        for i in 0..len {
                            let u = t.basis_element(b, cell.object, k - cell.degree, i);
                            cols[off + i] = n.act(b, cell.object, &images[c], &u).coords;
                        }
                    }
                    (k, Matrix::from_columns(n.value(b).dim(k), &cols))
                })
                .collect()
        })
        .collect();
    Ok(ModuleMap::new(source, n, 0, comps).expect("cell map shapes"))
}

/// `M` as a homotopy retract of `|C|`: `r∘i - id = D h`.
#[derive(Debug, Clone)]
pub struct RetractCertificate {
    pub module: Arc<DgModule>,
    pub presentation: CellPresentation,
    pub i: ModuleMap,
    pub r: ModuleMap,
    pub h: ModuleMap,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RetractFailure {
    #[error("map {0} has the wrong source, target or degree")]
    Shape(&'static str),
    #[error("map {0} is not closed")]
    NotClosed(&'static str),
    #[error("map {map} is not natural at {x}<-{y} degrees ({p},{q}) basis ({a},{b})")]
    NotNatural { map: &'static str, x: String, y: String, p: i32, q: i32, a: usize, b: usize },
    #[error("r∘i - id ≠ dh + hd at object {object} degree {degree}")]
    Homotopy { object: String, degree: i32 },
    #[error(transparent)]
    Cell(#[from] CellError),
}

fn same(a: &Arc<DgModule>, b: &Arc<DgModule>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub fn verify_retract(cert: &RetractCertificate) -> Result<(), RetractFailure> {
    let m = &cert.module;
    let c = Arc::new(realize_cell(&cert.presentation)?);
    let (i, r, h) = (&cert.i, &cert.r, &cert.h);
    if !same(i.source(), m) || !same(i.target(), &c) || i.degree() != 0 {
        return Err(RetractFailure::Shape("i"));
    }
    if !same(r.source(), &c) || !same(r.target(), m) || r.degree() != 0 {
        return Err(RetractFailure::Shape("r"));
    }
    if !same(h.source(), m) || !same(h.target(), m) || h.degree() != -1 {
        return Err(RetractFailure::Shape("h"));
    }
    let t = m.base();
    for (name, f) in [("i", i), ("r", r), ("h", h)] {
        if let Some((x, y, p, q, a, b)) = f.naturality_defect() {
            return Err(RetractFailure::NotNatural { map: name, x: t.name(x).into(), y: t.name(y).into(), p, q, a, b });
        }
    }
    if !i.is_closed() {
        return Err(RetractFailure::NotClosed("i"));
    }
    if !r.is_closed() {
        return Err(RetractFailure::NotClosed("r"));
    }
    let lhs = r.compose(i).expect("checked endpoints").sub(&ModuleMap::identity(m.clone()));
    let rhs = h.d();
    for x in 0..t.len() {
        for k in m.value(x).support() {
            if lhs.component(x, k) != rhs.component(x, k) {
                return Err(RetractFailure::Homotopy { object: t.name(x).into(), degree: k });
            }
        }
    }
    Ok(())
}

/// Certificate that the representable at `object` of the target is a
/// homotopy retract of a cell module on objects in the image of the functor.
/// `i` lies in `|C|(object)^0`, `r[c]` in `hom(x_c, object)^(n_c)` and `h` in
/// `hom(object, object)^(-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectCertificate {
    pub object: usize,
    pub presentation: CellPresentation,
    pub i: Element,
    pub r: Vec<Element>,
    pub h: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaCertificate {
    pub functor: DgFunctor,
    pub objects: Vec<ObjectCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoritaFailure {
    #[error("no certificate for this object")]
    Missing,
    #[error("more than one certificate for this object")]
    Duplicate,
    #[error("presentation is over a different category")]
    WrongBase,
    #[error("cell {0} is not at an object in the image of the functor")]
    NotInImage(usize),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Retract(#[from] RetractFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaReport {
    /// `Err` carries the reason the functor is not a DK-embedding.
    pub embedding: Result<(), String>,
    pub objects: Vec<(String, Result<(), MoritaFailure>)>,
}

impl MoritaReport {
    pub fn verdict(&self) -> Verdict {
        if self.embedding.is_ok() && self.objects.iter().all(|(_, r)| r.is_ok()) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(&self) -> &'static str {
        match self.verdict() {
            Verdict::Pass => "certified Morita equivalence",
            _ => "certificate rejected",
        }
    }
}

impl fmt::Display for MoritaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label())?;
        match &self.embedding {
            Ok(()) => writeln!(f, "  functor is a DK-embedding")?,
            Err(e) => writeln!(f, "  functor is not a DK-embedding: {e}")?,
        }
        for (name, r) in &self.objects {
            match r {
                Ok(()) => writeln!(f, "  {name}: retract verified")?,
                Err(e) => writeln!(f, "  {name}: {e}")?,
            }
        }
        Ok(())
    }
}

fn verify_object(functor: &DgFunctor, cert: &ObjectCertificate) -> Result<(), MoritaFailure> {
    let t = functor.target();
    let p = &cert.presentation;
    if &p.base != t {
        return Err(MoritaFailure::WrongBase);
    }
    let image = functor.object_map();
    if let Some(c) = p.cells.iter().position(|c| !image.contains(&c.object)) {
        return Err(MoritaFailure::NotInImage(c));
    }
    let y = cert.object;
    let module = Arc::new(representable(t.clone(), y));
    let cells = Arc::new(realize_cell(p)?);
    let i = yoneda_map(t, y, cells, &cert.i)?;
    if cert.i.degree != 0 {
        return Err(RetractFailure::Shape("i").into());
    }
    let r = cell_map(p, module.clone(), &cert.r)?;
    let h = yoneda_map(t, y, module.clone(), &cert.h)?;
    verify_retract(&RetractCertificate { module, presentation: p.clone(), i, r, h })?;
    Ok(())
}

/// Checks that the functor is a DK-embedding and that every object of its
/// target has a verified retract certificate. No search is involved.
pub fn verify_morita(cert: &MoritaCertificate) -> MoritaReport {
    let f = &cert.functor;
    let embedding = match f.first_non_quasi_iso() {
        Ok(None) => Ok(()),
        Ok(Some((x, y))) => {
            Err(format!("hom map {}->{} is not a quasi-isomorphism", f.source().name(x), f.source().name(y)))
        }
        Err(e) => Err(e.to_string()),
    };
    let t = f.target();
    let mut by_object: BTreeMap<usize, Vec<&ObjectCertificate>> = BTreeMap::new();
    for c in &cert.objects {
        by_object.entry(c.object).or_default().push(c);
    }
    let objects = (0..t.len())
        .map(|y| {
            let r = match by_object.get(&y).map(Vec::as_slice) {
                None | Some([]) => Err(MoritaFailure::Missing),
                Some([c]) => verify_object(f, c),
                Some(_) => Err(MoritaFailure::Duplicate),
            };
            (t.name(y).to_string(), r)
        })
        .collect();
    MoritaReport { embedding, objects }
}
