//! Canonical JSON text format.
//!
//! Objects and entities are referenced by name. Scalars are strings
//! `"num/den"`, matrices are dense row lists whose shape comes from the
//! surrounding data, and every map is emitted with sorted keys.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::CochainComplex;
use crate::dgcat::{CategoryParts, CompBlock, DgCategory, DgFunctor, Element};
use crate::dgmod::ModuleMap;
use crate::dgmod::{
    ActionBlocks, Cell, CellPresentation, DgModule, MoritaCertificate, ObjectCertificate, RetractCertificate,
};
use crate::field::{Matrix, Scalar};
use crate::pretr::{Entries, TwistedComplex, TwistedHom};

/// A schema or consistency error, located by a dotted path.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct FormatError {
    pub location: String,
    pub message: String,
}

fn err(location: &str, message: impl Display) -> FormatError {
    FormatError { location: location.to_string(), message: message.to_string() }
}

type Rows = Vec<Vec<Scalar>>;
type Entry = (usize, usize, usize, Scalar);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexData {
    pub dims: BTreeMap<i32, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub d: BTreeMap<i32, Rows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryData {
    pub objects: Vec<String>,
    /// `"x|y"` to the hom complex; absent pairs are zero.
    #[serde(default)]
    pub homs: BTreeMap<String, ComplexData>,
    /// `"x|y|z"` to blocks `"p,q"` of entries `[a, b, c, s]`: the `a`-th basis
    /// vector of `hom(y,z)^p` composed with the `b`-th of `hom(x,y)^q` has
    /// `s` as its `c`-th coordinate.
    #[serde(default)]
    pub comp: BTreeMap<String, BTreeMap<String, Vec<Entry>>>,
    pub units: BTreeMap<String, Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementData {
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorData {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    /// `"x|y"` to degreewise matrices `hom(x,y)^n -> hom(Fx,Fy)^n`.
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<i32, Rows>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedData {
    pub base: String,
    /// `[object, shift]` pairs.
    pub summands: Vec<(String, i32)>,
    /// `"i->j"` is the component from summand `i` to summand `j`.
    #[serde(default)]
    pub q: BTreeMap<String, ElementData>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub general: bool,
}

/// A morphism between named twisted complexes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismData {
    pub source: String,
    pub target: String,
    pub degree: i32,
    /// `"i->j"` is the component from source summand `i` to target summand `j`.
    #[serde(default)]
    pub entries: BTreeMap<String, ElementData>,
}

/// A morphism carrying its source and target, as emitted in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineMorphismData {
    pub source: TwistedData,
    pub target: TwistedData,
    pub degree: i32,
    #[serde(default)]
    pub entries: BTreeMap<String, ElementData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleData {
    pub base: String,
    /// Object name to `M(x)`; absent objects are zero.
    #[serde(default)]
    pub values: BTreeMap<String, ComplexData>,
    /// `"x|y"` to blocks `"p,q"` of entries `[a, b, c, s]`: the `a`-th basis
    /// vector of `M(y)^p` acted on by the `b`-th of `hom(x,y)^q`.
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, Vec<Entry>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleMapData {
    pub degree: i32,
    /// Object name to matrices `M(x)^n -> N(x)^(n+degree)` keyed by `n`.
    #[serde(default)]
    pub components: BTreeMap<String, BTreeMap<i32, Rows>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellData {
    pub object: String,
    pub degree: i32,
    /// `[earlier cell, attaching element]`.
    #[serde(default)]
    pub attach: Vec<(usize, ElementData)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationData {
    pub base: String,
    pub cells: Vec<CellData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetractData {
    pub module: String,
    pub presentation: PresentationData,
    pub i: ModuleMapData,
    pub r: ModuleMapData,
    pub h: ModuleMapData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectCertificateData {
    pub object: String,
    pub presentation: PresentationData,
    pub i: ElementData,
    pub r: Vec<ElementData>,
    pub h: ElementData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoritaData {
    pub functor: String,
    pub objects: Vec<ObjectCertificateData>,
}

/// The contents of one file: named entities of every kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceData {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, CategoryData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twisted: BTreeMap<String, TwistedData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub presentations: BTreeMap<String, PresentationData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub retracts: BTreeMap<String, RetractData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morita: BTreeMap<String, MoritaData>,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_workspace(text: &str) -> Result<WorkspaceData, serde_json::Error> {
    serde_json::from_str(text)
}

// ---- matrices and complexes

fn matrix_to_rows(m: &Matrix) -> Rows {
    m.to_dense()
}

fn matrix_from_rows(loc: &str, rows: &Rows, r: usize, c: usize) -> Result<Matrix, FormatError> {
    if rows.len() != r {
        return Err(err(loc, format!("expected {r} rows, found {}", rows.len())));
    }
    if let Some(i) = rows.iter().position(|row| row.len() != c) {
        return Err(err(loc, format!("row {i} has {} entries, expected {c}", rows[i].len())));
    }
    Ok(Matrix::from_rows(rows.clone(), c))
}

pub fn complex_to_data(c: &CochainComplex) -> ComplexData {
    ComplexData {
        dims: c.space().iter().filter(|&(_, d)| d > 0).collect(),
        d: c.differentials().filter(|(_, m)| !m.is_zero()).map(|(n, m)| (n, matrix_to_rows(m))).collect(),
    }
}

pub fn complex_from_data(loc: &str, data: &ComplexData) -> Result<CochainComplex, FormatError> {
    let dim = |n: i32| data.dims.get(&n).copied().unwrap_or(0);
    let mut diffs = Vec::new();
    for (&n, rows) in &data.d {
        diffs.push((n, matrix_from_rows(&format!("{loc}.d.{n}"), rows, dim(n + 1), dim(n))?));
    }
    CochainComplex::new(data.dims.clone(), diffs).map_err(|e| err(loc, e))
}

fn split_key<'a>(loc: &str, key: &'a str, sep: &str, parts: usize) -> Result<Vec<&'a str>, FormatError> {
    let v: Vec<&str> = key.split(sep).collect();
    if v.len() != parts {
        return Err(err(loc, format!("malformed key {key:?}")));
    }
    Ok(v)
}

fn degree_pair(loc: &str, key: &str) -> Result<(i32, i32), FormatError> {
    let v = split_key(loc, key, ",", 2)?;
    let p = v[0].trim().parse().map_err(|_| err(loc, format!("malformed degree key {key:?}")))?;
    let q = v[1].trim().parse().map_err(|_| err(loc, format!("malformed degree key {key:?}")))?;
    Ok((p, q))
}

fn arrow_key(loc: &str, key: &str) -> Result<(usize, usize), FormatError> {
    let v = split_key(loc, key, "->", 2)?;
    let i = v[0].trim().parse().map_err(|_| err(loc, format!("malformed index key {key:?}")))?;
    let j = v[1].trim().parse().map_err(|_| err(loc, format!("malformed index key {key:?}")))?;
    Ok((i, j))
}

fn object(loc: &str, t: &DgCategory, name: &str) -> Result<usize, FormatError> {
    t.index_of(name).ok_or_else(|| err(loc, format!("unknown object {name:?}")))
}

fn blocks_to_data<'a>(blocks: impl Iterator<Item = ((i32, i32), &'a CompBlock)>) -> BTreeMap<String, Vec<Entry>> {
    blocks.map(|((p, q), b)| (format!("{p},{q}"), b.clone())).collect()
}

fn blocks_from_data(
    loc: &str,
    data: &BTreeMap<String, Vec<Entry>>,
) -> Result<BTreeMap<(i32, i32), CompBlock>, FormatError> {
    data.iter().map(|(k, v)| Ok((degree_pair(&format!("{loc}.{k}"), k)?, v.clone()))).collect()
}

// ---- categories

pub fn category_to_data(t: &DgCategory) -> CategoryData {
    let name = |x: usize| t.name(x);
    let mut homs = BTreeMap::new();
    let mut comp = BTreeMap::new();
    let n = t.len();
    for x in 0..n {
        for y in 0..n {
            if !t.hom(x, y).space().is_zero() {
                homs.insert(format!("{}|{}", name(x), name(y)), complex_to_data(t.hom(x, y)));
            }
            for z in 0..n {
                let blocks = blocks_to_data(t.comp_blocks(x, y, z));
                if !blocks.is_empty() {
                    comp.insert(format!("{}|{}|{}", name(x), name(y), name(z)), blocks);
                }
            }
        }
    }
    let units = (0..n).map(|x| (name(x).to_string(), t.unit(x).clone())).collect();
    CategoryData { objects: t.objects().to_vec(), homs, comp, units }
}

/// Parses and checks shapes and that every unit is closed.
pub fn category_from_data(loc: &str, data: &CategoryData) -> Result<DgCategory, FormatError> {
    let idx = |l: &str, name: &str| {
        data.objects.iter().position(|o| o == name).ok_or_else(|| err(l, format!("unknown object {name:?}")))
    };
    let mut homs = BTreeMap::new();
    for (key, c) in &data.homs {
        let l = format!("{loc}.homs.{key}");
        let v = split_key(&l, key, "|", 2)?;
        homs.insert((idx(&l, v[0])?, idx(&l, v[1])?), complex_from_data(&l, c)?);
    }
    let mut comp = BTreeMap::new();
    for (key, blocks) in &data.comp {
        let l = format!("{loc}.comp.{key}");
        let v = split_key(&l, key, "|", 3)?;
        comp.insert((idx(&l, v[0])?, idx(&l, v[1])?, idx(&l, v[2])?), blocks_from_data(&l, blocks)?);
    }
    for name in data.units.keys() {
        idx(&format!("{loc}.units"), name)?;
    }
    let units = data
        .objects
        .iter()
        .map(|o| {
            data.units.get(o).cloned().ok_or_else(|| err(&format!("{loc}.units"), format!("missing unit of {o:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let t = DgCategory::from_parts(CategoryParts { objects: data.objects.clone(), homs, comp, units })
        .map_err(|e| err(loc, e))?;
    for x in 0..t.len() {
        if !t.is_cycle(x, x, &t.unit_element(x)) {
            return Err(err(
                &format!("{loc}.units.{}", t.name(x)),
                crate::dgcat::CategoryError::UnitNotClosed(t.name(x).into()),
            ));
        }
    }
    Ok(t)
}

// ---- elements and functors

pub fn element_to_data(e: &Element) -> ElementData {
    ElementData { degree: e.degree, coords: e.coords.clone() }
}

pub fn element_from_data(e: &ElementData) -> Element {
    Element::new(e.degree, e.coords.clone())
}

/// Checks that `e` fits `hom(x, y)`.
fn element_in(loc: &str, t: &DgCategory, x: usize, y: usize, e: &ElementData) -> Result<Element, FormatError> {
    let expected = t.hom(x, y).dim(e.degree);
    if e.coords.len() != expected {
        return Err(err(
            loc,
            format!(
                "element of {}->{} in degree {} needs {expected} coordinates, found {}",
                t.name(x),
                t.name(y),
                e.degree,
                e.coords.len()
            ),
        ));
    }
    Ok(element_from_data(e))
}

pub fn functor_to_data(f: &DgFunctor, source: &str, target: &str) -> FunctorData {
    let (s, t) = (f.source(), f.target());
    let objects = (0..s.len()).map(|x| (s.name(x).to_string(), t.name(f.object(x)).to_string())).collect();
    let mut maps = BTreeMap::new();
    for (&(x, y), comps) in f.components() {
        let m: BTreeMap<i32, Rows> =
            comps.iter().filter(|(_, m)| !m.is_zero()).map(|(&n, m)| (n, matrix_to_rows(m))).collect();
        if !m.is_empty() {
            maps.insert(format!("{}|{}", s.name(x), s.name(y)), m);
        }
    }
    FunctorData { source: source.into(), target: target.into(), objects, maps }
}

pub fn functor_from_data(
    loc: &str,
    data: &FunctorData,
    source: Arc<DgCategory>,
    target: Arc<DgCategory>,
) -> Result<DgFunctor, FormatError> {
    let mut objects = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let name = source.name(x);
        let img = data
            .objects
            .get(name)
            .ok_or_else(|| err(&format!("{loc}.objects"), format!("object {name:?} has no image")))?;
        objects.push(object(&format!("{loc}.objects.{name}"), &target, img)?);
    }
    for name in data.objects.keys() {
        object(&format!("{loc}.objects"), &source, name)?;
    }
    let mut maps: BTreeMap<(usize, usize), BTreeMap<i32, Matrix>> = BTreeMap::new();
    for (key, comps) in &data.maps {
        let l = format!("{loc}.maps.{key}");
        let v = split_key(&l, key, "|", 2)?;
        let (x, y) = (object(&l, &source, v[0])?, object(&l, &source, v[1])?);
        let mut m = BTreeMap::new();
        for (&n, rows) in comps {
            let shape = (target.hom(objects[x], objects[y]).dim(n), source.hom(x, y).dim(n));
            m.insert(n, matrix_from_rows(&format!("{l}.{n}"), rows, shape.0, shape.1)?);
        }
        maps.insert((x, y), m);
    }
    // absent components are zero
    for x in 0..source.len() {
        for y in 0..source.len() {
            let m = maps.entry((x, y)).or_default();
            for (n, d) in source.hom(x, y).space().iter() {
                m.entry(n).or_insert_with(|| Matrix::zero(target.hom(objects[x], objects[y]).dim(n), d));
            }
        }
    }
    DgFunctor::new(source, target, objects, maps).map_err(|e| err(loc, e))
}

// ---- twisted complexes

fn entries_to_data(entries: &Entries) -> BTreeMap<String, ElementData> {
    entries.iter().map(|(&(t, s), e)| (format!("{s}->{t}"), element_to_data(e))).collect()
}

fn entries_from_data(loc: &str, data: &BTreeMap<String, ElementData>) -> Result<Entries, FormatError> {
    let mut out = Entries::new();
    for (key, e) in data {
        let (s, t) = arrow_key(&format!("{loc}.{key}"), key)?;
        out.insert((t, s), element_from_data(e));
    }
    Ok(out)
}

pub fn twisted_to_data(k: &TwistedComplex, base: &str) -> TwistedData {
    let t = k.base();
    TwistedData {
        base: base.into(),
        summands: k.summands().iter().map(|&(x, r)| (t.name(x).to_string(), r)).collect(),
        q: entries_to_data(k.q()),
        general: k.is_general(),
    }
}

pub fn twisted_from_data(loc: &str, data: &TwistedData, base: Arc<DgCategory>) -> Result<TwistedComplex, FormatError> {
    let summands = data
        .summands
        .iter()
        .map(|(x, r)| Ok((object(&format!("{loc}.summands"), &base, x)?, *r)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    let q = entries_from_data(&format!("{loc}.q"), &data.q)?;
    TwistedComplex::new(base, summands, q, data.general).map_err(|e| err(loc, e))
}

pub fn morphism_to_data(f: &TwistedHom, source: &str, target: &str) -> MorphismData {
    MorphismData {
        source: source.into(),
        target: target.into(),
        degree: f.degree(),
        entries: entries_to_data(f.entries()),
    }
}

pub fn morphism_from_data(
    loc: &str,
    data: &MorphismData,
    source: TwistedComplex,
    target: TwistedComplex,
) -> Result<TwistedHom, FormatError> {
    let entries = entries_from_data(&format!("{loc}.entries"), &data.entries)?;
    TwistedHom::new(source, target, data.degree, entries).map_err(|e| err(loc, e))
}

pub fn inline_morphism_to_data(f: &TwistedHom, base: &str) -> InlineMorphismData {
    InlineMorphismData {
        source: twisted_to_data(f.source(), base),
        target: twisted_to_data(f.target(), base),
        degree: f.degree(),
        entries: entries_to_data(f.entries()),
    }
}

pub fn inline_morphism_from_data(
    loc: &str,
    data: &InlineMorphismData,
    base: Arc<DgCategory>,
) -> Result<TwistedHom, FormatError> {
    let s = twisted_from_data(&format!("{loc}.source"), &data.source, base.clone())?;
    let t = twisted_from_data(&format!("{loc}.target"), &data.target, base)?;
    let entries = entries_from_data(&format!("{loc}.entries"), &data.entries)?;
    TwistedHom::new(s, t, data.degree, entries).map_err(|e| err(loc, e))
}

// ---- modules

pub fn module_to_data(m: &DgModule, base: &str) -> ModuleData {
    let t = m.base();
    let values = (0..t.len())
        .filter(|&x| !m.value(x).space().is_zero())
        .map(|x| (t.name(x).to_string(), complex_to_data(m.value(x))))
        .collect();
    let actions = m
        .actions()
        .iter()
        .filter(|(_, b)| !b.is_empty())
        .map(|(&(x, y), b)| (format!("{}|{}", t.name(x), t.name(y)), blocks_to_data(b.iter().map(|(&k, v)| (k, v)))))
        .collect();
    ModuleData { base: base.into(), values, actions }
}

pub fn module_from_data(loc: &str, data: &ModuleData, base: Arc<DgCategory>) -> Result<DgModule, FormatError> {
    let mut values = vec![CochainComplex::zero(); base.len()];
    for (name, c) in &data.values {
        let l = format!("{loc}.values.{name}");
        values[object(&l, &base, name)?] = complex_from_data(&l, c)?;
    }
    let mut actions: BTreeMap<(usize, usize), ActionBlocks> = BTreeMap::new();
    for (key, blocks) in &data.actions {
        let l = format!("{loc}.actions.{key}");
        let v = split_key(&l, key, "|", 2)?;
        actions.insert((object(&l, &base, v[0])?, object(&l, &base, v[1])?), blocks_from_data(&l, blocks)?);
    }
    DgModule::new(base, values, actions).map_err(|e| err(loc, e))
}

pub fn module_map_to_data(f: &ModuleMap) -> ModuleMapData {
    let t = f.source().base();
    let components = f
        .components()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(x, c)| (t.name(x).to_string(), c.iter().map(|(&n, m)| (n, matrix_to_rows(m))).collect()))
        .collect();
    ModuleMapData { degree: f.degree(), components }
}

pub fn module_map_from_data(
    loc: &str,
    data: &ModuleMapData,
    source: Arc<DgModule>,
    target: Arc<DgModule>,
) -> Result<ModuleMap, FormatError> {
    let t = source.base().clone();
    let mut comps = vec![BTreeMap::new(); t.len()];
    for (name, c) in &data.components {
        let l = format!("{loc}.components.{name}");
        let x = object(&l, &t, name)?;
        for (&n, rows) in c {
            let shape = (target.value(x).dim(n + data.degree), source.value(x).dim(n));
            comps[x].insert(n, matrix_from_rows(&format!("{l}.{n}"), rows, shape.0, shape.1)?);
        }
    }
    ModuleMap::new(source, target, data.degree, comps).map_err(|e| err(loc, e))
}

// ---- cells and certificates

pub fn presentation_to_data(p: &CellPresentation, base: &str) -> PresentationData {
    let cells = p
        .cells
        .iter()
        .map(|c| CellData {
            object: p.base.name(c.object).to_string(),
            degree: c.degree,
            attach: c.attach.iter().map(|(i, e)| (*i, element_to_data(e))).collect(),
        })
        .collect();
    PresentationData { base: base.into(), cells }
}

pub fn presentation_from_data(
    loc: &str,
    data: &PresentationData,
    base: Arc<DgCategory>,
) -> Result<CellPresentation, FormatError> {
    let cells = data
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(Cell {
                object: object(&format!("{loc}.cells.{i}"), &base, &c.object)?,
                degree: c.degree,
                attach: c.attach.iter().map(|(j, e)| (*j, element_from_data(e))).collect(),
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let p = CellPresentation::new(base, cells);
    p.twisted().map_err(|e| err(loc, e))?;
    Ok(p)
}

pub fn retract_to_data(c: &RetractCertificate, module: &str, base: &str) -> RetractData {
    RetractData {
        module: module.into(),
        presentation: presentation_to_data(&c.presentation, base),
        i: module_map_to_data(&c.i),
        r: module_map_to_data(&c.r),
        h: module_map_to_data(&c.h),
    }
}

pub fn retract_from_data(
    loc: &str,
    data: &RetractData,
    module: Arc<DgModule>,
) -> Result<RetractCertificate, FormatError> {
    let base = module.base().clone();
    let presentation = presentation_from_data(&format!("{loc}.presentation"), &data.presentation, base)?;
    let cells = Arc::new(crate::dgmod::realize_cell(&presentation).map_err(|e| err(loc, e))?);
    let i = module_map_from_data(&format!("{loc}.i"), &data.i, module.clone(), cells.clone())?;
    let r = module_map_from_data(&format!("{loc}.r"), &data.r, cells, module.clone())?;
    let h = module_map_from_data(&format!("{loc}.h"), &data.h, module.clone(), module.clone())?;
    Ok(RetractCertificate { module, presentation, i, r, h })
}

pub fn morita_to_data(c: &MoritaCertificate, functor: &str, target: &str) -> MoritaData {
    let t = c.functor.target();
    let objects = c
        .objects
        .iter()
        .map(|o| ObjectCertificateData {
            object: t.name(o.object).to_string(),
            presentation: presentation_to_data(&o.presentation, target),
            i: element_to_data(&o.i),
            r: o.r.iter().map(element_to_data).collect(),
            h: element_to_data(&o.h),
        })
        .collect();
    MoritaData { functor: functor.into(), objects }
}

pub fn morita_from_data(loc: &str, data: &MoritaData, functor: DgFunctor) -> Result<MoritaCertificate, FormatError> {
    let t = functor.target().clone();
    let objects = data
        .objects
        .iter()
        .enumerate()
        .map(|(k, o)| {
            let l = format!("{loc}.objects.{k}");
            let y = object(&l, &t, &o.object)?;
            let presentation = presentation_from_data(&format!("{l}.presentation"), &o.presentation, t.clone())?;
            let cells = &presentation.cells;
            if o.r.len() != cells.len() {
                return Err(err(&format!("{l}.r"), format!("{} images for {} cells", o.r.len(), cells.len())));
            }
            for (c, (cell, e)) in cells.iter().zip(&o.r).enumerate() {
                element_in(&format!("{l}.r.{c}"), &t, cell.object, y, e)?;
            }
            element_in(&format!("{l}.h"), &t, y, y, &o.h)?;
            Ok(ObjectCertificate {
                object: y,
                presentation,
                i: element_from_data(&o.i),
                r: o.r.iter().map(element_from_data).collect(),
                h: element_from_data(&o.h),
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(MoritaCertificate { functor, objects })
}

#[cfg(test)]
mod tests;
