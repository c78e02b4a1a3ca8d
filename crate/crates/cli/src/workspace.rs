//! Named store of everything loaded from input files.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use dgkit::dgcat::{DgCategory, DgFunctor};
use dgkit::dgmod::{CellPresentation, DgModule, MoritaCertificate, RetractCertificate};
use dgkit::format::{self, FormatError, WorkspaceData};
use dgkit::pretr::{TwistedComplex, TwistedHom};

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{kind} {name:?} is defined more than once")]
    Duplicate { kind: &'static str, name: String },
    #[error("{location}: unresolved {kind} {name:?}")]
    Unresolved { kind: &'static str, name: String, location: String },
    #[error("no {0} in the inputs")]
    Missing(&'static str),
    #[error("several {kind}s in the inputs ({names}); choose one by name")]
    Ambiguous { kind: &'static str, names: String },
    #[error(transparent)]
    Format(#[from] FormatError),
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub data: WorkspaceData,
    pub categories: BTreeMap<String, Arc<DgCategory>>,
    pub functors: BTreeMap<String, DgFunctor>,
    pub twisted: BTreeMap<String, TwistedComplex>,
    pub morphisms: BTreeMap<String, TwistedHom>,
    pub modules: BTreeMap<String, Arc<DgModule>>,
    pub presentations: BTreeMap<String, CellPresentation>,
    pub retracts: BTreeMap<String, RetractCertificate>,
    pub morita: BTreeMap<String, MoritaCertificate>,
}

fn merge<V>(
    kind: &'static str,
    into: &mut BTreeMap<String, V>,
    from: BTreeMap<String, V>,
) -> Result<(), WorkspaceError> {
    for (name, v) in from {
        if into.contains_key(&name) {
            return Err(WorkspaceError::Duplicate { kind, name });
        }
        into.insert(name, v);
    }
    Ok(())
}

fn resolve<'a, V>(
    kind: &'static str,
    map: &'a BTreeMap<String, V>,
    name: &str,
    location: String,
) -> Result<&'a V, WorkspaceError> {
    map.get(name).ok_or_else(|| WorkspaceError::Unresolved { kind, name: name.into(), location })
}

/// The entity called `name`, or the only one of its kind.
pub fn pick<'a, V>(
    kind: &'static str,
    map: &'a BTreeMap<String, V>,
    name: Option<&str>,
) -> Result<(&'a str, &'a V), WorkspaceError> {
    match name {
        Some(n) => map.get_key_value(n).map(|(k, v)| (k.as_str(), v)).ok_or_else(|| WorkspaceError::Unresolved {
            kind,
            name: n.into(),
            location: "command line".into(),
        }),
        None => match map.len() {
            0 => Err(WorkspaceError::Missing(kind)),
            1 => map.iter().next().map(|(k, v)| (k.as_str(), v)).ok_or(WorkspaceError::Missing(kind)),
            _ => Err(WorkspaceError::Ambiguous { kind, names: map.keys().cloned().collect::<Vec<_>>().join(", ") }),
        },
    }
}

impl Workspace {
    pub fn load(paths: &[impl AsRef<Path>]) -> Result<Self, WorkspaceError> {
        let mut data = WorkspaceData::default();
        for p in paths {
            let path = p.as_ref().display().to_string();
            let text = std::fs::read_to_string(p)
                .map_err(|e| WorkspaceError::Io { path: path.clone(), message: e.to_string() })?;
            let file = format::parse_workspace(&text).map_err(|e| WorkspaceError::Parse {
                path: path.clone(),
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            merge("category", &mut data.categories, file.categories)?;
            merge("functor", &mut data.functors, file.functors)?;
            merge("twisted complex", &mut data.twisted, file.twisted)?;
            merge("morphism", &mut data.morphisms, file.morphisms)?;
            merge("module", &mut data.modules, file.modules)?;
            merge("presentation", &mut data.presentations, file.presentations)?;
            merge("retract", &mut data.retracts, file.retracts)?;
            merge("morita certificate", &mut data.morita, file.morita)?;
        }
        Self::from_data(data)
    }

    pub fn from_data(data: WorkspaceData) -> Result<Self, WorkspaceError> {
        let mut ws = Workspace::default();
        for (name, c) in &data.categories {
            ws.categories.insert(name.clone(), Arc::new(format::category_from_data(&format!("categories.{name}"), c)?));
        }
        for (name, f) in &data.functors {
            let loc = format!("functors.{name}");
            let s = resolve("category", &ws.categories, &f.source, format!("{loc}.source"))?.clone();
            let t = resolve("category", &ws.categories, &f.target, format!("{loc}.target"))?.clone();
            ws.functors.insert(name.clone(), format::functor_from_data(&loc, f, s, t)?);
        }
        for (name, k) in &data.twisted {
            let loc = format!("twisted.{name}");
            let base = resolve("category", &ws.categories, &k.base, format!("{loc}.base"))?.clone();
            ws.twisted.insert(name.clone(), format::twisted_from_data(&loc, k, base)?);
        }
        for (name, m) in &data.morphisms {
            let loc = format!("morphisms.{name}");
            let s = resolve("twisted complex", &ws.twisted, &m.source, format!("{loc}.source"))?.clone();
            let t = resolve("twisted complex", &ws.twisted, &m.target, format!("{loc}.target"))?.clone();
            ws.morphisms.insert(name.clone(), format::morphism_from_data(&loc, m, s, t)?);
        }
        for (name, m) in &data.modules {
            let loc = format!("modules.{name}");
            let base = resolve("category", &ws.categories, &m.base, format!("{loc}.base"))?.clone();
            ws.modules.insert(name.clone(), Arc::new(format::module_from_data(&loc, m, base)?));
        }
        for (name, p) in &data.presentations {
            let loc = format!("presentations.{name}");
            let base = resolve("category", &ws.categories, &p.base, format!("{loc}.base"))?.clone();
            ws.presentations.insert(name.clone(), format::presentation_from_data(&loc, p, base)?);
        }
        for (name, r) in &data.retracts {
            let loc = format!("retracts.{name}");
            let m = resolve("module", &ws.modules, &r.module, format!("{loc}.module"))?.clone();
            let base_name = &data.modules[&r.module].base;
            if &r.presentation.base != base_name {
                return Err(WorkspaceError::Unresolved {
                    kind: "category",
                    name: r.presentation.base.clone(),
                    location: format!("{loc}.presentation.base (module is over {base_name:?})"),
                });
            }
            ws.retracts.insert(name.clone(), format::retract_from_data(&loc, r, m)?);
        }
        for (name, c) in &data.morita {
            let loc = format!("morita.{name}");
            let f = resolve("functor", &ws.functors, &c.functor, format!("{loc}.functor"))?.clone();
            let target = &data.functors[&c.functor].target;
            for (k, o) in c.objects.iter().enumerate() {
                if &o.presentation.base != target {
                    return Err(WorkspaceError::Unresolved {
                        kind: "category",
                        name: o.presentation.base.clone(),
                        location: format!("{loc}.objects.{k}.presentation.base (functor target is {target:?})"),
                    });
                }
            }
            ws.morita.insert(name.clone(), format::morita_from_data(&loc, c, f)?);
        }
        ws.data = data;
        Ok(ws)
    }

    /// Name of a loaded category, found by identity.
    pub fn category_name(&self, t: &Arc<DgCategory>) -> Option<&str> {
        self.categories.iter().find(|(_, c)| Arc::ptr_eq(c, t) || c == &t).map(|(n, _)| n.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dgkit::dgcat::{delta1, unit_category};

    fn data() -> WorkspaceData {
        let mut d = WorkspaceData::default();
        d.categories.insert("k".into(), format::category_to_data(&unit_category()));
        d.categories.insert("delta1".into(), format::category_to_data(&delta1()));
        d
    }

    #[test]
    fn pick_by_name_or_uniqueness() {
        let ws = Workspace::from_data(data()).unwrap();
        assert_eq!(pick("category", &ws.categories, Some("k")).unwrap().0, "k");
        assert!(matches!(pick("category", &ws.categories, None), Err(WorkspaceError::Ambiguous { .. })));
        assert!(matches!(pick("functor", &ws.functors, None), Err(WorkspaceError::Missing("functor"))));
        let only: BTreeMap<String, u8> = BTreeMap::from([("a".into(), 1)]);
        assert_eq!(pick("x", &only, None).unwrap(), ("a", &1));
    }

    #[test]
    fn dangling_base_is_located() {
        let mut d = data();
        d.twisted.insert(
            "t".into(),
            format::TwistedData { base: "nope".into(), summands: vec![], q: BTreeMap::new(), general: false },
        );
        let e = Workspace::from_data(d).unwrap_err();
        assert_eq!(e.to_string(), "twisted.t.base: unresolved category \"nope\"");
    }

    #[test]
    fn category_names_are_found_by_identity() {
        let ws = Workspace::from_data(data()).unwrap();
        let t = ws.categories["delta1"].clone();
        assert_eq!(ws.category_name(&t), Some("delta1"));
    }
}
