//! Input loading: inline JSON or file paths, catalog lookups with an
//! optional on-disk override directory, and the error type.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use orbistring_core::bv::{lens_ring, sphere_quotient_ring, GradedPresentation, WindowAlgebra};
use orbistring_core::cocycle::parse_cocycle;
use orbistring_core::error::{BvError, ChordError, CocycleError, GChordError, GroupError, SectorError};
use orbistring_core::group::{group_from_value, GroupDoc};
use orbistring_core::{catalog, dw_frobenius, Element, FiniteGroup, TwoCocycle};
use serde_json::{json, Value};

/// Directory searched before the built-in catalog: `groups/<name>.json`
/// and `cocycles/<group>/<name>.json`.
pub const CATALOG_ENV: &str = "ORBISTRING_CATALOG";

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub slot: Option<usize>,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into(), slot: None }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind, "message": self.message });
        if let Some(s) = self.slot {
            v["slot"] = json!(s);
        }
        v
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

macro_rules! from_error {
    ($t:ty, $kind:literal) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new($kind, e.to_string())
            }
        }
    };
}

from_error!(GroupError, "group");
from_error!(CocycleError, "cocycle");
from_error!(SectorError, "sector");
from_error!(ChordError, "chord");
from_error!(BvError, "bv");
from_error!(serde_json::Error, "json");

impl From<GChordError> for CliError {
    fn from(e: GChordError) -> Self {
        let slot = match &e {
            GChordError::HolonomyMismatch { slot, .. } => Some(*slot),
            _ => None,
        };
        CliError { kind: "gchord", message: e.to_string(), slot }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Inline JSON when the argument looks like JSON, otherwise a file path.
pub fn read_input(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::new("io", format!("cannot read {arg}: {e}")))
}

fn catalog_file(parts: &[&str]) -> Option<PathBuf> {
    let dir = std::env::var_os(CATALOG_ENV)?;
    let mut p = PathBuf::from(dir);
    for x in parts {
        p.push(x);
    }
    p.set_extension("json");
    p.is_file().then_some(p)
}

/// A group by catalog name, override-directory name, file or inline JSON.
pub fn group_by_name(name: &str) -> std::result::Result<FiniteGroup, GroupError> {
    if let Some(path) = catalog_file(&["groups", name]) {
        let text = std::fs::read_to_string(&path).map_err(|e| GroupError::UnknownGroup(format!("{}: {e}", path.display())))?;
        let doc: GroupDoc = serde_json::from_str(&text)?;
        return doc.build();
    }
    catalog::group(name)
}

pub fn resolve_group_value(v: &Value) -> std::result::Result<FiniteGroup, GroupError> {
    group_from_value(v, &group_by_name)
}

pub fn load_group(arg: &str) -> Result<Arc<FiniteGroup>> {
    let t = arg.trim_start();
    let g = if t.starts_with('{') || std::path::Path::new(arg).is_file() {
        let v: Value = serde_json::from_str(&read_input(arg)?)?;
        resolve_group_value(&v)?
    } else {
        group_by_name(arg)?
    };
    Ok(Arc::new(g))
}

pub fn load_cocycle(group: &Arc<FiniteGroup>, arg: &str) -> Result<TwoCocycle> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || std::path::Path::new(arg).is_file() {
        Some(read_input(arg)?)
    } else if let Some(path) = catalog_file(&["cocycles", group.name(), arg]) {
        Some(std::fs::read_to_string(&path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?)
    } else {
        None
    };
    match text {
        None => Ok(catalog::cocycle(group, arg)?),
        Some(text) => {
            let alpha = parse_cocycle(&text, &group_by_name)?;
            if alpha.group().name() != group.name() || alpha.group().order() != group.order() {
                return Err(CocycleError::WrongGroup { expected: group.name().into(), found: alpha.group().name().into() }.into());
            }
            // rebuild over the caller's group so element indices agree
            Ok(TwoCocycle::new(group.clone(), &alpha.table())?)
        }
    }
}

pub fn element(group: &FiniteGroup, label: &str) -> Result<Element> {
    if let Some(e) = group.find_label(label) {
        return Ok(e);
    }
    match label.parse::<usize>() {
        Ok(i) if i < group.order() => Ok(i),
        _ => Err(CliError::new("group", format!("no element {label:?} in {}", group.name()))),
    }
}

/// `"a,b"` with integer parts; negative values allowed.
pub fn int_pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated integers, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Which graded ring a `ring`/`bvcheck` invocation refers to.
pub enum RingChoice {
    Lens(i64, u32),
    Sphere(u32),
    Center(Arc<FiniteGroup>),
}

impl RingChoice {
    pub fn presentation(&self) -> Result<Option<GradedPresentation>> {
        Ok(match self {
            RingChoice::Lens(n, p) => Some(lens_ring(*n, *p)?),
            RingChoice::Sphere(p) => Some(sphere_quotient_ring(*p)?),
            RingChoice::Center(_) => None,
        })
    }

    /// Default windows reach one period of `u` (or `v`) above degree 0.
    pub fn default_window(&self) -> (i64, i64) {
        match self {
            RingChoice::Lens(n, _) => (-n, 2 * (n - 1)),
            RingChoice::Sphere(_) => (-2, 4),
            RingChoice::Center(_) => (0, 0),
        }
    }

    pub fn algebra(&self, window: Option<(i64, i64)>) -> Result<(Option<GradedPresentation>, WindowAlgebra)> {
        let (lo, hi) = window.unwrap_or_else(|| self.default_window());
        let p = self.presentation()?;
        let alg = match (&p, self) {
            (Some(p), _) => WindowAlgebra::from_presentation(p, lo, hi)?,
            (None, RingChoice::Center(g)) => WindowAlgebra::from_sector_ring(&format!("Z(Q[{}])", g.name()), &dw_frobenius(g))?,
            (None, _) => unreachable!("presentations cover lens and sphere rings"),
        };
        Ok((p, alg))
    }
}
