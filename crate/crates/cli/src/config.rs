//! Parameter grids for `report-all`.
//!
//! A config is TOML. Top-level `seed` and `tol_scale` set defaults; every other
//! top-level key names a suite and holds a table (or an array of tables). Inside a
//! table each key is a scalar or a list, and the suite runs over the cartesian
//! product of the lists:
//!
//! ```toml
//! seed = 1
//!
//! [[roots]]
//! r = [2, 3]
//! alpha = [-1.0, -2.0]
//! ```
//!
//! `p` is itself a list of numbers, so a grid over `p` is a list of lists.

use toml::{Table, Value};

use crate::family::{FamilyKind, FamilySpec};
use crate::suites::{Suite, SuiteParams};

pub const DEFAULT_CONFIG: &str = include_str!("default.toml");

#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub suite: Suite,
    pub params: SuiteParams,
}

const SECTION_KEYS: [&str; 7] = ["family", "r", "alpha", "p", "nmax", "seed", "tol_scale"];

pub fn parse(text: &str) -> Result<Vec<Run>, String> {
    let table: Table = toml::from_str(text).map_err(|e| format!("config is not valid TOML: {e}"))?;
    let mut seed = 1u64;
    let mut tol_scale = 1.0f64;
    if let Some(v) = table.get("seed") {
        seed = as_count(v, "seed")?;
    }
    if let Some(v) = table.get("tol_scale") {
        tol_scale = as_real(v, "tol_scale")?;
    }
    let mut runs = Vec::new();
    for (key, value) in &table {
        if key == "seed" || key == "tol_scale" {
            continue;
        }
        let suite = Suite::parse(key).ok_or_else(|| format!("unknown suite section [{key}]"))?;
        let sections: Vec<&Table> = match value {
            Value::Table(t) => vec![t],
            Value::Array(items) => items
                .iter()
                .map(|v| v.as_table().ok_or_else(|| format!("[[{key}]] entries must be tables")))
                .collect::<Result<_, _>>()?,
            _ => return Err(format!("suite section {key} must be a table")),
        };
        for section in sections {
            runs.extend(expand(suite, section, seed, tol_scale)?);
        }
    }
    Ok(runs)
}

fn expand(suite: Suite, section: &Table, seed: u64, tol_scale: f64) -> Result<Vec<Run>, String> {
    if let Some(bad) = section.keys().find(|k| !SECTION_KEYS.contains(&k.as_str())) {
        return Err(format!("unknown key {bad} in [{}]", suite.name()));
    }
    let families = match section.get("family") {
        None => vec![suite.default_family()],
        Some(v) => values(v)
            .iter()
            .map(|f| {
                let name = f.as_str().ok_or("family must be a string")?;
                FamilyKind::parse(name).ok_or_else(|| format!("unknown family {name}"))
            })
            .collect::<Result<_, String>>()?,
    };
    let rs = grid(section, "r", 2usize, as_count)?;
    let alphas = grid(section, "alpha", -1.0, as_real)?;
    let ps: Vec<Vec<f64>> = match section.get("p") {
        None => vec![Vec::new()],
        Some(Value::Array(items)) if items.iter().all(Value::is_array) => items
            .iter()
            .map(as_poly)
            .collect::<Result<_, _>>()?,
        Some(p) => vec![as_poly(p)?],
    };
    let nmaxes: Vec<Option<usize>> = match section.get("nmax") {
        None => vec![None],
        Some(v) => values(v)
            .iter()
            .map(|n| as_count(n, "nmax").map(Some))
            .collect::<Result<_, _>>()?,
    };
    let seeds = grid(section, "seed", seed, as_count)?;
    let scales = grid(section, "tol_scale", tol_scale, as_real)?;

    let mut runs = Vec::new();
    for &kind in &families {
        for &r in &rs {
            for &alpha in &alphas {
                for p in &ps {
                    for &nmax in &nmaxes {
                        for &seed in &seeds {
                            for &scale in &scales {
                                let family = FamilySpec::new(kind, r, alpha, p.clone());
                                runs.push(Run {
                                    suite,
                                    params: SuiteParams::new(suite, family, nmax, seed, scale),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(runs)
}

fn values(v: &Value) -> Vec<Value> {
    match v {
        Value::Array(items) => items.clone(),
        scalar => vec![scalar.clone()],
    }
}

fn grid<T>(
    section: &Table,
    key: &str,
    default: T,
    convert: fn(&Value, &str) -> Result<T, String>,
) -> Result<Vec<T>, String> {
    match section.get(key) {
        None => Ok(vec![default]),
        Some(v) => values(v).iter().map(|x| convert(x, key)).collect(),
    }
}

fn as_real(v: &Value, key: &str) -> Result<f64, String> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(format!("{key} must be a number, got {v}")),
    }
}

fn as_count<T: TryFrom<i64>>(v: &Value, key: &str) -> Result<T, String> {
    v.as_integer()
        .and_then(|i| T::try_from(i).ok())
        .ok_or_else(|| format!("{key} must be a non-negative integer, got {v}"))
}

fn as_poly(v: &Value) -> Result<Vec<f64>, String> {
    match v {
        Value::Array(items) => items.iter().map(|x| as_real(x, "p")).collect(),
        _ => Err(format!("p must be a list of numbers, got {v}")),
    }
}
