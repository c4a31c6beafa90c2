//! JSON instance files.
//!
//! An instance carries the ring, the graded module, the differential and
//! the structure maps `m_2, ..., m_r` (`m_1` is the differential). Basis
//! elements are referenced as `[degree, index within degree]`; for the
//! suspended convention the degrees are those of `sA`. Scalars are strings.

use std::sync::Arc;

use ainfty::ainfty::{ArStructure, Convention};
use ainfty::complexes::{DgModule, GradedModule, MultiMap};
use ainfty::{Matrix, RingSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ring: String,
    pub convention: String,
    pub module: Vec<DegreeDim>,
    #[serde(default)]
    pub differential: Vec<DifferentialBlock>,
    #[serde(default)]
    pub maps: Vec<MapEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeDim {
    pub degree: i64,
    pub dim: usize,
}

/// `d_degree: C_degree -> C_{degree-1}` as rows of the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialBlock {
    pub degree: i64,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub arity: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub out: [i64; 2],
    #[serde(rename = "in")]
    pub inputs: Vec<[i64; 2]>,
    pub c: String,
}

/// A sparse map in a report, on `A`, `sA` or `H(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapWitness {
    pub arity: usize,
    pub degree: i64,
    pub terms: Vec<Term>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    serde_json::from_str(text).map_err(|e| input(format!("malformed instance: {e}")))
}

pub fn module_to_json(m: &GradedModule) -> Vec<DegreeDim> {
    m.dims().filter(|&(_, n)| n > 0).map(|(degree, dim)| DegreeDim { degree, dim }).collect()
}

fn basis_ref(m: &GradedModule, index: usize) -> [i64; 2] {
    let (d, local) = m.local(index);
    [d, local as i64]
}

fn resolve(m: &GradedModule, r: [i64; 2], at: &str) -> Result<usize, CliError> {
    let [deg, local] = r;
    if local < 0 || local as usize >= m.dim(deg) {
        return Err(input(format!("{at}: no basis element [{deg}, {local}]")));
    }
    Ok(m.global(deg, local as usize))
}

pub fn map_to_terms(f: &MultiMap) -> Vec<Term> {
    let m = f.module();
    f.terms()
        .map(|((o, ins), c)| Term {
            out: basis_ref(m, *o),
            inputs: ins.iter().map(|&x| basis_ref(m, x)).collect(),
            c: c.to_string(),
        })
        .collect()
}

pub fn witness(f: &MultiMap) -> MapWitness {
    MapWitness { arity: f.arity(), degree: f.degree(), terms: map_to_terms(f) }
}

pub fn terms_to_map(
    module: &Arc<GradedModule>,
    arity: usize,
    degree: i64,
    terms: &[Term],
    at: &str,
) -> Result<MultiMap, CliError> {
    let ring = module.ring();
    let mut parsed = Vec::with_capacity(terms.len());
    for (t, term) in terms.iter().enumerate() {
        let here = format!("{at}, term {t}");
        if term.inputs.len() != arity {
            return Err(input(format!("{here}: {} inputs for arity {arity}", term.inputs.len())));
        }
        let out = resolve(module, term.out, &here)?;
        let ins = term
            .inputs
            .iter()
            .map(|&r| resolve(module, r, &here))
            .collect::<Result<Vec<_>, _>>()?;
        let c = ring.parse_scalar(&term.c).map_err(|e| input(format!("{here}: {e}")))?;
        parsed.push(((out, ins), c));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (k, _) in &parsed {
        if !seen.insert(k.clone()) {
            return Err(input(format!("{at}: repeated term")));
        }
    }
    MultiMap::from_terms(module.clone(), arity, degree, parsed).map_err(|e| input(format!("{at}: {e}")))
}

pub fn witness_to_map(module: &Arc<GradedModule>, w: &MapWitness) -> Result<MultiMap, CliError> {
    terms_to_map(module, w.arity, w.degree, &w.terms, "witness")
}

/// The ring and dgmodule of an instance; fails on a differential that does
/// not square to zero.
pub fn complex_of(file: &InstanceFile) -> Result<DgModule, CliError> {
    let ring: RingSpec = file.ring.parse().map_err(|e| input(format!("ring: {e}")))?;
    let mut dims: Vec<(i64, usize)> = Vec::new();
    for d in &file.module {
        if dims.iter().any(|&(x, _)| x == d.degree) {
            return Err(input(format!("module: degree {} listed twice", d.degree)));
        }
        dims.push((d.degree, d.dim));
    }
    let module = GradedModule::new(ring, dims);
    let mut blocks = Vec::new();
    for (b, block) in file.differential.iter().enumerate() {
        let at = format!("differential block {b} (degree {})", block.degree);
        let (rows, cols) = (module.dim(block.degree - 1), module.dim(block.degree));
        if block.matrix.len() != rows || block.matrix.iter().any(|r| r.len() != cols) {
            return Err(input(format!("{at}: expected a {rows} x {cols} matrix")));
        }
        let entries = block
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| ring.parse_scalar(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| input(format!("{at}: {e}")))?;
        let m = Matrix::from_rows(ring, entries, cols).map_err(|e| input(format!("{at}: {e}")))?;
        if blocks.iter().any(|(d, _)| *d == block.degree) {
            return Err(input(format!("{at}: listed twice")));
        }
        blocks.push((block.degree, m));
    }
    DgModule::new(module, blocks).map_err(CliError::from)
}

pub fn convention_of(file: &InstanceFile) -> Result<Convention, CliError> {
    file.convention.parse().map_err(|e| input(format!("convention: {e}")))
}

pub fn structure_of(file: &InstanceFile) -> Result<ArStructure, CliError> {
    let complex = complex_of(file)?;
    let convention = convention_of(file)?;
    let carrier = match convention {
        Convention::Suspended => Arc::new(complex.module().suspend()),
        _ => complex.module_arc().clone(),
    };
    let mut higher = Vec::new();
    for (k, entry) in file.maps.iter().enumerate() {
        let i = k + 2;
        let at = format!("maps[{k}]");
        if entry.arity != i {
            return Err(input(format!("{at}: expected arity {i}, found {}", entry.arity)));
        }
        let degree = match convention {
            Convention::Suspended => -1,
            _ => i as i64 - 2,
        };
        higher.push(terms_to_map(&carrier, i, degree, &entry.terms, &at)?);
    }
    ArStructure::from_higher(complex, convention, higher).map_err(|e| input(e.to_string()))
}

/// Canonical instance for a structure: degrees ascending, zero blocks
/// omitted, terms in basis order.
pub fn instance_of(s: &ArStructure) -> InstanceFile {
    let c = s.complex();
    let module = module_to_json(c.module());
    let differential = c
        .blocks()
        .filter(|(_, m)| !m.is_zero())
        .map(|(degree, m)| DifferentialBlock {
            degree,
            matrix: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect(),
        })
        .collect();
    let maps = s.maps()[1..]
        .iter()
        .map(|f| MapEntry { arity: f.arity(), terms: map_to_terms(f) })
        .collect();
    InstanceFile {
        ring: c.ring().to_string(),
        convention: s.convention().name().to_string(),
        module,
        differential,
        maps,
    }
}

/// Pretty JSON with keys sorted. Arrays holding no objects, and short
/// objects of such values, stay on one line.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Object(_) => false,
        serde_json::Value::Array(items) => items.iter().all(is_flat),
        _ => true,
    }
}

/// `{"a": 1, "b": [2, 3]}` on one line.
fn inline(v: &serde_json::Value) -> String {
    let mut out = String::new();
    match v {
        serde_json::Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&serde_json::to_string(key).expect("string key"));
                out.push_str(": ");
                write_value(item, 0, &mut out);
            }
            out.push('}');
        }
        other => write_value(other, 0, &mut out),
    }
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if map.values().all(is_flat) && inline(v).len() <= 96 => out.push_str(&inline(v)),
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("string key"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalar")),
    }
}
