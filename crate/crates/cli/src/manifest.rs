//! Manifest ingestion: a versioned TOML document with named sections for
//! fields, groups, cocycles, algebras, modules, complexes, perversity data,
//! equivalences and witnesses, cross-referenced by name.
//!
//! Field elements are written as integer coefficient lists, e.g.
//! `"[1,0,1] @ GF(2,3)"`; inside an object whose ambient field is known the
//! `@ GF(p,m)` suffix may be dropped, and a bare integer is the prime-field
//! constant. Matrices are dense row-major lists of elements.

use mfnum::algebra::{Algebra, AlgebraMorphism};
use mfnum::derived::{BoundedComplex, EquivalenceData, PerversityDatum};
use mfnum::field::FieldSpec;
use mfnum::groupalg::{Cocycle2, FiniteGroup};
use mfnum::linalg::Mat;
use mfnum::modrep::ModuleRep;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation of {object} failed: {cause}")]
    Validation { object: String, cause: String },
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("{0}")]
    Core(#[from] mfnum::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation { .. } | CliError::Dangling(_) => 2,
            CliError::Core(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Int(i64),
    Str(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    version: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    fields: BTreeMap<String, RawField>,
    #[serde(default)]
    groups: BTreeMap<String, RawGroup>,
    #[serde(default)]
    cocycles: BTreeMap<String, RawCocycle>,
    #[serde(default)]
    algebras: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    complexes: BTreeMap<String, RawComplex>,
    #[serde(default)]
    data: BTreeMap<String, RawDatum>,
    #[serde(default)]
    equivalences: BTreeMap<String, RawEquivalence>,
    #[serde(default)]
    witnesses: BTreeMap<String, RawWitness>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    p: u64,
    m: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    order: usize,
    table: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCocycle {
    group: String,
    field: String,
    /// `(g, h, value)` triples; omitted pairs default to 1.
    #[serde(default)]
    entries: Vec<(usize, usize, Elem)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    field: String,
    /// Structure-constant presentation:
    dim: Option<usize>,
    unit: Option<Vec<Elem>>,
    constants: Option<Vec<(usize, usize, usize, Elem)>>,
    /// or a (twisted) group algebra:
    group: Option<String>,
    cocycle: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    algebra: String,
    #[serde(default)]
    regular: bool,
    dim: Option<usize>,
    /// One dense row-major `dim x dim` matrix per algebra basis element.
    action: Option<Vec<Vec<Elem>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    algebra: String,
    entries: Vec<RawComplexEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplexEntry {
    degree: i64,
    module: String,
    /// Differential into the next degree, row-major; absent on the top.
    differential: Option<Vec<Elem>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    source: String,
    target: String,
    q: Vec<i64>,
    source_chain: Vec<Vec<usize>>,
    target_chain: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEquivalence {
    source: String,
    target: String,
    images: Option<Vec<String>>,
    #[serde(default)]
    identity: bool,
    shift: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWitness {
    algebra: String,
    t: u32,
    kind: String,
    /// Row-major matrix of the morphism `A^{sigma^t} -> A` (kind "morphism").
    matrix: Option<Vec<Elem>>,
}

/// A witness as declared; `Search` is resolved lazily by the command layer.
pub enum WitnessDecl {
    Resolved(mfnum::morita::SigmaWitness),
    Search { algebra: Arc<Algebra>, t: u32 },
}

pub struct Workspace {
    pub seed: u64,
    pub fields: BTreeMap<String, Arc<FieldSpec>>,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub cocycles: BTreeMap<String, Cocycle2>,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub modules: BTreeMap<String, ModuleRep>,
    pub complexes: BTreeMap<String, BoundedComplex>,
    pub data: BTreeMap<String, PerversityDatum>,
    pub equivalences: BTreeMap<String, EquivalenceData>,
    pub witnesses: BTreeMap<String, (u32, WitnessDecl)>,
}

impl Workspace {
    pub fn algebra(&self, name: &str) -> CliResult<&Arc<Algebra>> {
        self.algebras.get(name).ok_or_else(|| CliError::Dangling(format!("algebra '{name}'")))
    }
    pub fn group(&self, name: &str) -> CliResult<&Arc<FiniteGroup>> {
        self.groups.get(name).ok_or_else(|| CliError::Dangling(format!("group '{name}'")))
    }
    pub fn datum(&self, name: &str) -> CliResult<&PerversityDatum> {
        self.data.get(name).ok_or_else(|| CliError::Dangling(format!("datum '{name}'")))
    }
    pub fn equivalence(&self, name: &str) -> CliResult<&EquivalenceData> {
        self.equivalences
            .get(name)
            .ok_or_else(|| CliError::Dangling(format!("equivalence '{name}'")))
    }
    pub fn witness(&self, name: &str) -> CliResult<&(u32, WitnessDecl)> {
        self.witnesses.get(name).ok_or_else(|| CliError::Dangling(format!("witness '{name}'")))
    }
}

/// Parse one element against an ambient field.
pub fn parse_elem(e: &Elem, ambient: &Arc<FieldSpec>) -> CliResult<u64> {
    match e {
        Elem::Int(v) => {
            let p = ambient.p() as i64;
            let c = v.rem_euclid(p) as u64;
            Ok(c)
        }
        Elem::Str(s) => {
            let s = s.trim();
            let (coeff_part, spec) = match s.split_once('@') {
                None => (s, ambient.clone()),
                Some((lhs, rhs)) => {
                    let rhs = rhs.trim();
                    let inner = rhs
                        .strip_prefix("GF(")
                        .and_then(|x| x.strip_suffix(')'))
                        .ok_or_else(|| CliError::Parse(format!("bad field tag in '{s}'")))?;
                    let (ps, ms) = inner
                        .split_once(',')
                        .ok_or_else(|| CliError::Parse(format!("bad field tag in '{s}'")))?;
                    let p: u64 = ps.trim().parse().map_err(|_| {
                        CliError::Parse(format!("bad characteristic in '{s}'"))
                    })?;
                    let m: u32 = ms
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Parse(format!("bad degree in '{s}'")))?;
                    (lhs.trim(), FieldSpec::get(p, m).map_err(CliError::Core)?)
                }
            };
            let code = if let Some(list) = coeff_part.strip_prefix('[') {
                let list = list
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::Parse(format!("unclosed coefficient list in '{s}'")))?;
                let coeffs: Vec<i64> = if list.trim().is_empty() {
                    Vec::new()
                } else {
                    list.split(',')
                        .map(|c| {
                            c.trim().parse::<i64>().map_err(|_| {
                                CliError::Parse(format!("bad coefficient '{c}' in '{s}'"))
                            })
                        })
                        .collect::<CliResult<_>>()?
                };
                let p = spec.p() as i64;
                let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p) as u64).collect();
                if reduced.len() > spec.m() as usize {
                    return Err(CliError::Parse(format!(
                        "{} coefficients for GF({},{})",
                        reduced.len(),
                        spec.p(),
                        spec.m()
                    )));
                }
                spec.encode(&reduced)
            } else {
                let v: i64 = coeff_part
                    .parse()
                    .map_err(|_| CliError::Parse(format!("bad element '{s}'")))?;
                v.rem_euclid(spec.p() as i64) as u64
            };
            // re-express in the ambient field when tagged with a subfield
            if spec == *ambient {
                Ok(code)
            } else {
                spec.embed(code, ambient).map_err(CliError::Core)
            }
        }
    }
}

/// Render an element in the full grammar.
pub fn render_elem(spec: &Arc<FieldSpec>, code: u64) -> String {
    let coeffs = spec.decode(code);
    let body: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("[{}] @ GF({},{})", body.join(","), spec.p(), spec.m())
}

fn parse_matrix(
    entries: &[Elem],
    rows: usize,
    cols: usize,
    spec: &Arc<FieldSpec>,
    object: &str,
) -> CliResult<Mat> {
    if entries.len() != rows * cols {
        return Err(CliError::Validation {
            object: object.into(),
            cause: format!("matrix needs {} entries, found {}", rows * cols, entries.len()),
        });
    }
    let mut m = Mat::zero(spec.clone(), rows, cols);
    for (idx, e) in entries.iter().enumerate() {
        m.set(idx / cols, idx % cols, parse_elem(e, spec)?);
    }
    Ok(m)
}

fn validation<E: std::fmt::Display>(object: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Validation { object: object.to_string(), cause: e.to_string() }
}

/// Load and resolve a manifest: every object goes through its validating
/// constructor; the first failure aborts with the object's name.
pub fn ingest(text: &str) -> CliResult<Workspace> {
    let raw: RawManifest = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if raw.version != 1 {
        return Err(CliError::Parse(format!("unsupported manifest version {}", raw.version)));
    }
    let mut ws = Workspace {
        seed: raw.seed,
        fields: BTreeMap::new(),
        groups: BTreeMap::new(),
        cocycles: BTreeMap::new(),
        algebras: BTreeMap::new(),
        modules: BTreeMap::new(),
        complexes: BTreeMap::new(),
        data: BTreeMap::new(),
        equivalences: BTreeMap::new(),
        witnesses: BTreeMap::new(),
    };
    for (name, f) in &raw.fields {
        let spec = FieldSpec::get(f.p, f.m).map_err(validation(name))?;
        ws.fields.insert(name.clone(), spec);
    }
    for (name, g) in &raw.groups {
        let grp = FiniteGroup::new(g.order, g.table.clone()).map_err(validation(name))?;
        ws.groups.insert(name.clone(), grp);
    }
    for (name, c) in &raw.cocycles {
        let group = ws
            .groups
            .get(&c.group)
            .ok_or_else(|| CliError::Dangling(format!("group '{}' in cocycle '{name}'", c.group)))?
            .clone();
        let spec = ws
            .fields
            .get(&c.field)
            .ok_or_else(|| CliError::Dangling(format!("field '{}' in cocycle '{name}'", c.field)))?
            .clone();
        let n = group.order();
        let mut values = vec![1u64; n * n];
        for (g, h, e) in &c.entries {
            if *g >= n || *h >= n {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: format!("cocycle entry ({g},{h}) out of range"),
                });
            }
            values[g * n + h] = parse_elem(e, &spec)?;
        }
        let cocycle = Cocycle2::new(group, spec, values).map_err(validation(name))?;
        ws.cocycles.insert(name.clone(), cocycle);
    }
    for (name, a) in &raw.algebras {
        let spec = ws
            .fields
            .get(&a.field)
            .ok_or_else(|| CliError::Dangling(format!("field '{}' in algebra '{name}'", a.field)))?
            .clone();
        let algebra = match (&a.group, &a.constants) {
            (Some(gname), None) => {
                let group = ws.groups.get(gname).ok_or_else(|| {
                    CliError::Dangling(format!("group '{gname}' in algebra '{name}'"))
                })?;
                match &a.cocycle {
                    None => mfnum::groupalg::group_algebra(group, &spec).map_err(validation(name))?,
                    Some(cname) => {
                        let alpha = ws.cocycles.get(cname).ok_or_else(|| {
                            CliError::Dangling(format!("cocycle '{cname}' in algebra '{name}'"))
                        })?;
                        mfnum::groupalg::twisted_group_algebra(group, alpha)
                            .map_err(validation(name))?
                    }
                }
            }
            (None, Some(constants)) => {
                let dim = a.dim.ok_or_else(|| CliError::Validation {
                    object: name.clone(),
                    cause: "constant-presented algebras need a dim".into(),
                })?;
                let unit_spec = a.unit.as_ref().ok_or_else(|| CliError::Validation {
                    object: name.clone(),
                    cause: "constant-presented algebras need a unit vector".into(),
                })?;
                if unit_spec.len() != dim {
                    return Err(CliError::Validation {
                        object: name.clone(),
                        cause: "unit vector length differs from dim".into(),
                    });
                }
                let unit: Vec<u64> = unit_spec
                    .iter()
                    .map(|e| parse_elem(e, &spec))
                    .collect::<CliResult<_>>()?;
                let entries: Vec<(usize, usize, usize, u64)> = constants
                    .iter()
                    .map(|(i, j, k, e)| Ok((*i, *j, *k, parse_elem(e, &spec)?)))
                    .collect::<CliResult<_>>()?;
                Algebra::from_entries(spec, dim, &entries, unit).map_err(validation(name))?
            }
            _ => {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: "give either constants or a group, not both".into(),
                })
            }
        };
        ws.algebras.insert(name.clone(), algebra);
    }
    for (name, m) in &raw.modules {
        let algebra = ws
            .algebras
            .get(&m.algebra)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in module '{name}'", m.algebra)))?
            .clone();
        let module = if m.regular {
            algebra.regular_module()
        } else {
            let dim = m.dim.ok_or_else(|| CliError::Validation {
                object: name.clone(),
                cause: "explicit modules need a dim".into(),
            })?;
            let action = m.action.as_ref().ok_or_else(|| CliError::Validation {
                object: name.clone(),
                cause: "explicit modules need action matrices".into(),
            })?;
            if action.len() != algebra.dim() {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: "one action matrix per algebra basis element required".into(),
                });
            }
            let mats: Vec<Mat> = action
                .iter()
                .map(|rowmajor| parse_matrix(rowmajor, dim, dim, algebra.spec(), name))
                .collect::<CliResult<_>>()?;
            ModuleRep::new(algebra, mats).map_err(validation(name))?
        };
        ws.modules.insert(name.clone(), module);
    }
    for (name, c) in &raw.complexes {
        let algebra = ws
            .algebras
            .get(&c.algebra)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in complex '{name}'", c.algebra)))?
            .clone();
        let mut sorted: Vec<&RawComplexEntry> = c.entries.iter().collect();
        sorted.sort_by_key(|e| e.degree);
        for w in sorted.windows(2) {
            if w[1].degree != w[0].degree + 1 {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: "complex degrees must be consecutive".into(),
                });
            }
        }
        let objects: Vec<ModuleRep> = sorted
            .iter()
            .map(|e| {
                ws.modules
                    .get(&e.module)
                    .cloned()
                    .ok_or_else(|| CliError::Dangling(format!("module '{}' in complex '{name}'", e.module)))
            })
            .collect::<CliResult<_>>()?;
        let mut diffs = Vec::new();
        for (i, e) in sorted.iter().enumerate() {
            if i + 1 < sorted.len() {
                let dmat = e.differential.as_ref().ok_or_else(|| CliError::Validation {
                    object: name.clone(),
                    cause: format!("missing differential out of degree {}", e.degree),
                })?;
                diffs.push(parse_matrix(
                    dmat,
                    objects[i + 1].dim(),
                    objects[i].dim(),
                    algebra.spec(),
                    name,
                )?);
            } else if e.differential.is_some() {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: "top degree must not carry a differential".into(),
                });
            }
        }
        let low = sorted.first().map(|e| e.degree).unwrap_or(0);
        let complex =
            BoundedComplex::new(algebra, low, objects, diffs).map_err(validation(name))?;
        ws.complexes.insert(name.clone(), complex);
    }
    for (name, d) in &raw.data {
        let source = ws
            .algebras
            .get(&d.source)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in datum '{name}'", d.source)))?
            .clone();
        let target = ws
            .algebras
            .get(&d.target)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in datum '{name}'", d.target)))?
            .clone();
        let sc = d.source_chain.iter().map(|s| s.iter().copied().collect()).collect();
        let tc = d.target_chain.iter().map(|s| s.iter().copied().collect()).collect();
        let datum = PerversityDatum::new(source, target, d.q.clone(), sc, tc)
            .map_err(validation(name))?;
        ws.data.insert(name.clone(), datum);
    }
    for (name, e) in &raw.equivalences {
        let source = ws
            .algebras
            .get(&e.source)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in equivalence '{name}'", e.source)))?
            .clone();
        let target = ws
            .algebras
            .get(&e.target)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in equivalence '{name}'", e.target)))?
            .clone();
        let eq = match (&e.images, e.identity, e.shift) {
            (Some(images), false, None) => {
                let complexes: Vec<BoundedComplex> = images
                    .iter()
                    .map(|cn| {
                        ws.complexes.get(cn).cloned().ok_or_else(|| {
                            CliError::Dangling(format!("complex '{cn}' in equivalence '{name}'"))
                        })
                    })
                    .collect::<CliResult<_>>()?;
                EquivalenceData::new(source, target, complexes, None).map_err(validation(name))?
            }
            (None, true, None) => {
                if !source.structural_eq(&target) {
                    return Err(CliError::Validation {
                        object: name.clone(),
                        cause: "identity equivalences need source = target".into(),
                    });
                }
                EquivalenceData::identity(&source).map_err(validation(name))?
            }
            (None, false, Some(t)) => {
                if !source.structural_eq(&target) {
                    return Err(CliError::Validation {
                        object: name.clone(),
                        cause: "shift equivalences need source = target".into(),
                    });
                }
                EquivalenceData::shift_data(&source, t).map_err(validation(name))?
            }
            _ => {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: "give exactly one of images, identity, shift".into(),
                })
            }
        };
        ws.equivalences.insert(name.clone(), eq);
    }
    for (name, w) in &raw.witnesses {
        let algebra = ws
            .algebras
            .get(&w.algebra)
            .ok_or_else(|| CliError::Dangling(format!("algebra '{}' in witness '{name}'", w.algebra)))?
            .clone();
        let decl = match w.kind.as_str() {
            "morphism" => {
                let mat = w.matrix.as_ref().ok_or_else(|| CliError::Validation {
                    object: name.clone(),
                    cause: "morphism witnesses need a matrix".into(),
                })?;
                let m = parse_matrix(mat, algebra.dim(), algebra.dim(), algebra.spec(), name)?;
                let twisted = algebra.frobenius_twist(w.t);
                let psi = AlgebraMorphism::new(twisted, algebra.clone(), m)
                    .map_err(validation(name))?;
                if !psi.is_isomorphism() {
                    return Err(CliError::Validation {
                        object: name.clone(),
                        cause: "witness morphism is not invertible".into(),
                    });
                }
                WitnessDecl::Resolved(mfnum::morita::SigmaWitness::Morphism(psi))
            }
            "identity" => {
                let twisted = algebra.frobenius_twist(w.t);
                if !twisted.structural_eq(&algebra) {
                    return Err(CliError::Validation {
                        object: name.clone(),
                        cause: "identity witness needs a sigma^t-stable table".into(),
                    });
                }
                let psi = AlgebraMorphism::new(
                    twisted,
                    algebra.clone(),
                    Mat::identity(algebra.spec().clone(), algebra.dim()),
                )
                .map_err(validation(name))?;
                WitnessDecl::Resolved(mfnum::morita::SigmaWitness::Morphism(psi))
            }
            "search" => WitnessDecl::Search { algebra: algebra.clone(), t: w.t },
            other => {
                return Err(CliError::Validation {
                    object: name.clone(),
                    cause: format!("unknown witness kind '{other}'"),
                })
            }
        };
        ws.witnesses.insert(name.clone(), (w.t, decl));
    }
    Ok(ws)
}
