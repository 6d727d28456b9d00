//! JSON readers and writers for every file format the tool speaks:
//! sequences, algebras, wedges, problem sets, derivation traces and results.
//! Output is deterministic: struct field order is fixed and coefficients
//! render as canonical reduced fractions or residues.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    algebra_from_table, exterior_algebra, tensor, truncated_polynomial_algebra, AlgebraError,
    GradedAlgebra,
};
use crate::field::{Field, FieldError, Scalar};
use crate::infer::{DerivationTrace, Envelope, FactSet, Relation};
use crate::realize::{RealizeError, SphereProduct, WedgeOfSphereProducts};
use crate::seq::{SeqEntry, SeqError, SeqValue, Sequence};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("{path}: {message}")]
    At { path: String, message: String },
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
}

fn at(path: impl Into<String>, message: impl Into<String>) -> JsonError {
    JsonError::At { path: path.into(), message: message.into() }
}

/// Deserialize with a JSON-pointer-style path in the error message.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| at(e.path().to_string(), e.inner().to_string()))
}

/// Deserialize an already-parsed value, keeping the path in errors.
pub fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, JsonError> {
    serde_path_to_error::deserialize(value)
        .map_err(|e| at(e.path().to_string(), e.inner().to_string()))
}

// ---------------------------------------------------------------------------
// sequences

/// `[0,3,7,10]`, `[0,4,"inf"]`, or `{"values":[0,3],"unknown_above":14}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceJson {
    Entries(Vec<SeqEntryJson>),
    Capped { values: Vec<u64>, unknown_above: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeqEntryJson {
    Value(u64),
    Word(String),
}

pub fn sequence_from_json(json: &SequenceJson) -> Result<Sequence, JsonError> {
    match json {
        SequenceJson::Entries(entries) => {
            let mut parsed = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                match e {
                    SeqEntryJson::Value(n) => parsed.push(SeqEntry::Finite(*n)),
                    SeqEntryJson::Word(w) if w == "inf" => parsed.push(SeqEntry::Infinite),
                    SeqEntryJson::Word(w) => {
                        return Err(at(format!("[{i}]"), format!("expected a number or \"inf\", got {w:?}")))
                    }
                }
            }
            Ok(Sequence::new(&parsed)?)
        }
        SequenceJson::Capped { values, unknown_above } => {
            Ok(Sequence::from_finite(values.clone())?.with_cap_note(*unknown_above))
        }
    }
}

pub fn sequence_to_json(seq: &Sequence) -> SequenceJson {
    match seq.cap_note() {
        None => SequenceJson::Entries(
            seq.finite_values().iter().map(|&n| SeqEntryJson::Value(n)).collect(),
        ),
        Some(d) => SequenceJson::Capped {
            values: seq.finite_values().to_vec(),
            unknown_above: d,
        },
    }
}

pub fn parse_sequence(text: &str) -> Result<Sequence, JsonError> {
    sequence_from_json(&parse_json(text)?)
}

pub fn render_sequence(seq: &Sequence) -> String {
    serde_json::to_string(&sequence_to_json(seq)).expect("sequence serializes")
}

// ---------------------------------------------------------------------------
// algebras

/// `"Q"` or `{"Fp": p}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Prime { #[serde(rename = "Fp")] p: u64 },
}

pub fn field_from_json(json: &FieldJson) -> Result<Field, JsonError> {
    match json {
        FieldJson::Name(n) if n == "Q" => Ok(Field::Rational),
        FieldJson::Name(n) => Err(at("field", format!("unknown field {n:?}; use \"Q\" or {{\"Fp\": p}}"))),
        FieldJson::Prime { p } => Ok(Field::prime(*p)?),
    }
}

pub fn field_to_json(field: Field) -> FieldJson {
    match field {
        Field::Rational => FieldJson::Name("Q".into()),
        Field::Prime(p) => FieldJson::Prime { p },
    }
}

/// Coefficients are strings of reduced fractions or residues; bare integers
/// are accepted on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Text(String),
    Int(i64),
}

fn coeff_from_json(field: Field, c: &CoeffJson) -> Result<Scalar, JsonError> {
    match c {
        CoeffJson::Text(s) => Ok(field.parse(s)?),
        CoeffJson::Int(n) => Ok(field.from_i64(*n)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableJson {
    pub top_degree: u64,
    /// degree (as a JSON object key) -> basis names in that degree
    pub basis: BTreeMap<String, Vec<String>>,
    /// entries [x, y, {name: coeff, ...}]; unlisted pairs multiply to zero,
    /// and a listed pair fills in its reverse with the sign rule
    pub products: Vec<(String, String, BTreeMap<String, CoeffJson>)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationJson {
    Exterior(Vec<u64>),
    TruncatedPoly(Vec<(u64, u64)>),
    Tensor(Box<PresentationJson>, Box<PresentationJson>),
    Table(TableJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldJson,
    pub presentation: PresentationJson,
    /// Truncate the result at this degree and mark it as a truncation of
    /// something larger. Required when a `truncated_poly` entry uses
    /// truncation exponent 0, meaning a free polynomial generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate_at: Option<u64>,
}

fn presentation_to_algebra(
    field: Field,
    p: &PresentationJson,
    degree_cap: Option<u64>,
) -> Result<GradedAlgebra, JsonError> {
    match p {
        PresentationJson::Exterior(degrees) => Ok(exterior_algebra(field, degrees)?),
        PresentationJson::TruncatedPoly(gens) => {
            if gens.iter().any(|&(_, t)| t == 0) {
                let cap = degree_cap.ok_or_else(|| {
                    at(
                        "presentation.truncated_poly",
                        "truncation exponent 0 means a free generator; supply truncate_at or --degree-cap",
                    )
                })?;
                let bounded: Vec<(u64, u64)> = gens
                    .iter()
                    .map(|&(d, t)| if t == 0 { (d, cap / d.max(1) + 1) } else { (d, t) })
                    .collect();
                let full = truncated_polynomial_algebra(field, &bounded)?;
                Ok(full.truncate_to(cap).mark_truncated())
            } else {
                Ok(truncated_polynomial_algebra(field, gens)?)
            }
        }
        PresentationJson::Tensor(a, b) => {
            let left = presentation_to_algebra(field, a, degree_cap)?;
            let right = presentation_to_algebra(field, b, degree_cap)?;
            Ok(tensor(&left, &right)?)
        }
        PresentationJson::Table(t) => {
            let mut basis = Vec::new();
            for (deg, names) in &t.basis {
                let d: u64 = deg
                    .parse()
                    .map_err(|_| at("presentation.table.basis", format!("bad degree key {deg:?}")))?;
                basis.push((d, names.clone()));
            }
            basis.sort();
            let mut table = Vec::new();
            for (x, y, value) in &t.products {
                let mut entry = Vec::new();
                for (name, c) in value {
                    entry.push((name.clone(), coeff_from_json(field, c)?));
                }
                table.push((x.clone(), y.clone(), entry));
            }
            Ok(algebra_from_table(field, t.top_degree, &basis, &table, t.truncated)?)
        }
    }
}

pub fn algebra_from_json(
    json: &AlgebraJson,
    degree_cap: Option<u64>,
) -> Result<GradedAlgebra, JsonError> {
    let field = field_from_json(&json.field)?;
    let cap = json.truncate_at.or(degree_cap);
    let alg = presentation_to_algebra(field, &json.presentation, cap)?;
    match json.truncate_at {
        Some(d) if d < alg.top_degree() || alg.is_truncated() => {
            Ok(alg.truncate_to(d).mark_truncated())
        }
        Some(_) => Ok(alg.mark_truncated()),
        None => Ok(alg),
    }
}

/// Canonical table form of any algebra, for output.
pub fn algebra_to_table_json(alg: &GradedAlgebra) -> AlgebraJson {
    let field = alg.field();
    let mut basis: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for d in 0..=alg.top_degree() {
        if alg.dim(d) > 0 {
            basis.insert(d.to_string(), alg.basis_names(d).to_vec());
        }
    }
    let mut products = Vec::new();
    for da in 0..=alg.top_degree() {
        for ia in 0..alg.dim(da) {
            for db in 0..=alg.top_degree() {
                for ib in 0..alg.dim(db) {
                    let entry = alg.basis_product((da, ia), (db, ib));
                    if entry.is_empty() {
                        continue;
                    }
                    let mut value = BTreeMap::new();
                    for (idx, c) in entry {
                        value.insert(
                            alg.basis_names(da + db)[*idx].clone(),
                            CoeffJson::Text(field.render(c)),
                        );
                    }
                    products.push((
                        alg.basis_names(da)[ia].clone(),
                        alg.basis_names(db)[ib].clone(),
                        value,
                    ));
                }
            }
        }
    }
    AlgebraJson {
        field: field_to_json(field),
        presentation: PresentationJson::Table(TableJson {
            top_degree: alg.top_degree(),
            basis,
            products,
            truncated: alg.is_truncated(),
        }),
        truncate_at: None,
    }
}

// ---------------------------------------------------------------------------
// wedges

/// `{"summands": [[3],[3,4]]}` means S^3 v (S^3 x S^4).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WedgeJson {
    pub summands: Vec<Vec<u64>>,
}

pub fn wedge_from_json(json: &WedgeJson) -> Result<WedgeOfSphereProducts, JsonError> {
    let summands: Result<Vec<SphereProduct>, RealizeError> =
        json.summands.iter().map(|dims| SphereProduct::new(dims.clone())).collect();
    Ok(WedgeOfSphereProducts::new(summands?)?)
}

pub fn wedge_to_json(w: &WedgeOfSphereProducts) -> WedgeJson {
    WedgeJson {
        summands: w.summands().iter().map(|p| p.dims().to_vec()).collect(),
    }
}

// ---------------------------------------------------------------------------
// problems

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonvanishingJson {
    pub degrees: Vec<u64>,
    pub complete_up_to: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemJson {
    pub name: String,
    pub simply_connected: bool,
    pub connectivity: u64,
    pub nonvanishing: NonvanishingJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal_dimension: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trivial_cups: Vec<(u64, u64)>,
    #[serde(default)]
    pub rational: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cohomology_algebras: Vec<AlgebraJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub model_algebras: Vec<AlgebraJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_cat: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Relation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_cap: Option<u64>,
}

/// A problem file: either one problem or a set with a designated target.
#[derive(Debug, Clone)]
pub enum ProblemFileJson {
    Set { problems: Vec<ProblemJson>, target: Option<String> },
    Single(ProblemJson),
}

#[derive(Debug, Clone, Deserialize)]
struct ProblemSetJson {
    problems: Vec<ProblemJson>,
    #[serde(default)]
    target: Option<String>,
}

/// Parse a problem file, dispatching on the presence of a `problems` key so
/// field-level errors keep their JSON paths.
pub fn parse_problem_file(text: &str) -> Result<ProblemFileJson, JsonError> {
    let value: serde_json::Value = parse_json(text)?;
    if value.get("problems").is_some() {
        let set: ProblemSetJson = from_value(value)?;
        Ok(ProblemFileJson::Set { problems: set.problems, target: set.target })
    } else {
        Ok(ProblemFileJson::Single(from_value(value)?))
    }
}

pub fn fact_set_from_json(json: &ProblemJson, degree_cap: Option<u64>) -> Result<FactSet, JsonError> {
    let mut nonvanishing = json.nonvanishing.degrees.clone();
    nonvanishing.sort_unstable();
    nonvanishing.dedup();
    let cohomology_algebras: Result<Vec<GradedAlgebra>, JsonError> = json
        .cohomology_algebras
        .iter()
        .map(|a| algebra_from_json(a, degree_cap))
        .collect();
    let model_algebras: Result<Vec<GradedAlgebra>, JsonError> =
        json.model_algebras.iter().map(|a| algebra_from_json(a, degree_cap)).collect();
    let mut trivial_cups: Vec<(u64, u64)> =
        json.trivial_cups.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    trivial_cups.sort_unstable();
    trivial_cups.dedup();
    Ok(FactSet {
        name: json.name.clone(),
        simply_connected: json.simply_connected,
        connectivity: json.connectivity,
        nonvanishing,
        complete_up_to: json.nonvanishing.complete_up_to,
        formal_dimension: json.formal_dimension,
        trivial_cups,
        cohomology_algebras: cohomology_algebras?,
        model_algebras: model_algebras?,
        rational: json.rational,
        known_cat: json.known_cat,
        relations: json.relations.clone(),
        index_cap: json.index_cap,
    })
}

/// Problems in file order plus the target name.
pub fn problem_file_to_fact_sets(
    json: &ProblemFileJson,
    degree_cap: Option<u64>,
) -> Result<(Vec<FactSet>, String), JsonError> {
    match json {
        ProblemFileJson::Single(p) => {
            Ok((vec![fact_set_from_json(p, degree_cap)?], p.name.clone()))
        }
        ProblemFileJson::Set { problems, target } => {
            if problems.is_empty() {
                return Err(at("problems", "problem set is empty"));
            }
            let sets: Result<Vec<FactSet>, JsonError> =
                problems.iter().map(|p| fact_set_from_json(p, degree_cap)).collect();
            let target = target.clone().unwrap_or_else(|| problems[0].name.clone());
            Ok((sets?, target))
        }
    }
}

// ---------------------------------------------------------------------------
// envelopes, traces, results

/// Bound rendering used in envelopes and traces: a number, `"inf"`, or
/// `{"unknown_above": d}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum BoundJson {
    Value(u64),
    Word(String),
    Unknown { unknown_above: u64 },
}

pub fn bound_to_json(v: SeqValue) -> BoundJson {
    match v {
        SeqValue::Finite(n) => BoundJson::Value(n),
        SeqValue::UnknownAbove(d) => BoundJson::Unknown { unknown_above: d },
        SeqValue::Infinite => BoundJson::Word("inf".into()),
    }
}

pub fn bound_from_json(b: &BoundJson) -> Result<SeqValue, JsonError> {
    match b {
        BoundJson::Value(n) => Ok(SeqValue::Finite(*n)),
        BoundJson::Word(w) if w == "inf" => Ok(SeqValue::Infinite),
        BoundJson::Word(w) => Err(at("", format!("expected a number or \"inf\", got {w:?}"))),
        BoundJson::Unknown { unknown_above } => Ok(SeqValue::UnknownAbove(*unknown_above)),
    }
}

/// Envelope dump: index 0 is included, so `lower[k]` is the bound at k.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EnvelopeJson {
    pub lower: Vec<BoundJson>,
    pub upper: Vec<BoundJson>,
}

pub fn envelope_to_json(env: &Envelope) -> EnvelopeJson {
    EnvelopeJson {
        lower: (0..=env.cap()).map(|k| bound_to_json(env.lower_at(k))).collect(),
        upper: (0..=env.cap()).map(|k| bound_to_json(env.upper_at(k))).collect(),
    }
}

/// Trace file: the ordered steps plus the envelopes they lead to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceFileJson {
    pub index_cap: u64,
    #[serde(flatten)]
    pub steps: DerivationTrace,
    #[serde(rename = "final")]
    pub final_envelopes: BTreeMap<String, EnvelopeJson>,
}
