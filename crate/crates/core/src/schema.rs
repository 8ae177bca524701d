//! JSON interchange for marked conics, configurations, verdicts, binary
//! forms and trees.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; both spellings are accepted on input.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::exact_projective::{format_rational, parse_rational, Conic, P1Point, ProjectiveLine, ProjectivePoint, Rational};
use crate::marked_conic::{LineConfig, MarkedConic, Marking};
use crate::stability::{BinaryForm, StabilityVerdict, Status, Witness};
use crate::stable_trees::{PointedTree, Special, VertexCoords, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid value: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for SchemaError {
    fn from(e: serde_json::Error) -> Self {
        SchemaError::Json(e.to_string())
    }
}

fn invalid(e: impl std::fmt::Display) -> SchemaError {
    SchemaError::Invalid(e.to_string())
}

/// An integer that serializes as a number when small and as a string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => match n.as_i64() {
                Some(v) => Ok(JsonInt(BigInt::from(v))),
                None => n.as_u64().map(|v| JsonInt(BigInt::from(v))).ok_or_else(|| D::Error::custom("expected an integer")),
            },
            Value::String(s) => s.trim().parse().map(JsonInt).map_err(|_| D::Error::custom(format!("bad integer {s:?}"))),
            _ => Err(D::Error::custom("expected an integer")),
        }
    }
}

fn json_ints<const N: usize>(v: &[BigInt; N]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

fn triple(v: &[JsonInt]) -> Result<[BigInt; 3], SchemaError> {
    match v {
        [a, b, c] => Ok([a.0.clone(), b.0.clone(), c.0.clone()]),
        _ => Err(SchemaError::Invalid(format!("expected 3 coordinates, found {}", v.len()))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingJson {
    pub point: Vec<JsonInt>,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedConicJson {
    pub conic: Vec<JsonInt>,
    pub markings: Vec<MarkingJson>,
}

impl From<&MarkedConic> for MarkedConicJson {
    fn from(k: &MarkedConic) -> Self {
        Self {
            conic: json_ints(k.conic().coeffs()),
            markings: k
                .markings()
                .iter()
                .map(|mk| MarkingJson { point: json_ints(mk.point.coords()), weight: mk.weight })
                .collect(),
        }
    }
}

impl MarkedConicJson {
    pub fn to_marked_conic(&self) -> Result<MarkedConic, SchemaError> {
        if self.conic.len() != 6 {
            return Err(SchemaError::Invalid(format!("expected 6 conic coefficients, found {}", self.conic.len())));
        }
        let conic = Conic::from_integer_coeffs(self.conic.iter().map(|c| c.0.clone()).collect()).map_err(invalid)?;
        let markings = self
            .markings
            .iter()
            .map(|mk| Ok(Marking::new(ProjectivePoint::from_integers(triple(&mk.point)?).map_err(invalid)?, mk.weight)))
            .collect::<Result<Vec<_>, SchemaError>>()?;
        MarkedConic::new(conic, markings).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineEntryJson {
    pub line: Vec<JsonInt>,
    pub mult: u64,
}

pub fn config_to_json(r: &LineConfig) -> Vec<LineEntryJson> {
    r.entries().map(|(l, k)| LineEntryJson { line: json_ints(l.coeffs()), mult: k }).collect()
}

pub fn config_from_json(entries: &[LineEntryJson]) -> Result<LineConfig, SchemaError> {
    let lines = entries
        .iter()
        .map(|e| Ok((ProjectiveLine::from_integers(triple(&e.line)?).map_err(invalid)?, e.mult)))
        .collect::<Result<Vec<_>, SchemaError>>()?;
    LineConfig::from_entries(lines).map_err(invalid)
}

/// `["a", "b"]` for `(a : b)`.
fn p1_pair(p: &P1Point) -> [String; 2] {
    let [a, b] = p.coords();
    [a.to_string(), b.to_string()]
}

fn p1_from_pair(v: &[String; 2]) -> Result<P1Point, SchemaError> {
    let parse = |s: &String| s.trim().parse::<BigInt>().map_err(|_| SchemaError::Invalid(format!("bad integer {s:?}")));
    P1Point::from_integers([parse(&v[0])?, parse(&v[1])?]).map_err(invalid)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessJson {
    Point { point: Vec<JsonInt> },
    Line { line: Vec<JsonInt> },
    Root { point: [String; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictJson {
    pub status: Status,
    pub witness: WitnessJson,
    pub mu: String,
    pub threshold: String,
}

impl From<&StabilityVerdict> for VerdictJson {
    fn from(v: &StabilityVerdict) -> Self {
        let witness = match &v.witness {
            Witness::Point(p) => WitnessJson::Point { point: json_ints(p.coords()) },
            Witness::Line(l) => WitnessJson::Line { line: json_ints(l.coeffs()) },
            Witness::Root(t) => WitnessJson::Root { point: p1_pair(t) },
        };
        Self { status: v.status, witness, mu: format_rational(&v.mu), threshold: format_rational(&v.threshold) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootJson {
    pub point: [String; 2],
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinaryFormJson {
    pub degree: u64,
    pub roots: Vec<RootJson>,
}

impl From<&BinaryForm> for BinaryFormJson {
    fn from(b: &BinaryForm) -> Self {
        Self { degree: b.degree(), roots: b.roots().map(|(p, w)| RootJson { point: p1_pair(p), mult: w }).collect() }
    }
}

impl BinaryFormJson {
    pub fn to_binary_form(&self) -> Result<BinaryForm, SchemaError> {
        let roots = self.roots.iter().map(|r| Ok((p1_from_pair(&r.point)?, r.mult))).collect::<Result<Vec<_>, SchemaError>>()?;
        let b = BinaryForm::new(roots).map_err(invalid)?;
        if b.degree() != self.degree {
            return Err(SchemaError::Invalid(format!("degree {} but roots sum to {}", self.degree, b.degree())));
        }
        Ok(b)
    }
}

/// `"p/q"` for a finite point, `"inf"` for `(1 : 0)`.
pub fn format_p1(p: &P1Point) -> String {
    p.to_rational().map_or_else(|| "inf".to_string(), |t| format_rational(&t))
}

pub fn parse_p1(s: &str) -> Result<P1Point, SchemaError> {
    if s.trim() == "inf" {
        return Ok(P1Point::infinity());
    }
    let t: Rational = parse_rational(s).map_err(invalid)?;
    Ok(P1Point::from_rational(&t))
}

fn special_key(v: VertexId, s: Special) -> String {
    match s {
        Special::Leg(l) => format!("leg:{l}"),
        Special::Edge(u) => format!("edge:{}-{}", v.min(u), v.max(u)),
    }
}

fn parse_special_key(v: VertexId, key: &str) -> Result<Special, SchemaError> {
    let bad = || SchemaError::Invalid(format!("bad coordinate key {key:?}"));
    if let Some(l) = key.strip_prefix("leg:") {
        return l.parse().map(Special::Leg).map_err(|_| bad());
    }
    let (a, b) = key.strip_prefix("edge:").and_then(|e| e.split_once('-')).ok_or_else(bad)?;
    let (a, b): (VertexId, VertexId) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    match (a == v, b == v) {
        (true, false) => Ok(Special::Edge(b)),
        (false, true) => Ok(Special::Edge(a)),
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    pub legs: BTreeMap<String, VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

impl From<&PointedTree> for TreeJson {
    fn from(t: &PointedTree) -> Self {
        let legs = t.legs().iter().map(|(l, v)| (l.to_string(), *v)).collect();
        let coords = t.coords().map(|c| {
            c.iter().map(|(v, m)| (v.to_string(), m.iter().map(|(s, p)| (special_key(*v, *s), format_p1(p))).collect())).collect()
        });
        Self {
            vertices: t.vertices().iter().copied().collect(),
            edges: t.edges().iter().map(|&(a, b)| [a, b]).collect(),
            legs,
            coords,
        }
    }
}

impl TreeJson {
    pub fn to_tree(&self) -> Result<PointedTree, SchemaError> {
        let legs = self
            .legs
            .iter()
            .map(|(l, v)| l.parse().map(|l| (l, *v)).map_err(|_| SchemaError::Invalid(format!("bad leg label {l:?}"))))
            .collect::<Result<Vec<_>, SchemaError>>()?;
        let t =
            PointedTree::new(self.vertices.iter().copied(), self.edges.iter().map(|e| (e[0], e[1])), legs).map_err(invalid)?;
        let Some(coords) = &self.coords else {
            return Ok(t);
        };
        let mut parsed: BTreeMap<VertexId, VertexCoords> = BTreeMap::new();
        for (v, m) in coords {
            let v: VertexId = v.parse().map_err(|_| SchemaError::Invalid(format!("bad vertex {v:?}")))?;
            let mut c = VertexCoords::new();
            for (key, val) in m {
                c.insert(parse_special_key(v, key)?, parse_p1(val)?);
            }
            parsed.insert(v, c);
        }
        t.with_coords(parsed).map_err(invalid)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_marked_conic(text: &str) -> Result<MarkedConic, SchemaError> {
    serde_json::from_str::<MarkedConicJson>(text)?.to_marked_conic()
}

pub fn parse_config(text: &str) -> Result<LineConfig, SchemaError> {
    config_from_json(&serde_json::from_str::<Vec<LineEntryJson>>(text)?)
}

pub fn parse_binary_form(text: &str) -> Result<BinaryForm, SchemaError> {
    serde_json::from_str::<BinaryFormJson>(text)?.to_binary_form()
}

pub fn parse_tree(text: &str) -> Result<PointedTree, SchemaError> {
    serde_json::from_str::<TreeJson>(text)?.to_tree()
}
