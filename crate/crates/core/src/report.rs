//! JSON input documents and the machine-readable reports.
//!
//! Integers and rationals travel as decimal strings. Plain JSON integers are
//! accepted on input for convenience. Every validation error carries a JSON
//! pointer to the offending field.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::GellError;
use crate::exact_algebra::{IntMatrix, Matrix, SupernaturalNumber};
use crate::ktheory::{
    check_basic_certificate, CertificateBlock, CertificateVerdict, DegreeSteinitz,
    IntertwinerCertificate, KGroupPresentation,
};
use crate::lattice::{validate_tower, OdometerSpec, Sublattice};
use crate::pairing::{compute_gell, gap_label_group, GapLabelGroup, Gell, GapLabellingReport, TraceValue, Twist};
use crate::rotation::{rieffel_projection, RieffelProjection, ShiftConvention};
use crate::twist::SkewForm;

/// Depth used when neither the document nor the command line gives one.
pub const DEFAULT_DEPTH: usize = 6;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rejected input, located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        InputError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

impl std::error::Error for InputError {}

type InputResult<T> = std::result::Result<T, InputError>;

fn at(ptr: &str, key: impl fmt::Display) -> String {
    format!("{ptr}/{key}")
}

pub fn read_json(path: &Path) -> InputResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new("", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| InputError::new("", format!("{} is not valid JSON: {e}", path.display())))
}

pub fn parse_integer(v: &Value, ptr: &str) -> InputResult<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| InputError::new(ptr, format!("{n} is not an integer"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| InputError::new(ptr, format!("{s:?} is not an integer"))),
        _ => Err(InputError::new(ptr, "expected an integer string")),
    }
}

pub fn parse_rational(v: &Value, ptr: &str) -> InputResult<BigRational> {
    match v {
        Value::String(s) => {
            if let Some((n, d)) = s.split_once('/') {
                let n: BigInt = n
                    .parse()
                    .map_err(|_| InputError::new(ptr, format!("{s:?} is not a rational")))?;
                let d: BigInt = d
                    .parse()
                    .map_err(|_| InputError::new(ptr, format!("{s:?} is not a rational")))?;
                if d.is_zero() {
                    return Err(InputError::new(ptr, "zero denominator"));
                }
                Ok(BigRational::new(n, d))
            } else {
                parse_integer(v, ptr).map(BigRational::from_integer)
            }
        }
        _ => parse_integer(v, ptr).map(BigRational::from_integer),
    }
}

fn parse_usize(v: &Value, ptr: &str) -> InputResult<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| InputError::new(ptr, "expected a non-negative integer"))
}

fn parse_array<'a>(v: &'a Value, ptr: &str) -> InputResult<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| InputError::new(ptr, "expected an array"))
}

pub fn parse_matrix(v: &Value, d: usize, ptr: &str) -> InputResult<IntMatrix> {
    let rows = parse_array(v, ptr)?;
    if rows.len() != d {
        return Err(InputError::new(ptr, format!("expected {d} rows, got {}", rows.len())));
    }
    let mut out = Vec::with_capacity(d);
    for (i, row) in rows.iter().enumerate() {
        let rp = at(ptr, i);
        let entries = parse_array(row, &rp)?;
        if entries.len() != d {
            return Err(InputError::new(&rp, format!("expected {d} entries, got {}", entries.len())));
        }
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(k, e)| parse_integer(e, &at(&rp, k)))
                .collect::<InputResult<Vec<_>>>()?,
        );
    }
    Matrix::from_rows(out).map_err(|e| InputError::new(ptr, e.to_string()))
}

fn parse_matrix_list(v: &Value, d: usize, ptr: &str) -> InputResult<Vec<IntMatrix>> {
    parse_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m, d, &at(ptr, i)))
        .collect()
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], ptr: &str) -> InputResult<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(InputError::new(at(ptr, key), "unknown field"));
        }
    }
    Ok(())
}

/// A validated odometer description with an optional twist.
#[derive(Clone, Debug)]
pub struct SpecDocument {
    pub name: Option<String>,
    pub spec: Arc<OdometerSpec>,
    pub twist: Option<Twist>,
    pub depth: Option<usize>,
}

impl SpecDocument {
    pub fn from_path(path: &Path) -> InputResult<SpecDocument> {
        SpecDocument::from_value(&read_json(path)?)
    }

    pub fn from_value(v: &Value) -> InputResult<SpecDocument> {
        let obj = v
            .as_object()
            .ok_or_else(|| InputError::new("", "expected a JSON object"))?;
        check_keys(obj, &["name", "rank", "steps", "bases", "periodic_tail", "theta", "depth"], "")?;

        let name = match obj.get("name") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(InputError::new("/name", "expected a string")),
        };
        let rank = parse_usize(
            obj.get("rank").ok_or_else(|| InputError::new("/rank", "missing field"))?,
            "/rank",
        )?;
        if rank == 0 {
            return Err(InputError::new("/rank", "rank must be at least 1"));
        }
        if rank > crate::exact_algebra::MAX_DIMENSION {
            return Err(InputError::new(
                "/rank",
                format!("rank exceeds the supported bound {}", crate::exact_algebra::MAX_DIMENSION),
            ));
        }
        let tail = match obj.get("periodic_tail") {
            None => None,
            Some(t) => Some(parse_matrix_list(t, rank, "/periodic_tail")?),
        };

        let spec = match (obj.get("steps"), obj.get("bases")) {
            (Some(_), Some(_)) => {
                return Err(InputError::new("/bases", "give either steps or bases, not both"))
            }
            (None, None) => return Err(InputError::new("/steps", "missing field")),
            (Some(s), None) => {
                let steps = parse_matrix_list(s, rank, "/steps")?;
                OdometerSpec::new(rank, steps, tail.clone())
                    .map_err(|e| spec_error(e, "/steps", tail.is_some()))?
            }
            (None, Some(b)) => {
                let bases = parse_matrix_list(b, rank, "/bases")?;
                if bases.is_empty() {
                    return Err(InputError::new("/bases", "expected at least one basis"));
                }
                let lattices = bases
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| Sublattice::new(m).map_err(|e| InputError::new(at("/bases", i), e.to_string())))
                    .collect::<InputResult<Vec<_>>>()?;
                let tower = validate_tower(&lattices).map_err(|e| match e {
                    GellError::NotNested { stage, reason } => {
                        InputError::new(at("/bases", stage), format!("not nested: {reason}"))
                    }
                    other => InputError::new("/bases", other.to_string()),
                })?;
                OdometerSpec::new(rank, tower.steps().to_vec(), tail.clone())
                    .map_err(|e| spec_error(e, "/bases", tail.is_some()))?
            }
        };

        let twist = match obj.get("theta") {
            None | Some(Value::Null) => None,
            Some(t) => Some(parse_theta(t, rank)?),
        };
        let depth = match obj.get("depth") {
            None => None,
            Some(d) => Some(parse_usize(d, "/depth")?),
        };
        Ok(SpecDocument {
            name,
            spec: Arc::new(spec),
            twist,
            depth,
        })
    }

    /// Depth to compute at: the explicit request, else the document's,
    /// else the default; clamped to the number of steps of a finite tower.
    pub fn effective_depth(&self, requested: Option<usize>) -> usize {
        let d = requested.or(self.depth).unwrap_or(DEFAULT_DEPTH);
        match self.spec.depth() {
            Some(n) => d.min(n),
            None => d,
        }
    }
}

fn spec_error(e: GellError, ptr: &str, has_tail: bool) -> InputError {
    match e {
        GellError::Singular if has_tail => {
            InputError::new(ptr, "a step or periodic_tail matrix is singular")
        }
        GellError::Singular => InputError::new(ptr, "a step matrix is singular"),
        other => InputError::new(ptr, other.to_string()),
    }
}

fn parse_theta(v: &Value, d: usize) -> InputResult<Twist> {
    match v {
        Value::Object(obj) => {
            check_keys(obj, &["symbolic", "scale"], "/theta")?;
            if obj.get("symbolic") != Some(&Value::Bool(true)) {
                return Err(InputError::new("/theta/symbolic", "expected true"));
            }
            if d != 2 {
                return Err(InputError::new("/theta", "the symbolic twist requires rank 2"));
            }
            let scale = match obj.get("scale") {
                None => BigRational::from_integer(BigInt::from(1)),
                Some(s) => parse_rational(s, "/theta/scale")?,
            };
            Ok(Twist::SymbolicPlane { scale })
        }
        Value::Array(entries) => {
            let expected = d * (d - 1) / 2;
            if entries.len() != expected {
                return Err(InputError::new(
                    "/theta",
                    format!("expected {expected} upper-triangular entries, got {}", entries.len()),
                ));
            }
            let upper = entries
                .iter()
                .enumerate()
                .map(|(i, e)| parse_rational(e, &at("/theta", i)))
                .collect::<InputResult<Vec<_>>>()?;
            let form = SkewForm::from_upper(d, &upper).map_err(|e| InputError::new("/theta", e.to_string()))?;
            Ok(Twist::Exact(form))
        }
        _ => Err(InputError::new("/theta", "expected an array of rationals or {\"symbolic\": true}")),
    }
}

/// Parses a certificate: `{"stage_map": [..], "blocks": ["identity" | matrix]}`.
pub fn parse_certificate(v: &Value, d: usize) -> InputResult<IntertwinerCertificate> {
    let obj = v
        .as_object()
        .ok_or_else(|| InputError::new("", "expected a JSON object"))?;
    check_keys(obj, &["stage_map", "blocks"], "")?;
    let stage_map = parse_array(
        obj.get("stage_map").ok_or_else(|| InputError::new("/stage_map", "missing field"))?,
        "/stage_map",
    )?
    .iter()
    .enumerate()
    .map(|(i, s)| parse_usize(s, &at("/stage_map", i)))
    .collect::<InputResult<Vec<_>>>()?;
    let size = 1usize << d;
    let blocks = parse_array(
        obj.get("blocks").ok_or_else(|| InputError::new("/blocks", "missing field"))?,
        "/blocks",
    )?
    .iter()
    .enumerate()
    .map(|(i, b)| match b {
        Value::String(s) if s == "identity" => Ok(CertificateBlock::ColimitIdentity),
        other => parse_matrix(other, size, &at("/blocks", i)).map(CertificateBlock::Explicit),
    })
    .collect::<InputResult<Vec<_>>>()?;
    if blocks.len() != stage_map.len() {
        return Err(InputError::new(
            "/blocks",
            format!("{} blocks for {} stage-map entries", blocks.len(), stage_map.len()),
        ));
    }
    Ok(IntertwinerCertificate { stage_map, blocks })
}

fn matrix_strings<T: Clone + num_traits::Num + fmt::Display>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn trace_json(v: &TraceValue) -> Value {
    match v {
        TraceValue::Exact(x) => Value::String(x.to_string()),
        TraceValue::Symbolic { constant, theta } => json!({
            "constant": constant.to_string(),
            "theta": theta.to_string(),
        }),
    }
}

fn label_json(g: &GapLabelGroup) -> Value {
    match g {
        GapLabelGroup::Exact { group, completion } => json!({
            "kind": "exact",
            "generator": group.generator().to_string(),
            "group": group.to_string(),
            "completion": completion.as_ref().map(ToString::to_string),
        }),
        GapLabelGroup::Symbolic { constant, theta } => json!({
            "kind": "symbolic",
            "constant_generator": constant.generator().to_string(),
            "theta_generator": theta.generator().to_string(),
            "group": g.to_string(),
        }),
    }
}

fn theta_json(t: &Option<Twist>) -> Value {
    match t {
        None => Value::Null,
        Some(Twist::Exact(f)) => Value::Array(f.upper().iter().map(|x| Value::String(x.to_string())).collect()),
        Some(Twist::SymbolicPlane { scale }) => json!({"symbolic": true, "scale": scale.to_string()}),
    }
}

fn superna(s: &SupernaturalNumber) -> String {
    s.to_string()
}

#[derive(Serialize)]
struct DegreeSteinitzJson {
    degree: usize,
    block_rank: usize,
    determinants: Vec<String>,
    truncated: String,
    completion: Option<String>,
}

impl From<&DegreeSteinitz> for DegreeSteinitzJson {
    fn from(s: &DegreeSteinitz) -> Self {
        DegreeSteinitzJson {
            degree: s.degree,
            block_rank: s.block_rank,
            determinants: s.determinants.iter().map(ToString::to_string).collect(),
            truncated: superna(&s.truncated),
            completion: s.completion.as_ref().map(superna),
        }
    }
}

#[derive(Serialize)]
struct KGroupJson {
    parity: String,
    depth: usize,
    ranks: Vec<usize>,
    basis: Vec<String>,
    connecting: Vec<Vec<Vec<String>>>,
    degree_steinitz: Vec<DegreeSteinitzJson>,
}

impl From<&KGroupPresentation> for KGroupJson {
    fn from(k: &KGroupPresentation) -> Self {
        KGroupJson {
            parity: k.parity.to_string(),
            depth: k.depth,
            ranks: k.ranks.clone(),
            basis: k.basis.iter().map(ToString::to_string).collect(),
            connecting: k.connecting.iter().map(matrix_strings).collect(),
            degree_steinitz: k.degree_steinitz.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Serialize)]
struct ToolJson {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct ConventionsJson {
    pullback: &'static str,
    empty_pfaffian: &'static str,
    shift: String,
}

/// Convention flags embedded in every report.
fn conventions() -> ConventionsJson {
    ConventionsJson {
        pullback: "M^T",
        empty_pfaffian: "Pf(empty)=1",
        shift: reference_shift_convention().to_string(),
    }
}

/// The shift placement selected by the Rieffel self-check on a reference
/// case where the two placements differ.
pub fn reference_shift_convention() -> ShiftConvention {
    let eps = BigRational::new(BigInt::from(2), BigInt::from(5));
    rieffel_projection(2, 5, &eps)
        .map(|r| r.convention)
        .unwrap_or(ShiftConvention::Standard)
}

#[derive(Serialize)]
struct SpecEchoJson {
    name: Option<String>,
    rank: usize,
    steps: Vec<Vec<Vec<String>>>,
    periodic_tail: Option<Vec<Vec<Vec<String>>>>,
    theta: Value,
    depth: usize,
}

#[derive(Serialize)]
struct OrderUnitJson {
    stage: usize,
    class: String,
    trace: Value,
    twisted_trace: Option<Value>,
}

#[derive(Serialize)]
struct TransferJson {
    stage: usize,
    cylinders: String,
    measure: String,
    trace: Value,
}

#[derive(Serialize)]
struct PairingJson {
    stage: usize,
    class: String,
    untwisted: Value,
    twisted: Option<Value>,
}

#[derive(Serialize)]
struct UntwistedLabelsJson {
    lhs: Value,
    rhs: String,
    rhs_generator: String,
    equal: bool,
}

#[derive(Serialize)]
struct GapLabelsJson {
    untwisted: UntwistedLabelsJson,
    twisted_route_a: Option<Value>,
    twisted_route_b: Option<Value>,
    agree: Option<bool>,
}

/// The serialized geometric Elliott invariant.
#[derive(Serialize)]
pub struct GEllReport {
    tool: ToolJson,
    conventions: ConventionsJson,
    spec: SpecEchoJson,
    degenerate: bool,
    steinitz: String,
    k_even: KGroupJson,
    k_odd: KGroupJson,
    order_unit: OrderUnitJson,
    transfer: Vec<TransferJson>,
    trace_simplex: &'static str,
    pairing: Vec<PairingJson>,
    gap_labels: GapLabelsJson,
    consistent: bool,
}

fn untwisted_json(r: &GapLabellingReport) -> UntwistedLabelsJson {
    UntwistedLabelsJson {
        lhs: label_json(&r.lhs),
        rhs: r.rhs.to_string(),
        rhs_generator: r.rhs.generator().to_string(),
        equal: r.equal,
    }
}

impl GEllReport {
    pub fn new(doc: &SpecDocument, g: &Gell) -> GEllReport {
        let spec = &g.spec;
        GEllReport {
            tool: ToolJson {
                name: TOOL_NAME,
                version: TOOL_VERSION,
            },
            conventions: conventions(),
            spec: SpecEchoJson {
                name: doc.name.clone(),
                rank: spec.rank(),
                steps: spec.steps().iter().map(matrix_strings).collect(),
                periodic_tail: spec.periodic_tail().map(|t| t.iter().map(matrix_strings).collect()),
                theta: theta_json(&g.twist),
                depth: g.depth,
            },
            degenerate: g.degenerate,
            steinitz: superna(&g.steinitz),
            k_even: (&g.k_even).into(),
            k_odd: (&g.k_odd).into(),
            order_unit: OrderUnitJson {
                stage: g.order_unit.stage(),
                class: format!("e{}", crate::exact_algebra::Subset::full(spec.rank())),
                trace: trace_json(&g.order_unit_trace),
                twisted_trace: g.order_unit_twisted_trace.as_ref().map(trace_json),
            },
            transfer: g
                .transfer
                .iter()
                .map(|t| TransferJson {
                    stage: t.stage,
                    cylinders: t.cylinders.to_string(),
                    measure: t.measure.to_string(),
                    trace: trace_json(&t.trace),
                })
                .collect(),
            trace_simplex: crate::pairing::TRACE_SIMPLEX,
            pairing: g
                .pairing
                .iter()
                .map(|p| PairingJson {
                    stage: p.stage,
                    class: format!("e{}", p.subset),
                    untwisted: trace_json(&p.untwisted),
                    twisted: p.twisted.as_ref().map(trace_json),
                })
                .collect(),
            gap_labels: GapLabelsJson {
                untwisted: untwisted_json(&g.gap_labelling),
                twisted_route_a: g.twisted_route_a.as_ref().map(label_json),
                twisted_route_b: g.twisted_route_b.as_ref().map(label_json),
                agree: g.twisted_routes_agree(),
            },
            consistent: g.consistent(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Short human-readable summary of a computed invariant.
pub fn summarize(doc: &SpecDocument, g: &Gell) -> String {
    let mut out = String::new();
    let name = doc.name.as_deref().unwrap_or("spec");
    out.push_str(&format!("{name}: rank {}, depth {}\n", g.spec.rank(), g.depth));
    out.push_str(&format!("  Steinitz number      {}\n", g.steinitz));
    out.push_str(&format!(
        "  K_0 / K_1 stage rank {} / {}\n",
        g.k_even.ranks[0], g.k_odd.ranks[0]
    ));
    out.push_str(&format!("  order unit trace     {}\n", g.order_unit_trace));
    out.push_str(&format!("  trace simplex        {}\n", crate::pairing::TRACE_SIMPLEX));
    out.push_str(&format!(
        "  gap labels           {} = {} ({})\n",
        g.gap_labelling.lhs,
        g.gap_labelling.rhs,
        if g.gap_labelling.equal { "equal" } else { "DIFFERENT" }
    ));
    if let (Some(a), Some(b)) = (&g.twisted_route_a, &g.twisted_route_b) {
        out.push_str(&format!(
            "  twisted labels       {a} | {b} ({})\n",
            if a == b { "agree" } else { "DISAGREE" }
        ));
    }
    out
}

/// Computes the invariant for a document at its effective depth.
pub fn gell_for(doc: &SpecDocument, depth: Option<usize>) -> crate::Result<Gell> {
    compute_gell(&doc.spec, doc.twist.as_ref(), doc.effective_depth(depth))
}

/// One row of the gap-labelling table.
#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub depth: usize,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

pub fn gap_table(doc: &SpecDocument, depth: usize) -> crate::Result<Vec<GapRow>> {
    (0..=depth)
        .map(|n| {
            let r = crate::pairing::verify_gap_labelling(&doc.spec, n)?;
            Ok(GapRow {
                depth: n,
                lhs: r.lhs.to_string(),
                rhs: r.rhs.to_string(),
                equal: r.equal,
            })
        })
        .collect()
}

/// Outcome of comparing two specs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompareVerdict {
    CertificateVerified,
    CertificateRejected(String),
    Distinguished(Vec<String>),
    NotDistinguished,
}

impl fmt::Display for CompareVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompareVerdict::CertificateVerified => write!(f, "certificate verified"),
            CompareVerdict::CertificateRejected(why) => write!(f, "certificate rejected: {why}"),
            CompareVerdict::Distinguished(why) => write!(f, "distinguished: {}", why.join("; ")),
            CompareVerdict::NotDistinguished => write!(f, "not distinguished at this depth"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub verdict: CompareVerdict,
    pub steinitz: (SupernaturalNumber, SupernaturalNumber),
    pub labels: (GapLabelGroup, GapLabelGroup),
    pub certificate: Option<CertificateVerdict>,
}

/// Compares two specs of equal rank. With a certificate the verdict is the
/// certificate check. Without one, the specs are distinguished when the
/// Steinitz numbers of their index towers differ; both describe the trace
/// image of K_0 together with the unit.
pub fn compare_specs(
    a: &Arc<OdometerSpec>,
    b: &Arc<OdometerSpec>,
    certificate: Option<&IntertwinerCertificate>,
    depth: usize,
) -> crate::Result<Comparison> {
    if a.rank() != b.rank() {
        return Err(GellError::DimensionMismatch(format!(
            "specs have ranks {} and {}",
            a.rank(),
            b.rank()
        )));
    }
    let da = a.depth().map_or(depth, |n| depth.min(n));
    let db = b.depth().map_or(depth, |n| depth.min(n));
    let labels = (gap_label_group(a, None, da)?, gap_label_group(b, None, db)?);
    let steinitz = (a.steinitz(), b.steinitz());
    if let Some(cert) = certificate {
        let v = check_basic_certificate(a, b, cert)?;
        let verdict = if v.basic {
            CompareVerdict::CertificateVerified
        } else {
            CompareVerdict::CertificateRejected(
                v.first_failure.clone().unwrap_or_else(|| "check failed".into()),
            )
        };
        return Ok(Comparison {
            verdict,
            steinitz,
            labels,
            certificate: Some(v),
        });
    }
    let mut reasons = Vec::new();
    if steinitz.0 != steinitz.1 {
        reasons.push(format!("Steinitz {} != {}", steinitz.0, steinitz.1));
        let pa: BTreeSet<_> = steinitz.0.infinite_primes().into_iter().collect();
        let pb: BTreeSet<_> = steinitz.1.infinite_primes().into_iter().collect();
        if pa != pb {
            reasons.push("infinitely divisible primes differ".into());
        }
    }
    let verdict = if reasons.is_empty() {
        CompareVerdict::NotDistinguished
    } else {
        CompareVerdict::Distinguished(reasons)
    };
    Ok(Comparison {
        verdict,
        steinitz,
        labels,
        certificate: None,
    })
}

impl Comparison {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.to_string(),
            "steinitz": [self.steinitz.0.to_string(), self.steinitz.1.to_string()],
            "gap_labels": [label_json(&self.labels.0), label_json(&self.labels.1)],
            "certificate": self.certificate.as_ref().map(|c| json!({
                "basic": c.basic,
                "top_degree_squares": c.top_degree_squares,
                "order_unit_preserved": c.order_unit_preserved,
                "transfer_triangle": c.transfer_triangle,
                "lower_degrees_commute": c.lower_degrees_commute,
                "cylinders_checked": c.cylinders_checked,
                "first_failure": c.first_failure,
                "diagnostics": c.diagnostics,
            })),
        })
    }
}

/// JSON record of one Rieffel projection.
pub fn rieffel_json(r: &RieffelProjection) -> Value {
    json!({
        "p": r.p,
        "q": r.q,
        "eps": r.eps.to_string(),
        "convention": r.convention.to_string(),
        "trace": r.trace,
        "trace_error": r.trace_error,
        "projection_residual": r.projection_residual,
        "selfadjoint_residual": r.selfadjoint_residual,
        "spectrum_gap": r.spectrum_gap,
        "within_tolerances": r.within_tolerances(),
    })
}
