//! Curve-pair files and JSON reports.
//!
//! Reports are written with sorted keys and every float printed with 17
//! significant digits, so identical inputs give identical bytes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::grid::{Axis, EdgeIdx, QuadIdx, VertexIdx};
use crate::net::{ConormalNet, PolyCurve};
use crate::singularity::{Diagnostics, SingularPolyline, SingularVertex};
use crate::smooth::{SmoothChain, SmoothSingularPoint};
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvePairFile {
    #[serde(default)]
    pub alpha_offset: i64,
    pub alpha: Vec<[f64; 3]>,
    #[serde(default)]
    pub beta_offset: i64,
    pub beta: Vec<[f64; 3]>,
}

impl CurvePairFile {
    pub fn from_curves(alpha: &PolyCurve, beta: &PolyCurve) -> Self {
        let pts = |c: &PolyCurve| c.points().iter().map(|p| [p.x, p.y, p.z]).collect();
        Self {
            alpha_offset: alpha.offset(),
            alpha: pts(alpha),
            beta_offset: beta.offset(),
            beta: pts(beta),
        }
    }

    pub fn curves(&self) -> Result<(PolyCurve, PolyCurve)> {
        let make = |name: &str, offset: i64, pts: &[[f64; 3]]| {
            PolyCurve::new(offset, pts.iter().map(|p| Vec3::from(*p)).collect()).map_err(
                |e| match e {
                    Error::InvalidCurve(msg) => Error::Validation(format!("{name}: {msg}")),
                    e => e,
                },
            )
        };
        Ok((
            make("alpha", self.alpha_offset, &self.alpha)?,
            make("beta", self.beta_offset, &self.beta)?,
        ))
    }

    pub fn net(&self) -> Result<ConormalNet> {
        let (a, b) = self.curves()?;
        ConormalNet::new(a, b)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let value = serde_json::to_value(self).expect("curve file serializes");
        to_json_bytes(&value)
    }
}

/// Parses and validates a curve-pair file.
pub fn parse_curves(bytes: &[u8]) -> Result<CurvePairFile> {
    let file: CurvePairFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    file.curves()?;
    Ok(file)
}

pub fn read_curves(path: &Path) -> Result<CurvePairFile> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_curves(&bytes)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Compact JSON with floats in `{:.16e}` form. Non-finite floats become
/// `null` when the value is built, so they never reach the formatter.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes with sorted keys (the default `serde_json` map is ordered)
/// and a trailing newline.
pub fn to_json_bytes(value: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("in-memory write");
    out.push(b'\n');
    out
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn vertex_json(p: VertexIdx) -> Value {
    json!([p.u, p.v])
}

fn edge_json(e: EdgeIdx) -> Value {
    json!({
        "axis": match e.axis { Axis::U => "u", Axis::V => "v" },
        "base_vertex": vertex_json(e.base),
        "key": e.doubled(),
    })
}

fn quad_json(q: QuadIdx) -> Value {
    json!(q.doubled())
}

fn diagnostics_json(d: &Diagnostics) -> Value {
    let sig = |s: &Option<[crate::predicates::Sign; 2]>| match s {
        Some([a, b]) => json!(format!("{}{}", a.as_char(), b.as_char())),
        None => Value::Null,
    };
    json!({
        "base_edge": d.base_edge.map_or(Value::Null, edge_json),
        "forward_signature": sig(&d.forward_signature),
        "backward_signature": sig(&d.backward_signature),
        "alpha_beta_cross": d.alpha_beta_cross,
        "alpha_reflected_beta_cross": d.alpha_reflected_beta_cross,
        "star_same_side": d.star_same_side,
        "traversal": d.traversal.map(|t| format!("{t:?}")),
    })
}

fn singular_vertex_json(v: &SingularVertex) -> Value {
    json!({
        "vertex": vertex_json(v.vertex),
        "configuration": v.configuration.label(),
        "kind": v.kind.label(),
        "incident_edges": v.incident_singular_edges.iter().map(|&e| edge_json(e)).collect::<Vec<_>>(),
        "diagnostics": diagnostics_json(&v.diagnostics),
    })
}

fn polyline_json(p: &SingularPolyline) -> Value {
    json!({
        "vertices": p.vertices.iter().map(|&v| vertex_json(v)).collect::<Vec<_>>(),
        "closed": p.closed,
    })
}

/// Report of a discrete analysis.
pub fn report_value(a: &Analysis) -> Value {
    let t = &a.tolerances;
    json!({
        "smooth": false,
        "omega": a.metric.iter().map(|(q, w)| json!({"quad": quad_json(q), "value": num(w)})).collect::<Vec<_>>(),
        "singular_edges": a.singular_edges.iter().map(|e| edge_json(e.edge)).collect::<Vec<_>>(),
        "vertices": a.vertices.iter().map(singular_vertex_json).collect::<Vec<_>>(),
        "polylines": a.polylines.iter().map(polyline_json).collect::<Vec<_>>(),
        "validations": {
            "generic_position": a.generic_position.iter().map(|g| json!({
                "vertex": vertex_json(g.vertex),
                "planes": [g.first.label(), g.second.label()],
                "sine": num(g.sine),
            })).collect::<Vec<_>>(),
            "admissibility": a.admissibility.iter().map(|v| json!({
                "vertex": vertex_json(v.vertex),
                "incident_edges": v.incident_singular_edges.iter().map(|&e| edge_json(e)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "degenerate_quads": a.degenerate_quads.iter().map(|&(q, w)| json!({
                "quad": quad_json(q), "value": num(w),
            })).collect::<Vec<_>>(),
        },
        "scale": num(a.net.scale()),
        "tolerances": {
            "orient": num(t.orient),
            "degenerate_metric": num(t.degenerate_metric),
            "generic_position": num(t.generic_position),
        },
    })
}

pub fn write_report(a: &Analysis) -> Vec<u8> {
    to_json_bytes(&report_value(a))
}

/// One traced chain of the smooth model and the outcome of its tangency
/// scan.
#[derive(Debug, Clone)]
pub struct SmoothChainReport {
    pub chain: SmoothChain,
    /// Classified points, or the reason the scan was refused.
    pub points: std::result::Result<Vec<SmoothSingularPoint>, String>,
    /// Chain points where the regularity condition fails.
    pub irregular: Vec<[f64; 2]>,
    pub max_lambda_residual: f64,
}

#[derive(Debug, Clone)]
pub struct SmoothReport {
    pub pair: String,
    pub grid: usize,
    pub trace_tol: f64,
    pub chains: Vec<SmoothChainReport>,
}

fn smooth_point_json(p: &SmoothSingularPoint) -> Value {
    json!({
        "u": num(p.u),
        "v": num(p.v),
        "lambda": num(p.lambda),
        "dvdu": num(p.dvdu),
        "kind": p.kind.label(),
    })
}

/// Report of the smooth model; shares the top-level layout of
/// [`report_value`] under `"smooth": true`.
pub fn smooth_report_value(r: &SmoothReport) -> Value {
    let mut candidates = Vec::new();
    let mut non_generic = Vec::new();
    let mut irregular = Vec::new();
    let mut chains = Vec::new();
    for (k, c) in r.chains.iter().enumerate() {
        match &c.points {
            Ok(pts) => candidates.extend(
                pts.iter()
                    .filter(|p| p.kind == crate::smooth::SmoothKind::SwallowtailCandidate)
                    .map(smooth_point_json),
            ),
            Err(msg) => non_generic.push(json!({"chain": k, "reason": msg})),
        }
        irregular.extend(
            c.irregular
                .iter()
                .map(|p| json!({"chain": k, "point": [num(p[0]), num(p[1])]})),
        );
        chains.push(json!({
            "points": c.chain.points.iter().map(|p| json!([num(p[0]), num(p[1])])).collect::<Vec<_>>(),
            "closed": c.chain.closed,
            "max_lambda_residual": num(c.max_lambda_residual),
        }));
    }
    let mut root = Map::new();
    root.insert("smooth".into(), json!(true));
    root.insert("pair".into(), json!(r.pair));
    root.insert("grid".into(), json!(r.grid));
    root.insert("polylines".into(), Value::Array(chains));
    root.insert("vertices".into(), Value::Array(candidates));
    root.insert(
        "validations".into(),
        json!({"non_generic_chains": non_generic, "irregular_points": irregular}),
    );
    root.insert("tolerances".into(), json!({"trace": num(r.trace_tol)}));
    Value::Object(root)
}

pub fn write_smooth_report(r: &SmoothReport) -> Vec<u8> {
    to_json_bytes(&smooth_report_value(r))
}

/// Reads the singular chains back out of a discrete report.
pub fn polylines_from_report(bytes: &[u8]) -> Result<Vec<SingularPolyline>> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let list = v
        .get("polylines")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("report has no \"polylines\" array".into()))?;
    let mut out = Vec::with_capacity(list.len());
    for (k, p) in list.iter().enumerate() {
        let bad = || Error::Parse(format!("malformed polyline {k}"));
        let verts = p
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(bad)?;
        let vertices = verts
            .iter()
            .map(|x| match x.as_array().map(|a| a.as_slice()) {
                Some([u, v]) => Some(VertexIdx::new(u.as_i64()?, v.as_i64()?)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        let closed = p.get("closed").and_then(Value::as_bool).unwrap_or(false);
        out.push(SingularPolyline {
            vertices,
            edges: Vec::new(),
            closed,
        });
    }
    Ok(out)
}
