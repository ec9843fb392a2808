//! Flat-pattern file formats. All coordinates are millimetres in CS1 and are
//! written with six decimals, so output is byte-stable for equal input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pattern::FlatPattern;

pub const JSON_SCHEMA: &str = "cyl-unwrap/1";

/// Six-decimal rendering without a negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".to_string()
    } else {
        s
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

struct Bounds {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

fn bounds(p: &FlatPattern) -> Bounds {
    let mut b = Bounds {
        min_x: f64::INFINITY,
        min_y: f64::INFINITY,
        max_x: f64::NEG_INFINITY,
        max_y: f64::NEG_INFINITY,
    };
    let all = p
        .edges
        .iter()
        .flat_map(|e| e.points.iter())
        .chain(p.feature_lines.iter().flat_map(|f| f.segment.iter()));
    for q in all {
        b.min_x = b.min_x.min(q.x);
        b.min_y = b.min_y.min(q.y);
        b.max_x = b.max_x.max(q.x);
        b.max_y = b.max_y.max(q.y);
    }
    b
}

/// SVG 1.1 with one user unit per millimetre. The `y` axis is flipped so the
/// drawing reads with CS1 `y` pointing up.
pub fn svg_string(p: &FlatPattern) -> String {
    let b = bounds(p);
    let margin = 0.02 * (b.max_x - b.min_x).max(b.max_y - b.min_y);
    let (x0, y0) = (b.min_x - margin, -b.max_y - margin);
    let (w, h) = (b.max_x - b.min_x + 2.0 * margin, b.max_y - b.min_y + 2.0 * margin);
    let stroke = 0.001 * w.max(h);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}mm\" height=\"{}mm\" viewBox=\"{} {} {} {}\">",
        num(w),
        num(h),
        num(x0),
        num(y0),
        num(w),
        num(h)
    );
    let _ = writeln!(
        s,
        "  <g id=\"CUT\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\">",
        num(stroke)
    );
    for e in &p.edges {
        let pts: Vec<String> = e.points.iter().map(|q| format!("{},{}", num(q.x), num(-q.y))).collect();
        let _ = writeln!(
            s,
            "    <polyline id=\"{}\" points=\"{}\"/>",
            e.kind.name(),
            pts.join(" ")
        );
    }
    s.push_str("  </g>\n");
    if !p.feature_lines.is_empty() {
        let _ = writeln!(
            s,
            "  <g id=\"FEATURE\" fill=\"none\" stroke=\"#0055cc\" stroke-width=\"{}\" stroke-dasharray=\"{},{}\">",
            num(stroke),
            num(8.0 * stroke),
            num(4.0 * stroke)
        );
        for f in &p.feature_lines {
            let [a, c] = f.segment;
            let _ = writeln!(
                s,
                "    <line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                f.kind.name(),
                num(a.x),
                num(-a.y),
                num(c.x),
                num(-c.y)
            );
        }
        s.push_str("  </g>\n");
    }
    s.push_str("</svg>\n");
    s
}

pub fn export_svg(p: &FlatPattern, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), svg_string(p).as_bytes())
}

fn dxf_pair(s: &mut String, code: i32, value: &str) {
    let _ = write!(s, "{code:>3}\n{value}\n");
}

fn dxf_polyline<'a>(s: &mut String, layer: &str, pts: impl Iterator<Item = &'a crate::geom::P2>) {
    dxf_pair(s, 0, "POLYLINE");
    dxf_pair(s, 8, layer);
    dxf_pair(s, 66, "1");
    dxf_pair(s, 70, "0");
    for q in pts {
        dxf_pair(s, 0, "VERTEX");
        dxf_pair(s, 8, layer);
        dxf_pair(s, 10, &num(q.x));
        dxf_pair(s, 20, &num(q.y));
        dxf_pair(s, 30, "0.0");
    }
    dxf_pair(s, 0, "SEQEND");
    dxf_pair(s, 8, layer);
}

/// AutoCAD R12 ASCII DXF: one POLYLINE per cut edge on layer CUT, one per
/// feature line on layer FEATURE.
pub fn dxf_string(p: &FlatPattern) -> String {
    let mut layers = vec![("CUT", "7", "CONTINUOUS")];
    if !p.feature_lines.is_empty() {
        layers.push(("FEATURE", "5", "DASHED"));
    }
    let mut s = String::new();
    dxf_pair(&mut s, 0, "SECTION");
    dxf_pair(&mut s, 2, "HEADER");
    dxf_pair(&mut s, 9, "$ACADVER");
    dxf_pair(&mut s, 1, "AC1009");
    dxf_pair(&mut s, 9, "$INSUNITS");
    dxf_pair(&mut s, 70, "4");
    dxf_pair(&mut s, 0, "ENDSEC");

    dxf_pair(&mut s, 0, "SECTION");
    dxf_pair(&mut s, 2, "TABLES");
    dxf_pair(&mut s, 0, "TABLE");
    dxf_pair(&mut s, 2, "LTYPE");
    dxf_pair(&mut s, 70, "2");
    for (name, pattern) in [("CONTINUOUS", None), ("DASHED", Some((12.0, -6.0)))] {
        dxf_pair(&mut s, 0, "LTYPE");
        dxf_pair(&mut s, 2, name);
        dxf_pair(&mut s, 70, "0");
        dxf_pair(&mut s, 3, if pattern.is_some() { "Dashed" } else { "Solid line" });
        dxf_pair(&mut s, 72, "65");
        match pattern {
            None => {
                dxf_pair(&mut s, 73, "0");
                dxf_pair(&mut s, 40, "0.0");
            }
            Some((on, off)) => {
                dxf_pair(&mut s, 73, "2");
                dxf_pair(&mut s, 40, &num(on - off));
                dxf_pair(&mut s, 49, &num(on));
                dxf_pair(&mut s, 49, &num(off));
            }
        }
    }
    dxf_pair(&mut s, 0, "ENDTAB");
    dxf_pair(&mut s, 0, "TABLE");
    dxf_pair(&mut s, 2, "LAYER");
    dxf_pair(&mut s, 70, &layers.len().to_string());
    for (name, color, ltype) in &layers {
        dxf_pair(&mut s, 0, "LAYER");
        dxf_pair(&mut s, 2, name);
        dxf_pair(&mut s, 70, "0");
        dxf_pair(&mut s, 62, color);
        dxf_pair(&mut s, 6, ltype);
    }
    dxf_pair(&mut s, 0, "ENDTAB");
    dxf_pair(&mut s, 0, "ENDSEC");

    dxf_pair(&mut s, 0, "SECTION");
    dxf_pair(&mut s, 2, "ENTITIES");
    for e in &p.edges {
        dxf_polyline(&mut s, "CUT", e.points.iter());
    }
    for f in &p.feature_lines {
        dxf_polyline(&mut s, "FEATURE", f.segment.iter());
    }
    dxf_pair(&mut s, 0, "ENDSEC");
    dxf_pair(&mut s, 0, "EOF");
    s
}

pub fn export_dxf(p: &FlatPattern, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), dxf_string(p).as_bytes())
}

#[derive(Serialize, Deserialize)]
struct Document {
    schema: String,
    #[serde(flatten)]
    pattern: FlatPattern,
}

/// Rounds every non-integer number to six decimals.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r = (x * 1e6).round() / 1e6;
            let r = if r == 0.0 { 0.0 } else { r };
            if let Some(m) = serde_json::Number::from_f64(r) {
                *n = m;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn json_string(p: &FlatPattern) -> Result<String> {
    let doc = Document {
        schema: JSON_SCHEMA.to_string(),
        pattern: p.clone(),
    };
    let mut v = serde_json::to_value(&doc).map_err(|e| Error::Format {
        path: "<json>".into(),
        reason: e.to_string(),
    })?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Format {
        path: "<json>".into(),
        reason: e.to_string(),
    })?;
    s.push('\n');
    Ok(s)
}

pub fn export_json(p: &FlatPattern, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), json_string(p)?.as_bytes())
}

pub fn parse_json(text: &str, path: &Path) -> Result<FlatPattern> {
    let fail = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    let doc: Document = serde_json::from_str(text).map_err(|e| fail(e.to_string()))?;
    if doc.schema != JSON_SCHEMA {
        return Err(fail(format!(
            "unsupported schema `{}`, expected `{JSON_SCHEMA}`",
            doc.schema
        )));
    }
    Ok(doc.pattern)
}

pub fn import_json(path: impl AsRef<Path>) -> Result<FlatPattern> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_json(&text, path)
}

/// One row per boundary point: `edge_id, x, y`.
pub fn csv_string(p: &FlatPattern) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Format {
        path: "<csv>".into(),
        reason: e.to_string(),
    };
    w.write_record(["edge_id", "x", "y"]).map_err(fail)?;
    for e in &p.edges {
        for q in &e.points {
            w.write_record([e.kind.name(), &num(q.x), &num(q.y)]).map_err(fail)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Format {
        path: "<csv>".into(),
        reason: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).unwrap_or_default())
}

pub fn export_csv_points(p: &FlatPattern, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), csv_string(p)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::DesignInputs;
    use crate::pattern::{build_flat_pattern_with, PatternOptions};

    fn small() -> FlatPattern {
        build_flat_pattern_with(
            &DesignInputs::reference(),
            &PatternOptions {
                samples: 8,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn numbers_have_no_negative_zero() {
        assert_eq!(num(-0.0000001), "0.000000");
        assert_eq!(num(-1.5), "-1.500000");
    }

    #[test]
    fn json_round_trips() {
        let p = small();
        let back = parse_json(&json_string(&p).unwrap(), Path::new("mem")).unwrap();
        assert_eq!(back.edges.len(), p.edges.len());
        for (a, b) in p.edges.iter().zip(&back.edges) {
            assert_eq!(a.kind, b.kind);
            for (q, r) in a.points.iter().zip(&b.points) {
                assert!((q - r).norm() <= 1e-6);
            }
        }
        assert!((back.forming_parameters.mu - p.forming_parameters.mu).abs() <= 1e-6);
    }

    #[test]
    fn json_rejects_other_schema() {
        let text = json_string(&small()).unwrap().replace(JSON_SCHEMA, "other/9");
        assert!(matches!(
            parse_json(&text, Path::new("x.json")),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn cut_layer_only_without_features() {
        let mut p = small();
        p.feature_lines.clear();
        let dxf = dxf_string(&p);
        assert!(dxf.contains("CUT") && !dxf.contains("FEATURE"));
        let svg = svg_string(&p);
        assert!(svg.contains("id=\"CUT\"") && !svg.contains("FEATURE"));
    }

    #[test]
    fn csv_lists_every_point() {
        let p = small();
        let text = csv_string(&p).unwrap();
        let rows = text.lines().count() - 1;
        assert_eq!(rows, p.edges.iter().map(|e| e.points.len()).sum::<usize>());
        assert!(text.starts_with("edge_id,x,y\n"));
    }

    #[test]
    fn dxf_is_r12_polylines() {
        let dxf = dxf_string(&small());
        assert!(dxf.contains("AC1009"));
        assert!(!dxf.contains("LWPOLYLINE"));
        assert_eq!(dxf.matches("\nPOLYLINE\n").count(), dxf.matches("\nSEQEND\n").count());
        assert!(dxf.ends_with("EOF\n"));
    }
}
