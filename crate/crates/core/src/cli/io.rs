use std::fs;
use std::path::Path;

use rand::Rng;

use crate::norm::{NormDescriptor, NormedPlane, Point};

/// Reads `x,y` rows; a leading `x,y` header line is skipped.
pub fn read_points(path: &Path) -> Result<Vec<Point>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_points(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_points(text: &str) -> Result<Vec<Point>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        if i == 0 && rec.len() == 2 && &rec[0] == "x" && &rec[1] == "y" {
            continue;
        }
        if rec.len() != 2 {
            return Err(format!("row {}: expected 2 fields, got {}", i + 1, rec.len()));
        }
        let num = |s: &str| -> Result<f64, String> {
            let v: f64 = s.parse().map_err(|_| format!("row {}: bad number {s:?}", i + 1))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("row {}: non-finite coordinate", i + 1))
            }
        };
        out.push(Point::new(num(&rec[0])?, num(&rec[1])?));
    }
    if out.is_empty() {
        return Err("no points".into());
    }
    Ok(out)
}

/// `n` points uniform in `[-span, span]²`.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.random_range(-span..span), rng.random_range(-span..span)))
        .collect()
}

/// `x,y` on the command line.
pub fn parse_xy(s: &str) -> Result<Point, String> {
    let pts = parse_points(s).map_err(|e| format!("--query {s:?}: {e}"))?;
    match pts.as_slice() {
        [p] => Ok(*p),
        _ => Err(format!("--query {s:?}: expected one x,y pair")),
    }
}

/// A built-in norm name or a path to a JSON descriptor.
pub fn load_norm(spec: &str) -> Result<NormDescriptor, String> {
    match spec {
        "euclidean" => Ok(NormDescriptor::Euclidean),
        "l1" => Ok(NormDescriptor::l1()),
        "linf" => Ok(NormDescriptor::linf()),
        "two_arc" => Ok(NormDescriptor::two_arc_reference()),
        path => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
        }
    }
}

pub fn build_plane(descriptor: NormDescriptor, tol: Option<f64>) -> Result<NormedPlane, String> {
    let plane = NormedPlane::new(descriptor).map_err(|e| format!("norm: {e}"))?;
    match tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(format!("--tol must be positive, got {t}")),
        Some(t) => Ok(plane.with_tolerance(t)),
        None => Ok(plane),
    }
}
