//! Byte-stable CSV/JSON writers.
//!
//! Numbers carry 12 significant digits. Every file starts with a header block
//! holding `schema_version` and the resolved parameters (`#` comment lines in
//! CSV, a `header` object in JSON).

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use tempfile::NamedTempFile;

use crate::diagram::PhaseGrid;
use crate::params::{Occupation, ScaledParams, Species};
use crate::window::MottWindow;

pub const SCHEMA_VERSION: u32 = 1;

pub const WINDOWS_COLUMNS: &str = "variant,species,n_g,n_e,n_c,axis_name,axis_value,mu_minus,mu_plus,present";
pub const GRID_COLUMNS: &str = "axis1,axis2,label";
pub const BOUNDARY_COLUMNS: &str = "species,n_g,n_e,n_c,branch,polyline,axis1,axis2";

/// `x` with 12 significant digits, fixed notation for moderate exponents,
/// trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `x` rounded to the 12 digits [`fmt_num`] prints.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        fmt_num(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// Round every float inside a JSON value to 12 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Ordered key/value description of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: &str) -> Self {
        let mut h = Header::default();
        h.push("schema_version", SCHEMA_VERSION.to_string());
        h.push("kind", kind);
        h
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn push_num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.push(key, fmt_num(value))
    }

    pub fn scaled(&mut self, sp: &ScaledParams) -> &mut Self {
        for (k, v) in [
            ("u_g", sp.u_g),
            ("u_e", sp.u_e),
            ("u_eg_g", sp.u_eg_g),
            ("u_eg_e", sp.u_eg_e),
            ("F", sp.f),
            ("eps_c_g", sp.eps_c_g),
            ("eps_c_e", sp.eps_c_e),
            ("eps_g", sp.eps_g),
            ("eps_e", sp.eps_e),
        ] {
            self.push_num(format!("scaled.{k}"), v);
        }
        self
    }

    pub fn occupations(&mut self, occs: &[Occupation]) -> &mut Self {
        let list: Vec<String> = occs.iter().map(occupation_key).collect();
        self.push("occupations", list.join(" "))
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "# {k}={v}");
        }
        s
    }

    fn json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.entries {
            m.insert(k.clone(), Value::String(v.clone()));
        }
        Value::Object(m)
    }
}

pub fn occupation_key(o: &Occupation) -> String {
    format!("{}-{}-{}", o.n_g, o.n_e, fmt_num(o.n_c()))
}

/// One line of a window table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowRow {
    pub variant: String,
    pub species: Species,
    pub occupation: Occupation,
    pub axis_name: String,
    pub axis_value: f64,
    pub window: MottWindow,
}

pub fn windows_csv(header: &Header, rows: &[WindowRow]) -> String {
    let mut s = header.csv();
    s.push_str(WINDOWS_COLUMNS);
    s.push('\n');
    for r in rows {
        let (lo, hi) = r
            .window
            .bounds()
            .map_or((String::new(), String::new()), |(a, b)| (fmt_num(a), fmt_num(b)));
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.variant,
            r.species,
            r.occupation.n_g,
            r.occupation.n_e,
            fmt_num(r.occupation.n_c()),
            r.axis_name,
            fmt_num(r.axis_value),
            lo,
            hi,
            r.window.is_present()
        );
    }
    s
}

pub fn windows_json(header: &Header, rows: &[WindowRow], extra: Option<Value>) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let (lo, hi) = r.window.bounds().map_or((Value::Null, Value::Null), |(a, b)| (json!(a), json!(b)));
            json!({
                "variant": r.variant,
                "species": r.species,
                "n_g": r.occupation.n_g,
                "n_e": r.occupation.n_e,
                "n_c": r.occupation.n_c(),
                "axis_name": r.axis_name,
                "axis_value": r.axis_value,
                "mu_minus": lo,
                "mu_plus": hi,
                "present": r.window.is_present(),
            })
        })
        .collect();
    let mut doc = json!({ "header": header.json(), "rows": rows });
    if let Some(extra) = extra {
        doc["summary"] = extra;
    }
    to_json_string(doc)
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json_string(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Document with the header block and an arbitrary body.
pub fn json_document(header: &Header, body: Value) -> String {
    to_json_string(json!({ "header": header.json(), "body": body }))
}

/// Labels of one occupation layer.
pub fn grid_csv(header: &Header, grid: &PhaseGrid, layer: usize) -> String {
    let mut s = header.csv();
    let _ = writeln!(s, "# axis1={} axis2=mu", grid.x_axis.name());
    s.push_str(GRID_COLUMNS);
    s.push('\n');
    let xs: Vec<String> = grid.x.iter().map(|&x| fmt_num(x)).collect();
    let mus: Vec<String> = grid.mu.iter().map(|&m| fmt_num(m)).collect();
    for (i, x) in xs.iter().enumerate() {
        for (j, mu) in mus.iter().enumerate() {
            let _ = writeln!(s, "{x},{mu},{}", grid.label(layer, i, j));
        }
    }
    s
}

pub fn boundaries_csv(header: &Header, grid: &PhaseGrid) -> String {
    let mut s = header.csv();
    let _ = writeln!(s, "# axis1={} axis2=mu", grid.x_axis.name());
    s.push_str(BOUNDARY_COLUMNS);
    s.push('\n');
    for (k, line) in grid.boundaries.iter().enumerate() {
        for &(x, mu) in &line.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{k},{},{}",
                line.species,
                line.occupation.n_g,
                line.occupation.n_e,
                fmt_num(line.occupation.n_c()),
                line.branch.as_str(),
                fmt_num(x),
                fmt_num(mu)
            );
        }
    }
    s
}

/// Write `contents` to `path` via a temporary file in the same directory and
/// an atomic rename, so a failure never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
