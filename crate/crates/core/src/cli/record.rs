//! Result records and their CSV/JSON encodings.

use crate::beams::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::ev_coupling::{SINGULAR_MARGIN, Y_TOLERANCE};
use crate::matter::PROTON_MASS;
use crate::quadrature::Tolerance;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};
use std::io::Write;
use std::str::FromStr;

/// Bumped whenever a value in [`defaults_block`] changes.
pub const DEFAULTS_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
/// Non-finite values become the strings `"NaN"`, `"inf"`, `"-inf"`.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float parses"))
    } else {
        Value::String(format!("{x}"))
    }
}

pub trait IntoValue {
    fn into_value(self) -> Value;
}

impl IntoValue for f64 {
    fn into_value(self) -> Value {
        float(self)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl IntoValue for $t {
            fn into_value(self) -> Value {
                Value::from(self)
            }
        }
    )*};
}
int_value!(i32, i64, u32, u64, usize, bool);

impl IntoValue for &str {
    fn into_value(self) -> Value {
        Value::String(self.to_string())
    }
}

impl IntoValue for String {
    fn into_value(self) -> Value {
        Value::String(self)
    }
}

impl IntoValue for Value {
    fn into_value(self) -> Value {
        self
    }
}

impl<T: IntoValue> IntoValue for Option<T> {
    fn into_value(self) -> Value {
        self.map_or(Value::Null, IntoValue::into_value)
    }
}

/// Physics and numerics defaults, echoed into every record.
pub fn defaults_block() -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("defaults_version".into(), DEFAULTS_VERSION.into_value());
    m.insert("units".into(), "atomic".into_value());
    m.insert("speed_of_light".into(), float(SPEED_OF_LIGHT));
    m.insert("proton_mass".into(), float(PROTON_MASS));
    m.insert("singular_margin".into(), float(SINGULAR_MARGIN));
    m.insert("r_max".into(), "20/k_perp".into_value());
    m.insert("l_z".into(), "2pi/|k_z|".into_value());
    m.insert("quadrature".into(), tolerance_value(&Tolerance::default()));
    m.insert("y_alpha_quadrature".into(), tolerance_value(&Y_TOLERANCE));
    m
}

pub fn tolerance_value(t: &Tolerance) -> Value {
    let mut m = Map::new();
    m.insert("abs_tol".into(), float(t.abs_tol));
    m.insert("rel_tol".into(), float(t.rel_tol));
    m.insert("max_depth".into(), t.max_depth.into_value());
    Value::Object(m)
}

/// One output row: what was asked, what came out, and how well the
/// quadratures did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub subcommand: String,
    pub version: String,
    pub defaults: Map<String, Value>,
    pub input: Map<String, Value>,
    pub output: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
}

impl ResultRecord {
    pub fn new(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            defaults: defaults_block(),
            input: Map::new(),
            output: Map::new(),
            diagnostics: Map::new(),
        }
    }

    pub fn input(mut self, key: &str, v: impl IntoValue) -> Self {
        self.input.insert(key.to_string(), v.into_value());
        self
    }

    pub fn output(mut self, key: &str, v: impl IntoValue) -> Self {
        self.output.insert(key.to_string(), v.into_value());
        self
    }

    /// Adds `key_re` and `key_im`.
    pub fn output_complex(self, key: &str, z: Complex64) -> Self {
        self.output(&format!("{key}_re"), z.re).output(&format!("{key}_im"), z.im)
    }

    pub fn diag(mut self, key: &str, v: impl IntoValue) -> Self {
        self.diagnostics.insert(key.to_string(), v.into_value());
        self
    }

    /// False when a `converged` diagnostic is present and false.
    pub fn converged(&self) -> bool {
        !matches!(self.diagnostics.get("converged"), Some(Value::Bool(false)))
    }

    /// CSV column names. Section keys are used as-is; the defaults block is
    /// reduced to its version.
    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["subcommand".to_string(), "version".to_string(), "defaults_version".to_string()];
        for sec in [&self.input, &self.output, &self.diagnostics] {
            h.extend(sec.keys().cloned());
        }
        h
    }

    fn csv_row(&self) -> Vec<String> {
        let mut r = vec![
            self.subcommand.clone(),
            self.version.clone(),
            DEFAULTS_VERSION.to_string(),
        ];
        for sec in [&self.input, &self.output, &self.diagnostics] {
            r.extend(sec.values().map(cell));
        }
        r
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// Writes all records as one JSON array, or as CSV with one header row.
/// An empty list is `[]` in JSON and nothing in CSV.
pub fn emit(records: &[ResultRecord], format: Format, w: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, records).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(w).map_err(io)?;
        }
        Format::Csv => {
            let Some(first) = records.first() else {
                return Ok(());
            };
            let header = first.csv_header();
            let mut out = csv::Writer::from_writer(&mut *w);
            out.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
            for r in records {
                if r.csv_header() != header {
                    return Err(Error::Io(format!("record columns differ within {}", r.subcommand)));
                }
                out.write_record(r.csv_row()).map_err(|e| Error::Io(e.to_string()))?;
            }
            out.flush().map_err(io)?;
        }
    }
    Ok(())
}

pub fn emit_to_string(records: &[ResultRecord], format: Format) -> Result<String> {
    let mut buf = Vec::new();
    emit(records, format, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_json_is_empty_array() {
        assert_eq!(emit_to_string(&[], Format::Json).unwrap().trim(), "[]");
        assert_eq!(emit_to_string(&[], Format::Csv).unwrap(), "");
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        for x in [
            1.0 / 3.0,
            std::f64::consts::PI * 2.0_f64.powf(-1.5),
            -1.234_567_890_123_456_7e-300,
            f64::MAX,
            f64::MIN_POSITIVE,
            0.0,
        ] {
            let rec = ResultRecord::new("y-alpha").output("value", x);
            let text = emit_to_string(&[rec], Format::Json).unwrap();
            let back: Vec<ResultRecord> = serde_json::from_str(&text).unwrap();
            let v = back[0].output["value"].as_f64().unwrap();
            assert_eq!(v.to_bits(), x.to_bits(), "{x}");
            assert_eq!(back[0], ResultRecord::new("y-alpha").output("value", x));
        }
    }

    #[test]
    fn csv_quotes_and_flattens() {
        let rec = ResultRecord::new("ledge")
            .input("label", "a,b \"c\"")
            .output("x", 0.5)
            .diag("converged", true);
        let text = emit_to_string(&[rec], Format::Csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "subcommand,version,defaults_version,label,x,converged");
        assert!(lines.next().unwrap().contains("\"a,b \"\"c\"\"\",5.0000000000000000e-1,true"));
    }

    #[test]
    fn mismatched_columns_rejected() {
        let a = ResultRecord::new("t").output("x", 1.0);
        let b = ResultRecord::new("t").output("y", 1.0);
        assert!(emit_to_string(&[a, b], Format::Csv).is_err());
    }
}
