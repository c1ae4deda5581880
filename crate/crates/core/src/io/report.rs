use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::estimators::{EstimatorKind, IgciReport};
use crate::types::{Direction, ReferenceFamily};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One JSON object per line.
    #[default]
    Json,
    /// Tab-separated values with a header line.
    Tsv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" | "jsonl" => Ok(Self::Json),
            "tsv" => Ok(Self::Tsv),
            _ => Err(format!("unknown format '{s}', expected json or tsv")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Tsv => "tsv",
        })
    }
}

/// The flat per-decision output record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub id: String,
    pub c_xy: f64,
    pub c_yx: f64,
    pub direction: Direction,
    pub estimator: EstimatorKind,
    pub reference: ReferenceFamily,
    pub m_used: usize,
}

impl DecisionRecord {
    pub fn new(id: impl Into<String>, r: &IgciReport) -> Self {
        Self {
            id: id.into(),
            c_xy: r.c_xy,
            c_yx: r.c_yx,
            direction: r.direction,
            estimator: r.estimator,
            reference: r.reference,
            m_used: r.m_used,
        }
    }
}

fn flatten(prefix: &str, v: Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other);
        }
    }
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.replace(['\t', '\n'], " "),
        other => other.to_string(),
    }
}

/// Writes serializable records as JSON lines or as TSV.
///
/// For TSV, nested objects are flattened into dotted column names and the
/// header is taken from the first record; later records must have the same
/// fields.
pub struct Emitter<W: Write> {
    out: W,
    format: OutputFormat,
    header: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W, format: OutputFormat) -> Self {
        Self {
            out,
            format,
            header: None,
        }
    }

    pub fn emit<T: Serialize>(&mut self, record: &T) -> io::Result<()> {
        let value = serde_json::to_value(record).map_err(io::Error::other)?;
        match self.format {
            OutputFormat::Json => {
                serde_json::to_writer(&mut self.out, &value).map_err(io::Error::other)?;
                writeln!(self.out)
            }
            OutputFormat::Tsv => {
                let mut flat = Map::new();
                flatten("", value, &mut flat);
                if self.header.is_none() {
                    let cols: Vec<String> = flat.keys().cloned().collect();
                    writeln!(self.out, "{}", cols.join("\t"))?;
                    self.header = Some(cols);
                }
                let cols = self.header.as_ref().expect("header set above");
                let row: Vec<String> = cols
                    .iter()
                    .map(|c| flat.get(c).map(tsv_cell).unwrap_or_default())
                    .collect();
                writeln!(self.out, "{}", row.join("\t"))
            }
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
