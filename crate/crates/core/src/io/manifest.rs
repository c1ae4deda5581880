use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::load_pair;
use super::LoadError;
use crate::estimators::{igci_score, EstimatorKind, IgciReport};
use crate::types::{Direction, ReferenceFamily};

/// One pair listed in a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Resolved data file path.
    pub data_path: PathBuf,
    pub x_col: usize,
    pub y_col: usize,
    /// `None` when the causal direction is unknown.
    pub truth: Option<Direction>,
    pub weight: f64,
}

/// A list of cause-effect pairs with optional ground truth.
///
/// Text form: one CSV line per entry, `id,path,x_col,y_col,truth,weight`.
/// Column indices are zero-based, `truth` is `x->y`, `y->x` or empty/`?`/`unknown`,
/// and `weight` defaults to 1. Relative paths are resolved against the
/// manifest's directory. Blank lines, `#` comments and a header line whose first
/// field is `id` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairsManifest {
    pub entries: Vec<ManifestEntry>,
}

fn parse_err(path: &Path, line: usize, msg: String) -> LoadError {
    LoadError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    }
}

fn first_row_width(path: &Path) -> Result<usize, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .count()
        })
        .unwrap_or(0))
}

impl PairsManifest {
    /// Builds a manifest from entries, checking ids, files and column indices.
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self, LoadError> {
        if entries.is_empty() {
            return Err(LoadError::EmptyManifest);
        }
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.id.as_str()) {
                return Err(LoadError::DuplicateId(e.id.clone()));
            }
            if !e.data_path.is_file() {
                return Err(LoadError::MissingFile {
                    id: e.id.clone(),
                    path: e.data_path.clone(),
                });
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(LoadError::Data(crate::Error::InvalidParameter(format!(
                    "entry '{}': weight must be positive, got {}",
                    e.id, e.weight
                ))));
            }
            let width = first_row_width(&e.data_path)?;
            let widest = e.x_col.max(e.y_col);
            if widest >= width {
                return Err(parse_err(
                    &e.data_path,
                    0,
                    format!(
                        "entry '{}': column {widest} out of range for {width} columns",
                        e.id
                    ),
                ));
            }
        }
        Ok(Self { entries })
    }

    pub fn parse(text: &str, base_dir: &Path, source: &Path) -> Result<Self, LoadError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f[0].eq_ignore_ascii_case("id") {
                continue;
            }
            if f.len() < 4 || f.len() > 6 {
                return Err(parse_err(
                    source,
                    lineno,
                    format!("expected 4 to 6 fields, got {}", f.len()),
                ));
            }
            let col = |s: &str, what: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(source, lineno, format!("bad {what} column '{s}'")))
            };
            let truth = match f.get(4).copied().unwrap_or("") {
                "" | "?" | "unknown" => None,
                s => Some(
                    s.parse::<Direction>()
                        .map_err(|_| parse_err(source, lineno, format!("bad truth '{s}'")))?,
                ),
            };
            let weight = match f.get(5).copied().unwrap_or("") {
                "" => 1.0,
                s => s
                    .parse::<f64>()
                    .map_err(|_| parse_err(source, lineno, format!("bad weight '{s}'")))?,
            };
            entries.push(ManifestEntry {
                id: f[0].to_string(),
                data_path: base_dir.join(f[1]),
                x_col: col(f[2], "x")?,
                y_col: col(f[3], "y")?,
                truth,
                weight,
            });
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base, path)
    }
}

/// Result for one manifest entry. Exactly one of `report` and `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub truth: Option<Direction>,
    pub weight: f64,
    pub report: Option<IgciReport>,
    pub error: Option<String>,
    /// `None` when no decision was made or the truth is unknown.
    pub correct: Option<bool>,
}

impl EntryReport {
    pub fn direction(&self) -> Direction {
        self.report
            .map(|r| r.direction)
            .unwrap_or(Direction::Undecided)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestSummary {
    /// Share of entries with a decision, unweighted.
    pub decisions_pct: f64,
    /// Weighted share of correct decisions among decided entries with known
    /// truth; `None` if there are none.
    pub accuracy_pct: Option<f64>,
    pub entries: Vec<EntryReport>,
}

fn evaluate_entry(
    e: &ManifestEntry,
    reference: ReferenceFamily,
    estimator: EstimatorKind,
) -> EntryReport {
    let outcome = load_pair(&e.data_path, e.x_col, e.y_col)
        .map_err(|err| err.to_string())
        .and_then(|p| igci_score(&p.pair, reference, estimator).map_err(|err| err.to_string()));
    let (report, error) = match outcome {
        Ok(r) => (Some(r), None),
        Err(msg) => (None, Some(msg)),
    };
    let decided = report
        .map(|r| r.direction)
        .filter(|d| *d != Direction::Undecided);
    let correct = match (decided, e.truth) {
        (Some(d), Some(t)) => Some(d == t),
        _ => None,
    };
    EntryReport {
        id: e.id.clone(),
        truth: e.truth,
        weight: e.weight,
        report,
        error,
        correct,
    }
}

/// Scores every entry in parallel; reports keep manifest order. Per-entry
/// failures are recorded in the report rather than returned.
pub fn evaluate_manifest(
    manifest: &PairsManifest,
    reference: ReferenceFamily,
    estimator: EstimatorKind,
) -> ManifestSummary {
    let entries: Vec<EntryReport> = manifest
        .entries
        .par_iter()
        .map(|e| evaluate_entry(e, reference, estimator))
        .collect();
    let decided = entries
        .iter()
        .filter(|r| r.direction() != Direction::Undecided)
        .count();
    let (mut hit, mut total) = (0.0, 0.0);
    for r in &entries {
        if let Some(ok) = r.correct {
            total += r.weight;
            if ok {
                hit += r.weight;
            }
        }
    }
    ManifestSummary {
        decisions_pct: 100.0 * decided as f64 / entries.len() as f64,
        accuracy_pct: (total > 0.0).then(|| 100.0 * hit / total),
        entries,
    }
}
