//! CSV ingestion, discretization and the immutable binary feature matrix.
//!
//! A `RawDataset` holds typed columns straight out of a CSV file; `binarize`
//! turns every column into named binary predicates (one-hot categories,
//! quantile intervals for numerics) and produces the `BinaryDataset` that
//! everything downstream counts against.

use crate::bits::Bits;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),
    #[error("label column {0:?} not found in header")]
    MissingLabelColumn(String),
    #[error("labels must take at most two distinct values, found: {0:?}")]
    LabelCardinality(Vec<String>),
    #[error("no data rows")]
    NoDataRows,
    #[error("bins_per_numeric must be at least 2, got {0}")]
    BadBins(usize),
    #[error("need at least 2 rows to split, got {0}")]
    NotEnoughRows(usize),
    #[error("train_fraction must be in (0, 1), got {0}")]
    BadFraction(f64),
}

/// One column of the raw table.
#[derive(Debug, Clone)]
pub enum Column {
    /// Every non-empty cell parsed as a finite number.
    Numeric(Vec<f64>),
    /// Anything else; missing cells are the category `"?"`.
    Categorical(Vec<String>),
}

/// Typed tabular data with ±1 labels.
#[derive(Debug, Clone)]
pub struct RawDataset {
    pub column_names: Vec<String>,
    pub columns: Vec<Column>,
    /// `+1` / `-1` per row.
    pub labels: Vec<i8>,
    pub n_rows: usize,
    /// Rows discarded at load time because a numeric cell was missing.
    pub dropped_rows: usize,
}

impl RawDataset {
    pub fn n_positive(&self) -> usize {
        self.labels.iter().filter(|&&y| y > 0).count()
    }
}

/// How a predicate decides membership for a raw cell value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PredicateKind {
    /// Cell equals this category value.
    Category { value: String },
    /// Numeric cell lies in `[lo, hi)`, or `[lo, hi]` for the last bin.
    Interval { lo: f64, hi: f64, closed_hi: bool },
}

/// A named Boolean feature derived from one source column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub name: String,
    pub column: String,
    pub kind: PredicateKind,
}

impl Predicate {
    /// Does a raw cell satisfy this predicate? Missing cells are `""`.
    pub fn matches_cell(&self, cell: &str) -> bool {
        match &self.kind {
            PredicateKind::Category { value } => {
                let cell = if cell.is_empty() { "?" } else { cell };
                cell == value
                    || matches!(
                        (cell.parse::<f64>(), value.parse::<f64>()),
                        (Ok(a), Ok(b)) if a == b
                    )
            }
            PredicateKind::Interval { lo, hi, closed_hi } => match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => v >= *lo && (v < *hi || (*closed_hi && v == *hi)),
                _ => false,
            },
        }
    }
}

/// Immutable predicate-by-row bit matrix with labels. All counting flows
/// through this; it is safe to share across threads once built.
#[derive(Debug, Clone)]
pub struct BinaryDataset {
    pub predicates: Vec<Predicate>,
    pub predicate_bits: Vec<Bits>,
    /// Bit set ⇔ row is labeled positive.
    pub labels: Bits,
    pub n: usize,
    pub n_pos: usize,
}

impl BinaryDataset {
    /// Assembles a dataset directly from bit vectors; used by synthetic
    /// instances and tests.
    pub fn from_bits(predicates: Vec<Predicate>, predicate_bits: Vec<Bits>, labels: Bits) -> Self {
        let n = labels.len();
        assert!(predicate_bits.iter().all(|b| b.len() == n));
        assert_eq!(predicates.len(), predicate_bits.len());
        let n_pos = labels.count_ones();
        BinaryDataset {
            predicates,
            predicate_bits,
            labels,
            n,
            n_pos,
        }
    }

    pub fn n_neg(&self) -> usize {
        self.n - self.n_pos
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p.name == name)
    }

    /// New dataset containing only the given rows (ascending order).
    pub fn restrict(&self, rows: &[usize]) -> BinaryDataset {
        let n = rows.len();
        let mut labels = Bits::zeros(n);
        for (new, &old) in rows.iter().enumerate() {
            if self.labels.get(old) {
                labels.set(new);
            }
        }
        let predicate_bits = self
            .predicate_bits
            .iter()
            .map(|bits| {
                let mut b = Bits::zeros(n);
                for (new, &old) in rows.iter().enumerate() {
                    if bits.get(old) {
                        b.set(new);
                    }
                }
                b
            })
            .collect();
        BinaryDataset::from_bits(self.predicates.clone(), predicate_bits, labels)
    }
}

/// Loads a CSV file (RFC-4180, first row is the header) and maps the label
/// column to ±1: `positive_value` becomes +1, the single other value −1.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    positive_value: &str,
) -> Result<RawDataset, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| DataError::MissingLabelColumn(label_column.to_owned()))?;

    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        rows.push(record.iter().map(str::to_owned).collect());
    }
    if rows.is_empty() {
        return Err(DataError::NoDataRows);
    }

    let mut label_values: Vec<String> = Vec::new();
    for row in &rows {
        let v = &row[label_idx];
        if !label_values.contains(v) {
            label_values.push(v.clone());
        }
    }
    let others: Vec<&String> = label_values
        .iter()
        .filter(|v| *v != positive_value)
        .collect();
    if others.len() > 1 {
        return Err(DataError::LabelCardinality(label_values.clone()));
    }

    let feature_idx: Vec<usize> = (0..headers.len()).filter(|&i| i != label_idx).collect();
    // A column is numeric iff every non-empty cell parses to a finite number
    // and at least one cell is non-empty.
    let numeric: Vec<bool> = feature_idx
        .iter()
        .map(|&c| {
            let mut any = false;
            let all = rows.iter().all(|r| {
                let cell = r[c].trim();
                if cell.is_empty() {
                    true
                } else {
                    any = true;
                    matches!(cell.parse::<f64>(), Ok(v) if v.is_finite())
                }
            });
            any && all
        })
        .collect();

    // Rows missing a numeric cell cannot be binned; drop them, counted.
    let keep: Vec<bool> = rows
        .iter()
        .map(|r| {
            feature_idx
                .iter()
                .zip(&numeric)
                .all(|(&c, &is_num)| !is_num || !r[c].trim().is_empty())
        })
        .collect();
    let dropped_rows = keep.iter().filter(|&&k| !k).count();
    if keep.iter().all(|&k| !k) {
        return Err(DataError::NoDataRows);
    }

    let mut columns = Vec::with_capacity(feature_idx.len());
    for (pos, &c) in feature_idx.iter().enumerate() {
        if numeric[pos] {
            let values = rows
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r[c].trim().parse::<f64>().expect("checked numeric"))
                .collect();
            columns.push(Column::Numeric(values));
        } else {
            let values = rows
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(r, _)| {
                    let cell = r[c].trim();
                    if cell.is_empty() {
                        "?".to_owned()
                    } else {
                        cell.to_owned()
                    }
                })
                .collect();
            columns.push(Column::Categorical(values));
        }
    }
    let labels: Vec<i8> = rows
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(r, _)| {
            if r[label_idx] == positive_value {
                1
            } else {
                -1
            }
        })
        .collect();
    let n_rows = labels.len();

    Ok(RawDataset {
        column_names: feature_idx.iter().map(|&i| headers[i].clone()).collect(),
        columns,
        labels,
        n_rows,
        dropped_rows,
    })
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Builds the predicate set for one dataset: one predicate per category for
/// categorical columns, `bins_per_numeric` quantile intervals for numeric
/// columns (falling back to one predicate per distinct value when there are
/// fewer distinct values than bins). The predicates of one source column
/// partition the rows.
pub fn binarize(raw: &RawDataset, bins_per_numeric: usize) -> Result<BinaryDataset, DataError> {
    if bins_per_numeric < 2 {
        return Err(DataError::BadBins(bins_per_numeric));
    }
    let n = raw.n_rows;
    let mut predicates = Vec::new();
    let mut predicate_bits = Vec::new();

    for (name, column) in raw.column_names.iter().zip(&raw.columns) {
        match column {
            Column::Categorical(values) => {
                let mut distinct: Vec<&String> = Vec::new();
                for v in values {
                    if !distinct.contains(&v) {
                        distinct.push(v);
                    }
                }
                distinct.sort();
                for value in distinct {
                    let bits = Bits::from_indices(n, (0..n).filter(|&i| &values[i] == value));
                    predicates.push(Predicate {
                        name: format!("{name}={value}"),
                        column: name.clone(),
                        kind: PredicateKind::Category {
                            value: value.clone(),
                        },
                    });
                    predicate_bits.push(bits);
                }
            }
            Column::Numeric(values) => {
                let mut distinct: Vec<f64> = values.clone();
                distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                distinct.dedup();
                if distinct.len() < bins_per_numeric {
                    // Too few values to bin: one predicate per value.
                    for &v in &distinct {
                        let bits = Bits::from_indices(n, (0..n).filter(|&i| values[i] == v));
                        predicates.push(Predicate {
                            name: format!("{name}={}", format_number(v)),
                            column: name.clone(),
                            kind: PredicateKind::Category {
                                value: format_number(v),
                            },
                        });
                        predicate_bits.push(bits);
                    }
                } else {
                    let mut sorted = values.clone();
                    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                    let mut edges = vec![sorted[0]];
                    for k in 1..bins_per_numeric {
                        edges.push(sorted[k * sorted.len() / bins_per_numeric]);
                    }
                    edges.push(sorted[sorted.len() - 1]);
                    edges.dedup();
                    let bins = edges.len() - 1;
                    for b in 0..bins {
                        let (lo, hi) = (edges[b], edges[b + 1]);
                        let closed_hi = b == bins - 1;
                        let bits = Bits::from_indices(
                            n,
                            (0..n).filter(|&i| {
                                values[i] >= lo
                                    && (values[i] < hi || (closed_hi && values[i] == hi))
                            }),
                        );
                        let cmp = if closed_hi { "≤" } else { "<" };
                        predicates.push(Predicate {
                            name: format!(
                                "{} ≤ {name} {cmp} {}",
                                format_number(lo),
                                format_number(hi)
                            ),
                            column: name.clone(),
                            kind: PredicateKind::Interval { lo, hi, closed_hi },
                        });
                        predicate_bits.push(bits);
                    }
                }
            }
        }
    }

    let mut labels = Bits::zeros(n);
    for (i, &y) in raw.labels.iter().enumerate() {
        if y > 0 {
            labels.set(i);
        }
    }
    Ok(BinaryDataset::from_bits(predicates, predicate_bits, labels))
}

/// Applies an existing predicate vocabulary (for example, the one persisted
/// in a model file) to new raw data, so test sets are cut with the training
/// set's bin edges.
pub fn binarize_with(predicates: &[Predicate], raw: &RawDataset) -> BinaryDataset {
    let n = raw.n_rows;
    let predicate_bits = predicates
        .iter()
        .map(|pred| {
            let col = raw.column_names.iter().position(|c| c == &pred.column);
            let mut bits = Bits::zeros(n);
            if let Some(c) = col {
                for i in 0..n {
                    let cell = match &raw.columns[c] {
                        Column::Numeric(v) => format_number(v[i]),
                        Column::Categorical(v) => v[i].clone(),
                    };
                    if pred.matches_cell(&cell) {
                        bits.set(i);
                    }
                }
            }
            bits
        })
        .collect();
    let mut labels = Bits::zeros(n);
    for (i, &y) in raw.labels.iter().enumerate() {
        if y > 0 {
            labels.set(i);
        }
    }
    BinaryDataset::from_bits(predicates.to_vec(), predicate_bits, labels)
}

/// Seeded disjoint row split; the train side gets `round(train_fraction·n)`
/// rows. The same seed always produces the same split.
pub fn split(
    dataset: &BinaryDataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(BinaryDataset, BinaryDataset), DataError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DataError::BadFraction(train_fraction));
    }
    if dataset.n < 2 {
        return Err(DataError::NotEnoughRows(dataset.n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..dataset.n).collect();
    order.shuffle(&mut rng);
    let train_n = (train_fraction * dataset.n as f64).round() as usize;
    let mut train_rows = order[..train_n].to_vec();
    let mut test_rows = order[train_n..].to_vec();
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok((dataset.restrict(&train_rows), dataset.restrict(&test_rows)))
}
