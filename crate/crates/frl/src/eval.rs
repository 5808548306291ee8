//! Cost-sensitive evaluation, ROC sweeps over the class weight, and the
//! pretty printer for rule lists.

use crate::antecedent::AntecedentSet;
use crate::dataset::BinaryDataset;
use crate::rational::{rat_counts, round2, to_f64, Rat};
use crate::rulelist::{capture_counts, default_tau, ListError, ListMode, RuleList};
use crate::search::{run_frl, run_soft_frl, SearchConfig, SearchError};
use std::io::Write;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    List(#[from] ListError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Confusion counts and weighted loss of one model on one dataset.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_count: usize,
    pub tpr: f64,
    pub fpr: f64,
    /// R(d, D, τ, w) = (w·fn + fp)/n, exact.
    pub weighted_loss: Rat,
    pub w: Rat,
    pub tau: Rat,
}

impl std::fmt::Display for EvalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "w            = {}", to_f64(&self.w))?;
        writeln!(f, "tau          = {}", to_f64(&self.tau))?;
        writeln!(f, "tp           = {}", self.tp)?;
        writeln!(f, "fp           = {}", self.fp)?;
        writeln!(f, "tn           = {}", self.tn)?;
        writeln!(f, "fn           = {}", self.fn_count)?;
        writeln!(f, "tpr          = {}", self.tpr)?;
        writeln!(f, "fpr          = {}", self.fpr)?;
        write!(f, "weighted_loss = {}", to_f64(&self.weighted_loss))
    }
}

/// Evaluates the classifier d̃_τ at τ = 1/(1+w): each clause predicts
/// positive iff its estimate strictly exceeds τ. Predicate alignment is by
/// name; an unknown name is a schema mismatch.
pub fn evaluate(
    list: &RuleList,
    dataset: &BinaryDataset,
    w: &Rat,
) -> Result<EvalReport, ListError> {
    let tau = default_tau(w);
    let counts = capture_counts(list, dataset)?;
    let estimates = list.estimates();
    let (mut tp, mut fp, mut tn, mut fn_count) = (0usize, 0usize, 0usize, 0usize);
    for ((pos, neg), est) in counts.iter().zip(&estimates) {
        if est > &tau {
            tp += pos;
            fp += neg;
        } else {
            fn_count += pos;
            tn += neg;
        }
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let weighted_loss =
        (w * rat_counts(fn_count, 1) + rat_counts(fp, 1)) / rat_counts(dataset.n, 1);
    Ok(EvalReport {
        tp,
        fp,
        tn,
        fn_count,
        tpr: ratio(tp, tp + fn_count),
        fpr: ratio(fp, fp + tn),
        weighted_loss,
        w: w.clone(),
        tau,
    })
}

/// One point of the ROC sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub algorithm: &'static str,
    pub w: Rat,
    pub tpr: f64,
    pub fpr: f64,
}

/// Trains both algorithms on the train split for every weight in the grid
/// and evaluates each on the test split at τ = 1/(1+w). Rows come back
/// sorted by w, then algorithm.
pub fn roc_sweep(
    train: &BinaryDataset,
    test: &BinaryDataset,
    antecedents: &AntecedentSet,
    w_values: &[Rat],
    base: &SearchConfig,
) -> Result<Vec<SweepRow>, EvalError> {
    let mut rows = Vec::with_capacity(w_values.len() * 2);
    for w in w_values {
        let mut config = base.clone();
        config.w = w.clone();
        let (frl, _) = run_frl(train, antecedents, &config)?;
        let report = evaluate(&frl, test, w)?;
        rows.push(SweepRow {
            algorithm: "frl",
            w: w.clone(),
            tpr: report.tpr,
            fpr: report.fpr,
        });
        let (soft, _) = run_soft_frl(train, antecedents, &config)?;
        let report = evaluate(&soft, test, w)?;
        rows.push(SweepRow {
            algorithm: "softfrl",
            w: w.clone(),
            tpr: report.tpr,
            fpr: report.fpr,
        });
    }
    rows.sort_by(|a, b| a.w.cmp(&b.w).then_with(|| a.algorithm.cmp(b.algorithm)));
    Ok(rows)
}

pub fn write_roc_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "algorithm,w,tpr,fpr")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.algorithm, to_f64(&r.w), r.tpr, r.fpr)?;
    }
    Ok(())
}

/// Renders the IF / ELSE IF / ELSE table with two-decimal probabilities and
/// the ± supports. Softly falling lists get an extra column with the raw
/// positive proportion of each antecedent.
pub fn render_rulelist(list: &RuleList) -> String {
    struct Row {
        keyword: &'static str,
        antecedent: String,
        connector: String,
        estimate: String,
        proportion: String,
        supports: String,
    }

    let soft = list.mode == ListMode::SoftlyFalling;
    let connector = if soft {
        "THEN prob. is"
    } else {
        "THEN success prob. is"
    };
    let mut rows: Vec<Row> = list
        .rules
        .iter()
        .enumerate()
        .map(|(i, rule)| Row {
            keyword: if i == 0 { "IF" } else { "ELSE IF" },
            antecedent: rule.antecedent.join(" AND "),
            connector: connector.to_string(),
            estimate: round2(&rule.estimate),
            proportion: if soft {
                round2(&rule.proportion)
            } else {
                String::new()
            },
            supports: format!("+{} -{}", rule.n_pos, rule.n_neg),
        })
        .collect();
    rows.push(Row {
        keyword: "ELSE",
        antecedent: String::new(),
        connector: connector.trim_start_matches("THEN ").to_string(),
        estimate: round2(&list.else_clause.estimate),
        proportion: if soft {
            round2(&list.else_clause.proportion)
        } else {
            String::new()
        },
        supports: format!("+{} -{}", list.else_clause.n_pos, list.else_clause.n_neg),
    });

    let width = |f: fn(&Row) -> usize| rows.iter().map(f).max().unwrap_or(0);
    let w0 = width(|r| r.keyword.len());
    let w1 = width(|r| r.antecedent.len());
    let w2 = width(|r| r.connector.len());
    let w3 = width(|r| r.estimate.len());
    let w4 = width(|r| r.proportion.len());
    let mut out = String::new();
    for r in rows {
        let mut line = format!(
            "{:<w0$} {:<w1$} {:<w2$} {:<w3$}",
            r.keyword, r.antecedent, r.connector, r.estimate
        );
        if soft {
            line.push_str(&format!(" {:<w4$}", r.proportion));
        }
        line.push(' ');
        line.push_str(&r.supports);
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
