//! Antecedent mining: conjunctions of at most two predicates with
//! class-conditional support.
//!
//! Mining is direct counting over all singletons and pairs, which at size ≤ 2
//! returns exactly the same set as frequent-pattern mining with the same
//! thresholds. Support comparisons are exact integer arithmetic.

use crate::bits::Bits;
use crate::dataset::BinaryDataset;
use crate::rational::{rat_counts, Rat};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error("max_predicates must be 1 or 2, got {0}")]
    BadMaxPredicates(usize),
    #[error("min_class_support must be in (0, 1], got {0}")]
    BadSupport(String),
    #[error("dataset has no {0} rows; both classes are required")]
    DegenerateLabels(&'static str),
}

/// A conjunction of one or two predicates with its cached satisfaction bits.
#[derive(Debug, Clone)]
pub struct Antecedent {
    /// Strictly increasing predicate indices; canonical form.
    pub predicate_ids: Vec<usize>,
    /// AND of the member predicates' bit vectors.
    pub bits: Bits,
    pub support_pos: usize,
    pub support_neg: usize,
}

impl Antecedent {
    /// Positive/negative counts restricted to the `alive` mask.
    pub fn coverage_counts(&self, alive: &Bits, positives: &Bits) -> (usize, usize) {
        self.bits.count_captured(alive, positives)
    }

    pub fn names(&self, dataset: &BinaryDataset) -> Vec<String> {
        self.predicate_ids
            .iter()
            .map(|&p| dataset.predicates[p].name.clone())
            .collect()
    }
}

/// The pre-determined antecedent pool the search draws from.
#[derive(Debug, Clone)]
pub struct AntecedentSet {
    pub antecedents: Vec<Antecedent>,
}

impl AntecedentSet {
    pub fn len(&self) -> usize {
        self.antecedents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antecedents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Antecedent> {
        self.antecedents.iter()
    }
}

/// JSON row for a mined antecedent (`mine --out` schema).
#[derive(Debug, Serialize, Deserialize)]
pub struct AntecedentJson {
    pub predicates: Vec<String>,
    pub support_pos: usize,
    pub support_neg: usize,
}

impl AntecedentSet {
    pub fn to_json_rows(&self, dataset: &BinaryDataset) -> Vec<AntecedentJson> {
        self.antecedents
            .iter()
            .map(|a| AntecedentJson {
                predicates: a.names(dataset),
                support_pos: a.support_pos,
                support_neg: a.support_neg,
            })
            .collect()
    }
}

/// Mines every canonical conjunction of at most `max_predicates` predicates
/// whose support reaches `min_class_support` within the positive rows or
/// within the negative rows. Conjunctions that capture no rows, and pairs of
/// predicates from the same source column (always empty or redundant under
/// one-hot encoding), are excluded.
pub fn mine(
    dataset: &BinaryDataset,
    max_predicates: usize,
    min_class_support: &Rat,
) -> Result<AntecedentSet, MineError> {
    if !(1..=2).contains(&max_predicates) {
        return Err(MineError::BadMaxPredicates(max_predicates));
    }
    if min_class_support <= &Rat::from_integer(0.into())
        || min_class_support > &Rat::from_integer(1.into())
    {
        return Err(MineError::BadSupport(min_class_support.to_string()));
    }
    if dataset.n_pos == 0 {
        return Err(MineError::DegenerateLabels("positive"));
    }
    if dataset.n_neg() == 0 {
        return Err(MineError::DegenerateLabels("negative"));
    }

    let pos_threshold = min_class_support * rat_counts(dataset.n_pos, 1);
    let neg_threshold = min_class_support * rat_counts(dataset.n_neg(), 1);
    let supported = |pos: usize, neg: usize| {
        rat_counts(pos, 1) >= pos_threshold || rat_counts(neg, 1) >= neg_threshold
    };

    let all = Bits::ones(dataset.n);
    let mut out: Vec<Antecedent> = Vec::new();

    for (i, bits) in dataset.predicate_bits.iter().enumerate() {
        let (pos, neg) = bits.count_captured(&all, &dataset.labels);
        if pos + neg == 0 || !supported(pos, neg) {
            continue;
        }
        out.push(Antecedent {
            predicate_ids: vec![i],
            bits: bits.clone(),
            support_pos: pos,
            support_neg: neg,
        });
    }

    if max_predicates == 2 {
        for i in 0..dataset.predicate_bits.len() {
            for j in (i + 1)..dataset.predicate_bits.len() {
                if dataset.predicates[i].column == dataset.predicates[j].column {
                    continue;
                }
                let bits = dataset.predicate_bits[i].and(&dataset.predicate_bits[j]);
                let (pos, neg) = bits.count_captured(&all, &dataset.labels);
                if pos + neg == 0 || !supported(pos, neg) {
                    continue;
                }
                out.push(Antecedent {
                    predicate_ids: vec![i, j],
                    bits,
                    support_pos: pos,
                    support_neg: neg,
                });
            }
        }
    }

    out.sort_by(|a, b| a.predicate_ids.cmp(&b.predicate_ids));
    Ok(AntecedentSet { antecedents: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Predicate, PredicateKind};
    use crate::rational::rat;

    fn pred(name: &str, column: &str) -> Predicate {
        Predicate {
            name: name.into(),
            column: column.into(),
            kind: PredicateKind::Category {
                value: name.split('=').nth(1).unwrap_or("x").into(),
            },
        }
    }

    /// 100 rows, 50 positive (rows 0..50).
    fn dataset_with(preds: Vec<(&str, &str, Vec<usize>)>) -> BinaryDataset {
        let n = 100;
        let labels = Bits::from_indices(n, 0..50);
        let (predicates, bits): (Vec<_>, Vec<_>) = preds
            .into_iter()
            .map(|(name, col, rows)| (pred(name, col), Bits::from_indices(n, rows)))
            .unzip();
        BinaryDataset::from_bits(predicates, bits, labels)
    }

    #[test]
    fn or_of_class_thresholds() {
        // P: 12% of positives (6/50), 3% of negatives -> included at 0.10.
        // Q: 5% of positives, 5% of negatives -> excluded.
        let p_rows: Vec<usize> = (0..6).chain(50..52).collect();
        let q_rows: Vec<usize> = (0..3).chain(50..53).collect();
        let ds = dataset_with(vec![("a=p", "a", p_rows), ("b=q", "b", q_rows)]);
        let mined = mine(&ds, 1, &rat(1, 10)).unwrap();
        let names: Vec<Vec<usize>> = mined.iter().map(|a| a.predicate_ids.clone()).collect();
        assert!(names.contains(&vec![0]));
        assert!(!names.contains(&vec![1]));
    }

    #[test]
    fn same_column_pairs_excluded() {
        let ds = dataset_with(vec![
            ("a=x", "a", (0..50).collect()),
            ("a=y", "a", (50..100).collect()),
            ("b=z", "b", (0..100).collect()),
        ]);
        let mined = mine(&ds, 2, &rat(1, 100)).unwrap();
        for a in mined.iter() {
            if a.predicate_ids.len() == 2 {
                let (i, j) = (a.predicate_ids[0], a.predicate_ids[1]);
                assert_ne!(ds.predicates[i].column, ds.predicates[j].column);
            }
        }
    }

    #[test]
    fn degenerate_labels_rejected() {
        let n = 10;
        let ds = BinaryDataset::from_bits(
            vec![pred("a=x", "a")],
            vec![Bits::ones(n)],
            Bits::ones(n), // all positive
        );
        assert!(matches!(
            mine(&ds, 2, &rat(1, 10)),
            Err(MineError::DegenerateLabels("negative"))
        ));
    }

    #[test]
    fn coverage_counts_identity_and_zero_masks() {
        let ds = dataset_with(vec![("a=x", "a", (0..30).chain(60..70).collect())]);
        let ant = &mine(&ds, 1, &rat(1, 100)).unwrap().antecedents[0];
        let all = Bits::ones(ds.n);
        assert_eq!(
            ant.coverage_counts(&all, &ds.labels),
            (ant.support_pos, ant.support_neg)
        );
        let none = Bits::zeros(ds.n);
        assert_eq!(ant.coverage_counts(&none, &ds.labels), (0, 0));
    }

    #[test]
    fn coverage_counts_match_row_scan_on_random_mask() {
        let ds = dataset_with(vec![("a=x", "a", (5..55).collect())]);
        let ant = &mine(&ds, 1, &rat(1, 100)).unwrap().antecedents[0];
        // Deterministic pseudo-random mask.
        let alive = Bits::from_indices(ds.n, (0..ds.n).filter(|i| (i * 7 + 3) % 5 < 2));
        let (p, q) = ant.coverage_counts(&alive, &ds.labels);
        let mut sp = 0;
        let mut sn = 0;
        for i in 0..ds.n {
            if ant.bits.get(i) && alive.get(i) {
                if ds.labels.get(i) {
                    sp += 1;
                } else {
                    sn += 1;
                }
            }
        }
        assert_eq!((p, q), (sp, sn));
    }

    /// Independent pair enumeration with per-row counting; mining must be
    /// result-equivalent on small instances.
    #[test]
    fn matches_exhaustive_enumeration() {
        let mut preds = Vec::new();
        for c in 0..6 {
            for v in 0..2 {
                let rows: Vec<usize> = (0..100)
                    .filter(|&i| ((i * (c + 2) + v * 13 + c) % 7 < 3) == (v == 0))
                    .collect();
                preds.push((format!("c{c}=v{v}"), format!("c{c}"), rows));
            }
        }
        let ds = dataset_with(
            preds
                .iter()
                .map(|(n, c, r)| (n.as_str(), c.as_str(), r.clone()))
                .collect(),
        );
        let threshold = rat(1, 10);
        let mined = mine(&ds, 2, &threshold).unwrap();

        let mut expected: Vec<Vec<usize>> = Vec::new();
        let k = ds.predicates.len();
        let mut combos: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
        for i in 0..k {
            for j in (i + 1)..k {
                combos.push(vec![i, j]);
            }
        }
        for ids in combos {
            if ids.len() == 2 && ds.predicates[ids[0]].column == ds.predicates[ids[1]].column {
                continue;
            }
            let mut pos = 0;
            let mut neg = 0;
            for row in 0..ds.n {
                if ids.iter().all(|&p| ds.predicate_bits[p].get(row)) {
                    if ds.labels.get(row) {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
            }
            let keep = pos + neg > 0
                && (rat_counts(pos, 1) >= &threshold * rat_counts(ds.n_pos, 1)
                    || rat_counts(neg, 1) >= &threshold * rat_counts(ds.n_neg(), 1));
            if keep {
                expected.push(ids);
            }
        }
        expected.sort();
        let got: Vec<Vec<usize>> = mined.iter().map(|a| a.predicate_ids.clone()).collect();
        assert_eq!(got, expected);
        // Cached counts equal recomputed popcounts.
        for a in mined.iter() {
            let all = Bits::ones(ds.n);
            assert_eq!(
                (a.support_pos, a.support_neg),
                a.bits.count_captured(&all, &ds.labels)
            );
        }
    }
}
