//! Prefixes, rule lists, capture statistics and the objectives.
//!
//! A `PrefixState` is the ordered antecedent sequence under construction,
//! with incrementally maintained capture counts, empirical proportions, the
//! running minimum proportion, exact risk counters and the monotonicity
//! penalty. Closing a prefix appends the final else clause and yields a
//! `RuleList`. Everything here is exact rational arithmetic; the
//! from-scratch objective functions exist as an independent check on the
//! incremental path.

use crate::antecedent::AntecedentSet;
use crate::bits::Bits;
use crate::dataset::BinaryDataset;
use crate::rational::{pos_part, rat_counts, rat_int, Rat};
use num::{One, Zero};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ListError {
    #[error("antecedent captures no rows not already captured")]
    ZeroCapture,
    #[error("unknown predicate name {0:?} in model")]
    UnknownPredicate(String),
}

/// τ = 1/(1+w), the threshold that minimizes weighted empirical risk.
pub fn default_tau(w: &Rat) -> Rat {
    rat_int(1) / (rat_int(1) + w)
}

/// One rule of a finished list.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Predicate names forming the antecedent conjunction.
    pub antecedent: Vec<String>,
    pub n_pos: usize,
    pub n_neg: usize,
    /// Empirical positive proportion of the captured rows.
    pub proportion: Rat,
    /// Probability estimate used for prediction; equals `proportion` for
    /// compatible falling lists, the running minimum for softly falling ones.
    pub estimate: Rat,
}

/// The final else clause.
#[derive(Debug, Clone, PartialEq)]
pub struct ElseClause {
    pub n_pos: usize,
    pub n_neg: usize,
    pub proportion: Rat,
    pub estimate: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListMode {
    /// Estimates are the empirical proportions.
    Falling,
    /// Estimates are running minima of the proportions.
    SoftlyFalling,
}

/// A prefix closed by the final else clause.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleList {
    pub mode: ListMode,
    pub rules: Vec<Rule>,
    pub else_clause: ElseClause,
}

impl RuleList {
    /// Number of rules excluding the final else clause.
    pub fn size(&self) -> usize {
        self.rules.len()
    }

    /// Estimates down the list, else clause last.
    pub fn estimates(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.rules.iter().map(|r| r.estimate.clone()).collect();
        v.push(self.else_clause.estimate.clone());
        v
    }

    pub fn is_falling(&self) -> bool {
        self.estimates().windows(2).all(|w| w[0] >= w[1])
    }
}

/// One rule of a prefix under construction.
#[derive(Debug, Clone)]
pub struct PrefixRule {
    pub antecedent_id: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub alpha: Rat,
}

/// A prefix with incrementally maintained statistics. Extension returns a
/// new value; the dataset is shared immutably.
#[derive(Debug, Clone)]
pub struct PrefixState {
    rules: Vec<PrefixRule>,
    alive: Bits,
    n: usize,
    tilde_pos: usize,
    tilde_neg: usize,
    /// min over rule proportions; 1 for the empty prefix.
    min_alpha: Rat,
    /// Positives captured by rules with α ≤ τ (misses).
    miss_pos: usize,
    /// Negatives captured by rules with α > τ (false positives).
    false_pos: usize,
    /// Σ_j ⌊α_j − min_{k<j} α_k⌋₊ over the prefix rules.
    penalty: Rat,
}

impl PrefixState {
    /// The empty prefix: every row alive, min proportion 1, zero risk.
    pub fn empty(dataset: &BinaryDataset) -> Self {
        PrefixState {
            rules: Vec::new(),
            alive: Bits::ones(dataset.n),
            n: dataset.n,
            tilde_pos: dataset.n_pos,
            tilde_neg: dataset.n_neg(),
            min_alpha: Rat::one(),
            miss_pos: 0,
            false_pos: 0,
            penalty: Rat::zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[PrefixRule] {
        &self.rules
    }

    pub fn alive(&self) -> &Bits {
        &self.alive
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tilde_pos(&self) -> usize {
        self.tilde_pos
    }

    pub fn tilde_neg(&self) -> usize {
        self.tilde_neg
    }

    /// ñ⁺/(ñ⁺+ñ⁻); zero when the prefix captured everything.
    pub fn tilde_alpha(&self) -> Rat {
        let total = self.tilde_pos + self.tilde_neg;
        if total == 0 {
            Rat::zero()
        } else {
            rat_counts(self.tilde_pos, total)
        }
    }

    pub fn min_alpha(&self) -> &Rat {
        &self.min_alpha
    }

    /// α of the last rule; 1 for the empty prefix.
    pub fn last_alpha(&self) -> Rat {
        self.rules
            .last()
            .map(|r| r.alpha.clone())
            .unwrap_or_else(Rat::one)
    }

    /// (missed positives, false positives) captured by the prefix rules.
    pub fn risk_counts(&self) -> (usize, usize) {
        (self.miss_pos, self.false_pos)
    }

    pub fn penalty(&self) -> &Rat {
        &self.penalty
    }

    /// L(e) = R(e) + C·|e| with R(e) = (w·misses + false positives)/n.
    pub fn prefix_objective(&self, w: &Rat, c: &Rat) -> Rat {
        let risk = (w * rat_counts(self.miss_pos, 1) + rat_counts(self.false_pos, 1))
            / rat_counts(self.n, 1);
        risk + c * rat_counts(self.rules.len(), 1)
    }

    /// L̃(e) = L(e) + C₁ · Σ_j ⌊α_j − min_{k<j} α_k⌋₊.
    pub fn soft_prefix_objective(&self, w: &Rat, c: &Rat, c1: &Rat) -> Rat {
        self.prefix_objective(w, c) + c1 * &self.penalty
    }

    /// Appends one rule. The same `w` must be used for every extension of a
    /// prefix; it fixes the threshold the risk counters are classified with.
    pub fn extend(
        &self,
        antecedents: &AntecedentSet,
        antecedent_id: usize,
        dataset: &BinaryDataset,
        w: &Rat,
    ) -> Result<PrefixState, ListError> {
        let ant = &antecedents.antecedents[antecedent_id];
        let (n_pos, n_neg) = ant.coverage_counts(&self.alive, &dataset.labels);
        if n_pos + n_neg == 0 {
            return Err(ListError::ZeroCapture);
        }
        let alpha = rat_counts(n_pos, n_pos + n_neg);
        let tau = default_tau(w);

        let mut next = self.clone();
        next.alive.remove(&ant.bits);
        next.tilde_pos -= n_pos;
        next.tilde_neg -= n_neg;
        if alpha > tau {
            next.false_pos += n_neg;
        } else {
            next.miss_pos += n_pos;
        }
        next.penalty += pos_part(&(&alpha - &self.min_alpha));
        if alpha < next.min_alpha {
            next.min_alpha = alpha.clone();
        }
        next.rules.push(PrefixRule {
            antecedent_id,
            n_pos,
            n_neg,
            alpha,
        });
        Ok(next)
    }

    /// Objective of the list obtained by closing this prefix now.
    pub fn closed_objective(&self, w: &Rat, c: &Rat) -> Rat {
        let else_risk = self.else_risk_numerator(w);
        self.prefix_objective(w, c) + else_risk / rat_counts(self.n, 1)
    }

    /// Softly falling objective of the closed list (the else clause also
    /// pays its overshoot over the prefix minimum).
    pub fn closed_soft_objective(&self, w: &Rat, c: &Rat, c1: &Rat) -> Rat {
        self.closed_objective(w, c)
            + c1 * &self.penalty
            + c1 * pos_part(&(self.tilde_alpha() - &self.min_alpha))
    }

    fn else_risk_numerator(&self, w: &Rat) -> Rat {
        if self.tilde_pos + self.tilde_neg == 0 {
            return Rat::zero();
        }
        if self.tilde_alpha() > default_tau(w) {
            rat_counts(self.tilde_neg, 1)
        } else {
            w * rat_counts(self.tilde_pos, 1)
        }
    }

    /// Closes the prefix with the final else clause.
    pub fn close(
        &self,
        antecedents: &AntecedentSet,
        dataset: &BinaryDataset,
        mode: ListMode,
    ) -> RuleList {
        let else_proportion = self.tilde_alpha();
        let mut running_min = Rat::one();
        let rules = self
            .rules
            .iter()
            .map(|r| {
                if r.alpha < running_min {
                    running_min = r.alpha.clone();
                }
                Rule {
                    antecedent: antecedents.antecedents[r.antecedent_id].names(dataset),
                    n_pos: r.n_pos,
                    n_neg: r.n_neg,
                    proportion: r.alpha.clone(),
                    estimate: match mode {
                        ListMode::Falling => r.alpha.clone(),
                        ListMode::SoftlyFalling => running_min.clone(),
                    },
                }
            })
            .collect();
        let else_estimate = match mode {
            ListMode::Falling => else_proportion.clone(),
            ListMode::SoftlyFalling => else_proportion.clone().min(self.min_alpha.clone()),
        };
        RuleList {
            mode,
            rules,
            else_clause: ElseClause {
                n_pos: self.tilde_pos,
                n_neg: self.tilde_neg,
                proportion: else_proportion,
                estimate: else_estimate,
            },
        }
    }
}

/// Maps each rule's predicate names onto the dataset's predicate indices.
pub fn resolve_antecedents(
    list: &RuleList,
    dataset: &BinaryDataset,
) -> Result<Vec<Vec<usize>>, ListError> {
    list.rules
        .iter()
        .map(|rule| {
            rule.antecedent
                .iter()
                .map(|name| {
                    dataset
                        .predicate_index(name)
                        .ok_or_else(|| ListError::UnknownPredicate(name.clone()))
                })
                .collect()
        })
        .collect()
}

/// Per-clause (positive, negative) capture counts, else clause last; every
/// row is captured by exactly one clause.
pub fn capture_counts(
    list: &RuleList,
    dataset: &BinaryDataset,
) -> Result<Vec<(usize, usize)>, ListError> {
    let resolved = resolve_antecedents(list, dataset)?;
    let mut alive = Bits::ones(dataset.n);
    let mut counts = Vec::with_capacity(list.size() + 1);
    for preds in &resolved {
        let mut bits = dataset.predicate_bits[preds[0]].clone();
        for &p in &preds[1..] {
            bits = bits.and(&dataset.predicate_bits[p]);
        }
        counts.push(bits.count_captured(&alive, &dataset.labels));
        alive.remove(&bits);
    }
    let (pos, neg) = alive.count_captured(&Bits::ones(dataset.n), &dataset.labels);
    counts.push((pos, neg));
    Ok(counts)
}

/// Weighted empirical risk of the list on the dataset at threshold `tau`,
/// recomputed from the raw data (the reference, non-incremental path).
pub fn risk(
    list: &RuleList,
    dataset: &BinaryDataset,
    tau: &Rat,
    w: &Rat,
) -> Result<Rat, ListError> {
    let counts = capture_counts(list, dataset)?;
    let estimates = list.estimates();
    let mut numerator = Rat::zero();
    for ((pos, neg), est) in counts.iter().zip(&estimates) {
        if est > tau {
            numerator += rat_counts(*neg, 1);
        } else {
            numerator += w * rat_counts(*pos, 1);
        }
    }
    Ok(numerator / rat_counts(dataset.n, 1))
}

/// L(d) = R(d, τ, w) + C·|d|.
pub fn objective_l(
    list: &RuleList,
    dataset: &BinaryDataset,
    tau: &Rat,
    w: &Rat,
    c: &Rat,
) -> Result<Rat, ListError> {
    Ok(risk(list, dataset, tau, w)? + c * rat_counts(list.size(), 1))
}

/// L̃(d) = L(d) + C₁ · Σ_{j=0}^{|d|} ⌊α_j − min_{k<j} α_k⌋₊, with the
/// proportions recomputed from the dataset. The j = |d| term covers the
/// final else clause.
pub fn soft_objective(
    list: &RuleList,
    dataset: &BinaryDataset,
    tau: &Rat,
    w: &Rat,
    c: &Rat,
    c1: &Rat,
) -> Result<Rat, ListError> {
    let counts = capture_counts(list, dataset)?;
    let mut running_min = Rat::one();
    let mut penalty = Rat::zero();
    for (pos, neg) in &counts {
        let total = pos + neg;
        if total == 0 {
            continue;
        }
        let prop = rat_counts(*pos, total);
        penalty += pos_part(&(&prop - &running_min));
        if prop < running_min {
            running_min = prop;
        }
    }
    Ok(objective_l(list, dataset, tau, w, c)? + c1 * penalty)
}

/// Replaces estimates by running minima of the proportions; the result is
/// non-increasing down the list.
pub fn softify(list: &RuleList) -> RuleList {
    let mut running_min = Rat::one();
    let rules = list
        .rules
        .iter()
        .map(|r| {
            if r.proportion < running_min {
                running_min = r.proportion.clone();
            }
            Rule {
                estimate: running_min.clone(),
                ..r.clone()
            }
        })
        .collect();
    let else_estimate = list.else_clause.proportion.clone().min(running_min);
    RuleList {
        mode: ListMode::SoftlyFalling,
        rules,
        else_clause: ElseClause {
            estimate: else_estimate,
            ..list.else_clause.clone()
        },
    }
}

/// Classifies one dataset row: the first satisfied antecedent (else clause
/// if none) predicts +1 iff its estimate strictly exceeds `tau`.
pub fn predict(
    list: &RuleList,
    dataset: &BinaryDataset,
    row: usize,
    tau: &Rat,
) -> Result<i8, ListError> {
    let resolved = resolve_antecedents(list, dataset)?;
    let estimate = resolved
        .iter()
        .zip(&list.rules)
        .find(|(preds, _)| preds.iter().all(|&p| dataset.predicate_bits[p].get(row)))
        .map(|(_, rule)| &rule.estimate)
        .unwrap_or(&list.else_clause.estimate);
    Ok(if estimate > tau { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antecedent::Antecedent;
    use crate::dataset::{Predicate, PredicateKind};
    use crate::rational::rat;

    fn named_predicate(name: &str) -> Predicate {
        Predicate {
            name: name.into(),
            column: name.into(),
            kind: PredicateKind::Category { value: "1".into() },
        }
    }

    /// Builds a dataset plus singleton antecedents from explicit row sets.
    pub(crate) fn instance(
        n: usize,
        positives: Vec<usize>,
        antecedent_rows: Vec<Vec<usize>>,
    ) -> (BinaryDataset, AntecedentSet) {
        let labels = Bits::from_indices(n, positives);
        let predicates: Vec<Predicate> = (0..antecedent_rows.len())
            .map(|i| named_predicate(&format!("p{i}")))
            .collect();
        let bits: Vec<Bits> = antecedent_rows
            .iter()
            .map(|rows| Bits::from_indices(n, rows.iter().copied()))
            .collect();
        let ds = BinaryDataset::from_bits(predicates, bits.clone(), labels);
        let all = Bits::ones(n);
        let antecedents = bits
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                let (sp, sn) = b.count_captured(&all, &ds.labels);
                Antecedent {
                    predicate_ids: vec![i],
                    bits: b,
                    support_pos: sp,
                    support_neg: sn,
                }
            })
            .collect();
        (ds, AntecedentSet { antecedents })
    }

    /// The 19-row toy: 14 positives (rows 0..14), A₁ captures 8⁺/3⁻.
    fn toy() -> (BinaryDataset, AntecedentSet) {
        let a1: Vec<usize> = (0..8).chain(14..17).collect();
        instance(19, (0..14).collect(), vec![a1])
    }

    #[test]
    fn empty_prefix_statistics() {
        let (ds, _) = toy();
        let e = PrefixState::empty(&ds);
        assert_eq!((e.tilde_pos(), e.tilde_neg()), (14, 5));
        assert_eq!(e.alive().count_ones(), 19);
        assert_eq!(e.tilde_alpha(), rat(14, 19));
        assert_eq!(e.min_alpha(), &Rat::one());
        assert_eq!(e.prefix_objective(&rat_int(1), &Rat::zero()), Rat::zero());
    }

    #[test]
    fn extend_computes_toy_proportions() {
        let (ds, ants) = toy();
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap();
        assert_eq!(e.rules()[0].alpha, rat(8, 11));
        assert_eq!((e.tilde_pos(), e.tilde_neg()), (6, 2));
        assert_eq!(e.tilde_alpha(), rat(6, 8));
        assert!(e.tilde_alpha() > e.last_alpha());
    }

    #[test]
    fn extend_proportion_matches_table_scale() {
        // A rule capturing 978 positives and 531 negatives has proportion
        // 978/1509, which rounds to 0.65.
        let (ds, ants) = instance(
            2000,
            (0..1000).collect(),
            vec![(0..978).chain(1000..1531).collect()],
        );
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(7))
            .unwrap();
        assert_eq!(e.rules()[0].alpha, rat(978, 1509));
        assert_eq!(crate::rational::round2(&e.rules()[0].alpha), "0.65");
    }

    #[test]
    fn repeated_antecedent_captures_nothing() {
        let (ds, ants) = toy();
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap();
        assert!(matches!(
            e.extend(&ants, 0, &ds, &rat_int(1)),
            Err(ListError::ZeroCapture)
        ));
    }

    #[test]
    fn trivial_list_on_all_negative_data_has_zero_objective() {
        let (ds, ants) = instance(10, vec![], vec![vec![0, 1]]);
        let e = PrefixState::empty(&ds);
        let list = e.close(&ants, &ds, ListMode::Falling);
        assert_eq!(list.size(), 0);
        assert_eq!(e.closed_objective(&rat_int(1), &Rat::zero()), Rat::zero());
        let tau = default_tau(&rat_int(1));
        assert_eq!(
            objective_l(&list, &ds, &tau, &rat_int(1), &Rat::zero()).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn toy_close_is_compatible_but_not_falling() {
        let (ds, ants) = toy();
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap();
        let list = e.close(&ants, &ds, ListMode::Falling);
        assert_eq!(list.rules[0].estimate, rat(8, 11));
        assert_eq!(list.else_clause.estimate, rat(6, 8));
        assert!(!list.is_falling());
        // Compatible: estimates equal proportions recomputed from data.
        let counts = capture_counts(&list, &ds).unwrap();
        assert_eq!(counts, vec![(8, 3), (6, 2)]);
    }

    #[test]
    fn derived_risk_on_toy_single_rule() {
        // α = 8/11 > τ = 1/2 and α̃ = 3/4 > 1/2, so the list misclassifies
        // the 3 + 2 negatives: R = 5/19 at w = 1, C = 0.
        let (ds, ants) = toy();
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap();
        let list = e.close(&ants, &ds, ListMode::Falling);
        let tau = rat(1, 2);
        let r = risk(&list, &ds, &tau, &rat_int(1)).unwrap();
        assert_eq!(r, rat(5, 19));
        // Incremental path agrees exactly.
        assert_eq!(e.closed_objective(&rat_int(1), &Rat::zero()), rat(5, 19));
    }

    #[test]
    fn optimal_threshold_beats_grid_on_toy() {
        let (ds, ants) = toy();
        let list = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap()
            .close(&ants, &ds, ListMode::Falling);
        for w in [1i64, 3, 5, 7] {
            let w = rat_int(w);
            let best = risk(&list, &ds, &default_tau(&w), &w).unwrap();
            for k in 0..20 {
                let tau = rat(k, 20);
                assert!(best <= risk(&list, &ds, &tau, &w).unwrap());
            }
        }
    }

    #[test]
    fn soft_objective_penalty_terms() {
        let (ds, ants) = toy();
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap();
        let list = e.close(&ants, &ds, ListMode::Falling);
        let tau = rat(1, 2);
        let w = rat_int(1);
        let c = Rat::zero();
        let l = objective_l(&list, &ds, &tau, &w, &c).unwrap();
        // Penalty 0.5·(6/8 − 8/11) = 0.5·(1/44).
        let c1 = rat(1, 2);
        let soft = soft_objective(&list, &ds, &tau, &w, &c, &c1).unwrap();
        assert_eq!(soft, &l + rat(1, 2) * rat(1, 44));
        // C₁ = 0 collapses to L.
        assert_eq!(
            soft_objective(&list, &ds, &tau, &w, &c, &Rat::zero()).unwrap(),
            l
        );
        // Incremental path agrees.
        assert_eq!(e.closed_soft_objective(&w, &c, &c1), soft);
    }

    #[test]
    fn falling_list_has_zero_penalty() {
        // One antecedent capturing mostly positives, so the closed list is
        // falling.
        let (ds, ants) = instance(20, (0..10).collect(), vec![(0..9).chain(10..12).collect()]);
        let e = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap();
        let list = e.close(&ants, &ds, ListMode::Falling);
        assert!(list.is_falling());
        let tau = rat(1, 2);
        let (w, c, c1) = (rat_int(1), Rat::zero(), rat(1, 2));
        assert_eq!(
            soft_objective(&list, &ds, &tau, &w, &c, &c1).unwrap(),
            objective_l(&list, &ds, &tau, &w, &c).unwrap()
        );
    }

    fn literal_list(props: &[Rat]) -> RuleList {
        let rules = props[..props.len() - 1]
            .iter()
            .enumerate()
            .map(|(i, p)| Rule {
                antecedent: vec![format!("p{i}")],
                n_pos: 1,
                n_neg: 1,
                proportion: p.clone(),
                estimate: p.clone(),
            })
            .collect();
        RuleList {
            mode: ListMode::Falling,
            rules,
            else_clause: ElseClause {
                n_pos: 1,
                n_neg: 1,
                proportion: props.last().unwrap().clone(),
                estimate: props.last().unwrap().clone(),
            },
        }
    }

    #[test]
    fn softify_takes_running_minima() {
        let list = literal_list(&[rat(1, 2), rat(7, 10), rat(3, 10)]);
        let soft = softify(&list);
        assert_eq!(soft.estimates(), vec![rat(1, 2), rat(1, 2), rat(3, 10)]);
        assert!(soft.is_falling());
        // Pointwise ≤ the input estimates.
        for (s, o) in soft.estimates().iter().zip(list.estimates().iter()) {
            assert!(s <= o);
        }
        // Falling input is unchanged (estimates already running minima).
        let falling = literal_list(&[rat(3, 4), rat(1, 2), rat(1, 4)]);
        assert_eq!(softify(&falling).estimates(), falling.estimates());
        // The toy pair (8/11, 6/8) becomes (8/11, 8/11).
        let toy_list = literal_list(&[rat(8, 11), rat(6, 8)]);
        assert_eq!(softify(&toy_list).estimates(), vec![rat(8, 11), rat(8, 11)]);
    }

    #[test]
    fn predict_is_strict_at_tau_and_falls_through_to_else() {
        let (ds, ants) = toy();
        let list = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap()
            .close(&ants, &ds, ListMode::Falling);
        // Row 0 is captured by the rule (estimate 8/11).
        assert_eq!(predict(&list, &ds, 0, &rat(8, 11)).unwrap(), -1); // tie -> negative
        assert_eq!(predict(&list, &ds, 0, &rat(1, 2)).unwrap(), 1);
        // Row 9 satisfies no rule: classified by the else estimate 6/8.
        assert_eq!(predict(&list, &ds, 9, &rat(1, 2)).unwrap(), 1);
        assert_eq!(predict(&list, &ds, 9, &rat(6, 8)).unwrap(), -1);
    }

    #[test]
    fn capture_partition_covers_every_row_once() {
        let (ds, ants) = toy();
        let list = PrefixState::empty(&ds)
            .extend(&ants, 0, &ds, &rat_int(1))
            .unwrap()
            .close(&ants, &ds, ListMode::Falling);
        let counts = capture_counts(&list, &ds).unwrap();
        let total: usize = counts.iter().map(|(p, n)| p + n).sum();
        assert_eq!(total, ds.n);
    }

    #[test]
    fn unknown_predicate_is_reported() {
        let (ds, _) = toy();
        let mut list = literal_list(&[rat(1, 2), rat(1, 4)]);
        list.rules[0].antecedent = vec!["no-such-predicate".into()];
        assert!(matches!(
            capture_counts(&list, &ds),
            Err(ListError::UnknownPredicate(_))
        ));
    }
}
