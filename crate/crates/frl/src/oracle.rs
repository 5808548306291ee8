//! Exhaustive enumeration of compatible (falling) rule lists on small
//! instances: ground truth for optimality, feasibility and bound soundness.
//!
//! The oracle recurses over canonical antecedent sequences, pruning only on
//! the hard monotonicity constraint (and on zero capture, which makes a
//! proportion undefined) — never on the prefix bounds it is used to certify.
//! Risk is recomputed by a naive per-row scan so the two risk paths stay
//! independent implementations.

use crate::antecedent::AntecedentSet;
use crate::bits::Bits;
use crate::bounds::{
    else_close_soft_objective, prefix_bound_frl, prefix_bound_soft, should_terminate, BoundInputs,
};
use crate::dataset::BinaryDataset;
use crate::rational::{pos_part, rat_counts, Rat};
use crate::rulelist::{default_tau, ElseClause, ListMode, PrefixState, Rule, RuleList};
use num::{One, Zero};

/// Tractability guards: the oracle is for desk-scale instances only.
pub const MAX_ORACLE_ANTECEDENTS: usize = 14;
pub const MAX_ORACLE_LEN: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(
        "instance exceeds oracle guards: {m} antecedents (max {MAX_ORACLE_ANTECEDENTS}), \
         max_len {max_len} (max {MAX_ORACLE_LEN})"
    )]
    GuardExceeded { m: usize, max_len: usize },
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best_objective: Rat,
    pub best_list: RuleList,
    /// Canonical sequences visited (including the empty one).
    pub explored: u64,
}

/// Per-clause (positive, negative) counts by scanning every row for the
/// first antecedent it satisfies; the else clause is last.
fn scan_counts(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    seq: &[usize],
) -> Vec<(usize, usize)> {
    let mut counts = vec![(0usize, 0usize); seq.len() + 1];
    for row in 0..dataset.n {
        let clause = seq
            .iter()
            .position(|&a| antecedents.antecedents[a].bits.get(row))
            .unwrap_or(seq.len());
        if dataset.labels.get(row) {
            counts[clause].0 += 1;
        } else {
            counts[clause].1 += 1;
        }
    }
    counts
}

fn hard_objective(counts: &[(usize, usize)], n: usize, tau: &Rat, w: &Rat, c: &Rat) -> Rat {
    let mut numerator = Rat::zero();
    for &(pos, neg) in counts {
        if pos + neg == 0 {
            continue;
        }
        if rat_counts(pos, pos + neg) > *tau {
            numerator += rat_counts(neg, 1);
        } else {
            numerator += w * rat_counts(pos, 1);
        }
    }
    numerator / rat_counts(n, 1) + c * rat_counts(counts.len() - 1, 1)
}

fn soft_objective(
    counts: &[(usize, usize)],
    n: usize,
    tau: &Rat,
    w: &Rat,
    c: &Rat,
    c1: &Rat,
) -> Rat {
    let mut running_min = Rat::one();
    let mut penalty = Rat::zero();
    for &(pos, neg) in counts {
        if pos + neg == 0 {
            continue;
        }
        let prop = rat_counts(pos, pos + neg);
        penalty += pos_part(&(&prop - &running_min));
        if prop < running_min {
            running_min = prop;
        }
    }
    hard_objective(counts, n, tau, w, c) + c1 * penalty
}

fn list_from_counts(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    seq: &[usize],
    counts: &[(usize, usize)],
) -> RuleList {
    let rules = seq
        .iter()
        .zip(counts)
        .map(|(&a, &(pos, neg))| {
            let prop = rat_counts(pos, pos + neg);
            Rule {
                antecedent: antecedents.antecedents[a].names(dataset),
                n_pos: pos,
                n_neg: neg,
                proportion: prop.clone(),
                estimate: prop,
            }
        })
        .collect();
    let &(pos, neg) = counts.last().expect("else clause");
    let prop = if pos + neg == 0 {
        Rat::zero()
    } else {
        rat_counts(pos, pos + neg)
    };
    RuleList {
        mode: ListMode::Falling,
        rules,
        else_clause: ElseClause {
            n_pos: pos,
            n_neg: neg,
            proportion: prop.clone(),
            estimate: prop,
        },
    }
}

/// Input-order-independent tie break: smaller objective, then fewer rules,
/// then lexicographically smaller antecedent names.
fn better(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    candidate: &(Rat, Vec<usize>),
    incumbent: &Option<(Rat, Vec<usize>)>,
) -> bool {
    let Some((best_obj, best_seq)) = incumbent else {
        return true;
    };
    if &candidate.0 != best_obj {
        return &candidate.0 < best_obj;
    }
    let names = |seq: &[usize]| -> Vec<Vec<String>> {
        seq.iter()
            .map(|&a| antecedents.antecedents[a].names(dataset))
            .collect()
    };
    (candidate.1.len(), names(&candidate.1)) < (best_seq.len(), names(best_seq))
}

struct Enumerator<'a> {
    dataset: &'a BinaryDataset,
    antecedents: &'a AntecedentSet,
    tau: Rat,
    w: &'a Rat,
    c: &'a Rat,
    /// None: hard program (falling closes only); Some(C₁): soft program.
    c1: Option<&'a Rat>,
    max_len: usize,
    best: Option<(Rat, Vec<usize>)>,
    explored: u64,
}

impl Enumerator<'_> {
    fn recurse(&mut self, seq: &mut Vec<usize>, used: &mut [bool], alive: &Bits, last_alpha: &Rat) {
        self.explored += 1;

        let tilde_pos = alive.count_and(&self.dataset.labels);
        let tilde_total = alive.count_ones();
        let tilde_alpha = if tilde_total == 0 {
            Rat::zero()
        } else {
            rat_counts(tilde_pos, tilde_total)
        };

        let close_valid = match self.c1 {
            Some(_) => true, // every compatible list is admissible
            None => tilde_alpha <= *last_alpha,
        };
        if close_valid {
            let counts = scan_counts(self.dataset, self.antecedents, seq);
            let objective = match self.c1 {
                Some(c1) => soft_objective(&counts, self.dataset.n, &self.tau, self.w, self.c, c1),
                None => hard_objective(&counts, self.dataset.n, &self.tau, self.w, self.c),
            };
            let candidate = (objective, seq.clone());
            if better(self.dataset, self.antecedents, &candidate, &self.best) {
                self.best = Some(candidate);
            }
        }

        if seq.len() == self.max_len {
            return;
        }
        for a in 0..self.antecedents.len() {
            if used[a] {
                continue;
            }
            let (pos, neg) =
                self.antecedents.antecedents[a].coverage_counts(alive, &self.dataset.labels);
            if pos + neg == 0 {
                continue;
            }
            let alpha = rat_counts(pos, pos + neg);
            if self.c1.is_none() && alpha > *last_alpha {
                continue; // a falling list can never pass through this prefix
            }
            let mut next_alive = alive.clone();
            next_alive.remove(&self.antecedents.antecedents[a].bits);
            used[a] = true;
            seq.push(a);
            self.recurse(seq, used, &next_alive, &alpha);
            seq.pop();
            used[a] = false;
        }
    }
}

fn check_guards(antecedents: &AntecedentSet, max_len: usize) -> Result<(), OracleError> {
    if antecedents.len() > MAX_ORACLE_ANTECEDENTS || max_len > MAX_ORACLE_LEN {
        return Err(OracleError::GuardExceeded {
            m: antecedents.len(),
            max_len,
        });
    }
    Ok(())
}

fn run_enumerator(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    w: &Rat,
    c: &Rat,
    c1: Option<&Rat>,
    max_len: usize,
    start: &[usize],
) -> (Option<(Rat, Vec<usize>)>, u64) {
    let mut used = vec![false; antecedents.len()];
    let mut alive = Bits::ones(dataset.n);
    let mut last_alpha = Rat::one();
    for &a in start {
        let (pos, neg) = antecedents.antecedents[a].coverage_counts(&alive, &dataset.labels);
        last_alpha = rat_counts(pos, pos + neg);
        alive.remove(&antecedents.antecedents[a].bits);
        used[a] = true;
    }
    let mut seq = start.to_vec();
    let mut e = Enumerator {
        dataset,
        antecedents,
        tau: default_tau(w),
        w,
        c,
        c1,
        max_len,
        best: None,
        explored: 0,
    };
    e.recurse(&mut seq, &mut used, &alive, &last_alpha);
    (e.best, e.explored)
}

/// Exact minimum of L over all compatible falling rule lists with at most
/// `max_len` rules drawn without repetition from the antecedent set.
pub fn enumerate_optimal_frl(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    w: &Rat,
    c: &Rat,
    max_len: usize,
) -> Result<OracleResult, OracleError> {
    check_guards(antecedents, max_len)?;
    let (best, explored) = run_enumerator(dataset, antecedents, w, c, None, max_len, &[]);
    let (best_objective, seq) = best.expect("the trivial falling rule list always exists");
    let counts = scan_counts(dataset, antecedents, &seq);
    Ok(OracleResult {
        best_objective,
        best_list: list_from_counts(dataset, antecedents, &seq, &counts),
        explored,
    })
}

/// Exact minimum of L̃ over all compatible rule lists (no monotonicity
/// constraint) with at most `max_len` rules, no repetition.
pub fn enumerate_optimal_soft(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    w: &Rat,
    c: &Rat,
    c1: &Rat,
    max_len: usize,
) -> Result<OracleResult, OracleError> {
    check_guards(antecedents, max_len)?;
    let (best, explored) = run_enumerator(dataset, antecedents, w, c, Some(c1), max_len, &[]);
    let (best_objective, seq) = best.expect("the trivial rule list always exists");
    let counts = scan_counts(dataset, antecedents, &seq);
    Ok(OracleResult {
        best_objective,
        best_list: list_from_counts(dataset, antecedents, &seq, &counts),
        explored,
    })
}

/// Statement (1) of the feasibility equivalence, decided the slow way: does
/// any compatible falling rule list (of any length) begin with this prefix?
pub fn falling_extension_exists(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    prefix: &[usize],
) -> bool {
    fn search(
        dataset: &BinaryDataset,
        antecedents: &AntecedentSet,
        used: &mut [bool],
        alive: &Bits,
        last_alpha: &Rat,
    ) -> bool {
        let tilde_pos = alive.count_and(&dataset.labels);
        let tilde_total = alive.count_ones();
        let tilde_alpha = if tilde_total == 0 {
            Rat::zero()
        } else {
            rat_counts(tilde_pos, tilde_total)
        };
        if tilde_alpha <= *last_alpha {
            return true;
        }
        for a in 0..antecedents.len() {
            if used[a] {
                continue;
            }
            let (pos, neg) = antecedents.antecedents[a].coverage_counts(alive, &dataset.labels);
            if pos + neg == 0 {
                continue;
            }
            let alpha = rat_counts(pos, pos + neg);
            if alpha > *last_alpha {
                continue;
            }
            let mut next = alive.clone();
            next.remove(&antecedents.antecedents[a].bits);
            used[a] = true;
            let found = search(dataset, antecedents, used, &next, &alpha);
            used[a] = false;
            if found {
                return true;
            }
        }
        false
    }

    let mut used = vec![false; antecedents.len()];
    let mut alive = Bits::ones(dataset.n);
    let mut last_alpha = Rat::one();
    for &a in prefix {
        let (pos, neg) = antecedents.antecedents[a].coverage_counts(&alive, &dataset.labels);
        if pos + neg == 0 {
            return false; // not a representable prefix
        }
        last_alpha = rat_counts(pos, pos + neg);
        alive.remove(&antecedents.antecedents[a].bits);
        used[a] = true;
    }
    search(dataset, antecedents, &mut used, &alive, &last_alpha)
}

/// Outcome of checking one prefix bound against exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub bound: Rat,
    /// Minimum objective over the enumerated extensions, when any exist.
    pub enumerated_min: Option<Rat>,
    /// `enumerated_min - bound`; non-negative iff the bound is sound.
    pub gap: Option<Rat>,
    /// Whether the terminating condition held (hard bound only).
    pub terminating: bool,
    pub sound: bool,
}

fn prefix_state_for(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    prefix: &[usize],
    w: &Rat,
) -> PrefixState {
    let mut state = PrefixState::empty(dataset);
    for &a in prefix {
        state = state
            .extend(antecedents, a, dataset, w)
            .expect("prefix rules must capture rows");
    }
    state
}

/// Certifies L*(e) against the enumerated minimum over every compatible
/// falling rule list beginning with `prefix`.
pub fn verify_prefix_bound_hard(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    prefix: &[usize],
    w: &Rat,
    c: &Rat,
) -> Result<BoundCheck, OracleError> {
    check_guards(antecedents, MAX_ORACLE_LEN)?;
    let state = prefix_state_for(dataset, antecedents, prefix, w);
    let inputs = BoundInputs::from_prefix_hard(&state, w, c);
    let bound = prefix_bound_frl(&inputs, w, c);
    let terminating = should_terminate(&inputs, w, c);
    let (best, _) = run_enumerator(dataset, antecedents, w, c, None, antecedents.len(), prefix);
    let enumerated_min = best.map(|(obj, _)| obj);
    let gap = enumerated_min.as_ref().map(|m| m - &bound);
    let sound = gap.as_ref().map(|g| g >= &Rat::zero()).unwrap_or(true);
    Ok(BoundCheck {
        bound,
        enumerated_min,
        gap,
        terminating,
        sound,
    })
}

/// Certifies L̃*(e) against the enumerated minimum over compatible rule
/// lists extending `prefix` by at most `extra_len` rules (the enumerated
/// set is a subset of everything the bound covers, so bound ≤ min must
/// still hold), and against L̃(ē) itself.
pub fn verify_prefix_bound_soft(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    prefix: &[usize],
    w: &Rat,
    c: &Rat,
    c1: &Rat,
    extra_len: usize,
) -> Result<BoundCheck, OracleError> {
    check_guards(antecedents, extra_len)?;
    let state = prefix_state_for(dataset, antecedents, prefix, w);
    let inputs = BoundInputs::from_prefix_soft(&state, w, c, c1);
    let bound = prefix_bound_soft(&inputs, w, c, c1);
    let max_len = (prefix.len() + extra_len).min(antecedents.len());
    let (best, _) = run_enumerator(dataset, antecedents, w, c, Some(c1), max_len, prefix);
    let enumerated_min = best.map(|(obj, _)| obj);
    let ebar = else_close_soft_objective(&inputs, w, c1);
    let sound = enumerated_min.as_ref().map(|m| &bound <= m).unwrap_or(true) && bound <= ebar;
    let gap = enumerated_min.as_ref().map(|m| m - &bound);
    Ok(BoundCheck {
        bound,
        enumerated_min,
        gap,
        terminating: false,
        sound,
    })
}
