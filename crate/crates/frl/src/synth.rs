//! Synthetic desk-scale instances for the oracle checker and the test
//! suites: random binary datasets, random antecedent pools and random
//! prefixes, all deterministic under a seeded generator.

use crate::antecedent::{Antecedent, AntecedentSet};
use crate::bits::Bits;
use crate::dataset::{BinaryDataset, Predicate, PredicateKind};
use crate::rational::{rat_counts, Rat};
use crate::rulelist::{ListMode, PrefixState, RuleList};
use rand::Rng;

/// Builds a dataset and singleton antecedents from explicit row sets.
pub fn instance_from_rows(
    n: usize,
    positives: Vec<usize>,
    antecedent_rows: Vec<Vec<usize>>,
) -> (BinaryDataset, AntecedentSet) {
    let labels = Bits::from_indices(n, positives);
    let predicates: Vec<Predicate> = (0..antecedent_rows.len())
        .map(|i| Predicate {
            name: format!("p{i}"),
            column: format!("p{i}"),
            kind: PredicateKind::Category { value: "1".into() },
        })
        .collect();
    let bits: Vec<Bits> = antecedent_rows
        .iter()
        .map(|rows| Bits::from_indices(n, rows.iter().copied()))
        .collect();
    let dataset = BinaryDataset::from_bits(predicates, bits.clone(), labels);
    let all = Bits::ones(n);
    let antecedents = bits
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let (support_pos, support_neg) = b.count_captured(&all, &dataset.labels);
            Antecedent {
                predicate_ids: vec![i],
                bits: b,
                support_pos,
                support_neg,
            }
        })
        .collect();
    (dataset, AntecedentSet { antecedents })
}

/// A random instance with both classes present and every antecedent
/// capturing at least one row.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n_rows: usize,
    m: usize,
) -> (BinaryDataset, AntecedentSet) {
    assert!(n_rows >= 2 && m >= 1);
    let positive_rate = rng.gen_range(0.2..0.8);
    let mut positives: Vec<usize> = (0..n_rows)
        .filter(|_| rng.gen::<f64>() < positive_rate)
        .collect();
    if positives.is_empty() {
        positives.push(rng.gen_range(0..n_rows));
    }
    if positives.len() == n_rows {
        positives.pop();
    }

    let mut antecedent_rows = Vec::with_capacity(m);
    while antecedent_rows.len() < m {
        let density = rng.gen_range(0.1..0.6);
        let rows: Vec<usize> = (0..n_rows).filter(|_| rng.gen::<f64>() < density).collect();
        if !rows.is_empty() {
            antecedent_rows.push(rows);
        }
    }
    instance_from_rows(n_rows, positives, antecedent_rows)
}

/// A random prefix built by random zero-capture-free extension. With
/// `falling` set, each added rule keeps the proportion sequence
/// non-increasing (the precondition of the feasibility statements).
pub fn random_prefix<R: Rng>(
    rng: &mut R,
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    max_len: usize,
    falling: bool,
) -> Vec<usize> {
    let w = crate::rational::rat_int(1); // risk classification is irrelevant here
    let mut state = PrefixState::empty(dataset);
    let mut used = vec![false; antecedents.len()];
    let mut prefix = Vec::new();
    while prefix.len() < max_len {
        let last = state.last_alpha();
        let eligible: Vec<usize> = (0..antecedents.len())
            .filter(|&id| {
                if used[id] {
                    return false;
                }
                let (pos, neg) =
                    antecedents.antecedents[id].coverage_counts(state.alive(), &dataset.labels);
                if pos + neg == 0 {
                    return false;
                }
                !falling || rat_counts(pos, pos + neg) <= last
            })
            .collect();
        if eligible.is_empty() {
            break;
        }
        let id = eligible[rng.gen_range(0..eligible.len())];
        state = state
            .extend(antecedents, id, dataset, &w)
            .expect("eligible candidates capture rows");
        used[id] = true;
        prefix.push(id);
        if rng.gen::<f64>() < 0.35 {
            break;
        }
    }
    prefix
}

/// A random compatible rule list (not necessarily falling), closed from a
/// random prefix.
pub fn random_compatible_list<R: Rng>(
    rng: &mut R,
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    max_len: usize,
) -> RuleList {
    let w = crate::rational::rat_int(1);
    let prefix = random_prefix(rng, dataset, antecedents, max_len, false);
    let mut state = PrefixState::empty(dataset);
    for id in prefix {
        state = state.extend(antecedents, id, dataset, &w).unwrap();
    }
    state.close(antecedents, dataset, ListMode::Falling)
}

/// Rebuilds the prefix state for a sequence of antecedent ids.
pub fn prefix_state(
    dataset: &BinaryDataset,
    antecedents: &AntecedentSet,
    prefix: &[usize],
    w: &Rat,
) -> PrefixState {
    let mut state = PrefixState::empty(dataset);
    for &id in prefix {
        state = state
            .extend(antecedents, id, dataset, w)
            .expect("prefix rules capture rows");
    }
    state
}

/// The feasibility statement "α̃ ≤ α_last" checked directly on a prefix
/// state (statement (2) of the equivalence; `bounds::is_feasible` is the
/// integer statement (3), and the oracle decides statement (1) by search).
pub fn alpha_tilde_feasible(state: &PrefixState) -> bool {
    state.tilde_alpha() <= state.last_alpha()
}

/// The instance used to contrast the two programs: every antecedent leaves
/// a remainder richer in positives than its own capture, so no nonempty
/// prefix is feasible and the hard program can only produce the trivial
/// list, while at C₁ = 0.5 a rule that sheds negatives is worth its
/// monotonicity penalty under w = 7.
pub fn infeasible_style_instance() -> (BinaryDataset, AntecedentSet) {
    // 50 rows: 10 positives (0..10), 40 negatives (10..50).
    let antecedent_rows: Vec<Vec<usize>> = vec![
        (0..1).chain(10..26).collect(), // 1+/16-: the soft winner
        (1..2).chain(26..36).collect(), // 1+/10-
        (2..4).chain(36..50).collect(), // 2+/14-: proportion exactly 1/8
        (10..18).collect(),             // 0+/8-
    ];
    instance_from_rows(50, (0..10).collect(), antecedent_rows)
}

/// Per-instance sanity for the instance above, used by tests.
pub fn assert_all_prefixes_infeasible(dataset: &BinaryDataset, antecedents: &AntecedentSet) {
    for id in 0..antecedents.len() {
        let state = prefix_state(dataset, antecedents, &[id], &crate::rational::rat_int(7));
        assert!(
            state.tilde_alpha() > state.last_alpha(),
            "antecedent {id} starts a feasible prefix"
        );
    }
}
