//! Learning falling rule lists and softly falling rule lists from
//! binary-labeled tabular data.
//!
//! A falling rule list is an ordered sequence of if-then rules whose
//! positive-outcome probabilities are non-increasing down the list; a softly
//! falling rule list relaxes the hard monotonicity constraint into a penalty
//! and repairs violations afterwards with running minima. Both are learned by
//! Monte-Carlo search over compatible rule lists, pruned with provable prefix
//! bounds. A brute-force oracle certifies the bounds and optimality on small
//! instances.
//!
//! Everything that feeds a pruning decision is computed in exact rational
//! arithmetic; floating point appears only at display time and inside the
//! one square-root branch of the soft prefix bound (with a downward margin
//! so pruning stays sound).

pub mod antecedent;
pub mod bits;
pub mod bounds;
pub mod dataset;
pub mod eval;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod rulelist;
pub mod search;
pub mod synth;

pub use antecedent::{mine, Antecedent, AntecedentSet};
pub use bits::Bits;
pub use bounds::{
    g_infimum, is_feasible, passes_necessary_condition, prefix_bound_frl, prefix_bound_soft,
    should_terminate, BoundInputs,
};
pub use dataset::{load_csv, BinaryDataset, Predicate, PredicateKind, RawDataset};
pub use eval::{evaluate, render_rulelist, roc_sweep, EvalReport, SweepRow};
pub use model::ModelFile;
pub use oracle::{enumerate_optimal_frl, enumerate_optimal_soft, OracleResult};
pub use rational::Rat;
pub use rulelist::{ListMode, PrefixState, Rule, RuleList};
pub use search::{run_frl, run_soft_frl, SearchConfig, SearchTrace};
