//! Prefix feasibility, the necessary optimality condition, and the prefix
//! bounds that prune the search.
//!
//! The hard bound L* and everything it is compared against are exact
//! rationals. The soft bound L̃* has one branch whose infimum involves a
//! square root; that branch is evaluated in `f64` and lowered by a fixed
//! margin before it enters any comparison, so a pruning decision can never
//! rest on a value that exceeds the true bound.

use crate::rational::{from_f64_exact, pos_part, rat, rat_counts, rat_int, to_f64, Rat};
use crate::rulelist::PrefixState;
use num::{One, Zero};

/// Downward error margin applied to the floating-point branch of the soft
/// bound.
const SOFT_MARGIN_DEN: i64 = 1_000_000_000_000;

/// Everything the bound formulas need to know about a prefix.
#[derive(Debug, Clone)]
pub struct BoundInputs {
    pub n: usize,
    pub tilde_pos: usize,
    pub tilde_neg: usize,
    /// α of the last rule; 1 for the empty prefix.
    pub last_alpha: Rat,
    /// Minimum rule proportion; 1 for the empty prefix.
    pub min_alpha: Rat,
    /// Proportion of positives among rows not captured by the prefix.
    pub tilde_alpha: Rat,
    /// L(e) for the hard bound, L̃(e) for the soft bound.
    pub prefix_objective: Rat,
}

impl BoundInputs {
    pub fn from_prefix_hard(prefix: &PrefixState, w: &Rat, c: &Rat) -> Self {
        BoundInputs {
            n: prefix.n(),
            tilde_pos: prefix.tilde_pos(),
            tilde_neg: prefix.tilde_neg(),
            last_alpha: prefix.last_alpha(),
            min_alpha: prefix.min_alpha().clone(),
            tilde_alpha: prefix.tilde_alpha(),
            prefix_objective: prefix.prefix_objective(w, c),
        }
    }

    pub fn from_prefix_soft(prefix: &PrefixState, w: &Rat, c: &Rat, c1: &Rat) -> Self {
        BoundInputs {
            prefix_objective: prefix.soft_prefix_objective(w, c, c1),
            ..Self::from_prefix_hard(prefix, w, c)
        }
    }
}

/// Feasibility of a compatible falling prefix: some compatible falling rule
/// list extends it iff ñ⁻ ≥ (1/α_{|e|−1} − 1)·ñ⁺, checked here in the exact
/// cross-multiplied form ñ⁻·α ≥ (1−α)·ñ⁺ (which also covers α = 0).
pub fn is_feasible(inputs: &BoundInputs) -> bool {
    let alpha = &inputs.last_alpha;
    rat_counts(inputs.tilde_neg, 1) * alpha
        >= (Rat::one() - alpha) * rat_counts(inputs.tilde_pos, 1)
}

/// A rule can appear in an optimal falling list only if its proportion
/// strictly exceeds 1/(1+w).
pub fn passes_necessary_condition(alpha: &Rat, w: &Rat) -> bool {
    alpha * (rat_int(1) + w) > Rat::one()
}

/// (1/α − 1)·ñ⁺/n, with the 0·∞ limit resolved to 0 when ñ⁺ = 0.
fn reciprocal_term(alpha: &Rat, tilde_pos: usize, n: usize) -> Rat {
    if tilde_pos == 0 {
        return Rat::zero();
    }
    debug_assert!(
        alpha > &Rat::zero(),
        "positive rows remain but the last proportion is zero"
    );
    (alpha.recip() - Rat::one()) * rat_counts(tilde_pos, n)
}

/// The hard prefix bound L*(e): a lower bound on the objective of every
/// compatible falling rule list that begins with the (feasible) prefix.
pub fn prefix_bound_frl(inputs: &BoundInputs, w: &Rat, c: &Rat) -> Rat {
    let n = inputs.n;
    let one_more = reciprocal_term(&inputs.last_alpha, inputs.tilde_pos, n) + c;
    let miss_all = w * rat_counts(inputs.tilde_pos, n);
    let keep_all = rat_counts(inputs.tilde_neg, n);
    &inputs.prefix_objective + one_more.min(miss_all).min(keep_all)
}

/// True when closing the prefix right now is already optimal among its
/// compatible falling extensions; in that case L(ē) = L*(e) exactly.
pub fn should_terminate(inputs: &BoundInputs, w: &Rat, c: &Rat) -> bool {
    let n = inputs.n;
    let miss_all = w * rat_counts(inputs.tilde_pos, n);
    let keep_all = rat_counts(inputs.tilde_neg, n);
    c >= &(miss_all.min(keep_all) - reciprocal_term(&inputs.last_alpha, inputs.tilde_pos, n))
}

/// Objective of the compatible falling rule list ē = {e, α̃}: L(e) plus the
/// cheaper of predicting all remaining rows positive or negative.
pub fn else_close_objective(inputs: &BoundInputs, w: &Rat) -> Rat {
    let n = inputs.n;
    let miss_all = w * rat_counts(inputs.tilde_pos, n);
    let keep_all = rat_counts(inputs.tilde_neg, n);
    &inputs.prefix_objective + miss_all.min(keep_all)
}

/// Soft objective of ē under L̃: the else clause additionally pays its
/// overshoot over the prefix minimum.
pub fn else_close_soft_objective(inputs: &BoundInputs, w: &Rat, c1: &Rat) -> Rat {
    else_close_objective(inputs, w) + c1 * pos_part(&(&inputs.tilde_alpha - &inputs.min_alpha))
}

/// Analytic infimum of g(β) = (1/β − 1)·ñ⁺/n + C + C₁(β − α_min) over
/// β ∈ (ζ, 1]: g(β*) at the stationary point β* = √(ñ⁺/(C₁n)) when that
/// lies inside the interval, min(g(ζ), g(1)) otherwise. Requires C₁ > 0
/// and ζ < 1.
pub fn g_infimum(
    tilde_pos: usize,
    n: usize,
    c: &Rat,
    c1: &Rat,
    zeta: &Rat,
    min_alpha: &Rat,
) -> f64 {
    assert!(c1 > &Rat::zero(), "the analytic infimum requires C1 > 0");
    let (c, c1f) = (to_f64(c), to_f64(c1));
    let (zeta, min_alpha) = (to_f64(zeta), to_f64(min_alpha));
    let ratio = tilde_pos as f64 / n as f64;
    let g = |beta: f64| -> f64 {
        let risk = if tilde_pos == 0 {
            0.0
        } else if beta == 0.0 {
            f64::INFINITY
        } else {
            (1.0 / beta - 1.0) * ratio
        };
        risk + c + c1f * (beta - min_alpha)
    };
    let beta_star = (ratio / c1f).sqrt();
    if zeta < beta_star && beta_star <= 1.0 {
        g(beta_star)
    } else {
        g(zeta).min(g(1.0))
    }
}

/// The soft prefix bound L̃*(e): a lower bound on L̃ of every compatible
/// rule list beginning with the (compatible) prefix. No feasibility is
/// required; the softly falling program is unconstrained.
pub fn prefix_bound_soft(inputs: &BoundInputs, w: &Rat, c: &Rat, c1: &Rat) -> Rat {
    let n = inputs.n;
    let overshoot = pos_part(&(&inputs.tilde_alpha - &inputs.min_alpha));

    // (iii) capture the rest with low-probability rules; (iv) with
    // high-probability rules.
    let miss_all = w * rat_counts(inputs.tilde_pos, n) + c1 * &overshoot;
    let keep_all = rat_counts(inputs.tilde_neg, n) + c1 * &overshoot;
    let mut best = miss_all.min(keep_all);

    // (i) one more rule below the prefix minimum; +∞ when the minimum is
    // already zero but positives remain.
    if inputs.min_alpha > Rat::zero() || inputs.tilde_pos == 0 {
        let indicator = if inputs.tilde_alpha >= inputs.min_alpha {
            w * rat_counts(inputs.tilde_pos, n)
        } else {
            Rat::zero()
        };
        let branch = reciprocal_term(&inputs.min_alpha, inputs.tilde_pos, n)
            + c
            + c1 * &overshoot
            + indicator;
        best = best.min(branch);
    }

    // (ii) one more rule above ζ = max(α_min, α̃, 1/(1+w)); empty range when
    // ζ ≥ 1.
    let zeta = inputs
        .min_alpha
        .clone()
        .max(inputs.tilde_alpha.clone())
        .max(crate::rulelist::default_tau(w));
    if zeta < Rat::one() {
        let branch = if c1.is_zero() {
            // g degenerates to (1/β − 1)·ñ⁺/n + C, whose infimum over the
            // interval is the exact value C at β = 1.
            c.clone()
        } else {
            let inf = g_infimum(inputs.tilde_pos, n, c, c1, &zeta, &inputs.min_alpha);
            // g > 0 on (ζ, 1] since β > ζ ≥ α_min, so clamping the lowered
            // value at zero cannot lift it above the true infimum.
            pos_part(&(from_f64_exact(inf) - rat(1, SOFT_MARGIN_DEN)))
        };
        best = best.min(branch);
    }

    &inputs.prefix_objective + best
}
