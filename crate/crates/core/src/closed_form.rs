//! Analytic optima of the two continuous subproblems used by the solvers.
//!
//! * [`interior_optimum`]: minimise `sum(alpha_i + beta_i x_i + c x_i^2 / (2 lambda))`
//!   subject only to `sum(x_i) >= p`, with `x_i` free reals. The constraint is
//!   tight at the optimum and all marginal costs `beta_i + c x_i / lambda`
//!   coincide, which pins down
//!   `x_i = p / H + lambda (sum_j beta_j - H beta_i) / (H c)`.
//! * [`multi_delivery_cost`]: the cheapest way for one supplier to deliver a
//!   total `x` in several batches, each at least `m`.

use crate::error::{Error, Result};
use crate::model::{holding_cost, Supplier};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorSolution {
    pub volumes: Vec<Rational>,
    pub residual_demand: Rational,
    pub group_size: usize,
}

/// Unconstrained optimum for a group of suppliers with unit costs `betas`
/// jointly covering `p`.
///
/// Components may be negative for extreme spreads of `betas`; box feasibility
/// is the caller's concern.
pub fn interior_optimum(
    betas: &[i64],
    p: Rational,
    lambda: Rational,
    holding_rate: i64,
) -> InteriorSolution {
    assert!(!betas.is_empty(), "interior group must be non-empty");
    let h = Rational::from(betas.len() as i64);
    let beta_sum: Rational = betas.iter().map(|&b| Rational::from(b)).sum();
    let scale = lambda / (h * Rational::from(holding_rate));
    let share = p / h;
    let volumes = betas
        .iter()
        .map(|&b| share + (beta_sum - h * Rational::from(b)) * scale)
        .collect();
    InteriorSolution {
        volumes,
        residual_demand: p,
        group_size: betas.len(),
    }
}

/// `beta_i + c_hold * x_i / lambda` for every component.
pub fn marginal_costs(
    sol: &InteriorSolution,
    betas: &[i64],
    lambda: Rational,
    holding_rate: i64,
) -> Vec<Rational> {
    let rate = Rational::from(holding_rate) / lambda;
    sol.volumes
        .iter()
        .zip(betas)
        .map(|(&x, &b)| Rational::from(b) + rate * x)
        .collect()
}

/// Cheapest split of a total `x` from supplier `s` into equal batches.
///
/// For a fixed batch count `r` the holding term is convex, so the equal
/// split `x / r` is optimal; every `r` in `1..=floor(x / m)` is enumerated.
/// Ties go to the smaller `r`. Returns `(r, cost)`.
pub fn multi_delivery_cost(
    s: &Supplier,
    x: Rational,
    lambda: Rational,
    holding_rate: i64,
) -> Result<(u32, Rational)> {
    if x < Rational::from(s.min_batch) || x > Rational::from(s.max_total) {
        return Err(Error::VolumeOutOfDomain {
            volume: x,
            min: s.min_batch,
            max: s.max_total,
        });
    }
    let max_batches = (x / Rational::from(s.min_batch)).floor();
    let linear = Rational::from(s.beta) * x;
    let mut best: Option<(u32, Rational)> = None;
    for r in 1..=max_batches {
        let r_q = Rational::from(r);
        let batch = x / r_q;
        let cost = r_q * Rational::from(s.alpha)
            + linear
            + r_q * holding_cost(batch, lambda, holding_rate);
        if best.is_none_or(|(_, b)| cost < b) {
            best = Some((r as u32, cost));
        }
    }
    Ok(best.expect("at least one batch count is feasible"))
}
