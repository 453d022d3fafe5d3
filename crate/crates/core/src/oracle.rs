//! Exponential reference solvers for small single-delivery instances.
//!
//! Neither solver shares code with the dynamic program beyond the cost
//! primitives in [`crate::model`].
//!
//! * [`structural_oracle`] labels every supplier as absent, at its minimum,
//!   at its cap, or strictly interior. Fixed labels pin a volume; the
//!   interior group then takes the closed-form optimum for the residual
//!   demand and is kept only if every interior volume is strictly inside its
//!   bounds.
//! * [`grid_oracle`] enumerates every combination of volumes from a union of
//!   fine grids.

use serde::Serialize;

use crate::closed_form::interior_optimum;
use crate::error::{Error, Result};
use crate::model::{validate_instance, Delivery, Instance, Mode, Solution};
use crate::rational::Rational;

/// Largest supplier count the structural oracle accepts (`4^n` assignments).
pub const STRUCTURAL_MAX_SUPPLIERS: usize = 10;

/// Default bound on grid-oracle combinations.
pub const GRID_DEFAULT_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryLabel {
    Zero,
    AtMin,
    AtMax,
    Interior,
}

const LABELS: [BoundaryLabel; 4] = [
    BoundaryLabel::Zero,
    BoundaryLabel::AtMin,
    BoundaryLabel::AtMax,
    BoundaryLabel::Interior,
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryAssignment {
    pub labels: Vec<BoundaryLabel>,
}

impl BoundaryAssignment {
    /// All `4^n` assignments in lexicographic order.
    pub fn enumerate(n: usize) -> impl Iterator<Item = BoundaryAssignment> {
        let total = 4usize.pow(n as u32);
        (0..total).map(move |mut code| {
            let mut labels = vec![BoundaryLabel::Zero; n];
            for slot in labels.iter_mut().rev() {
                *slot = LABELS[code % 4];
                code /= 4;
            }
            BoundaryAssignment { labels }
        })
    }

    pub fn interior(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == BoundaryLabel::Interior)
            .map(|(i, _)| i)
            .collect()
    }

    /// Candidate volumes, or `None` when the assignment admits no valid
    /// point.
    pub fn realise(&self, inst: &Instance) -> Option<Vec<Rational>> {
        let mut volumes = vec![Rational::ZERO; inst.n()];
        let mut fixed = Rational::ZERO;
        for (i, &label) in self.labels.iter().enumerate() {
            let s = &inst.suppliers[i];
            volumes[i] = match label {
                BoundaryLabel::Zero | BoundaryLabel::Interior => Rational::ZERO,
                BoundaryLabel::AtMin => Rational::from(s.min_batch),
                BoundaryLabel::AtMax => Rational::from(s.max_total),
            };
            fixed = fixed + volumes[i];
        }

        let interior = self.interior();
        let demand = Rational::from(inst.demand);
        if interior.is_empty() {
            return (fixed >= demand).then_some(volumes);
        }
        // with the fixed part already covering demand, interior volume is waste
        let residual = demand - fixed;
        if !residual.is_positive() {
            return None;
        }
        let betas: Vec<i64> = interior.iter().map(|&i| inst.suppliers[i].beta).collect();
        let group = interior_optimum(&betas, residual, inst.lambda, inst.holding_rate);
        for (&i, &x) in interior.iter().zip(&group.volumes) {
            let s = &inst.suppliers[i];
            if x <= Rational::from(s.min_batch) || x >= Rational::from(s.max_total) {
                return None;
            }
            volumes[i] = x;
        }
        Some(volumes)
    }
}

fn check_small(inst: &Instance) -> Result<()> {
    if inst.mode != Mode::Single {
        return Err(Error::ModeMismatch {
            expected: Mode::Single,
        });
    }
    validate_instance(inst).into_result()
}

fn to_solution(inst: &Instance, volumes: &[Rational]) -> Result<Solution> {
    let deliveries = volumes
        .iter()
        .enumerate()
        .map(|(i, &v)| Delivery::new(i, v))
        .collect();
    Solution::from_deliveries(inst, deliveries)
}

/// Cheapest solution over all boundary/interior labellings.
pub fn structural_oracle(inst: &Instance) -> Result<Solution> {
    check_small(inst)?;
    if inst.n() > STRUCTURAL_MAX_SUPPLIERS {
        return Err(Error::ResourceLimit {
            what: "structural oracle",
            needed: 4u128.pow(inst.n() as u32),
            limit: 4u128.pow(STRUCTURAL_MAX_SUPPLIERS as u32),
        });
    }
    if inst.total_capacity() == inst.demand as i128 {
        // the only feasible point: every supplier at its cap
        let caps: Vec<Rational> = inst
            .suppliers
            .iter()
            .map(|s| Rational::from(s.max_total))
            .collect();
        return to_solution(inst, &caps);
    }

    let mut best: Option<Solution> = None;
    for assignment in BoundaryAssignment::enumerate(inst.n()) {
        let Some(volumes) = assignment.realise(inst) else {
            continue;
        };
        let candidate = to_solution(inst, &volumes)?;
        if best
            .as_ref()
            .is_none_or(|b| candidate.objective < b.objective)
        {
            best = Some(candidate);
        }
    }
    best.ok_or(Error::Infeasible)
}

/// Exhaustive search over `{0}` and the points of `[m_i, M_i]` on every grid
/// with step `1 / (H * c_hold * den(lambda))`, `H = 1..=bound`.
pub fn grid_oracle(inst: &Instance, denominator_bound: usize) -> Result<Solution> {
    grid_oracle_with_budget(inst, denominator_bound, GRID_DEFAULT_BUDGET)
}

/// Per-supplier value lists the grid oracle would enumerate, as integers
/// over a common denominator.
fn grid_values(inst: &Instance, bound: usize) -> (i128, Vec<Vec<i128>>) {
    use num_integer::Integer;
    let unit = inst.holding_rate as i128 * inst.lambda.den();
    let common = (1..=bound.max(1) as i128).fold(1i128, |acc, h| acc.lcm(&(h * unit)));
    let values = inst
        .suppliers
        .iter()
        .map(|s| {
            let mut vals = vec![0i128];
            let (lo, hi) = (s.min_batch as i128 * common, s.max_total as i128 * common);
            for v in lo..=hi {
                let on_some_grid =
                    (1..=bound.max(1) as i128).any(|h| v % (common / (h * unit)) == 0);
                if on_some_grid {
                    vals.push(v);
                }
            }
            vals
        })
        .collect();
    (common, values)
}

/// Number of combinations [`grid_oracle`] would examine.
pub fn grid_oracle_size(inst: &Instance, denominator_bound: usize) -> u128 {
    let (_, values) = grid_values(inst, denominator_bound);
    values
        .iter()
        .try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128))
        .unwrap_or(u128::MAX)
}

pub fn grid_oracle_with_budget(
    inst: &Instance,
    denominator_bound: usize,
    budget: u128,
) -> Result<Solution> {
    check_small(inst)?;
    let size = grid_oracle_size(inst, denominator_bound);
    if size > budget {
        return Err(Error::ResourceLimit {
            what: "grid oracle",
            needed: size,
            limit: budget,
        });
    }
    let (common, values) = grid_values(inst, denominator_bound);
    let costs: Vec<Vec<Rational>> = values
        .iter()
        .enumerate()
        .map(|(i, vals)| {
            vals.iter()
                .map(|&v| inst.batch_cost(i, Rational::new(v, common)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // odometer over all combinations
    let n = inst.n();
    let target = inst.demand as i128 * common;
    let mut digits = vec![0usize; n];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        let volume: i128 = (0..n).map(|i| values[i][digits[i]]).sum();
        if volume >= target {
            let cost: Rational = (0..n).map(|i| costs[i][digits[i]]).sum();
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, digits.clone()));
            }
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                let (_, digits) = best.ok_or(Error::Infeasible)?;
                let volumes: Vec<Rational> = digits
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| Rational::new(values[i][d], common))
                    .collect();
                return to_solution(inst, &volumes);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < values[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}
