//! Several deliveries per supplier.
//!
//! Two interchangeable routes are provided:
//!
//! * [`MultiStrategy::Aggregated`] keeps one table row per supplier and
//!   prices a supplier total `x` by its cheapest equal split into batches
//!   (see [`multi_delivery_cost`](crate::closed_form::multi_delivery_cost)).
//! * [`MultiStrategy::Duplication`] expands supplier `i` into batch copies
//!   that share the cap `M_i`. The copies of one supplier are solved as an
//!   exact-total knapsack over `0..=M_i`, whose table then prices the
//!   supplier in the outer recursion.
//!
//! Interior batches share the denominator `S * c_hold`, `S` being the number
//! of interior batches, so the grid guess runs up to the total batch bound.
//! A supplier exhausting its cap in `r` equal batches ships `M_i / r`, which
//! no grid guess up to that bound need contain; the duplication route
//! therefore also offers those exact cap splits at the total `M_i`.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{Delivery, Instance, Mode, Solution, Supplier};
use crate::rational::Rational;

use super::fill::{fill, Filled, Offers, SKIP};
use super::{
    backtrack, build_grid, check_ready, cost_scale, equal_split_table, guard_sum, lcm_up_to,
    scaled, sweep, Grid, SolveOptions, SolveReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiStrategy {
    #[default]
    Aggregated,
    Duplication,
}

/// Most batches supplier `s` can usefully deliver against demand `demand`.
///
/// Every batch of an optimal plan is needed to reach the demand, so all but
/// one of a supplier's batches fit below it: `r <= ceil(P / m)`. The shared
/// cap also gives `r <= floor(M / m)`.
pub fn max_batches(s: &Supplier, demand: i64) -> usize {
    if demand <= 0 {
        return 0;
    }
    let by_demand = (demand + s.min_batch - 1) / s.min_batch;
    let by_cap = s.max_total / s.min_batch;
    by_demand.min(by_cap) as usize
}

/// Sum of [`max_batches`] over all suppliers.
pub fn total_batch_bound(inst: &Instance) -> usize {
    inst.suppliers
        .iter()
        .map(|s| max_batches(s, inst.demand))
        .sum()
}

pub fn solve_multi(inst: &Instance) -> Result<SolveReport> {
    solve_multi_with(inst, MultiStrategy::Aggregated, &SolveOptions::default())
}

pub fn solve_multi_with(
    inst: &Instance,
    strategy: MultiStrategy,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let started = Instant::now();
    check_ready(inst, Mode::Multi)?;
    let guesses = 1..=total_batch_bound(inst).max(1);
    let (best_h, solution, per_h, cells) = match strategy {
        MultiStrategy::Aggregated => {
            let (h, table, per_h, cells) = sweep(guesses, |h| {
                let t = equal_split_table(inst, h, opts)?;
                let (opt, cells) = (t.optimum(), t.cells());
                Ok((t, opt, cells))
            })?;
            (h, backtrack(&table, inst)?, per_h, cells)
        }
        MultiStrategy::Duplication => {
            let (h, table, per_h, cells) = sweep(guesses, |h| {
                let t = DuplicationTable::build(inst, h, opts)?;
                let (opt, cells) = (t.optimum(), t.cells);
                Ok((t, opt, cells))
            })?;
            (h, table.backtrack(inst)?, per_h, cells)
        }
    };
    Ok(SolveReport {
        best_h,
        per_h,
        solution,
        elapsed: started.elapsed(),
        table_cells_filled: cells,
    })
}

/// Batch copies of one supplier: `phi[c][t]` is the cheapest way to deliver
/// exactly `t` with `c` copies.
#[derive(Debug, Clone)]
struct CopyGroup {
    batches: Offers,
    filled: Filled,
    /// Batch count of the equal cap split, when it beats the grid knapsack.
    cap_split: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct DuplicationTable {
    grid: Grid,
    scale: i128,
    groups: Vec<CopyGroup>,
    totals: Vec<Offers>,
    outer: Filled,
    cells: u64,
}

impl DuplicationTable {
    pub fn build(inst: &Instance, h: usize, opts: &SolveOptions) -> Result<Self> {
        let grid = build_grid(inst, h);
        let copies: Vec<usize> = inst
            .suppliers
            .iter()
            .map(|s| max_batches(s, inst.demand))
            .collect();
        let cells = inst.n() as u64 * grid.demand_points as u64
            + inst
                .suppliers
                .iter()
                .zip(&copies)
                .map(|(s, &c)| c as u64 * (grid.index_of(s.max_total) as u64 + 1))
                .sum::<u64>();
        opts.check_cells(cells)?;

        let most = copies.iter().copied().max().unwrap_or(1) as i128;
        let scale = cost_scale(inst, &grid, lcm_up_to(most)?)?;
        let mut groups = Vec::with_capacity(inst.n());
        let mut totals = Vec::with_capacity(inst.n());
        for (k, s) in inst.suppliers.iter().enumerate() {
            let mut batches = Offers::default();
            for j in grid.candidate_indices(s) {
                batches.push(j, scaled(inst.batch_cost(k, grid.volume(j))?, scale)?);
            }
            guard_sum(&vec![batches.clone(); copies[k]])?;
            let rows = vec![batches.clone(); copies[k]];
            let filled = fill(grid.index_of(s.max_total) + 1, &rows, false);

            let last = filled.phi.last().expect("base row present");
            let mut offer = Offers::default();
            for (t, cost) in last.iter().enumerate().skip(1) {
                if let Some(c) = cost {
                    offer.push(t, *c);
                }
            }
            let cap_split = best_cap_split(inst, k, copies[k], scale)?.and_then(|(r, cost)| {
                let at_cap = grid.index_of(s.max_total);
                match offer.amounts.last() {
                    Some(&t) if t == at_cap => {
                        let slot = offer.costs.last_mut().expect("paired with amounts");
                        (cost < *slot).then(|| {
                            *slot = cost;
                            r
                        })
                    }
                    _ => {
                        offer.push(at_cap, cost);
                        Some(r)
                    }
                }
            });
            totals.push(offer);
            groups.push(CopyGroup {
                batches,
                filled,
                cap_split,
            });
        }
        guard_sum(&totals)?;
        let outer = fill(grid.demand_points, &totals, true);
        Ok(DuplicationTable {
            grid,
            scale,
            groups,
            totals,
            outer,
            cells,
        })
    }

    pub fn optimum(&self) -> Option<Rational> {
        let row = self.outer.phi.last().expect("base row present");
        row.last()
            .copied()
            .flatten()
            .map(|v| Rational::new(v, self.scale))
    }

    pub fn backtrack(&self, inst: &Instance) -> Result<Solution> {
        let expected = self.optimum().ok_or(Error::Infeasible)?;
        let mut p = self.grid.demand_points - 1;
        let mut deliveries = Vec::new();
        for k in (1..self.outer.phi.len()).rev() {
            let pick = self.outer.choice[k][p];
            if pick == SKIP {
                continue;
            }
            let mut t = self.totals[k - 1].amounts[pick as usize];
            p = p.saturating_sub(t);
            let group = &self.groups[k - 1];
            let s = &inst.suppliers[k - 1];
            if let (Some(r), true) = (group.cap_split, t == self.grid.index_of(s.max_total)) {
                let v = Rational::new(s.max_total as i128, r as i128);
                deliveries.extend(std::iter::repeat_n(Delivery::new(k - 1, v), r));
                continue;
            }
            for c in (1..group.filled.phi.len()).rev() {
                let pick = group.filled.choice[c][t];
                if pick != SKIP {
                    let j = group.batches.amounts[pick as usize];
                    deliveries.push(Delivery::new(k - 1, self.grid.volume(j)));
                    t -= j;
                }
            }
            debug_assert_eq!(t, 0);
        }
        deliveries.reverse();
        let sol = Solution::from_deliveries(inst, deliveries)?;
        assert_eq!(
            sol.objective, expected,
            "reconstructed solution must reproduce the table optimum"
        );
        Ok(sol)
    }
}

/// Cheapest split of the full cap of supplier `k` into at most `copies`
/// equal batches, as a scaled cost.
fn best_cap_split(
    inst: &Instance,
    k: usize,
    copies: usize,
    scale: i128,
) -> Result<Option<(usize, i128)>> {
    let s = &inst.suppliers[k];
    let mut best: Option<(usize, i128)> = None;
    for r in 1..=copies.min((s.max_total / s.min_batch) as usize) {
        let batch = Rational::new(s.max_total as i128, r as i128);
        let cost = scaled(inst.batch_cost(k, batch)? * Rational::from(r as i64), scale)?;
        if best.is_none_or(|(_, b)| cost < b) {
            best = Some((r, cost));
        }
    }
    Ok(best)
}
