//! Pseudopolynomial dynamic program over rational grids.
//!
//! Some optimal solution has every volume that lies strictly inside its
//! supplier's bounds share one denominator `H * c_hold`, where `H` is the
//! number of such interior volumes; all other volumes are `0`, `m_i` or
//! `M_i`. For each guess `H = 1..=n` the volumes are therefore searched on
//! the grid with step `1 / (H * c_hold)`, a knapsack-style recursion fills
//! `phi(k, p)` (cheapest cover of demand `p` by the first `k` suppliers), and
//! the cheapest `phi(n, P)` over all guesses is the optimum.
//!
//! Demand is stored as an integer grid index and costs as integers scaled by
//! a per-table constant, so the inner loop does no rational arithmetic.

mod fill;
pub mod multi;

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::closed_form::multi_delivery_cost;
use crate::error::{Error, Result};
use crate::model::{validate_instance, Delivery, Instance, Mode, Solution, Supplier};
use crate::rational::Rational;

use fill::{fill, Filled, Offers, SKIP};

pub use multi::{max_batches, solve_multi, solve_multi_with, total_batch_bound, MultiStrategy};

/// Discretisation for a fixed interior-group guess `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub h: usize,
    /// Grid points per unit volume, `H * grid_unit`.
    pub resolution: i128,
    pub step: Rational,
    /// Number of demand indices `0..=P * resolution`.
    pub demand_points: usize,
}

impl Grid {
    pub fn index_of(&self, units: i64) -> usize {
        (units as i128 * self.resolution) as usize
    }

    pub fn volume(&self, index: usize) -> Rational {
        Rational::new(index as i128, self.resolution)
    }

    /// Grid indices `m, m + h, ..., M` of a supplier.
    pub fn candidate_indices(&self, s: &Supplier) -> std::ops::RangeInclusive<usize> {
        self.index_of(s.min_batch)..=self.index_of(s.max_total)
    }

    pub fn candidates(&self, s: &Supplier) -> Vec<Rational> {
        self.candidate_indices(s).map(|j| self.volume(j)).collect()
    }
}

pub fn build_grid(inst: &Instance, h: usize) -> Grid {
    assert!(h >= 1, "grid guess H must be positive");
    let resolution = h as i128 * inst.grid_unit();
    Grid {
        h,
        resolution,
        step: Rational::new(1, resolution),
        demand_points: (inst.demand.max(0) as i128 * resolution) as usize + 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// Upper bound on table cells per grid guess.
    pub max_cells: Option<u64>,
}

impl SolveOptions {
    /// Reads the `LOTDP_MAX_CELLS` environment variable.
    pub fn from_env() -> Self {
        let max_cells = std::env::var("LOTDP_MAX_CELLS")
            .ok()
            .and_then(|v| v.trim().parse().ok());
        SolveOptions { max_cells }
    }

    fn check_cells(&self, cells: u64) -> Result<()> {
        match self.max_cells {
            Some(limit) if cells > limit => Err(Error::ResourceLimit {
                what: "dynamic programming table",
                needed: cells as u128,
                limit: limit as u128,
            }),
            _ => Ok(()),
        }
    }
}

/// How a table's per-supplier offers were priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TablePricing {
    /// One batch per supplier.
    SingleBatch,
    /// Supplier total split into its cheapest number of equal batches.
    EqualSplit,
}

/// A filled table for one grid guess.
#[derive(Debug, Clone)]
pub struct DpTable {
    pub grid: Grid,
    pub pricing: TablePricing,
    scale: i128,
    offers: Vec<Offers>,
    filled: Filled,
}

/// Decision recorded in a table cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Skip,
    /// Supplier total taken, as a grid index.
    Take(usize),
}

impl DpTable {
    pub fn h(&self) -> usize {
        self.grid.h
    }

    pub fn rows(&self) -> usize {
        self.filled.phi.len()
    }

    pub fn points(&self) -> usize {
        self.grid.demand_points
    }

    /// Cells filled, excluding the base row.
    pub fn cells(&self) -> u64 {
        ((self.rows() - 1) * self.points()) as u64
    }

    /// `phi(k, p)` for the first `k` suppliers and demand index `p`.
    pub fn phi(&self, k: usize, p: usize) -> Option<Rational> {
        self.filled.phi[k][p].map(|v| Rational::new(v, self.scale))
    }

    pub fn choice(&self, k: usize, p: usize) -> Choice {
        match self.filled.choice[k][p] {
            SKIP => Choice::Skip,
            pos => Choice::Take(self.offers[k - 1].amounts[pos as usize]),
        }
    }

    /// `phi(n, P)`.
    pub fn optimum(&self) -> Option<Rational> {
        self.phi(self.rows() - 1, self.points() - 1)
    }
}

/// Scale turning every candidate cost on `grid` into an integer.
///
/// A batch `j / D` costs `alpha + beta j / D + c ld j^2 / (2 ln D^2)` with
/// `lambda = ln / ld`, so `2 ln D^2` clears all denominators; equal splits
/// into `r` batches additionally divide the holding term by `r`.
fn cost_scale(inst: &Instance, grid: &Grid, split_lcm: i128) -> Result<i128> {
    let ln = inst.lambda.num();
    let d = grid.resolution;
    d.checked_mul(d)
        .and_then(|v| v.checked_mul(2 * ln))
        .and_then(|v| v.checked_mul(split_lcm))
        .ok_or(Error::Overflow("scaling table costs"))
}

fn scaled(cost: Rational, scale: i128) -> Result<i128> {
    cost.scaled_integer(scale)
        .ok_or(Error::Overflow("scaling table costs"))
}

fn guard_sum(items: &[Offers]) -> Result<()> {
    let worst = items
        .iter()
        .map(|o| o.costs.iter().copied().max().unwrap_or(0))
        .try_fold(0i128, |acc, c| acc.checked_add(c));
    match worst {
        Some(total) if total < i128::MAX / 2 => Ok(()),
        _ => Err(Error::Overflow("summing table costs")),
    }
}

fn lcm_up_to(r: i128) -> Result<i128> {
    use num_integer::Integer;
    (1..=r.max(1)).try_fold(1i128, |acc, k| {
        let l = acc.lcm(&k);
        (l > 0 && l / k * k == l)
            .then_some(l)
            .ok_or(Error::Overflow("batch-count lcm"))
    })
}

fn single_batch_offers(inst: &Instance, grid: &Grid, scale: i128) -> Result<Vec<Offers>> {
    (0..inst.n())
        .map(|k| {
            let s = &inst.suppliers[k];
            let mut o = Offers::default();
            for j in grid.candidate_indices(s) {
                o.push(j, scaled(inst.batch_cost(k, grid.volume(j))?, scale)?);
            }
            Ok(o)
        })
        .collect()
}

fn build_table(
    inst: &Instance,
    h: usize,
    pricing: TablePricing,
    opts: &SolveOptions,
) -> Result<DpTable> {
    let grid = build_grid(inst, h);
    opts.check_cells(inst.n() as u64 * grid.demand_points as u64)?;
    let (scale, offers) = match pricing {
        TablePricing::SingleBatch => {
            let scale = cost_scale(inst, &grid, 1)?;
            (scale, single_batch_offers(inst, &grid, scale)?)
        }
        TablePricing::EqualSplit => {
            let most = inst
                .suppliers
                .iter()
                .map(|s| (s.max_total / s.min_batch) as i128)
                .max()
                .unwrap_or(1);
            let scale = cost_scale(inst, &grid, lcm_up_to(most)?)?;
            let offers = inst
                .suppliers
                .iter()
                .map(|s| {
                    let mut o = Offers::default();
                    for j in grid.candidate_indices(s) {
                        let (_, cost) =
                            multi_delivery_cost(s, grid.volume(j), inst.lambda, inst.holding_rate)?;
                        o.push(j, scaled(cost, scale)?);
                    }
                    Ok(o)
                })
                .collect::<Result<Vec<_>>>()?;
            (scale, offers)
        }
    };
    guard_sum(&offers)?;
    let filled = fill(grid.demand_points, &offers, true);
    Ok(DpTable {
        grid,
        pricing,
        scale,
        offers,
        filled,
    })
}

/// Fills the single-delivery table for grid guess `h`.
///
/// Infeasible cells are left empty rather than reported as errors; only
/// arithmetic overflow or the cell limit fail.
pub fn solve_fixed_h(inst: &Instance, h: usize) -> Result<DpTable> {
    solve_fixed_h_with(inst, h, &SolveOptions::default())
}

pub fn solve_fixed_h_with(inst: &Instance, h: usize, opts: &SolveOptions) -> Result<DpTable> {
    build_table(inst, h, TablePricing::SingleBatch, opts)
}

/// Walks the choice matrix back from `(n, P)` and rebuilds the deliveries.
pub fn backtrack(table: &DpTable, inst: &Instance) -> Result<Solution> {
    let expected = table.optimum().ok_or(Error::Infeasible)?;
    let mut p = table.points() - 1;
    let mut deliveries = Vec::new();
    for k in (1..table.rows()).rev() {
        if let Choice::Take(j) = table.choice(k, p) {
            let total = table.grid.volume(j);
            match table.pricing {
                TablePricing::SingleBatch => deliveries.push(Delivery::new(k - 1, total)),
                TablePricing::EqualSplit => {
                    let s = &inst.suppliers[k - 1];
                    let (r, _) = multi_delivery_cost(s, total, inst.lambda, inst.holding_rate)?;
                    let batch = total / Rational::from(r);
                    deliveries.extend((0..r).map(|_| Delivery::new(k - 1, batch)));
                }
            }
            p = p.saturating_sub(j);
        }
    }
    debug_assert_eq!(p, 0);
    deliveries.reverse();
    let sol = Solution::from_deliveries(inst, deliveries)?;
    assert_eq!(
        sol.objective, expected,
        "reconstructed solution must reproduce the table optimum"
    );
    Ok(sol)
}

/// Outcome of one grid guess in the sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuessTrace {
    #[serde(rename = "H")]
    pub h: usize,
    pub objective: Option<Rational>,
    pub cells: u64,
    pub micros: u64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub best_h: usize,
    pub per_h: Vec<GuessTrace>,
    pub solution: Solution,
    pub elapsed: Duration,
    pub table_cells_filled: u64,
}

impl SolveReport {
    /// `H,phi_nP_num,phi_nP_den,cells,micros` rows; infeasible guesses leave
    /// the value columns empty.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("H,phi_nP_num,phi_nP_den,cells,micros\n");
        for t in &self.per_h {
            let (num, den) = t
                .objective
                .map(|v| (v.num().to_string(), v.den().to_string()))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.h, num, den, t.cells, t.micros
            ));
        }
        out
    }
}

pub(crate) fn check_ready(inst: &Instance, mode: Mode) -> Result<()> {
    if inst.mode != mode {
        return Err(Error::ModeMismatch { expected: mode });
    }
    validate_instance(inst).into_result()
}

/// Runs a table builder for every guess in `guesses`, keeping the cheapest
/// `phi(n, P)`; ties go to the smaller guess.
pub(crate) fn sweep<T>(
    guesses: std::ops::RangeInclusive<usize>,
    mut build: impl FnMut(usize) -> Result<(T, Option<Rational>, u64)>,
) -> Result<(usize, T, Vec<GuessTrace>, u64)> {
    let mut best: Option<(usize, T, Rational)> = None;
    let mut traces = Vec::new();
    let mut total_cells = 0;
    for h in guesses {
        let started = Instant::now();
        let (table, objective, cells) = build(h)?;
        traces.push(GuessTrace {
            h,
            objective,
            cells,
            micros: started.elapsed().as_micros() as u64,
        });
        total_cells += cells;
        if let Some(v) = objective {
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((h, table, v));
            }
        }
    }
    let (h, table, _) = best.ok_or(Error::Infeasible)?;
    Ok((h, table, traces, total_cells))
}

/// Exact single-delivery optimum: sweeps `H = 1..=n` and backtracks the
/// cheapest table.
pub fn solve(inst: &Instance) -> Result<SolveReport> {
    solve_with(inst, &SolveOptions::default())
}

pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let started = Instant::now();
    check_ready(inst, Mode::Single)?;
    let (best_h, table, per_h, cells) = sweep(1..=inst.n(), |h| {
        let t = solve_fixed_h_with(inst, h, opts)?;
        let (opt, cells) = (t.optimum(), t.cells());
        Ok((t, opt, cells))
    })?;
    let solution = backtrack(&table, inst)?;
    Ok(SolveReport {
        best_h,
        per_h,
        solution,
        elapsed: started.elapsed(),
        table_cells_filled: cells,
    })
}

/// Dispatches on the instance's delivery mode.
pub fn solve_instance(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    match inst.mode {
        Mode::Single => solve_with(inst, opts),
        Mode::Multi => solve_multi_with(inst, MultiStrategy::Aggregated, opts),
    }
}

pub(crate) fn equal_split_table(inst: &Instance, h: usize, opts: &SolveOptions) -> Result<DpTable> {
    build_table(inst, h, TablePricing::EqualSplit, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::solution_cost;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn twin_pair() -> Instance {
        Instance::new(
            vec![Supplier::new(0, 1, 2, 3), Supplier::new(0, 1, 2, 3)],
            5,
            Rational::ONE,
            2,
            Mode::Single,
        )
    }

    fn forced_minimum() -> Instance {
        Instance::new(
            vec![Supplier::new(1, 1, 10, 20)],
            5,
            Rational::ONE,
            1,
            Mode::Single,
        )
    }

    #[test]
    fn grid_examples() {
        let g = build_grid(&twin_pair(), 2);
        assert_eq!(g.step, r(1, 4));
        assert_eq!(g.demand_points, 21);
        assert_eq!(
            g.candidates(&Supplier::new(0, 0, 2, 3)),
            vec![r(2, 1), r(9, 4), r(5, 2), r(11, 4), r(3, 1)]
        );

        let mut unit = twin_pair();
        unit.holding_rate = 1;
        let g = build_grid(&unit, 1);
        assert_eq!(g.step, Rational::ONE);
        assert_eq!(
            g.candidates(&Supplier::new(0, 0, 4, 7)),
            (4..=7i64).map(Rational::from).collect::<Vec<_>>()
        );

        for h in 1..=4 {
            let g = build_grid(&twin_pair(), h);
            assert_eq!(g.step * Rational::from(g.resolution), Rational::ONE);
            assert_eq!(
                g.candidates(&Supplier::new(0, 0, 3, 3)),
                vec![Rational::from(3i64)]
            );
        }
    }

    #[test]
    fn fixed_h_on_the_two_supplier_example() {
        let inst = twin_pair();
        let t = solve_fixed_h(&inst, 2).unwrap();
        assert_eq!(t.optimum(), Some(r(35, 2)));
        let sol = backtrack(&t, &inst).unwrap();
        assert_eq!(
            sol.deliveries,
            vec![Delivery::new(0, r(5, 2)), Delivery::new(1, r(5, 2))]
        );

        // with c_hold = 2 the H = 1 grid already has step 1/2
        let t = solve_fixed_h(&inst, 1).unwrap();
        assert_eq!(t.optimum(), Some(r(35, 2)));
    }

    #[test]
    fn unit_grid_misses_the_half_split() {
        let mut inst = twin_pair();
        inst.holding_rate = 1;
        let t = solve_fixed_h(&inst, 1).unwrap();
        // {2, 3}: 5 + (4 + 9) / 2; the tie goes to the smaller volume for the
        // supplier decided first in the backtrack, i.e. the last one
        assert_eq!(t.optimum(), Some(r(23, 2)));
        assert_eq!(
            backtrack(&t, &inst).unwrap().per_supplier_totals,
            vec![Rational::from(3i64), Rational::from(2i64)]
        );
        let t = solve_fixed_h(&inst, 2).unwrap();
        assert_eq!(t.optimum(), Some(r(45, 4)));
        let rep = solve(&inst).unwrap();
        assert_eq!(rep.best_h, 2);
        assert_eq!(rep.solution.per_supplier_totals, vec![r(5, 2); 2]);
    }

    #[test]
    fn overshoot_forced_minimum() {
        let inst = forced_minimum();
        for h in 1..=3 {
            let t = solve_fixed_h(&inst, h).unwrap();
            assert_eq!(t.optimum(), Some(Rational::from(61i64)));
            let sol = backtrack(&t, &inst).unwrap();
            assert_eq!(
                sol.deliveries,
                vec![Delivery::new(0, Rational::from(10i64))]
            );
        }
    }

    #[test]
    fn zero_demand_backtracks_to_nothing() {
        let mut inst = twin_pair();
        inst.demand = 0;
        let t = solve_fixed_h(&inst, 2).unwrap();
        assert_eq!(t.optimum(), Some(Rational::ZERO));
        assert!(backtrack(&t, &inst).unwrap().deliveries.is_empty());
        let rep = solve(&inst).unwrap();
        assert_eq!(rep.best_h, 1);
    }

    #[test]
    fn table_invariants() {
        let inst = Instance::new(
            vec![
                Supplier::new(3, 2, 2, 6),
                Supplier::new(1, 4, 1, 4),
                Supplier::new(0, 1, 3, 5),
            ],
            9,
            Rational::ONE,
            2,
            Mode::Single,
        );
        let t = solve_fixed_h(&inst, 2).unwrap();
        for k in 0..t.rows() {
            assert_eq!(t.phi(k, 0), Some(Rational::ZERO));
        }
        for k in 1..t.rows() {
            for p in 0..t.points() {
                if let Some(prev) = t.phi(k - 1, p) {
                    assert!(t.phi(k, p).unwrap() <= prev);
                }
                if p > 0 {
                    if let Some(now) = t.phi(k, p) {
                        assert!(t.phi(k, p - 1).unwrap() <= now);
                    }
                }
            }
        }
    }

    #[test]
    fn solve_reports_best_guess() {
        let rep = solve(&twin_pair()).unwrap();
        assert_eq!(rep.best_h, 1);
        assert_eq!(rep.solution.objective, r(35, 2));
        assert_eq!(rep.per_h.len(), 2);
        assert_eq!(rep.per_h[1].objective, Some(r(35, 2)));
        let min = rep.per_h.iter().filter_map(|t| t.objective).min().unwrap();
        assert_eq!(min, rep.solution.objective);
        assert_eq!(
            solution_cost(&twin_pair(), &rep.solution).unwrap(),
            r(35, 2)
        );
        assert!(rep
            .trace_csv()
            .starts_with("H,phi_nP_num,phi_nP_den,cells,micros\n1,35,2,"));
    }

    #[test]
    fn symmetric_suppliers_split_evenly() {
        let inst = Instance::new(
            vec![Supplier::new(0, 2, 1, 10); 3],
            10,
            Rational::ONE,
            1,
            Mode::Single,
        );
        let rep = solve(&inst).unwrap();
        assert_eq!(rep.solution.per_supplier_totals, vec![r(10, 3); 3]);
        assert_eq!(rep.best_h, 3);
    }

    #[test]
    fn tight_capacity_takes_every_cap() {
        let inst = Instance::new(
            vec![Supplier::new(5, 1, 2, 4), Supplier::new(0, 9, 1, 3)],
            7,
            Rational::ONE,
            3,
            Mode::Single,
        );
        let rep = solve(&inst).unwrap();
        assert_eq!(
            rep.solution.per_supplier_totals,
            vec![Rational::from(4i64), Rational::from(3i64)]
        );
    }

    #[test]
    fn rejects_wrong_mode_and_invalid_input() {
        let inst = twin_pair().with_mode(Mode::Multi);
        assert!(matches!(solve(&inst), Err(Error::ModeMismatch { .. })));
        let mut inst = twin_pair();
        inst.demand = 100;
        assert!(matches!(solve(&inst), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn cell_limit_is_enforced() {
        let opts = SolveOptions {
            max_cells: Some(10),
        };
        assert!(matches!(
            solve_with(&twin_pair(), &opts),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn rational_lambda_refines_the_grid() {
        // c / lambda = 2 / (1/3) = 6: interior volumes live on 1 / (6 H)
        let inst = Instance::new(
            vec![Supplier::new(0, 0, 1, 10), Supplier::new(0, 1, 1, 10)],
            3,
            r(1, 3),
            2,
            Mode::Single,
        );
        let rep = solve(&inst).unwrap();
        // interior optimum: 3/2 + (1 - 0*2)/(2*6) and 3/2 - 1/12
        assert_eq!(rep.solution.per_supplier_totals, vec![r(19, 12), r(17, 12)]);
    }
}
