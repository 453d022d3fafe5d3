//! Seeded random instances for tests, verification batches and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Instance, Mode, Supplier};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub n: usize,
    pub p_max: i64,
    pub c_max: i64,
    /// Smallest `m` drawn (clamped to `M`).
    pub m_min: i64,
    /// Largest `M` drawn.
    pub bound_max: i64,
    pub alpha_max: i64,
    pub beta_max: i64,
    /// Integer `lambda` drawn from `1..=lambda_max`.
    pub lambda_max: i64,
    pub mode: Mode,
    /// Force `P > sum(M_i)`.
    pub infeasible: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 3,
            p_max: 20,
            c_max: 3,
            m_min: 1,
            bound_max: 12,
            alpha_max: 10,
            beta_max: 10,
            lambda_max: 1,
            mode: Mode::Single,
            infeasible: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("impossible generator ranges: {0}")]
pub struct GenError(&'static str);

impl GenConfig {
    fn check(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError("n must be at least 1"));
        }
        if self.p_max < 1 {
            return Err(GenError("P_max must be at least 1"));
        }
        if self.c_max < 1 {
            return Err(GenError("c_max must be at least 1"));
        }
        if self.bound_max < 1 || self.m_min < 1 {
            return Err(GenError("volume bounds must be at least 1"));
        }
        if self.alpha_max < 0 || self.beta_max < 0 {
            return Err(GenError("cost maxima must be non-negative"));
        }
        if self.lambda_max < 1 {
            return Err(GenError("lambda_max must be at least 1"));
        }
        Ok(())
    }
}

/// Draws one instance; the same `(cfg, seed)` always yields the same instance.
pub fn generate(cfg: &GenConfig, seed: u64) -> Result<Instance, GenError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suppliers: Vec<Supplier> = (0..cfg.n)
        .map(|_| {
            let max_total = rng.random_range(1..=cfg.bound_max);
            let min_batch = rng.random_range(cfg.m_min.min(max_total)..=max_total);
            Supplier::new(
                rng.random_range(0..=cfg.alpha_max),
                rng.random_range(0..=cfg.beta_max),
                min_batch,
                max_total,
            )
        })
        .collect();
    let capacity: i64 = suppliers.iter().map(|s| s.max_total).sum();
    let demand = if cfg.infeasible {
        capacity + 1
    } else {
        rng.random_range(1..=cfg.p_max.min(capacity))
    };
    let holding_rate = rng.random_range(1..=cfg.c_max);
    let lambda = Rational::from(rng.random_range(1..=cfg.lambda_max));
    Ok(Instance::new(
        suppliers,
        demand,
        lambda,
        holding_rate,
        cfg.mode,
    ))
}

/// `count` instances from consecutive seeds starting at `seed`.
pub fn generate_batch(cfg: &GenConfig, seed: u64, count: usize) -> Result<Vec<Instance>, GenError> {
    (0..count as u64)
        .map(|i| generate(cfg, seed.wrapping_add(i)))
        .collect()
}

/// Instance with exactly `demand` and `n` suppliers, for scaling sweeps.
///
/// Each cap is drawn from `ceil(P/n)..=P`, so the demand is always
/// coverable; minimum batches stay below a quarter of the cap.
pub fn sized_instance(
    n: usize,
    demand: i64,
    holding_rate: i64,
    mode: Mode,
    seed: u64,
) -> Result<Instance, GenError> {
    if n == 0 {
        return Err(GenError("n must be at least 1"));
    }
    if demand < 1 || holding_rate < 1 {
        return Err(GenError("P and c_hold must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let share = (demand + n as i64 - 1) / n as i64;
    let suppliers = (0..n)
        .map(|_| {
            let max_total = rng.random_range(share..=demand);
            let min_batch = rng.random_range(1..=(max_total / 4).max(1));
            Supplier::new(
                rng.random_range(0..=10),
                rng.random_range(0..=10),
                min_batch,
                max_total,
            )
        })
        .collect();
    Ok(Instance::new(
        suppliers,
        demand,
        Rational::ONE,
        holding_rate,
        mode,
    ))
}
