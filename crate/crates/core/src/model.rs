//! Problem data, cost primitives and feasibility checks.
//!
//! A plant consumes one product at a constant rate `lambda` and must procure
//! `demand` units from a set of suppliers. Every delivery (batch) from supplier
//! `i` costs `alpha_i + beta_i * v` to ship and, since it is consumed linearly
//! before the next batch arrives, `v^2 * c_hold / (2 * lambda)` to store. Each
//! batch is either absent or lies in `[min_batch_i, max_total_i]`, and the
//! total taken from a supplier may not exceed `max_total_i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Supplier {
    /// Fixed cost charged once per delivery.
    pub alpha: i64,
    /// Cost per delivered unit.
    pub beta: i64,
    /// Smallest admissible single delivery.
    pub min_batch: i64,
    /// Largest total volume over the horizon (and hence largest batch).
    pub max_total: i64,
}

impl Supplier {
    pub fn new(alpha: i64, beta: i64, min_batch: i64, max_total: i64) -> Self {
        Supplier {
            alpha,
            beta,
            min_batch,
            max_total,
        }
    }

    /// Whether `v` is a legal batch volume: zero or inside `[m, M]`.
    pub fn admits(&self, v: Rational) -> bool {
        v.is_zero() || (v >= Rational::from(self.min_batch) && v <= Rational::from(self.max_total))
    }
}

/// Whether each supplier delivers at most once or may split its volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Single,
    Multi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub suppliers: Vec<Supplier>,
    /// Total demand `P` over the planning horizon.
    pub demand: i64,
    /// Consumption intensity.
    pub lambda: Rational,
    /// Holding cost per unit per time.
    pub holding_rate: i64,
    pub mode: Mode,
}

impl Instance {
    pub fn new(
        suppliers: Vec<Supplier>,
        demand: i64,
        lambda: Rational,
        holding_rate: i64,
        mode: Mode,
    ) -> Self {
        Instance {
            suppliers,
            demand,
            lambda,
            holding_rate,
            mode,
        }
    }

    pub fn n(&self) -> usize {
        self.suppliers.len()
    }

    pub fn total_capacity(&self) -> i128 {
        self.suppliers.iter().map(|s| s.max_total as i128).sum()
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Numerator of `c_hold / lambda` in lowest terms.
    ///
    /// Interior optimal volumes for a group of `H` suppliers have a
    /// denominator dividing `H * grid_unit()`. With integer `lambda` this
    /// divides `c_hold`, so it never refines the `1 / (H * c_hold)` grid.
    pub fn grid_unit(&self) -> i128 {
        (Rational::from(self.holding_rate) / self.lambda).num()
    }

    pub fn batch_cost(&self, supplier: usize, v: Rational) -> Result<Rational> {
        let s = &self.suppliers[supplier];
        Ok(delivery_cost(s, v)? + holding_cost(v, self.lambda, self.holding_rate))
    }
}

/// Shipping cost of one batch: zero for an empty batch, else `alpha + beta * v`.
pub fn delivery_cost(s: &Supplier, v: Rational) -> Result<Rational> {
    if v.is_zero() {
        return Ok(Rational::ZERO);
    }
    if !s.admits(v) {
        return Err(Error::VolumeOutOfDomain {
            volume: v,
            min: s.min_batch,
            max: s.max_total,
        });
    }
    Ok(Rational::from(s.alpha) + Rational::from(s.beta) * v)
}

/// Storage cost of a batch of `v` units consumed at rate `lambda`:
/// the triangular stock profile has area `v^2 / (2 lambda)`.
pub fn holding_cost(v: Rational, lambda: Rational, holding_rate: i64) -> Rational {
    v * v * Rational::from(holding_rate) / (Rational::from(2i64) * lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delivery {
    /// Zero-based supplier index (serialized one-based).
    pub supplier: usize,
    pub volume: Rational,
}

impl Delivery {
    pub fn new(supplier: usize, volume: Rational) -> Self {
        Delivery { supplier, volume }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub deliveries: Vec<Delivery>,
    pub objective: Rational,
    /// Total volume taken from each supplier.
    pub per_supplier_totals: Vec<Rational>,
}

impl Solution {
    /// Builds a checked solution; zero-volume batches are dropped and the
    /// objective is evaluated from scratch.
    pub fn from_deliveries(inst: &Instance, deliveries: Vec<Delivery>) -> Result<Self> {
        let deliveries: Vec<Delivery> = deliveries
            .into_iter()
            .filter(|d| !d.volume.is_zero())
            .collect();
        let objective = evaluate(inst, &deliveries)?;
        let mut per_supplier_totals = vec![Rational::ZERO; inst.n()];
        for d in &deliveries {
            per_supplier_totals[d.supplier] = per_supplier_totals[d.supplier] + d.volume;
        }
        Ok(Solution {
            deliveries,
            objective,
            per_supplier_totals,
        })
    }

    pub fn total_volume(&self) -> Rational {
        self.deliveries.iter().map(|d| d.volume).sum()
    }

    /// Number of batches per supplier.
    pub fn batch_counts(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for d in &self.deliveries {
            counts[d.supplier] += 1;
        }
        counts
    }
}

/// Total delivery plus holding cost of a solution, recomputed from its batches.
pub fn solution_cost(inst: &Instance, sol: &Solution) -> Result<Rational> {
    evaluate(inst, &sol.deliveries)
}

fn evaluate(inst: &Instance, deliveries: &[Delivery]) -> Result<Rational> {
    let violations = check_constraints(inst, deliveries);
    if !violations.is_empty() {
        return Err(Error::InfeasibleSolution(violations));
    }
    deliveries.iter().try_fold(Rational::ZERO, |acc, d| {
        Ok(acc + inst.batch_cost(d.supplier, d.volume)?)
    })
}

/// Every violated constraint of the problem for the given batches.
pub fn check_constraints(inst: &Instance, deliveries: &[Delivery]) -> Vec<ConstraintViolation> {
    let mut out = Vec::new();
    let n = inst.n();
    let mut totals = vec![Rational::ZERO; n];
    let mut counts = vec![0usize; n];
    let mut delivered = Rational::ZERO;

    for d in deliveries {
        if d.supplier >= n {
            out.push(ConstraintViolation::UnknownSupplier {
                supplier: d.supplier + 1,
            });
            continue;
        }
        let s = &inst.suppliers[d.supplier];
        if d.volume.is_negative() || !s.admits(d.volume) {
            out.push(ConstraintViolation::BatchOutOfRange {
                supplier: d.supplier + 1,
                volume: d.volume,
                min: s.min_batch,
                max: s.max_total,
            });
        }
        if !d.volume.is_zero() {
            counts[d.supplier] += 1;
        }
        totals[d.supplier] = totals[d.supplier] + d.volume;
        delivered = delivered + d.volume;
    }

    for (i, s) in inst.suppliers.iter().enumerate() {
        if totals[i] > Rational::from(s.max_total) {
            out.push(ConstraintViolation::CapacityExceeded {
                supplier: i + 1,
                total: totals[i],
                cap: s.max_total,
            });
        }
        if inst.mode == Mode::Single && counts[i] > 1 {
            out.push(ConstraintViolation::RepeatedDelivery {
                supplier: i + 1,
                count: counts[i],
            });
        }
    }

    if delivered < Rational::from(inst.demand) {
        out.push(ConstraintViolation::DemandNotMet {
            delivered,
            demand: inst.demand,
        });
    }
    out
}

/// A constraint broken by a candidate solution. Supplier numbers are one-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintViolation {
    UnknownSupplier {
        supplier: usize,
    },
    BatchOutOfRange {
        supplier: usize,
        volume: Rational,
        min: i64,
        max: i64,
    },
    CapacityExceeded {
        supplier: usize,
        total: Rational,
        cap: i64,
    },
    RepeatedDelivery {
        supplier: usize,
        count: usize,
    },
    DemandNotMet {
        delivered: Rational,
        demand: i64,
    },
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownSupplier { supplier } => write!(f, "supplier {supplier} does not exist"),
            Self::BatchOutOfRange {
                supplier,
                volume,
                min,
                max,
            } => write!(
                f,
                "supplier {supplier}: batch {volume} not in {{0}} ∪ [{min}, {max}]"
            ),
            Self::CapacityExceeded {
                supplier,
                total,
                cap,
            } => write!(f, "supplier {supplier}: total {total} exceeds cap {cap}"),
            Self::RepeatedDelivery { supplier, count } => write!(
                f,
                "supplier {supplier}: {count} deliveries in single-delivery mode"
            ),
            Self::DemandNotMet { delivered, demand } => {
                write!(f, "delivered {delivered} is below demand {demand}")
            }
        }
    }
}

/// A defect in instance data. Supplier numbers are one-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceViolation {
    NoSuppliers,
    NegativeFixedCost { supplier: usize },
    NegativeUnitCost { supplier: usize },
    NonPositiveMinBatch { supplier: usize },
    MinExceedsMax { supplier: usize, min: i64, max: i64 },
    NegativeDemand,
    NonPositiveLambda,
    NonPositiveHoldingRate,
    InsufficientCapacity { capacity: i128, demand: i64 },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoSuppliers => write!(f, "supplier list is empty"),
            Self::NegativeFixedCost { supplier } => {
                write!(f, "supplier {supplier}: alpha must be non-negative")
            }
            Self::NegativeUnitCost { supplier } => {
                write!(f, "supplier {supplier}: beta must be non-negative")
            }
            Self::NonPositiveMinBatch { supplier } => {
                write!(f, "supplier {supplier}: m must be a positive integer")
            }
            Self::MinExceedsMax { supplier, min, max } => {
                write!(f, "supplier {supplier}: m exceeds M ({min} > {max})")
            }
            Self::NegativeDemand => write!(f, "demand P must be non-negative"),
            Self::NonPositiveLambda => write!(f, "lambda must be positive"),
            Self::NonPositiveHoldingRate => write!(f, "c_hold must be a positive integer"),
            Self::InsufficientCapacity { capacity, demand } => write!(
                f,
                "infeasible demand: total capacity sum(M_i) = {capacity} is below P = {demand}, \
                 so the demand constraint sum(x) >= P cannot hold"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<InstanceViolation>,
    /// `sum(M_i) == P`: feasible only with every supplier at its cap.
    pub tight_capacity: bool,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_infeasible_demand(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, InstanceViolation::InsufficientCapacity { .. }))
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_instance(inst: &Instance) -> ValidationReport {
    use InstanceViolation::*;
    let mut violations = Vec::new();
    if inst.suppliers.is_empty() {
        violations.push(NoSuppliers);
    }
    for (i, s) in inst.suppliers.iter().enumerate() {
        let supplier = i + 1;
        if s.alpha < 0 {
            violations.push(NegativeFixedCost { supplier });
        }
        if s.beta < 0 {
            violations.push(NegativeUnitCost { supplier });
        }
        if s.min_batch <= 0 {
            violations.push(NonPositiveMinBatch { supplier });
        }
        if s.min_batch > s.max_total {
            violations.push(MinExceedsMax {
                supplier,
                min: s.min_batch,
                max: s.max_total,
            });
        }
    }
    if inst.demand < 0 {
        violations.push(NegativeDemand);
    }
    if !inst.lambda.is_positive() {
        violations.push(NonPositiveLambda);
    }
    if inst.holding_rate < 1 {
        violations.push(NonPositiveHoldingRate);
    }
    let capacity = inst.total_capacity();
    if !inst.suppliers.is_empty() && capacity < inst.demand as i128 {
        violations.push(InsufficientCapacity {
            capacity,
            demand: inst.demand,
        });
    }
    ValidationReport {
        violations,
        tight_capacity: !inst.suppliers.is_empty() && capacity == inst.demand as i128,
    }
}
