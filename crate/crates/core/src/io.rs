//! JSON formats for instances, solutions and solve reports.
//!
//! Instance:
//! `{"P": int, "lambda": int | {"num", "den"}, "c_hold": int, "mode": "single" | "multi",
//!   "suppliers": [{"alpha": int, "beta": int, "m": int, "M": int}]}`
//!
//! Solution: `{"objective": {"num", "den"}, "deliveries": [{"supplier": int, "volume": {"num", "den"}}]}`
//! with one-based supplier numbers. Rationals are never written as floats;
//! `objective_approx` is an optional human-readable extra.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dp::SolveReport;
use crate::model::{Delivery, Instance, Mode, Solution, Supplier};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON at `{path}`: {message}")]
    Syntax { path: String, message: String },
    #[error("solution refers to supplier {0}, which does not exist")]
    UnknownSupplier(usize),
    #[error("{0}")]
    Solution(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SupplierJson {
    alpha: i64,
    beta: i64,
    m: i64,
    #[serde(rename = "M")]
    max_total: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    #[serde(rename = "P")]
    demand: i64,
    lambda: Rational,
    c_hold: i64,
    #[serde(default)]
    mode: Mode,
    suppliers: Vec<SupplierJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DeliveryJson {
    supplier: usize,
    volume: Rational,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionJson {
    objective: Rational,
    deliveries: Vec<DeliveryJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective_approx: Option<f64>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FormatError::Syntax {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Parses an instance. Structural problems (missing fields, non-integer
/// bounds) fail here; semantic ones are left to
/// [`validate_instance`](crate::model::validate_instance).
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let raw: InstanceJson = parse(text)?;
    Ok(Instance {
        suppliers: raw
            .suppliers
            .into_iter()
            .map(|s| Supplier::new(s.alpha, s.beta, s.m, s.max_total))
            .collect(),
        demand: raw.demand,
        lambda: raw.lambda,
        holding_rate: raw.c_hold,
        mode: raw.mode,
    })
}

pub fn instance_to_json(inst: &Instance) -> String {
    let raw = InstanceJson {
        demand: inst.demand,
        lambda: inst.lambda,
        c_hold: inst.holding_rate,
        mode: inst.mode,
        suppliers: inst
            .suppliers
            .iter()
            .map(|s| SupplierJson {
                alpha: s.alpha,
                beta: s.beta,
                m: s.min_batch,
                max_total: s.max_total,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("instance serializes")
}

pub fn solution_to_value(sol: &Solution, with_approx: bool) -> Value {
    let raw = SolutionJson {
        objective: sol.objective,
        deliveries: sol
            .deliveries
            .iter()
            .map(|d| DeliveryJson {
                supplier: d.supplier + 1,
                volume: d.volume,
            })
            .collect(),
        objective_approx: with_approx.then(|| sol.objective.to_f64()),
    };
    serde_json::to_value(raw).expect("solution serializes")
}

/// Parses a solution against `inst`, re-evaluating its cost. The stated
/// objective must match the recomputed one.
pub fn parse_solution(text: &str, inst: &Instance) -> Result<Solution, FormatError> {
    let raw: SolutionJson = parse(text)?;
    let mut deliveries = Vec::with_capacity(raw.deliveries.len());
    for d in raw.deliveries {
        if d.supplier == 0 || d.supplier > inst.n() {
            return Err(FormatError::UnknownSupplier(d.supplier));
        }
        deliveries.push(Delivery::new(d.supplier - 1, d.volume));
    }
    let sol = Solution::from_deliveries(inst, deliveries)
        .map_err(|e| FormatError::Solution(e.to_string()))?;
    if sol.objective != raw.objective {
        return Err(FormatError::Solution(format!(
            "stated objective {} differs from recomputed {}",
            raw.objective, sol.objective
        )));
    }
    Ok(sol)
}

pub fn report_to_value(report: &SolveReport) -> Value {
    json!({
        "best_H": report.best_h,
        "per_H": report.per_h,
        "table_cells_filled": report.table_cells_filled,
        "elapsed_micros": report.elapsed.as_micros() as u64,
    })
}
