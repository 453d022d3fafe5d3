use crate::model::{ConstraintViolation, Mode, ValidationReport};
use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("infeasible solution: {}", join(.0))]
    InfeasibleSolution(Vec<ConstraintViolation>),

    #[error("volume {volume} is outside {{0}} ∪ [{min}, {max}]")]
    VolumeOutOfDomain {
        volume: Rational,
        min: i64,
        max: i64,
    },

    #[error("no feasible solution exists")]
    Infeasible,

    #[error("operation requires a {expected:?}-delivery instance")]
    ModeMismatch { expected: Mode },

    #[error("{what} needs {needed} units of work, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("time {time} is outside the schedule horizon [0, {horizon}]")]
    OutsideHorizon { time: Rational, horizon: Rational },
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
