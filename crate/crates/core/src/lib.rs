//! Exact solver for single-product procurement with fixed-plus-linear
//! delivery costs, quadratic holding costs and per-supplier volume limits.
//!
//! The main entry points are [`dp::solve`] (one delivery per supplier) and
//! [`dp::solve_multi`] (several deliveries per supplier). [`oracle`] holds
//! exponential reference solvers used to cross-check them, and [`schedule`]
//! turns a solution into a delivery timeline.

pub mod closed_form;
pub mod dp;
mod error;
pub mod gen;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod schedule;

pub use dp::{solve, solve_instance, solve_multi, SolveOptions, SolveReport};
pub use error::{Error, Result};
pub use model::{
    delivery_cost, holding_cost, solution_cost, validate_instance, Delivery, Instance, Mode,
    Solution, Supplier, ValidationReport,
};
pub use rational::Rational;
