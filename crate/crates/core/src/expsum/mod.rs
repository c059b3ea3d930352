//! Exponential sums: complete sums, oscillatory integrals, Weyl sums, the
//! major-arc approximation and Type I/II experiments.

mod complete;
mod experiments;
mod integral;
mod poly;
mod weyl;

pub use complete::{cochrane_check, complete_sum};
pub use experiments::{
    diagonal_count, type_i_experiment, type_ii_experiment, TypeIIReport, TypeIReport, Weights,
    DEFAULT_OP_CAP,
};
pub use integral::{decay_bound, oscillatory_integral, DecayIndex, DEFAULT_EVAL_BUDGET};
pub use poly::{Coef, IntPoly, Phase, Phases, RealPoly};
pub use weyl::{
    major_arc_error, simultaneous_approx, weyl_sum, ApproxResult, MajorArcOptions, MajorArcReport,
    WeylSum,
};

use serde::Serialize;

/// A real quantity set against a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub value: f64,
    pub bound_value: f64,
    pub ratio: f64,
    pub applicable: bool,
}

impl BoundReport {
    pub fn new(name: &str, value: f64, bound: f64, applicable: bool) -> Self {
        Self {
            bound_name: name.to_string(),
            value,
            bound_value: bound,
            ratio: if value == 0.0 { 0.0 } else { value / bound },
            applicable,
        }
    }
}
