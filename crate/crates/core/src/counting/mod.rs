//! Exact counts for small values of `s a y^k / q` and related sets, with
//! ratio reports against the corresponding upper bounds (implied constant
//! taken as 1).

mod congruence;
mod monomial;
mod sets;

pub use congruence::{
    check_congruence_bound, check_pairs_bound, count_congruence, count_pairs_quadratic,
    IntervalConvention, PairQuery,
};
pub use monomial::{
    check_a_set_bound, check_mk_bounds, check_nk_bounds, count_mk, count_nk, norm_below,
    norm_cutoff, MkCount, MkQuery, MkReport, NkQuery,
};
pub use sets::{
    enumerate_a, is_squarefree, is_squarefull, smooth_count, squarefull_in, squarefull_split,
    ASetQuery, SMOOTH_CAP,
};

use serde::Serialize;

/// An exact count set against a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub bound_name: String,
    pub exact_count: u64,
    pub bound_value: f64,
    /// `exact_count / bound_value`, or 0 for an empty count.
    pub ratio: f64,
    /// False when the bound's hypotheses fail for this input.
    pub applicable: bool,
    /// Set only for bounds with an explicit constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passes: Option<bool>,
}

impl CountReport {
    pub fn new(name: &str, count: u64, bound: f64, applicable: bool) -> Self {
        let ratio = if count == 0 {
            0.0
        } else if bound > 0.0 {
            count as f64 / bound
        } else {
            f64::INFINITY
        };
        Self {
            bound_name: name.to_string(),
            exact_count: count,
            bound_value: bound,
            ratio,
            applicable,
            passes: None,
        }
    }

    /// Mark as a hard bound: passes iff `count <= bound`.
    pub fn hard(mut self) -> Self {
        self.passes = Some(self.exact_count as f64 <= self.bound_value);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conventions() {
        assert_eq!(CountReport::new("x", 0, 0.0, true).ratio, 0.0);
        assert_eq!(CountReport::new("x", 3, 6.0, true).ratio, 0.5);
        assert!(CountReport::new("x", 3, 0.0, true).ratio.is_infinite());
    }
}
