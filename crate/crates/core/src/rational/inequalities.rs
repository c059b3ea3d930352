use num_rational::Ratio;
use serde::Serialize;

use super::{j_invariant, rho};
use crate::error::Result;

type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// One exact comparison `lhs < rhs` (or `<=`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub holds: bool,
    /// `lhs` as an exact fraction `num/den`.
    pub lhs_exact: String,
    pub rhs_exact: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub strict: bool,
}

impl InequalityCheck {
    fn new(name: &str, lhs: Q, rhs: Q, strict: bool) -> Self {
        let holds = if strict { lhs < rhs } else { lhs <= rhs };
        Self {
            name: name.to_string(),
            holds,
            lhs_exact: format!("{}/{}", lhs.numer(), lhs.denom()),
            rhs_exact: format!("{}/{}", rhs.numer(), rhs.denom()),
            lhs: to_f64(lhs),
            rhs: to_f64(rhs),
            margin: to_f64(rhs - lhs),
            strict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub k: u32,
    pub monomial: bool,
    pub j: u64,
    pub rho: String,
    pub checks: Vec<InequalityCheck>,
}

impl InequalityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluate every constraint the exponent `ρ(k)` has to satisfy, exactly.
pub fn verify_rho_inequalities(k: u32, monomial: bool) -> Result<InequalityReport> {
    let j = j_invariant(k, monomial)?;
    let r = rho(k, j)?;
    let p: Q = q(*r.0.numer() as i128, *r.0.denom() as i128);
    let ki = k as i128;
    let ji = j as i128;
    let one = q(1, 1);
    let mut checks = Vec::new();
    let mut lt = |name: &str, l: Q, r: Q| checks.push(InequalityCheck::new(name, l, r, true));

    match k {
        2 => {
            lt("rho < 2/7", p, q(2, 7));
            lt("rho < 2/11", p, q(2, 11));
            lt("1/2 + rho/4 < 1 - 5rho/2", q(1, 2) + p / 4, one - p * 5 / 2);
            lt("2rho < 1 - 4rho", p * 2, one - p * 4);
        }
        3 => {
            lt(
                "2/3 + rho(7/3 + 1/6 + 1/3) < 1",
                q(2, 3) + p * (q(7, 3) + q(1, 6) + q(1, 3)),
                one,
            );
            lt(
                "11/18 + rho(7/3 + 1/18 + 8/9) < 1",
                q(11, 18) + p * (q(7, 3) + q(1, 18) + q(8, 9)),
                one,
            );
        }
        _ => {
            lt(
                "rho(5/2 - 3/(2k)) < 1/(2k)",
                p * (q(5, 2) - q(3, 2 * ki)),
                q(1, 2 * ki),
            );
        }
    }
    let sieve_top = one - p * (2 * ji);
    if k >= 3 {
        lt("rho < 3k/(20k + 5)", p, q(3 * ki, 20 * ki + 5));
        lt("rho < 1 - 2J rho", p, sieve_top);
    }
    if j != 1u64 << (k - 1).min(63) {
        lt("J >= k + 1", q(ki, 1), q(ji, 1));
        lt("(k + 2) rho < 1/2", p * (ki + 2), q(1, 2));
    }
    if k >= 3 {
        let mut le = |name: &str, l: Q, r: Q| checks.push(InequalityCheck::new(name, l, r, false));
        le("(2k + 1/2) rho <= 3k/10", p * (q(2 * ki, 1) + q(1, 2)), q(3 * ki, 10));
        le("1 - 2J rho <= 1/5", sieve_top, q(1, 5));
        le("(J + 1) rho <= 1/2", p * (ji + 1), q(1, 2));
    }
    Ok(InequalityReport {
        k,
        monomial,
        j,
        rho: r.to_string(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_degrees_pass() {
        for k in 2..=30 {
            for &m in &[true, false] {
                let rep = verify_rho_inequalities(k, m).unwrap();
                assert!(rep.all_hold(), "k={k} monomial={m}: {:?}", rep.checks);
                assert!(!rep.checks.is_empty());
            }
        }
    }

    #[test]
    fn k3_boundary_cases_are_equalities() {
        let rep = verify_rho_inequalities(3, true).unwrap();
        let eq: Vec<_> = rep.checks.iter().filter(|c| c.margin == 0.0).map(|c| c.name.as_str()).collect();
        assert!(eq.contains(&"1 - 2J rho <= 1/5"));
        assert!(eq.contains(&"(J + 1) rho <= 1/2"));
    }

    #[test]
    fn margins_are_exact_differences() {
        let rep = verify_rho_inequalities(2, true).unwrap();
        let c = &rep.checks[0];
        assert_eq!(c.lhs_exact, "2/13");
        assert!((c.margin - (2.0 / 7.0 - 2.0 / 13.0)).abs() < 1e-15);
    }
}
