//! Weyl sums, simultaneous approximation of coefficients and the
//! major-arc approximation error.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::complete::complete_sum;
use super::integral::oscillatory_integral;
use super::{IntPoly, RealPoly};
use crate::error::{Error, Result};
use crate::fixed::FixedReal;
use crate::scalar::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylSum {
    pub value: Complex<f64>,
    /// Bound on `|value - true value|`.
    pub error_bound: f64,
    pub terms: u64,
}

/// `sum_{x = lo}^{hi} e(m f(x))` by direct summation.
pub fn weyl_sum(f: &RealPoly, lo: i64, hi: i64, m: i64) -> Result<WeylSum> {
    if hi < lo {
        return Err(Error::domain("empty summation range"));
    }
    let phases = f.phases(lo.unsigned_abs().max(hi.unsigned_abs()))?;
    let mut acc = CompensatedSum::<f64>::new();
    let mut err = 0.0;
    for x in lo..=hi {
        let (z, e) = phases.eval(m, x).unit();
        acc.add(z);
        err += e;
    }
    let terms = (hi - lo + 1) as u64;
    Ok(WeylSum {
        value: acc.value(),
        error_bound: err + 4.0 * f64::EPSILON * terms as f64,
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxResult {
    pub s: u64,
    /// `u_1, ..., u_k`
    pub u: Vec<i128>,
    /// `|s gamma_j - u_j|`
    pub residuals: Vec<f64>,
    /// `max_j |s gamma_j - u_j| X^(j-1) 2k^2 L`; at most 1 iff the
    /// approximation condition holds.
    pub score: f64,
    pub satisfies_condition: bool,
    /// `gcd(s, u_2, ..., u_k)`
    pub gcd_tail: u64,
}

impl ApproxResult {
    /// `gcd(s, u_2, ..., u_k) <= M X^eta`.
    pub fn gcd_condition(&self, m: f64, x: f64, eta: f64) -> bool {
        (self.gcd_tail as f64) <= m * x.powf(eta)
    }
}

fn nearest(x: &FixedReal) -> (BigInt, FixedReal) {
    let bits = x.bits() as usize;
    let half = BigInt::from(1) << (bits - 1);
    let u: BigInt = (x.mantissa() + half) >> bits;
    let rem = x.sub(&FixedReal::from_integer(&u, x.bits()));
    (u, rem)
}

/// Brute-force search over `s <= s_max` for the `s` minimising the
/// normalised residual of `s gamma_j` (`j = 1..k`) to the nearest integers.
/// Ties keep the smaller `s`.
pub fn simultaneous_approx(gamma: &RealPoly, x: f64, l: f64, s_max: u64) -> Result<ApproxResult> {
    if s_max < 1 {
        return Err(Error::domain("s_max must be positive"));
    }
    let k = gamma.degree();
    let bits = gamma.bits + 64;
    let coeffs: Vec<FixedReal> = gamma.coeffs[1..]
        .iter()
        .map(|c| c.to_fixed(bits))
        .collect::<Result<_>>()?;
    let weight: Vec<f64> = (0..k)
        .map(|j| x.powi(j as i32) * 2.0 * (k * k) as f64 * l)
        .collect();
    let mut acc: Vec<FixedReal> = vec![FixedReal::zero(bits); k];
    let mut best: Option<(f64, u64)> = None;
    for s in 1..=s_max {
        let mut score = 0f64;
        for j in 0..k {
            acc[j] = acc[j].add(&coeffs[j]);
            score = score.max(acc[j].dist_to_int().value * weight[j]);
        }
        if best.map_or(true, |(b, _)| score < b) {
            best = Some((score, s));
        }
    }
    let (_, s) = best.expect("s_max >= 1");
    let mut u = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (c, exact) in coeffs.iter().zip(&gamma.coeffs[1..]) {
        let (uj, rem) = nearest(&c.mul_int(&BigInt::from(s)));
        let r = match exact.as_rational() {
            Some(q) => (q * BigInt::from(s) - num_rational::BigRational::from_integer(uj.clone()))
                .abs()
                .to_f64()
                .unwrap_or(f64::NAN),
            None => rem.to_f64().abs(),
        };
        u.push(uj);
        residuals.push(r);
    }
    let mut g = BigInt::from(s);
    for uj in &u {
        g = g.gcd(uj);
    }
    let (s, u, residuals) = if g > BigInt::from(1) {
        let gf = g.to_f64().unwrap();
        (
            s / g.to_u64().unwrap(),
            u.iter().map(|x| x / &g).collect::<Vec<_>>(),
            residuals.iter().map(|r| r / gf).collect::<Vec<_>>(),
        )
    } else {
        (s, u, residuals)
    };
    let score = residuals
        .iter()
        .zip(&weight)
        .fold(0f64, |m, (r, w)| m.max(r * w));
    let mut tail = BigInt::from(s);
    for uj in u.iter().skip(1) {
        tail = tail.gcd(uj);
    }
    Ok(ApproxResult {
        s,
        u: u.iter().map(|x| x.to_i128().unwrap_or(i128::MAX)).collect(),
        residuals,
        score,
        satisfies_condition: score <= 1.0,
        gcd_tail: tail.to_u64().unwrap_or(u64::MAX),
    })
}

/// Options for [`major_arc_error`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorArcOptions {
    /// Stand-in for `N^(2 eta)` in the bounds.
    pub n_2eta: f64,
    pub quad_tol: f64,
    pub quad_budget: usize,
}

impl Default for MajorArcOptions {
    fn default() -> Self {
        Self {
            n_2eta: 1.0,
            quad_tol: 1e-13,
            quad_budget: super::integral::DEFAULT_EVAL_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorArcReport {
    /// `sum_l |W(l) - s^-1 S(s, lG) int_I e(lF)|`
    pub lhs: f64,
    /// Accumulated numerical error of `lhs`.
    pub lhs_error: f64,
    /// `N^(2eta) L s^(1 - 1/k)`
    pub rhs_power_branch: f64,
    /// `N^(2eta) (L s^(1 - 1/k) + s)`
    pub rhs_general: f64,
    /// Whether `|s gamma_j - u_j| <= (2k^2)^-1 L^-1 X^(1-j)` holds with `X`
    /// the right endpoint.
    pub condition_holds: bool,
    pub per_ell: Vec<f64>,
}

/// Sum over `l <= L` of the error made by replacing the Weyl sum of `gamma`
/// over the integers in `(lo, hi]` by `s^-1 S(s, lG) int e(l F)`, with
/// `F = gamma - G/s`.
pub fn major_arc_error(
    gamma: &RealPoly,
    s: u64,
    g: &IntPoly,
    lo: i64,
    hi: i64,
    l: u64,
    opts: MajorArcOptions,
) -> Result<MajorArcReport> {
    if hi <= lo {
        return Err(Error::domain("interval (lo, hi] is empty"));
    }
    if s == 0 {
        return Err(Error::domain("s must be positive"));
    }
    if g.degree() > gamma.degree() {
        return Err(Error::domain("deg G exceeds deg gamma"));
    }
    let k = gamma.degree();
    let f_poly = gamma.minus_int_over(g, s).or_else(|_| approx_minus(gamma, g, s))?;
    let beta: Vec<f64> = f_poly.to_f64s();
    let xr = hi as f64;
    // approximation condition on |s gamma_j - u_j| = s |beta_j|
    let condition_holds = (1..=k).all(|j| {
        s as f64 * beta[j].abs() <= 1.0 / (2.0 * (k * k) as f64 * l as f64 * xr.powi(j as i32 - 1))
    });
    let f_zero = f_poly.coeffs[1..].iter().all(|c| c.as_rational().is_some_and(|r| r.is_zero()));
    let mut per_ell = Vec::with_capacity(l as usize);
    let mut lhs_error = 0.0;
    for ell in 1..=l {
        let w = weyl_sum(gamma, lo + 1, hi, ell as i64)?;
        let cs = complete_sum::<f64>(s, g, ell)? / s as f64;
        let (integral, qerr) = if f_zero {
            let c0 = crate::scalar::unit(ell as f64 * beta[0]);
            (c0 * (hi - lo) as f64, 0.0)
        } else {
            let r = oscillatory_integral(&beta, lo as f64, hi as f64, ell, opts.quad_tol, opts.quad_budget)?;
            (r.value, r.error)
        };
        per_ell.push((w.value - cs * integral).norm());
        lhs_error += w.error_bound + cs.norm() * qerr;
    }
    let lhs = crate::scalar::compensated_sum(per_ell.iter().copied());
    let sk = (s as f64).powf(1.0 - 1.0 / k as f64);
    Ok(MajorArcReport {
        lhs,
        lhs_error,
        rhs_power_branch: opts.n_2eta * l as f64 * sk,
        rhs_general: opts.n_2eta * (l as f64 * sk + s as f64),
        condition_holds,
        per_ell,
    })
}

/// `gamma - G/s` when some coefficient is irrational: the difference is
/// taken in fixed point and rounded to the nearest double.
fn approx_minus(gamma: &RealPoly, g: &IntPoly, s: u64) -> Result<RealPoly> {
    let bits = gamma.bits;
    let mut coeffs = Vec::with_capacity(gamma.coeffs.len());
    for (j, c) in gamma.coeffs.iter().enumerate() {
        let mut v = c.to_fixed(bits)?;
        if j >= 1 && j <= g.degree() {
            let shift = FixedReal::from_ratio(&BigInt::from(g.coeffs[j - 1]), &BigInt::from(s), bits)?;
            v = v.sub(&shift);
        }
        coeffs.push(super::Coef::from_f64(v.to_f64())?);
    }
    RealPoly::new(coeffs, bits)
}
