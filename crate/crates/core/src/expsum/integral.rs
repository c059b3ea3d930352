//! `int_a^b e(l F(z)) dz` for a real polynomial `F`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::IntPoly;
use crate::error::{Error, Result};
use crate::quad::{Adaptive, QuadResult};
use crate::scalar::{unit, Real};

/// Evaluations allowed before giving up.
pub const DEFAULT_EVAL_BUDGET: usize = 20_000_000;

/// Largest number of initial pieces the interval is cut into.
const MAX_PIECES: usize = 1 << 20;

/// Adaptive Gauss-Legendre value of `int_a^b e(l F(z)) dz`, with
/// `beta[j] = beta_j` (`beta[0]` is the constant term). The interval is
/// first cut so that `l F` moves by at most one unit per piece.
pub fn oscillatory_integral<T: Real>(
    beta: &[T],
    a: T,
    b: T,
    ell: u64,
    tol: T,
    budget: usize,
) -> Result<QuadResult<Complex<T>, T>> {
    if !(b > a) {
        return Err(Error::domain("need B > A"));
    }
    if !(tol > T::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let l = T::from_u64(ell).unwrap();
    if beta.iter().skip(1).all(|c| c.is_zero()) {
        let c0 = beta.first().copied().unwrap_or_else(T::zero);
        return Ok(QuadResult {
            value: unit(l * c0) * (b - a),
            error: T::zero(),
            evaluations: 0,
            panels: 0,
        });
    }
    let eval = |z: T| -> T {
        let mut acc = T::zero();
        for &c in beta.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // bound on |l F'| over [a, b]
    let m = a.abs().max(b.abs());
    let mut slope = T::zero();
    for (j, &c) in beta.iter().enumerate().skip(1) {
        slope = slope + T::from_usize(j).unwrap() * c.abs() * m.powi(j as i32 - 1);
    }
    let turns = (l * slope * (b - a)).ceil().to_usize().unwrap_or(MAX_PIECES);
    let pieces = turns.clamp(1, MAX_PIECES);
    let h = (b - a) / T::from_usize(pieces).unwrap();
    let mut breaks: Vec<T> = (0..pieces).map(|i| a + h * T::from_usize(i).unwrap()).collect();
    breaks.push(b);
    let quad = Adaptive::<T>::new(10, budget);
    if pieces * 30 > budget {
        return Err(Error::Budget {
            estimate: f64::NAN,
            achieved: f64::INFINITY,
        });
    }
    quad.integrate_pieces(&breaks, tol, |z| unit(l * eval(z)))
}

/// Which numerator enters the decay bound `|y^k a/q - u_j/s|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayIndex {
    /// `u_1`, as printed.
    First,
    /// `u_k`, the coefficient matching `y^k a / q`.
    #[default]
    Leading,
}

/// `min(N/Y, l^(-1/k) |y^k a/q - u/s|^(-1/k))` with the difference taken
/// exactly.
pub fn decay_bound(
    length: f64,
    ell: u64,
    y: u64,
    a: i64,
    q: u64,
    g: &IntPoly,
    s: u64,
    index: DecayIndex,
) -> f64 {
    let k = g.degree() as i32;
    let u = match index {
        DecayIndex::First => g.coeffs[0],
        DecayIndex::Leading => g.coeffs[g.degree() - 1],
    };
    let yk = BigInt::from(y).pow(k as u32);
    let diff = BigRational::new(yk * a, BigInt::from(q)) - BigRational::new(u.into(), s.into());
    let d = diff.abs().to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        return length;
    }
    let decay = ((ell as f64) * d).powf(-1.0 / k as f64);
    length.min(decay)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> Complex<f64>, a: f64, b: f64, n: usize) -> Complex<f64> {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(a + h * i as f64) * w;
        }
        acc * (h / 3.0)
    }

    #[test]
    fn trivial_integrands() {
        let r = oscillatory_integral(&[0.0f64, 0.0], 0.0, 1.0, 1, 1e-12, DEFAULT_EVAL_BUDGET).unwrap();
        assert_eq!(r.value, Complex::new(1.0, 0.0));
        let r = oscillatory_integral(&[0.0f64, 1.0], 0.0, 1.0, 1, 1e-12, DEFAULT_EVAL_BUDGET).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn quadratic_matches_dense_simpson() {
        let r = oscillatory_integral(&[0.0f64, 0.0, 1.0], 0.0, 1.0, 1, 1e-13, DEFAULT_EVAL_BUDGET).unwrap();
        let oracle = simpson(|z| unit(z * z), 0.0, 1.0, 1_000_000);
        assert!((r.value - oracle).norm() < 1e-10, "{:?} vs {oracle:?}", r.value);
    }

    #[test]
    fn halving_tol_stays_within_certificate() {
        let beta = [0.0f64, 0.3, -1.7, 0.05];
        let mut prev = oscillatory_integral(&beta, 1.0, 9.0, 3, 1e-6, DEFAULT_EVAL_BUDGET).unwrap();
        for i in 1..6 {
            let tol = 1e-6 / 2f64.powi(i);
            let next = oscillatory_integral(&beta, 1.0, 9.0, 3, tol, DEFAULT_EVAL_BUDGET).unwrap();
            assert!((next.value - prev.value).norm() <= prev.error + 1e-15);
            prev = next;
        }
    }

    #[test]
    fn budget_error() {
        let e = oscillatory_integral(&[0.0f64, 0.0, 1e4], 0.0, 10.0, 7, 1e-14, 1000).unwrap_err();
        assert!(matches!(e, Error::Budget { .. }));
    }

    #[test]
    fn decay_bound_uses_exact_difference() {
        let g = IntPoly::new(vec![5, 1]).unwrap();
        // y^2 a / q = 4/7, u_2 / s = 1/2 -> diff 1/14
        let b = decay_bound(1e9, 1, 2, 1, 7, &g, 2, DecayIndex::Leading);
        assert!((b - 14f64.sqrt()).abs() < 1e-12);
        // with u_1: |4/7 - 5/2| = 27/14
        let b1 = decay_bound(1.0, 1, 2, 1, 7, &g, 2, DecayIndex::First);
        assert!((b1 - (14.0f64 / 27.0).sqrt()).abs() < 1e-12);
        assert_eq!(decay_bound(0.5, 1, 2, 1, 7, &g, 2, DecayIndex::First), 0.5);
    }
}
