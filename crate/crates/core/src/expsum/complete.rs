//! Complete sums `S(s, lG) = sum_{v=1}^s e(l G(v) / s)`.

use num_complex::Complex;

use super::{BoundReport, IntPoly};
use crate::counting::squarefull_split;
use crate::error::{Error, Result};
use crate::primes::gcd;
use crate::scalar::{unit_rational, CompensatedSum, Real};

/// `S(s, lG)` with every phase reduced exactly modulo `s`.
pub fn complete_sum<T: Real>(s: u64, g: &IntPoly, ell: u64) -> Result<Complex<T>> {
    if s == 0 {
        return Err(Error::domain("modulus s must be positive"));
    }
    let l = ell % s;
    let acc: CompensatedSum<T> = (1..=s)
        .map(|v| {
            let r = (l as u128 * g.eval_mod(v, s) as u128) % s as u128;
            unit_rational::<T>(r, s as u128)
        })
        .collect();
    Ok(acc.value())
}

/// `|S(s, lG)| / s` against `(s0/gcd(s0,l))^(-1/k) (s1/gcd(s1,l))^(-1/2)`,
/// where `s = s0 s1` is the squarefull/squarefree split.
pub fn cochrane_check(s: u64, g: &IntPoly, ell: u64) -> Result<BoundReport> {
    let k = g.degree() as f64;
    let value = complete_sum::<f64>(s, g, ell)?.norm() / s as f64;
    let (s0, s1) = squarefull_split(s);
    let a = (s0 / gcd(s0, ell)) as f64;
    let b = (s1 / gcd(s1, ell)) as f64;
    let bound = a.powf(-1.0 / k) * b.powf(-0.5);
    Ok(BoundReport::new(
        "(s0/gcd(s0,l))^(-1/k) (s1/gcd(s1,l))^(-1/2)",
        value,
        bound,
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_up_to;

    fn naive(s: u64, g: &IntPoly, ell: u64) -> Complex<f64> {
        let mut z = Complex::new(0.0, 0.0);
        for v in 1..=s {
            let mut x = 0f64;
            for (j, &u) in g.coeffs.iter().enumerate() {
                x += u as f64 * (v as f64).powi(j as i32 + 1);
            }
            let th = (ell as f64 * x / s as f64).fract();
            z += Complex::new(0.0, std::f64::consts::TAU * th).exp();
        }
        z
    }

    #[test]
    fn examples() {
        let sq = IntPoly::monomial(2);
        assert!((complete_sum::<f64>(1, &sq, 7).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((complete_sum::<f64>(5, &sq, 1).unwrap().norm() - 5f64.sqrt()).abs() < 1e-12);
        assert!(complete_sum::<f64>(4, &IntPoly::monomial(1), 1).unwrap().norm() < 1e-15);
        let g = IntPoly::new(vec![1, 3, 2]).unwrap();
        assert!((complete_sum::<f64>(12, &g, 5).unwrap() - naive(12, &g, 5)).norm() < 1e-10);
    }

    #[test]
    fn gauss_sum_law() {
        let sq = IntPoly::monomial(2);
        for p in primes_up_to(500).into_iter().filter(|&p| p > 2) {
            for ell in [1, 2, p - 1] {
                let z = complete_sum::<f64>(p, &sq, ell).unwrap();
                assert!((z.norm() - (p as f64).sqrt()).abs() < 1e-9, "p={p} l={ell}");
            }
        }
    }

    #[test]
    fn f32_agrees_roughly() {
        let sq = IntPoly::monomial(2);
        let z = complete_sum::<f32>(101, &sq, 3).unwrap();
        assert!((z.norm() - 101f32.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn periodic_in_ell() {
        let g = IntPoly::new(vec![2, 0, 5]).unwrap();
        for ell in [3u64, 40, 77] {
            let a = complete_sum::<f64>(37, &g, ell).unwrap();
            let b = complete_sum::<f64>(37, &g, ell % 37).unwrap();
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn cochrane_examples() {
        let r = cochrane_check(5, &IntPoly::monomial(2), 1).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        let r = cochrane_check(36, &IntPoly::new(vec![1, 1, 1]).unwrap(), 36).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12 && (r.bound_value - 1.0).abs() < 1e-12);
    }
}
