//! Type I and Type II sums with the leading coefficient replaced by a
//! convergent `a/q`: `g(n) = a n^k / q + beta`.
//!
//! Only the residue `l a (mn)^k mod q` matters for the absolute values
//! taken below, since `e(l beta)` is a common unimodular factor of every
//! inner sum.

use std::collections::HashMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::{mul_mod, pow_mod};
use crate::rational::{Convergent, ParamSchedule};
use crate::scalar::{unit, unit_rational};

/// Default operation cap (`l`, `y`, `n` triples).
pub const DEFAULT_OP_CAP: u128 = 2_000_000_000;

/// Residue `a mod q` and `q` as `u64`.
fn modulus(c: &Convergent) -> Result<(u64, u64)> {
    let q = u64::try_from(c.q).ok().filter(|&q| q >= 1 && q < 1 << 62).ok_or_else(|| Error::domain("q must lie in [1, 2^62)"))?;
    let a = c.a.rem_euclid(q as i128) as u64;
    Ok((a, q))
}

/// `a (m)^k mod q`.
#[inline]
pub fn base_residue(a: u64, m: u64, k: u32, q: u64) -> u64 {
    mul_mod(a, pow_mod(m % q, k as u64, q), q)
}

/// `e(l r / q)` for a residue `r`.
#[inline]
pub fn phase(ell: u64, r: u64, q: u64) -> Complex<f64> {
    unit_rational::<f64>(mul_mod(ell % q, r, q) as u128, q as u128)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeIReport {
    pub n: u64,
    pub k: u32,
    pub l: u64,
    pub y: u64,
    pub q: u128,
    pub value: f64,
    /// `N^(1 - 2 eta)`
    pub bound: f64,
    pub ratio: f64,
    /// Whether `Y` lies in the range where the estimate is claimed.
    pub y_in_range: bool,
    pub y_limit: f64,
    pub operations: u128,
    pub seed: u64,
}

/// `N/(2y) < n <= N/y`
fn n_range(n: u64, y: u64) -> (u64, u64) {
    (n / (2 * y) + 1, n / y)
}

fn l_count(sched: &ParamSchedule) -> u64 {
    if sched.l < 1.0 {
        0
    } else {
        sched.l_count()
    }
}

/// `sum_{l <= L} sum_{Y <= y < 2Y} |sum_{N/2y < n <= N/y} e(l g(yn))|`.
///
/// The inner sums run in parallel over `y`; the outer combination is done
/// sequentially in `(l, y)` order, so the result is bitwise independent of
/// the thread count. `seed` is recorded only: the sum has no free weights.
pub fn type_i_experiment(sched: &ParamSchedule, conv: &Convergent, y: u64, seed: u64, op_cap: u128) -> Result<TypeIReport> {
    if y < 1 {
        return Err(Error::domain("Y must be positive"));
    }
    let (a, q) = modulus(conv)?;
    let (n, k) = (sched.n, sched.k);
    let l = l_count(sched);
    let ys: Vec<u64> = (y..2 * y).collect();
    let per_l: u128 = ys.iter().map(|&yy| {
        let (lo, hi) = n_range(n, yy);
        hi.saturating_sub(lo - 1) as u128
    }).sum();
    let operations = per_l * l as u128;
    if operations > op_cap {
        return Err(Error::OperationCap { ops: operations, cap: op_cap });
    }
    // inner[y][l-1]
    let inner: Vec<Vec<f64>> = ys
        .par_iter()
        .map(|&yy| {
            let (lo, hi) = n_range(n, yy);
            let res: Vec<u64> = (lo..=hi).map(|m| base_residue(a, yy * m, k, q)).collect();
            (1..=l)
                .map(|ell| {
                    let mut acc = Complex::new(0.0, 0.0);
                    for &r in &res {
                        acc += phase(ell, r, q);
                    }
                    acc.norm()
                })
                .collect()
        })
        .collect();
    let mut value = 0.0;
    for ell in 0..l as usize {
        for row in &inner {
            value += row[ell];
        }
    }
    let rho = sched.rho.to_f64();
    let y_limit = if k == 2 {
        (n as f64).powf(1.0 - 2.5 * rho)
    } else {
        (n as f64).powf(0.5 + rho)
    };
    let bound = (n as f64).powf(1.0 - 2.0 * sched.eta);
    Ok(TypeIReport {
        n,
        k,
        l,
        y,
        q: conv.q,
        value,
        bound,
        ratio: value / bound,
        y_in_range: (y as f64) <= y_limit,
        y_limit,
        operations,
        seed,
    })
}

/// Coefficient sequence for the bilinear sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "seed")]
pub enum Weights {
    /// `e(theta)` with `theta` uniform in `[0, 1)` from xoshiro256++.
    Unimodular(u64),
    Ones,
    Zeros,
}

impl Weights {
    pub fn generate(self, len: usize) -> Vec<Complex<f64>> {
        match self {
            Weights::Unimodular(seed) => {
                let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
                (0..len).map(|_| unit(rng.gen::<f64>())).collect()
            }
            Weights::Ones => vec![Complex::new(1.0, 0.0); len],
            Weights::Zeros => vec![Complex::new(0.0, 0.0); len],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeIIReport {
    pub n: u64,
    pub k: u32,
    pub l: u64,
    pub y: u64,
    pub q: u128,
    pub value: f64,
    /// `N^(1 - eta)`
    pub bound: f64,
    pub ratio: f64,
    pub y_in_range: bool,
    pub y_range: (f64, f64),
    /// Quadruples with `l1 y1^k = l2 y2^k`.
    pub diagonal: u64,
    /// Of which trivial (`l1 = l2`, `y1 = y2`).
    pub diagonal_trivial: u64,
    pub operations: u128,
    pub a_weights: Weights,
    pub b_weights: Weights,
}

/// Number of `(l1, y1, l2, y2)` with `l1 y1^k = l2 y2^k`, `l <= L`,
/// `y` in `ys`.
pub fn diagonal_count(l: u64, ys: &[u64], k: u32) -> u64 {
    let mut counts: HashMap<u128, u64> = HashMap::new();
    for ell in 1..=l {
        for &y in ys {
            *counts.entry(ell as u128 * (y as u128).pow(k)).or_default() += 1;
        }
    }
    counts.values().map(|c| c * c).sum()
}

/// `sum_{l <= L} |sum_{x <= N/Y} a_x sum_{Y <= y < 2Y, N/2 < xy <= N} b_y e(l g(xy))|`.
///
/// Residues are tabulated once; the `l` sums run in parallel and each is
/// accumulated in the fixed `(x, y)` order.
pub fn type_ii_experiment(
    sched: &ParamSchedule,
    conv: &Convergent,
    y: u64,
    a_weights: Weights,
    b_weights: Weights,
    op_cap: u128,
) -> Result<TypeIIReport> {
    if y < 1 {
        return Err(Error::domain("Y must be positive"));
    }
    let (a, q) = modulus(conv)?;
    let (n, k) = (sched.n, sched.k);
    let l = l_count(sched);
    let x_max = n / y;
    let ys: Vec<u64> = (y..2 * y).collect();
    let ax = a_weights.generate(x_max as usize);
    let by = b_weights.generate(ys.len());
    // rows[x - 1] = (first index into ys, residues)
    let rows: Vec<(usize, Vec<u64>)> = (1..=x_max)
        .into_par_iter()
        .map(|x| {
            let idx: Vec<usize> = (0..ys.len()).filter(|&i| {
                let m = x * ys[i];
                m > n / 2 && m <= n
            }).collect();
            let first = idx.first().copied().unwrap_or(0);
            let res = idx.iter().map(|&i| base_residue(a, x * ys[i], k, q)).collect();
            (first, res)
        })
        .collect();
    let pairs: u128 = rows.iter().map(|r| r.1.len() as u128).sum();
    let operations = pairs * l as u128;
    if operations > op_cap {
        return Err(Error::OperationCap { ops: operations, cap: op_cap });
    }
    let per_l: Vec<f64> = (1..=l)
        .into_par_iter()
        .map(|ell| {
            let mut outer = Complex::new(0.0, 0.0);
            for (xi, (first, res)) in rows.iter().enumerate() {
                let mut inner = Complex::new(0.0, 0.0);
                for (j, &r) in res.iter().enumerate() {
                    inner += by[first + j] * phase(ell, r, q);
                }
                outer += ax[xi] * inner;
            }
            outer.norm()
        })
        .collect();
    let value: f64 = per_l.iter().fold(0.0, |acc, v| acc + v);
    let nf = n as f64;
    let rho = sched.rho.to_f64();
    let y_range = if k == 2 {
        (nf.powf(2.0 * rho), nf.powf(1.0 - 4.0 * rho))
    } else {
        (nf.powf(rho), nf.powf(1.0 - 2.0 * sched.j as f64 * rho))
    };
    let yf = y as f64;
    let bound = nf.powf(1.0 - sched.eta);
    Ok(TypeIIReport {
        n,
        k,
        l,
        y,
        q: conv.q,
        value,
        bound,
        ratio: value / bound,
        y_in_range: yf >= y_range.0 && yf <= y_range.1,
        y_range,
        diagonal: diagonal_count(l, &ys, k),
        diagonal_trivial: l * ys.len() as u64,
        operations,
        a_weights,
        b_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{schedule, select_modulus_for_n, AlphaSpec};
    use num_bigint::BigInt;
    use num_integer::Integer;

    /// Independent triple loop: big-integer phases, no tables.
    fn naive_type_i(n: u64, k: u32, l: u64, y: u64, c: &Convergent) -> f64 {
        let q = BigInt::from(c.q);
        let mut value = 0.0;
        for ell in 1..=l {
            for yy in y..2 * y {
                let mut acc = Complex::new(0.0, 0.0);
                for m in n / (2 * yy) + 1..=n / yy {
                    let r = (BigInt::from(ell) * BigInt::from(c.a) * BigInt::from(yy * m).pow(k)).mod_floor(&q);
                    acc += unit_rational::<f64>(r.try_into().unwrap(), c.q);
                }
                value += acc.norm();
            }
        }
        value
    }

    fn naive_type_ii(n: u64, k: u32, l: u64, y: u64, c: &Convergent, aw: Weights, bw: Weights) -> f64 {
        let q = BigInt::from(c.q);
        let x_max = n / y;
        let ax = aw.generate(x_max as usize);
        let by = bw.generate(y as usize);
        let mut value = 0.0;
        for ell in 1..=l {
            let mut outer = Complex::new(0.0, 0.0);
            for x in 1..=x_max {
                let mut inner = Complex::new(0.0, 0.0);
                for yy in y..2 * y {
                    if x * yy > n / 2 && x * yy <= n {
                        let r = (BigInt::from(ell) * BigInt::from(c.a) * BigInt::from(x * yy).pow(k)).mod_floor(&q);
                        inner += by[(yy - y) as usize] * unit_rational::<f64>(r.try_into().unwrap(), c.q);
                    }
                }
                outer += ax[(x - 1) as usize] * inner;
            }
            value += outer.norm();
        }
        value
    }

    fn setup(n: u64, k: u32) -> (ParamSchedule, Convergent) {
        let s = schedule(n, k, true, 0.01, 1e-5).unwrap();
        let c = select_modulus_for_n(&AlphaSpec::sqrt(2).unwrap(), &s).unwrap().convergent;
        (s, c)
    }

    #[test]
    fn type_i_matches_naive() {
        let (s, c) = setup(10_000, 2);
        let r = type_i_experiment(&s, &c, 100, 0, DEFAULT_OP_CAP).unwrap();
        assert_eq!(r.value.to_bits(), naive_type_i(10_000, 2, s.l_count(), 100, &c).to_bits());
        assert!(r.value > 0.0);
    }

    #[test]
    fn type_i_empty_l() {
        let (s, c) = setup(10_000, 2);
        let mut s0 = s.clone();
        s0.l = 0.5;
        assert_eq!(type_i_experiment(&s0, &c, 100, 0, DEFAULT_OP_CAP).unwrap().value, 0.0);
    }

    #[test]
    fn type_ii_matches_naive() {
        let (s, c) = setup(20_000, 3);
        let aw = Weights::Unimodular(1);
        let bw = Weights::Unimodular(2);
        let r = type_ii_experiment(&s, &c, 40, aw, bw, DEFAULT_OP_CAP).unwrap();
        assert_eq!(r.value.to_bits(), naive_type_ii(20_000, 3, s.l_count(), 40, &c, aw, bw).to_bits());
        let z = type_ii_experiment(&s, &c, 40, aw, Weights::Zeros, DEFAULT_OP_CAP).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(diagonal_count(2, &[2, 3], 3), 4);
        // 1 * 2^2 = 4 * 1^2
        assert_eq!(diagonal_count(4, &[1, 2], 2), 8 + 2);
    }

    #[test]
    fn operation_cap() {
        let (s, c) = setup(10_000, 2);
        assert!(matches!(
            type_i_experiment(&s, &c, 100, 0, 10),
            Err(Error::OperationCap { .. })
        ));
    }
}
