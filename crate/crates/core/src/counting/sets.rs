//! Squarefull/squarefree splitting, the sets `A(S0, S1, d0, d1)` and
//! smooth-number counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{factorize, gcd, integer_sqrt, primes_up_to};

/// Largest `x` accepted by [`smooth_count`].
pub const SMOOTH_CAP: u64 = 10_000_000;

/// Split `s = s0 * s1` with `s0` squarefull, `s1` squarefree and coprime.
///
/// ```
/// assert_eq!(fracpoly::counting::squarefull_split(360), (72, 5));
/// ```
pub fn squarefull_split(s: u64) -> (u64, u64) {
    assert!(s >= 1, "squarefull_split needs s >= 1");
    let mut s0 = 1u64;
    let mut s1 = 1u64;
    for (p, e) in factorize(s) {
        if e >= 2 {
            s0 *= p.pow(e);
        } else {
            s1 *= p;
        }
    }
    (s0, s1)
}

pub fn is_squarefull(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e >= 2)
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Squarefree flags for `0..=n` (index 0 is false).
fn squarefree_table(n: u64) -> Vec<bool> {
    let mut ok = vec![true; n as usize + 1];
    ok[0] = false;
    let mut d = 2u64;
    while d * d <= n {
        let sq = d * d;
        let mut m = sq;
        while m <= n {
            ok[m as usize] = false;
            m += sq;
        }
        d += 1;
    }
    ok
}

/// Squarefull numbers in `[lo, hi]`, sorted. Every squarefull number is
/// `a^2 b^3` for exactly one squarefree `b`.
pub fn squarefull_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo.max(1) {
        return Vec::new();
    }
    let mut b_max = 1u64;
    while (b_max + 1).pow(3) <= hi {
        b_max += 1;
    }
    let sf = squarefree_table(b_max);
    let mut out = Vec::new();
    for b in 1..=b_max {
        if !sf[b as usize] {
            continue;
        }
        let b3 = b * b * b;
        let a_max = integer_sqrt(hi / b3);
        for a in 1..=a_max {
            let v = a * a * b3;
            if v >= lo {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Parameters of `A(S0, S1, d0, d1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ASetQuery {
    pub s0: f64,
    pub s1: f64,
    pub d0: u64,
    pub d1: u64,
}

impl ASetQuery {
    pub fn new(s0: f64, s1: f64, d0: u64, d1: u64) -> Self {
        Self { s0, s1, d0, d1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s0 >= 1.0 && self.s1 >= 1.0) || !self.s0.is_finite() || !self.s1.is_finite() {
            return Err(Error::domain("S0 and S1 must be finite and at least 1"));
        }
        if self.d0 == 0 || self.d1 == 0 {
            return Err(Error::domain("d0 and d1 must be positive"));
        }
        Ok(())
    }
}

/// Integers `n` with `x < n <= 2x`.
fn dyadic_range(x: f64) -> (u64, u64) {
    (x.floor() as u64 + 1, (2.0 * x).floor() as u64)
}

/// All `s = s0 s1` in `A(S0, S1, d0, d1)`, sorted. Fails with a size
/// error when `2 S0 * 2 S1` exceeds `cap`.
pub fn enumerate_a(query: &ASetQuery, cap: u128) -> Result<Vec<u64>> {
    query.validate()?;
    let size = (2.0 * query.s0).floor() as u128 * (2.0 * query.s1).floor() as u128;
    if size > cap {
        return Err(Error::Size { size, cap });
    }
    let (lo0, hi0) = dyadic_range(query.s0);
    let (lo1, hi1) = dyadic_range(query.s1);
    let s0s: Vec<u64> = squarefull_in(lo0, hi0)
        .into_iter()
        .filter(|v| v % query.d0 == 0)
        .collect();
    let sf = squarefree_table(hi1);
    let s1s: Vec<u64> = (lo1..=hi1)
        .filter(|&v| sf[v as usize] && v % query.d1 == 0)
        .collect();
    let mut out = Vec::new();
    for &a in &s0s {
        for &b in &s1s {
            if gcd(a, b) == 1 {
                out.push(a * b);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `Ψ(x, y)`: integers `n <= x` with no prime factor above `y`.
pub fn smooth_count(x: u64, y: u64) -> Result<u64> {
    if x < 1 || y < 2 {
        return Err(Error::domain("smooth_count needs x >= 1 and y >= 2"));
    }
    if y >= x {
        return Ok(x);
    }
    if x > SMOOTH_CAP {
        return Err(Error::Size {
            size: x as u128,
            cap: SMOOTH_CAP as u128,
        });
    }
    // largest prime factor sieve
    let n = x as usize;
    let mut lpf = vec![1u64; n + 1];
    for p in primes_up_to(x) {
        let mut m = p as usize;
        while m <= n {
            lpf[m] = p;
            m += p as usize;
        }
    }
    Ok(lpf[1..].iter().filter(|&&p| p <= y).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        assert_eq!(squarefull_split(12), (4, 3));
        assert_eq!(squarefull_split(1), (1, 1));
        assert_eq!(squarefull_split(360), (72, 5));
    }

    #[test]
    fn split_roundtrip_exhaustive() {
        for s in 1..=100_000u64 {
            let (a, b) = squarefull_split(s);
            assert_eq!(a * b, s);
            assert_eq!(gcd(a, b), 1);
            assert!(a == 1 || is_squarefull(a));
            assert!(is_squarefree(b));
        }
    }

    #[test]
    fn squarefull_generation_matches_filter() {
        let fast = squarefull_in(1, 5000);
        let slow: Vec<u64> = (1..=5000).filter(|&n| n == 1 || is_squarefull(n)).collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn a_set_examples() {
        let cap = 1 << 20;
        assert_eq!(enumerate_a(&ASetQuery::new(4.0, 2.0, 1, 1), cap).unwrap(), vec![24]);
        assert!(enumerate_a(&ASetQuery::new(4.0, 2.0, 3, 1), cap).unwrap().is_empty());
        assert_eq!(enumerate_a(&ASetQuery::new(8.0, 1.0, 1, 1), cap).unwrap(), vec![18]);
        assert!(matches!(
            enumerate_a(&ASetQuery::new(100.0, 100.0, 1, 1), 1000),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn a_set_members_split_conformingly() {
        let q = ASetQuery::new(50.0, 30.0, 2, 3);
        let set = enumerate_a(&q, 1 << 20).unwrap();
        assert!(set.windows(2).all(|w| w[0] < w[1]));
        for s in set {
            let (s0, s1) = squarefull_split(s);
            assert!(s0 > 50 && s0 <= 100 && s0 % 2 == 0);
            assert!(s1 > 30 && s1 <= 60 && s1 % 3 == 0);
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(smooth_count(10, 2).unwrap(), 4);
        assert_eq!(smooth_count(100, 3).unwrap(), 20);
        assert_eq!(smooth_count(57, 60).unwrap(), 57);
        assert!(smooth_count(10, 1).is_err());
    }
}
