//! Linear congruence counts and pairs with a small multiple of
//! `a (y1^2 - y2^2) / q`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::monomial::{norm_below, norm_cutoff};
use super::CountReport;
use crate::error::{Error, Result};
use crate::primes::{gcd, mul_mod};

/// Pairs `(l, b)` with `1 <= l <= L`, `1 <= b <= B` and `l u = b (mod d)`.
pub fn count_congruence(u: i64, d: u64, l: u64, b: u64) -> u64 {
    assert!(d >= 1, "modulus must be positive");
    let u = u.rem_euclid(d as i64) as u64;
    (1..=l)
        .map(|ell| {
            let r = mul_mod(ell % d, u, d);
            let first = if r == 0 { d } else { r };
            if first > b {
                0
            } else {
                (b - first) / d + 1
            }
        })
        .sum()
}

/// Congruence count against `min(L, B) + BL/d`, which holds with
/// constant 1.
pub fn check_congruence_bound(u: i64, d: u64, l: u64, b: u64) -> CountReport {
    let count = count_congruence(u, d, l, b);
    let bound = l.min(b) as f64 + (b as f64) * (l as f64) / d as f64;
    let mut rep = CountReport::new("min(L, B) + BL/d", count, bound, true);
    // exact form of count <= min(L, B) + BL/d
    let m = l.min(b);
    rep.passes = Some(count <= m || (count - m) as u128 * d as u128 <= b as u128 * l as u128);
    rep
}

/// Which endpoint of the dyadic range `Y .. 2Y` is included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalConvention {
    /// `Y <= y < 2Y`
    #[default]
    ClosedOpen,
    /// `Y < y <= 2Y`
    OpenClosed,
}

impl IntervalConvention {
    pub fn range(self, y: u64) -> (u64, u64) {
        match self {
            IntervalConvention::ClosedOpen => (y, 2 * y - 1),
            IntervalConvention::OpenClosed => (y + 1, 2 * y),
        }
    }
}

impl std::str::FromStr for IntervalConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-open" | "[Y,2Y)" => Ok(Self::ClosedOpen),
            "open-closed" | "(Y,2Y]" => Ok(Self::OpenClosed),
            _ => Err(Error::Parse {
                what: "interval convention",
                detail: format!("{s:?} (expected closed-open or open-closed)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairQuery {
    pub w: u64,
    pub x: u64,
    pub y: u64,
    pub a: i64,
    pub q: u64,
    pub convention: IntervalConvention,
}

impl PairQuery {
    pub fn validate(&self) -> Result<()> {
        if self.w < 2 || self.x < 2 || self.y < 2 {
            return Err(Error::domain("W, X and Y must exceed 1"));
        }
        if self.q < 2 || self.q > 1 << 32 {
            return Err(Error::domain("q must lie in [2, 2^32]"));
        }
        if gcd(self.a.rem_euclid(self.q as i64) as u64, self.q) != 1 {
            return Err(Error::domain("need gcd(a, q) = 1"));
        }
        Ok(())
    }
}

/// Ordered pairs `y1 != y2` in the dyadic range with
/// `min_{1 <= s <= W} ||a (y1^2 - y2^2) s / q|| < 1/X`.
pub fn count_pairs_quadratic(query: &PairQuery) -> Result<u64> {
    query.validate()?;
    let q = query.q;
    let a = query.a.rem_euclid(q as i64) as u64;
    let cutoff = norm_cutoff(q, query.x as f64);
    // good[r]: residue r = y1^2 - y2^2 (mod q) qualifies
    let good: Vec<bool> = (0..q)
        .into_par_iter()
        .map(|r| {
            let ar = mul_mod(a, r, q);
            let mut m = 0u64;
            (1..=query.w).any(|_| {
                m = (m + ar) % q;
                norm_below(m, q, cutoff)
            })
        })
        .collect();
    let (lo, hi) = query.convention.range(query.y);
    let squares: Vec<u64> = (lo..=hi).map(|y| mul_mod(y % q, y % q, q)).collect();
    let count = squares
        .par_iter()
        .enumerate()
        .map(|(i, &s1)| {
            squares
                .iter()
                .enumerate()
                .filter(|&(j, &s2)| j != i && good[((s1 + q - s2) % q) as usize])
                .count() as u64
        })
        .sum();
    Ok(count)
}

/// Pair count against `(W Y^2 / q + 1)(1 + q/X)(WY)^eta`.
pub fn check_pairs_bound(query: &PairQuery, eta: f64) -> Result<CountReport> {
    let count = count_pairs_quadratic(query)?;
    let (w, x, y, q) = (query.w as f64, query.x as f64, query.y as f64, query.q as f64);
    let bound = (w * y * y / q + 1.0) * (1.0 + q / x) * (w * y).powf(eta);
    Ok(CountReport::new("(W Y^2/q + 1)(1 + q/X)(WY)^eta", count, bound, true))
}
