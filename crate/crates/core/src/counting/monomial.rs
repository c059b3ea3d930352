//! Counts of `y` with `||s a y^k / q|| < 1/Z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sets::{enumerate_a, ASetQuery};
use super::CountReport;
use crate::error::{Error, Result};
use crate::primes::{gcd, mul_mod, pow_mod};

/// Ranges longer than this are split across the thread pool.
const PAR_THRESHOLD: u64 = 1 << 14;

/// Smallest integer `c` with `m < c  <=>  m < q/Z` for every integer `m`,
/// i.e. `ceil(q/Z)`, computed from the exact binary value of `Z`.
pub fn norm_cutoff(q: u64, z: f64) -> u64 {
    assert!(z > 0.0 && z.is_finite(), "Z must be positive and finite");
    if z.fract() == 0.0 && z < 1e18 {
        let zi = z as u64;
        return q.div_ceil(zi);
    }
    let zr = BigRational::from_float(z).expect("finite");
    let x = BigRational::from_integer(BigInt::from(q)) / zr;
    x.ceil().to_integer().to_u64().expect("q/Z fits in u64")
}

/// `||r/q|| < 1/Z` given `cutoff = norm_cutoff(q, Z)`.
#[inline]
pub fn norm_below(r: u64, q: u64, cutoff: u64) -> bool {
    let r = r % q;
    r.min(q - r) < cutoff
}

fn reduce(a: i64, q: u64) -> u64 {
    a.rem_euclid(q as i64) as u64
}

/// Parameters of the count `N_k(Y, D, Z, s)` for the modulus `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NkQuery {
    pub k: u32,
    pub y: u64,
    pub d: u64,
    pub z: f64,
    pub s: u64,
    pub a: i64,
    pub q: u64,
}

impl NkQuery {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::domain("k must be at least 2"));
        }
        if self.q < 2 || self.q > (1 << 62) {
            return Err(Error::domain("q must lie in [2, 2^62]"));
        }
        if self.y < 1 || self.y >= self.q {
            return Err(Error::domain("need 1 <= Y < q"));
        }
        if self.d < 1 || self.d >= self.q {
            return Err(Error::domain("need 1 <= D < q"));
        }
        if !(self.z >= 2.0) || !self.z.is_finite() {
            return Err(Error::domain("need Z >= 2"));
        }
        if self.s < 1 || self.s >= self.q {
            return Err(Error::domain("need 1 <= s < q"));
        }
        if gcd(reduce(self.a, self.q), self.q) != 1 {
            return Err(Error::domain("need gcd(a, q) = 1"));
        }
        Ok(())
    }
}

fn count_range(lo: u64, hi: u64, pred: impl Fn(u64) -> bool + Sync) -> u64 {
    if hi < lo {
        return 0;
    }
    if hi - lo < PAR_THRESHOLD {
        (lo..=hi).filter(|&y| pred(y)).count() as u64
    } else {
        (lo..=hi).into_par_iter().filter(|&y| pred(y)).count() as u64
    }
}

/// Count with an arbitrary gcd cap (the query's `D` is ignored).
fn count_nk_with(query: &NkQuery, d: u64) -> u64 {
    let q = query.q;
    let sa = mul_mod(query.s % q, reduce(query.a, q), q);
    let cutoff = norm_cutoff(q, query.z);
    count_range(query.y + 1, 2 * query.y, |y| {
        gcd(y, q) <= d && norm_below(mul_mod(sa, pow_mod(y % q, query.k as u64, q), q), q, cutoff)
    })
}

/// Exact `#{y in (Y, 2Y] : gcd(y, q) <= D, ||s a y^k / q|| < 1/Z}`.
pub fn count_nk(query: &NkQuery) -> Result<u64> {
    query.validate()?;
    Ok(count_nk_with(query, query.d))
}

/// Reports against every bound that applies to `N_k`. `n` is the global
/// size entering the cube case; without it that report is inapplicable.
pub fn check_nk_bounds(query: &NkQuery, eta: f64, n: Option<u64>) -> Result<Vec<CountReport>> {
    query.validate()?;
    let qf = query.q as f64;
    let yf = query.y as f64;
    let z = query.z;
    let sd_k = (query.s as f64) * (query.d as f64).powi(query.k as i32);
    let mut out = Vec::new();

    let c1 = count_nk_with(query, 1);
    let cd = count_nk_with(query, query.d);
    out.push(CountReport::new("q^(1+eta)/Z [D=1]", c1, qf.powf(1.0 + eta) / z, true));
    out.push(CountReport::new(
        "q^(1+2eta)/Z [s D^k < q]",
        cd,
        qf.powf(1.0 + 2.0 * eta) / z,
        sd_k < qf,
    ));
    if query.k == 3 {
        let c_all = count_nk_with(query, query.q);
        let g = gcd(query.s, query.q) as f64;
        let (bound, ok) = match n {
            Some(n) => {
                let nf = n as f64;
                let n3 = nf.powi(3);
                let b = yf.sqrt()
                    + nf.powf(eta)
                        * (yf * z.powf(-0.25) + yf * (g / qf).powf(0.25) + yf.powf(0.25) * qf.powf(0.25) * z.powf(-0.25));
                (b, yf <= n3 && z <= n3)
            }
            None => (f64::NAN, false),
        };
        out.push(CountReport::new(
            "Y^(1/2) + N^eta (Y Z^(-1/4) + Y (gcd(s,q)/q)^(1/4) + Y^(1/4) q^(1/4) Z^(-1/4)) [D=q]",
            c_all,
            bound,
            ok,
        ));
    }
    if query.k == 2 {
        let shape = (yf + qf.sqrt()) / z.sqrt();
        out.push(CountReport::new("q^eta (Y + q^(1/2)) Z^(-1/2) [D=1]", c1, qf.powf(eta) * shape, true));
        let sd2 = (query.s as f64) * (query.d as f64).powi(2);
        out.push(CountReport::new(
            "q^(2eta) (Y + q^(1/2)) Z^(-1/2) [s D^2 < q]",
            cd,
            qf.powf(2.0 * eta) * shape,
            sd2 < qf,
        ));
    }
    Ok(out)
}

/// Count of `A(S0, S1, d0, d1)` against `N^eta S0^(1/2) S1 d0^(-1/2) / d1`.
pub fn check_a_set_bound(query: &ASetQuery, n: u64, eta: f64, cap: u128) -> Result<CountReport> {
    let nf = n as f64;
    if query.s0 > nf || query.s1 > nf {
        return Err(Error::domain("need S0 <= N and S1 <= N"));
    }
    let count = enumerate_a(query, cap)?.len() as u64;
    let bound = nf.powf(eta) * query.s0.sqrt() * query.s1 / (query.d0 as f64).sqrt() / query.d1 as f64;
    Ok(CountReport::new("N^eta S0^(1/2) S1 d0^(-1/2) d1^(-1)", count, bound, true))
}

/// Parameters of `M_k(Y, Z, S0, S1)`; `gcd_cap` plays the role of `N^rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MkQuery {
    pub k: u32,
    pub y: u64,
    pub z: f64,
    pub s0: f64,
    pub s1: f64,
    pub a: i64,
    pub q: u64,
    pub gcd_cap: u64,
}

impl MkQuery {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::domain("k must be at least 2"));
        }
        if self.q < 2 || self.q > (1 << 62) {
            return Err(Error::domain("q must lie in [2, 2^62]"));
        }
        if self.y < 1 || self.y >= self.q {
            return Err(Error::domain("need 1 <= Y < q"));
        }
        if !(self.z >= 2.0) || !self.z.is_finite() {
            return Err(Error::domain("need Z >= 2"));
        }
        if self.gcd_cap < 1 {
            return Err(Error::domain("gcd_cap must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MkCount {
    pub count: u64,
    pub a_size: u64,
    /// The set of admissible `s` was empty.
    pub a_empty: bool,
}

/// Exact `M_k`: `y in (Y, 2Y]` with `gcd(y, q) <= gcd_cap` and
/// `||s a y^k / q|| < 1/Z` for at least one `s in A(S0, S1, 1, 1)`.
pub fn count_mk(query: &MkQuery, cap: u128) -> Result<MkCount> {
    query.validate()?;
    let q = query.q;
    let set = enumerate_a(&ASetQuery::new(query.s0, query.s1, 1, 1), cap)?;
    let a = reduce(query.a, q);
    let mut residues: Vec<u64> = set.iter().map(|&s| mul_mod(s % q, a, q)).collect();
    residues.sort_unstable();
    residues.dedup();
    let cutoff = norm_cutoff(q, query.z);
    let count = if residues.is_empty() {
        0
    } else {
        count_range(query.y + 1, 2 * query.y, |y| {
            if gcd(y, q) > query.gcd_cap {
                return false;
            }
            let yk = pow_mod(y % q, query.k as u64, q);
            residues.iter().any(|&r| norm_below(mul_mod(r, yk, q), q, cutoff))
        })
    };
    Ok(MkCount {
        count,
        a_size: set.len() as u64,
        a_empty: set.is_empty(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MkReport {
    pub count: MkCount,
    /// `4 S0 S1 N^(k rho) < q`
    pub side_condition: bool,
    pub reports: Vec<CountReport>,
}

/// Reports of `M_k` against its general bound and the `k = 2`, `k = 3`
/// refinements.
pub fn check_mk_bounds(query: &MkQuery, n: u64, eta: f64, rho: f64, cap: u128) -> Result<MkReport> {
    let count = count_mk(query, cap)?;
    let nf = n as f64;
    let qf = query.q as f64;
    let yf = query.y as f64;
    let z = query.z;
    let side = 4.0 * query.s0 * query.s1 * nf.powf(query.k as f64 * rho) < qf;
    let pre = nf.powf(3.0 * eta) * query.s0.sqrt() * query.s1;
    let c = count.count;
    let mut reports = vec![CountReport::new("N^(3eta) S0^(1/2) S1 q/Z", c, pre * qf / z, side)];
    if query.k == 2 {
        reports.push(CountReport::new(
            "N^(3eta) S0^(1/2) S1 (Y + q^(1/2)) Z^(-1/2)",
            c,
            pre * (yf + qf.sqrt()) / z.sqrt(),
            side,
        ));
    }
    if query.k == 3 {
        let b = pre * (yf.sqrt() + yf * z.powf(-0.25) + yf.powf(0.25) * qf.powf(0.25) * z.powf(-0.25));
        reports.push(CountReport::new(
            "N^(3eta) S0^(1/2) S1 (Y^(1/2) + Y Z^(-1/4) + Y^(1/4) q^(1/4) Z^(-1/4))",
            c,
            b,
            side && z < qf,
        ));
    }
    Ok(MkReport {
        count,
        side_condition: side,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nk(k: u32, y: u64, d: u64, z: f64, s: u64, a: i64, q: u64) -> NkQuery {
        NkQuery { k, y, d, z, s, a, q }
    }

    fn naive(qr: &NkQuery) -> u64 {
        let q = qr.q as i128;
        (qr.y + 1..=2 * qr.y)
            .filter(|&y| {
                let m = (qr.s as i128 * qr.a as i128 % q * (y as i128).pow(qr.k) % q).rem_euclid(q);
                let dist = BigRational::new(m.min(q - m).into(), q.into());
                let zr = BigRational::from_float(qr.z).unwrap();
                gcd(y, qr.q) <= qr.d && dist * zr < BigRational::from_integer(1.into())
            })
            .count() as u64
    }

    #[test]
    fn nk_examples() {
        assert_eq!(count_nk(&nk(2, 3, 1, 2.0, 2, 3, 7)).unwrap(), 3);
        assert_eq!(count_nk(&nk(2, 2, 9, 5.0, 1, 3, 10)).unwrap(), 0);
        assert_eq!(count_nk(&nk(3, 1, 6, 4.0, 1, 1, 7)).unwrap(), 1);
    }

    #[test]
    fn nk_matches_rational_oracle() {
        for q in [97u64, 100, 221] {
            for z in [2.0, 2.5, 3.7, 10.0, 33.3] {
                for k in 2..=4 {
                    let qr = nk(k, q / 3, 5, z, 7, -3, q);
                    if qr.validate().is_ok() {
                        assert_eq!(count_nk(&qr).unwrap(), naive(&qr), "{qr:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn cutoff_boundary_is_strict() {
        // ||2/10|| = 1/5 is not < 1/5
        assert_eq!(norm_cutoff(10, 5.0), 2);
        assert!(!norm_below(2, 10, 2));
        assert_eq!(norm_cutoff(10, 4.0), 3);
        assert_eq!(norm_cutoff(7, 2.5), 3);
    }

    #[test]
    fn nk_validation() {
        assert!(count_nk(&nk(2, 3, 1, 1.0, 2, 3, 7)).is_err());
        assert!(count_nk(&nk(2, 3, 1, 2.0, 7, 3, 7)).is_err());
        assert!(count_nk(&nk(2, 3, 1, 2.0, 2, 2, 10)).is_err());
    }

    #[test]
    fn nk_lemma_reports() {
        let r = check_nk_bounds(&nk(2, 2, 9, 5.0, 1, 3, 10), 1e-3, None).unwrap();
        let sq = r.iter().find(|c| c.bound_name.starts_with("q^eta")).unwrap();
        let expect = 10f64.powf(1e-3) * (2.0 + 10f64.sqrt()) / 5f64.sqrt();
        assert!((sq.bound_value - expect).abs() < 1e-12);
        assert!((sq.bound_value - 2.31).abs() < 0.01);
        assert_eq!(sq.ratio, 0.0);
        let c3 = check_nk_bounds(&nk(3, 5, 2, 3.0, 2, 5, 101), 1e-3, None).unwrap();
        assert!(c3.iter().any(|c| c.bound_name.starts_with("Y^(1/2)") && !c.applicable));
        let c3n = check_nk_bounds(&nk(3, 5, 2, 3.0, 2, 5, 101), 1e-3, Some(1000)).unwrap();
        assert!(c3n.iter().all(|c| c.ratio.is_finite()));
    }

    #[test]
    fn lemma4_report() {
        let r = check_a_set_bound(&ASetQuery::new(4.0, 2.0, 1, 1), 100, 0.01, 1 << 20).unwrap();
        assert_eq!(r.exact_count, 1);
        assert!((r.bound_value - 100f64.powf(0.01) * 4.0).abs() < 1e-12);
        assert!((r.ratio - 0.2386).abs() < 1e-3);
        let e = check_a_set_bound(&ASetQuery::new(4.0, 2.0, 1, 5), 100, 0.01, 1 << 20).unwrap();
        assert_eq!(e.ratio, 0.0);
    }

    fn mk(k: u32, y: u64, z: f64, s0: f64, s1: f64, a: i64, q: u64, cap: u64) -> MkQuery {
        MkQuery { k, y, z, s0, s1, a, q, gcd_cap: cap }
    }

    #[test]
    fn mk_examples() {
        assert_eq!(count_mk(&mk(3, 2, 4.0, 4.0, 2.0, 1, 11, 1), 1 << 20).unwrap().count, 1);
        // Z > q: the smallest nonzero distance is 1/q
        assert_eq!(count_mk(&mk(3, 5, 20.0, 4.0, 2.0, 1, 11, 10), 1 << 20).unwrap().count, 0);
        // Z = 2 with q odd: everything passes
        let all = (6..=10u64).filter(|&y| gcd(y, 15) <= 3).count() as u64;
        assert_eq!(count_mk(&mk(2, 5, 2.0, 4.0, 2.0, 1, 15, 3), 1 << 20).unwrap().count, all);
        // (1, 2] holds no squarefull number
        let empty = count_mk(&mk(2, 5, 2.0, 1.0, 2.0, 1, 15, 3), 1 << 20).unwrap();
        assert!(empty.a_empty && empty.count == 0);
    }

    #[test]
    fn mk_side_condition() {
        let r = check_mk_bounds(&mk(2, 50, 10.0, 4.0, 2.0, 3, 1009, 3), 1000, 1e-3, 2.0 / 13.0, 1 << 20).unwrap();
        // 4 * 4 * 2 * 1000^(4/13) = 266 < 1009
        assert!(r.side_condition);
        let r = check_mk_bounds(&mk(3, 50, 10.0, 4.0, 2.0, 3, 1009, 3), 1_000_000, 1e-3, 0.1, 1 << 20).unwrap();
        assert!(!r.side_condition);
        assert!(r.reports.iter().all(|c| !c.applicable));
    }
}
