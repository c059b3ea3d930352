use serde::Serialize;

use super::{cf_convergents, j_invariant, rho, sieve_exponents, AlphaSpec, Convergent, Rho};
use crate::error::{Error, Result};

/// Every derived parameter for a given `N`, degree and exponent choice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSchedule {
    pub n: u64,
    pub k: u32,
    pub monomial: bool,
    pub j: u64,
    pub rho: Rho,
    pub epsilon: f64,
    pub eta: f64,
    /// `2 N^(ρ - ε/2)`
    pub l1: f64,
    /// `N^(ρ - ε/3)`
    pub l: f64,
    /// `1 / L1`
    pub delta: f64,
    /// `(L1 N^k)^(1/2)`
    pub q_lo: f64,
    /// `2 q_lo`
    pub q_hi: f64,
    /// `L / (N^(ε/7) L1)`, equal to `N^(ε/42) / 2`.
    pub l_ratio: f64,
    /// Whether `L > N^(ε/7) L1` holds at this (finite) `N`.
    pub l_exceeds_bound: bool,
    pub sieve_alpha: f64,
    pub sieve_alpha_beta: f64,
}

impl ParamSchedule {
    /// Replace `L1` (and the quantities derived from it); used for
    /// degenerate plumbing checks such as `L1 = 1`.
    pub fn with_l1(mut self, l1: f64) -> Self {
        self.l1 = l1;
        self.delta = 1.0 / l1;
        self.q_lo = q_lo(l1, self.n, self.k);
        self.q_hi = 2.0 * self.q_lo;
        self.l_ratio = self.l / ((self.n as f64).powf(self.epsilon / 7.0) * l1);
        self.l_exceeds_bound = self.l_ratio > 1.0;
        self
    }

    /// Number of `ℓ` values in the `ℓ`-sums, `floor(L)`.
    pub fn l_count(&self) -> u64 {
        self.l.floor() as u64
    }
}

fn q_lo(l1: f64, n: u64, k: u32) -> f64 {
    let direct = (l1 * (n as f64).powi(k as i32)).sqrt();
    if direct.is_finite() {
        direct
    } else {
        (0.5 * (l1.ln() + k as f64 * (n as f64).ln())).exp()
    }
}

/// Build the schedule for `N`. The finite-`N` inequality `L > N^(ε/7) L1`
/// is recorded in `l_exceeds_bound`; it needs `N > 2^(42/ε)` and so fails
/// at every practical size. Use [`schedule_strict`] to reject it.
pub fn schedule(n: u64, k: u32, monomial: bool, epsilon: f64, eta: f64) -> Result<ParamSchedule> {
    if n < 10 {
        return Err(Error::domain(format!("N = {n} must be at least 10")));
    }
    if !(epsilon > 0.0 && epsilon < 0.1) {
        return Err(Error::domain(format!("epsilon = {epsilon} must lie in (0, 0.1)")));
    }
    if !(eta > 0.0 && eta < epsilon) {
        return Err(Error::domain(format!("eta = {eta} must lie in (0, epsilon)")));
    }
    let j = j_invariant(k, monomial)?;
    let rho = rho(k, j)?;
    let r = rho.to_f64();
    let nf = n as f64;
    let l1 = 2.0 * nf.powf(r - epsilon / 2.0);
    let l = nf.powf(r - epsilon / 3.0);
    let l_ratio = l / (nf.powf(epsilon / 7.0) * l1);
    let (sa, sab) = sieve_exponents(k, j, rho);
    let q_lo = q_lo(l1, n, k);
    Ok(ParamSchedule {
        n,
        k,
        monomial,
        j,
        rho,
        epsilon,
        eta,
        l1,
        l,
        delta: 1.0 / l1,
        q_lo,
        q_hi: 2.0 * q_lo,
        l_ratio,
        l_exceeds_bound: l_ratio > 1.0,
        sieve_alpha: *sa.numer() as f64 / *sa.denom() as f64,
        sieve_alpha_beta: *sab.numer() as f64 / *sab.denom() as f64,
    })
}

/// Like [`schedule`] but errors when `L <= N^(ε/7) L1`.
pub fn schedule_strict(n: u64, k: u32, monomial: bool, epsilon: f64, eta: f64) -> Result<ParamSchedule> {
    let s = schedule(n, k, monomial, epsilon, eta)?;
    if !s.l_exceeds_bound {
        return Err(Error::ScheduleInconsistent(format!(
            "L / (N^(eps/7) L1) = {} <= 1 at N = {n}",
            s.l_ratio
        )));
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectOptions {
    /// Smallest acceptable convergent denominator.
    pub q_min: u128,
    /// Largest denominator examined.
    pub q_cap: u128,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            q_min: 1_000,
            q_cap: 100_000_000,
        }
    }
}

/// Choose a convergent `a/q` and the largest `N` with
/// `(L1(N) N^k)^(1/2) <= q`, so that `q` lies in `[q_lo, 2 q_lo]`.
pub fn select_modulus(
    alpha: &AlphaSpec,
    k: u32,
    monomial: bool,
    epsilon: f64,
    eta: f64,
    opts: SelectOptions,
) -> Result<(Convergent, ParamSchedule)> {
    if !alpha.is_irrational() {
        return Err(Error::domain("select_modulus needs an irrational leading coefficient"));
    }
    let convergents = cf_convergents(alpha, opts.q_cap)?;
    for c in convergents.into_iter().filter(|c| c.q >= opts.q_min) {
        let q = c.q as f64;
        let at = |n: u64| schedule(n, k, monomial, epsilon, eta);
        if at(10)?.q_lo > q {
            continue;
        }
        let mut lo = 10u64;
        let mut hi = 20u64;
        while at(hi)?.q_lo <= q {
            lo = hi;
            hi = hi.checked_mul(2).ok_or_else(|| Error::domain("N overflow"))?;
        }
        // invariant: q_lo(lo) <= q < q_lo(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if at(mid)?.q_lo <= q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = at(lo)?;
        if q <= s.q_hi {
            return Ok((c, s));
        }
    }
    Err(Error::CapExceeded { cap: opts.q_cap })
}

/// Convergent chosen for a fixed `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusChoice {
    pub convergent: Convergent,
    /// Whether `q_lo <= q <= q_hi`.
    pub in_window: bool,
}

/// For a schedule with `N` fixed in advance: the smallest convergent in
/// the window, or the one closest to `q_lo` (in ratio) when the window
/// holds none.
pub fn select_modulus_for_n(alpha: &AlphaSpec, sched: &ParamSchedule) -> Result<ModulusChoice> {
    if !alpha.is_irrational() {
        return Err(Error::domain("select_modulus_for_n needs an irrational leading coefficient"));
    }
    let cap = (sched.q_hi.ceil() as u128).saturating_mul(4).max(2);
    let convergents = cf_convergents(alpha, cap)?;
    if let Some(c) = convergents
        .iter()
        .find(|c| (c.q as f64) >= sched.q_lo && (c.q as f64) <= sched.q_hi)
    {
        return Ok(ModulusChoice {
            convergent: *c,
            in_window: true,
        });
    }
    let best = convergents
        .iter()
        .min_by(|x, y| {
            let dx = ((x.q as f64) / sched.q_lo).ln().abs();
            let dy = ((y.q as f64) / sched.q_lo).ln().abs();
            dx.partial_cmp(&dy).unwrap()
        })
        .ok_or(Error::CapExceeded { cap })?;
    Ok(ModulusChoice {
        convergent: *best,
        in_window: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_for_million_k2() {
        let s = schedule(1_000_000, 2, true, 0.01, 1e-5).unwrap();
        assert_eq!(s.rho.to_string(), "2/13");
        let l1 = 2.0 * 10f64.powf(6.0 * (2.0 / 13.0 - 0.005));
        assert!((s.l1 - l1).abs() < 1e-12);
        assert!((s.l1 - 15.63).abs() < 0.01);
        assert!((s.q_lo - 3.954e6).abs() < 1e3);
        assert_eq!(s.delta, 1.0 / s.l1);
        assert_eq!(s.q_hi, 2.0 * s.q_lo);
    }

    #[test]
    fn schedule_for_ten_thousand_k3() {
        let s = schedule(10_000, 3, true, 0.01, 1e-5).unwrap();
        assert_eq!(s.rho.to_string(), "1/10");
        assert!((s.l1 - 2.0 * 10f64.powf(0.38)).abs() < 1e-12);
        assert!((s.l1 - 4.798).abs() < 0.001);
        assert_eq!(s.delta, 1.0 / s.l1);
    }

    #[test]
    fn l_ratio_is_n_to_eps_over_42_halved() {
        for &n in &[10u64, 1000, 1_000_000, 1 << 40] {
            for &eps in &[0.001, 0.01, 0.09] {
                let s = schedule(n, 2, true, eps, eps / 1000.0).unwrap();
                let expect = (n as f64).powf(eps / 42.0) / 2.0;
                assert!((s.l_ratio / expect - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn strict_schedule_rejects_desk_sizes() {
        assert!(matches!(
            schedule_strict(1_000_000, 2, true, 0.01, 1e-5),
            Err(Error::ScheduleInconsistent(_))
        ));
        // needs N > 2^(42/eps), beyond u64 for every admissible eps
        assert!(schedule_strict(u64::MAX, 2, true, 0.099, 1e-5).is_err());
    }

    #[test]
    fn schedule_is_deterministic() {
        let a = schedule(123_456, 4, false, 0.02, 2e-5).unwrap();
        let b = schedule(123_456, 4, false, 0.02, 2e-5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.l1.to_bits(), b.l1.to_bits());
    }

    #[test]
    fn schedule_preconditions() {
        assert!(schedule(9, 2, true, 0.01, 1e-5).is_err());
        assert!(schedule(100, 2, true, 0.2, 1e-5).is_err());
        assert!(schedule(100, 2, true, 0.01, 0.02).is_err());
        assert!(schedule(100, 1, true, 0.01, 1e-5).is_err());
    }

    #[test]
    fn select_sqrt2_k2() {
        let a = AlphaSpec::sqrt(2).unwrap();
        let (c, s) = select_modulus(&a, 2, true, 0.01, 1e-5, SelectOptions::default()).unwrap();
        assert!(c.q >= 1000);
        let q = c.q as f64;
        assert!(s.q_lo <= q && q <= s.q_hi);
        let next = schedule(s.n + 1, 2, true, 0.01, 1e-5).unwrap();
        assert!(next.q_lo > q);
    }

    #[test]
    fn select_sqrt3_k3() {
        let a = AlphaSpec::sqrt(3).unwrap();
        let (c, s) = select_modulus(&a, 3, true, 0.01, 1e-5, SelectOptions::default()).unwrap();
        let q = c.q as f64;
        assert!(s.q_lo <= q && q <= 2.0 * s.q_lo);
    }

    #[test]
    fn select_rejects_rational() {
        let a = AlphaSpec::rational(355, 113).unwrap();
        assert!(select_modulus(&a, 2, true, 0.01, 1e-5, SelectOptions::default()).is_err());
    }

    #[test]
    fn select_cap_exceeded() {
        let a = AlphaSpec::sqrt(2).unwrap();
        let opts = SelectOptions { q_min: 1000, q_cap: 999 };
        assert!(matches!(
            select_modulus(&a, 2, true, 0.01, 1e-5, opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn fixed_n_window() {
        let a = AlphaSpec::sqrt(2).unwrap();
        let s = schedule(1_000_000, 2, true, 0.01, 1e-5).unwrap();
        let m = select_modulus_for_n(&a, &s).unwrap();
        assert!(m.in_window);
        assert_eq!(m.convergent.q, 6_625_109);
    }
}
