//! Fractional parts of polynomials at integers and primes: the set `A`,
//! prime record scans and density reports.

mod poly;
mod records;

pub use poly::{default_bits, FracPolynomial, Leading, PolyInfo, FRACPART_TOL, MAX_BITS};
pub use records::{prime_records, prime_scan, PrimeRecord, ScanReport, MAX_PMAX, SEGMENT_WIDTH};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::Coef;
use crate::rational::{Convergent, ParamSchedule};
use crate::sieve::{compare_ab, ComparisonReport, SiftSet};

/// `A = {N/2 < n <= N : ‖g(n)‖ < 1/L1}`, decided in exact arithmetic.
pub fn construct_a(n: u64, sched: &ParamSchedule, g: &FracPolynomial) -> Result<SiftSet> {
    if sched.n != n {
        return Err(Error::domain(format!("schedule is for N = {}, not {n}", sched.n)));
    }
    if n > g.n_max {
        return Err(Error::domain("N exceeds the polynomial's n_max"));
    }
    let (den, nums) = g
        .rational_form()
        .ok_or_else(|| Error::domain("construct_A needs rational coefficients"))?;
    let l1 = BigRational::from_float(sched.l1)
        .filter(|x| *x > BigRational::from_integer(0.into()))
        .ok_or_else(|| Error::domain("L1 must be positive and finite"))?;
    let form = poly::ResidueForm::new(den, nums);
    let den_q = BigRational::from_integer(form.den().clone());
    let elements: Vec<u64> = (n / 2 + 1..=n)
        .into_par_iter()
        .filter(|&m| {
            let r = form.residue(m);
            let d = std::cmp::min(r.clone(), form.den() - &r);
            // ‖g(m)‖ < 1/L1  <=>  d L1 < den
            BigRational::from_integer(d) * &l1 < den_q
        })
        .collect();
    SiftSet::new(elements)
}

/// `g(x) = (a/q) x^k + β`, the rational counterpart of `α x^k + β`.
pub fn convergent_poly(c: Convergent, k: u32, beta: Coef, n_max: u64) -> Result<FracPolynomial> {
    FracPolynomial::new(k, Leading::Convergent(c), vec![beta], n_max)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub n: u64,
    pub delta: f64,
    pub a_size: usize,
    pub b_size: usize,
    pub primes_in_a: u64,
    pub primes_in_b: u64,
    /// `2δ #{p ∈ B}`
    pub expected: f64,
    /// `#{p ∈ A} / (2δ #{p ∈ B})`
    pub ratio: f64,
    /// `|A| / (2δ |B|)`
    pub size_ratio: f64,
}

pub fn density_report(n: u64, sched: &ParamSchedule, g: &FracPolynomial) -> Result<DensityReport> {
    let a = construct_a(n, sched, g)?;
    let b = SiftSet::b_set(n)?;
    let pa = a.count_primes();
    let pb = b.count_primes();
    let two_delta = 2.0 * sched.delta;
    Ok(DensityReport {
        n,
        delta: sched.delta,
        a_size: a.len(),
        b_size: b.len(),
        primes_in_a: pa,
        primes_in_b: pb,
        expected: two_delta * pb as f64,
        ratio: pa as f64 / (two_delta * pb as f64),
        size_ratio: a.len() as f64 / (two_delta * b.len() as f64),
    })
}

/// Build `A` for `g` and compare its sieve sums with those of `B`.
pub fn compare_for(n: u64, sched: &ParamSchedule, g: &FracPolynomial) -> Result<ComparisonReport> {
    let a = construct_a(n, sched, g)?;
    compare_ab(&a, sched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{schedule, select_modulus_for_n, AlphaSpec};

    fn sched(n: u64, k: u32) -> ParamSchedule {
        schedule(n, k, true, 0.01, 0.00001).unwrap()
    }

    #[test]
    fn l1_one_gives_everything() {
        let s = sched(1000, 2).with_l1(1.0);
        let g = convergent_poly(Convergent::new(99, 70), 2, Coef::zero(), 1000).unwrap();
        let a = construct_a(1000, &s, &g).unwrap();
        assert_eq!(a, SiftSet::b_set(1000).unwrap());
        let d = density_report(1000, &s, &g).unwrap();
        assert_eq!(d.ratio, 0.5);
    }

    #[test]
    fn small_example() {
        let s = sched(20, 2).with_l1(6.0);
        let g = convergent_poly(Convergent::new(17, 12), 2, Coef::zero(), 20).unwrap();
        let a = construct_a(20, &s, &g).unwrap();
        assert_eq!(a.elements(), &[12, 18]);
    }

    #[test]
    fn boundary_excluded() {
        // ‖n/4‖ = 1/4 exactly at odd n; L1 = 4 excludes them
        let s = sched(20, 2).with_l1(4.0);
        let g = convergent_poly(Convergent::new(1, 4), 1, Coef::zero(), 20).unwrap();
        let a = construct_a(20, &s, &g).unwrap();
        assert_eq!(a.elements(), &[12, 16, 20]);
    }

    #[test]
    fn mismatched_schedule() {
        let g = convergent_poly(Convergent::new(1, 4), 1, Coef::zero(), 100).unwrap();
        assert!(construct_a(50, &sched(20, 2), &g).is_err());
        let f = FracPolynomial::with_alpha(AlphaSpec::sqrt(2).unwrap(), 2, Coef::zero(), 100).unwrap();
        assert!(construct_a(20, &sched(20, 2), &f).is_err());
    }

    #[test]
    fn sqrt2_density_at_1e5() {
        let s = sched(100_000, 2);
        let alpha = AlphaSpec::sqrt(2).unwrap();
        let m = select_modulus_for_n(&alpha, &s).unwrap();
        let g = convergent_poly(m.convergent, 2, Coef::zero(), 100_000).unwrap();
        let d = density_report(100_000, &s, &g).unwrap();
        assert!(d.primes_in_a > 0);
        assert!(d.ratio.is_finite());
        let c = compare_for(100_000, &s, &g).unwrap();
        assert!(c.a.identity_holds && c.b.identity_holds);
    }
}
