//! Record scan of `‖f(p)‖ p^ν` over primes.

use rayon::prelude::*;
use serde::Serialize;

use super::poly::FracPolynomial;
use crate::error::{Error, Result};
use crate::primes::{integer_sqrt, primes_in_segment, primes_up_to, segments};

/// Prime segments are this wide.
pub const SEGMENT_WIDTH: u64 = 1 << 22;
pub const MAX_PMAX: u64 = 1_000_000_000;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PrimeRecord {
    pub p: u64,
    pub fracpart: f64,
    pub error: f64,
    /// `p^(-ν)`
    pub threshold: f64,
    /// `‖f(p)‖ p^ν`
    pub normalized: f64,
    /// New running minimum of `normalized`.
    pub is_record: bool,
    /// `‖f(p)‖ < p^(-ν)`, certified.
    pub solves: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub nu: f64,
    pub p_max: u64,
    pub primes_scanned: u64,
    /// Primes with `‖f(p)‖ < p^(-ν)`.
    pub solutions: u64,
    pub records: Vec<PrimeRecord>,
}

struct SegmentResult {
    candidates: Vec<PrimeRecord>,
    scanned: u64,
    solutions: u64,
}

fn evaluate(f: &FracPolynomial, p: u64, nu: f64) -> Result<PrimeRecord> {
    let c = f.fracpart(p)?;
    let threshold = (p as f64).powf(-nu);
    let solves = match c.certainly_below(threshold) {
        Some(b) => b,
        None => f.fracpart_at(p, 2 * f.bits)?.certainly_below(threshold).unwrap_or(false),
    };
    Ok(PrimeRecord {
        p,
        fracpart: c.value,
        error: c.err,
        threshold,
        normalized: c.value / threshold,
        is_record: false,
        solves,
    })
}

/// Scan primes `p <= p_max`. Each segment keeps its local running minima;
/// a sequential pass over segments in order keeps the global ones. Ties
/// keep the earlier prime.
pub fn prime_scan(f: &FracPolynomial, nu: f64, p_max: u64) -> Result<ScanReport> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::domain("need 0 < nu < 1"));
    }
    if p_max > MAX_PMAX {
        return Err(Error::domain(format!("p_max must be <= {MAX_PMAX}")));
    }
    if p_max > f.n_max {
        return Err(Error::domain(format!(
            "p_max = {p_max} exceeds the polynomial's n_max = {}",
            f.n_max
        )));
    }
    let base = primes_up_to(integer_sqrt(p_max) + 1);
    let segs = segments(p_max, SEGMENT_WIDTH);
    let parts: Vec<Result<SegmentResult>> = segs
        .par_iter()
        .map(|&(lo, hi)| {
            let mut best = f64::INFINITY;
            let mut out = SegmentResult {
                candidates: Vec::new(),
                scanned: 0,
                solutions: 0,
            };
            for p in primes_in_segment(lo, hi, &base) {
                let r = evaluate(f, p, nu)?;
                out.scanned += 1;
                out.solutions += r.solves as u64;
                if r.normalized < best {
                    best = r.normalized;
                    out.candidates.push(r);
                }
            }
            Ok(out)
        })
        .collect();
    let mut best = f64::INFINITY;
    let mut records = Vec::new();
    let (mut scanned, mut solutions) = (0, 0);
    for part in parts {
        let part = part?;
        scanned += part.scanned;
        solutions += part.solutions;
        for mut r in part.candidates {
            if r.normalized < best {
                best = r.normalized;
                r.is_record = true;
                records.push(r);
            }
        }
    }
    Ok(ScanReport {
        nu,
        p_max,
        primes_scanned: scanned,
        solutions,
        records,
    })
}

/// The record list of [`prime_scan`].
pub fn prime_records(f: &FracPolynomial, nu: f64, p_max: u64) -> Result<Vec<PrimeRecord>> {
    prime_scan(f, nu, p_max).map(|r| r.records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::Coef;
    use crate::rational::AlphaSpec;

    fn sqrt2(n_max: u64) -> FracPolynomial {
        FracPolynomial::with_alpha(AlphaSpec::sqrt(2).unwrap(), 2, Coef::zero(), n_max).unwrap()
    }

    #[test]
    fn records_to_100() {
        let r = prime_records(&sqrt2(100), 2.0 / 13.0, 100).unwrap();
        assert_eq!(r[0].p, 2);
        let thirteen = r.iter().find(|x| x.p == 13).expect("13 is a record");
        assert!(thirteen.solves);
        assert!((thirteen.threshold - 13f64.powf(-2.0 / 13.0)).abs() < 1e-15);
        assert!(r.windows(2).all(|w| w[1].normalized < w[0].normalized && w[0].p < w[1].p));
    }

    #[test]
    fn segmented_matches_single_pass() {
        let f = sqrt2(3 * SEGMENT_WIDTH);
        let p_max = SEGMENT_WIDTH + 200_000;
        let scan = prime_scan(&f, 0.1, p_max).unwrap();
        let base = primes_up_to(p_max);
        let mut best = f64::INFINITY;
        let mut expect = Vec::new();
        for &p in &base {
            let v = f.fracpart(p).unwrap().value * (p as f64).powf(0.1);
            if v < best {
                best = v;
                expect.push(p);
            }
        }
        let got: Vec<u64> = scan.records.iter().map(|r| r.p).collect();
        assert_eq!(got, expect);
        assert_eq!(scan.primes_scanned, base.len() as u64);
    }

    #[test]
    fn solutions_grow() {
        let f = sqrt2(1_000_000);
        let a = prime_scan(&f, 2.0 / 13.0, 10_000).unwrap().solutions;
        let b = prime_scan(&f, 2.0 / 13.0, 1_000_000).unwrap().solutions;
        assert!(a > 0 && b > a);
    }

    #[test]
    fn validates() {
        let f = sqrt2(100);
        assert!(prime_scan(&f, 1.5, 100).is_err());
        assert!(prime_scan(&f, 0.1, 1000).is_err());
    }
}
