use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AlphaSpec;
use crate::error::{Error, Result};

/// A continued-fraction convergent `a / q` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convergent {
    pub a: i128,
    pub q: u128,
}

impl Convergent {
    pub fn new(a: i128, q: u128) -> Self {
        Self { a, q }
    }
}

/// Convergent recurrence `h_n = c_n h_{n-1} + h_{n-2}`.
#[derive(Debug, Clone)]
struct Recurrence {
    h: (i128, i128),
    k: (i128, i128),
}

impl Recurrence {
    fn new() -> Self {
        // (h_{-1}, h_{-2}) = (1, 0); (k_{-1}, k_{-2}) = (0, 1)
        Self { h: (1, 0), k: (0, 1) }
    }

    fn push(&mut self, c: i128) -> Option<Convergent> {
        let h = c.checked_mul(self.h.0)?.checked_add(self.h.1)?;
        let k = c.checked_mul(self.k.0)?.checked_add(self.k.1)?;
        self.h = (h, self.h.0);
        self.k = (k, self.k.0);
        Some(Convergent::new(h, k as u128))
    }

    /// Smallest possible next denominator (next partial quotient >= 1).
    fn next_q_lower_bound(&self) -> i128 {
        self.k.0.saturating_add(self.k.1)
    }
}

/// Quadratic irrational `(P + sqrt(D)) / Q` with `Q | D - P^2`.
#[derive(Debug, Clone)]
struct QuadraticState {
    p: i128,
    q: i128,
    d: i128,
    root: i128,
}

impl QuadraticState {
    fn from_surd(p: i64, r: i64, d: i64, s: i64) -> Result<Self> {
        let (p, r, s) = if r < 0 {
            (-(p as i128), -(r as i128), -(s as i128))
        } else {
            (p as i128, r as i128, s as i128)
        };
        let overflow = || Error::domain("surd too large for exact continued fraction");
        let abs_s = s.abs();
        let big_p = p.checked_mul(abs_s).ok_or_else(overflow)?;
        let big_d = r
            .checked_mul(r)
            .and_then(|x| x.checked_mul(d as i128))
            .and_then(|x| x.checked_mul(s))
            .and_then(|x| x.checked_mul(s))
            .ok_or_else(overflow)?;
        let big_q = s.checked_mul(abs_s).ok_or_else(overflow)?;
        let root = crate::primes::integer_sqrt(u64::try_from(big_d).map_err(|_| overflow())?) as i128;
        Ok(Self {
            p: big_p,
            q: big_q,
            d: big_d,
            root,
        })
    }

    fn next_quotient(&mut self) -> i128 {
        let a = if self.q > 0 {
            Integer::div_floor(&(self.p + self.root), &self.q)
        } else {
            Integer::div_floor(&(-self.p - self.root - 1), &(-self.q))
        };
        let p_next = a * self.q - self.p;
        let q_next = (self.d - p_next * p_next) / self.q;
        self.p = p_next;
        self.q = q_next;
        a
    }
}

/// All convergents of `alpha` with denominator `<= q_max`, in increasing
/// order of denominator.
pub fn cf_convergents(alpha: &AlphaSpec, q_max: u128) -> Result<Vec<Convergent>> {
    alpha.validate()?;
    if q_max < 1 {
        return Err(Error::domain("q_max must be at least 1"));
    }
    let mut out = Vec::new();
    let mut rec = Recurrence::new();
    let emit = |c: i128, rec: &mut Recurrence, out: &mut Vec<Convergent>| -> Result<bool> {
        match rec.push(c) {
            Some(conv) if conv.q <= q_max => {
                out.push(conv);
                Ok(true)
            }
            Some(_) => Ok(false),
            None => Err(Error::domain("convergent overflowed 128-bit integers")),
        }
    };
    match alpha {
        AlphaSpec::Surd { p, r, d, s } => {
            let mut state = QuadraticState::from_surd(*p, *r, *d, *s)?;
            loop {
                let c = state.next_quotient();
                if !emit(c, &mut rec, &mut out)? {
                    break;
                }
            }
        }
        AlphaSpec::Rational { num, den } => {
            let (mut n, mut m) = if *den < 0 {
                (-(*num as i128), -(*den as i128))
            } else {
                (*num as i128, *den as i128)
            };
            while m != 0 {
                let (c, rem) = n.div_mod_floor(&m);
                if !emit(c, &mut rec, &mut out)? {
                    break;
                }
                (n, m) = (m, rem);
            }
        }
        AlphaSpec::Decimal { value, .. } => {
            let radius = alpha.decimal_radius().expect("decimal");
            let mut lo = value - &radius;
            let mut hi = value + &radius;
            loop {
                let c = match certified_floor(&lo, &hi) {
                    Some(c) => c,
                    None => {
                        if (rec.next_q_lower_bound() as u128) > q_max {
                            break;
                        }
                        return Err(Error::PrecisionExhausted {
                            last: out.last().copied(),
                        });
                    }
                };
                if !emit(c, &mut rec, &mut out)? {
                    break;
                }
                let c_big = BigRational::from_integer(BigInt::from(c));
                let lo_frac = &lo - &c_big;
                let hi_frac = &hi - &c_big;
                if lo_frac.is_zero() {
                    // the interval reaches the rational c itself
                    if (rec.next_q_lower_bound() as u128) > q_max {
                        break;
                    }
                    return Err(Error::PrecisionExhausted {
                        last: out.last().copied(),
                    });
                }
                (lo, hi) = (hi_frac.recip(), lo_frac.recip());
            }
        }
    }
    Ok(out)
}

/// Floor shared by every point of `[lo, hi]`, if there is one.
fn certified_floor(lo: &BigRational, hi: &BigRational) -> Option<i128> {
    let f_lo = lo.floor();
    let f_hi = hi.floor();
    if f_lo != f_hi {
        return None;
    }
    if hi.is_integer() && lo != hi {
        return None;
    }
    f_lo.to_integer().to_i128()
}

/// `|alpha - a/q|` evaluated at 256-bit precision.
pub fn approximation_error(alpha: &AlphaSpec, c: &Convergent) -> f64 {
    let x = alpha.to_fixed(256).expect("validated");
    let r = crate::fixed::FixedReal::from_ratio(&BigInt::from(c.a), &BigInt::from(c.q), 256).expect("q > 0");
    x.sub(&r).to_f64().abs()
}

/// Exact sign of `alpha - a/q` for surd and rational kinds.
pub fn exact_sign(alpha: &AlphaSpec, c: &Convergent) -> Option<std::cmp::Ordering> {
    match alpha {
        AlphaSpec::Rational { num, den } => {
            let lhs = BigInt::from(*num) * BigInt::from(c.q);
            let rhs = BigInt::from(c.a) * BigInt::from(*den);
            let ord = lhs.cmp(&rhs);
            Some(if *den < 0 { ord.reverse() } else { ord })
        }
        AlphaSpec::Surd { p, r, d, s } => {
            // sign of (p + r sqrt d)/s - a/q  =  sign(s) * sign(q(p + r sqrt d) - a s)
            let lin = BigInt::from(*p) * BigInt::from(c.q) - BigInt::from(c.a) * BigInt::from(*s);
            let rad = BigInt::from(*r) * BigInt::from(c.q);
            // sign of lin + rad*sqrt(d)
            let sign = signed_sqrt_sum(&lin, &rad, &BigInt::from(*d));
            Some(if *s < 0 { sign.reverse() } else { sign })
        }
        AlphaSpec::Decimal { .. } => None,
    }
}

/// Sign of `x + y*sqrt(d)` for integers with `d > 0` non-square.
pub(crate) fn signed_sqrt_sum(x: &BigInt, y: &BigInt, d: &BigInt) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let sx = x.sign();
    let sy = y.sign();
    use num_bigint::Sign::*;
    match (sx, sy) {
        (NoSign, NoSign) => Equal,
        (NoSign, Plus) | (Plus, NoSign) | (Plus, Plus) => Greater,
        (NoSign, Minus) | (Minus, NoSign) | (Minus, Minus) => Less,
        (Plus, Minus) => (x * x).cmp(&(y * y * d)),
        (Minus, Plus) => (y * y * d).cmp(&(x * x)),
    }
}

/// Exact test of `|alpha - a/q| < 1/(q * q_next)` for surd and rational
/// kinds; `None` for decimals.
pub fn within_reciprocal_bound(alpha: &AlphaSpec, c: &Convergent, q_next: u128) -> Option<bool> {
    use std::cmp::Ordering;
    let qq = BigInt::from(c.q) * BigInt::from(q_next);
    match alpha {
        AlphaSpec::Rational { num, den } => {
            // |num/den - a/q| < 1/(q q') <=> |num q - a den| * q' < |den|
            let diff = (BigInt::from(*num) * BigInt::from(c.q) - BigInt::from(c.a) * BigInt::from(*den)).abs();
            Some(diff * BigInt::from(q_next) < BigInt::from(*den).abs())
        }
        AlphaSpec::Surd { p, r, d, s } => {
            // t = (p + r sqrt d)/s - a/q ; |t| < 1/qq
            // s*q*qq*t = qq*(q p - a s) + qq*q r sqrt d ; compare |.| with |s| q
            let lin = &qq * (BigInt::from(*p) * BigInt::from(c.q) - BigInt::from(c.a) * BigInt::from(*s));
            let rad = &qq * BigInt::from(*r) * BigInt::from(c.q);
            let bound = BigInt::from(*s).abs() * BigInt::from(c.q);
            let d = BigInt::from(*d);
            // lin + rad sqrt d < bound  and  lin + rad sqrt d > -bound
            let upper = signed_sqrt_sum(&(&lin - &bound), &rad, &d) == Ordering::Less;
            let lower = signed_sqrt_sum(&(&lin + &bound), &rad, &d) == Ordering::Greater;
            Some(upper && lower)
        }
        AlphaSpec::Decimal { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[Convergent]) -> Vec<(i128, u128)> {
        v.iter().map(|c| (c.a, c.q)).collect()
    }

    #[test]
    fn sqrt2_convergents() {
        let c = cf_convergents(&AlphaSpec::sqrt(2).unwrap(), 30).unwrap();
        assert_eq!(pairs(&c), vec![(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]);
    }

    #[test]
    fn half_terminates() {
        let c = cf_convergents(&AlphaSpec::rational(1, 2).unwrap(), 10).unwrap();
        assert_eq!(pairs(&c), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn golden_ratio_gives_fibonacci() {
        let phi: AlphaSpec = "surd:(1+1*sqrt5)/2".parse().unwrap();
        let c = cf_convergents(&phi, 6).unwrap();
        assert_eq!(pairs(&c), vec![(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]);
    }

    #[test]
    fn negative_surd() {
        // (1 - sqrt5)/2 = [-1; 2, 1, 1, 1, ...]
        let x: AlphaSpec = "surd:(1-1*sqrt5)/2".parse().unwrap();
        let c = cf_convergents(&x, 20).unwrap();
        assert_eq!(pairs(&c), vec![(-1, 1), (-1, 2), (-2, 3), (-3, 5), (-5, 8), (-8, 13)]);
    }

    #[test]
    fn pi_rational_approximation() {
        let c = cf_convergents(&AlphaSpec::rational(355, 113).unwrap(), 1000).unwrap();
        assert_eq!(pairs(&c), vec![(3, 1), (22, 7), (355, 113)]);
    }

    #[test]
    fn decimal_runs_out_of_precision() {
        let dec: AlphaSpec = "dec:1.4142135623<bits=128>".parse().unwrap();
        let ok = cf_convergents(&dec, 10_000).unwrap();
        let exact = cf_convergents(&AlphaSpec::sqrt(2).unwrap(), 10_000).unwrap();
        assert_eq!(ok, exact);
        match cf_convergents(&dec, 10u128.pow(12)) {
            Err(Error::PrecisionExhausted { last: Some(last) }) => {
                assert!(exact.len() < 20);
                let full = cf_convergents(&AlphaSpec::sqrt(2).unwrap(), 10u128.pow(12)).unwrap();
                assert!(full.contains(&last));
                assert!(last.q >= 10_000);
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn reciprocal_bound_holds_exactly() {
        for spec in ["sqrt:2", "sqrt:3", "surd:(1+1*sqrt5)/2", "surd:(-7+3*sqrt11)/4"] {
            let a: AlphaSpec = spec.parse().unwrap();
            let c = cf_convergents(&a, 1_000_000_000).unwrap();
            for w in c.windows(2) {
                assert_eq!(within_reciprocal_bound(&a, &w[0], w[1].q), Some(true), "{spec} {w:?}");
                let det = w[1].a * w[0].q as i128 - w[0].a * w[1].q as i128;
                assert_eq!(det.abs(), 1);
            }
        }
    }

    #[test]
    fn exact_sign_alternates() {
        let a = AlphaSpec::sqrt(2).unwrap();
        let c = cf_convergents(&a, 10_000).unwrap();
        for (i, conv) in c.iter().enumerate() {
            let expect = if i % 2 == 0 {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            };
            assert_eq!(exact_sign(&a, conv), Some(expect));
        }
    }
}
