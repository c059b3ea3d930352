//! Integer and real polynomials without (or with) constant term, and exact
//! or certified evaluation of their phases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::FixedReal;
use crate::rational::AlphaSpec;

/// `G(x) = u_1 x + ... + u_k x^k`; `coeffs[j - 1] = u_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly {
    pub coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("integer polynomial needs degree >= 1"));
        }
        Ok(Self { coeffs })
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k];
        coeffs[k - 1] = 1;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Leading coefficient vanishes.
    pub fn is_degenerate(&self) -> bool {
        *self.coeffs.last().expect("non-empty") == 0
    }

    /// `G(v) mod s` in exact arithmetic.
    pub fn eval_mod(&self, v: u64, s: u64) -> u64 {
        let s128 = s as i128;
        let v = (v % s) as i128;
        let mut acc = 0i128;
        for &u in self.coeffs.iter().rev() {
            acc = ((acc + (u as i128).rem_euclid(s128)) * v).rem_euclid(s128);
        }
        acc as u64
    }
}

/// A real coefficient: an exact rational or an algebraic/decimal spec.
#[derive(Debug, Clone, PartialEq)]
pub enum Coef {
    Exact(BigRational),
    Alpha(AlphaSpec),
}

impl Coef {
    pub fn zero() -> Self {
        Coef::Exact(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        Coef::Exact(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Coef::Exact(BigRational::new(num.into(), den.into()))
    }

    /// The exact binary value of a float.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Coef::Exact)
            .ok_or_else(|| Error::domain(format!("non-finite coefficient {x}")))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Coef::Exact(r) => Some(r.clone()),
            Coef::Alpha(AlphaSpec::Rational { num, den }) => {
                Some(BigRational::new((*num).into(), (*den).into()))
            }
            Coef::Alpha(_) => None,
        }
    }

    pub fn to_fixed(&self, bits: u32) -> Result<FixedReal> {
        match self {
            Coef::Exact(r) => FixedReal::from_rational(r, bits),
            Coef::Alpha(a) => a.to_fixed(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coef::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coef::Alpha(a) => a.to_f64(),
        }
    }

    fn neg(&self) -> Self {
        match self.as_rational() {
            Some(r) => Coef::Exact(-r),
            None => match self {
                Coef::Alpha(AlphaSpec::Surd { p, r, d, s }) => Coef::Alpha(AlphaSpec::Surd {
                    p: -p,
                    r: -r,
                    d: *d,
                    s: *s,
                }),
                Coef::Alpha(AlphaSpec::Decimal { value, digits, bits }) => {
                    Coef::Alpha(AlphaSpec::Decimal {
                        value: -value.clone(),
                        digits: *digits,
                        bits: *bits,
                    })
                }
                _ => unreachable!("rational handled above"),
            },
        }
    }
}

impl std::fmt::Display for Coef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coef::Exact(r) => write!(f, "{r}"),
            Coef::Alpha(a) => write!(f, "{a}"),
        }
    }
}

/// `3`, `-7/12`, `0.25`, `1e-3` (exact rationals) or any alpha form such
/// as `sqrt:2`.
impl std::str::FromStr for Coef {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.contains(':') {
            return Ok(Coef::Alpha(t.parse()?));
        }
        if let Some((n, d)) = t.split_once('/') {
            let bad = || Error::Parse {
                what: "coefficient",
                detail: format!("{t:?}"),
            };
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::domain("zero denominator"));
            }
            return Ok(Coef::Exact(BigRational::new(n, d)));
        }
        Ok(Coef::Exact(crate::fixed::parse_decimal(t)?.0))
    }
}

impl Serialize for Coef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `f(x) = sum_j c_j x^j` for `j = 0..=k`; `coeffs[j] = c_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealPoly {
    pub coeffs: Vec<Coef>,
    /// Working precision for irrational coefficients.
    pub bits: u32,
}

impl RealPoly {
    pub fn new(coeffs: Vec<Coef>, bits: u32) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain("real polynomial needs degree >= 1"));
        }
        if bits < 64 {
            return Err(Error::domain("precision must be at least 64 bits"));
        }
        Ok(Self { coeffs, bits })
    }

    /// Coefficients given without constant term: `c_1, ..., c_k`.
    pub fn without_constant(coeffs: Vec<Coef>, bits: u32) -> Result<Self> {
        let mut all = vec![Coef::zero()];
        all.extend(coeffs);
        Self::new(all, bits)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(Coef::neg).collect(),
            bits: self.bits,
        }
    }

    /// `f - G/s` where `G` has no constant term.
    pub fn minus_int_over(&self, g: &IntPoly, s: u64) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() <= g.degree() {
            coeffs.push(Coef::zero());
        }
        for (j, &u) in g.coeffs.iter().enumerate() {
            let shift = BigRational::new(u.into(), s.into());
            coeffs[j + 1] = match coeffs[j + 1].as_rational() {
                Some(r) => Coef::Exact(r - shift),
                None => {
                    return Err(Error::domain(
                        "subtracting u/s from an irrational coefficient is not supported",
                    ))
                }
            };
        }
        Self::new(coeffs, self.bits)
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs.iter().map(Coef::to_f64).collect()
    }

    /// Phase evaluator, exact when every coefficient is rational.
    pub fn phases(&self, max_abs_x: u64) -> Result<Phases> {
        let rationals: Option<Vec<BigRational>> = self.coeffs.iter().map(Coef::as_rational).collect();
        if let Some(rs) = rationals {
            let den = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let nums: Vec<BigInt> = rs.iter().map(|r| r.numer() * (&den / r.denom())).collect();
            return Ok(Phases::Exact { den, nums });
        }
        // enough bits that |x|^k times the coefficient keeps `bits` of fraction
        let growth = (max_abs_x.max(2) as f64).log2().ceil() as u32 * self.degree() as u32;
        let bits = self.bits + growth;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_fixed(bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(Phases::Fixed { coeffs })
    }
}

/// Evaluates `m f(x) mod 1`.
#[derive(Debug, Clone)]
pub enum Phases {
    /// `f = (sum nums_j x^j) / den`.
    Exact { den: BigInt, nums: Vec<BigInt> },
    Fixed { coeffs: Vec<FixedReal> },
}

/// One evaluated phase.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    /// `r / q` exactly.
    Rational { r: BigInt, q: BigInt },
    /// Representative in `[-1/2, 1/2)` with an absolute error bound.
    Approx { value: f64, err: f64 },
}

impl Phases {
    pub fn eval(&self, m: i64, x: i64) -> Phase {
        let xb = BigInt::from(x);
        match self {
            Phases::Exact { den, nums } => {
                let mut acc = BigInt::zero();
                for c in nums.iter().rev() {
                    acc = acc * &xb + c;
                }
                let r = (acc * m).mod_floor(den);
                Phase::Rational { r, q: den.clone() }
            }
            Phases::Fixed { coeffs } => {
                let mut acc = FixedReal::zero(coeffs[0].bits());
                let mut pow = BigInt::from(m);
                for c in coeffs {
                    acc = acc.add(&c.mul_int(&pow));
                    pow *= &xb;
                }
                let c = acc.centred_fract();
                Phase::Approx { value: c.value, err: c.err }
            }
        }
    }
}

impl Phase {
    /// `e(phase)` and a bound on its absolute error.
    pub fn unit(&self) -> (num_complex::Complex<f64>, f64) {
        match self {
            Phase::Rational { r, q } => match (r.to_u128(), q.to_u128()) {
                (Some(r), Some(q)) => (crate::scalar::unit_rational::<f64>(r, q), 4.0 * f64::EPSILON),
                _ => {
                    let mut x = BigRational::new(r.clone(), q.clone());
                    if x >= BigRational::new(1.into(), 2.into()) {
                        x -= BigRational::one();
                    }
                    let v = x.to_f64().unwrap_or(0.0);
                    let (s, c) = (std::f64::consts::TAU * v).sin_cos();
                    (num_complex::Complex::new(c, s), 8.0 * f64::EPSILON)
                }
            },
            Phase::Approx { value, err } => {
                let (s, c) = (std::f64::consts::TAU * value).sin_cos();
                (
                    num_complex::Complex::new(c, s),
                    std::f64::consts::TAU * err + 4.0 * f64::EPSILON,
                )
            }
        }
    }

    /// Phase as a float in `[-1/2, 1/2)`.
    pub fn to_f64(&self) -> f64 {
        match self {
            Phase::Rational { r, q } => {
                let mut x = BigRational::new(r.clone(), q.clone());
                if x >= BigRational::new(1.into(), 2.into()) {
                    x -= BigRational::one();
                }
                x.to_f64().unwrap_or(f64::NAN)
            }
            Phase::Approx { value, .. } => *value,
        }
    }

    pub fn is_negative_half(&self) -> bool {
        match self {
            Phase::Rational { r, q } => (r * 2i32) == *q,
            Phase::Approx { value, .. } => *value == -0.5,
        }
    }
}

impl Phase {
    pub fn abs_err(&self) -> f64 {
        match self {
            Phase::Rational { .. } => 0.0,
            Phase::Approx { err, .. } => err.abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_coefficients() {
        assert_eq!("-7/12".parse::<Coef>().unwrap(), Coef::ratio(-7, 12));
        assert_eq!("0.25".parse::<Coef>().unwrap(), Coef::ratio(1, 4));
        assert_eq!("3".parse::<Coef>().unwrap(), Coef::int(3));
        assert!(matches!("sqrt:5".parse::<Coef>().unwrap(), Coef::Alpha(_)));
        assert!("1/0".parse::<Coef>().is_err());
        assert!("x".parse::<Coef>().is_err());
    }

    #[test]
    fn int_poly_mod() {
        let g = IntPoly::new(vec![3, -2, 1]).unwrap();
        for v in 0..20u64 {
            let exact = (3 * v as i64 - 2 * (v as i64).pow(2) + (v as i64).pow(3)).rem_euclid(7);
            assert_eq!(g.eval_mod(v, 7), exact as u64);
        }
    }

    #[test]
    fn exact_phases() {
        let f = RealPoly::without_constant(vec![Coef::zero(), Coef::ratio(1, 3)], 64).unwrap();
        let ph = f.phases(10).unwrap();
        assert_eq!(ph.eval(1, 2), Phase::Rational { r: 1.into(), q: 3.into() });
    }

    #[test]
    fn fixed_phase_negation_within_error() {
        let f = RealPoly::without_constant(vec![Coef::Alpha(AlphaSpec::sqrt(2).unwrap()), Coef::Alpha(AlphaSpec::sqrt(3).unwrap())], 96).unwrap();
        let g = f.neg();
        let (pf, pg) = (f.phases(1000).unwrap(), g.phases(1000).unwrap());
        for x in [1i64, 17, 999] {
            let (a, b) = (pf.eval(3, x), pg.eval(3, x));
            let d = a.to_f64() + b.to_f64();
            assert!(d.abs().min((d.abs() - 1.0).abs()) <= a.abs_err() + b.abs_err());
        }
    }
}
