//! Polynomials `α_k x^k + ... + α_0` with a distinguished leading
//! coefficient, and certified evaluation of `‖f(n)‖`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::Coef;
use crate::fixed::{Certified, FixedReal};
use crate::rational::{AlphaSpec, Convergent};

/// Absolute error target for [`FracPolynomial::fracpart`].
pub const FRACPART_TOL: f64 = 1.0 / 4_294_967_296.0;
/// Escalation stops here.
pub const MAX_BITS: u32 = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub enum Leading {
    Alpha(AlphaSpec),
    Convergent(Convergent),
}

impl Leading {
    fn coef(&self) -> Coef {
        match self {
            Leading::Alpha(a) => Coef::Alpha(a.clone()),
            Leading::Convergent(c) => Coef::Exact(BigRational::new(c.a.into(), c.q.into())),
        }
    }
}

/// `f(x) = leading x^k + lower[k-1] x^(k-1) + ... + lower[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracPolynomial {
    pub k: u32,
    pub leading: Leading,
    pub lower: Vec<Coef>,
    pub n_max: u64,
    pub bits: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyInfo {
    pub k: u32,
    pub leading: String,
    pub lower: Vec<String>,
    pub n_max: u64,
    pub bits: u32,
}

/// `ceil(k log2 n_max) + 64`.
pub fn default_bits(k: u32, n_max: u64) -> u32 {
    (k as f64 * (n_max.max(2) as f64).log2()).ceil() as u32 + 64
}

impl FracPolynomial {
    pub fn new(k: u32, leading: Leading, lower: Vec<Coef>, n_max: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("degree must be at least 1"));
        }
        if lower.len() > k as usize {
            return Err(Error::domain(format!(
                "{} lower coefficients for degree {k}",
                lower.len()
            )));
        }
        if let Leading::Convergent(c) = &leading {
            if c.q == 0 {
                return Err(Error::domain("convergent denominator is zero"));
            }
        }
        Ok(Self {
            k,
            leading,
            lower,
            n_max,
            bits: default_bits(k, n_max),
        })
    }

    /// `α x^k + β`.
    pub fn with_alpha(alpha: AlphaSpec, k: u32, beta: Coef, n_max: u64) -> Result<Self> {
        Self::new(k, Leading::Alpha(alpha), vec![beta], n_max)
    }

    /// The same lower coefficients with leading `a / q`.
    pub fn with_convergent(&self, c: Convergent) -> Result<Self> {
        Self::new(self.k, Leading::Convergent(c), self.lower.clone(), self.n_max)
    }

    pub fn info(&self) -> PolyInfo {
        PolyInfo {
            k: self.k,
            leading: self.leading.coef().to_string(),
            lower: self.lower.iter().map(|c| c.to_string()).collect(),
            n_max: self.n_max,
            bits: self.bits,
        }
    }

    fn coefficient(&self, j: usize) -> Coef {
        if j == self.k as usize {
            self.leading.coef()
        } else {
            self.lower.get(j).cloned().unwrap_or_else(Coef::zero)
        }
    }

    /// Common denominator and integer numerators, when every coefficient
    /// is rational.
    pub fn rational_form(&self) -> Option<(BigInt, Vec<BigInt>)> {
        let rs: Option<Vec<BigRational>> =
            (0..=self.k as usize).map(|j| self.coefficient(j).as_rational()).collect();
        let rs = rs?;
        let den = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let nums = rs.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        Some((den, nums))
    }

    fn check_n(&self, n: u64) -> Result<()> {
        if n > self.n_max {
            return Err(Error::domain(format!("n = {n} exceeds n_max = {}", self.n_max)));
        }
        Ok(())
    }

    /// Exact `‖f(n)‖` as a rational, for rational coefficients.
    pub fn fracpart_exact(&self, n: u64) -> Option<BigRational> {
        let (den, nums) = self.rational_form()?;
        let r = eval_mod(&nums, n, &den);
        let d = std::cmp::min(r.clone(), &den - r);
        Some(BigRational::new(d, den))
    }

    /// `f(n)` as a fixed-point enclosure at `bits` fractional bits.
    pub fn eval_fixed(&self, n: u64, bits: u32) -> Result<FixedReal> {
        let nb = BigInt::from(n);
        let mut acc = FixedReal::zero(bits);
        let mut pow = BigInt::one();
        for j in 0..=self.k as usize {
            let c = self.coefficient(j);
            if !matches!(&c, Coef::Exact(r) if r.is_zero()) {
                acc = acc.add(&c.to_fixed(bits)?.mul_int(&pow));
            }
            pow *= &nb;
        }
        Ok(acc)
    }

    /// `‖f(n)‖` with absolute error at most `2^-32`; exact (error 0, value
    /// rounded to the nearest float) for rational coefficients. The
    /// working precision doubles until the certificate is met.
    pub fn fracpart(&self, n: u64) -> Result<Certified> {
        self.check_n(n)?;
        if let Some(r) = self.fracpart_exact(n) {
            return Ok(Certified::exact(r.to_f64().unwrap_or(f64::NAN)));
        }
        self.fracpart_at(n, self.bits)
    }

    /// As [`fracpart`](Self::fracpart), starting from `bits`.
    pub fn fracpart_at(&self, n: u64, bits: u32) -> Result<Certified> {
        let mut bits = bits.max(64);
        let mut last = f64::INFINITY;
        while bits <= MAX_BITS {
            let c = self.eval_fixed(n, bits)?.dist_to_int();
            if c.err <= FRACPART_TOL {
                return Ok(c);
            }
            // error that does not shrink with precision comes from the inputs
            if c.err >= last * 0.5 {
                break;
            }
            last = c.err;
            bits *= 2;
        }
        let c = self.eval_fixed(n, bits.min(MAX_BITS))?.dist_to_int();
        let excess = (c.err / FRACPART_TOL).log2().ceil().max(1.0) as u32;
        Err(Error::Precision {
            required_bits: bits.min(MAX_BITS) + excess,
        })
    }
}

fn eval_mod(nums: &[BigInt], n: u64, den: &BigInt) -> BigInt {
    let nb = BigInt::from(n);
    let mut acc = BigInt::zero();
    for c in nums.iter().rev() {
        acc = (acc * &nb + c).mod_floor(den);
    }
    acc
}

/// Residue form of a rational polynomial for fast repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct ResidueForm {
    den: BigInt,
    nums: Vec<BigInt>,
    small: Option<(u128, Vec<u128>)>,
}

impl ResidueForm {
    pub(crate) fn new(den: BigInt, nums: Vec<BigInt>) -> Self {
        let small = den.to_u64().map(|d| {
            let d = d as u128;
            let ns = nums
                .iter()
                .map(|c| c.mod_floor(&BigInt::from(d)).to_u128().expect("reduced"))
                .collect();
            (d, ns)
        });
        Self { den, nums, small }
    }

    pub(crate) fn den(&self) -> &BigInt {
        &self.den
    }

    /// `numerator(f(n)) mod den`.
    pub(crate) fn residue(&self, n: u64) -> BigInt {
        match &self.small {
            Some((d, ns)) => {
                let x = n as u128 % d;
                let mut acc = 0u128;
                for c in ns.iter().rev() {
                    acc = ((acc * x) % d + c) % d;
                }
                BigInt::from(acc)
            }
            None => eval_mod(&self.nums, n, &self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_coefficients_vanish() {
        let f = FracPolynomial::new(1, Leading::Convergent(Convergent::new(3, 1)), vec![], 1000).unwrap();
        for n in 1..100 {
            assert_eq!(f.fracpart(n).unwrap(), Certified::exact(0.0));
        }
    }

    #[test]
    fn sqrt2_at_13() {
        let f = FracPolynomial::with_alpha(AlphaSpec::sqrt(2).unwrap(), 2, Coef::zero(), 100).unwrap();
        let c = f.fracpart(13).unwrap();
        assert!((c.value - 0.002_092_041_053_063_2).abs() < 1e-15, "{}", c.value);
        assert!(c.err <= FRACPART_TOL);
        assert_eq!(f.bits, default_bits(2, 100));
    }

    #[test]
    fn rational_leading_is_exact() {
        let f = FracPolynomial::new(2, Leading::Convergent(Convergent::new(17, 12)), vec![], 100).unwrap();
        assert_eq!(f.fracpart_exact(12).unwrap(), BigRational::zero());
        assert_eq!(f.fracpart_exact(15).unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(f.fracpart(14).unwrap().err, 0.0);
    }

    #[test]
    fn beyond_n_max_rejected() {
        let f = FracPolynomial::with_alpha(AlphaSpec::sqrt(3).unwrap(), 3, Coef::zero(), 10).unwrap();
        assert!(f.fracpart(11).is_err());
    }

    #[test]
    fn short_decimal_cannot_certify() {
        let a: AlphaSpec = "dec:1.41421356".parse().unwrap();
        let f = FracPolynomial::with_alpha(a, 2, Coef::zero(), 1_000_000).unwrap();
        match f.fracpart(999_983) {
            Err(Error::Precision { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn residue_form_matches_bigint() {
        let den = BigInt::from(1_000_003u64);
        let nums: Vec<BigInt> = vec![5.into(), (-7).into(), 123_456_789.into()];
        let r = ResidueForm::new(den.clone(), nums.clone());
        for n in [1u64, 2, 999, 1_000_003, 77_777_777] {
            assert_eq!(r.residue(n), eval_mod(&nums, n, &den));
        }
    }

    #[test]
    fn certificate_holds_at_double_precision() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(7);
        for _ in 0..2000 {
            let d = [2, 3, 5, 6, 7, 10, 11][rng.gen_range(0..7)];
            let k = rng.gen_range(1..=4);
            let beta = Coef::ratio(rng.gen_range(-50..50), rng.gen_range(1..60));
            let f = FracPolynomial::with_alpha(AlphaSpec::sqrt(d).unwrap(), k, beta, 1_000_000).unwrap();
            let n = rng.gen_range(1..=1_000_000);
            let a = f.fracpart(n).unwrap();
            let b = f.fracpart_at(n, 2 * f.bits).unwrap();
            assert!((a.value - b.value).abs() <= a.err + b.err, "d={d} k={k} n={n}");
            assert!((0.0..=0.5).contains(&a.value));
        }
    }
}
