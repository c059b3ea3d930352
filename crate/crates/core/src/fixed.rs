//! Binary fixed-point reals with a tracked error radius.
//!
//! A [`FixedReal`] stores an integer mantissa `m`, a scale `bits` and an
//! error radius `e` (in units of `2^-bits`); the represented real lies in
//! `[(m - e) 2^-bits, (m + e) 2^-bits]`. Multiplying by integers and adding
//! keeps the enclosure valid, which is all that is needed to evaluate
//! `‖f(n)‖` for integer `n` with a certificate.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedReal {
    mant: BigInt,
    bits: u32,
    err: BigUint,
}

/// A float value together with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Certified {
    pub value: f64,
    pub err: f64,
}

impl Certified {
    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }

    /// Is the enclosed value certainly below `threshold`?
    pub fn certainly_below(&self, threshold: f64) -> Option<bool> {
        if self.value + self.err < threshold {
            Some(true)
        } else if self.value - self.err >= threshold {
            Some(false)
        } else {
            None
        }
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// `x * 2^-shift` as f64 for an integer `x`, keeping 64 significant bits.
fn scaled_to_f64(x: &BigInt, shift: u32) -> f64 {
    let len = x.bits() as u32;
    let drop = len.saturating_sub(64).min(shift);
    let top = if drop > 0 { x >> drop as usize } else { x.clone() };
    let base = top.to_f64().unwrap_or(f64::NAN);
    base * 2f64.powi(-((shift - drop) as i32))
}

/// Upper bound (as f64, rounded up) for `e * 2^-bits`.
fn err_to_f64(e: &BigUint, bits: u32) -> f64 {
    if e.is_zero() {
        return 0.0;
    }
    let v = scaled_to_f64(&BigInt::from(e.clone()), bits);
    // Two ulps of headroom for the truncated conversion.
    v * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
}

impl FixedReal {
    pub fn zero(bits: u32) -> Self {
        Self {
            mant: BigInt::zero(),
            bits,
            err: BigUint::zero(),
        }
    }

    pub fn from_integer(n: &BigInt, bits: u32) -> Self {
        Self {
            mant: n << bits as usize,
            bits,
            err: BigUint::zero(),
        }
    }

    /// Nearest-below fixed-point image of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num << bits as usize;
        let (q, r) = scaled.div_mod_floor(&den);
        let err = if r.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        };
        Ok(Self {
            mant: q,
            bits,
            err,
        })
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Result<Self> {
        Self::from_ratio(r.numer(), r.denom(), bits)
    }

    /// Exact image of a finite f64 when `bits` is large enough, otherwise
    /// rounded down with a one-ulp radius.
    pub fn from_f64(x: f64, bits: u32) -> Result<Self> {
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::domain(format!("non-finite coefficient {x}")))?;
        Self::from_rational(&r, bits)
    }

    /// `(p + r*sqrt(d)) / s`.
    pub fn from_surd(p: &BigInt, r: &BigInt, d: &BigInt, s: &BigInt, bits: u32) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::domain("zero surd denominator"));
        }
        if d.is_negative() {
            return Err(Error::domain("negative radicand"));
        }
        let radicand: BigUint = (r * r * d).to_biguint().expect("non-negative") << (2 * bits as usize);
        let root = BigInt::from(radicand.sqrt());
        let exact_root = &root * &root == BigInt::from(radicand);
        let signed_root = if r.is_negative() { -root } else { root };
        let mut numer = (p << bits as usize) + signed_root;
        let mut den = s.clone();
        if den.is_negative() {
            numer = -numer;
            den = -den;
        }
        let (q, rem) = numer.div_mod_floor(&den);
        let err = if exact_root && rem.is_zero() {
            0u32
        } else {
            2u32
        };
        Ok(Self {
            mant: q,
            bits,
            err: BigUint::from(err),
        })
    }

    /// Widen the error radius by `extra` ulps.
    pub fn with_extra_error(mut self, extra: &BigUint) -> Self {
        self.err += extra;
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn error_ulps(&self) -> &BigUint {
        &self.err
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// Change scale. Dropping bits rounds down and adds one ulp of error.
    pub fn rescale(&self, bits: u32) -> Self {
        use std::cmp::Ordering::*;
        match bits.cmp(&self.bits) {
            Equal => self.clone(),
            Greater => {
                let d = (bits - self.bits) as usize;
                Self {
                    mant: &self.mant << d,
                    bits,
                    err: &self.err << d,
                }
            }
            Less => {
                let d = (self.bits - bits) as usize;
                let mant = self.mant.div_floor(&pow2(d as u32));
                let exact = &mant << d == self.mant;
                let mut err = &self.err >> d;
                if !exact || !self.err.is_zero() {
                    err += 1u32;
                }
                Self { mant, bits, err }
            }
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self {
            mant: &self.mant * n,
            bits: self.bits,
            err: &self.err * n.magnitude(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let other = other.rescale(self.bits);
        Self {
            mant: &self.mant + &other.mant,
            bits: self.bits,
            err: &self.err + &other.err,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            bits: self.bits,
            err: self.err.clone(),
        }
    }

    /// Reduce modulo 1 into `[0, 1)`; the error radius is unchanged.
    pub fn reduce_mod_one(&self) -> Self {
        Self {
            mant: self.mant.mod_floor(&pow2(self.bits)),
            bits: self.bits,
            err: self.err.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.mant, self.bits)
    }

    pub fn error_bound(&self) -> f64 {
        err_to_f64(&self.err, self.bits)
    }

    /// Fractional part in `[0, 1)` with certified error (the error may make
    /// the enclosure wrap around 0).
    pub fn fract(&self) -> Certified {
        let r = self.reduce_mod_one();
        let v = r.to_f64();
        Certified {
            value: if v >= 1.0 { 0.0 } else { v },
            err: self.error_bound() + f64::EPSILON,
        }
    }

    /// Representative of `x mod 1` in `[-1/2, 1/2)`. The conversion is
    /// sign-symmetric, so `x` and `-x` give exactly negated values (except
    /// at `1/2`).
    pub fn centred_fract(&self) -> Certified {
        let one = pow2(self.bits);
        let mut r = self.mant.mod_floor(&one);
        if self.bits > 0 && r >= pow2(self.bits - 1) {
            r -= &one;
        }
        let mag = scaled_to_f64(&BigInt::from(r.magnitude().clone()), self.bits);
        let value = if r.is_negative() { -mag } else { mag };
        Certified {
            value,
            err: self.error_bound() + value.abs() * f64::EPSILON,
        }
    }

    /// `‖x‖`, the distance to the nearest integer, with certified error.
    pub fn dist_to_int(&self) -> Certified {
        let one = pow2(self.bits);
        let r = self.mant.mod_floor(&one);
        let d = std::cmp::min(r.clone(), &one - &r);
        let value = scaled_to_f64(&d, self.bits);
        let rounding = if d.bits() > 53 { value * f64::EPSILON } else { 0.0 };
        Certified {
            value,
            err: self.error_bound() + rounding,
        }
    }

    /// Exact mantissa of the distance to the nearest integer, in ulps.
    pub fn dist_to_int_ulps(&self) -> BigInt {
        let one = pow2(self.bits);
        let r = self.mant.mod_floor(&one);
        std::cmp::min(r.clone(), one - r)
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }
}

/// Parse a decimal literal such as `-1.4142135623` or `3e-2` into an exact
/// rational, also returning the number of fractional decimal digits.
pub fn parse_decimal(text: &str) -> Result<(BigRational, u32)> {
    let bad = |detail: &str| Error::Parse {
        what: "decimal",
        detail: format!("{text:?}: {detail}"),
    };
    let t = text.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad("bad exponent"))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad("non-digit character"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad("digits"))?
    };
    if neg {
        num = -num;
    }
    let scale = frac_part.len() as i32 - exp;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::new(num, num_traits::pow(ten, scale as usize))
    } else {
        BigRational::from_integer(num * num_traits::pow(ten, (-scale) as usize))
    };
    Ok((value, scale.max(0) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn sqrt2_times_169_near_239() {
        let s = FixedReal::from_surd(&bi(0), &bi(1), &bi(2), &bi(1), 256).unwrap();
        let d = s.mul_int(&bi(169)).dist_to_int();
        assert!((d.value - 0.002_092_041_053_063_2).abs() < 1e-15, "{d:?}");
        // dominated by the final rounding to f64
        assert!(d.err < 1e-18);
    }

    #[test]
    fn negative_surd_coefficient() {
        // (1 - sqrt5)/2 = -0.6180339887...
        let s = FixedReal::from_surd(&bi(1), &bi(-1), &bi(5), &bi(2), 128).unwrap();
        assert!((s.to_f64() + 0.618_033_988_749_894_8).abs() < 1e-15);
        let t = FixedReal::from_surd(&bi(-1), &bi(1), &bi(5), &bi(-2), 128).unwrap();
        assert!((t.to_f64() + 0.618_033_988_749_894_8).abs() < 1e-15);
    }

    #[test]
    fn ratio_is_exact_for_dyadics() {
        let x = FixedReal::from_ratio(&bi(3), &bi(8), 64).unwrap();
        assert!(x.is_exact());
        assert_eq!(x.to_f64(), 0.375);
        let y = FixedReal::from_ratio(&bi(1), &bi(3), 64).unwrap();
        assert!(!y.is_exact());
    }

    #[test]
    fn rescale_down_keeps_enclosure() {
        let x = FixedReal::from_ratio(&bi(1), &bi(3), 200).unwrap();
        let y = x.rescale(70);
        assert!((y.to_f64() - 1.0 / 3.0).abs() <= y.error_bound() + 1e-17);
    }

    #[test]
    fn dist_to_int_of_negative() {
        let x = FixedReal::from_ratio(&bi(-13), &bi(4), 32).unwrap();
        assert_eq!(x.dist_to_int().value, 0.25);
        assert_eq!(x.fract().value, 0.75);
    }

    #[test]
    fn parses_decimals() {
        let (v, digits) = parse_decimal("1.4142135623").unwrap();
        assert_eq!(digits, 10);
        assert_eq!(v, BigRational::new(bi(14142135623), bi(10_000_000_000)));
        let (w, _) = parse_decimal("-2.5e-1").unwrap();
        assert_eq!(w, BigRational::new(bi(-1), bi(4)));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
    }
}
