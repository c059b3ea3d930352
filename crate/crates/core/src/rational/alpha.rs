use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fixed::{parse_decimal, FixedReal};

/// Leading coefficient of the polynomial under study.
///
/// Text forms: `sqrt:2`, `surd:(1+1*sqrt5)/2`, `dec:1.4142135623<bits=128>`,
/// `rat:355/113`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaSpec {
    /// `(p + r*sqrt(d)) / s` with `d` not a perfect square and `r != 0`.
    Surd { p: i64, r: i64, d: i64, s: i64 },
    /// A decimal literal standing for an unknown real within half a unit
    /// of its last digit; `bits` is the working precision.
    Decimal {
        value: BigRational,
        digits: u32,
        bits: u32,
    },
    /// An exact rational `num / den`.
    Rational { num: i64, den: i64 },
}

pub const DEFAULT_DECIMAL_BITS: u32 = 128;

fn is_square(d: i64) -> bool {
    if d < 0 {
        return false;
    }
    let r = crate::primes::integer_sqrt(d as u64) as i64;
    r * r == d
}

impl AlphaSpec {
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::surd(0, 1, d, 1)
    }

    pub fn surd(p: i64, r: i64, d: i64, s: i64) -> Result<Self> {
        let spec = AlphaSpec::Surd { p, r, d, s };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rational(num: i64, den: i64) -> Result<Self> {
        let spec = AlphaSpec::Rational { num, den };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlphaSpec::Surd { r, d, s, .. } => {
                if *s == 0 {
                    return Err(Error::domain("surd denominator is zero"));
                }
                if *r == 0 {
                    return Err(Error::domain("surd coefficient r must be non-zero"));
                }
                if *d <= 0 || is_square(*d) {
                    return Err(Error::domain(format!("radicand {d} must be a positive non-square")));
                }
            }
            AlphaSpec::Decimal { bits, .. } => {
                if *bits < 64 {
                    return Err(Error::domain(format!("decimal precision {bits} < 64 bits")));
                }
            }
            AlphaSpec::Rational { den, .. } => {
                if *den == 0 {
                    return Err(Error::domain("rational denominator is zero"));
                }
            }
        }
        Ok(())
    }

    pub fn is_irrational(&self) -> bool {
        !matches!(self, AlphaSpec::Rational { .. })
    }

    /// Half-width of the uncertainty interval of a decimal literal.
    pub fn decimal_radius(&self) -> Option<BigRational> {
        match self {
            AlphaSpec::Decimal { digits, .. } => Some(BigRational::new(
                BigInt::from(1),
                BigInt::from(2) * num_traits::pow(BigInt::from(10), *digits as usize),
            )),
            _ => None,
        }
    }

    /// Fixed-point enclosure of the value with `bits` fractional bits.
    pub fn to_fixed(&self, bits: u32) -> Result<FixedReal> {
        match self {
            AlphaSpec::Surd { p, r, d, s } => FixedReal::from_surd(
                &BigInt::from(*p),
                &BigInt::from(*r),
                &BigInt::from(*d),
                &BigInt::from(*s),
                bits,
            ),
            AlphaSpec::Rational { num, den } => {
                FixedReal::from_ratio(&BigInt::from(*num), &BigInt::from(*den), bits)
            }
            AlphaSpec::Decimal { value, .. } => {
                let radius = self.decimal_radius().expect("decimal");
                let scaled = radius * BigRational::from_integer(BigInt::from(1) << bits as usize);
                let extra: BigUint = scaled.ceil().to_integer().abs().to_biguint().expect("non-negative");
                Ok(FixedReal::from_rational(value, bits)?.with_extra_error(&extra))
            }
        }
    }

    /// Approximate value as f64.
    pub fn to_f64(&self) -> f64 {
        self.to_fixed(128).map(|x| x.to_f64()).unwrap_or(f64::NAN)
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Surd { p: 0, r: 1, d, s: 1 } => write!(f, "sqrt:{d}"),
            AlphaSpec::Surd { p, r, d, s } => {
                let sign = if *r < 0 { '-' } else { '+' };
                write!(f, "surd:({p}{sign}{}*sqrt{d})/{s}", r.abs())
            }
            AlphaSpec::Decimal { value, digits, bits } => {
                write!(f, "dec:{}<bits={bits}>", format_decimal(value, *digits))
            }
            AlphaSpec::Rational { num, den } => write!(f, "rat:{num}/{den}"),
        }
    }
}

fn format_decimal(value: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = (value * BigRational::from_integer(scale.clone())).to_integer();
    let neg = scaled.is_negative();
    let mag = scaled.abs().to_string();
    let body = if digits == 0 {
        mag
    } else {
        let padded = format!("{:0>width$}", mag, width = digits as usize + 1);
        let (i, fpart) = padded.split_at(padded.len() - digits as usize);
        format!("{i}.{fpart}")
    };
    if neg && !scaled.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

fn parse_err(text: &str, detail: &str) -> Error {
    Error::Parse {
        what: "alpha spec",
        detail: format!("{text:?}: {detail}"),
    }
}

fn parse_i64(text: &str, field: &str, whole: &str) -> Result<i64> {
    text.trim()
        .parse()
        .map_err(|_| parse_err(whole, &format!("bad integer for {field}: {text:?}")))
}

/// `(p+r*sqrtd)/s`, `(p-r*sqrtd)/s`; `r*` may be omitted, `/s` may be omitted.
fn parse_surd(body: &str, whole: &str) -> Result<AlphaSpec> {
    let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let (numer, den) = match body.rsplit_once('/') {
        Some((n, d)) if n.ends_with(')') => (n.to_string(), parse_i64(d, "s", whole)?),
        _ => (body.clone(), 1),
    };
    let inner = numer
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(&numer);
    let sqrt_at = inner
        .find("sqrt")
        .ok_or_else(|| parse_err(whole, "missing sqrt term"))?;
    let d = parse_i64(&inner[sqrt_at + 4..], "d", whole)?;
    let before = &inner[..sqrt_at];
    // split `before` into p and signed r coefficient
    let split = before
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (p_text, r_text) = match split {
        Some(i) => (&before[..i], &before[i..]),
        None => ("0", before),
    };
    let r_text = r_text.strip_suffix('*').unwrap_or(r_text);
    let r = match r_text {
        "" | "+" => 1,
        "-" => -1,
        t => parse_i64(t, "r", whole)?,
    };
    let p = parse_i64(p_text, "p", whole)?;
    AlphaSpec::surd(p, r, d, den)
}

impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| parse_err(text, "expected <kind>:<value>"))?;
        match kind.trim() {
            "sqrt" => AlphaSpec::sqrt(parse_i64(body, "d", text)?),
            "surd" => parse_surd(body, text),
            "rat" => {
                let (n, d) = body
                    .split_once('/')
                    .map(|(n, d)| (n.to_string(), d.to_string()))
                    .unwrap_or((body.to_string(), "1".into()));
                AlphaSpec::rational(parse_i64(&n, "numerator", text)?, parse_i64(&d, "denominator", text)?)
            }
            "dec" => {
                let (lit, bits) = match body.split_once('<') {
                    Some((lit, rest)) => {
                        let b = rest
                            .strip_suffix('>')
                            .and_then(|r| r.trim().strip_prefix("bits="))
                            .ok_or_else(|| parse_err(text, "expected <bits=N>"))?;
                        let bits: u32 = b
                            .trim()
                            .parse()
                            .map_err(|_| parse_err(text, "bad bit count"))?;
                        (lit, bits)
                    }
                    None => (body, DEFAULT_DECIMAL_BITS),
                };
                let (value, digits) = parse_decimal(lit)?;
                let spec = AlphaSpec::Decimal { value, digits, bits };
                spec.validate()?;
                Ok(spec)
            }
            other => Err(parse_err(text, &format!("unknown kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        assert_eq!("sqrt:2".parse::<AlphaSpec>().unwrap(), AlphaSpec::Surd { p: 0, r: 1, d: 2, s: 1 });
        assert_eq!(
            "surd:(1+1*sqrt5)/2".parse::<AlphaSpec>().unwrap(),
            AlphaSpec::Surd { p: 1, r: 1, d: 5, s: 2 }
        );
        assert_eq!(
            "surd:(-3-2*sqrt7)/5".parse::<AlphaSpec>().unwrap(),
            AlphaSpec::Surd { p: -3, r: -2, d: 7, s: 5 }
        );
        assert_eq!(
            "surd:(2+sqrt3)".parse::<AlphaSpec>().unwrap(),
            AlphaSpec::Surd { p: 2, r: 1, d: 3, s: 1 }
        );
        assert_eq!("rat:355/113".parse::<AlphaSpec>().unwrap(), AlphaSpec::Rational { num: 355, den: 113 });
        let dec: AlphaSpec = "dec:1.4142135624<bits=128>".parse().unwrap();
        assert!(matches!(dec, AlphaSpec::Decimal { digits: 10, bits: 128, .. }));
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["sqrt:4", "sqrt:-2", "rat:1/0", "dec:1.5<bits=32>", "surd:(1+0*sqrt5)/2", "foo:1", "sqrt"] {
            assert!(bad.parse::<AlphaSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for text in ["sqrt:2", "surd:(1+1*sqrt5)/2", "surd:(-3-2*sqrt7)/5", "rat:355/113", "dec:1.4142135623<bits=128>", "dec:-0.05<bits=64>"] {
            let spec: AlphaSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(spec.to_string().parse::<AlphaSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn decimal_enclosure_contains_sqrt2() {
        let dec: AlphaSpec = "dec:1.4142135624<bits=128>".parse().unwrap();
        let x = dec.to_fixed(128).unwrap();
        assert!((x.to_f64() - 2f64.sqrt()).abs() <= x.error_bound());
        assert!(x.error_bound() > 4e-11);
    }
}
