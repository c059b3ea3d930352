//! Scalar abstraction for the floating-point parts of the toolkit.
//!
//! Quadrature, the Buchstab table and the exponential sums are written
//! against [`Real`], implemented for `f32` and `f64`. Exact work (counting,
//! continued fractions, parameter inequalities) uses integers and
//! rationals directly.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for tabulated constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 always converts to a float scalar")
    }

    /// Number of mantissa bits, including the implicit bit.
    const MANTISSA_BITS: u32;
}

impl Real for f32 {
    const MANTISSA_BITS: u32 = f32::MANTISSA_DIGITS;
}

impl Real for f64 {
    const MANTISSA_BITS: u32 = f64::MANTISSA_DIGITS;
}

/// `e(theta) = exp(2 pi i theta)`.
///
/// The argument is first reduced to `[-1/2, 1/2)` so that phases which are
/// exact rationals lose no accuracy to large integer parts.
pub fn unit<T: Real>(theta: T) -> Complex<T> {
    let reduced = theta - (theta + T::of(0.5)).floor();
    let (s, c) = (T::TAU() * reduced).sin_cos();
    Complex::new(c, s)
}

/// `e(r / q)` for an exact residue `r` modulo `q`.
pub fn unit_rational<T: Real>(r: u128, q: u128) -> Complex<T> {
    debug_assert!(q > 0);
    let r = r % q;
    // Centre the residue so the f64 division is applied to |r| <= q/2.
    let centred = if 2 * r >= q {
        -(T::from_u128(q - r).unwrap() / T::from_u128(q).unwrap())
    } else {
        T::from_u128(r).unwrap() / T::from_u128(q).unwrap()
    };
    let (s, c) = (T::TAU() * centred).sin_cos();
    Complex::new(c, s)
}

/// Neumaier-compensated complex accumulator.
///
/// Sums of many unit-modulus terms need compensation to keep exact-identity
/// checks (full-period sums, Gauss sums) at the 1e-12 level.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T: Real> {
    re: T,
    im: T,
    c_re: T,
    c_im: T,
}

fn neumaier<T: Real>(sum: &mut T, comp: &mut T, x: T) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp = *comp + ((*sum - t) + x);
    } else {
        *comp = *comp + ((x - t) + *sum);
    }
    *sum = t;
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            re: T::zero(),
            im: T::zero(),
            c_re: T::zero(),
            c_im: T::zero(),
        }
    }

    pub fn add(&mut self, z: Complex<T>) {
        neumaier(&mut self.re, &mut self.c_re, z.re);
        neumaier(&mut self.im, &mut self.c_im, z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re + self.c_re, self.im + self.c_im)
    }
}

impl<T: Real> FromIterator<Complex<T>> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = Complex<T>>>(iter: I) -> Self {
        let mut acc = Self::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Neumaier-compensated real sum.
pub fn compensated_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let (mut sum, mut comp) = (T::zero(), T::zero());
    for x in values {
        neumaier(&mut sum, &mut comp, x);
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_of_integer_is_one() {
        let z: Complex<f64> = unit(7.0);
        assert!((z.re - 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    #[test]
    fn rational_unit_matches_float_unit() {
        for q in 1..40u128 {
            for r in 0..q {
                let a: Complex<f64> = unit_rational(r, q);
                let b: Complex<f64> = unit(r as f64 / q as f64);
                assert!((a - b).norm() < 1e-14, "r={r} q={q}");
            }
        }
    }

    #[test]
    fn compensated_sum_cancels() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn works_for_f32() {
        let z: Complex<f32> = unit(0.25f32);
        assert!(z.re.abs() < 1e-6 && (z.im - 1.0).abs() < 1e-6);
    }
}
