//! The sieve region integral
//! `I(c) = ∬ ω((1 - x - y)/y) / (x y²) dy dx` over
//! `{c < y < x < 1/2, x + 2y < 1}` and the constant where it equals 1.

use std::cell::RefCell;

use serde::Serialize;

use super::buchstab::{omega_table, BuchstabTable};
use crate::error::{Error, Result};
use crate::quad::Adaptive;

/// Result of one region integral.
#[derive(Debug, Clone, Serialize)]
pub struct SieveIntegral {
    pub c: f64,
    pub value: f64,
    /// Quadrature estimate plus the ω table contribution.
    pub error_certificate: f64,
    pub nodes: usize,
}

const ORDER: usize = 10;
pub const DEFAULT_BUDGET: usize = 20_000_000;

fn x_limits(c: f64) -> (f64, f64) {
    (c, 0.5f64.min(1.0 - 2.0 * c))
}

/// `y` breakpoints for one `x`: where `(1 - x - y)/y` is an integer.
fn y_breaks(c: f64, x: f64, out: &mut Vec<f64>) {
    out.clear();
    let hi = x.min((1.0 - x) / 2.0);
    out.push(c);
    let mut j = 2.0;
    loop {
        let y = (1.0 - x) / (j + 1.0);
        if y <= c {
            break;
        }
        if y < hi {
            out.push(y);
        }
        j += 1.0;
    }
    out.push(hi);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
}

/// `x` breakpoints: the upper `y` limit switches at `1/3`, and a `y`
/// breakpoint enters through `y = c` or `y = x`.
fn x_breaks(c: f64) -> Vec<f64> {
    let (lo, hi) = x_limits(c);
    let mut v = vec![lo, hi];
    let inside = |x: f64| x > lo && x < hi;
    if inside(1.0 / 3.0) {
        v.push(1.0 / 3.0);
    }
    let mut j = 1.0;
    loop {
        let a = 1.0 - (j + 1.0) * c;
        let b = 1.0 / (j + 2.0);
        if a <= lo && b <= lo {
            break;
        }
        if inside(a) {
            v.push(a);
        }
        if inside(b) {
            v.push(b);
        }
        j += 1.0;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

/// Integrate over the region for `c` with total error at most `tol`.
pub fn sieve_integral(c: f64, tol: f64) -> Result<SieveIntegral> {
    sieve_integral_with(c, tol, DEFAULT_BUDGET)
}

pub fn sieve_integral_with(c: f64, tol: f64, budget: usize) -> Result<SieveIntegral> {
    if !(c > 0.0 && c.is_finite()) || !(tol > 0.0) {
        return Err(Error::domain("need c > 0 and tol > 0"));
    }
    let (lo, hi) = x_limits(c);
    if hi <= lo {
        return Ok(SieveIntegral {
            c,
            value: 0.0,
            error_certificate: 0.0,
            nodes: 0,
        });
    }
    let owned;
    let table: &BuchstabTable<f64> = if (1.0 - 2.0 * c) / c <= omega_table().u_max() {
        omega_table()
    } else {
        owned = BuchstabTable::new((1.0 - 2.0 * c) / c + 1.0)?;
        &owned
    };
    let log_span = (hi / lo).ln();
    // ∬ dx dy/(x y²) over the region is at most log_span / c
    let table_err = table.error_estimate() * log_span / c;
    let quad_tol = tol - table_err;
    if !(quad_tol > 0.0) {
        return Err(Error::Precision {
            required_bits: (-tol.log2()).ceil() as u32,
        });
    }
    let inner_tol = 0.1 * quad_tol / log_span.max(1e-300);
    let outer_tol = 0.9 * quad_tol;

    let quad = Adaptive::<f64>::new(ORDER, budget);
    let state = RefCell::new((Vec::new(), 0usize, 0.0f64, None::<Error>));
    let outer = quad.integrate_pieces(&x_breaks(c), outer_tol, |x: f64| {
        let mut st = state.borrow_mut();
        if st.3.is_some() {
            return 0.0;
        }
        let mut breaks = std::mem::take(&mut st.0);
        y_breaks(c, x, &mut breaks);
        let r = quad.integrate_pieces(&breaks, inner_tol, |y: f64| {
            let u = (1.0 - x - y) / y;
            // x + 2y < 1 keeps u above 1 up to rounding at the corner
            let w = table.eval(u.max(1.0)).unwrap_or(f64::NAN);
            w / (y * y)
        });
        st.0 = breaks;
        match r {
            Ok(r) => {
                st.1 += r.evaluations;
                st.2 = st.2.max(r.error);
                r.value / x
            }
            Err(e) => {
                st.3 = Some(e);
                0.0
            }
        }
    });
    let (_, inner_evals, inner_err, failed) = state.into_inner();
    if let Some(e) = failed {
        return Err(e);
    }
    let outer = outer?;
    if !outer.value.is_finite() {
        return Err(Error::domain("integrand left the domain of omega"));
    }
    Ok(SieveIntegral {
        c,
        value: outer.value,
        error_certificate: outer.error + inner_err * log_span + table_err,
        nodes: outer.evaluations + inner_evals,
    })
}

/// The root `c*` of `I(c) = 1` in `[0.15, 0.25]`.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalConstant {
    pub c: f64,
    pub value: f64,
    pub error_certificate: f64,
    /// Final bracket with `I(lo) > 1 > I(hi)`.
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub nodes: usize,
}

pub const CRITICAL_BRACKET: (f64, f64) = (0.15, 0.25);

/// Bisection for `I(c) = 1`; stops once `|I(c) - 1| + certificate <= tol`.
pub fn critical_constant(tol: f64) -> Result<CriticalConstant> {
    if !(tol > 0.0 && tol <= 1e-5) {
        return Err(Error::domain("critical constant needs 0 < tol <= 1e-5"));
    }
    let qtol = tol / 10.0;
    let (mut lo, mut hi) = CRITICAL_BRACKET;
    let f_lo = sieve_integral(lo, qtol)?;
    let f_hi = sieve_integral(hi, qtol)?;
    let mut nodes = f_lo.nodes + f_hi.nodes;
    if !(f_lo.value > 1.0 && f_hi.value < 1.0) {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: f_lo.value - 1.0,
            f_hi: f_hi.value - 1.0,
        });
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let r = sieve_integral(mid, qtol)?;
        nodes += r.nodes;
        let gap = r.value - 1.0;
        if gap.abs() + r.error_certificate <= tol || hi - lo <= 1e-14 {
            return Ok(CriticalConstant {
                c: mid,
                value: r.value,
                error_certificate: r.error_certificate,
                bracket: (lo, hi),
                iterations,
                nodes,
            });
        }
        if gap > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fixed-grid composite Simpson on the iterated integral, no breakpoints.
    fn simpson(c: f64, n: usize) -> f64 {
        let (lo, hi) = x_limits(c);
        if hi <= lo {
            return 0.0;
        }
        let simp = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(a + h * i as f64);
            }
            s * h / 3.0
        };
        let t = omega_table();
        simp(lo, hi, &|x| {
            let yh = x.min((1.0 - x) / 2.0);
            simp(c, yh, &|y| t.eval(((1.0 - x - y) / y).max(1.0)).unwrap() / (y * y)) / x
        })
    }

    #[test]
    fn empty_region() {
        assert_eq!(sieve_integral(0.5, 1e-9).unwrap().value, 0.0);
        assert_eq!(sieve_integral(0.34, 1e-9).unwrap().value, 0.0);
    }

    #[test]
    fn below_one_at_reference_points() {
        for c in [0.1842, 0.2] {
            let r = sieve_integral(c, 1e-9).unwrap();
            assert!(r.value + r.error_certificate < 1.0, "{c}: {}", r.value);
        }
        let r = sieve_integral(0.18, 1e-9).unwrap();
        assert!(r.value > 1.0);
    }

    #[test]
    fn agrees_with_simpson() {
        for c in [0.16, 0.1842, 0.22] {
            let a = sieve_integral(c, 1e-10).unwrap().value;
            let b = simpson(c, 600);
            assert!((a - b).abs() < 1e-4, "{c}: {a} vs {b}");
        }
    }

    #[test]
    fn decreasing_on_grid() {
        let mut prev = f64::INFINITY;
        for i in 0..=10 {
            let c = 0.15 + 0.01 * i as f64;
            let v = sieve_integral(c, 1e-9).unwrap().value;
            assert!(v < prev, "{c}");
            prev = v;
        }
    }

    #[test]
    fn breakpoints_are_sorted_and_inside() {
        let b = x_breaks(0.1);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.contains(&(1.0 / 3.0)));
        let mut y = Vec::new();
        y_breaks(0.1, 0.2, &mut y);
        assert_eq!(y.first(), Some(&0.1));
        assert!(y.iter().any(|&v| (v - 0.8 / 3.0).abs() < 1e-15) || 0.8 / 3.0 > 0.2);
    }

    #[test]
    fn critical_constant_near_reference_value() {
        let r = critical_constant(1e-6).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-6);
        assert!(r.c <= 0.1842 && 0.1842 - r.c <= 1e-3, "{}", r.c);
        assert!(r.bracket.0 <= r.c && r.c <= r.bracket.1);
    }

    #[test]
    fn rejects_loose_tolerance() {
        assert!(critical_constant(1e-3).is_err());
        assert!(sieve_integral(-0.1, 1e-9).is_err());
    }
}
