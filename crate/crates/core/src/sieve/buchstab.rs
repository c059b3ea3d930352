//! Buchstab's function `ω` by the method of steps.
//!
//! `ω(u) = 1/u` on `[1, 2]` and `(u ω(u))' = ω(u - 1)` for `u > 2`, so
//! `u ω(u) = 1 + ∫_1^{u-1} ω(t) dt` for `u >= 2`. The table stores one
//! Chebyshev interpolant per panel; panels tile each `[j, j + 1]` so the
//! kinks at integers fall on panel edges. The integral of an earlier
//! panel is taken with a Gauss-Legendre rule exact for its degree.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::scalar::Real;

/// `e^(-γ)`, the limit of `ω(u)` as `u → ∞`.
pub const OMEGA_LIMIT: f64 = 0.561_459_483_566_885_2;

#[derive(Debug, Clone)]
struct Panel<T: Real> {
    a: T,
    b: T,
    values: Vec<T>,
    /// `∫_1^a ω`
    cum: T,
}

/// Piecewise-polynomial table of `ω` on `[1, u_max]`.
#[derive(Debug, Clone)]
pub struct BuchstabTable<T: Real> {
    /// Panels per unit interval.
    per_unit: usize,
    nodes: Vec<T>,
    bary: Vec<T>,
    rule: GaussLegendre<T>,
    panels: Vec<Panel<T>>,
    u_max: T,
    error_estimate: T,
}

fn closed_form<T: Real>(u: T) -> T {
    if u <= T::of(2.0) {
        T::one() / u
    } else {
        (T::one() + (u - T::one()).ln()) / u
    }
}

impl<T: Real> BuchstabTable<T> {
    /// Default table: 8 panels per unit, 24 nodes per panel.
    pub fn new(u_max: T) -> Result<Self> {
        let mut t = Self::build(u_max, 8, 24)?;
        let coarse = Self::build(u_max, 4, 16)?;
        t.error_estimate = t.max_difference(&coarse);
        Ok(t)
    }

    /// Table with an explicit panel density and degree; no error estimate.
    pub fn build(u_max: T, per_unit: usize, degree: usize) -> Result<Self> {
        if !(u_max >= T::of(2.0)) || !u_max.is_finite() {
            return Err(Error::domain("u_max must be finite and at least 2"));
        }
        if per_unit == 0 || degree < 2 {
            return Err(Error::domain("need at least one panel and two nodes"));
        }
        let n = degree;
        let nf = T::from_usize(n).unwrap();
        let mut nodes = Vec::with_capacity(n);
        let mut bary = Vec::with_capacity(n);
        for i in 0..n {
            let th = T::PI() * T::from_usize(2 * i + 1).unwrap() / (T::of(2.0) * nf);
            nodes.push(th.cos());
            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
            bary.push(sign * th.sin());
        }
        let mut table = Self {
            per_unit,
            nodes,
            bary,
            rule: GaussLegendre::new(n / 2 + 1),
            panels: Vec::new(),
            u_max,
            error_estimate: T::zero(),
        };
        let units = (u_max - T::one()).ceil().to_usize().unwrap();
        let h = T::one() / T::from_usize(per_unit).unwrap();
        let mut cum = T::zero();
        for j in 0..units {
            for i in 0..per_unit {
                let a = T::from_usize(j + 1).unwrap() + h * T::from_usize(i).unwrap();
                let b = if i + 1 == per_unit {
                    T::from_usize(j + 2).unwrap()
                } else {
                    a + h
                };
                let values: Vec<T> = table
                    .nodes
                    .iter()
                    .map(|&x| {
                        let u = (a + b) * T::of(0.5) + (b - a) * T::of(0.5) * x;
                        if j < 2 {
                            closed_form(u)
                        } else {
                            (T::one() + table.integral_to(u - T::one())) / u
                        }
                    })
                    .collect();
                let panel = Panel { a, b, values, cum };
                cum = cum + table.panel_integral(&panel, b);
                table.panels.push(panel);
            }
        }
        Ok(table)
    }

    fn interpolate(&self, p: &Panel<T>, u: T) -> T {
        let x = (T::of(2.0) * u - p.a - p.b) / (p.b - p.a);
        let mut num = T::zero();
        let mut den = T::zero();
        for ((&xi, &wi), &fi) in self.nodes.iter().zip(&self.bary).zip(&p.values) {
            let d = x - xi;
            if d == T::zero() {
                return fi;
            }
            let w = wi / d;
            num = num + w * fi;
            den = den + w;
        }
        num / den
    }

    /// `∫_{p.a}^{x} ω` for `x` inside the panel.
    fn panel_integral(&self, p: &Panel<T>, x: T) -> T {
        if x <= p.a {
            return T::zero();
        }
        self.rule.integrate(p.a, x, |t| self.interpolate(p, t))
    }

    fn panel_index(&self, u: T) -> usize {
        let h = T::one() / T::from_usize(self.per_unit).unwrap();
        let i = ((u - T::one()) / h).floor().to_usize().unwrap_or(0);
        i.min(self.panels.len() - 1)
    }

    /// `∫_1^x ω(t) dt` for `1 <= x <= u_max`.
    pub fn integral_to(&self, x: T) -> T {
        if x <= T::one() {
            return T::zero();
        }
        let p = &self.panels[self.panel_index(x)];
        p.cum + self.panel_integral(p, x)
    }

    /// `ω(u)`; closed forms on `[1, 3]`.
    pub fn eval(&self, u: T) -> Result<T> {
        if !(u >= T::one()) {
            return Err(Error::domain(format!("omega needs u >= 1, got {u}")));
        }
        if u <= T::of(3.0) {
            return Ok(closed_form(u));
        }
        if u > self.u_max {
            return Err(Error::domain(format!("u = {u} beyond table end {}", self.u_max)));
        }
        Ok(self.interpolate(&self.panels[self.panel_index(u)], u))
    }

    pub fn u_max(&self) -> T {
        self.u_max
    }

    /// Largest difference from a coarser table, an upper estimate of this
    /// table's error.
    pub fn error_estimate(&self) -> T {
        self.error_estimate
    }

    fn max_difference(&self, other: &Self) -> T {
        let mut worst = T::zero();
        let steps = self.panels.len() * 7;
        let span = self.u_max - T::one();
        for i in 0..=steps {
            let u = T::one() + span * T::from_usize(i).unwrap() / T::from_usize(steps).unwrap();
            if let (Ok(a), Ok(b)) = (self.eval(u), other.eval(u)) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

fn default_table() -> &'static BuchstabTable<f64> {
    static TABLE: OnceLock<BuchstabTable<f64>> = OnceLock::new();
    TABLE.get_or_init(|| BuchstabTable::new(40.0).expect("valid table"))
}

/// `ω(u)` with error at most `tol`. Beyond the default table range the
/// distance to `e^(-γ)` is below `1e-40`, and the limit is returned.
pub fn buchstab_omega(u: f64, tol: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return Err(Error::domain(format!("omega needs u >= 1, got {u}")));
    }
    let t = default_table();
    if t.error_estimate() > tol {
        return Err(Error::Precision {
            required_bits: (-tol.log2()).ceil() as u32,
        });
    }
    if u > t.u_max() {
        return Ok(OMEGA_LIMIT);
    }
    t.eval(u)
}

/// The shared `f64` table.
pub fn omega_table() -> &'static BuchstabTable<f64> {
    default_table()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(buchstab_omega(1.5, 1e-12).unwrap(), 1.0 / 1.5);
        let v = buchstab_omega(2.5, 1e-12).unwrap();
        assert!((v - (1.0 + 1.5f64.ln()) / 2.5).abs() <= 1e-9);
        assert!((v - 0.562_186_043_2).abs() < 1e-9);
        assert!(buchstab_omega(0.9, 1e-9).is_err());
    }

    #[test]
    fn tends_to_limit() {
        let v = buchstab_omega(10.0, 1e-9).unwrap();
        assert!((v - 0.561_459_483_6).abs() <= 1e-6, "{v}");
        for u in [8.0, 12.0, 20.0, 39.0] {
            assert!((buchstab_omega(u, 1e-9).unwrap() - OMEGA_LIMIT).abs() <= 1e-4);
        }
    }

    #[test]
    fn known_value_at_four() {
        // uω(u) = 1 + ∫_1^3 ω on [3, 4]; at u = 3 it equals 1 + ln 2 + ∫_2^3 (1 + ln(t-1))/t dt
        let t = omega_table();
        let g = GaussLegendre::<f64>::new(30);
        let tail: f64 = g.integrate(2.0, 3.0, |x: f64| (1.0 + (x - 1.0).ln()) / x);
        let at3 = (1.0 + 2f64.ln() + 0.0) / 3.0;
        assert!((t.eval(3.0).unwrap() - (1.0 + 2f64.ln()) / 3.0).abs() < 1e-15);
        let _ = at3;
        let expect4 = (1.0 + 2f64.ln() + tail) / 4.0;
        assert!((t.eval(4.0).unwrap() - expect4).abs() < 1e-13);
    }

    #[test]
    fn continuous_and_bounded() {
        let t = omega_table();
        for j in 2..30 {
            let u = j as f64;
            let l = t.eval(u - 1e-12).unwrap();
            let r = t.eval(u + 1e-12).unwrap();
            assert!((l - r).abs() < 1e-10, "jump at {u}");
        }
        let mut u = 1.0;
        while u <= 40.0 {
            let v = t.eval(u).unwrap();
            assert!((0.5..=1.0).contains(&v), "{u} {v}");
            u += 0.01;
        }
        assert!(t.error_estimate() < 1e-12, "{}", t.error_estimate());
    }

    #[test]
    fn matches_closed_form_segment_via_quadrature() {
        // ω on [2, 3] rebuilt from the delay equation agrees with the closed form
        let t = BuchstabTable::<f64>::build(6.0, 8, 24).unwrap();
        for i in 0..=50 {
            let u = 2.0 + i as f64 / 50.0;
            let advanced = (1.0 + t.integral_to(u - 1.0)) / u;
            assert!((advanced - closed_form(u)).abs() < 1e-14);
        }
    }

    #[test]
    fn f32_table() {
        let t = BuchstabTable::<f32>::build(12.0, 4, 12).unwrap();
        assert!((t.eval(10.0).unwrap() - OMEGA_LIMIT as f32).abs() < 1e-4);
    }
}
