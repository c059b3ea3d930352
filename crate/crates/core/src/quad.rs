//! Gauss-Legendre quadrature, fixed and adaptive.
//!
//! The adaptive driver works on a global panel list: every panel carries a
//! coarse (`n`-point) and fine (`2n`-point) estimate, the fine value is
//! kept and `|fine - coarse|` is the panel's error estimate. The panel with
//! the largest estimate is bisected until the summed estimate drops below
//! the tolerance or the evaluation budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(&self) -> T;
    fn to_f64_parts(&self) -> (f64, f64);
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(&self) -> T {
        self.abs()
    }
    fn to_f64_parts(&self) -> (f64, f64) {
        (self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
    fn to_f64_parts(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T: Real> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let nf = T::from_usize(n).unwrap();
        let half = T::of(0.5);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let i_f = T::from_usize(i + 1).unwrap();
            let mut x = (T::PI() * (i_f - T::of(0.25)) / (nf + half)).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::of(4.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let c = (a + b) * T::of(0.5);
        let h = (b - a) * T::of(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        let mut acc = V::zero();
        for (x, w) in self.mapped(a, b) {
            acc = acc + f(x) * w;
        }
        acc
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V, T> {
    pub value: V,
    /// Sum of per-panel `|fine - coarse|` estimates.
    pub error: T,
    pub evaluations: usize,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<V, T> {
    a: T,
    b: T,
    value: V,
    error: T,
}

struct ByError<V, T>(Panel<V, T>);

impl<V, T: Real> PartialEq for ByError<V, T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<V, T: Real> Eq for ByError<V, T> {}
impl<V, T: Real> PartialOrd for ByError<V, T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V, T: Real> Ord for ByError<V, T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .partial_cmp(&other.0.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Adaptive Gauss-Legendre integrator with an evaluation budget.
#[derive(Debug, Clone)]
pub struct Adaptive<T: Real> {
    coarse: GaussLegendre<T>,
    fine: GaussLegendre<T>,
    pub max_evaluations: usize,
    /// Panels narrower than this are never split again.
    pub min_width: T,
}

impl<T: Real> Adaptive<T> {
    pub fn new(order: usize, max_evaluations: usize) -> Self {
        Self {
            coarse: GaussLegendre::new(order),
            fine: GaussLegendre::new(2 * order),
            max_evaluations,
            min_width: T::epsilon() * T::of(64.0),
        }
    }

    fn evals_per_panel(&self) -> usize {
        self.coarse.len() + self.fine.len()
    }

    fn panel<V, F>(&self, a: T, b: T, f: &mut F) -> Panel<V, T>
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        let c: V = self.coarse.integrate(a, b, &mut *f);
        let fv: V = self.fine.integrate(a, b, &mut *f);
        Panel {
            a,
            b,
            value: fv,
            error: (fv - c).magnitude(),
        }
    }

    /// Integrate over `[a, b]`.
    pub fn integrate<V, F>(&self, a: T, b: T, tol: T, f: F) -> Result<QuadResult<V, T>>
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        self.integrate_pieces(&[a, b], tol, f)
    }

    /// Integrate over consecutive pieces `[b_0, b_1], [b_1, b_2], ...`,
    /// typically split at points where the integrand is not smooth.
    pub fn integrate_pieces<V, F>(&self, breaks: &[T], tol: T, mut f: F) -> Result<QuadResult<V, T>>
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in breaks.windows(2) {
            if w[1] > w[0] {
                heap.push(ByError(self.panel(w[0], w[1], &mut f)));
                evaluations += self.evals_per_panel();
            }
        }
        let mut frozen: Vec<Panel<V, T>> = Vec::new();
        loop {
            let total_err = heap
                .iter()
                .map(|p| p.0.error)
                .chain(frozen.iter().map(|p| p.error))
                .fold(T::zero(), |a, e| a + e);
            if total_err <= tol || heap.is_empty() {
                return Ok(finish(heap, frozen, evaluations));
            }
            if evaluations + 2 * self.evals_per_panel() > self.max_evaluations {
                let r = finish(heap, frozen, evaluations);
                return Err(Error::Budget {
                    estimate: r.value.to_f64_parts().0,
                    achieved: r.error.to_f64().unwrap_or(f64::NAN),
                });
            }
            let ByError(worst) = heap.pop().expect("non-empty");
            let mid = (worst.a + worst.b) * T::of(0.5);
            if worst.b - worst.a <= self.min_width * (worst.a.abs() + worst.b.abs() + T::one()) {
                frozen.push(worst);
                continue;
            }
            heap.push(ByError(self.panel(worst.a, mid, &mut f)));
            heap.push(ByError(self.panel(mid, worst.b, &mut f)));
            evaluations += 2 * self.evals_per_panel();
        }
    }
}

fn finish<V: QuadValue<T>, T: Real>(
    heap: BinaryHeap<ByError<V, T>>,
    frozen: Vec<Panel<V, T>>,
    evaluations: usize,
) -> QuadResult<V, T> {
    let mut panels: Vec<Panel<V, T>> = heap.into_iter().map(|p| p.0).chain(frozen).collect();
    // Sum in left-to-right order so results do not depend on heap layout.
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let mut value = V::zero();
    let mut error = T::zero();
    for p in &panels {
        value = value + p.value;
        error = error + p.error;
    }
    QuadResult {
        value,
        error,
        evaluations,
        panels: panels.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..30 {
            let g = GaussLegendre::<f64>::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::<f64>::new(5);
        // degree 9 is integrated exactly by the 5-point rule
        let v: f64 = g.integrate(0.0, 2.0, |x| x.powi(9));
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_handles_kink() {
        let q = Adaptive::<f64>::new(8, 100_000);
        let r = q.integrate(-1.0, 2.0, 1e-10, |x: f64| x.abs()).unwrap();
        assert!((r.value - 2.5).abs() < 1e-10);
        let r2 = q
            .integrate_pieces(&[-1.0, 0.0, 2.0], 1e-12, |x: f64| x.abs())
            .unwrap();
        assert!((r2.value - 2.5).abs() < 1e-13);
        assert!(r2.evaluations < r.evaluations);
    }

    #[test]
    fn budget_error_reports_estimate() {
        let q = Adaptive::<f64>::new(4, 40);
        let e = q.integrate(0.0, 1.0, 1e-14, |x: f64| (50.0 * x).sin()).unwrap_err();
        assert!(matches!(e, Error::Budget { .. }));
    }

    #[test]
    fn complex_integrand() {
        let q = Adaptive::<f64>::new(10, 100_000);
        let r = q
            .integrate(0.0, 1.0, 1e-12, |x: f64| Complex::new(0.0, std::f64::consts::TAU * x).exp())
            .unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn f32_rule() {
        let g = GaussLegendre::<f32>::new(8);
        let v: f32 = g.integrate(0.0, 1.0, |x| x * x);
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }
}
