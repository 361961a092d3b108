//! Quadrature engines.
//!
//! Semi-infinite integrals use the rational map `x = s·t/(1-t)` of `[0, 1)`
//! onto `[0, ∞)` with Gauss–Legendre nodes, doubling the node count until the
//! estimate stabilises. Periodic integrals use the plain trapezoid rule,
//! which is spectrally accurate for smooth 2π-periodic integrands.
//!
//! All reductions are pairwise sums in index order, so results are
//! bit-reproducible at fixed node counts.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::tensor::CTensor3;

/// Node counts, mapping scale and tolerances for the frequency (ξ),
/// transverse-wavevector (k∥) and azimuthal (φ) integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Base Gauss–Legendre node count for the ξ integral.
    pub xi_nodes: usize,
    /// Base Gauss–Legendre node count for the k∥ integral.
    pub kpar_nodes: usize,
    /// Base trapezoid node count for the φ integral.
    pub phi_nodes: usize,
    /// Mapping scale for the ξ integral; `None` selects the dominant
    /// transition frequency of the molecules involved.
    pub map_scale: Option<f64>,
    /// Relative tolerance for refinement stopping.
    pub rel_tol: f64,
    /// Maximum number of node-doubling refinements.
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            xi_nodes: 32,
            kpar_nodes: 32,
            phi_nodes: 32,
            map_scale: None,
            rel_tol: 1e-6,
            max_refinements: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.xi_nodes < 2 || self.kpar_nodes < 2 {
            return Err(Error::InvalidQuadratureSpec {
                reason: "node counts must be at least 2".into(),
            });
        }
        if self.phi_nodes < 4 {
            return Err(Error::InvalidQuadratureSpec {
                reason: "phi node count must be at least 4".into(),
            });
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidQuadratureSpec {
                reason: "relative tolerance must be positive".into(),
            });
        }
        if let Some(s) = self.map_scale {
            if !(s > 0.0) {
                return Err(Error::InvalidQuadratureSpec {
                    reason: "map scale must be positive".into(),
                });
            }
        }
        Ok(())
    }

    /// Rule for the ξ integral; `auto_scale` is used unless the spec pins a scale.
    pub fn xi_rule(&self, auto_scale: f64) -> AxisRule {
        AxisRule {
            nodes: self.xi_nodes,
            scale: self.map_scale.unwrap_or(auto_scale),
            rel_tol: self.rel_tol,
            max_refinements: self.max_refinements,
        }
    }

    /// Rule for the k∥ integral at the given mapping scale.
    pub fn kpar_rule(&self, scale: f64) -> AxisRule {
        AxisRule {
            nodes: self.kpar_nodes,
            scale,
            rel_tol: self.rel_tol,
            max_refinements: self.max_refinements,
        }
    }
}

/// One semi-infinite integration axis.
#[derive(Clone, Copy, Debug)]
pub struct AxisRule {
    pub nodes: usize,
    pub scale: f64,
    pub rel_tol: f64,
    pub max_refinements: u32,
}

/// Integral value with the relative error estimated from the last refinement.
#[derive(Clone, Copy, Debug)]
pub struct Estimate<V> {
    pub value: V,
    pub rel_error: f64,
}

/// Values a quadrature can accumulate: closed under addition and real
/// scaling, with a norm for error control.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    /// Max-abs norm.
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        (*self).is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl QuadValue for CTensor3 {
    fn zero() -> Self {
        CTensor3::ZERO
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        self.max_abs()
    }
    fn is_finite(&self) -> bool {
        CTensor3::is_finite(*self)
    }
}

/// Pairwise sum in index order.
pub(crate) fn pairwise_sum<V: QuadValue>(xs: &[V]) -> V {
    match xs.len() {
        0 => V::zero(),
        1 => xs[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]).add(pairwise_sum(&xs[mid..]))
        }
    }
}

type GlRule = (Vec<f64>, Vec<f64>);

static GL_CACHE: LazyLock<Mutex<HashMap<usize, Arc<GlRule>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Gauss–Legendre nodes and weights on [-1, 1], cached per node count.
pub(crate) fn gauss_legendre(n: usize) -> Arc<GlRule> {
    let mut cache = GL_CACHE.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(compute_gauss_legendre(n)))
        .clone()
}

/// Newton iteration on the Legendre recurrence.
fn compute_gauss_legendre(n: usize) -> GlRule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // cos() above enumerates roots in descending order; flip to ascending.
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrate `f` over `(0, ∞)`.
///
/// The integrand must be finite on the open interval and decay fast enough
/// for the mapped integral to converge (at least exponentially or as an
/// inverse power ≥ 2). Node counts double until the estimate changes by less
/// than `rule.rel_tol`; running out of refinements is an explicit failure
/// carrying the last estimate and the last relative change.
pub fn integrate_semi_infinite<V: QuadValue>(
    mut f: impl FnMut(f64) -> Result<V>,
    rule: &AxisRule,
) -> Result<Estimate<V>> {
    if rule.nodes < 2 {
        return Err(Error::InvalidQuadratureSpec {
            reason: "semi-infinite rule needs at least 2 nodes".into(),
        });
    }
    if !(rule.scale > 0.0 && rule.scale.is_finite()) {
        return Err(Error::InvalidQuadratureSpec {
            reason: format!("semi-infinite map scale must be positive, got {}", rule.scale),
        });
    }
    let mut nodes = rule.nodes;
    let mut prev: Option<V> = None;
    let mut last_rel = f64::INFINITY;
    for _ in 0..=rule.max_refinements {
        let value = semi_infinite_pass(&mut f, nodes, rule.scale)?;
        if let Some(p) = prev {
            let delta = value.add(p.scale(-1.0)).norm();
            let rel = delta / value.norm().max(f64::MIN_POSITIVE);
            if rel <= rule.rel_tol {
                return Ok(Estimate {
                    value,
                    rel_error: rel,
                });
            }
            last_rel = rel;
        }
        prev = Some(value);
        nodes *= 2;
    }
    Err(Error::QuadratureNonConvergent {
        last_norm: prev.map(|v| v.norm()).unwrap_or(f64::NAN),
        rel_change: last_rel,
        tol: rule.rel_tol,
        refinements: rule.max_refinements,
    })
}

/// A single fixed-node pass of the mapped rule, for callers running their
/// own refinement loop.
pub(crate) fn single_pass_semi_infinite<V: QuadValue>(
    mut f: impl FnMut(f64) -> Result<V>,
    nodes: usize,
    scale: f64,
) -> Result<V> {
    semi_infinite_pass(&mut f, nodes, scale)
}

fn semi_infinite_pass<V: QuadValue>(
    f: &mut impl FnMut(f64) -> Result<V>,
    nodes: usize,
    scale: f64,
) -> Result<V> {
    let rule = gauss_legendre(nodes);
    let (xs, ws) = (&rule.0, &rule.1);
    let mut contributions = Vec::with_capacity(nodes);
    for (&x, &w) in xs.iter().zip(ws.iter()) {
        let t = 0.5 * (x + 1.0);
        let one_minus = 1.0 - t;
        let u = scale * t / one_minus;
        let jacobian = 0.5 * scale / (one_minus * one_minus);
        let value = f(u)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteSample {
                x: u,
                context: "semi-infinite integrand",
            });
        }
        contributions.push(value.scale(w * jacobian));
    }
    Ok(pairwise_sum(&contributions))
}

/// Trapezoid rule for a smooth 2π-periodic integrand on `[0, 2π)`.
pub fn integrate_periodic<V: QuadValue>(
    mut f: impl FnMut(f64) -> V,
    nodes: usize,
) -> Result<V> {
    if nodes < 4 {
        return Err(Error::TooFewPeriodicNodes { nodes });
    }
    let h = TAU / nodes as f64;
    let mut contributions = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let phi = h * j as f64;
        let value = f(phi);
        if !value.is_finite() {
            return Err(Error::NonFiniteSample {
                x: phi,
                context: "periodic integrand",
            });
        }
        contributions.push(value.scale(h));
    }
    Ok(pairwise_sum(&contributions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn rule(nodes: usize, scale: f64) -> AxisRule {
        AxisRule {
            nodes,
            scale,
            rel_tol: 1e-12,
            max_refinements: 10,
        }
    }

    #[test]
    fn exponential_integral() {
        let est = integrate_semi_infinite(|x| Ok((-x).exp()), &rule(16, 1.0)).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn gamma_three() {
        let est = integrate_semi_infinite(|x| Ok(x * x * (-x).exp()), &rule(16, 1.0)).unwrap();
        assert_abs_diff_eq!(est.value, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn retarded_kernel_integral() {
        // Oracle: term-by-term gamma functions,
        // ∫ e^{-2x}(3 + 6x + 4x²) dx = 3/2 + 6/4 + 4·2/8 = 4.
        let est = integrate_semi_infinite(
            |x| Ok((-2.0 * x).exp() * (3.0 + 6.0 * x + 4.0 * x * x)),
            &rule(16, 1.0),
        )
        .unwrap();
        assert_abs_diff_eq!(est.value, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn inverse_power_tail() {
        // ∫ dx/(1+x²) = π/2 decays only as x⁻²; the rational map handles it.
        let est = integrate_semi_infinite(|x| Ok(1.0 / (1.0 + x * x)), &rule(16, 1.0)).unwrap();
        assert_abs_diff_eq!(est.value, PI / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let err = integrate_semi_infinite(
            |x| Ok(if x > 1.0 { f64::NAN } else { 1.0 }),
            &rule(16, 1.0),
        )
        .unwrap_err();
        match err {
            Error::NonFiniteSample { x, .. } => assert!(x > 1.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_convergence_carries_last_estimate() {
        let r = AxisRule {
            nodes: 2,
            scale: 1.0,
            rel_tol: 1e-30,
            max_refinements: 1,
        };
        let err = integrate_semi_infinite(|x| Ok((-x).exp() * x.sin().powi(2)), &r).unwrap_err();
        match err {
            Error::QuadratureNonConvergent { last_norm, .. } => assert!(last_norm.is_finite()),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn cosine_squared_over_circle() {
        let v = integrate_periodic(|phi| phi.cos().powi(2), 16).unwrap();
        assert_abs_diff_eq!(v, PI, epsilon = 1e-12);
    }

    #[test]
    fn sine_cosine_over_circle() {
        let v = integrate_periodic(|phi| phi.sin() * phi.cos(), 16).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exp_cos_matches_bessel_series() {
        // Oracle: 2π·I₀(1) with I₀ from its power series Σ (x/2)^{2k} / (k!)².
        let mut i0 = 0.0;
        let mut term = 1.0f64;
        for k in 0..25 {
            if k > 0 {
                term *= 0.25 / (k as f64 * k as f64);
            }
            i0 += term;
        }
        let expected = TAU * i0;
        let v = integrate_periodic(|phi| phi.cos().exp(), 32).unwrap();
        assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(v, 7.95493, epsilon = 1e-5);
    }

    #[test]
    fn too_few_periodic_nodes_rejected() {
        assert!(matches!(
            integrate_periodic(|_| 1.0, 3),
            Err(Error::TooFewPeriodicNodes { nodes: 3 })
        ));
    }

    #[test]
    fn quadrature_is_linear() {
        let f = |x: f64| (-x).exp();
        let g = |x: f64| x * (-1.3 * x).exp();
        let r = rule(24, 1.0);
        let fa = integrate_semi_infinite(|x| Ok(f(x)), &r).unwrap().value;
        let ga = integrate_semi_infinite(|x| Ok(g(x)), &r).unwrap().value;
        let combo = integrate_semi_infinite(|x| Ok(2.5 * f(x) - 0.7 * g(x)), &r)
            .unwrap()
            .value;
        assert_abs_diff_eq!(combo, 2.5 * fa - 0.7 * ga, epsilon = 1e-11);
    }

    #[test]
    fn doubling_nodes_does_not_worsen_error() {
        // Compare consecutive-level differences directly.
        let f = |x: f64| Ok((-x).exp() * (1.0 + x).ln());
        let exact = integrate_semi_infinite(f, &rule(64, 1.0)).unwrap().value;
        let coarse = semi_infinite_pass(&mut { f }, 16, 1.0).unwrap();
        let fine = semi_infinite_pass(&mut { f }, 32, 1.0).unwrap();
        assert!((fine - exact).abs() <= (coarse - exact).abs() + 1e-12);
    }
}
