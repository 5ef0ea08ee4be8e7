//! Pointwise evaluators for degree distributions.
//!
//! A truncated series is enough to read off coefficients, but several of the
//! constructed distributions decay only polynomially, so their truncated sums
//! are far from the true function near `x = 1`. Every [`DegreeDist`] therefore
//! carries a [`Profile`]: an evaluator for both the node-perspective function
//! `N(x)` and the edge-perspective function `e(x) = N'(x) / N'(1)`, plus the
//! mean node degree `N'(1)`. Profiles compose the same way the distributions
//! do (tilting, untilting, matching), so closed forms survive every transform.
//!
//! [`DegreeDist`]: super::DegreeDist

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Node/edge evaluator pair for one side of a Tanner graph.
pub trait Profile: Send + Sync + fmt::Debug {
    /// Node-perspective function `N(x)`.
    fn node(&self, x: f64) -> f64;

    /// Edge-perspective function `e(x) = N'(x) / N'(1)`.
    fn edge(&self, x: f64) -> f64;

    /// `N'(1)`, the average node degree.
    fn mean_degree(&self) -> f64;

    /// `(N(x), e(x))` in one call; overridden where the two share work.
    fn node_edge(&self, x: f64) -> (f64, f64) {
        (self.node(x), self.edge(x))
    }

    /// `e` as a ratio of polynomials, when one is known exactly.
    fn rational_edge(&self) -> Option<RationalForm> {
        None
    }

    /// `N` as a polynomial, when it is one.
    fn polynomial_node(&self) -> Option<Vec<f64>> {
        None
    }
}

pub type SharedProfile = Arc<dyn Profile>;

/// `num(x) / den(x)` with polynomial coefficient vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalForm {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut v: Vec<f64>) -> Vec<f64> {
    while v.len() > 1 && v.last() == Some(&0.0) {
        v.pop();
    }
    v
}

/// Profile backed by truncated series; exact for polynomials.
#[derive(Debug, Clone)]
pub struct SeriesProfile {
    node: Vec<f64>,
    edge: Vec<f64>,
    mean: f64,
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

impl SeriesProfile {
    pub fn new(node: PowerSeries, edge: PowerSeries, mean: f64) -> Self {
        Self { node: trim(node.into_coeffs()), edge: trim(edge.into_coeffs()), mean }
    }
}

impl Profile for SeriesProfile {
    fn node(&self, x: f64) -> f64 {
        horner(&self.node, x)
    }

    fn edge(&self, x: f64) -> f64 {
        horner(&self.edge, x)
    }

    fn mean_degree(&self) -> f64 {
        self.mean
    }

    fn rational_edge(&self) -> Option<RationalForm> {
        Some(RationalForm { num: self.edge.clone(), den: vec![1.0] })
    }

    fn polynomial_node(&self) -> Option<Vec<f64>> {
        Some(self.node.clone())
    }
}

/// The self-matched pair `e(x) = (1-b)x / (1-bx)` with node form
/// `N(x) = (bx + ln(1-bx)) / (b + ln(1-b))`.
#[derive(Debug, Clone, Copy)]
pub struct GeometricProfile {
    b: f64,
    norm: f64,
}

impl GeometricProfile {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::Domain(format!("geometric parameter b must lie in (0, 1), got {b}")));
        }
        Ok(Self { b, norm: b + (-b).ln_1p() })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `b + ln(1 - b)`, negative on `(0, 1)`.
    pub fn log_norm(&self) -> f64 {
        self.norm
    }

    /// `bx + ln(1 - bx)` without cancellation for small `bx`.
    fn log_numerator(&self, x: f64) -> f64 {
        let t = self.b * x;
        if t.abs() < 0.05 {
            // -Σ_{k≥2} t^k / k
            let mut sum = 0.0;
            let mut pow = t * t;
            for k in 2..40 {
                sum -= pow / k as f64;
                pow *= t;
            }
            sum
        } else {
            t + (-t).ln_1p()
        }
    }
}

impl Profile for GeometricProfile {
    fn node(&self, x: f64) -> f64 {
        self.log_numerator(x) / self.norm
    }

    fn edge(&self, x: f64) -> f64 {
        (1.0 - self.b) * x / (1.0 - self.b * x)
    }

    fn mean_degree(&self) -> f64 {
        -self.b * self.b / ((1.0 - self.b) * self.norm)
    }

    fn rational_edge(&self) -> Option<RationalForm> {
        Some(RationalForm { num: vec![0.0, 1.0 - self.b], den: vec![1.0, -self.b] })
    }
}

/// Graph-reduction tilt with weight `q`:
/// `Ñ = qN / (1 - (1-q)N)` and `ẽ = q² e / (1 - (1-q)N)²`.
///
/// Bit nodes tilt with `q = p`, check nodes with `q = 1 - p`.
#[derive(Debug, Clone)]
pub struct TiltedProfile {
    inner: SharedProfile,
    q: f64,
}

impl TiltedProfile {
    pub fn new(inner: SharedProfile, q: f64) -> Self {
        Self { inner, q }
    }
}

impl Profile for TiltedProfile {
    fn node(&self, x: f64) -> f64 {
        self.node_edge(x).0
    }

    fn edge(&self, x: f64) -> f64 {
        self.node_edge(x).1
    }

    fn node_edge(&self, x: f64) -> (f64, f64) {
        let (n, e) = self.inner.node_edge(x);
        let d = 1.0 - (1.0 - self.q) * n;
        (self.q * n / d, self.q * self.q * e / (d * d))
    }

    fn mean_degree(&self) -> f64 {
        self.inner.mean_degree() / self.q
    }

    fn rational_edge(&self) -> Option<RationalForm> {
        let inner = self.inner.rational_edge()?;
        let node = self.inner.polynomial_node()?;
        let mut d: Vec<f64> = node.iter().map(|c| -(1.0 - self.q) * c).collect();
        if d.is_empty() {
            d.push(0.0);
        }
        d[0] += 1.0;
        let dd = poly_mul(&d, &d);
        Some(RationalForm {
            num: inner.num.iter().map(|c| c * self.q * self.q).collect(),
            den: trim(poly_mul(&inner.den, &dd)),
        })
    }
}

/// Inverse of [`TiltedProfile`]: `N = Ñ / (q + (1-q)Ñ)`, `e = ẽ / (q + (1-q)Ñ)²`.
#[derive(Debug, Clone)]
pub struct UntiltedProfile {
    inner: SharedProfile,
    q: f64,
}

impl UntiltedProfile {
    pub fn new(inner: SharedProfile, q: f64) -> Self {
        Self { inner, q }
    }
}

impl Profile for UntiltedProfile {
    fn node(&self, x: f64) -> f64 {
        self.node_edge(x).0
    }

    fn edge(&self, x: f64) -> f64 {
        self.node_edge(x).1
    }

    fn node_edge(&self, x: f64) -> (f64, f64) {
        let (n, e) = self.inner.node_edge(x);
        let d = self.q + (1.0 - self.q) * n;
        (n / d, e / (d * d))
    }

    fn mean_degree(&self) -> f64 {
        self.q * self.inner.mean_degree()
    }
}

/// The matched partner `Te(x) = 1 - e⁻¹(1 - x)`, evaluated by bisection.
///
/// The node form follows from integrating the inverse function:
/// `∫_0^x Te = x·v - v + (1 - N(1 - v)) / N'(1)` with `v = Te(x)`, and
/// `∫_0^1 Te = ∫_0^1 e`, so the mean degree is unchanged.
#[derive(Debug, Clone)]
pub struct MatchedProfile {
    inner: SharedProfile,
}

/// Grid size for the monotonicity precondition.
pub const MONOTONE_GRID: usize = 1024;
const MONOTONE_TOL: f64 = 1e-12;

impl MatchedProfile {
    /// Wraps `inner` after checking that its edge function increases on `[0, 1]`.
    pub fn new(inner: SharedProfile) -> Result<Self> {
        check_monotone(|x| inner.edge(x))?;
        Ok(Self { inner })
    }

    /// Solves `e(t) = target` for `t ∈ [0, 1]`.
    fn inverse(&self, target: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        if target <= self.inner.edge(0.0) {
            return 0.0;
        }
        if target >= self.inner.edge(1.0) {
            return 1.0;
        }
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.inner.edge(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl Profile for MatchedProfile {
    fn node(&self, x: f64) -> f64 {
        self.node_edge(x).0
    }

    fn edge(&self, x: f64) -> f64 {
        1.0 - self.inverse(1.0 - x)
    }

    fn node_edge(&self, x: f64) -> (f64, f64) {
        let v = self.edge(x);
        let s = self.inner.mean_degree();
        let node = 1.0 - self.inner.node(1.0 - v) - s * v * (1.0 - x);
        (node, v)
    }

    fn mean_degree(&self) -> f64 {
        self.inner.mean_degree()
    }
}

/// Checks `f(x_{i+1}) ≥ f(x_i) - 1e-12` on a uniform grid and `f(1) > f(0)`.
pub fn check_monotone(f: impl Fn(f64) -> f64) -> Result<()> {
    let mut prev = f(0.0);
    let first = prev;
    for i in 1..=MONOTONE_GRID {
        let x = i as f64 / MONOTONE_GRID as f64;
        let v = f(x);
        if !v.is_finite() || v < prev - MONOTONE_TOL {
            return Err(Error::NotMonotone(x));
        }
        prev = v;
    }
    if prev <= first {
        return Err(Error::NotMonotone(1.0));
    }
    Ok(())
}

/// A base profile plus a polynomial perturbation of its edge coefficients.
///
/// Used when a stored coefficient list differs from the regenerated analytic
/// distribution: the difference is carried as a polynomial on top of the
/// exact function, so the stored coefficients are what gets evaluated.
#[derive(Debug, Clone)]
pub struct CorrectedProfile {
    base: SharedProfile,
    delta_edge: PowerSeries,
    delta_node: PowerSeries,
}

impl CorrectedProfile {
    pub fn new(base: SharedProfile, delta_edge: PowerSeries) -> Self {
        let delta_node = delta_edge.antiderivative().scale(base.mean_degree());
        Self { base, delta_edge, delta_node }
    }
}

impl Profile for CorrectedProfile {
    fn node(&self, x: f64) -> f64 {
        self.base.node(x) + self.delta_node.eval(x)
    }

    fn edge(&self, x: f64) -> f64 {
        self.base.edge(x) + self.delta_edge.eval(x)
    }

    fn node_edge(&self, x: f64) -> (f64, f64) {
        let (n, e) = self.base.node_edge(x);
        (n + self.delta_node.eval(x), e + self.delta_edge.eval(x))
    }

    fn mean_degree(&self) -> f64 {
        self.base.mean_degree()
    }
}
