//! Truncated formal power series over `f64`.
//!
//! A [`PowerSeries`] holds the coefficients `c_0 .. c_{N-1}` of a real power
//! series; `N` is its precision. All arithmetic is truncated to precision and
//! binary operations on operands of different precision truncate to the
//! smaller one.
//!
//! Besides ring arithmetic the module provides the two inversion primitives the
//! degree-distribution algebra rests on: [`PowerSeries::reversion`] (the
//! compositional inverse) and [`solve_implicit`], which finds the series root
//! `y(z)` of a polynomial equation `Σ_j a_j(z) y^j = 0`. The latter is how
//! inverses of rational functions are expanded without composing with a
//! series whose coefficients grow geometrically.

mod lambert;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use lambert::lambert_w0;

/// Default number of coefficients carried by the constructions.
pub const DEFAULT_PRECISION: usize = 512;

/// Non-negativity tolerance: coefficients in `(-NEG_TOL, 0)` count as zero.
pub const NEG_TOL: f64 = 1e-11;

/// A truncated real power series `Σ_{k<N} c_k x^k`.
#[derive(Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.coeffs.len().min(8);
        write!(f, "PowerSeries(N={}, {:?}", self.coeffs.len(), &self.coeffs[..shown])?;
        if shown < self.coeffs.len() {
            write!(f, " ..")?;
        }
        write!(f, ")")
    }
}

impl PowerSeries {
    /// Wraps a coefficient vector. Fails on an empty vector or a non-finite entry.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a power series needs at least one coefficient".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { coeffs })
    }

    /// Copies `coeffs` into a series of precision `n`, padding with zeros or truncating.
    pub fn from_slice(coeffs: &[f64], n: usize) -> Result<Self> {
        let mut v = vec![0.0; n.max(1)];
        for (dst, src) in v.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Self::new(v)
    }

    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![0.0; n.max(1)] }
    }

    pub fn constant(c: f64, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    pub fn one(n: usize) -> Self {
        Self::constant(1.0, n)
    }

    /// `c·x^k` at precision `n` (zero if `k >= n`).
    pub fn monomial(k: usize, c: f64, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k < s.coeffs.len() {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity series `x`.
    pub fn x(n: usize) -> Self {
        Self::monomial(1, 1.0, n)
    }

    /// Geometric series `Σ_{k≥0} r^k x^k`.
    pub fn geometric(r: f64, n: usize) -> Self {
        let mut s = Self::zero(n);
        let mut v = 1.0;
        for c in s.coeffs.iter_mut() {
            *c = v;
            v *= r;
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient `k`, zero beyond precision.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Index of the highest non-zero coefficient, if any.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// Same series at precision `n` (truncated or zero padded).
    pub fn with_precision(&self, n: usize) -> Self {
        let n = n.max(1);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, 0.0);
        Self { coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Coefficient-wise sum, truncated to the smaller precision.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        Self { coeffs: (0..n).map(|i| self.coeffs[i] + other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        Self { coeffs: (0..n).map(|i| self.coeffs[i] - other.coeffs[i]).collect() }
    }

    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let mut out = vec![0.0; n];
        let b = &other.coeffs[..n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (o, &bj) in out[i..].iter_mut().zip(b) {
                *o += a * bj;
            }
        }
        Self { coeffs: out }
    }

    /// Series quotient `self / divisor`.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let b0 = divisor.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.precision().min(divisor.precision());
        let b = &divisor.coeffs[..n];
        let mut q = vec![0.0; n];
        for i in 0..n {
            let mut s = self.coeffs[i];
            for j in 0..i {
                s -= q[j] * b[i - j];
            }
            q[i] = s / b0;
        }
        Self::new(q)
    }

    /// Formal derivative. The top coefficient (which would need `c_N`) is zero.
    pub fn derivative(&self) -> Self {
        let n = self.precision();
        let mut out = vec![0.0; n];
        for k in 1..n {
            out[k - 1] = k as f64 * self.coeffs[k];
        }
        Self { coeffs: out }
    }

    /// Antiderivative vanishing at 0, truncated to the same precision.
    pub fn antiderivative(&self) -> Self {
        let n = self.precision();
        let mut out = vec![0.0; n];
        for k in 1..n {
            out[k] = self.coeffs[k - 1] / k as f64;
        }
        Self { coeffs: out }
    }

    /// `∫_0^x f / ∫_0^1 f`, with the normalizer taken from the truncated series.
    pub fn integrate_normalized(&self) -> Result<Self> {
        let anti = self.antiderivative();
        let total = anti.sum();
        self.integrate_with_total(total)
    }

    /// `∫_0^x f / total` for a caller-supplied value of `∫_0^1 f`.
    pub fn integrate_with_total(&self, total: f64) -> Result<Self> {
        if total == 0.0 || !total.is_finite() {
            return Err(Error::ZeroIntegral);
        }
        Ok(self.antiderivative().scale(1.0 / total))
    }

    /// `f'(x) / f'(1)`, with `f'(1)` taken from the truncated series.
    pub fn differentiate_normalized(&self) -> Result<Self> {
        let d = self.derivative();
        let slope = self.derivative_at_one();
        Self::normalize_derivative(d, slope)
    }

    /// `f'(x) / slope` for a caller-supplied value of `f'(1)`.
    pub fn differentiate_with_slope(&self, slope: f64) -> Result<Self> {
        Self::normalize_derivative(self.derivative(), slope)
    }

    fn normalize_derivative(d: Self, slope: f64) -> Result<Self> {
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::ZeroDerivativeAtOne);
        }
        Ok(d.scale(1.0 / slope))
    }

    /// `Σ k c_k`, the derivative of the truncated series at 1.
    pub fn derivative_at_one(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| k as f64 * c).sum()
    }

    /// Horner evaluation of the truncated series.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value at `x = 1`, summed from the smallest coefficient up.
    pub fn sum(&self) -> f64 {
        self.coeffs.iter().rev().sum()
    }

    /// Composition `f(g(x))`; `g` must vanish at 0.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let g0 = g.coeffs[0];
        if g0.abs() > 1e-14 {
            return Err(Error::NonzeroConstantTerm(g0));
        }
        let n = self.precision().min(g.precision());
        let mut g = g.with_precision(n);
        g.coeffs[0] = 0.0;
        Ok(horner_series(&self.coeffs[..n], &g))
    }

    /// Compositional inverse: the `g` with `f(g(x)) = g(f(x)) = x`.
    ///
    /// Requires `f(0) = 0` and `f'(0) ≠ 0`. Newton iteration on series,
    /// doubling the working precision each step.
    pub fn reversion(&self) -> Result<Self> {
        if self.coeffs[0].abs() > 1e-14 {
            return Err(Error::NonzeroConstantTerm(self.coeffs[0]));
        }
        let n = self.precision();
        // f(y) - z = 0 with y the unknown; coefficient j of the y-polynomial is
        // the constant f_j, except a_0 = -z.
        let mut equation: Vec<PowerSeries> =
            self.coeffs.iter().map(|&c| PowerSeries::constant(c, n)).collect();
        equation[0] = PowerSeries::x(n).scale(-1.0);
        if n < 2 {
            return Ok(PowerSeries::zero(n));
        }
        solve_implicit(&equation)
    }

    /// Coefficients of `f(1 - y)` when `f` is read as the polynomial given by
    /// its coefficients. Exact re-expansion about `x = 1` for polynomials.
    pub fn reflect(&self) -> Self {
        let mut a = self.coeffs.clone();
        let d = a.len();
        // Taylor shift p(x) -> p(x + 1) by repeated synthetic division.
        for i in 0..d {
            for j in (i..d.saturating_sub(1)).rev() {
                a[j] += a[j + 1];
            }
        }
        for (j, c) in a.iter_mut().enumerate() {
            if j % 2 == 1 {
                *c = -*c;
            }
        }
        Self { coeffs: a }
    }

    /// Maximum absolute coefficient difference over the common precision.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `Σ_j a_j g^j` by Horner's rule with series coefficients.
fn horner_series(a: &[f64], g: &PowerSeries) -> PowerSeries {
    let n = g.precision();
    let mut r = PowerSeries::zero(n);
    for &c in a.iter().rev() {
        r = r.mul(g);
        r.coeffs[0] += c;
    }
    r
}

fn horner_poly(a: &[PowerSeries], g: &PowerSeries) -> PowerSeries {
    let n = g.precision();
    let mut r = PowerSeries::zero(n);
    for c in a.iter().rev() {
        r = r.mul(g).add(&c.with_precision(n));
    }
    r
}

/// Series root of a polynomial equation in `y` with series coefficients.
///
/// `equation[j]` is the coefficient `a_j(z)` of `y^j` in
/// `Φ(y, z) = Σ_j a_j(z) y^j`. Returns the unique series `y(z)` with
/// `y(0) = 0` and `Φ(y(z), z) = 0`, which exists when `Φ(0, 0) = 0` and
/// `∂Φ/∂y(0, 0) ≠ 0`. The result has the precision of `equation[0]`.
pub fn solve_implicit(equation: &[PowerSeries]) -> Result<PowerSeries> {
    let n = equation.first().map(PowerSeries::precision).ok_or(Error::ZeroLinearTerm)?;
    if equation.len() < 2 {
        return Err(Error::ZeroLinearTerm);
    }
    let scale = equation.iter().map(|a| a.coeff(0).abs()).fold(0.0, f64::max).max(1.0);
    let linear = equation[1].coeff(0);
    if linear.abs() <= 1e-14 * scale {
        return Err(Error::ZeroLinearTerm);
    }
    if equation[0].coeff(0).abs() > 1e-10 * scale {
        return Err(Error::NonzeroConstantTerm(equation[0].coeff(0)));
    }
    let derivative: Vec<PowerSeries> =
        equation.iter().enumerate().skip(1).map(|(j, a)| a.scale(j as f64)).collect();

    let mut y = PowerSeries::zero(n);
    if n < 2 {
        return Ok(y);
    }
    // First-order term from the implicit function theorem.
    y.coeffs[1] = -equation[0].coeff(1) / linear;

    let mut m = 2usize;
    loop {
        let target = (2 * m).min(n);
        let yt = y.with_precision(target);
        let trunc = |a: &[PowerSeries]| a.iter().map(|c| c.with_precision(target)).collect::<Vec<_>>();
        let residual = horner_poly(&trunc(equation), &yt);
        let slope = horner_poly(&trunc(&derivative), &yt);
        let step = residual.div(&slope)?;
        y = yt.sub(&step);
        y.coeffs[0] = 0.0;
        if target == n {
            if m == n {
                break;
            }
            m = n;
        } else {
            m = target;
        }
    }
    Ok(y)
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: Self) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: Self) -> PowerSeries {
        PowerSeries::sub(self, rhs)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: Self) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(-1.0)
    }
}
