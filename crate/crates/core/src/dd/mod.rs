//! Degree distributions and the transforms between them.
//!
//! A [`DegreeDist`] is a truncated power series tagged with its perspective
//! (node fractions `L, R` or edge fractions `λ, ρ`) and its side of the graph,
//! together with a [`Profile`] that evaluates the untruncated function.
//! [`DegreeDistPair`] couples a bit-side and a check-side distribution with an
//! ensemble family and the erasure probability it was designed for.
//!
//! The transforms here are the graph-reduction tilts, the matching operator
//! `Tf(x) = 1 - f⁻¹(1 - x)`, membership tests for the set of valid degree
//! distributions and for the set closed under matching, and the bit/check
//! symmetry swap.

mod json;
mod profile;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{solve_implicit, PowerSeries, NEG_TOL};

pub use json::{format_f64, ser_f64, ser_f64_vec, DdDocument};
pub use profile::{
    check_monotone, CorrectedProfile, GeometricProfile, MatchedProfile, Profile, RationalForm,
    SeriesProfile, SharedProfile, TiltedProfile, UntiltedProfile, MONOTONE_GRID,
};

/// Tolerance for `f(0) = 0`.
pub const ZERO_TOL: f64 = 1e-11;
/// Tolerance for `f(1) = 1` on the evaluated (untruncated) function.
pub const NORM_TOL: f64 = 1e-8;

/// Ensemble family of a degree-distribution pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ldpc,
    Ara,
    Nsira,
    Aldpc,
}

impl Family {
    /// Image under the bit/check symmetry swap.
    pub fn swapped(self) -> Self {
        match self {
            Family::Ldpc => Family::Ldpc,
            Family::Ara => Family::Ara,
            Family::Nsira => Family::Aldpc,
            Family::Aldpc => Family::Nsira,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Ldpc => "ldpc",
            Family::Ara => "ara",
            Family::Nsira => "nsira",
            Family::Aldpc => "aldpc",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ldpc" => Ok(Family::Ldpc),
            "ara" => Ok(Family::Ara),
            "nsira" => Ok(Family::Nsira),
            "aldpc" => Ok(Family::Aldpc),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perspective {
    Node,
    Edge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bit,
    Check,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Bit => Side::Check,
            Side::Check => Side::Bit,
        }
    }

    /// Tilt weight: bits tilt with `p`, checks with `1 - p`.
    pub fn tilt_weight(self, p: f64) -> f64 {
        match self {
            Side::Bit => p,
            Side::Check => 1.0 - p,
        }
    }
}

/// Negative coefficients found in a series scan.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    /// Number of coefficients examined.
    pub scanned: usize,
    /// Coefficients below `-NEG_TOL`.
    pub count: usize,
    /// First coefficient below `-NEG_TOL`, as `(index, value)`.
    pub first: Option<(usize, f64)>,
    /// Most negative coefficient below `-NEG_TOL`.
    pub min: Option<(usize, f64)>,
    /// Coefficients in `(-NEG_TOL, 0)`, treated as zero.
    pub clamped: usize,
}

impl NegativityReport {
    /// Scans the first `limit` coefficients (all of them if `limit` exceeds the precision).
    pub fn scan(series: &PowerSeries, limit: usize) -> Self {
        let mut r = Self::default();
        for (k, &c) in series.coeffs().iter().take(limit).enumerate() {
            r.scanned += 1;
            if c < -NEG_TOL {
                r.count += 1;
                if r.first.is_none() {
                    r.first = Some((k, c));
                }
                if r.min.map_or(true, |(_, m)| c < m) {
                    r.min = Some((k, c));
                }
            } else if c < 0.0 {
                r.clamped += 1;
            }
        }
        r
    }

    pub fn is_clean(&self) -> bool {
        self.count == 0
    }

    pub fn first_index(&self) -> Option<usize> {
        self.first.map(|(k, _)| k)
    }
}

/// A degree distribution: truncated coefficients plus an exact evaluator.
#[derive(Clone, Debug)]
pub struct DegreeDist {
    series: PowerSeries,
    perspective: Perspective,
    side: Side,
    profile: SharedProfile,
    clamped: usize,
}

fn clamp_tiny_negatives(series: PowerSeries, what: &str) -> (PowerSeries, usize) {
    let mut coeffs = series.into_coeffs();
    let mut clamped = 0;
    for c in coeffs.iter_mut() {
        if *c < 0.0 && *c > -NEG_TOL {
            *c = 0.0;
            clamped += 1;
        }
    }
    if clamped > 0 {
        log::debug!("{what}: clamped {clamped} coefficients in (-{NEG_TOL:e}, 0) to zero");
    }
    (PowerSeries::new(coeffs).expect("clamping keeps coefficients finite"), clamped)
}

impl DegreeDist {
    /// Distribution whose function is the given series read as a polynomial.
    pub fn from_series(series: PowerSeries, perspective: Perspective, side: Side) -> Result<Self> {
        let (series, clamped) = clamp_tiny_negatives(series, "degree distribution");
        let profile = match perspective {
            Perspective::Node => {
                let mean = series.derivative_at_one();
                let edge = series.differentiate_with_slope(mean)?;
                SeriesProfile::new(series.clone(), edge, mean)
            }
            Perspective::Edge => {
                let total = series.antiderivative().sum();
                let node = series.integrate_with_total(total)?;
                SeriesProfile::new(node, series.clone(), 1.0 / total)
            }
        };
        Ok(Self { series, perspective, side, profile: Arc::new(profile), clamped })
    }

    /// Node-perspective polynomial from its coefficients, padded to precision `n`.
    pub fn node_polynomial(coeffs: &[f64], side: Side, n: usize) -> Result<Self> {
        Self::from_series(PowerSeries::from_slice(coeffs, n)?, Perspective::Node, side)
    }

    /// Edge-perspective polynomial from its coefficients, padded to precision `n`.
    pub fn edge_polynomial(coeffs: &[f64], side: Side, n: usize) -> Result<Self> {
        Self::from_series(PowerSeries::from_slice(coeffs, n)?, Perspective::Edge, side)
    }

    /// Distribution with coefficients `series` and an independently known evaluator.
    pub fn with_profile(
        series: PowerSeries,
        perspective: Perspective,
        side: Side,
        profile: SharedProfile,
    ) -> Self {
        let (series, clamped) = clamp_tiny_negatives(series, "degree distribution");
        Self { series, perspective, side, profile, clamped }
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn coeffs(&self) -> &[f64] {
        self.series.coeffs()
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.series.coeff(k)
    }

    pub fn precision(&self) -> usize {
        self.series.precision()
    }

    pub fn perspective(&self) -> Perspective {
        self.perspective
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn profile(&self) -> &SharedProfile {
        &self.profile
    }

    /// Number of tiny negative coefficients set to zero on construction.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// Whether every coefficient was non-negative before clamping.
    pub fn strictly_nonnegative(&self) -> bool {
        self.clamped == 0 && self.series.coeffs().iter().all(|&c| c >= 0.0)
    }

    /// Evaluates the distribution's own function (node or edge, per perspective).
    pub fn eval(&self, x: f64) -> f64 {
        match self.perspective {
            Perspective::Node => self.profile.node(x),
            Perspective::Edge => self.profile.edge(x),
        }
    }

    /// Node-perspective function at `x`, regardless of the stored perspective.
    pub fn node_value(&self, x: f64) -> f64 {
        self.profile.node(x)
    }

    /// Edge-perspective function at `x`, regardless of the stored perspective.
    pub fn edge_value(&self, x: f64) -> f64 {
        self.profile.edge(x)
    }

    /// Average node degree `N'(1)`.
    pub fn mean_degree(&self) -> f64 {
        self.profile.mean_degree()
    }

    /// Copy with a different side tag.
    pub fn with_side(&self, side: Side) -> Self {
        Self { side, ..self.clone() }
    }

    /// Node-perspective coefficients.
    pub fn node_series(&self) -> Result<PowerSeries> {
        match self.perspective {
            Perspective::Node => Ok(self.series.clone()),
            Perspective::Edge => node_from_edge(self).map(|d| d.series),
        }
    }

    /// Edge-perspective coefficients.
    pub fn edge_series(&self) -> Result<PowerSeries> {
        match self.perspective {
            Perspective::Edge => Ok(self.series.clone()),
            Perspective::Node => edge_from_node(self).map(|d| d.series),
        }
    }

    /// Negativity scan over the first `limit` coefficients.
    pub fn negativity(&self, limit: usize) -> NegativityReport {
        NegativityReport::scan(&self.series, limit)
    }
}

/// `λ(x) = L'(x) / L'(1)`.
pub fn edge_from_node(l: &DegreeDist) -> Result<DegreeDist> {
    expect_perspective(l, Perspective::Node, "edge_from_node")?;
    let mean = l.mean_degree();
    let series = l.series.differentiate_with_slope(mean)?;
    Ok(DegreeDist { series, perspective: Perspective::Edge, ..l.clone() })
}

/// `L(x) = ∫_0^x λ / ∫_0^1 λ`, with `∫_0^1 λ = 1 / L'(1)` from the evaluator.
pub fn node_from_edge(lambda: &DegreeDist) -> Result<DegreeDist> {
    expect_perspective(lambda, Perspective::Edge, "node_from_edge")?;
    let mean = lambda.mean_degree();
    if !(mean.is_finite() && mean > 0.0) {
        return Err(Error::ZeroIntegral);
    }
    let series = lambda.series.integrate_with_total(1.0 / mean)?;
    Ok(DegreeDist { series, perspective: Perspective::Node, ..lambda.clone() })
}

fn expect_perspective(f: &DegreeDist, want: Perspective, op: &str) -> Result<()> {
    if f.perspective != want {
        return Err(Error::InvalidInput(format!("{op} needs a {want:?}-perspective distribution")));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("erasure probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Graph-reduction tilt of a node distribution.
///
/// Check side: `(1-p)R / (1 - pR)`; bit side: `pL / (1 - (1-p)L)`.
pub fn tilt_node(f: &DegreeDist, p: f64) -> Result<DegreeDist> {
    expect_perspective(f, Perspective::Node, "tilt_node")?;
    check_p(p)?;
    let q = f.side.tilt_weight(p);
    let den = PowerSeries::one(f.precision()).sub(&f.series.scale(1.0 - q));
    let series = f.series.scale(q).div(&den)?;
    let profile = Arc::new(TiltedProfile::new(f.profile.clone(), q));
    Ok(DegreeDist::with_profile(series, Perspective::Node, f.side, profile))
}

/// Inverse of [`tilt_node`]: `L̃ / (p + (1-p)L̃)` or `R̃ / (1-p + pR̃)`.
///
/// Negative coefficients are reported, not rejected.
pub fn untilt_node(f: &DegreeDist, p: f64) -> Result<(DegreeDist, NegativityReport)> {
    expect_perspective(f, Perspective::Node, "untilt_node")?;
    check_p(p)?;
    let q = f.side.tilt_weight(p);
    let den = f.series.scale(1.0 - q).add_constant(q);
    let series = f.series.div(&den)?;
    let report = NegativityReport::scan(&series, series.precision());
    let profile = Arc::new(UntiltedProfile::new(f.profile.clone(), q));
    Ok((DegreeDist::with_profile(series, Perspective::Node, f.side, profile), report))
}

/// Edge-perspective tilt of one side: `q² e / (1 - (1-q)N)²`.
pub fn tilt_edge_side(f: &DegreeDist, p: f64) -> Result<DegreeDist> {
    expect_perspective(f, Perspective::Edge, "tilt_edge_side")?;
    check_p(p)?;
    let q = f.side.tilt_weight(p);
    let node = f.node_series()?;
    let d = PowerSeries::one(f.precision()).sub(&node.scale(1.0 - q));
    let series = f.series.scale(q * q).div(&d.mul(&d))?;
    let profile = Arc::new(TiltedProfile::new(f.profile.clone(), q));
    Ok(DegreeDist::with_profile(series, Perspective::Edge, f.side, profile))
}

/// Reduces an ARA, NSIRA or ALDPC pair to the equivalent LDPC pair.
///
/// ARA tilts both sides, NSIRA only the checks, ALDPC only the bits.
pub fn tilt_edge(pair: &DegreeDistPair) -> Result<DegreeDistPair> {
    let p = pair.p;
    let (bit, check) = match pair.family {
        Family::Ara => (tilt_edge_side(&pair.bit, p)?, tilt_edge_side(&pair.check, p)?),
        Family::Nsira => (pair.bit.clone(), tilt_edge_side(&pair.check, p)?),
        Family::Aldpc => (tilt_edge_side(&pair.bit, p)?, pair.check.clone()),
        Family::Ldpc => {
            return Err(Error::UnsupportedFamily { family: Family::Ldpc, op: "tilt_edge" })
        }
    };
    DegreeDistPair::new(bit, check, Family::Ldpc, p)
}

/// Pointwise matching operator `Tf(x) = 1 - f⁻¹(1 - x)` on an edge distribution.
pub fn t_numeric(f: &DegreeDist) -> Result<MatchedProfile> {
    expect_perspective(f, Perspective::Edge, "t_numeric")?;
    MatchedProfile::new(f.profile.clone())
}

/// Coefficients of `Tf` to the precision of `f`.
///
/// With `f = A/B` rational (a polynomial has `B = 1`), `y = Tf` solves
/// `A(1 - y) - (1 - x) B(1 - y) = 0`; the polynomials are re-expanded about
/// `1` exactly and the equation is solved by series Newton iteration. The
/// result carries the bisection evaluator, so its side is the opposite one.
pub fn t_series(f: &DegreeDist) -> Result<DegreeDist> {
    let matched = t_numeric(f)?;
    let n = f.precision();
    let form = f.profile.rational_edge().unwrap_or_else(|| RationalForm {
        num: f.series.coeffs().to_vec(),
        den: vec![1.0],
    });
    let ev = |c: &[f64]| c.iter().rev().sum::<f64>();
    let (a1, b1) = (ev(&form.num), ev(&form.den));
    if b1 == 0.0 || !(a1 / b1).is_finite() {
        return Err(Error::DegenerateDist("matching operator: f(1) is not finite".into()));
    }
    let scale = b1 / a1;
    if (scale - 1.0).abs() > 1e-12 {
        log::debug!("t_series: rescaling f by {scale:e} so that f(1) = 1");
    }
    let num = PowerSeries::new(form.num.iter().map(|c| c * scale).collect())?.reflect();
    let den = PowerSeries::new(form.den.clone())?.reflect();
    let terms = num.precision().max(den.precision()).min(n.max(2));
    let z = PowerSeries::x(n);
    let equation: Vec<PowerSeries> = (0..terms)
        .map(|j| {
            let (aj, bj) = (num.coeff(j), den.coeff(j));
            z.scale(bj).add_constant(aj - bj)
        })
        .collect();
    let series = solve_implicit(&equation)?;
    Ok(DegreeDist::with_profile(series, Perspective::Edge, f.side.other(), Arc::new(matched)))
}

/// A condition of the valid-distribution set that a function violates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonzeroAtZero { value: f64 },
    NotNormalized { value: f64 },
    NegativeCoefficient { index: usize, value: f64 },
}

/// Result of a membership test for the set of valid degree distributions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub at_zero: f64,
    pub at_one: f64,
    pub negativity: NegativityReport,
    pub violations: Vec<Violation>,
}

impl MembershipReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_negative_index(&self) -> Option<usize> {
        self.negativity.first_index()
    }
}

/// Tests `f_k ≥ 0`, `f(0) = 0`, `f(1) = 1` over all coefficients.
pub fn is_in_p(f: &DegreeDist) -> MembershipReport {
    is_in_p_upto(f, f.precision())
}

/// As [`is_in_p`], scanning only the first `limit` coefficients.
pub fn is_in_p_upto(f: &DegreeDist, limit: usize) -> MembershipReport {
    let at_zero = f.coeff(0);
    let at_one = f.eval(1.0);
    let negativity = NegativityReport::scan(&f.series, limit);
    let mut violations = Vec::new();
    if at_zero.abs() > ZERO_TOL {
        violations.push(Violation::NonzeroAtZero { value: at_zero });
    }
    if !((at_one - 1.0).abs() <= NORM_TOL) {
        violations.push(Violation::NotNormalized { value: at_one });
    }
    if let Some((index, value)) = negativity.first {
        violations.push(Violation::NegativeCoefficient { index, value });
    }
    MembershipReport { at_zero, at_one, negativity, violations }
}

/// Membership of `f` and of `Tf` in the valid-distribution set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedMembership {
    pub f: MembershipReport,
    pub tf: MembershipReport,
}

impl MatchedMembership {
    pub fn passes(&self) -> bool {
        self.f.passes() && self.tf.passes()
    }
}

/// Tests `f` and `Tf` (series form, full precision) for validity.
pub fn is_in_a(f: &DegreeDist) -> Result<MatchedMembership> {
    let tf = t_series(f)?;
    Ok(MatchedMembership { f: is_in_p(f), tf: is_in_p(&tf) })
}

/// `(λ, ρ, p) ↦ (ρ, λ, 1 - p)`, with NSIRA and ALDPC exchanged.
pub fn symmetry_swap(pair: &DegreeDistPair) -> DegreeDistPair {
    DegreeDistPair {
        bit: pair.check.with_side(Side::Bit),
        check: pair.bit.with_side(Side::Check),
        family: pair.family.swapped(),
        p: 1.0 - pair.p,
    }
}

/// Bit-side and check-side edge distributions of one ensemble.
#[derive(Clone, Debug)]
pub struct DegreeDistPair {
    bit: DegreeDist,
    check: DegreeDist,
    family: Family,
    p: f64,
}

impl DegreeDistPair {
    /// Builds a pair; node-perspective inputs are converted to edge perspective.
    pub fn new(bit: DegreeDist, check: DegreeDist, family: Family, p: f64) -> Result<Self> {
        if bit.side != Side::Bit || check.side != Side::Check {
            return Err(Error::InvalidInput("pair needs a bit-side and a check-side distribution".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("erasure probability must lie in [0, 1], got {p}")));
        }
        let to_edge = |d: DegreeDist| match d.perspective {
            Perspective::Edge => Ok(d),
            Perspective::Node => edge_from_node(&d),
        };
        Ok(Self { bit: to_edge(bit)?, check: to_edge(check)?, family, p })
    }

    pub fn bit(&self) -> &DegreeDist {
        &self.bit
    }

    pub fn check(&self) -> &DegreeDist {
        &self.check
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same distributions under a different family tag or design point.
    pub fn retagged(&self, family: Family, p: f64) -> Self {
        Self { family, p, ..self.clone() }
    }

    /// `λ(x)`.
    pub fn lambda(&self, x: f64) -> f64 {
        self.bit.edge_value(x)
    }

    /// `ρ(x)`.
    pub fn rho(&self, x: f64) -> f64 {
        self.check.edge_value(x)
    }

    /// `L(x)`.
    pub fn big_l(&self, x: f64) -> f64 {
        self.bit.node_value(x)
    }

    /// `R(x)`.
    pub fn big_r(&self, x: f64) -> f64 {
        self.check.node_value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 64;

    fn node(c: &[f64], side: Side) -> DegreeDist {
        DegreeDist::node_polynomial(c, side, N).unwrap()
    }

    fn edge(c: &[f64], side: Side) -> DegreeDist {
        DegreeDist::edge_polynomial(c, side, N).unwrap()
    }

    fn geometric_edge(b: f64, side: Side, n: usize) -> DegreeDist {
        let mut c = vec![0.0; n];
        for (k, v) in c.iter_mut().enumerate().skip(1) {
            *v = (1.0 - b) * b.powi(k as i32 - 1);
        }
        let profile = Arc::new(GeometricProfile::new(b).unwrap());
        DegreeDist::with_profile(PowerSeries::new(c).unwrap(), Perspective::Edge, side, profile)
    }

    #[test]
    fn cubic_node_is_square_edge() {
        let l = node(&[0.0, 0.0, 0.0, 1.0], Side::Bit);
        let lam = edge_from_node(&l).unwrap();
        assert_eq!(lam.coeff(2), 1.0);
        assert_eq!(lam.mean_degree(), 3.0);
        let back = node_from_edge(&lam).unwrap();
        assert!(back.series().max_abs_diff(l.series()) < 1e-15);
        // degree-one nodes: λ is the constant 1
        let one = edge_from_node(&node(&[0.0, 1.0], Side::Bit)).unwrap();
        assert_eq!(one.coeff(0), 1.0);
        let lx = node_from_edge(&edge(&[0.0, 1.0], Side::Bit)).unwrap();
        assert!((lx.coeff(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tilt_identity_check_side_is_geometric() {
        let r = node(&[0.0, 1.0], Side::Check);
        let t = tilt_node(&r, 0.5).unwrap();
        for k in 1..20 {
            assert!((t.coeff(k) - 0.5f64.powi(k as i32)).abs() < 1e-15);
        }
        assert!((t.eval(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tilt_vanishes_as_p_goes_to_zero_on_check_side() {
        let r = node(&[0.0, 0.0, 0.3, 0.7], Side::Check);
        let t = tilt_node(&r, 1e-9).unwrap();
        assert!(t.series().max_abs_diff(r.series()) < 1e-8);
    }

    #[test]
    fn untilt_inverts_tilt() {
        let f = node(&[0.0, 0.1, 0.2, 0.3, 0.4], Side::Bit);
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for side in [Side::Bit, Side::Check] {
                let f = f.with_side(side);
                let (back, rep) = untilt_node(&tilt_node(&f, p).unwrap(), p).unwrap();
                assert!(back.series().max_abs_diff(f.series()) < 1e-10);
                assert!(rep.is_clean());
            }
        }
    }

    #[test]
    fn tilt_edge_matches_node_route() {
        let lam = edge(&[0.0, 0.0, 0.6, 0.4], Side::Bit);
        let rho = edge(&[0.0, 0.0, 0.0, 0.0, 0.5, 0.5], Side::Check);
        let pair = DegreeDistPair::new(lam.clone(), rho.clone(), Family::Ara, 0.3).unwrap();
        let t = tilt_edge(&pair).unwrap();
        assert_eq!(t.family(), Family::Ldpc);
        for (orig, tilted) in [(&lam, t.bit()), (&rho, t.check())] {
            let via = edge_from_node(&tilt_node(&node_from_edge(orig).unwrap(), 0.3).unwrap()).unwrap();
            // differentiating a truncated series loses the top coefficient
            let head = |d: &DegreeDist| d.series().with_precision(N - 1);
            assert!(head(&via).max_abs_diff(&head(tilted)) < 1e-9);
            assert!((tilted.eval(1.0) - 1.0).abs() < 1e-14);
        }
        let nsira = tilt_edge(&pair.retagged(Family::Nsira, 0.3)).unwrap();
        assert_eq!(nsira.bit().series(), lam.series());
        assert!(tilt_edge(&pair.retagged(Family::Ldpc, 0.3)).is_err());
    }

    #[test]
    fn bit_regular_tilted_lambda_closed_form() {
        let lam = edge(&[0.0, 0.0, 1.0], Side::Bit);
        let t = tilt_edge_side(&lam, 0.3).unwrap();
        for x in [0.1, 0.5, 0.9] {
            let expect = 0.09 * x * x / (1.0f64 - 0.7 * x * x * x).powi(2);
            assert!((t.eval(x) - expect).abs() < 1e-14);
            if x < 0.6 {
                assert!((t.series().eval(x) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matching_examples() {
        let id = edge(&[0.0, 1.0], Side::Bit);
        let t = t_series(&id).unwrap();
        assert!(t.series().max_abs_diff(id.series()) < 1e-15);
        assert_eq!(t.side(), Side::Check);

        // T(x²) = 1 - sqrt(1 - x); binomial coefficients as oracle.
        let sq = edge(&[0.0, 0.0, 1.0], Side::Bit);
        let t = t_series(&sq).unwrap();
        let mut c = 0.5f64; // coefficient of x in 1 - sqrt(1 - x)
        for k in 1..N {
            assert!((t.coeff(k) - c).abs() < 1e-12 * c.max(1e-3), "k = {k}");
            c *= (k as f64 - 0.5) / (k as f64 + 1.0);
        }

        let g = geometric_edge(0.5, Side::Bit, N);
        let t = t_series(&g).unwrap();
        assert!(t.series().max_abs_diff(g.series()) < 1e-13);
        let tn = t_numeric(&g).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((tn.edge(x) - g.eval(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn matching_is_an_involution() {
        let g = geometric_edge(0.3, Side::Bit, N);
        let tt = t_series(&t_series(&g).unwrap()).unwrap();
        assert!(tt.series().max_abs_diff(g.series()) < 1e-9);
    }

    #[test]
    fn numeric_and_series_matching_agree() {
        let f = edge(&[0.0, 0.3, 0.3, 0.2, 0.2], Side::Bit);
        let tn = t_numeric(&f).unwrap();
        let ts = t_series(&f).unwrap();
        // Tf has a branch point only where f' vanishes outside [0, 1]; compare
        // well inside the disc of convergence.
        for i in 1..=4 {
            let x = i as f64 / 10.0;
            assert!((tn.edge(x) - ts.series().eval(x)).abs() < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn matching_rejects_non_monotone() {
        let f = edge(&[0.0, 3.0, -2.0], Side::Bit);
        assert!(matches!(t_numeric(&f), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn membership() {
        assert!(is_in_p(&edge(&[0.0, 0.0, 1.0], Side::Bit)).passes());
        let bad = is_in_p(&edge(&[0.0, 2.0, -1.0], Side::Bit));
        assert_eq!(bad.first_negative_index(), Some(2));
        assert!(!bad.passes());
        assert!(is_in_a(&edge(&[0.0, 1.0], Side::Bit)).unwrap().passes());
        assert!(is_in_a(&edge(&[0.0, 0.0, 1.0], Side::Bit)).unwrap().passes());
        assert!(is_in_a(&geometric_edge(0.5, Side::Bit, N)).unwrap().passes());
        let shifted = is_in_p(&edge(&[0.5, 0.5], Side::Bit));
        assert!(matches!(shifted.violations[0], Violation::NonzeroAtZero { .. }));
    }

    #[test]
    fn swap_is_an_involution() {
        let lam = edge(&[0.0, 0.0, 1.0], Side::Bit);
        let rho = edge(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0], Side::Check);
        let pair = DegreeDistPair::new(lam, rho, Family::Nsira, 0.3).unwrap();
        let s = symmetry_swap(&pair);
        assert_eq!(s.family(), Family::Aldpc);
        assert!((s.p() - 0.7).abs() < 1e-15);
        assert_eq!(s.bit().coeff(5), 1.0);
        let ss = symmetry_swap(&s);
        assert_eq!(ss.family(), Family::Nsira);
        assert_eq!(ss.bit().series(), pair.bit().series());
        assert_eq!(ss.check().series(), pair.check().series());
        assert!((ss.p() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("ARA".parse::<Family>().unwrap(), Family::Ara);
        assert!("turbo".parse::<Family>().is_err());
        assert_eq!(Family::Aldpc.swapped(), Family::Nsira);
    }
}
