//! Capacity-achieving ensembles and their figures of merit.
//!
//! Two routes lead to a pair satisfying the zero-gap fixed-point equation:
//!
//! - fix one side and solve for the other ([`solve_r_from_l`],
//!   [`solve_l_from_r`], used by the regular ensembles), or
//! - start from a tilted pair that is matched to itself, the geometric
//!   `f(x) = (1-b)x / (1-bx)`, and untilt it ([`ara_from_matched`],
//!   [`nsira_from_matched`]). The untilted coefficients are non-negative only
//!   on a window of `p` that depends on `b`; [`auto_b`] returns the smallest
//!   `b` whose window contains a given `p`.
//!
//! ALDPC pairs are the symmetry images of NSIRA pairs and exist only at the
//! degree-distribution level.

mod spec;

use std::sync::Arc;

use serde::Serialize;

use crate::dd::{
    edge_from_node, node_from_edge, symmetry_swap, t_series, tilt_edge_side, untilt_node, DegreeDist,
    DegreeDistPair, Family, GeometricProfile, NegativityReport, Perspective, Side,
};
use crate::error::{Error, Result};
use crate::series::{lambert_w0, PowerSeries};

pub use spec::{parse_polynomial, BParam, EnsembleSpec};

/// Added to the boundary value of `b` chosen automatically.
pub const AUTO_B_NUDGE: f64 = 1e-12;
/// Largest `p` for which the bit-regular (`L = x³`) ARA ensemble was observed valid.
pub const BIT_REGULAR_P_MAX: f64 = 0.384;
/// Coefficient whose sign decides validity of the untilted matched pair.
pub const CRITICAL_INDEX: usize = 6;

/// `(13 - √61) / 9`, the slope of the empirical non-negativity window.
pub fn window_slope() -> f64 {
    (13.0 - 61f64.sqrt()) / 9.0
}

/// `b + ln(1 - b)`.
pub fn log_norm(b: f64) -> f64 {
    b + (-b).ln_1p()
}

/// The window `[p_lo, 1 - p_lo]` of `p` on which untilting the matched
/// geometric pair with parameter `b` leaves both sides non-negative.
pub fn ara_window(b: f64) -> (f64, f64) {
    let lo = 1.0 / (1.0 - window_slope() * log_norm(b));
    (lo, 1.0 - lo)
}

/// Largest `p` for which the NSIRA check side stays non-negative.
pub fn nsira_upper_bound(b: f64) -> f64 {
    ara_window(b).1
}

/// Smallest admissible `b`, reached at `p = 1/2`.
pub fn b_star() -> f64 {
    let arg = -(-(25.0 + 61f64.sqrt()) / 12.0).exp();
    lambert_w0(arg).expect("argument lies in the principal-branch domain") + 1.0
}

/// Smallest `b` whose window contains `p` (without the nudge).
pub fn auto_b(p: f64) -> Result<f64> {
    check_p(p)?;
    b_for_lower_edge(p.min(1.0 - p))
}

/// Smallest `b` with `p ≤ nsira_upper_bound(b)` (without the nudge).
pub fn nsira_auto_b(p: f64) -> Result<f64> {
    check_p(p)?;
    b_for_lower_edge(1.0 - p)
}

/// `b` at which the window's lower edge equals `edge`.
fn b_for_lower_edge(edge: f64) -> Result<f64> {
    let a = (13.0 + 61f64.sqrt()) / 12.0 * (1.0 / edge - 1.0);
    Ok(lambert_w0(-(-1.0 - a).exp())? + 1.0)
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("design p must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Encoding/decoding cost per information bit and the design rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub chi_e: f64,
    pub chi_d: f64,
    pub design_rate: f64,
    pub capacity: f64,
}

/// A predicate on the design `p`, with the range it was evaluated against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterWindow {
    pub name: String,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub holds: bool,
}

impl ParameterWindow {
    fn new(name: &str, p: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        let holds = lo.map_or(true, |l| p >= l) && hi.map_or(true, |h| p <= h);
        Self { name: name.into(), lo, hi, holds }
    }
}

/// Non-negativity findings and side checks for a constructed pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    /// Scan of the bit-side node coefficients `L_k`.
    pub bit_negativity: NegativityReport,
    /// Scan of the check-side node coefficients `R_k`.
    pub check_negativity: NegativityReport,
    /// Parameter-range predicate, where one is known.
    pub window: Option<ParameterWindow>,
    /// Whether the predicate and the coefficient scan agree.
    pub scan_agrees: Option<bool>,
    pub l6: f64,
    pub r6: f64,
    pub lambda_at_one: f64,
    pub rho_at_one: f64,
    /// Largest pointwise gap between the computed tilted check function and
    /// its closed form (bit-regular degree 3 only).
    pub closed_form_discrepancy: Option<f64>,
    pub notes: Vec<String>,
}

impl ValidityReport {
    fn new(bit_node: &DegreeDist, check_node: &DegreeDist, pair: &DegreeDistPair) -> Self {
        Self {
            bit_negativity: bit_node.negativity(bit_node.precision()),
            check_negativity: check_node.negativity(check_node.precision()),
            window: None,
            scan_agrees: None,
            l6: bit_node.coeff(CRITICAL_INDEX),
            r6: check_node.coeff(CRITICAL_INDEX),
            lambda_at_one: pair.lambda(1.0),
            rho_at_one: pair.rho(1.0),
            closed_form_discrepancy: None,
            notes: Vec::new(),
        }
    }

    fn with_window(mut self, window: ParameterWindow) -> Self {
        let agrees = window.holds == self.nonnegative();
        if !agrees {
            self.notes.push(format!(
                "{} predicate ({}) disagrees with the coefficient scan (non-negative: {})",
                window.name,
                window.holds,
                self.nonnegative()
            ));
        }
        self.scan_agrees = Some(agrees);
        self.window = Some(window);
        self
    }

    /// No coefficient below the tolerance on either side.
    pub fn nonnegative(&self) -> bool {
        self.bit_negativity.is_clean() && self.check_negativity.is_clean()
    }

    /// Non-negative and inside the parameter window, where one applies.
    pub fn is_valid(&self) -> bool {
        self.nonnegative() && self.window.as_ref().map_or(true, |w| w.holds)
    }
}

/// A constructed ensemble: the pair, its node-perspective sides and reports.
#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: EnsembleSpec,
    /// Resolved `b` for matched families.
    pub b: Option<f64>,
    pub pair: DegreeDistPair,
    /// `L`.
    pub bit_node: DegreeDist,
    /// `R`.
    pub check_node: DegreeDist,
    pub validity: ValidityReport,
    pub complexity: Option<ComplexityReport>,
}

impl Construction {
    /// `Σ_{i<d} R_i` for `d = 0..=upto`.
    pub fn check_degree_cdf(&self, upto: usize) -> Vec<f64> {
        degree_cdf(&self.check_node, upto)
    }
}

/// Cumulative node fractions `Σ_{i<d} N_i` for `d = 0..=upto`.
pub fn degree_cdf(node: &DegreeDist, upto: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for d in 1..=upto {
        acc += node.coeff(d - 1);
        out.push(acc);
    }
    out
}

/// Check-side node distribution making `(L, R)` a zero-gap ARA pair at `p`.
///
/// Tilts `λ`, matches it to obtain the tilted check function, and untilts.
/// Returns `R` with the negativity scan of its coefficients.
pub fn solve_r_from_l(l: &DegreeDist, p: f64) -> Result<(DegreeDist, NegativityReport)> {
    check_p(p)?;
    if l.perspective() != Perspective::Node || l.side() != Side::Bit {
        return Err(Error::InvalidInput("solve_r_from_l needs a bit-side node distribution".into()));
    }
    let lambda = edge_from_node(l)?;
    let lambda_t = tilt_edge_side(&lambda, p)?;
    let rho_t = t_series(&lambda_t)?;
    let r_t = node_from_edge(&rho_t)?;
    let (r, report) = untilt_node(&r_t, p)?;
    let rho_one = r.edge_value(1.0);
    if (rho_one - 1.0).abs() > 1e-8 {
        return Err(Error::DegenerateDist(format!("solved check side has rho(1) = {rho_one}")));
    }
    Ok((r, report))
}

/// Bit-side counterpart of [`solve_r_from_l`], through the symmetry swap.
pub fn solve_l_from_r(r: &DegreeDist, p: f64) -> Result<(DegreeDist, NegativityReport)> {
    if r.perspective() != Perspective::Node || r.side() != Side::Check {
        return Err(Error::InvalidInput("solve_l_from_r needs a check-side node distribution".into()));
    }
    check_p(p)?;
    let (l, report) = solve_r_from_l(&r.with_side(Side::Bit), 1.0 - p)?;
    Ok((l.with_side(Side::Bit), report))
}

/// Closed form of the tilted check function for `λ = x²`.
///
/// With `w = 1 - x`, `u = 1 - ρ̃(x)` is the real root of
/// `(1-p)√w u³ + p u - √w = 0`, written with the hyperbolic-sine solution of
/// the depressed cubic.
pub fn rho_tilde_closed_form(p: f64, x: f64) -> f64 {
    let w = 1.0 - x;
    if w <= 0.0 {
        return 1.0;
    }
    let sw = w.sqrt();
    let pp = p / ((1.0 - p) * sw);
    let qq = -1.0 / (1.0 - p);
    let arg = 1.5 * qq / pp * (3.0 / pp).sqrt();
    let u = -2.0 * (pp / 3.0).sqrt() * (arg.asinh() / 3.0).sinh();
    1.0 - u
}

fn regular_node(degree: u32, side: Side, n: usize) -> Result<DegreeDist> {
    let d = degree as usize;
    if d >= n {
        return Err(Error::InvalidInput(format!("regular degree {d} needs precision above {d}")));
    }
    let mut c = vec![0.0; d + 1];
    c[d] = 1.0;
    DegreeDist::node_polynomial(&c, side, n)
}

/// ARA pair regular on one side (`x^degree` from the node perspective).
pub fn regular_ara(p: f64, degree: u32, side: Side, n: usize) -> Result<Construction> {
    check_p(p)?;
    let fixed = regular_node(degree, side, n)?;
    let (l, r) = match side {
        Side::Bit => (fixed.clone(), solve_r_from_l(&fixed, p)?.0),
        Side::Check => (solve_l_from_r(&fixed, p)?.0, fixed.clone()),
    };
    let pair = DegreeDistPair::new(edge_from_node(&l)?, edge_from_node(&r)?, Family::Ara, p)?;
    let mut validity = ValidityReport::new(&l, &r, &pair);
    if degree == 3 {
        validity = match side {
            Side::Bit => validity.with_window(ParameterWindow::new(
                "bit-regular range",
                p,
                None,
                Some(BIT_REGULAR_P_MAX),
            )),
            Side::Check => validity.with_window(ParameterWindow::new(
                "check-regular range",
                p,
                Some(1.0 - BIT_REGULAR_P_MAX),
                None,
            )),
        };
        let q = if side == Side::Bit { p } else { 1.0 - p };
        let tilted = match side {
            Side::Bit => tilt_edge_side(pair.check(), p)?,
            Side::Check => tilt_edge_side(pair.bit(), p)?,
        };
        let gap = (1..=9)
            .map(|i| {
                let x = i as f64 / 10.0;
                (tilted.edge_value(x) - rho_tilde_closed_form(q, x)).abs()
            })
            .fold(0.0, f64::max);
        validity.closed_form_discrepancy = Some(gap);
    }
    let complexity = edge_complexity(&pair)?;
    Ok(Construction {
        spec: EnsembleSpec::regular(Family::Ara, p, degree, side).with_precision(n),
        b: None,
        bit_node: l,
        check_node: r,
        validity,
        complexity: Some(complexity),
        pair,
    })
}

/// The bit-regular ARA ensemble with `L(x) = x³`.
pub fn bit_regular_ara(p: f64, n: usize) -> Result<Construction> {
    regular_ara(p, 3, Side::Bit, n)
}

/// Edge distribution `(1-b)x / (1-bx)`, coefficients `(1-b) b^{k-1}`.
pub fn matched_self_dd(b: f64, n: usize) -> Result<DegreeDist> {
    let profile = GeometricProfile::new(b)?;
    let mut c = vec![0.0; n];
    let mut pow = 1.0 - b;
    for v in c.iter_mut().skip(1) {
        *v = pow;
        pow *= b;
    }
    Ok(DegreeDist::with_profile(PowerSeries::new(c)?, Perspective::Edge, Side::Bit, Arc::new(profile)))
}

fn resolve_ara_b(p: f64, b: BParam) -> Result<f64> {
    let min = b_star();
    match b {
        BParam::Auto => Ok(auto_b(p)? + AUTO_B_NUDGE),
        BParam::Value(b) if b >= min - AUTO_B_NUDGE && b < 1.0 => Ok(b),
        BParam::Value(b) => Err(Error::InvalidB { b, min }),
    }
}

/// ARA pair obtained by untilting the self-matched geometric pair.
pub fn ara_from_matched(p: f64, b: BParam, n: usize) -> Result<Construction> {
    check_p(p)?;
    let b_val = resolve_ara_b(p, b)?;
    let f = matched_self_dd(b_val, n)?;
    let tilted_node = node_from_edge(&f)?;
    let (l, _) = untilt_node(&tilted_node, p)?;
    let (r, _) = untilt_node(&tilted_node.with_side(Side::Check), p)?;
    let pair = DegreeDistPair::new(edge_from_node(&l)?, edge_from_node(&r)?, Family::Ara, p)?;
    let (lo, hi) = ara_window(b_val);
    let validity = ValidityReport::new(&l, &r, &pair)
        .with_window(ParameterWindow::new("ara matched window", p, Some(lo), Some(hi)));
    let s = -b_val * b_val / ((1.0 - b_val) * log_norm(b_val));
    let chi = (3.0 - p) / (1.0 - p) + p * s;
    let complexity =
        ComplexityReport { chi_e: chi, chi_d: chi, design_rate: design_rate(&pair)?, capacity: 1.0 - p };
    Ok(Construction {
        spec: EnsembleSpec::matched(Family::Ara, p, b).with_precision(n),
        b: Some(b_val),
        bit_node: l,
        check_node: r,
        validity,
        complexity: Some(complexity),
        pair,
    })
}

/// NSIRA pair whose tilted pair is the self-matched geometric one.
///
/// Only the check side is untilted; the bit side is the geometric edge
/// distribution itself.
pub fn nsira_from_matched(p: f64, b: f64, n: usize) -> Result<Construction> {
    check_p(p)?;
    let f = matched_self_dd(b, n)?;
    let l = node_from_edge(&f)?;
    let (r, _) = untilt_node(&l.with_side(Side::Check), p)?;
    let pair = DegreeDistPair::new(f, edge_from_node(&r)?, Family::Nsira, p)?;
    let validity = ValidityReport::new(&l, &r, &pair).with_window(ParameterWindow::new(
        "nsira upper bound",
        p,
        None,
        Some(nsira_upper_bound(b)),
    ));
    let chi = 2.0 / (1.0 - p) - b * b / ((1.0 - b) * log_norm(b));
    let complexity =
        ComplexityReport { chi_e: chi, chi_d: chi, design_rate: design_rate(&pair)?, capacity: 1.0 - p };
    Ok(Construction {
        spec: EnsembleSpec::matched(Family::Nsira, p, BParam::Value(b)).with_precision(n),
        b: Some(b),
        bit_node: l,
        check_node: r,
        validity,
        complexity: Some(complexity),
        pair,
    })
}

/// NSIRA pair regular on one side.
///
/// NSIRA reduces only its checks, so `λ̃ = λ` and the tilted check function is
/// `Tλ` (bit-regular) or `λ = Tρ̃` (check-regular).
pub fn nsira_regular(p: f64, degree: u32, side: Side, n: usize) -> Result<Construction> {
    check_p(p)?;
    let fixed = regular_node(degree, side, n)?;
    let (l, r) = match side {
        Side::Bit => {
            let rho_t = t_series(&edge_from_node(&fixed)?)?;
            let (r, _) = untilt_node(&node_from_edge(&rho_t)?, p)?;
            (fixed, r)
        }
        Side::Check => {
            let rho_t = tilt_edge_side(&edge_from_node(&fixed)?, p)?;
            let lambda = t_series(&rho_t)?;
            (node_from_edge(&lambda)?, fixed)
        }
    };
    let pair = DegreeDistPair::new(edge_from_node(&l)?, edge_from_node(&r)?, Family::Nsira, p)?;
    let validity = ValidityReport::new(&l, &r, &pair);
    let complexity = edge_complexity(&pair)?;
    Ok(Construction {
        spec: EnsembleSpec::regular(Family::Nsira, p, degree, side).with_precision(n),
        b: None,
        bit_node: l,
        check_node: r,
        validity,
        complexity: Some(complexity),
        pair,
    })
}

/// ALDPC pair as the symmetry image of an NSIRA construction.
///
/// The pair is designed for `1 - p_nsira`. Its validity window records the
/// stated capacity-achieving ranges: `[0.05, 1)` from a check-regular source,
/// `[12/13, 1)` from a bit-regular source, and the mirrored NSIRA bound for a
/// matched source.
pub fn aldpc_from_nsira(source: &Construction) -> Result<Construction> {
    if source.pair.family() != Family::Nsira {
        return Err(Error::UnsupportedFamily { family: source.pair.family(), op: "aldpc_from_nsira" });
    }
    let pair = symmetry_swap(&source.pair);
    let p = pair.p();
    let bit_node = source.check_node.with_side(Side::Bit);
    let check_node = source.bit_node.with_side(Side::Check);
    let mut validity = ValidityReport::new(&bit_node, &check_node, &pair);
    let window = match (source.spec.regular_side, source.b) {
        (Some(Side::Check), _) => Some(ParameterWindow::new("aldpc bit-regular range", p, Some(0.05), Some(1.0))),
        (Some(Side::Bit), _) => {
            Some(ParameterWindow::new("aldpc check-regular range", p, Some(12.0 / 13.0), Some(1.0)))
        }
        (None, Some(b)) => Some(ParameterWindow::new("aldpc matched range", p, Some(1.0 - nsira_upper_bound(b)), None)),
        _ => None,
    };
    if let Some(w) = window {
        validity.window = Some(w);
    }
    validity.notes.push("design rate and complexity are not defined for ALDPC".into());
    let mut spec = source.spec.clone();
    spec.family = Family::Aldpc;
    spec.p = p;
    spec.regular_side = spec.regular_side.map(Side::other);
    Ok(Construction { spec, b: source.b, pair, bit_node, check_node, validity, complexity: None })
}

/// Design rate from edge-count accounting.
///
/// ARA transmits systematic and code bits, NSIRA only code bits, LDPC all
/// variable nodes. ALDPC has no stated transmitted set.
pub fn design_rate(pair: &DegreeDistPair) -> Result<f64> {
    let (l1, r1) = (pair.bit().mean_degree(), pair.check().mean_degree());
    match pair.family() {
        Family::Ara => Ok(1.0 / (1.0 + l1 / r1)),
        Family::Nsira => Ok(r1 / l1),
        Family::Ldpc => Ok(1.0 - l1 / r1),
        Family::Aldpc => Err(Error::UnsupportedFamily { family: Family::Aldpc, op: "design_rate" }),
    }
}

/// Graph edges per information bit, used for both encoding and decoding cost.
///
/// ARA: 3 accumulator/systematic edges, `L'(1)` repetition edges and two
/// bottom-accumulator edges per code bit. NSIRA drops the top accumulator.
pub fn edge_complexity(pair: &DegreeDistPair) -> Result<ComplexityReport> {
    let (l1, r1) = (pair.bit().mean_degree(), pair.check().mean_degree());
    let rate = design_rate(pair)?;
    let chi = match pair.family() {
        Family::Ara => 3.0 + l1 + 2.0 * l1 / r1,
        Family::Nsira => l1 + 2.0 * l1 / r1,
        Family::Ldpc => l1 / rate,
        Family::Aldpc => unreachable!("design_rate rejects ALDPC"),
    };
    Ok(ComplexityReport { chi_e: chi, chi_d: chi, design_rate: rate, capacity: 1.0 - pair.p() })
}

/// LDPC pair from edge polynomials, tagged with `p`.
pub fn ldpc_from_polynomials(lambda: &[f64], rho: &[f64], p: f64, n: usize) -> Result<Construction> {
    let bit = DegreeDist::edge_polynomial(lambda, Side::Bit, n)?;
    let check = DegreeDist::edge_polynomial(rho, Side::Check, n)?;
    let pair = DegreeDistPair::new(bit, check, Family::Ldpc, p)?;
    let bit_node = node_from_edge(pair.bit())?;
    let check_node = node_from_edge(pair.check())?;
    let validity = ValidityReport::new(&bit_node, &check_node, &pair);
    let complexity = edge_complexity(&pair)?;
    Ok(Construction {
        spec: EnsembleSpec { p, ..EnsembleSpec::ldpc("", "") }.with_precision(n),
        b: None,
        bit_node,
        check_node,
        validity,
        complexity: Some(complexity),
        pair,
    })
}

/// Builds the ensemble an [`EnsembleSpec`] describes.
pub fn build(spec: &EnsembleSpec) -> Result<Construction> {
    spec.validate()?;
    let n = spec.precision;
    let side = spec.regular_side.unwrap_or(Side::Bit);
    let mut built = match (spec.family, spec.b, spec.regular_degree) {
        (Family::Ara, Some(b), None) => ara_from_matched(spec.p, b, n)?,
        (Family::Ara, None, Some(d)) => regular_ara(spec.p, d, side, n)?,
        (Family::Nsira, Some(b), None) => nsira_from_matched(spec.p, resolve_nsira_b(spec.p, b)?, n)?,
        (Family::Nsira, None, Some(d)) => nsira_regular(spec.p, d, side, n)?,
        (Family::Aldpc, b, d) => {
            let source = match (b, d) {
                (Some(b), None) => nsira_from_matched(1.0 - spec.p, resolve_nsira_b(1.0 - spec.p, b)?, n)?,
                // an ALDPC ensemble regular on one side comes from an NSIRA one
                // regular on the other
                (None, Some(d)) => nsira_regular(1.0 - spec.p, d, side.other(), n)?,
                _ => return Err(Error::InvalidInput("aldpc needs b or a regular degree".into())),
            };
            aldpc_from_nsira(&source)?
        }
        (Family::Ldpc, _, _) => {
            let lambda = parse_polynomial(spec.lambda.as_deref().ok_or_else(|| missing("lambda"))?)?;
            let rho = parse_polynomial(spec.rho.as_deref().ok_or_else(|| missing("rho"))?)?;
            ldpc_from_polynomials(&lambda, &rho, spec.p, n)?
        }
        (family, _, _) => {
            return Err(Error::InvalidInput(format!("{family} needs exactly one of b or a regular degree")))
        }
    };
    built.spec = spec.clone();
    Ok(built)
}

fn missing(what: &str) -> Error {
    Error::InvalidInput(format!("ldpc spec needs a '{what}' polynomial"))
}

/// NSIRA has no lower limit on `b`; `auto` picks the smallest `b` with `p` below the upper bound.
fn resolve_nsira_b(p: f64, b: BParam) -> Result<f64> {
    match b {
        BParam::Value(b) => Ok(b),
        BParam::Auto => Ok(nsira_auto_b(p)? + AUTO_B_NUDGE),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_boundary_reproduces_lambert_rule() {
        for p in [0.15, 0.2, 0.35, 0.5, 0.7, 0.85] {
            let b = auto_b(p).unwrap();
            let (lo, hi) = ara_window(b);
            let target = p.min(1.0 - p);
            assert!((lo - target).abs() < 1e-10, "p = {p}: lo = {lo}");
            assert!((hi - (1.0 - target)).abs() < 1e-10);
        }
        assert!((auto_b(0.5).unwrap() - b_star()).abs() < 1e-15);
        for p in [0.2, 0.4, 0.6] {
            let b = nsira_auto_b(p).unwrap();
            assert!((nsira_upper_bound(b) - p).abs() < 1e-10);
        }
        // (13 + √61)/12 = 9/(13 - √61)
        assert!(((13.0 + 61f64.sqrt()) / 12.0 - 1.0 / window_slope()).abs() < 1e-14);
    }

    #[test]
    fn closed_form_root_solves_the_cubic() {
        for p in [0.1, 0.3, 0.6] {
            for x in [0.05, 0.5, 0.95] {
                let u = 1.0 - rho_tilde_closed_form(p, x);
                let sw = (1.0f64 - x).sqrt();
                assert!(((1.0 - p) * sw * u.powi(3) + p * u - sw).abs() < 1e-14);
                assert!((0.0..=1.0).contains(&u));
            }
        }
    }

    #[test]
    fn degree_cdf_accumulates() {
        let d = DegreeDist::node_polynomial(&[0.0, 0.0, 0.25, 0.75], Side::Check, 8).unwrap();
        assert_eq!(degree_cdf(&d, 4), vec![0.0, 0.0, 0.0, 0.25, 1.0]);
    }

    #[test]
    fn regular_ldpc_rate() {
        let c = build(&EnsembleSpec::ldpc("x^2", "x^5").with_precision(16)).unwrap();
        assert!((c.complexity.unwrap().design_rate - 0.5).abs() < 1e-15);
    }
}
