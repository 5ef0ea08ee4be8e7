//! Density evolution on the binary erasure channel.
//!
//! For ARA ensembles the recursion tracks six message erasure probabilities
//! per iteration:
//!
//! | state | message |
//! |-------|---------|
//! | `x0`  | parity-check 1 → punctured bit |
//! | `x1`  | punctured bit → parity-check 2 |
//! | `x2`  | parity-check 2 → code bit |
//! | `x3`  | code bit → parity-check 2 |
//! | `x4`  | parity-check 2 → punctured bit |
//! | `x5`  | punctured bit → parity-check 1 |
//!
//! The other families are iterated through their scalar reduced map
//! `x ↦ λ̂(1 - ρ̂(1 - x))`, where `(λ̂, ρ̂)` is the LDPC pair left after graph
//! reduction at the channel erasure probability.
//!
//! Without degree-one checks every family has the total-erasure state as a
//! fixed point. [`run_de`] breaks it by revealing a vanishing fraction
//! [`DeConfig::pilot_fraction`] of punctured bits, which scales every
//! bit-to-check message by `1 - δ` and keeps the trajectory monotone.

use serde::Serialize;

use crate::dd::{symmetry_swap, tilt_edge, DegreeDistPair, Family};
use crate::error::{Error, Result};

/// Grid size for residual and equivalence sweeps.
pub const GRID_POINTS: usize = 101;

/// Iteration controls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeConfig {
    pub max_iter: usize,
    /// Stop once `|x1⁽ˡ⁺¹⁾ - x1⁽ˡ⁾|` falls below this.
    pub tol: f64,
    /// Decoding succeeds when the final `x1` is below this.
    pub success: f64,
    /// Fraction `δ` of punctured bits known to the decoder.
    pub pilot_fraction: f64,
    /// Record every k-th state, when set.
    pub record_every: Option<usize>,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self { max_iter: 10_000, tol: 1e-12, success: 1e-7, pilot_fraction: 1e-6, record_every: None }
    }
}

/// Six ARA message erasure probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeState {
    pub x: [f64; 6],
    pub iteration: usize,
}

impl DeState {
    pub fn all_ones() -> Self {
        Self { x: [1.0; 6], iteration: 0 }
    }

    pub fn x1(&self) -> f64 {
        self.x[1]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeResult {
    pub converged_to_zero: bool,
    pub final_x1: f64,
    pub iterations: usize,
    pub trajectory: Vec<DeState>,
}

/// One downward and upward sweep of the ARA recursion at channel erasure `p`.
pub fn de_step(state: &DeState, pair: &DegreeDistPair, p: f64) -> DeState {
    de_step_with_pilots(state, pair, p, 0.0)
}

/// [`de_step`] with a fraction `delta` of punctured bits known.
pub fn de_step_with_pilots(state: &DeState, pair: &DegreeDistPair, p: f64, delta: f64) -> DeState {
    let [_, _, _, x3_prev, x4_prev, x5_prev] = state.x;
    let keep = 1.0 - delta;
    let x0 = 1.0 - (1.0 - x5_prev) * (1.0 - p);
    let x1 = keep * x0 * x0 * pair.lambda(x4_prev);
    let x2 = 1.0 - pair.big_r(1.0 - x1) * (1.0 - x3_prev);
    let x3 = p * x2;
    let x4 = 1.0 - (1.0 - x3) * (1.0 - x3) * pair.rho(1.0 - x1);
    let x5 = keep * x0 * pair.big_l(x4);
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    DeState { x: [x0, x1, x2, x3, x4, x5].map(clamp), iteration: state.iteration + 1 }
}

/// `ρ̃_p(y) = (1-p)² ρ(y) / (1 - pR(y))²`, the reduced check side.
fn rho_tilde(pair: &DegreeDistPair, p: f64, y: f64) -> f64 {
    let d = 1.0 - p * pair.big_r(y);
    (1.0 - p) * (1.0 - p) * pair.rho(y) / (d * d)
}

/// `λ̃(y) = p² λ(y) / (1 - (1-p)L(y))²`, the reduced bit side.
fn lambda_tilde(pair: &DegreeDistPair, p: f64, y: f64) -> f64 {
    let d = 1.0 - (1.0 - p) * pair.big_l(y);
    p * p * pair.lambda(y) / (d * d)
}

/// Left-hand side of the family's fixed-point equation, `x ↦ λ̂(1 - ρ̂(1 - x))`.
pub fn reduced_map(pair: &DegreeDistPair, p: f64, x: f64) -> f64 {
    let v = match pair.family() {
        Family::Ara => lambda_tilde(pair, p, 1.0 - rho_tilde(pair, p, 1.0 - x)),
        Family::Nsira => pair.lambda(1.0 - rho_tilde(pair, p, 1.0 - x)),
        Family::Aldpc => lambda_tilde(pair, p, 1.0 - pair.rho(1.0 - x)),
        Family::Ldpc => p * pair.lambda(1.0 - pair.rho(1.0 - x)),
    };
    v.clamp(0.0, 1.0)
}

/// Which form of the ARA fixed-point equation to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResidualForm {
    /// `λ̃(1 - ρ̃(1 - x)) = x`.
    Standard,
    /// `ρ̃(1 - λ̃(x)) = 1 - x`, the form obtained through the LDPC symmetry.
    Swapped,
}

/// `|LHS(x) - RHS(x)|` of the family's fixed-point equation at channel `p`.
pub fn fixed_point_residual(pair: &DegreeDistPair, p: f64, x: f64, form: ResidualForm) -> f64 {
    match (pair.family(), form) {
        (Family::Ara, ResidualForm::Swapped) => {
            (rho_tilde(pair, p, 1.0 - lambda_tilde(pair, p, x)) - (1.0 - x)).abs()
        }
        _ => {
            let v = match pair.family() {
                Family::Ara => lambda_tilde(pair, p, 1.0 - rho_tilde(pair, p, 1.0 - x)),
                Family::Nsira => pair.lambda(1.0 - rho_tilde(pair, p, 1.0 - x)),
                Family::Aldpc => lambda_tilde(pair, p, 1.0 - pair.rho(1.0 - x)),
                Family::Ldpc => p * pair.lambda(1.0 - pair.rho(1.0 - x)),
            };
            (v - x).abs()
        }
    }
}

fn grid() -> impl Iterator<Item = f64> {
    (0..GRID_POINTS).map(|i| i as f64 / (GRID_POINTS - 1) as f64)
}

/// Largest residual over the uniform grid on `[0, 1]`.
pub fn max_residual(pair: &DegreeDistPair, p: f64, form: ResidualForm) -> f64 {
    grid().map(|x| fixed_point_residual(pair, p, x, form)).fold(0.0, f64::max)
}

/// Iterates from the total-erasure state with pilots.
pub fn run_de(pair: &DegreeDistPair, p: f64, cfg: &DeConfig) -> DeResult {
    let mut trajectory = Vec::new();
    let record = |s: &DeState, t: &mut Vec<DeState>| {
        if let Some(k) = cfg.record_every {
            if k > 0 && s.iteration % k == 0 {
                t.push(*s);
            }
        }
    };
    let (final_x1, iterations) = if pair.family() == Family::Ara {
        let mut s = DeState::all_ones();
        record(&s, &mut trajectory);
        let mut prev = s.x1();
        loop {
            s = de_step_with_pilots(&s, pair, p, cfg.pilot_fraction);
            record(&s, &mut trajectory);
            let done = (s.x1() - prev).abs() < cfg.tol || s.x1() == 0.0;
            prev = s.x1();
            if done || s.iteration >= cfg.max_iter {
                break (s.x1(), s.iteration);
            }
        }
    } else {
        let mut x = 1.0;
        let mut it = 0;
        loop {
            let next = (1.0 - cfg.pilot_fraction) * reduced_map(pair, p, x);
            it += 1;
            if cfg.record_every.is_some() {
                let mut st = DeState { x: [f64::NAN; 6], iteration: it };
                st.x[1] = next;
                record(&st, &mut trajectory);
            }
            let done = (next - x).abs() < cfg.tol || next == 0.0;
            x = next;
            if done || it >= cfg.max_iter {
                break (x, it);
            }
        }
    };
    DeResult { converged_to_zero: final_x1 < cfg.success, final_x1, iterations, trajectory }
}

/// Solves `x = f(x)` for a contraction by plain iteration.
fn settle(mut x: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..100_000 {
        let next = f(x);
        if (next - x).abs() <= 1e-17 {
            return next;
        }
        x = next;
    }
    x
}

/// The ARA six-step map at a fixed `x1`, with the accumulator sub-recursions
/// (code-bit and systematic-bit chains) iterated to their fixed points.
pub fn six_step_map(pair: &DegreeDistPair, p: f64, x1: f64) -> f64 {
    let r = pair.big_r(1.0 - x1);
    let x2 = settle(1.0, |x2| 1.0 - r * (1.0 - p * x2));
    let x3 = p * x2;
    let x4 = 1.0 - (1.0 - x3) * (1.0 - x3) * pair.rho(1.0 - x1);
    let l = pair.big_l(x4);
    let x0 = settle(1.0, |x0| 1.0 - (1.0 - x0 * l) * (1.0 - p));
    x0 * x0 * pair.lambda(x4)
}

/// Largest gap over the grid between the six-step map and the map of the
/// reduced LDPC pair from [`tilt_edge`], at the pair's design `p`.
pub fn reduction_equivalence(pair: &DegreeDistPair, p: f64) -> Result<f64> {
    if pair.family() != Family::Ara {
        return Err(Error::UnsupportedFamily { family: pair.family(), op: "reduction_equivalence" });
    }
    let reduced = tilt_edge(&pair.retagged(Family::Ara, p))?;
    Ok(grid()
        .map(|x| {
            let tilted = reduced.lambda(1.0 - reduced.rho(1.0 - x));
            (six_step_map(pair, p, x) - tilted).abs()
        })
        .fold(0.0, f64::max))
}

/// Same as [`reduction_equivalence`] after the bit/check swap and `p ↦ 1 - p`.
pub fn swapped_reduction_equivalence(pair: &DegreeDistPair, p: f64) -> Result<f64> {
    reduction_equivalence(&symmetry_swap(pair), 1.0 - p)
}

/// Search bracket and resolution for [`threshold`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdConfig {
    pub lo: f64,
    pub hi: f64,
    pub tol_p: f64,
    pub de: DeConfig,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self { lo: 0.01, hi: 0.99, tol_p: 1e-4, de: DeConfig::default() }
    }
}

/// Largest channel erasure probability at which DE succeeds, by bisection.
pub fn threshold(pair: &DegreeDistPair, cfg: &ThresholdConfig) -> Result<f64> {
    let ok = |p: f64| run_de(pair, p, &cfg.de).converged_to_zero;
    let (mut lo, mut hi) = (cfg.lo, cfg.hi);
    if !ok(lo) || ok(hi) {
        return Err(Error::NoTransition { lo, hi });
    }
    while hi - lo > cfg.tol_p {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::{DegreeDist, Side};

    fn ldpc36() -> DegreeDistPair {
        let l = DegreeDist::edge_polynomial(&[0.0, 0.0, 1.0], Side::Bit, 8).unwrap();
        let r = DegreeDist::edge_polynomial(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0], Side::Check, 8).unwrap();
        DegreeDistPair::new(l, r, Family::Ldpc, 0.5).unwrap()
    }

    fn identity_ara() -> DegreeDistPair {
        let l = DegreeDist::edge_polynomial(&[1.0], Side::Bit, 4).unwrap();
        let r = DegreeDist::edge_polynomial(&[1.0], Side::Check, 4).unwrap();
        DegreeDistPair::new(l, r, Family::Ara, 0.5).unwrap()
    }

    #[test]
    fn regular_ldpc_threshold() {
        let t = threshold(&ldpc36(), &ThresholdConfig::default()).unwrap();
        assert!((t - 0.4294).abs() < 1e-3, "threshold {t}");
    }

    #[test]
    fn useless_channel_keeps_all_ones() {
        let pair = identity_ara();
        let s = de_step(&DeState::all_ones(), &pair, 1.0);
        assert_eq!(s.x, [1.0; 6]);
    }

    #[test]
    fn degenerate_pair_reduction() {
        let l = DegreeDist::edge_polynomial(&[0.0, 1.0], Side::Bit, 4).unwrap();
        let r = DegreeDist::edge_polynomial(&[0.0, 1.0], Side::Check, 4).unwrap();
        let pair = DegreeDistPair::new(l, r, Family::Ara, 0.5).unwrap();
        assert!(reduction_equivalence(&pair, 0.5).unwrap() < 1e-8);
        assert!(swapped_reduction_equivalence(&pair, 0.5).unwrap() < 1e-8);
    }

    #[test]
    fn residual_edges_vanish() {
        let pair = ldpc36();
        for form in [ResidualForm::Standard, ResidualForm::Swapped] {
            assert_eq!(fixed_point_residual(&pair, 1.0, 0.0, form), 0.0);
            assert!(fixed_point_residual(&pair, 1.0, 1.0, form) < 1e-15);
        }
    }

    #[test]
    fn reduction_rejects_other_families() {
        assert!(reduction_equivalence(&ldpc36(), 0.5).is_err());
    }
}
