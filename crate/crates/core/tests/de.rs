use ara_core::construct::{ara_from_matched, bit_regular_ara, ldpc_from_polynomials, nsira_from_matched};
use ara_core::de::*;
use ara_core::dd::symmetry_swap;
use ara_core::{BParam, Construction};

fn ara_pairs() -> Vec<Construction> {
    let mut v: Vec<Construction> = [0.1, 0.2, 0.3].iter().map(|&p| bit_regular_ara(p, 512).unwrap()).collect();
    v.extend([0.3, 0.5, 0.7].iter().map(|&p| ara_from_matched(p, BParam::Auto, 512).unwrap()));
    v
}

/// Classical BEC threshold of a regular LDPC pair, `min_x x / λ(1 - ρ(1 - x))`,
/// on a fine grid.
fn ldpc_threshold_oracle(dv: i32, dc: i32) -> f64 {
    (1..=1_000_000)
        .map(|i| {
            let x = i as f64 / 1_000_000.0;
            x / (1.0 - (1.0 - x).powi(dc - 1)).powi(dv - 1)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn ldpc_threshold_matches_oracle() {
    let c = ldpc_from_polynomials(&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 0.5, 64).unwrap();
    let t = threshold(&c.pair, &ThresholdConfig::default()).unwrap();
    let oracle = ldpc_threshold_oracle(3, 6);
    assert!((oracle - 0.4294).abs() < 1e-4);
    assert!((t - oracle).abs() < 1e-3, "{t} vs {oracle}");
}

#[test]
fn trajectory_is_non_increasing() {
    for c in ara_pairs() {
        let cfg = DeConfig { record_every: Some(1), max_iter: 2000, ..DeConfig::default() };
        let r = run_de(&c.pair, 0.9 * c.spec.p, &cfg);
        let bad: Vec<_> = r.trajectory.windows(2).filter(|w| w[1].x1() > w[0].x1() + 1e-15).map(|w| (w[0].iteration, w[0].x1(), w[1].x1())).take(3).collect();
        assert!(bad.is_empty(), "{:?}: {bad:?}", c.spec);
    }
}

#[test]
fn step_is_monotone_in_the_state() {
    let c = bit_regular_ara(0.3, 512).unwrap();
    let lo = DeState { x: [0.2, 0.3, 0.4, 0.1, 0.5, 0.2], iteration: 0 };
    let hi = DeState { x: [0.3, 0.4, 0.4, 0.2, 0.6, 0.3], iteration: 0 };
    for p in [0.1, 0.25, 0.5] {
        let (a, b) = (de_step(&lo, &c.pair, p), de_step(&hi, &c.pair, p));
        assert!(a.x.iter().zip(&b.x).all(|(u, v)| u <= v), "p = {p}: {:?} vs {:?}", a.x, b.x);
    }
}

#[test]
fn success_is_monotone_in_p() {
    let c = bit_regular_ara(0.3, 512).unwrap();
    let ok: Vec<bool> = (1..=40).map(|i| run_de(&c.pair, i as f64 * 0.01, &DeConfig::default()).converged_to_zero).collect();
    let first_fail = ok.iter().position(|&s| !s).unwrap();
    assert!(ok[first_fail..].iter().all(|&s| !s));
    assert!(first_fail >= 29, "fails already at p = {}", (first_fail + 1) as f64 * 0.01);
}

#[test]
fn residual_forms_agree_under_swap() {
    for c in ara_pairs() {
        let p = c.spec.p;
        let swapped = symmetry_swap(&c.pair);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let a = fixed_point_residual(&c.pair, p, x, ResidualForm::Standard);
            let b = fixed_point_residual(&swapped, 1.0 - p, 1.0 - x, ResidualForm::Swapped);
            assert!((a - b).abs() < 1e-8, "{:?} x = {x}: {a} vs {b}", c.spec);
        }
    }
}

#[test]
fn six_step_matches_tilted_map() {
    for c in ara_pairs() {
        assert!(reduction_equivalence(&c.pair, c.spec.p).unwrap() < 1e-8);
        assert!(swapped_reduction_equivalence(&c.pair, c.spec.p).unwrap() < 1e-8);
    }
}

#[test]
fn nsira_residual_is_small() {
    for p in [0.2, 0.4] {
        let c = nsira_from_matched(p, 0.94, 512).unwrap();
        assert!(max_residual(&c.pair, p, ResidualForm::Standard) < 1e-6);
        assert!(max_residual(&symmetry_swap(&c.pair), 1.0 - p, ResidualForm::Standard) < 1e-6);
    }
}

#[test]
fn matched_ara_threshold_approaches_design() {
    let c = ara_from_matched(0.5, BParam::Auto, 512).unwrap();
    let t = threshold(&c.pair, &ThresholdConfig::default()).unwrap();
    assert!(t > 0.495 && t <= 0.5 + 1e-3, "{t}");
}
