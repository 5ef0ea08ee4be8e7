use ara_core::series::{lambert_w0, PowerSeries};
use proptest::prelude::*;

const N: usize = 24;

fn series(c0: std::ops::RangeInclusive<f64>) -> impl Strategy<Value = PowerSeries> {
    (c0, prop::collection::vec(-1.0f64..1.0, N - 1)).prop_map(|(a, rest)| {
        let mut c = vec![a];
        c.extend(rest);
        PowerSeries::new(c).unwrap()
    })
}

fn close(a: &PowerSeries, b: &PowerSeries, tol: f64) -> bool {
    a.max_abs_diff(b) < tol
}

fn sup(a: &PowerSeries) -> f64 {
    a.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributivity(a in series(-1.0..=1.0), b in series(-1.0..=1.0), c in series(-1.0..=1.0)) {
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn multiplication_commutes(a in series(-1.0..=1.0), b in series(-1.0..=1.0)) {
        prop_assert!(close(&a.mul(&b), &b.mul(&a), 1e-12));
    }

    #[test]
    fn division_round_trips(a in series(-1.0..=1.0), b in series(0.5..=1.5), neg in any::<bool>()) {
        let b = if neg { b.scale(-1.0) } else { b };
        let q = a.div(&b).unwrap();
        // Quotient coefficients can grow geometrically; rounding scales with them.
        prop_assert!(close(&q.mul(&b), &a, 1e-10 * sup(&q)));
    }

    #[test]
    fn reversion_round_trips(mut coeffs in prop::collection::vec(-0.3f64..0.3, N), slope in 0.5f64..2.0, neg in any::<bool>()) {
        coeffs[0] = 0.0;
        coeffs[1] = if neg { -slope } else { slope };
        let f = PowerSeries::new(coeffs).unwrap();
        let g = f.reversion().unwrap();
        let err = f.compose(&g).unwrap().max_abs_diff(&PowerSeries::x(N));
        prop_assert!(err < 1e-9 * sup(&g), "err {} sup {}", err, sup(&g));
    }

    #[test]
    fn integrate_after_differentiate(raw in prop::collection::vec(0.0f64..1.0, N - 1)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let mut c = vec![0.0];
        c.extend(raw.iter().map(|v| v / total));
        let g = PowerSeries::new(c).unwrap();
        let back = g.differentiate_normalized().unwrap().integrate_normalized().unwrap();
        // differentiation drops the top coefficient at fixed precision
        let trimmed = PowerSeries::from_slice(&g.coeffs()[..N - 1], N).unwrap();
        let back = PowerSeries::from_slice(&back.coeffs()[..N - 1], N).unwrap();
        let scale = g.coeffs()[..N - 1].iter().sum::<f64>();
        prop_assert!(close(&back.scale(scale), &trimmed, 1e-12) || close(&back, &trimmed, 1e-12));
    }
}

#[test]
fn lambert_residual_on_grid() {
    let e_inv = (-1.0f64).exp();
    for i in 0..=1000 {
        let x = -e_inv * (1.0 - i as f64 / 1000.0);
        let w = lambert_w0(x).unwrap();
        assert!((w * w.exp() - x).abs() < 1e-14, "x = {x}");
    }
}
