use ara_core::dd::{
    edge_from_node, node_from_edge, symmetry_swap, t_numeric, t_series, tilt_edge, tilt_node, untilt_node, Profile,
};
use ara_core::{DegreeDist, DegreeDistPair, Family, Side};
use proptest::prelude::*;

const N: usize = 64;

fn member(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 2..=max_degree).prop_filter_map("needs mass", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-2).then(|| std::iter::once(0.0).chain(raw.iter().map(|v| v / total)).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tilt_round_trip(c in member(10), check in any::<bool>()) {
        let side = if check { Side::Check } else { Side::Bit };
        let f = DegreeDist::node_polynomial(&c, side, N).unwrap();
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let (back, _) = untilt_node(&tilt_node(&f, p).unwrap(), p).unwrap();
            prop_assert!(back.series().max_abs_diff(f.series()) < 1e-10, "p = {}", p);
        }
    }

    #[test]
    fn node_edge_round_trip(c in member(12)) {
        let l = DegreeDist::node_polynomial(&c, Side::Bit, N).unwrap();
        let back = node_from_edge(&edge_from_node(&l).unwrap()).unwrap();
        prop_assert!(back.series().max_abs_diff(l.series()) < 1e-12);
        prop_assert!((back.mean_degree() - l.mean_degree()).abs() < 1e-12);
    }

    #[test]
    fn tilt_edge_consistent_with_node_route(a in member(8), b in member(8), p in 0.05f64..0.95) {
        let lam = DegreeDist::edge_polynomial(&a, Side::Bit, N).unwrap();
        let rho = DegreeDist::edge_polynomial(&b, Side::Check, N).unwrap();
        let pair = DegreeDistPair::new(lam.clone(), rho.clone(), Family::Ara, p).unwrap();
        let t = tilt_edge(&pair).unwrap();
        for (orig, tilted) in [(&lam, t.bit()), (&rho, t.check())] {
            let via = edge_from_node(&tilt_node(&node_from_edge(orig).unwrap(), p).unwrap()).unwrap();
            let head = |d: &DegreeDist| d.series().with_precision(N - 1);
            prop_assert!(head(&via).max_abs_diff(&head(tilted)) < 1e-9);
            for i in 0..=10 {
                let x = i as f64 / 10.0;
                prop_assert!((via.edge_value(x) - tilted.edge_value(x)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn swap_twice_is_identity(a in member(6), b in member(6), p in 0.05f64..0.95) {
        let lam = DegreeDist::edge_polynomial(&a, Side::Bit, N).unwrap();
        let rho = DegreeDist::edge_polynomial(&b, Side::Check, N).unwrap();
        let pair = DegreeDistPair::new(lam, rho, Family::Nsira, p).unwrap();
        let s = symmetry_swap(&pair);
        prop_assert_eq!(s.family(), Family::Aldpc);
        prop_assert!((s.p() - (1.0 - p)).abs() < 1e-15);
        let back = symmetry_swap(&s);
        prop_assert_eq!(back.family(), Family::Nsira);
        prop_assert!(back.bit().series().max_abs_diff(pair.bit().series()) < 1e-15);
    }
}

fn geometric_edge(b: f64) -> DegreeDist {
    // (1-b) x / (1-bx) written as a polynomial truncation
    let c: Vec<f64> = (0..N).map(|k| if k == 0 { 0.0 } else { (1.0 - b) * b.powi(k as i32 - 1) }).collect();
    DegreeDist::edge_polynomial(&c, Side::Bit, N).unwrap()
}

#[test]
fn matching_is_an_involution_on_fast_decay() {
    let mix = |a: f64, b: f64| {
        let c: Vec<f64> = geometric_edge(a).coeffs().iter().zip(geometric_edge(b).coeffs()).map(|(x, y)| 0.5 * (x + y)).collect();
        DegreeDist::edge_polynomial(&c, Side::Bit, N).unwrap()
    };
    let head = |d: &DegreeDist| d.series().with_precision(32);
    let twice = |f: &DegreeDist| t_series(&t_series(f).unwrap()).unwrap();
    for b in [0.1, 0.3] {
        let f = geometric_edge(b);
        assert!(head(&twice(&f)).max_abs_diff(&head(&f)) < 1e-9);
    }
    // Tf of a mixture has a finite radius of convergence, so the truncated
    // series is only accurate to ~1e-11 at x = 1 and the second reflection
    // amplifies that to a few 1e-9.
    for f in [mix(0.1, 0.3), mix(0.05, 0.2)] {
        assert!(head(&twice(&f)).max_abs_diff(&head(&f)) < 1e-8);
    }
}

#[test]
fn numeric_and_series_matching_agree_for_geometric_decay() {
    for b in [0.2, 0.4] {
        let f = geometric_edge(b);
        let tn = t_numeric(&f).unwrap();
        let ts = t_series(&f).unwrap();
        for i in 1..=9 {
            let x = i as f64 / 10.0;
            // geometric edge d.d. is matched to itself
            assert!((tn.edge(x) - ts.edge_value(x)).abs() < 1e-7, "b = {b}, x = {x}");
            assert!((tn.edge(x) - f.edge_value(x)).abs() < 1e-7);
        }
    }
}
