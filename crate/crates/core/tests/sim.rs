use ara_core::sim::*;
use ara_core::{build, BParam, Construction, DegreeDist, EnsembleSpec, Family, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bit_regular() -> Construction {
    build(&EnsembleSpec::regular(Family::Ara, 0.3, 3, Side::Bit)).unwrap()
}

fn matched() -> Construction {
    build(&EnsembleSpec::matched(Family::Ara, 0.5, BParam::Value(0.94))).unwrap()
}

fn nsira() -> Construction {
    build(&EnsembleSpec::matched(Family::Nsira, 0.4, BParam::Value(0.94))).unwrap()
}

#[test]
fn realized_mean_degree_tracks_truncated_moment() {
    let c = build(&EnsembleSpec::matched(Family::Ara, 0.5, BParam::Value(0.94))).unwrap();
    let counts = realize_degrees(&c.bit_node, 10_000, DEFAULT_TAIL_MASS).unwrap();
    assert_eq!(counts.iter().sum::<usize>(), 10_000);
    let d_max = counts.len() - 1;
    let l = c.bit_node.coeffs();
    let mass: f64 = l[1..=d_max].iter().sum();
    let truncated_mean: f64 = (1..=d_max).map(|d| d as f64 * l[d]).sum::<f64>() / mass;
    let realized: f64 = counts.iter().enumerate().map(|(d, &n)| (d * n) as f64).sum::<f64>() / 10_000.0;
    assert!(((realized - truncated_mean) / truncated_mean).abs() < 0.01, "{realized} vs {truncated_mean}");
    assert!(mass > 1.0 - DEFAULT_TAIL_MASS);
}

#[test]
fn edge_balance_matches_rate_accounting() {
    let c = bit_regular();
    let k = 100_000;
    let tpl = template(&c, k, DEFAULT_TAIL_MASS).unwrap();
    assert_eq!(tpl.edges(), 3 * k);
    assert_eq!(tpl.check_degrees.iter().map(|&d| d as usize).sum::<usize>(), 3 * k);
    // m = k L'(1)/R'(1) with the truncated check mean
    let r = c.check_node.coeffs();
    let counts = realize_degrees(&c.check_node, 1 << 20, DEFAULT_TAIL_MASS).unwrap();
    let d_max = counts.len() - 1;
    let mass: f64 = r[1..=d_max].iter().sum();
    let mean: f64 = (1..=d_max).map(|d| d as f64 * r[d]).sum::<f64>() / mass;
    let expect = 3.0 * k as f64 / mean;
    assert!((tpl.m() as f64 - expect).abs() / expect < 0.02, "m = {} vs {expect}", tpl.m());
}

#[test]
fn encoder_satisfies_every_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in [bit_regular(), matched(), nsira()] {
        let tpl = template(&c, 300, DEFAULT_TAIL_MASS).unwrap();
        let g = tpl.sample(&mut rng);
        assert!(g.satisfies(&encode_full(&g, &vec![0; g.k]).unwrap()));
        for _ in 0..1000 {
            let info: Vec<u8> = (0..g.k).map(|_| rng.random_range(0..2)).collect();
            let full = encode_full(&g, &info).unwrap();
            assert!(g.satisfies(&full));
            assert_eq!(encode(&g, &info).unwrap().len(), g.n());
        }
    }
}

#[test]
fn erasure_fraction_concentrates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let out = bec_transmit(&vec![0u8; 1_000_000], 0.5, &mut rng);
    let frac = out.erasures() as f64 / 1e6;
    assert!((frac - 0.5).abs() < 0.002, "{frac}");
    let again = bec_transmit(&vec![0u8; 1000], 0.5, &mut ChaCha8Rng::seed_from_u64(3));
    assert_eq!(again.erased[..], out.erased[..1000]);
}

#[test]
fn peeling_never_beats_ml() {
    let mut violations = 0;
    let mut peel_only_failures = 0;
    for (ci, c) in [bit_regular(), matched()].into_iter().enumerate() {
        let tpl = template(&c, 56, DEFAULT_TAIL_MASS).unwrap();
        assert!(tpl.n() <= 128);
        for t in 0..500u64 {
            let mut rng = trial_rng(99, ci as u64, t);
            let g = tpl.sample(&mut rng);
            let info: Vec<u8> = (0..g.k).map(|_| rng.random_range(0..2)).collect();
            let word = encode(&g, &info).unwrap();
            let rx = bec_transmit(&word, rng.random_range(0.05..0.6), &mut rng);
            let peel = peel_decode(&g, &rx).unwrap();
            let ml = ml_erasure_decode(&g, &rx).unwrap();
            if let PeelOutcome::Success(bits) = &peel {
                assert_eq!(bits, &info);
                if !ml.is_success() {
                    violations += 1;
                }
            } else if ml.is_success() {
                peel_only_failures += 1;
            }
            if let MlOutcome::Success(bits) = &ml {
                assert_eq!(bits, &info);
            }
        }
    }
    assert_eq!(violations, 0);
    assert!(peel_only_failures > 0, "expected some peeling-specific failures");
}

#[test]
fn single_erasure_is_always_recovered_by_ml() {
    let c = bit_regular();
    let tpl = template(&c, 40, DEFAULT_TAIL_MASS).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = tpl.sample(&mut rng);
    let info: Vec<u8> = (0..g.k).map(|_| rng.random_range(0..2)).collect();
    let word = encode(&g, &info).unwrap();
    for pos in 0..word.len() {
        let mut erased = vec![false; word.len()];
        erased[pos] = true;
        let rx = ChannelOutput { values: word.clone(), erased };
        assert_eq!(ml_erasure_decode(&g, &rx).unwrap(), MlOutcome::Success(info.clone()));
    }
}

#[test]
fn ml_size_guard() {
    let c = bit_regular();
    let tpl = template(&c, 4000, DEFAULT_TAIL_MASS).unwrap();
    let g = tpl.sample(&mut ChaCha8Rng::seed_from_u64(0));
    let rx = ChannelOutput { values: vec![0; g.n()], erased: vec![false; g.n()] };
    assert!(matches!(ml_erasure_decode(&g, &rx), Err(ara_core::Error::SizeGuard { .. })));
}

#[test]
fn outer_code_rank_statistics() {
    let (k, r) = (512, 13);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for w in [1usize, 4, 8, 12, 13] {
        let trials = 10_000 / 5;
        let mut ok = 0;
        for _ in 0..trials {
            let code = OuterCode::random(k, r, &mut rng).unwrap();
            let positions: Vec<usize> = rand::seq::index::sample(&mut rng, k, w).into_vec();
            ok += code.corrects(&positions) as usize;
        }
        let measured = ok as f64 / trials as f64;
        let expect = correctable_probability(w, r);
        let sd = (expect * (1.0 - expect) / trials as f64).sqrt();
        assert!((measured - expect).abs() < 5.0 * sd + 1e-3, "w = {w}: {measured} vs {expect}");
        if w < r {
            assert!(measured >= 0.5, "w = {w}");
        }
    }
}

#[test]
fn zero_erasure_channel_has_no_errors() {
    // Systematic: every information bit is observed.
    let cfg = SimConfig::new(500, 20, 4).with_pilots(0.0);
    for c in [matched(), bit_regular()] {
        let r = monte_carlo(&c, &[0.0], &cfg).unwrap();
        assert_eq!(r[0].ber, 0.0);
        assert_eq!(r[0].wer, 0.0);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let c = matched();
    let cfg = SimConfig::new(400, 60, 17).with_outer(5);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo(&c, &[0.3, 0.45], &cfg).unwrap())
    };
    let a = results_csv(&run(1));
    let b = results_csv(&run(4));
    assert_eq!(a, b);
    assert!(a.starts_with(CSV_HEADER));
}

#[test]
fn fixed_graph_mode_runs() {
    let c = bit_regular();
    let mut cfg = SimConfig::new(300, 10, 2);
    cfg.fresh_graph = false;
    let r = monte_carlo(&c, &[0.2], &cfg).unwrap();
    assert_eq!(r[0].trials, 10);
}

fn edge_view(l: &DegreeDist) -> DegreeDist {
    ara_core::dd::edge_from_node(l).unwrap()
}

#[test]
fn unsupported_inputs() {
    let ldpc = build(&EnsembleSpec::ldpc("x^2", "x^5")).unwrap();
    assert!(monte_carlo(&ldpc, &[0.1], &SimConfig::new(10, 1, 0)).is_err());
    assert!(monte_carlo(&matched(), &[0.1], &SimConfig::new(10, 0, 0)).is_err());
    assert!(monte_carlo(&matched(), &[1.5], &SimConfig::new(10, 1, 0)).is_err());
    let l = DegreeDist::node_polynomial(&[0.0, 0.0, 1.0], Side::Bit, 8).unwrap();
    assert!(realize_degrees(&l, 10, DEFAULT_TAIL_MASS).is_ok());
    assert!(realize_degrees(&l, 10, 0.0).is_err());
    assert!(realize_degrees(&edge_view(&l), 10, DEFAULT_TAIL_MASS).is_err());
}

#[test]
fn nsira_at_zero_erasures_is_near_clean() {
    // Information bits are punctured, so only stopping sets of the
    // underlying graph can cause losses.
    let r = monte_carlo(&nsira(), &[0.0], &SimConfig::new(2000, 50, 4)).unwrap();
    assert!(r[0].ber < 1e-3, "{}", r[0].ber);
}
