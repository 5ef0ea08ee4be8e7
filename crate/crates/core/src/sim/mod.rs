//! Finite-length simulation over the BEC.
//!
//! A [`DegreeTemplate`] fixes integer degree sequences for a construction;
//! each trial shuffles them into a fresh [`TannerGraph`], encodes random
//! information bits, erases positions independently and runs the peeling
//! decoder (optionally followed by a random outer code). Trials use
//! independent ChaCha streams keyed by `(seed, p index, trial)`, and counts
//! are integers, so results do not depend on the thread count.

pub mod codec;
pub mod gf2;
pub mod graph;
pub mod outer;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use codec::{
    bec_transmit, encode, encode_full, ml_erasure_decode, peel, peel_decode, ChannelOutput, DecodeState,
    MlOutcome, PeelOutcome, StoppingSetReport, ML_MAX_N,
};
pub use graph::{realize_degrees, DegreeTemplate, TannerGraph, DEFAULT_TAIL_MASS};
pub use outer::{correctable_probability, parse_outer_rate, OuterCode};

use crate::construct::Construction;
use crate::dd::{format_f64, Family};
use crate::error::{Error, Result};

/// Default fraction of punctured bits revealed as pilots. Without any known
/// punctured bit the all-erased state is a fixed point of peeling and the
/// decoder only starts from the accumulator boundaries.
pub const DEFAULT_PILOT_FRACTION: f64 = 0.01;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

/// Monte-Carlo knobs.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Information bits per block.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Outer-code redundancy; zero disables the outer code.
    pub outer_redundancy: usize,
    /// Sample a new graph for every trial (otherwise one graph per run).
    pub fresh_graph: bool,
    pub tail_mass: f64,
    /// Fraction of punctured bits revealed to the decoder as pilots.
    pub pilot_fraction: f64,
}

impl SimConfig {
    pub fn new(k: usize, trials: usize, seed: u64) -> Self {
        Self { k, trials, seed, outer_redundancy: 0, fresh_graph: true, tail_mass: DEFAULT_TAIL_MASS, pilot_fraction: DEFAULT_PILOT_FRACTION }
    }

    pub fn with_pilots(mut self, fraction: f64) -> Self {
        self.pilot_fraction = fraction;
        self
    }

    pub fn with_outer(mut self, r: usize) -> Self {
        self.outer_redundancy = r;
        self
    }
}

/// Aggregated statistics for one channel erasure probability.
#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub family: Family,
    pub p_design: f64,
    pub b: Option<f64>,
    pub n: usize,
    pub k: usize,
    pub rate_realized: f64,
    pub p_channel: f64,
    pub trials: usize,
    pub info_bit_erasures: u64,
    pub word_erasures: u64,
    pub ber: f64,
    /// Half-width of the normal 95% interval on the bit erasure rate.
    pub ber_ci95: f64,
    pub wer: f64,
    /// Half-width of the Wilson 95% interval on the word erasure rate.
    pub wer_ci95: f64,
    pub wer_interval: (f64, f64),
    pub seed: u64,
}

pub const CSV_HEADER: &str = "family,p_design,b,n,k,rate_realized,p_channel,trials,ber,ber_ci95,wer,wer_ci95,seed";

impl SimResult {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            format_f64(self.p_design),
            self.b.map(format_f64).unwrap_or_default(),
            self.n,
            self.k,
            format_f64(self.rate_realized),
            format_f64(self.p_channel),
            self.trials,
            format_f64(self.ber),
            format_f64(self.ber_ci95),
            format_f64(self.wer),
            format_f64(self.wer_ci95),
            self.seed
        )
    }
}

/// Header plus one row per result.
pub fn results_csv(results: &[SimResult]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in results {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (n, ph) = (n as f64, successes as f64 / n as f64);
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / denom;
    let half = Z95 * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Information-bit count that gives a transmitted length close to `n`.
pub fn k_for_block_length(construction: &Construction, n: usize) -> Result<usize> {
    let rate = construction
        .complexity
        .as_ref()
        .map(|c| c.design_rate)
        .ok_or(Error::UnsupportedFamily { family: construction.spec.family, op: "simulate" })?;
    Ok(((n as f64 * rate).round() as usize).max(1))
}

/// Degree template for a construction at `k` information bits.
pub fn template(construction: &Construction, k: usize, tail_mass: f64) -> Result<DegreeTemplate> {
    DegreeTemplate::new(construction.spec.family, &construction.bit_node, &construction.check_node, k, tail_mass)
}

/// Seeded generator for one trial.
pub fn trial_rng(seed: u64, p_index: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p_index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    erased: u64,
    erased_sq: u128,
    words: u64,
    wrong: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            erased: self.erased + o.erased,
            erased_sq: self.erased_sq + o.erased_sq,
            words: self.words + o.words,
            wrong: self.wrong + o.wrong,
        }
    }
}

/// Outcome of a single simulated block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Information bits left erased after decoding.
    pub erased_info: usize,
    /// Information bits resolved to a wrong value (always zero on the BEC).
    pub wrong_info: usize,
}

/// One block: sample or reuse a graph, encode, erase, peel, outer-decode.
pub fn run_trial(
    tpl: &DegreeTemplate,
    fixed_graph: Option<&TannerGraph>,
    p: f64,
    outer_redundancy: usize,
    pilot_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let sampled;
    let graph = match fixed_graph {
        Some(g) => g,
        None => {
            sampled = tpl.sample(rng);
            &sampled
        }
    };
    let outer = (outer_redundancy > 0).then(|| OuterCode::random(graph.k, outer_redundancy, rng)).transpose()?;
    let info = match &outer {
        Some(o) => o.random_word(rng),
        None => (0..graph.k).map(|_| rand::Rng::random_range(rng, 0..2u8)).collect(),
    };
    let word = encode(graph, &info)?;
    let rx = bec_transmit(&word, p, rng);
    let mut state = DecodeState::from_channel(graph, &rx)?;
    let pilots = pilot_count(graph.k, pilot_fraction);
    if pilots > 0 {
        let full = encode_full(graph, &info)?;
        let pv = graph.punctured_vars().start;
        for i in rand::seq::index::sample(rng, graph.k, pilots) {
            state.values[pv + i] = full[pv + i];
            state.known[pv + i] = true;
        }
    }
    peel(graph, &mut state);
    if let Some(o) = &outer {
        let info_range = graph.info_vars();
        // Outer and inner decoding can feed each other; stop once neither moves.
        loop {
            let mut vals: Vec<u8> = state.values[info_range.clone()].to_vec();
            let mut known: Vec<bool> = state.known[info_range.clone()].to_vec();
            if known.iter().all(|&k| k) || o.decode(&mut vals, &mut known).is_empty() {
                break;
            }
            for (i, v) in info_range.clone().enumerate() {
                state.values[v] = vals[i];
                state.known[v] = known[i];
            }
            peel(graph, &mut state);
        }
    }
    let erased_info = state.erased_info(graph).len();
    let wrong_info =
        graph.info_vars().filter(|&v| state.known[v] && state.values[v] != info[v - graph.info_vars().start]).count();
    Ok(TrialOutcome { erased_info, wrong_info })
}

/// Number of pilot bits for `k` punctured bits.
pub fn pilot_count(k: usize, fraction: f64) -> usize {
    ((k as f64 * fraction).ceil() as usize).min(k)
}

/// Runs `cfg.trials` blocks at every channel erasure probability.
pub fn monte_carlo(construction: &Construction, p_list: &[f64], cfg: &SimConfig) -> Result<Vec<SimResult>> {
    let family = construction.spec.family;
    if !matches!(family, Family::Ara | Family::Nsira) {
        return Err(Error::UnsupportedFamily { family, op: "simulate" });
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    if let Some(p) = p_list.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("channel erasure probability {p} outside [0, 1]")));
    }
    let tpl = template(construction, cfg.k, cfg.tail_mass)?;
    let fixed = (!cfg.fresh_graph).then(|| tpl.sample(&mut trial_rng(cfg.seed, u64::MAX, 0)));
    let k = tpl.k();
    let mut out = Vec::with_capacity(p_list.len());
    for (pi, &p) in p_list.iter().enumerate() {
        let tally = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| -> Result<Tally> {
                let mut rng = trial_rng(cfg.seed, pi as u64, t);
                let o = run_trial(&tpl, fixed.as_ref(), p, cfg.outer_redundancy, cfg.pilot_fraction, &mut rng)?;
                let e = o.erased_info as u64;
                Ok(Tally { erased: e, erased_sq: (e as u128) * (e as u128), words: (e > 0) as u64, wrong: o.wrong_info as u64 })
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        if tally.wrong > 0 {
            log::error!("{} information bits decoded to wrong values at p = {p}", tally.wrong);
        }
        let t = cfg.trials as f64;
        let kf = k as f64;
        let ber = tally.erased as f64 / (kf * t);
        let ber_ci95 = if cfg.trials > 1 {
            let var = ((tally.erased_sq as f64) / (kf * kf) - t * ber * ber).max(0.0) / (t - 1.0);
            Z95 * (var / t).sqrt()
        } else {
            0.0
        };
        let wer = tally.words as f64 / t;
        let wer_interval = wilson_interval(tally.words, cfg.trials as u64);
        out.push(SimResult {
            family,
            p_design: construction.spec.p,
            b: construction.b,
            n: tpl.n(),
            k,
            rate_realized: tpl.rate(),
            p_channel: p,
            trials: cfg.trials,
            info_bit_erasures: tally.erased,
            word_erasures: tally.words,
            ber,
            ber_ci95,
            wer,
            wer_ci95: (wer_interval.1 - wer_interval.0) / 2.0,
            wer_interval,
            seed: cfg.seed,
        });
    }
    Ok(out)
}

/// Sampled-graph edge count per information bit.
pub fn edges_per_info_bit(construction: &Construction, k: usize, seed: u64) -> Result<f64> {
    let tpl = template(construction, k, DEFAULT_TAIL_MASS)?;
    let g = tpl.sample(&mut trial_rng(seed, 0, 0));
    Ok(g.edge_count() as f64 / g.k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo < 1e-15);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn trial_streams_differ() {
        use rand::Rng;
        let a: u64 = trial_rng(1, 0, 0).random();
        let b: u64 = trial_rng(1, 0, 1).random();
        let c: u64 = trial_rng(1, 1, 0).random();
        assert!(a != b && a != c && b != c);
        assert_eq!(a, trial_rng(1, 0, 0).random::<u64>());
    }
}
