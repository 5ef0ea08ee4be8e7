//! Encoder, erasure channel and decoders.

use rand::Rng;

use super::gf2::{determined, BitMatrix};
use super::graph::TannerGraph;
use crate::dd::Family;
use crate::error::{Error, Result};

/// Largest transmitted length accepted by the dense ML decoder.
pub const ML_MAX_N: usize = 4096;

/// Full variable assignment (systematic, punctured and code bits) for `info`.
pub fn encode_full(graph: &TannerGraph, info: &[u8]) -> Result<Vec<u8>> {
    if info.len() != graph.k {
        return Err(Error::LengthMismatch { expected: graph.k, got: info.len() });
    }
    let mut values = vec![0u8; graph.num_vars()];
    let pv = graph.punctured_vars().start;
    match graph.family {
        Family::Ara => {
            let mut acc = 0u8;
            for (i, &u) in info.iter().enumerate() {
                values[i] = u & 1;
                acc ^= u & 1;
                values[pv + i] = acc;
            }
        }
        _ => {
            for (i, &u) in info.iter().enumerate() {
                values[pv + i] = u & 1;
            }
        }
    }
    // The second layer follows from the check adjacency: every check's last
    // two entries are c_j and c_{j-1}, the rest are punctured bits.
    let pc1 = graph.num_checks() - graph.m;
    let cv = graph.code_vars().start;
    let mut acc = 0u8;
    for j in 0..graph.m {
        let nbrs = graph.check(pc1 + j);
        let tail = if j > 0 { 2 } else { 1 };
        let s = nbrs[..nbrs.len() - tail].iter().fold(0u8, |a, &v| a ^ values[v as usize]);
        acc ^= s;
        values[cv + j] = acc;
    }
    Ok(values)
}

/// Transmitted word: `u ∥ c` for ARA, `c` for NSIRA.
pub fn encode(graph: &TannerGraph, info: &[u8]) -> Result<Vec<u8>> {
    let full = encode_full(graph, info)?;
    Ok(graph.transmitted_vars().into_iter().map(|v| full[v]).collect())
}

/// What the decoder sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelOutput {
    pub values: Vec<u8>,
    pub erased: Vec<bool>,
}

impl ChannelOutput {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn erasures(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }
}

/// Erases each position independently with probability `p`.
pub fn bec_transmit<R: Rng + ?Sized>(word: &[u8], p: f64, rng: &mut R) -> ChannelOutput {
    let erased: Vec<bool> = word.iter().map(|_| rng.random::<f64>() < p).collect();
    let values = word.iter().zip(&erased).map(|(&b, &e)| if e { 0 } else { b }).collect();
    ChannelOutput { values, erased }
}

/// Residual graph after peeling stops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StoppingSetReport {
    pub unresolved_vars: Vec<u32>,
    pub unresolved_checks: Vec<u32>,
}

/// Decoder state over all graph variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeState {
    pub values: Vec<u8>,
    pub known: Vec<bool>,
}

impl DecodeState {
    /// Known transmitted bits, everything else unknown.
    pub fn from_channel(graph: &TannerGraph, received: &ChannelOutput) -> Result<Self> {
        let tx = graph.transmitted_vars();
        if received.values.len() != tx.len() || received.erased.len() != tx.len() {
            return Err(Error::LengthMismatch { expected: tx.len(), got: received.values.len() });
        }
        let mut values = vec![0u8; graph.num_vars()];
        let mut known = vec![false; graph.num_vars()];
        for (pos, &v) in tx.iter().enumerate() {
            if !received.erased[pos] {
                values[v] = received.values[pos] & 1;
                known[v] = true;
            }
        }
        Ok(Self { values, known })
    }

    /// Information bits still unknown.
    pub fn erased_info(&self, graph: &TannerGraph) -> Vec<usize> {
        graph.info_vars().filter(|&v| !self.known[v]).collect()
    }

    /// Information bit values in order.
    pub fn info(&self, graph: &TannerGraph) -> Vec<u8> {
        graph.info_vars().map(|v| self.values[v]).collect()
    }

    pub fn all_known(&self) -> bool {
        self.known.iter().all(|&k| k)
    }
}

/// Result of peeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeelOutcome {
    /// Every variable was resolved; carries the information bits.
    Success(Vec<u8>),
    Stopped(StoppingSetReport),
}

impl PeelOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, PeelOutcome::Success(_))
    }
}

/// Runs the peeling decoder in place until no check has exactly one
/// unknown neighbour.
pub fn peel(graph: &TannerGraph, state: &mut DecodeState) -> StoppingSetReport {
    let nc = graph.num_checks();
    let mut unknown = vec![0u32; nc];
    let mut parity = vec![0u8; nc];
    let mut queue = Vec::new();
    for (c, (u, s)) in unknown.iter_mut().zip(parity.iter_mut()).enumerate() {
        for &v in graph.check(c) {
            if state.known[v as usize] {
                *s ^= state.values[v as usize];
            } else {
                *u += 1;
            }
        }
        if *u == 1 {
            queue.push(c);
        }
    }
    while let Some(c) = queue.pop() {
        if unknown[c] != 1 {
            continue;
        }
        let v = graph.check(c).iter().map(|&v| v as usize).find(|&v| !state.known[v]).expect("one unknown");
        let bit = parity[c];
        state.values[v] = bit;
        state.known[v] = true;
        for &c2 in graph.var_checks(v) {
            let c2 = c2 as usize;
            parity[c2] ^= bit;
            unknown[c2] -= 1;
            if unknown[c2] == 1 {
                queue.push(c2);
            }
        }
    }
    StoppingSetReport {
        unresolved_vars: (0..graph.num_vars()).filter(|&v| !state.known[v]).map(|v| v as u32).collect(),
        unresolved_checks: (0..nc).filter(|&c| unknown[c] > 0).map(|c| c as u32).collect(),
    }
}

/// Peeling decoder from a channel output.
pub fn peel_decode(graph: &TannerGraph, received: &ChannelOutput) -> Result<PeelOutcome> {
    let mut state = DecodeState::from_channel(graph, received)?;
    let report = peel(graph, &mut state);
    Ok(if report.unresolved_vars.is_empty() {
        PeelOutcome::Success(state.info(graph))
    } else {
        PeelOutcome::Stopped(report)
    })
}

/// Result of maximum-likelihood erasure decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MlOutcome {
    Success(Vec<u8>),
    /// Number of unknowns left undetermined.
    Unrecoverable { undetermined: usize },
}

impl MlOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, MlOutcome::Success(_))
    }
}

/// Solves the parity-check system for every unknown variable by Gaussian
/// elimination; succeeds iff the solution is unique.
pub fn ml_erasure_decode(graph: &TannerGraph, received: &ChannelOutput) -> Result<MlOutcome> {
    if graph.n() > ML_MAX_N {
        return Err(Error::SizeGuard { n: graph.n(), max: ML_MAX_N });
    }
    let mut state = DecodeState::from_channel(graph, received)?;
    let unknowns: Vec<usize> = (0..graph.num_vars()).filter(|&v| !state.known[v]).collect();
    let mut col = vec![usize::MAX; graph.num_vars()];
    for (i, &v) in unknowns.iter().enumerate() {
        col[v] = i;
    }
    let nu = unknowns.len();
    let mut m = BitMatrix::zeros(graph.num_checks(), nu + 1);
    for c in 0..graph.num_checks() {
        for &v in graph.check(c) {
            let v = v as usize;
            if state.known[v] {
                if state.values[v] == 1 {
                    m.flip(c, nu);
                }
            } else {
                m.flip(c, col[v]);
            }
        }
    }
    let pivots = m.rref(nu);
    if pivots.len() < nu {
        return Ok(MlOutcome::Unrecoverable { undetermined: nu - determined(&m, &pivots, nu).len() });
    }
    for (c, bit) in determined(&m, &pivots, nu) {
        state.values[unknowns[c]] = bit as u8;
        state.known[unknowns[c]] = true;
    }
    Ok(MlOutcome::Success(state.info(graph)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::graph::{DegreeTemplate, DEFAULT_TAIL_MASS};
    use crate::{DegreeDist, Side};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(family: Family, k: usize, seed: u64) -> TannerGraph {
        let l = DegreeDist::node_polynomial(&[0.0, 0.0, 0.5, 0.5], Side::Bit, 16).unwrap();
        let r = DegreeDist::node_polynomial(&[0.0, 0.0, 0.0, 1.0], Side::Check, 16).unwrap();
        DegreeTemplate::new(family, &l, &r, k, DEFAULT_TAIL_MASS)
            .unwrap()
            .sample(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn step_response() {
        let g = graph(Family::Ara, 20, 1);
        let mut u = vec![0u8; 20];
        u[0] = 1;
        let full = encode_full(&g, &u).unwrap();
        assert!(full[g.punctured_vars()].iter().all(|&v| v == 1));
        assert!(encode(&g, &[0; 20]).unwrap().iter().all(|&b| b == 0));
        assert!(encode(&g, &[0; 3]).is_err());
    }

    #[test]
    fn encoded_words_satisfy_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for family in [Family::Ara, Family::Nsira] {
            let g = graph(family, 64, 3);
            for _ in 0..200 {
                let info: Vec<u8> = (0..64).map(|_| rng.random_range(0..2)).collect();
                assert!(g.satisfies(&encode_full(&g, &info).unwrap()));
            }
        }
    }

    #[test]
    fn channel_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let w = vec![1u8; 100];
        assert_eq!(bec_transmit(&w, 0.0, &mut rng).erasures(), 0);
        assert_eq!(bec_transmit(&w, 1.0, &mut rng).erasures(), 100);
    }

    #[test]
    fn peel_and_ml_agree_on_easy_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = graph(Family::Ara, 32, 2);
        let info: Vec<u8> = (0..32).map(|_| rng.random_range(0..2)).collect();
        let word = encode(&g, &info).unwrap();
        let clean = bec_transmit(&word, 0.0, &mut rng);
        assert_eq!(peel_decode(&g, &clean).unwrap(), PeelOutcome::Success(info.clone()));
        assert_eq!(ml_erasure_decode(&g, &clean).unwrap(), MlOutcome::Success(info.clone()));
        for pos in 0..word.len() {
            let mut rx = clean.clone();
            rx.erased[pos] = true;
            rx.values[pos] = 0;
            assert!(ml_erasure_decode(&g, &rx).unwrap().is_success());
        }
        let all = bec_transmit(&word, 1.0, &mut rng);
        match peel_decode(&g, &all).unwrap() {
            PeelOutcome::Stopped(r) => {
                assert_eq!(r.unresolved_vars.len(), g.num_vars());
                assert_eq!(r.unresolved_checks.len(), g.num_checks());
            }
            other => panic!("expected a stopping set, got {other:?}"),
        }
        assert!(!ml_erasure_decode(&g, &all).unwrap().is_success());
    }
}
