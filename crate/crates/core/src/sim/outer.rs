//! Random high-rate outer code on the information bits.

use rand::Rng;

use super::gf2::{determined, BitMatrix};
use crate::error::{Error, Result};

const MAX_RESAMPLES: usize = 64;

/// Parses `a/b` into the outer redundancy `b - a`.
pub fn parse_outer_rate(s: &str) -> Result<usize> {
    let bad = || Error::InvalidInput(format!("outer rate must look like 8179/8192, got '{s}'"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(b - a)
}

/// An `r × k` parity matrix of full row rank, kept in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterCode {
    k: usize,
    h: BitMatrix,
    pivots: Vec<usize>,
}

impl OuterCode {
    /// Draws uniform random rows until the matrix has rank `r`.
    pub fn random<R: Rng + ?Sized>(k: usize, r: usize, rng: &mut R) -> Result<Self> {
        if r > k {
            return Err(Error::InvalidInput(format!("outer redundancy {r} exceeds k = {k}")));
        }
        for _ in 0..MAX_RESAMPLES {
            let mut h = BitMatrix::zeros(r, k);
            for i in 0..r {
                for j in 0..k {
                    if rng.random::<bool>() {
                        h.set(i, j, true);
                    }
                }
            }
            let pivots = h.rref(k);
            if pivots.len() == r {
                return Ok(Self { k, h, pivots });
            }
            log::debug!("outer parity matrix rank {} < {r}; resampling", pivots.len());
        }
        Err(Error::SingularMatrix)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn redundancy(&self) -> usize {
        self.pivots.len()
    }

    /// Uniform random word in the null space.
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        let mut x: Vec<u8> = (0..self.k).map(|_| rng.random_range(0..2u8)).collect();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let mut bit = 0u8;
            for j in 0..self.k {
                if j != pc && self.h.get(row, j) {
                    bit ^= x[j];
                }
            }
            x[pc] = bit;
        }
        x
    }

    pub fn is_codeword(&self, x: &[u8]) -> bool {
        (0..self.redundancy()).all(|i| (0..self.k).filter(|&j| self.h.get(i, j)).fold(0u8, |a, j| a ^ x[j]) == 0)
    }

    /// Whether erasures at `positions` are uniquely recoverable.
    pub fn corrects(&self, positions: &[usize]) -> bool {
        let mut m = BitMatrix::zeros(self.redundancy(), positions.len());
        for i in 0..self.redundancy() {
            for (c, &j) in positions.iter().enumerate() {
                m.set(i, c, self.h.get(i, j));
            }
        }
        m.rank() == positions.len()
    }

    /// Fills whatever erased bits the parity checks determine. Returns the
    /// positions resolved.
    pub fn decode(&self, values: &mut [u8], known: &mut [bool]) -> Vec<usize> {
        let erased: Vec<usize> = (0..self.k).filter(|&j| !known[j]).collect();
        if erased.is_empty() || self.redundancy() == 0 {
            return Vec::new();
        }
        let ne = erased.len();
        let mut m = BitMatrix::zeros(self.redundancy(), ne + 1);
        for i in 0..self.redundancy() {
            let mut rhs = 0u8;
            for j in 0..self.k {
                if self.h.get(i, j) && known[j] {
                    rhs ^= values[j];
                }
            }
            m.set(i, ne, rhs == 1);
            for (c, &j) in erased.iter().enumerate() {
                m.set(i, c, self.h.get(i, j));
            }
        }
        let pivots = m.rref(ne);
        determined(&m, &pivots, ne)
            .into_iter()
            .map(|(c, bit)| {
                let j = erased[c];
                values[j] = bit as u8;
                known[j] = true;
                j
            })
            .collect()
    }
}

/// Probability that `w` fixed erasures are correctable by a uniformly random
/// `r × k` parity matrix: `Π_{i<w} (1 - 2^{i-r})`.
pub fn correctable_probability(w: usize, r: usize) -> f64 {
    if w > r {
        return 0.0;
    }
    (0..w).map(|i| 1.0 - 2f64.powi(i as i32 - r as i32)).product()
}
