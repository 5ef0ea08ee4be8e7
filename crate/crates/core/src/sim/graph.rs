//! Finite Tanner graphs sampled from an ensemble.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dd::{DegreeDist, Family, Perspective};
use crate::error::{Error, Result};

/// Node CDF that the realized degree support must exceed.
pub const DEFAULT_TAIL_MASS: f64 = 1e-3;

/// Integer node counts per degree by largest-remainder rounding.
///
/// Degrees are cut at the smallest `D` with `Σ_{i≤D} N_i > 1 - tail_mass`;
/// fractions over `1..=D` are renormalized, floored, and the remaining nodes
/// go to the largest remainders (ties to the lower degree). Returns
/// `counts[d]` for `d = 0..=D`.
pub fn realize_degrees(dd: &DegreeDist, count: usize, tail_mass: f64) -> Result<Vec<usize>> {
    if dd.perspective() != Perspective::Node {
        return Err(Error::InvalidInput("realize_degrees needs a node-perspective distribution".into()));
    }
    let coeffs = dd.coeffs();
    let mut cdf = 0.0;
    let mut max_degree = None;
    for (d, &c) in coeffs.iter().enumerate().skip(1) {
        cdf += c.max(0.0);
        if cdf > 1.0 - tail_mass {
            max_degree = Some(d);
            break;
        }
    }
    let d_max = max_degree.ok_or_else(|| {
        Error::DegenerateDist(format!(
            "node CDF reaches only {cdf} within {} coefficients (needs > {})",
            coeffs.len(),
            1.0 - tail_mass
        ))
    })?;
    let weights: Vec<f64> = (0..=d_max).map(|d| if d == 0 { 0.0 } else { coeffs[d].max(0.0) / cdf }).collect();
    let mut counts: Vec<usize> = weights.iter().map(|w| (w * count as f64).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (1..=d_max).collect();
    let rem = |d: usize| weights[d] * count as f64 - counts[d] as f64;
    order.sort_by(|&a, &b| rem(b).total_cmp(&rem(a)).then(a.cmp(&b)));
    for &d in order.iter().take(count.saturating_sub(assigned)) {
        counts[d] += 1;
    }
    Ok(counts)
}

/// Expands per-degree counts into one degree per node, lowest degree first.
pub fn degree_list(counts: &[usize]) -> Vec<u32> {
    counts.iter().enumerate().flat_map(|(d, &c)| std::iter::repeat(d as u32).take(c)).collect()
}

fn mean_of_counts(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    let e: usize = counts.iter().enumerate().map(|(d, &c)| d * c).sum();
    e as f64 / n as f64
}

/// Degree sequences for both layers, edge-balanced, before any shuffling.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeTemplate {
    pub family: Family,
    pub punctured_degrees: Vec<u32>,
    pub check_degrees: Vec<u32>,
}

impl DegreeTemplate {
    /// Realizes `k` punctured-bit degrees from `l`, picks the check count so
    /// that the edge counts balance, and closes any residual gap on the
    /// highest-degree check nodes.
    pub fn new(family: Family, l: &DegreeDist, r: &DegreeDist, k: usize, tail_mass: f64) -> Result<Self> {
        if !matches!(family, Family::Ara | Family::Nsira) {
            return Err(Error::UnsupportedFamily { family, op: "sample_graph" });
        }
        if k == 0 {
            return Err(Error::InvalidInput("graph needs at least one information bit".into()));
        }
        let l_counts = realize_degrees(l, k, tail_mass)?;
        let punctured_degrees = degree_list(&l_counts);
        let edges: usize = punctured_degrees.iter().map(|&d| d as usize).sum();
        // Check degree fractions do not depend on the count, so realize once to
        // get the truncated mean and size the layer from it.
        // Rounding at small counts lowers the realized mean, so walk the
        // check count toward balance and keep the smallest residual.
        let probe_mean = mean_of_counts(&realize_degrees(r, 1 << 20, tail_mass)?);
        let mut m = ((edges as f64 / probe_mean).round() as usize).max(1);
        let mut best: Option<(i64, Vec<usize>)> = None;
        let mut tried = std::collections::HashSet::new();
        while tried.insert(m) && tried.len() < 256 {
            let counts = realize_degrees(r, m, tail_mass)?;
            let sum: usize = counts.iter().enumerate().map(|(d, &c)| d * c).sum();
            let gap = edges as i64 - sum as i64;
            if best.as_ref().map_or(true, |(g, _)| gap.abs() < g.abs()) {
                best = Some((gap, counts));
            }
            if gap == 0 {
                break;
            }
            let step = (gap as f64 / probe_mean).round() as i64;
            let step = if step == 0 { gap.signum() } else { step };
            m = (m as i64 + step).max(1) as usize;
        }
        let (mut gap, counts) = best.expect("non-empty search range");
        let mut check_degrees = degree_list(&counts);
        let m = check_degrees.len();
        if gap != 0 {
            log::debug!("edge balance: adjusting check degrees by {gap} (E = {edges}, m = {m})");
        }
        while gap != 0 {
            let (idx, _) = check_degrees.iter().enumerate().max_by_key(|(_, &d)| d).expect("m ≥ 1");
            if gap > 0 {
                check_degrees[idx] += gap as u32;
                gap = 0;
            } else {
                let take = (-gap).min(check_degrees[idx] as i64 - 1);
                if take == 0 {
                    return Err(Error::DegenerateDist("cannot balance edges without empty check nodes".into()));
                }
                check_degrees[idx] -= take as u32;
                gap += take;
            }
        }
        Ok(Self { family, punctured_degrees, check_degrees })
    }

    pub fn k(&self) -> usize {
        self.punctured_degrees.len()
    }

    pub fn m(&self) -> usize {
        self.check_degrees.len()
    }

    pub fn edges(&self) -> usize {
        self.punctured_degrees.iter().map(|&d| d as usize).sum()
    }

    /// Transmitted length: `k + m` for ARA, `m` for NSIRA.
    pub fn n(&self) -> usize {
        match self.family {
            Family::Ara => self.k() + self.m(),
            _ => self.m(),
        }
    }

    /// Rate of the realized graph, `k / n`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// Draws a graph: degrees are assigned to chain positions in random
    /// order and the interleaver is a uniform permutation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TannerGraph {
        let mut punctured = self.punctured_degrees.clone();
        let mut checks = self.check_degrees.clone();
        punctured.shuffle(rng);
        checks.shuffle(rng);
        let mut permutation: Vec<u32> = (0..self.edges() as u32).collect();
        permutation.shuffle(rng);
        TannerGraph::new(self.family, punctured, checks, permutation)
            .expect("template degrees are balanced")
    }
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csr {
    ptr: Vec<u32>,
    idx: Vec<u32>,
}

impl Csr {
    fn from_lists(lists: &[Vec<u32>]) -> Self {
        let mut ptr = Vec::with_capacity(lists.len() + 1);
        let mut idx = Vec::new();
        ptr.push(0);
        for l in lists {
            idx.extend_from_slice(l);
            ptr.push(idx.len() as u32);
        }
        Self { ptr, idx }
    }

    pub fn len(&self) -> usize {
        self.ptr.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.idx[self.ptr[i] as usize..self.ptr[i + 1] as usize]
    }

    /// Total number of entries.
    pub fn nnz(&self) -> usize {
        self.idx.len()
    }
}

/// The ARA (or NSIRA) decoding graph.
///
/// Variables are numbered systematic bits `u` (ARA only), punctured bits `v`,
/// then code bits `c`. Checks are the parity-check-1 nodes (ARA only), then
/// the parity-check-2 nodes. Parity-check-1 node `i` joins `u_i`, `v_i` and
/// `v_{i-1}`; parity-check-2 node `j` joins `c_j`, `c_{j-1}` and its
/// interleaved punctured neighbours. Repeated punctured edges between the
/// same pair of nodes cancel in pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    pub family: Family,
    pub k: usize,
    pub m: usize,
    pub punctured_degrees: Vec<u32>,
    pub check_degrees: Vec<u32>,
    /// Edge slot (in punctured-node order) to check socket.
    pub permutation: Vec<u32>,
    checks: Csr,
    var_checks: Csr,
}

impl TannerGraph {
    pub fn new(
        family: Family,
        punctured_degrees: Vec<u32>,
        check_degrees: Vec<u32>,
        permutation: Vec<u32>,
    ) -> Result<Self> {
        if !matches!(family, Family::Ara | Family::Nsira) {
            return Err(Error::UnsupportedFamily { family, op: "TannerGraph" });
        }
        let e: usize = punctured_degrees.iter().map(|&d| d as usize).sum();
        let e_check: usize = check_degrees.iter().map(|&d| d as usize).sum();
        if e != e_check || permutation.len() != e {
            return Err(Error::LengthMismatch { expected: e, got: e_check.min(permutation.len()) });
        }
        let mut seen = vec![false; e];
        for &s in &permutation {
            let s = s as usize;
            if s >= e || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidInput("interleaver is not a permutation".into()));
            }
        }
        let (k, m) = (punctured_degrees.len(), check_degrees.len());
        let mut g = Self {
            family,
            k,
            m,
            punctured_degrees,
            check_degrees,
            permutation,
            checks: Csr { ptr: vec![0], idx: Vec::new() },
            var_checks: Csr { ptr: vec![0], idx: Vec::new() },
        };
        g.build_adjacency();
        Ok(g)
    }

    fn build_adjacency(&mut self) {
        let (k, m) = (self.k, self.m);
        let v0 = self.punctured_offset();
        let c0 = self.code_offset();
        let mut socket_owner = Vec::with_capacity(self.permutation.len());
        for (j, &d) in self.check_degrees.iter().enumerate() {
            socket_owner.extend(std::iter::repeat(j as u32).take(d as usize));
        }
        let mut pc2: Vec<Vec<u32>> = vec![Vec::new(); m];
        let mut slot = 0usize;
        for (i, &d) in self.punctured_degrees.iter().enumerate() {
            for _ in 0..d {
                let j = socket_owner[self.permutation[slot] as usize] as usize;
                pc2[j].push((v0 + i) as u32);
                slot += 1;
            }
        }
        let mut lists: Vec<Vec<u32>> = Vec::with_capacity(self.num_checks());
        if self.family == Family::Ara {
            for i in 0..k {
                let mut l = vec![i as u32, (v0 + i) as u32];
                if i > 0 {
                    l.push((v0 + i - 1) as u32);
                }
                lists.push(l);
            }
        }
        for (j, mut l) in pc2.into_iter().enumerate() {
            l.sort_unstable();
            let mut reduced = Vec::with_capacity(l.len() + 2);
            let mut it = 0;
            while it < l.len() {
                let mut run = 1;
                while it + run < l.len() && l[it + run] == l[it] {
                    run += 1;
                }
                if run % 2 == 1 {
                    reduced.push(l[it]);
                }
                it += run;
            }
            reduced.push((c0 + j) as u32);
            if j > 0 {
                reduced.push((c0 + j - 1) as u32);
            }
            lists.push(reduced);
        }
        let mut by_var: Vec<Vec<u32>> = vec![Vec::new(); self.num_vars()];
        for (c, l) in lists.iter().enumerate() {
            for &v in l {
                by_var[v as usize].push(c as u32);
            }
        }
        self.checks = Csr::from_lists(&lists);
        self.var_checks = Csr::from_lists(&by_var);
    }

    fn punctured_offset(&self) -> usize {
        if self.family == Family::Ara {
            self.k
        } else {
            0
        }
    }

    fn code_offset(&self) -> usize {
        self.punctured_offset() + self.k
    }

    pub fn num_vars(&self) -> usize {
        self.code_offset() + self.m
    }

    pub fn num_checks(&self) -> usize {
        if self.family == Family::Ara {
            self.k + self.m
        } else {
            self.m
        }
    }

    /// Transmitted length.
    pub fn n(&self) -> usize {
        match self.family {
            Family::Ara => self.k + self.m,
            _ => self.m,
        }
    }

    /// Variable indices of the information bits (systematic bits for ARA,
    /// punctured bits for NSIRA; both occupy `0..k`).
    pub fn info_vars(&self) -> std::ops::Range<usize> {
        0..self.k
    }

    pub fn punctured_vars(&self) -> std::ops::Range<usize> {
        self.punctured_offset()..self.punctured_offset() + self.k
    }

    pub fn code_vars(&self) -> std::ops::Range<usize> {
        self.code_offset()..self.code_offset() + self.m
    }

    /// Variable index of each transmitted position.
    pub fn transmitted_vars(&self) -> Vec<usize> {
        match self.family {
            Family::Ara => (0..self.k).chain(self.code_vars()).collect(),
            _ => self.code_vars().collect(),
        }
    }

    /// Variables of check `c`.
    pub fn check(&self, c: usize) -> &[u32] {
        self.checks.row(c)
    }

    /// Checks containing variable `v`.
    pub fn var_checks(&self, v: usize) -> &[u32] {
        self.var_checks.row(v)
    }

    /// Edges of the ensemble graph, counting the interleaver edges with multiplicity.
    pub fn edge_count(&self) -> usize {
        let e = self.permutation.len();
        let acc2 = 2 * self.m - 1;
        match self.family {
            Family::Ara => (3 * self.k - 1) + e + acc2,
            _ => e + acc2,
        }
    }

    /// Whether every check is satisfied by the full variable assignment.
    pub fn satisfies(&self, values: &[u8]) -> bool {
        (0..self.num_checks()).all(|c| self.check(c).iter().fold(0u8, |a, &v| a ^ values[v as usize]) == 0)
    }

    /// Text adjacency dump, one node per line.
    pub fn adjacency_text(&self) -> String {
        let mut out = String::new();
        let name = |v: usize| -> String {
            if self.family == Family::Ara && v < self.k {
                format!("u{v}")
            } else if self.punctured_vars().contains(&v) {
                format!("v{}", v - self.punctured_offset())
            } else {
                format!("c{}", v - self.code_offset())
            }
        };
        let pc1 = if self.family == Family::Ara { self.k } else { 0 };
        for c in 0..self.num_checks() {
            let label = if c < pc1 { format!("pc1_{c}") } else { format!("pc2_{}", c - pc1) };
            let nbrs: Vec<String> = self.check(c).iter().map(|&v| name(v as usize)).collect();
            let _ = writeln!(out, "{label}: {}", nbrs.join(" "));
        }
        out
    }
}
