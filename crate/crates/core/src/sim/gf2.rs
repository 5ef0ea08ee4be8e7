//! Dense GF(2) matrices and elimination.

/// Row-major bit matrix packed into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        let mask = 1u64 << (c % 64);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1u64 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for w in 0..self.words {
            let v = self.data[s + w];
            self.data[d + w] ^= v;
        }
    }

    /// Reduced row echelon form over the first `ncols` columns; columns past
    /// `ncols` (e.g. an augmented right-hand side) ride along. Returns the
    /// pivot column of each of the first `rank` rows.
    pub fn rref(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..ncols.min(self.cols) {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Rank over all columns (consumes a copy).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref(self.cols).len()
    }
}

/// Unknowns fixed by an RREF system: pivot rows with no free column among
/// the first `ncols`. Returns `(column, value)` with the value read from
/// column `ncols` (the right-hand side).
pub fn determined(m: &BitMatrix, pivots: &[usize], ncols: usize) -> Vec<(usize, bool)> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut free_mask = vec![0u64; m.words];
    for c in (0..ncols).filter(|&c| !is_pivot[c]) {
        free_mask[c / 64] |= 1 << (c % 64);
    }
    pivots
        .iter()
        .enumerate()
        .filter(|(r, _)| m.row(*r).iter().zip(&free_mask).all(|(a, b)| a & b == 0))
        .map(|(r, &c)| (c, m.get(r, ncols)))
        .collect()
}
