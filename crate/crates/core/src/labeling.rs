//! Fixed-width position labels: plain binary, and run-length-limited labels that
//! never contain a long run of zeros.

use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};

/// Binary label of position `k ∈ [1, n]`: `k − 1` written MSB-first in `⌈log₂ n⌉` bits.
pub fn label(k: usize, n: usize) -> Result<BitString> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("label index {k} outside 1..={n}")));
    }
    BitString::from_uint((k - 1) as u64, ceil_log2(n))
}

/// Inverse of [`label`].
pub fn unlabel(bits: &BitString, n: usize) -> Result<usize> {
    if bits.len() != ceil_log2(n) {
        return Err(Error::Domain(format!("label has {} bits, expected {}", bits.len(), ceil_log2(n))));
    }
    let k = bits.to_uint()? as usize + 1;
    if k > n {
        return Err(Error::Domain(format!("label decodes to {k} > {n}")));
    }
    Ok(k)
}

/// Zero-run bound `2⌈log₂⌈log₂ n⌉⌉` used by the run-length-limited labels.
pub fn rll_run_bound(n: usize) -> usize {
    2 * ceil_log2(ceil_log2(n))
}

/// Counts completions of a partial string under a zero-run bound, indexed by
/// (remaining length, current trailing zero run).
#[derive(Clone, Debug)]
struct RunTable {
    forbidden_run: usize,
    /// `table[rem][z]`: admissible completions of `rem` more bits after a run of `z` zeros.
    table: Vec<Vec<u128>>,
}

impl RunTable {
    fn new(width: usize, forbidden_run: usize) -> Result<Self> {
        if forbidden_run == 0 {
            return Err(Error::Domain("zero-run bound must be at least 1".into()));
        }
        if width > 120 {
            return Err(Error::Domain(format!("width {width} too large for exact counting")));
        }
        let mut table = vec![vec![0u128; forbidden_run]; width + 1];
        table[0].iter_mut().for_each(|c| *c = 1);
        for rem in 1..=width {
            for z in 0..forbidden_run {
                let one = table[rem - 1][0];
                let zero = if z + 1 < forbidden_run { table[rem - 1][z + 1] } else { 0 };
                table[rem][z] = one + zero;
            }
        }
        Ok(Self { forbidden_run, table })
    }

    fn total(&self, width: usize) -> u128 {
        self.table[width][0]
    }
}

/// Number of length-`width` strings whose longest zero run is at most `max_zero_run`.
pub fn rll_count(width: usize, max_zero_run: usize) -> Result<u128> {
    Ok(RunTable::new(width, max_zero_run + 1)?.total(width))
}

/// Enumerative ranking of fixed-width strings without long zero runs, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct RllCodebook {
    width: usize,
    runs: RunTable,
}

impl RllCodebook {
    pub fn new(width: usize, forbidden_run: usize) -> Result<Self> {
        Ok(Self { width, runs: RunTable::new(width, forbidden_run)? })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn forbidden_run(&self) -> usize {
        self.runs.forbidden_run
    }

    pub fn size(&self) -> u128 {
        self.runs.total(self.width)
    }

    /// The admissible string of 0-based lexicographic rank `rank`.
    pub fn unrank(&self, mut rank: u128) -> Result<BitString> {
        if rank >= self.size() {
            return Err(Error::Domain(format!("rank {rank} outside codebook of size {}", self.size())));
        }
        let mut bits = Vec::with_capacity(self.width);
        let mut run = 0;
        for pos in 0..self.width {
            let rem = self.width - pos - 1;
            let zeros_first = if run + 1 < self.runs.forbidden_run { self.runs.table[rem][run + 1] } else { 0 };
            if rank < zeros_first {
                bits.push(0);
                run += 1;
            } else {
                rank -= zeros_first;
                bits.push(1);
                run = 0;
            }
        }
        Ok(BitString::from_raw(bits))
    }

    /// 0-based lexicographic rank of an admissible string.
    pub fn rank(&self, bits: &BitString) -> Result<u128> {
        if bits.len() != self.width {
            return Err(Error::Domain(format!("expected {} bits, got {}", self.width, bits.len())));
        }
        let mut rank = 0u128;
        let mut run = 0;
        for (pos, b) in bits.iter().enumerate() {
            let rem = self.width - pos - 1;
            if b == 0 {
                run += 1;
                if run >= self.runs.forbidden_run {
                    return Err(Error::Domain(format!("{bits} has a zero run of {run}")));
                }
            } else {
                if run + 1 < self.runs.forbidden_run {
                    rank += self.runs.table[rem][run + 1];
                }
                run = 0;
            }
        }
        Ok(rank)
    }
}

/// Run-length-limited position labels of width `⌈log₂ n⌉ + 1`, free of zero runs of
/// length `2⌈log₂⌈log₂ n⌉⌉` or more. Label `k` is the `k`-th admissible string.
#[derive(Clone, Debug)]
pub struct RllLabeler {
    n: usize,
    book: RllCodebook,
}

impl RllLabeler {
    pub fn new(n: usize) -> Result<Self> {
        let run = rll_run_bound(n);
        if run == 0 {
            return Err(Error::Parameter(format!("n = {n} is too small for run-limited labels")));
        }
        let book = RllCodebook::new(ceil_log2(n) + 1, run)?;
        if book.size() < n as u128 {
            return Err(Error::Parameter(format!(
                "only {} admissible labels for n = {n}",
                book.size()
            )));
        }
        Ok(Self { n, book })
    }

    pub fn width(&self) -> usize {
        self.book.width()
    }

    pub fn forbidden_run(&self) -> usize {
        self.book.forbidden_run()
    }

    pub fn label(&self, k: usize) -> Result<BitString> {
        if k == 0 || k > self.n {
            return Err(Error::Domain(format!("label index {k} outside 1..={}", self.n)));
        }
        self.book.unrank((k - 1) as u128)
    }

    pub fn unlabel(&self, bits: &BitString) -> Result<usize> {
        let k = self.book.rank(bits)? as usize + 1;
        if k > self.n {
            return Err(Error::Domain(format!("label decodes to {k} > {}", self.n)));
        }
        Ok(k)
    }
}

/// One-shot run-length-limited label; see [`RllLabeler`].
pub fn label_rll(k: usize, n: usize) -> Result<BitString> {
    RllLabeler::new(n)?.label(k)
}
