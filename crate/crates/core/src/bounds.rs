//! Counting bounds on substring-unique strings and run-length-limited strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bits::ceil_log2;
use crate::error::{Error, Result};

pub use crate::labeling::rll_count;

/// Environment variable capping the exponent of exhaustive enumeration.
pub const BUDGET_ENV: &str = "RESPECTRA_BUDGET";

/// Default cap on `n` for [`enumerate_u`].
pub const DEFAULT_BUDGET: usize = 24;

/// Bounds on `|U(n, L)|`, the number of length-`n` strings whose length-`(L−1)`
/// windows are pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub read_len: usize,
    /// `2^n (1 − (n−L+1)² / 2^L)`, exact.
    pub lower: BigRational,
    /// `log₂` of `2^n exp(−(n−L+1)/2^L · (n/(L−1) − 2))`.
    pub log2_upper: f64,
    /// `|U(n, L)|` when enumerated.
    pub exact_count: Option<u64>,
}

/// Relative slack when comparing a count against the floating-point upper bound.
const UPPER_PADDING: f64 = 1e-9;

impl BoundReport {
    pub fn lower_f64(&self) -> f64 {
        self.lower.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Upper bound as a float; infinite when it overflows.
    pub fn upper(&self) -> f64 {
        self.log2_upper.exp2()
    }

    /// The lower bound says nothing when it is not positive.
    pub fn is_vacuous(&self) -> bool {
        self.lower <= BigRational::zero()
    }

    /// Fills in the exact count by enumeration.
    pub fn enumerated(mut self) -> Result<Self> {
        self.exact_count = Some(enumerate_u(self.n, self.read_len)?);
        Ok(self)
    }

    /// `Some(false)` when the exact count lies below a positive lower bound.
    pub fn lower_holds(&self) -> Option<bool> {
        let count = self.exact_count?;
        Some(self.is_vacuous() || BigRational::from_integer(BigInt::from(count)) >= self.lower)
    }

    /// `Some(false)` when the exact count exceeds the upper bound beyond rounding slack.
    pub fn upper_holds(&self) -> Option<bool> {
        let count = self.exact_count? as f64;
        Some(count <= self.upper() * (1.0 + UPPER_PADDING))
    }
}

pub fn u_bounds(n: usize, read_len: usize) -> Result<BoundReport> {
    if read_len < 2 || read_len > n {
        return Err(Error::Domain(format!("read length {read_len} must lie in 2..={n}")));
    }
    let reads = (n - read_len + 1) as i64;
    let two_l = BigInt::one() << read_len;
    let fraction = BigRational::new(BigInt::from(reads * reads), two_l);
    let lower = (BigRational::one() - fraction) * BigRational::from_integer(BigInt::one() << n);
    let exponent = -(reads as f64) / (read_len as f64).exp2() * (n as f64 / (read_len - 1) as f64 - 2.0);
    let log2_upper = n as f64 + exponent * std::f64::consts::LOG2_E;
    Ok(BoundReport { n, read_len, lower, log2_upper, exact_count: None })
}

/// Current enumeration cap, from the environment or the default.
pub fn budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Exact `|U(n, L)|` by scanning all `2^n` strings in parallel shards.
pub fn enumerate_u(n: usize, read_len: usize) -> Result<u64> {
    if read_len < 2 {
        return Err(Error::Domain(format!("read length {read_len} must be at least 2")));
    }
    let cap = budget();
    if n > cap || n > 40 {
        return Err(Error::Resource(format!("n = {n} exceeds the enumeration budget {cap}")));
    }
    let w = read_len - 1;
    if n <= w {
        return Ok(1u64 << n);
    }
    let windows = n - w + 1;
    if windows as u64 > 1u64 << w.min(63) {
        return Ok(0);
    }
    let shard_bits = n.min(8);
    let per_shard = 1u64 << (n - shard_bits);
    let mask = (1u64 << w) - 1;
    let count = (0..1u64 << shard_bits)
        .into_par_iter()
        .map(|shard| {
            let mut seen = vec![0u64; ((1usize << w) / 64).max(1)];
            let mut touched = Vec::with_capacity(windows);
            let mut hits = 0u64;
            for x in shard * per_shard..(shard + 1) * per_shard {
                let mut unique = true;
                for s in 0..windows {
                    let v = ((x >> (n - w - s)) & mask) as usize;
                    let (word, bit) = (v / 64, 1u64 << (v % 64));
                    if seen[word] & bit != 0 {
                        unique = false;
                        break;
                    }
                    seen[word] |= bit;
                    touched.push(word);
                }
                for word in touched.drain(..) {
                    seen[word] = 0;
                }
                hits += u64::from(unique);
            }
            hits
        })
        .sum();
    Ok(count)
}

/// Read length `2⌈log₂ n⌉ + 2` used by [`redundancy_check`].
pub fn redundancy_read_len(n: usize) -> usize {
    2 * ceil_log2(n) + 2
}

/// Whether the lower bound at read length `2⌈log₂ n⌉ + 2` certifies
/// `log₂ |U(n, L)| ≥ n − 1`, i.e. one bit of redundancy suffices. Read lengths beyond
/// `n` hold trivially since every string then qualifies.
pub fn redundancy_check(n: usize) -> bool {
    let l = redundancy_read_len(n);
    if l > n {
        return true;
    }
    match u_bounds(n, l) {
        Ok(b) => b.lower >= BigRational::from_integer(BigInt::one() << (n - 1)),
        Err(_) => false,
    }
}
