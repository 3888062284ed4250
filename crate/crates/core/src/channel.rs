//! Simulated read channels: positional deletions with bounded gaps, and bounded
//! per-read bit flips. Each surviving read carries its origin for test oracles.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// Retry cap when sampling flip patterns that must be reliable.
pub const RELIABLE_RETRIES: usize = 1000;

/// Where a read came from: its 1-based start in the source string and the 1-based
/// offsets inside the read that were flipped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReadOrigin {
    pub position: usize,
    pub flips: Vec<usize>,
}

/// Origins aligned index-by-index with [`Spectrum::reads`].
pub type ReadTrace = Vec<ReadOrigin>;

/// Which read positions survive the deletion channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeletionPattern {
    /// Keeps positions `≡ 1 (mod G + 1)`, the sparsest pattern the gap bound allows.
    Adversarial,
    /// Random gaps of `0..=G` missing positions, seeded.
    Random { seed: u64 },
}

/// Deletion channel configuration: at most `max_gap` consecutive read positions lost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapConfig {
    pub max_gap: usize,
    pub pattern: DeletionPattern,
}

/// Flip channel configuration layered on a deletion pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiseConfig {
    pub gap: GapConfig,
    /// At most this many flips per read.
    pub max_flips: usize,
    /// Use exactly `max_flips` flips on every read instead of `0..=max_flips`.
    pub exact_flips: bool,
    pub seed: u64,
    /// Resample flip patterns until the spectrum is reliable.
    pub reliable: bool,
}

/// True when `positions` (sorted, 1-based, out of `1..=total`) never skip more than
/// `max_gap` consecutive positions, including before the first and after the last.
pub fn satisfies_gap_bound(positions: &[usize], total: usize, max_gap: usize) -> bool {
    if total == 0 {
        return positions.is_empty();
    }
    let mut prev = 0;
    for &p in positions {
        if p <= prev || p > total || p - prev - 1 > max_gap {
            return false;
        }
        prev = p;
    }
    total - prev <= max_gap
}

/// Surviving positions among `1..=total` under `config`.
pub fn kept_positions(total: usize, config: &GapConfig) -> Vec<usize> {
    let step = config.max_gap + 1;
    match config.pattern {
        DeletionPattern::Adversarial => (1..=total).step_by(step).collect(),
        DeletionPattern::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::new();
            let mut p = rng.gen_range(1..=step);
            while p <= total {
                out.push(p);
                p += rng.gen_range(1..=step);
            }
            out
        }
    }
}

fn check_read_len(x: &BitString, read_len: usize) -> Result<usize> {
    if read_len == 0 || read_len > x.len() {
        return Err(Error::Domain(format!("read length {read_len} must lie in 1..={}", x.len())));
    }
    Ok(x.len() - read_len + 1)
}

fn assemble_spectrum(read_len: usize, mut tagged: Vec<(BitString, ReadOrigin)>) -> Result<(Spectrum, ReadTrace)> {
    tagged.sort();
    let (reads, trace): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();
    Ok((Spectrum::from_reads(read_len, reads)?, trace))
}

/// Reads of `x` at the positions kept by the deletion channel.
pub fn gap_channel(x: &BitString, read_len: usize, config: &GapConfig) -> Result<(Spectrum, ReadTrace)> {
    let total = check_read_len(x, read_len)?;
    let tagged = kept_positions(total, config)
        .into_iter()
        .map(|p| {
            let read = BitString::from_raw(x.window(p - 1, read_len).to_vec());
            (read, ReadOrigin { position: p, flips: Vec::new() })
        })
        .collect();
    assemble_spectrum(read_len, tagged)
}

/// Deletion channel followed by at most `max_flips` flips per read.
pub fn noisy_channel(x: &BitString, read_len: usize, config: &NoiseConfig) -> Result<(Spectrum, ReadTrace)> {
    let total = check_read_len(x, read_len)?;
    if config.max_flips > read_len {
        return Err(Error::Domain(format!("cannot flip {} of {read_len} bits", config.max_flips)));
    }
    let positions = kept_positions(total, &config.gap);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let attempts = if config.reliable { RELIABLE_RETRIES } else { 1 };
    for _ in 0..attempts {
        let tagged: Vec<(BitString, ReadOrigin)> = positions
            .iter()
            .map(|&p| {
                let count = if config.exact_flips { config.max_flips } else { rng.gen_range(0..=config.max_flips) };
                let mut flips: Vec<usize> = sample(&mut rng, read_len, count).into_iter().map(|o| o + 1).collect();
                flips.sort_unstable();
                let mut read = x.window(p - 1, read_len).to_vec();
                for &o in &flips {
                    read[o - 1] ^= 1;
                }
                (BitString::from_raw(read), ReadOrigin { position: p, flips })
            })
            .collect();
        let (spectrum, trace) = assemble_spectrum(read_len, tagged)?;
        if !config.reliable || is_reliable(x, &spectrum, &trace)? {
            return Ok((spectrum, trace));
        }
    }
    Err(Error::Channel(format!("no reliable flip pattern within {RELIABLE_RETRIES} attempts")))
}

/// True when every position of `x` covered by at least one read is reproduced correctly
/// by a strict majority of the covering reads.
pub fn is_reliable(x: &BitString, spectrum: &Spectrum, trace: &ReadTrace) -> Result<bool> {
    if trace.len() != spectrum.len() {
        return Err(Error::Domain(format!("{} origins for {} reads", trace.len(), spectrum.len())));
    }
    let read_len = spectrum.read_len();
    let mut correct = vec![0usize; x.len()];
    let mut wrong = vec![0usize; x.len()];
    for (read, origin) in spectrum.reads().iter().zip(trace) {
        let p = origin.position;
        if p == 0 || p - 1 + read_len > x.len() {
            return Err(Error::Domain(format!("origin {p} does not fit a read of length {read_len}")));
        }
        for (o, (&got, &want)) in read.as_slice().iter().zip(x.window(p - 1, read_len)).enumerate() {
            let flipped = origin.flips.binary_search(&(o + 1)).is_ok();
            if (got != want) != flipped {
                return Err(Error::Domain(format!("read at {p} disagrees with its recorded flips")));
            }
            if flipped {
                wrong[p - 1 + o] += 1;
            } else {
                correct[p - 1 + o] += 1;
            }
        }
    }
    Ok(correct.iter().zip(&wrong).all(|(&c, &w)| c + w == 0 || c > w))
}

/// `pos=<int> flips=<comma-list>` per line, in spectrum order.
pub fn trace_to_text(trace: &ReadTrace) -> String {
    let mut out = String::new();
    for o in trace {
        let flips: Vec<String> = o.flips.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "pos={} flips={}", o.position, flips.join(","));
    }
    out
}

pub fn parse_trace(text: &str) -> Result<ReadTrace> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let mut position = None;
            let mut flips = None;
            for field in line.split_whitespace() {
                match field.split_once('=') {
                    Some(("pos", v)) => {
                        position = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad pos {v:?}")))?)
                    }
                    Some(("flips", v)) => {
                        flips = Some(
                            v.split(',')
                                .filter(|s| !s.is_empty())
                                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad flip {s:?}"))))
                                .collect::<Result<Vec<_>>>()?,
                        )
                    }
                    _ => return Err(Error::Parse(format!("malformed trace field {field:?}"))),
                }
            }
            match (position, flips) {
                (Some(position), Some(flips)) => Ok(ReadOrigin { position, flips }),
                _ => Err(Error::Parse(format!("trace line {line:?} needs pos= and flips="))),
            }
        })
        .collect()
}
