use std::cmp::Ordering;

use super::NoisyParams;
use crate::bits::{packed_distance as distance, BitString, PackedBits};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// How the first read was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartRule {
    /// A tail-heavy read that no other read precedes.
    Unpreceded,
    /// Fallback: the read holding the latest heavy `(2t+1)`-window.
    LatestHeavyWindow,
}

/// Intermediate estimates, for checking each phase against a known codeword.
#[derive(Clone, Debug)]
pub struct NoisyAssemblyTrace {
    pub start_rule: StartRule,
    /// Estimate after the periodic prefix has been repaired and missing ones restored.
    pub after_prefix: BitString,
    /// `ℓ mod 2(G + L̃ + 1)` as read from the prefix.
    pub length_residue: usize,
    /// Estimate after each extension step, starting with `after_prefix`.
    pub extensions: Vec<BitString>,
    pub after_length_fix: BitString,
    pub after_majority: BitString,
}

struct Reads<'a> {
    raw: Vec<&'a [u8]>,
    /// Packed `L̃`-prefix of each read.
    prefixes: Vec<Vec<u64>>,
    tail_heavy: Vec<bool>,
}

impl<'a> Reads<'a> {
    fn new(m: &'a Spectrum, p: &NoisyParams) -> Self {
        let lt = p.window();
        let raw: Vec<&[u8]> = m.reads().iter().map(BitString::as_slice).collect();
        let prefixes = raw.iter().map(|r| PackedBits::new(r).window(0, lt)).collect();
        let tail_heavy = raw
            .iter()
            .map(|r| r[2 * lt..].iter().filter(|&&b| b == 1).count() > p.max_flips())
            .collect();
        Self { raw, prefixes, tail_heavy }
    }

    fn heavy(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.raw.len()).filter(|&k| self.tail_heavy[k])
    }
}

/// Reconstructs a codeword from a reliable spectrum with at most `G` consecutive reads
/// missing and at most `t` flips per read.
pub fn assemble_noisy(m: &Spectrum, p: &NoisyParams) -> Result<BitString> {
    assemble_noisy_traced(m, p).map(|(x, _)| x)
}

/// [`assemble_noisy`] with the intermediate estimates.
///
/// 1. Pick a start read: a tail-heavy read with no read within distance `6t` ahead of it.
/// 2. Repair the periodic prefix by majority across periods, restore the leading ones,
///    and decode the length residue.
/// 3. Repeatedly append the overhang of the tail-heavy read aligning (within `6t`) at
///    the furthest offset.
/// 4. Trim or zero-extend to agree with the length residue.
/// 5. Replace each bit before the last `L − 1` by the majority of all aligned reads.
/// 6. Decode the last `L − 1` bits with the suffix BCH code and zero-fill to `n`.
pub fn assemble_noisy_traced(m: &Spectrum, p: &NoisyParams) -> Result<(BitString, NoisyAssemblyTrace)> {
    let (n, lt, l, t) = (p.n(), p.window(), p.read_len(), p.max_flips());
    if m.read_len() != l {
        return Err(Error::Domain(format!("spectrum read length {} differs from {l}", m.read_len())));
    }
    if m.is_empty() {
        return Err(Error::Assembly("empty spectrum".into()));
    }
    let reads = Reads::new(m, p);
    let limit = 6 * t;

    // Step 1.
    let (start, start_rule) = match pick_unpreceded(&reads, lt, limit) {
        Some(k) => (k, StartRule::Unpreceded),
        None => (pick_latest_heavy(&reads, t), StartRule::LatestHeavyWindow),
    };
    let mut est: Vec<u8> = reads.raw[start].to_vec();

    // Step 2.
    let period = p.rep_period();
    let copies = 2 * t + 1;
    for i in 0..period {
        let ones = (0..copies).filter(|&c| est[i + c * period] == 1).count();
        est[i] = u8::from(2 * ones > copies);
    }
    let first_zero = est[..period]
        .iter()
        .position(|&b| b == 0)
        .ok_or_else(|| Error::Assembly("start read lacks the periodic prefix".into()))?;
    let lead = period - 1 - first_zero;
    est.splice(0..0, std::iter::repeat_n(1, lead));
    let residue = p
        .decode_length_block(&BitString::from_raw(est[p.rep_len()..p.prefix_len()].to_vec()))
        .map_err(|e| Error::Assembly(format!("length residue unreadable: {e}")))?;
    let after_prefix = BitString::from_raw(est.clone());

    // Step 3.
    let mut extensions = vec![after_prefix.clone()];
    while let Some((k, j)) = furthest_extension(&reads, &est, lt, l, limit) {
        let overlap = est.len() - (j - 1);
        est.extend_from_slice(&reads.raw[k][overlap..]);
        extensions.push(BitString::from_raw(est.clone()));
    }

    // Step 4.
    let modulus = p.length_modulus();
    let r = (est.len() + modulus - residue % modulus) % modulus;
    if r > 0 && r < lt {
        est.truncate(est.len() - r);
    } else if r >= lt {
        est.resize(est.len() + modulus - r, 0);
    }
    if est.len() > n || est.len() < l - 1 {
        return Err(Error::Assembly(format!("estimate length {} outside {}..={n}", est.len(), l - 1)));
    }
    let after_length_fix = BitString::from_raw(est.clone());

    // Step 5.
    majority_pass(&reads, &mut est, lt, l, limit)?;
    let after_majority = BitString::from_raw(est.clone());

    // Step 6.
    let cut = est.len() - (l - 1);
    let word = p.suffix_to_word(&est[cut..]);
    let fixed = p
        .suffix_code()
        .decode(&word)
        .map_err(|e| Error::Assembly(format!("suffix unrecoverable: {e}")))?;
    est.truncate(cut);
    est.extend_from_slice(p.word_to_suffix(&fixed).as_slice());
    est.resize(n, 0);

    let trace = NoisyAssemblyTrace {
        start_rule,
        after_prefix,
        length_residue: residue,
        extensions,
        after_length_fix,
        after_majority,
    };
    Ok((BitString::from_raw(est), trace))
}

fn pick_unpreceded(reads: &Reads<'_>, lt: usize, limit: usize) -> Option<usize> {
    let shifted: Vec<Vec<Vec<u64>>> = reads
        .raw
        .iter()
        .map(|r| {
            let packed = PackedBits::new(r);
            (1..=2 * lt).map(|o| packed.window(o, lt)).collect()
        })
        .collect();
    reads.heavy().find(|&k| {
        !shifted
            .iter()
            .enumerate()
            .any(|(z, windows)| z != k && windows.iter().any(|w| distance(w, &reads.prefixes[k]) <= limit))
    })
}

fn pick_latest_heavy(reads: &Reads<'_>, t: usize) -> usize {
    let span = 2 * t + 1;
    let latest = |r: &[u8]| {
        (0..=r.len() - span)
            .rev()
            .find(|&j| r[j..j + span].iter().filter(|&&b| b == 1).count() > t)
    };
    (0..reads.raw.len())
        .max_by(|&a, &b| match latest(reads.raw[a]).cmp(&latest(reads.raw[b])) {
            Ordering::Equal => b.cmp(&a),
            other => other,
        })
        .expect("non-empty spectrum")
}

/// `(read, 1-based offset)` extending the estimate furthest; among reads at that offset,
/// the closest match wins.
fn furthest_extension(reads: &Reads<'_>, est: &[u8], lt: usize, l: usize, limit: usize) -> Option<(usize, usize)> {
    let m = est.len();
    if m < lt {
        return None;
    }
    let packed = PackedBits::new(est);
    let lowest = (m + 2).saturating_sub(l).max(1);
    for j in (lowest..=m + 1 - lt).rev() {
        let w = packed.window(j - 1, lt);
        let best = reads
            .heavy()
            .map(|k| (distance(&w, &reads.prefixes[k]), k))
            .filter(|&(d, _)| d <= limit)
            .min();
        if let Some((_, k)) = best {
            return Some((k, j));
        }
    }
    None
}

fn majority_pass(reads: &Reads<'_>, est: &mut [u8], lt: usize, l: usize, limit: usize) -> Result<()> {
    let m = est.len();
    let covered = m + 1 - l;
    let packed = PackedBits::new(est);
    let windows: Vec<Vec<u64>> = (0..=m - lt).map(|a| packed.window(a, lt)).collect();
    let mut ones = vec![0usize; covered];
    let mut zeros = vec![0usize; covered];
    for k in reads.heavy() {
        for (a, w) in windows.iter().enumerate() {
            if a >= covered || distance(w, &reads.prefixes[k]) > limit {
                continue;
            }
            for (o, &b) in reads.raw[k].iter().enumerate().take(covered - a) {
                if b == 1 {
                    ones[a + o] += 1;
                } else {
                    zeros[a + o] += 1;
                }
            }
        }
    }
    for i in 0..covered {
        match ones[i].cmp(&zeros[i]) {
            Ordering::Greater => est[i] = 1,
            Ordering::Less => est[i] = 0,
            Ordering::Equal if ones[i] == 0 => {}
            Ordering::Equal => {
                return Err(Error::Assembly(format!("majority tie at position {}", i + 1)));
            }
        }
    }
    Ok(())
}
