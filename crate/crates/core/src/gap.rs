//! Lossy-spectrum regime: reads of length `L = L̂ + G + 1` where `L̂ = 2⌈log₂ n⌉ + 3 + G`,
//! with up to `G` consecutive read positions missing.
//!
//! Codewords start with `1^G 0`, keep the window `[L̂, L̂+G]` all ones, and are
//! `L̂`-substring unique up to a zero tail. Reconstruction extends a prefix read by
//! read at the smallest offset whose `L̂`-prefix matches, backtracking on dead ends.

use std::collections::HashMap;
use std::ops::Range;

use crate::bits::{ceil_log2, find_repeat, BitString, Repeat};
use crate::error::{Error, Result};
use crate::exact::reinsert_window;
use crate::labeling::{label, unlabel};
use crate::spectrum::{multispectrum, Spectrum};
use crate::trace::{EncodingRound, EncodingTrace, RoundKind};

/// Extension steps explored before the assembler gives up.
pub const ASSEMBLY_NODE_BUDGET: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapParams {
    n: usize,
    max_gap: usize,
    window: usize,
}

impl GapParams {
    pub fn new(n: usize, max_gap: usize) -> Result<Self> {
        let window = 2 * ceil_log2(n) + 3 + max_gap;
        let p = Self { n, max_gap, window };
        if n < p.read_len() {
            return Err(Error::Parameter(format!("code length {n} shorter than read length {}", p.read_len())));
        }
        // The all-ones window must sit strictly before the stored copy of itself.
        if window + max_gap > n - 2 * max_gap - 2 {
            return Err(Error::Parameter(format!("code length {n} too short for gap {max_gap}")));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_gap(&self) -> usize {
        self.max_gap
    }

    /// Uniqueness window `L̂`.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Read length `L = L̂ + G + 1`.
    pub fn read_len(&self) -> usize {
        self.window + self.max_gap + 1
    }

    /// Input length of [`g_encode`]: `n − 3G − 3`.
    pub fn message_len(&self) -> usize {
        self.n - 3 * self.max_gap - 3
    }

    /// Length of the string handed to [`grr_encode`] by [`g_encode`].
    pub fn working_len(&self) -> usize {
        self.n - self.max_gap
    }

    /// 0-based range of the all-ones window.
    fn ones_window(&self) -> Range<usize> {
        self.window - 1..self.window + self.max_gap
    }
}

fn require(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

/// The part of the all-ones window that does not overlap the last `G+2` bits, and the
/// part of those last bits that does not overlap the window. `None` when the window is
/// absent or entirely inside the tail.
fn fixup_regions(len: usize, p: &GapParams) -> Option<(Range<usize>, Range<usize>)> {
    let g = p.max_gap;
    if len < p.window + g {
        return None;
    }
    let win = p.ones_window();
    let tail_start = len - g - 2;
    let kept = win.start..win.end.min(tail_start.max(win.start));
    if kept.is_empty() {
        return None;
    }
    let store = tail_start.max(win.end)..len;
    debug_assert_eq!(store.len(), kept.len() + 1);
    Some((kept, store))
}

/// Iterated `L̂`-repeat removal. Input length at most `n`; the window `[L̂, L̂+G]`
/// (clipped to the string) all ones; last bit 1.
pub fn grr_encode(x: &BitString, p: &GapParams) -> Result<BitString> {
    grr_encode_traced(x, p).map(|(c, _)| c)
}

pub fn grr_encode_traced(x: &BitString, p: &GapParams) -> Result<(BitString, EncodingTrace)> {
    let (n, lhat, g) = (p.n, p.window, p.max_gap);
    require(x.len() <= n && x.len() >= lhat, || {
        Error::Input(format!("length {} outside {lhat}..={n}", x.len()))
    })?;
    require(x.bit(x.len())? == 1, || Error::Input("last bit must be 1".into()))?;
    let win = p.ones_window();
    require(x.as_slice()[win.start..win.end.min(x.len())].iter().all(|&b| b == 1), || {
        Error::Input(format!("bits {lhat}..={} must be ones", lhat + g))
    })?;

    let mut y = x.clone();
    let mut trace = EncodingTrace::default();
    while let Some(Repeat { i, j }) = find_repeat(&y, lhat) {
        if trace.rounds.len() > x.len() - lhat {
            return Err(Error::Internal("repeat removal exceeded its round budget".into()));
        }
        let mut record = label(i, n)?;
        record.extend_from(&label(j, n)?);
        record.extend_from(&BitString::ones(g + 2));
        let raw = y.raw_mut();
        raw.drain(j - 1..j - 1 + lhat);
        raw.extend_from_slice(record.as_slice());
        let len = raw.len();
        let mut fixup = false;
        if let Some((kept, store)) = fixup_regions(len, p) {
            if raw[kept.clone()].contains(&0) {
                fixup = true;
                let saved: Vec<u8> = raw[kept.clone()].to_vec();
                raw[store.start..store.start + saved.len()].copy_from_slice(&saved);
                raw[kept].iter_mut().for_each(|b| *b = 1);
            }
        }
        trace.rounds.push(EncodingRound { kind: RoundKind::Repeat, i, j, record, fixup, length_after: len });
    }
    Ok((y, trace))
}

/// Inverse of [`grr_encode`] for an input of length `original_len`.
pub fn grr_decode(z: &BitString, original_len: usize, p: &GapParams) -> Result<BitString> {
    let (n, lhat) = (p.n, p.window);
    require(original_len <= n, || Error::Decode(format!("target length {original_len} exceeds {n}")))?;
    require(z.len() <= original_len && z.len() >= lhat, || {
        Error::Decode(format!("length {} outside {lhat}..={original_len}", z.len()))
    })?;
    let label_w = ceil_log2(n);
    let mut y = z.as_slice().to_vec();
    while y.len() < original_len {
        let len = y.len();
        require(len >= lhat, || Error::Decode(format!("length {len} too short for a record")))?;
        if let Some((kept, store)) = fixup_regions(len, p) {
            if y[store.clone()].contains(&0) {
                require(y[store.end - 1] == 1, || Error::Decode("fixup copy must end in 1".into()))?;
                let saved: Vec<u8> = y[store.start..store.start + kept.len()].to_vec();
                y[kept].copy_from_slice(&saved);
                y[store].iter_mut().for_each(|b| *b = 1);
            }
        }
        let record = y.split_off(len - (lhat - 1));
        require(record[2 * label_w..].iter().all(|&b| b == 1), || Error::Decode("malformed record tail".into()))?;
        let i = unlabel(&BitString::from_raw(record[..label_w].to_vec()), n)?;
        let j = unlabel(&BitString::from_raw(record[label_w..2 * label_w].to_vec()), n)?;
        require(i < j && j <= y.len() + 1, || Error::Decode(format!("record names invalid pair ({i}, {j})")))?;
        reinsert_window(&mut y, i, j, lhat);
    }
    Ok(BitString::from_raw(y))
}

/// Message of length `n − 3G − 3` to a length-`n` codeword.
pub fn g_encode(x: &BitString, p: &GapParams) -> Result<BitString> {
    g_encode_traced(x, p).map(|(c, _)| c)
}

pub fn g_encode_traced(x: &BitString, p: &GapParams) -> Result<(BitString, EncodingTrace)> {
    let g = p.max_gap;
    require(x.len() == p.message_len(), || {
        Error::Input(format!("expected {} bits, got {}", p.message_len(), x.len()))
    })?;
    let mut y = vec![1u8; g];
    y.push(0);
    y.extend_from_slice(x.as_slice());
    y.extend(std::iter::repeat_n(1, g + 2));
    let win = p.ones_window();
    let saved: Vec<u8> = y[win.clone()].to_vec();
    let len = y.len();
    y[len - g - 2..len - 1].copy_from_slice(&saved);
    y[win].iter_mut().for_each(|b| *b = 1);
    let (z, trace) = grr_encode_traced(&BitString::from_raw(y), p)?;
    Ok((z.zero_padded(p.n)?, trace))
}

/// Inverse of [`g_encode`].
pub fn g_decode(c: &BitString, p: &GapParams) -> Result<BitString> {
    let g = p.max_gap;
    require(c.len() == p.n, || Error::Decode(format!("expected {} bits, got {}", p.n, c.len())))?;
    let z = c.strip_trailing_zeros();
    require(z.len() >= p.window, || Error::Decode("codeword too short".into()))?;
    let mut y = grr_decode(&z, p.working_len(), p)?.into_vec();
    require(y[..g].iter().all(|&b| b == 1) && y[g] == 0, || Error::Decode("missing 1^G 0 prefix".into()))?;
    let len = y.len();
    require(y[len - 1] == 1, || Error::Decode("last bit must be 1".into()))?;
    let win = p.ones_window();
    require(y[win.clone()].iter().all(|&b| b == 1), || Error::Decode("window is not all ones".into()))?;
    let saved: Vec<u8> = y[len - g - 2..len - 1].to_vec();
    y[win].copy_from_slice(&saved);
    Ok(BitString::from_raw(y[g + 1..len - g - 2].to_vec()))
}

/// True when `c` is exactly the encoding of its own decoding.
pub fn is_codeword(c: &BitString, p: &GapParams) -> bool {
    g_decode(c, p).and_then(|x| g_encode(&x, p)).is_ok_and(|y| y == *c)
}

struct Frame {
    /// `(1-based start, read id)` extensions still to try.
    children: Vec<(usize, usize)>,
    next: usize,
    restore_len: usize,
    consumed: Option<usize>,
}

/// Reconstructs a codeword from a spectrum missing at most `G` consecutive reads.
///
/// The first read is recognised by its `1…10` prefix and by not being preceded by any
/// other read; the missing leading ones are restored from that prefix. Each step then
/// appends the read at the smallest offset whose prefix agrees with the estimate,
/// preferring reads with fewer trailing zeros on ties. Dead ends backtrack; a complete
/// estimate is accepted once zero-filled to length `n`, containing every read, and a
/// valid codeword.
pub fn assemble_gapped(m: &Spectrum, p: &GapParams) -> Result<BitString> {
    let (n, lhat, g, l) = (p.n, p.window, p.max_gap, p.read_len());
    require(m.read_len() == l, || Error::Domain(format!("spectrum read length {} differs from {l}", m.read_len())))?;
    require(!m.is_empty(), || Error::Assembly("empty spectrum".into()))?;
    let counts = m.counts();
    let reads: Vec<&[u8]> = counts.keys().map(|r| r.as_slice()).collect();
    let mut remaining: Vec<usize> = counts.values().copied().collect();
    let mut by_prefix: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for (id, r) in reads.iter().enumerate() {
        by_prefix.entry(&r[..lhat]).or_default().push(id);
    }
    let trailing_zeros = |id: usize| reads[id].iter().rev().take_while(|&&b| b == 0).count();

    let mut starts: Vec<(bool, usize, usize)> = Vec::new();
    for (id, r) in reads.iter().enumerate() {
        let Some(k) = r.iter().position(|&b| b == 0) else { continue };
        if k > g {
            continue;
        }
        let preceded = reads
            .iter()
            .any(|other| (1..=g + 1).any(|o| other[o..o + lhat] == r[..lhat]));
        starts.push((preceded, g + 1 - k, id));
    }
    starts.sort_by_key(|&(preceded, start, id)| (preceded, trailing_zeros(id), start, id));
    let mut stack = vec![Frame {
        children: starts.iter().map(|&(_, start, id)| (start, id)).collect(),
        next: 0,
        restore_len: 0,
        consumed: None,
    }];

    let mut s: Vec<u8> = Vec::with_capacity(n);
    let mut budget = ASSEMBLY_NODE_BUDGET;
    while let Some(top) = stack.last_mut() {
        if top.next == top.children.len() {
            let frame = stack.pop().expect("non-empty stack");
            s.truncate(frame.restore_len);
            if let Some(id) = frame.consumed {
                remaining[id] += 1;
            }
            continue;
        }
        let (start, id) = top.children[top.next];
        top.next += 1;
        budget = budget
            .checked_sub(1)
            .ok_or_else(|| Error::Resource("assembly search budget exhausted".into()))?;

        let restore_len = s.len();
        if stack.len() == 1 {
            s.clear();
            s.extend(std::iter::repeat_n(1, start - 1));
            s.extend_from_slice(reads[id]);
        } else {
            let overlap = s.len() - (start - 1);
            s.extend_from_slice(&reads[id][overlap..]);
        }
        remaining[id] -= 1;

        let mut children = Vec::new();
        if s.len() <= n {
            let last = s.len() + 1 - l;
            for j in last + 1..=last + g + 1 {
                let overlap = &s[j - 1..];
                let mut here: Vec<usize> = by_prefix
                    .get(&overlap[..lhat])
                    .map(|ids| {
                        ids.iter()
                            .copied()
                            .filter(|&c| remaining[c] > 0 && reads[c][..overlap.len()] == *overlap)
                            .collect()
                    })
                    .unwrap_or_default();
                here.sort_by_key(|&c| (trailing_zeros(c), c));
                children.extend(here.into_iter().map(|c| (j, c)));
            }
        }
        if children.is_empty() {
            if let Some(x) = finish(&s, &remaining, &reads, m, p)? {
                return Ok(x);
            }
        }
        stack.push(Frame { children, next: 0, restore_len, consumed: Some(id) });
    }
    Err(Error::Assembly("no consistent reconstruction".into()))
}

fn finish(s: &[u8], remaining: &[usize], reads: &[&[u8]], m: &Spectrum, p: &GapParams) -> Result<Option<BitString>> {
    if s.len() > p.n {
        return Ok(None);
    }
    if remaining.iter().zip(reads).any(|(&c, r)| c > 0 && r.contains(&1)) {
        return Ok(None);
    }
    let mut x = s.to_vec();
    x.resize(p.n, 0);
    let x = BitString::from_raw(x);
    if !m.is_submultiset_of(&multispectrum(&x, p.read_len())?) || !is_codeword(&x, p) {
        return Ok(None);
    }
    Ok(Some(x))
}
