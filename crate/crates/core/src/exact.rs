//! Full-multispectrum regime with read length `L ≥ 2⌈log₂ n⌉ + 4`.
//!
//! The encoder removes repeated `(L−1)`-windows one at a time, appending a record
//! that names the two window starts, until the string is `(L−1)`-substring unique.
//! Codewords are that string padded with zeros, so reconstruction reduces to
//! chaining reads by their `(L−1)`-overlaps.

use std::collections::HashMap;

use crate::bits::{ceil_log2, find_repeat, BitString, Repeat};
use crate::error::{Error, Result};
use crate::labeling::{label, unlabel};
use crate::spectrum::{multispectrum, Spectrum};
use crate::trace::{EncodingRound, EncodingTrace, RoundKind};

/// Validated code length and read length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactParams {
    n: usize,
    read_len: usize,
}

impl ExactParams {
    pub fn new(n: usize, read_len: usize) -> Result<Self> {
        let min = 2 * ceil_log2(n) + 4;
        if read_len < min {
            return Err(Error::Parameter(format!("read length {read_len} below 2⌈log₂ {n}⌉ + 4 = {min}")));
        }
        if n < read_len {
            return Err(Error::Parameter(format!("code length {n} shorter than read length {read_len}")));
        }
        Ok(Self { n, read_len })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    /// Length of the message accepted by [`lr_encode`].
    pub fn message_len(&self) -> usize {
        self.n - 2
    }

    fn window(&self) -> usize {
        self.read_len - 1
    }

    fn record_len(&self) -> usize {
        self.read_len - 2
    }

    fn pad_len(&self) -> usize {
        self.record_len() - 2 * ceil_log2(self.n) - 2
    }
}

fn require(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

/// Substitutes the window of length `len` at 1-based `j`, recovered from the copy at `i`.
/// Overlapping windows are rebuilt as the periodic extension of `x[i..j)`.
pub(crate) fn reinsert_window(x: &mut Vec<u8>, i: usize, j: usize, len: usize) {
    let gap = j - i;
    let window: Vec<u8> = (0..len)
        .map(|t| if gap >= len { x[i - 1 + t] } else { x[i - 1 + t % gap] })
        .collect();
    x.splice(j - 1..j - 1, window);
}

/// Iterated repeat removal. Input: length `n`, bit `L−1` and the last bit equal to 1.
pub fn rr_encode(x: &BitString, p: &ExactParams) -> Result<BitString> {
    rr_encode_traced(x, p).map(|(c, _)| c)
}

/// [`rr_encode`] together with the rounds it performed.
pub fn rr_encode_traced(x: &BitString, p: &ExactParams) -> Result<(BitString, EncodingTrace)> {
    let (n, w) = (p.n, p.window());
    require(x.len() == n, || Error::Input(format!("expected {n} bits, got {}", x.len())))?;
    require(x.bit(w)? == 1, || Error::Input(format!("bit {w} must be 1")))?;
    require(x.bit(n)? == 1, || Error::Input("last bit must be 1".into()))?;

    let mut y = x.clone();
    let mut trace = EncodingTrace::default();
    while let Some(Repeat { i, j }) = find_repeat(&y, w) {
        if trace.rounds.len() == n - p.read_len + 1 {
            return Err(Error::Internal("repeat removal exceeded its round budget".into()));
        }
        let mut record = BitString::ones(p.pad_len());
        record.extend_from(&label(i, n)?);
        record.extend_from(&label(j, n)?);
        record.extend_from(&BitString::from_raw(vec![0, 1]));

        let raw = y.raw_mut();
        raw.drain(j - 1..j - 1 + w);
        raw.extend_from_slice(record.as_slice());
        let len = raw.len();
        let fixup = raw[w - 1] == 0;
        if fixup {
            raw[w - 1] = 1;
            raw[len - 2] = 1;
        }
        trace.rounds.push(EncodingRound { kind: RoundKind::Repeat, i, j, record, fixup, length_after: len });
    }
    Ok((y, trace))
}

/// Inverse of [`rr_encode`]: undoes rounds until the string is back to length `n`.
pub fn rr_decode(z: &BitString, p: &ExactParams) -> Result<BitString> {
    let (n, w) = (p.n, p.window());
    require(z.len() <= n, || Error::Decode(format!("length {} exceeds {n}", z.len())))?;
    require(z.len() >= w, || Error::Decode(format!("length {} below {w}", z.len())))?;
    let label_w = ceil_log2(n);
    let mut y = z.as_slice().to_vec();
    while y.len() < n {
        let len = y.len();
        let rec = p.record_len();
        require(len > rec, || Error::Decode(format!("length {len} too short for a record")))?;
        if y[len - 2] == 1 {
            require(y[w - 1] == 1, || Error::Decode(format!("fixup flag set but bit {w} is 0")))?;
            y[w - 1] = 0;
            y[len - 2] = 0;
        }
        let record = y.split_off(len - rec);
        let (pad, rest) = record.split_at(p.pad_len());
        require(pad.iter().all(|&b| b == 1), || Error::Decode("record padding is not all ones".into()))?;
        require(rest[rest.len() - 2..] == [0, 1], || Error::Decode("malformed record terminator".into()))?;
        let i = unlabel(&BitString::from_raw(rest[..label_w].to_vec()), n)?;
        let j = unlabel(&BitString::from_raw(rest[label_w..2 * label_w].to_vec()), n)?;
        require(i < j && j <= y.len() + 1, || Error::Decode(format!("record names invalid pair ({i}, {j})")))?;
        reinsert_window(&mut y, i, j, w);
    }
    Ok(BitString::from_raw(y))
}

/// Message of length `n − 2` to a length-`n` codeword.
pub fn lr_encode(x: &BitString, p: &ExactParams) -> Result<BitString> {
    lr_encode_traced(x, p).map(|(c, _)| c)
}

pub fn lr_encode_traced(x: &BitString, p: &ExactParams) -> Result<(BitString, EncodingTrace)> {
    let n = p.n;
    require(x.len() == n - 2, || Error::Input(format!("expected {} bits, got {}", n - 2, x.len())))?;
    let mut y = x.as_slice().to_vec();
    y.extend_from_slice(&[0, 1]);
    let w = p.window();
    if y[w - 1] == 0 {
        y[w - 1] = 1;
        y[n - 2] = 1;
    }
    let (z, trace) = rr_encode_traced(&BitString::from_raw(y), p)?;
    Ok((z.zero_padded(n)?, trace))
}

/// Inverse of [`lr_encode`].
pub fn lr_decode(c: &BitString, p: &ExactParams) -> Result<BitString> {
    let n = p.n;
    require(c.len() == n, || Error::Decode(format!("expected {n} bits, got {}", c.len())))?;
    let mut y = rr_decode(&c.strip_trailing_zeros(), p)?.into_vec();
    let w = p.window();
    match (y[n - 2], y[n - 1]) {
        (0, 1) => {}
        (1, 1) => {
            require(y[w - 1] == 1, || Error::Decode(format!("flag (1,1) but bit {w} is 0")))?;
            y[w - 1] = 0;
        }
        _ => return Err(Error::Decode("malformed trailing flag".into())),
    }
    y.truncate(n - 2);
    Ok(BitString::from_raw(y))
}

/// Chains reads along `(L−1)`-overlaps starting from the only read whose prefix is no
/// read's suffix. On a fork, `prefer_one` takes the read ending in 1; otherwise a fork
/// is an error. Leftover all-zero reads become a zero fill up to `target_len`.
pub(crate) fn chain_reads(m: &Spectrum, target_len: Option<usize>, prefer_one: bool) -> Result<BitString> {
    let l = m.read_len();
    require(l >= 2, || Error::Domain("reads must have length at least 2".into()))?;
    require(!m.is_empty(), || Error::Assembly("empty spectrum".into()))?;
    let counts = m.counts();
    let distinct: Vec<&BitString> = counts.keys().copied().collect();
    let mut remaining: Vec<usize> = counts.values().copied().collect();
    let mut by_prefix: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for (id, r) in distinct.iter().enumerate() {
        by_prefix.entry(r.window(0, l - 1)).or_default().push(id);
    }
    let suffixes: std::collections::HashSet<&[u8]> = distinct.iter().map(|r| r.window(1, l - 1)).collect();
    let starts: Vec<usize> = (0..distinct.len())
        .filter(|&id| !suffixes.contains(distinct[id].window(0, l - 1)))
        .collect();
    let start = match starts.as_slice() {
        [s] => *s,
        [] => return Err(Error::Assembly("no read qualifies as the first read".into())),
        _ => return Err(Error::Assembly(format!("{} reads qualify as the first read", starts.len()))),
    };

    let mut s = distinct[start].as_slice().to_vec();
    remaining[start] -= 1;
    loop {
        let tail = &s[s.len() - (l - 1)..];
        let live: Vec<usize> = by_prefix
            .get(tail)
            .map(|ids| ids.iter().copied().filter(|&id| remaining[id] > 0).collect())
            .unwrap_or_default();
        let next = match live.as_slice() {
            [] => break,
            [only] => *only,
            [a, b] if prefer_one => {
                if distinct[*a].as_slice()[l - 1] == 1 { *a } else { *b }
            }
            _ => return Err(Error::Assembly(format!("unresolvable fork after {} bits", s.len()))),
        };
        remaining[next] -= 1;
        s.push(distinct[next].as_slice()[l - 1]);
    }
    let leftover_nonzero = remaining
        .iter()
        .zip(&distinct)
        .any(|(&c, r)| c > 0 && r.weight() > 0);
    require(!leftover_nonzero, || Error::Assembly("reads left over after chaining".into()))?;
    let leftover = remaining.iter().sum::<usize>();
    match target_len {
        Some(n) => {
            require(s.len() <= n, || Error::Assembly(format!("chained {} bits, more than {n}", s.len())))?;
            s.resize(n, 0);
        }
        None => require(leftover == 0, || Error::Assembly("reads left over after chaining".into()))?,
    }
    Ok(BitString::from_raw(s))
}

/// Reconstructs an `(L−1)`-substring unique string from its `L`-multispectrum.
pub fn assemble_unique(m: &Spectrum) -> Result<BitString> {
    let x = chain_reads(m, None, false)?;
    require(x.len() == m.len() + m.read_len() - 1, || Error::Assembly("chain does not use every read".into()))?;
    Ok(x)
}

/// Reconstructs a zero-padded codeword of length `n` from its full `L`-multispectrum.
pub fn assemble_padded(m: &Spectrum, p: &ExactParams) -> Result<BitString> {
    assemble_padded_len(m, p.n, p.read_len)
}

pub(crate) fn assemble_padded_len(m: &Spectrum, n: usize, read_len: usize) -> Result<BitString> {
    require(m.read_len() == read_len, || {
        Error::Domain(format!("spectrum read length {} differs from {read_len}", m.read_len()))
    })?;
    let x = chain_reads(m, Some(n), true)?;
    require(multispectrum(&x, read_len)? == *m, || {
        Error::Assembly("chained string does not reproduce the spectrum".into())
    })?;
    Ok(x)
}
