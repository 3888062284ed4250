//! Noisy-spectrum regime: up to `G` consecutive read positions lost and up to `t`
//! flipped bits per read.
//!
//! Codewords are `(6t+1)`-substring distinct and `(2t+1)`-heavy at window `L̃`, with
//! read length `L = 3L̃`. A periodic prefix block plus an encoded length residue pins
//! the start, and the last `L − 1` bits always form a word of a BCH code correcting
//! `5t + G` errors, which the assembler uses to clean up the tail.

mod assemble;
mod bch;
mod diff;

pub use assemble::{assemble_noisy, assemble_noisy_traced, NoisyAssemblyTrace, StartRule};
pub use bch::{bch_redundancy, DistanceCode};
pub use diff::DiffRecord;

use crate::bits::{ceil_log2, find_light_window, find_near_repeat, BitString, Repeat};
use crate::error::{Error, Result};
use crate::labeling::{label, unlabel};
use crate::trace::{EncodingRound, EncodingTrace, RoundKind};

/// Largest window the parameter search will try.
const MAX_WINDOW: usize = 1 << 14;

/// Lengths that depend on the code length only through `⌈log₂ n⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Layout {
    window: usize,
    rep_len: usize,
    length_message: usize,
    length_parity: usize,
    suffix_parity: usize,
    slack: usize,
}

impl Layout {
    fn prefix_len(&self) -> usize {
        self.rep_len + self.length_message + self.length_parity
    }

    fn read_len(&self) -> usize {
        3 * self.window
    }

    /// Smallest window `L̃` whose record fits: `L̃ ≥ 2⌈log n⌉ + 6t⌈log(L̃+1)⌉ + r(L−1) + P + 2t + 2`,
    /// with `r(·)` and `P` computed from the actual BCH parity lengths.
    fn solve(label_width: usize, max_gap: usize, max_flips: usize) -> Result<Self> {
        let correctable = 5 * max_flips + max_gap;
        let rep_len = (2 * max_flips + max_gap + 2) * (2 * max_flips + 2);
        for window in 2..=MAX_WINDOW {
            let length_message = ceil_log2(2 * (max_gap + window + 1));
            let Some(length_parity) = DistanceCode::redundancy_for_message(length_message, correctable) else {
                break;
            };
            let Some(suffix_parity) = DistanceCode::redundancy_for_length(3 * window - 1, correctable) else {
                break;
            };
            let needed = 2 * label_width
                + 6 * max_flips * ceil_log2(window + 1)
                + suffix_parity
                + rep_len
                + length_message
                + length_parity
                + 2 * max_flips
                + 2;
            if needed <= window {
                return Ok(Self {
                    window,
                    rep_len,
                    length_message,
                    length_parity,
                    suffix_parity,
                    slack: window - needed,
                });
            }
        }
        Err(Error::Parameter(format!("no window up to {MAX_WINDOW} satisfies the record length equation")))
    }
}

/// Validated parameters of the noisy regime.
#[derive(Clone, Debug)]
pub struct NoisyParams {
    n: usize,
    max_gap: usize,
    max_flips: usize,
    layout: Layout,
    length_code: DistanceCode,
    suffix_code: DistanceCode,
}

impl NoisyParams {
    pub fn new(n: usize, max_gap: usize, max_flips: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("code length {n} too small")));
        }
        let layout = Layout::solve(ceil_log2(n), max_gap, max_flips)?;
        if max_gap >= layout.window {
            return Err(Error::Parameter(format!("gap {max_gap} not below window {}", layout.window)));
        }
        let read_len = layout.read_len();
        if read_len > n {
            return Err(Error::Parameter(format!("read length {read_len} exceeds code length {n}")));
        }
        if n + 1 < read_len + layout.prefix_len() {
            return Err(Error::Parameter(format!(
                "code length {n} leaves no room for a message (needs {})",
                read_len + layout.prefix_len() - 1
            )));
        }
        let correctable = 5 * max_flips + max_gap;
        let length_code = DistanceCode::for_message(layout.length_message, correctable)?;
        let suffix_code = DistanceCode::for_length(read_len - 1, correctable)?;
        debug_assert_eq!(length_code.redundancy(), layout.length_parity);
        debug_assert_eq!(suffix_code.redundancy(), layout.suffix_parity);
        Ok(Self { n, max_gap, max_flips, layout, length_code, suffix_code })
    }

    /// Smallest code length accepted for the given gap and flip bounds.
    pub fn min_code_len(max_gap: usize, max_flips: usize) -> Result<usize> {
        for width in 1..usize::BITS as usize - 1 {
            let layout = Layout::solve(width, max_gap, max_flips)?;
            let lo = (1usize << (width - 1)) + 1;
            let candidate = lo.max(layout.read_len() + layout.prefix_len() - 1);
            if candidate <= 1 << width && Self::new(candidate, max_gap, max_flips).is_ok() {
                return Ok(candidate);
            }
        }
        Err(Error::Parameter("no admissible code length".into()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_gap(&self) -> usize {
        self.max_gap
    }

    pub fn max_flips(&self) -> usize {
        self.max_flips
    }

    /// Distinctness/heaviness window `L̃`.
    pub fn window(&self) -> usize {
        self.layout.window
    }

    /// Read length `L = 3L̃`.
    pub fn read_len(&self) -> usize {
        self.layout.read_len()
    }

    /// Errors the BCH codes correct: `5t + G`.
    pub fn correctable(&self) -> usize {
        5 * self.max_flips + self.max_gap
    }

    /// Length `P` of the protected prefix (periodic block plus length residue).
    pub fn prefix_len(&self) -> usize {
        self.layout.prefix_len()
    }

    /// Length of the periodic block `(1^{2t+G+1} 0)^{2t+2}`.
    pub fn rep_len(&self) -> usize {
        self.layout.rep_len
    }

    /// Period of the prefix block.
    pub fn rep_period(&self) -> usize {
        2 * self.max_flips + self.max_gap + 2
    }

    /// Parity bits protecting the last `L − 1` bits.
    pub fn suffix_parity_len(&self) -> usize {
        self.layout.suffix_parity
    }

    /// Modulus of the length residue stored in the prefix.
    pub fn length_modulus(&self) -> usize {
        2 * (self.max_gap + self.layout.window + 1)
    }

    /// Bits per round record (excluding its parity).
    pub fn record_len(&self) -> usize {
        self.layout.window - 1 - self.layout.suffix_parity
    }

    /// Input length of [`gt_encode`].
    pub fn message_len(&self) -> usize {
        self.n - self.prefix_len() - self.layout.suffix_parity - 1
    }

    /// Total redundancy `n − message_len`.
    pub fn redundancy(&self) -> usize {
        self.n - self.message_len()
    }

    pub fn diff(&self) -> DiffRecord {
        DiffRecord::new(self.layout.window, 6 * self.max_flips)
    }

    pub fn length_code(&self) -> &DistanceCode {
        &self.length_code
    }

    pub fn suffix_code(&self) -> &DistanceCode {
        &self.suffix_code
    }

    fn label_width(&self) -> usize {
        ceil_log2(self.n)
    }

    fn ones_tail(&self) -> usize {
        2 * self.max_flips + 1 + self.layout.slack
    }

    /// `(1^{2t+G+1} 0)` repeated `2t + 2` times.
    pub fn rep_block(&self) -> BitString {
        let period = self.rep_period();
        BitString::from_bools((0..self.layout.rep_len).map(|k| k % period != period - 1))
    }

    /// The length residue `len mod (2(G+L̃+1))` with its parity.
    pub fn length_block(&self, len: usize) -> Result<BitString> {
        let residue = BitString::from_uint((len % self.length_modulus()) as u64, self.layout.length_message)?;
        self.length_code.encode(&residue)
    }

    /// Decodes a (possibly corrupted) length block to the residue it carries.
    pub fn decode_length_block(&self, block: &BitString) -> Result<usize> {
        let word = self.length_code.decode(block)?;
        let residue = word.substring(1, self.layout.length_message)?.to_uint()? as usize;
        if residue >= self.length_modulus() {
            return Err(Error::Decode(format!("length residue {residue} out of range")));
        }
        Ok(residue)
    }

    /// `(rep_block, length_block(len))`.
    pub fn prefix_block(&self, len: usize) -> Result<BitString> {
        Ok(self.rep_block().concat(&self.length_block(len)?))
    }

    /// Splits the last `L − 1` bits, laid out `(z, parity, v)` with `|z| = 2L̃`, into the
    /// BCH word `(z, v, parity)`.
    pub fn suffix_to_word(&self, tail: &[u8]) -> BitString {
        let (z_len, r) = (2 * self.layout.window, self.layout.suffix_parity);
        let mut word = tail[..z_len].to_vec();
        word.extend_from_slice(&tail[z_len + r..]);
        word.extend_from_slice(&tail[z_len..z_len + r]);
        BitString::from_raw(word)
    }

    /// Inverse of [`NoisyParams::suffix_to_word`].
    pub fn word_to_suffix(&self, word: &BitString) -> BitString {
        let (z_len, r) = (2 * self.layout.window, self.layout.suffix_parity);
        let w = word.as_slice();
        let k = w.len() - r;
        let mut tail = w[..z_len].to_vec();
        tail.extend_from_slice(&w[k..]);
        tail.extend_from_slice(&w[z_len..k]);
        BitString::from_raw(tail)
    }

    /// `(z, parity(z, v), v)`.
    fn protected_suffix(&self, z: &[u8], v: &[u8]) -> Result<Vec<u8>> {
        let mut msg = z.to_vec();
        msg.extend_from_slice(v);
        let parity = self.suffix_code.parity(&BitString::from_raw(msg))?;
        let mut out = z.to_vec();
        out.extend_from_slice(parity.as_slice());
        out.extend_from_slice(v);
        Ok(out)
    }
}

fn require(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

/// Iterated near-repeat and light-window removal on a string of length at most `n`
/// whose prefix is `prefix_block(len)` and whose last `L − 1` bits are protected.
pub fn gtrr_encode(x: &BitString, p: &NoisyParams) -> Result<BitString> {
    gtrr_encode_traced(x, p).map(|(c, _)| c)
}

pub fn gtrr_encode_traced(x: &BitString, p: &NoisyParams) -> Result<(BitString, EncodingTrace)> {
    let (n, lt, t) = (p.n, p.window(), p.max_flips);
    require(x.len() <= n && x.len() >= p.read_len() - 1 + p.prefix_len(), || {
        Error::Input(format!("length {} outside {}..={n}", x.len(), p.read_len() - 1 + p.prefix_len()))
    })?;
    require(x.bit(x.len())? == 1, || Error::Input("last bit must be 1".into()))?;
    require(x.substring(1, p.prefix_len())? == p.prefix_block(x.len())?, || {
        Error::Input("prefix block does not match the length".into())
    })?;

    let mut y = x.as_slice().to_vec();
    let mut trace = EncodingTrace::default();
    loop {
        let current = BitString::from_raw(y.clone());
        let (kind, i, j) = if let Some(Repeat { i, j }) = find_near_repeat(&current, lt, 6 * t) {
            (RoundKind::Repeat, i, j)
        } else if let Some(j) = find_light_window(&current, lt, 2 * t) {
            (RoundKind::LightWindow, j, j)
        } else {
            break;
        };
        require(trace.rounds.len() < x.len(), || Error::Internal("round budget exhausted".into()))?;
        trace.rounds.push(remove_window(&mut y, kind, i, j, p)?);
    }
    Ok((BitString::from_raw(y), trace))
}

/// One encoding round: deletes the window at `j`, appends the record naming it (with its
/// difference from the window at `i`, or from zeros for a light window) and the suffix
/// parity, and refreshes the prefix block for the new length.
pub(crate) fn remove_window(y: &mut Vec<u8>, kind: RoundKind, i: usize, j: usize, p: &NoisyParams) -> Result<EncodingRound> {
    let (n, lt) = (p.n, p.window());
    require(y.len() >= p.read_len(), || {
        Error::Input(format!("string of length {} too short for another round", y.len()))
    })?;
    let target = &y[j - 1..j - 1 + lt];
    let source: Vec<u8> = if kind == RoundKind::Repeat { y[i - 1..i - 1 + lt].to_vec() } else { vec![0; lt] };
    let d = p.diff().encode(&source, target)?;
    y.drain(j - 1..j - 1 + lt);

    let mut record = label(i, n)?;
    record.extend_from(&label(j, n)?);
    record.extend_from(&d);
    record.extend_from(&BitString::from_raw(y[..p.prefix_len()].to_vec()));
    record.extend_from(&BitString::ones(p.ones_tail()));
    debug_assert_eq!(record.len(), p.record_len());

    // The prefix may reach into the protected window, so refresh it before the parity.
    let len = y.len() + lt - 1;
    y[..p.prefix_len()].copy_from_slice(p.prefix_block(len)?.as_slice());
    let z = y[y.len() - 2 * lt..].to_vec();
    let protected = p.protected_suffix(&z, record.as_slice())?;
    y.extend_from_slice(&protected[2 * lt..]);
    debug_assert_eq!(y.len(), len);
    Ok(EncodingRound { kind, i, j, record, fixup: false, length_after: len })
}

/// Inverse of [`gtrr_encode`] for an input of length `original_len`.
pub fn gtrr_decode(z: &BitString, original_len: usize, p: &NoisyParams) -> Result<BitString> {
    let (n, lt) = (p.n, p.window());
    require(original_len <= n && z.len() <= original_len, || {
        Error::Decode(format!("length {} cannot expand to {original_len}", z.len()))
    })?;
    let (w, diff) = (p.label_width(), p.diff());
    let mut y = z.as_slice().to_vec();
    while y.len() < original_len {
        let len = y.len();
        require(len >= lt - 1 + p.prefix_len(), || Error::Decode(format!("length {len} too short for a record")))?;
        let record = y.split_off(len - p.record_len());
        y.truncate(len - (lt - 1));
        let (i_bits, rest) = record.split_at(w);
        let (j_bits, rest) = rest.split_at(w);
        let (d_bits, rest) = rest.split_at(diff.encoded_len());
        let (snapshot, ones) = rest.split_at(p.prefix_len());
        require(ones.iter().all(|&b| b == 1), || Error::Decode("malformed record tail".into()))?;
        let i = unlabel(&BitString::from_raw(i_bits.to_vec()), n)?;
        let j = unlabel(&BitString::from_raw(j_bits.to_vec()), n)?;
        require(y.len() >= p.prefix_len(), || Error::Decode("record predates its prefix".into()))?;
        y[..p.prefix_len()].copy_from_slice(snapshot);
        require(i <= j && j <= y.len() + 1, || Error::Decode(format!("record names invalid pair ({i}, {j})")))?;
        let mut flips = vec![0u8; lt];
        for pos in diff.positions(d_bits)? {
            flips[pos - 1] = 1;
        }
        // Overlapping sources read bits of the window being rebuilt, already corrected.
        let mut window = vec![0u8; lt];
        for t in 0..lt {
            let base = if i == j {
                0
            } else if i - 1 + t < j - 1 {
                y[i - 1 + t]
            } else {
                window[t - (j - i)]
            };
            window[t] = base ^ flips[t];
        }
        y.splice(j - 1..j - 1, window);
    }
    Ok(BitString::from_raw(y))
}

/// Message of length `message_len()` to a length-`n` codeword.
pub fn gt_encode(x: &BitString, p: &NoisyParams) -> Result<BitString> {
    gt_encode_traced(x, p).map(|(c, _)| c)
}

pub fn gt_encode_traced(x: &BitString, p: &NoisyParams) -> Result<(BitString, EncodingTrace)> {
    let lt = p.window();
    require(x.len() == p.message_len(), || {
        Error::Input(format!("expected {} bits, got {}", p.message_len(), x.len()))
    })?;
    let tail_len = p.read_len() - 2 - p.suffix_parity_len();
    let (head, tail) = x.as_slice().split_at(x.len() - tail_len);
    let mut v = tail[2 * lt..].to_vec();
    v.push(1);
    let mut y = p.prefix_block(p.n)?.into_vec();
    y.extend_from_slice(head);
    y.extend(p.protected_suffix(&tail[..2 * lt], &v)?);
    debug_assert_eq!(y.len(), p.n);
    let (z, trace) = gtrr_encode_traced(&BitString::from_raw(y), p)?;
    Ok((z.zero_padded(p.n)?, trace))
}

/// Inverse of [`gt_encode`].
pub fn gt_decode(c: &BitString, p: &NoisyParams) -> Result<BitString> {
    let (n, lt, l) = (p.n, p.window(), p.read_len());
    require(c.len() == n, || Error::Decode(format!("expected {n} bits, got {}", c.len())))?;
    let y = gtrr_decode(&c.strip_trailing_zeros(), n, p)?;
    require(y.substring(1, p.prefix_len())? == p.prefix_block(n)?, || Error::Decode("malformed prefix block".into()))?;
    let tail = &y.as_slice()[n - (l - 1)..];
    let word = p.suffix_to_word(tail);
    let parity = p.suffix_code.parity(&word.substring(1, p.suffix_code.message_len())?)?;
    require(word.as_slice()[p.suffix_code.message_len()..] == *parity.as_slice(), || {
        Error::Decode("suffix parity mismatch".into())
    })?;
    require(tail[l - 2] == 1, || Error::Decode("last bit must be 1".into()))?;
    let mut x = y.as_slice()[p.prefix_len()..n - (l - 1)].to_vec();
    x.extend_from_slice(&tail[..2 * lt]);
    x.extend_from_slice(&tail[2 * lt + p.suffix_parity_len()..l - 2]);
    Ok(BitString::from_raw(x))
}
