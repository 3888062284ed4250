//! Full-multispectrum regime at read length `⌈log₂ n⌉ + 2⌈log₂⌈log₂ n⌉⌉ + 8`.
//!
//! Inputs avoid zero runs of length `r = 2⌈log₂⌈log₂ n⌉⌉`. Each round overwrites a
//! repeated `(L−1)`-window in place with a shorter record that opens with the marker
//! `0^r 1`, so the decoder finds the newest record as the last marker occurrence.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::{ceil_log2, find_repeat, BitString, Repeat};
use crate::error::{Error, Result};
use crate::exact::{assemble_padded_len, reinsert_window};
use crate::labeling::{rll_run_bound, RllCodebook, RllLabeler};
use crate::spectrum::Spectrum;
use crate::trace::{EncodingRound, EncodingTrace, RoundKind};

#[derive(Clone, Debug)]
pub struct PrimalParams {
    n: usize,
    read_len: usize,
    labeler: RllLabeler,
}

impl PrimalParams {
    pub fn new(n: usize, read_len: usize) -> Result<Self> {
        let run = rll_run_bound(n);
        let min = ceil_log2(n) + run + 8;
        if read_len < min {
            return Err(Error::Parameter(format!("read length {read_len} below {min} for n = {n}")));
        }
        if n < read_len {
            return Err(Error::Parameter(format!("code length {n} shorter than read length {read_len}")));
        }
        Ok(Self { n, read_len, labeler: RllLabeler::new(n)? })
    }

    /// The smallest admissible read length for `n`.
    pub fn min_read_len(n: usize) -> usize {
        ceil_log2(n) + rll_run_bound(n) + 8
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    /// Zero runs of this length or longer are forbidden in inputs.
    pub fn zero_run(&self) -> usize {
        self.labeler.forbidden_run()
    }

    pub fn message_len(&self) -> usize {
        self.n - 3
    }

    fn window(&self) -> usize {
        self.read_len - 1
    }

    fn record_len(&self) -> usize {
        self.read_len - 5
    }

    fn pad_len(&self) -> usize {
        self.record_len() - self.zero_run() - self.labeler.width() - 2
    }

    fn record(&self, i: usize) -> Result<BitString> {
        let mut rec = BitString::zeros(self.zero_run());
        rec.push(1);
        rec.extend_from(&self.labeler.label(i)?);
        rec.extend_from(&BitString::ones(self.pad_len() + 1));
        Ok(rec)
    }
}

fn require(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

/// In-place repeat replacement. Input: length `n`, bit `L−1` and the last bit 1, no
/// zero run of length `r`.
pub fn prr_encode(x: &BitString, p: &PrimalParams) -> Result<BitString> {
    prr_encode_traced(x, p).map(|(c, _)| c)
}

pub fn prr_encode_traced(x: &BitString, p: &PrimalParams) -> Result<(BitString, EncodingTrace)> {
    let (n, w) = (p.n, p.window());
    require(x.len() == n, || Error::Input(format!("expected {n} bits, got {}", x.len())))?;
    require(x.bit(w)? == 1, || Error::Input(format!("bit {w} must be 1")))?;
    require(x.bit(n)? == 1, || Error::Input("last bit must be 1".into()))?;
    require(x.max_zero_run() < p.zero_run(), || {
        Error::Input(format!("input has a zero run of length ≥ {}", p.zero_run()))
    })?;

    let mut y = x.clone();
    let mut trace = EncodingTrace::default();
    while let Some(Repeat { i, j }) = find_repeat(&y, w) {
        if trace.rounds.len() == n - p.read_len + 1 {
            return Err(Error::Internal("repeat replacement exceeded its round budget".into()));
        }
        let record = p.record(i)?;
        let raw = y.raw_mut();
        raw.splice(j - 1..j - 1 + w, record.iter());
        raw.extend_from_slice(&[1, 0, 1]);
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

/// 0-based start of the last `0^r 1` occurrence.
fn last_marker(y: &[u8], run: usize) -> Option<usize> {
    (run..y.len())
        .rev()
        .find(|&q| y[q] == 1 && y[q - run..q].iter().all(|&b| b == 0))
        .map(|q| q - run)
}

/// Inverse of [`prr_encode`].
pub fn prr_decode(z: &BitString, p: &PrimalParams) -> Result<BitString> {
    let (n, w, run) = (p.n, p.window(), p.zero_run());
    require(z.len() <= n, || Error::Decode(format!("length {} exceeds {n}", z.len())))?;
    require(z.len() >= w, || Error::Decode(format!("length {} below {w}", z.len())))?;
    let mut y = z.as_slice().to_vec();
    while y.len() < n {
        let len = y.len();
        require(len >= p.record_len() + 3, || Error::Decode(format!("length {len} too short for a record")))?;
        require(y[len - 3] == 1 && y[len - 1] == 1, || Error::Decode("malformed round flag".into()))?;
        if y[len - 2] == 1 {
            require(y[w - 1] == 1, || Error::Decode(format!("fixup flag set but bit {w} is 0")))?;
            y[w - 1] = 0;
            y[len - 2] = 0;
        }
        y.truncate(len - 3);
        let start = last_marker(&y, run).ok_or_else(|| Error::Decode("no record marker found".into()))?;
        let end = start + p.record_len();
        require(end <= y.len(), || Error::Decode("record runs past the end".into()))?;
        let label_at = start + run + 1;
        let label_end = label_at + p.labeler.width();
        require(y[label_end..end].iter().all(|&b| b == 1), || Error::Decode("malformed record tail".into()))?;
        let i = p.labeler.unlabel(&BitString::from_raw(y[label_at..label_end].to_vec()))?;
        let j = start + 1;
        require(i < j, || Error::Decode(format!("record names invalid pair ({i}, {j})")))?;
        y.drain(start..end);
        reinsert_window(&mut y, i, j, w);
    }
    Ok(BitString::from_raw(y))
}

/// Message of length `n − 3` without zero runs of length `r` to a length-`n` codeword.
pub fn plr_encode(x: &BitString, p: &PrimalParams) -> Result<BitString> {
    plr_encode_traced(x, p).map(|(c, _)| c)
}

pub fn plr_encode_traced(x: &BitString, p: &PrimalParams) -> Result<(BitString, EncodingTrace)> {
    let n = p.n;
    require(x.len() == n - 3, || Error::Input(format!("expected {} bits, got {}", n - 3, x.len())))?;
    require(x.max_zero_run() < p.zero_run(), || {
        Error::Input(format!("input has a zero run of length ≥ {}", p.zero_run()))
    })?;
    let mut y = x.as_slice().to_vec();
    y.extend_from_slice(&[1, 0, 1]);
    let w = p.window();
    if y[w - 1] == 0 {
        y[w - 1] = 1;
        y[n - 2] = 1;
    }
    let (z, trace) = prr_encode_traced(&BitString::from_raw(y), p)?;
    Ok((z.zero_padded(n)?, trace))
}

/// Inverse of [`plr_encode`].
pub fn plr_decode(c: &BitString, p: &PrimalParams) -> Result<BitString> {
    let n = p.n;
    require(c.len() == n, || Error::Decode(format!("expected {n} bits, got {}", c.len())))?;
    let mut y = prr_decode(&c.strip_trailing_zeros(), p)?.into_vec();
    let w = p.window();
    match &y[n - 3..] {
        [1, 0, 1] => {}
        [1, 1, 1] => {
            require(y[w - 1] == 1, || Error::Decode(format!("flag 111 but bit {w} is 0")))?;
            y[w - 1] = 0;
        }
        _ => return Err(Error::Decode("malformed trailing flag".into())),
    }
    y.truncate(n - 3);
    Ok(BitString::from_raw(y))
}

/// Reconstructs a codeword from its full multispectrum.
pub fn assemble(m: &Spectrum, p: &PrimalParams) -> Result<BitString> {
    assemble_padded_len(m, p.n, p.read_len)
}

/// Maps payload bits to strings without long zero runs, block by block: each block of
/// `⌈log₂ n'⌉` bits starts and ends with 1 and its interior is chosen by enumerative
/// unranking of the payload read as a mixed-radix number. Leftover tail bits are 1.
#[derive(Clone, Debug)]
pub struct InputShaper {
    len: usize,
    block_len: usize,
    blocks: usize,
    interior: RllCodebook,
    capacity: usize,
}

impl InputShaper {
    /// Shaper producing strings of length `len` (the `n − 3` of the primal code).
    pub fn new(len: usize) -> Result<Self> {
        let block_len = ceil_log2(len);
        let run = rll_run_bound(len);
        if block_len < 2 || run == 0 {
            return Err(Error::Parameter(format!("length {len} too small to shape")));
        }
        let interior = RllCodebook::new(block_len - 2, run)?;
        let blocks = len / block_len;
        let capacity = (Self::radix_pow(interior.size(), blocks).bits() - 1) as usize;
        Ok(Self { len, block_len, blocks, interior, capacity })
    }

    fn radix_pow(radix: u128, blocks: usize) -> BigUint {
        num_traits::pow(BigUint::from(radix), blocks)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Admissible contents per block.
    pub fn choices_per_block(&self) -> u128 {
        self.interior.size()
    }

    /// Zero runs of this length or longer never appear in shaped strings.
    pub fn forbidden_run(&self) -> usize {
        self.interior.forbidden_run()
    }

    /// Payload bits consumed by [`InputShaper::shape`].
    pub fn capacity_bits(&self) -> usize {
        self.capacity
    }

    /// Exclusive upper bound on values accepted by [`InputShaper::shape_value`].
    pub fn value_bound(&self) -> BigUint {
        Self::radix_pow(self.interior.size(), self.blocks)
    }

    pub fn shape(&self, payload: &BitString) -> Result<BitString> {
        if payload.len() < self.capacity {
            return Err(Error::Input(format!(
                "payload exhausted: {} bits supplied, {} needed",
                payload.len(),
                self.capacity
            )));
        }
        if payload.len() > self.capacity {
            return Err(Error::Input(format!("payload of {} bits exceeds capacity {}", payload.len(), self.capacity)));
        }
        let value = payload.iter().fold(BigUint::zero(), |acc, b| (acc << 1u8) + BigUint::from(b));
        self.shape_value(&value)
    }

    /// Shapes any value below [`InputShaper::value_bound`]; the first block is the
    /// most significant digit, so output order follows numeric order.
    pub fn shape_value(&self, value: &BigUint) -> Result<BitString> {
        if *value >= self.value_bound() {
            return Err(Error::Input("payload value exceeds the shaper's range".into()));
        }
        let radix = BigUint::from(self.interior.size());
        let mut rest = value.clone();
        let mut digits = vec![0u128; self.blocks];
        for d in digits.iter_mut().rev() {
            *d = (&rest % &radix).to_u128().expect("digit below radix");
            rest /= &radix;
        }
        let mut out = BitString::default();
        for d in digits {
            out.push(1);
            out.extend_from(&self.interior.unrank(d)?);
            out.push(1);
        }
        out.extend_from(&BitString::ones(self.len - self.blocks * self.block_len));
        Ok(out)
    }

    pub fn extract_value(&self, x: &BitString) -> Result<BigUint> {
        if x.len() != self.len {
            return Err(Error::Input(format!("expected {} bits, got {}", self.len, x.len())));
        }
        let radix = BigUint::from(self.interior.size());
        let mut value = BigUint::zero();
        for b in 0..self.blocks {
            let block = x.window(b * self.block_len, self.block_len);
            if block[0] != 1 || block[self.block_len - 1] != 1 {
                return Err(Error::Input(format!("block {} is not bounded by ones", b + 1)));
            }
            let inner = BitString::from_raw(block[1..self.block_len - 1].to_vec());
            value = value * &radix + BigUint::from(self.interior.rank(&inner).map_err(|e| Error::Input(e.to_string()))?);
        }
        if x.as_slice()[self.blocks * self.block_len..].iter().any(|&b| b != 1) {
            return Err(Error::Input("tail bits must be ones".into()));
        }
        Ok(value)
    }

    /// Inverse of [`InputShaper::shape`].
    pub fn extract(&self, x: &BitString) -> Result<BitString> {
        let value = self.extract_value(x)?;
        if value.bits() as usize > self.capacity {
            return Err(Error::Input("value does not come from a payload of this capacity".into()));
        }
        let one = BigUint::one();
        Ok(BitString::from_bools(
            (0..self.capacity).rev().map(|k| (&value >> k) & &one == one),
        ))
    }
}

/// Shapes `payload` into an input for a primal code of length `n`.
pub fn gen_constrained_input(payload: &BitString, n: usize) -> Result<BitString> {
    if n < 4 {
        return Err(Error::Parameter(format!("n = {n} too small")));
    }
    InputShaper::new(n - 3)?.shape(payload)
}

/// Inverse of [`gen_constrained_input`].
pub fn extract_payload(x: &BitString, n: usize) -> Result<BitString> {
    if n < 4 {
        return Err(Error::Parameter(format!("n = {n} too small")));
    }
    InputShaper::new(n - 3)?.extract(x)
}

/// Lower bound on the rate of the primal code family at length `n`:
/// `(1/n)·((n'/log n') − 1)·(log(n'/4) + log(1 − 1/log n'))` with `n' = n − 3`.
pub fn primal_rate_bound(n: usize) -> f64 {
    let m = (n - 3) as f64;
    let lm = m.log2();
    (1.0 / n as f64) * (m / lm - 1.0) * ((m / 4.0).log2() + (1.0 - 1.0 / lm).log2())
}
