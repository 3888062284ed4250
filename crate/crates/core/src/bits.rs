//! Binary strings with 1-based positional access, plus the window predicates
//! (uniqueness, heaviness, distinctness) the codecs are built on.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `⌈log₂ n⌉` for `n ≥ 1`; `0` for `n ≤ 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// A finite binary string. Bits are stored one per byte as `0` or `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(p) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Domain(format!("byte {} at index {p} is not a bit", bits[p])));
        }
        Ok(Self(bits))
    }

    /// Builds from bytes already known to be `0`/`1`.
    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits)
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self(bits.into_iter().map(u8::from).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// The `width`-bit MSB-first binary expansion of `value`.
    pub fn from_uint(value: u64, width: usize) -> Result<Self> {
        if width < 64 && value >> width != 0 {
            return Err(Error::Domain(format!("{value} does not fit in {width} bits")));
        }
        Ok(Self(
            (0..width)
                .rev()
                .map(|s| if s >= 64 { 0 } else { ((value >> s) & 1) as u8 })
                .collect(),
        ))
    }

    /// Reads the string as an MSB-first unsigned integer.
    pub fn to_uint(&self) -> Result<u64> {
        let significant = self.0.iter().skip_while(|&&b| b == 0).count();
        if significant > 64 {
            return Err(Error::Domain(format!("{} significant bits exceed u64", significant)));
        }
        Ok(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    /// Bit at 1-based position `pos`.
    pub fn bit(&self, pos: usize) -> Result<u8> {
        if pos == 0 || pos > self.len() {
            return Err(Error::Bounds(format!("position {pos} outside 1..={}", self.len())));
        }
        Ok(self.0[pos - 1])
    }

    /// Sets the bit at 1-based position `pos`.
    pub fn set_bit(&mut self, pos: usize, value: u8) -> Result<()> {
        if value > 1 {
            return Err(Error::Domain(format!("{value} is not a bit")));
        }
        if pos == 0 || pos > self.len() {
            return Err(Error::Bounds(format!("position {pos} outside 1..={}", self.len())));
        }
        self.0[pos - 1] = value;
        Ok(())
    }

    /// The length-`len` substring starting at 1-based position `start`.
    pub fn substring(&self, start: usize, len: usize) -> Result<BitString> {
        if start == 0 || start - 1 + len > self.len() {
            return Err(Error::Bounds(format!(
                "substring ({start}, {len}) outside string of length {}",
                self.len()
            )));
        }
        Ok(Self(self.0[start - 1..start - 1 + len].to_vec()))
    }

    /// 0-based window view, unchecked beyond slice bounds.
    pub(crate) fn window(&self, start0: usize, len: usize) -> &[u8] {
        &self.0[start0..start0 + len]
    }

    pub(crate) fn raw_mut(&mut self) -> &mut Vec<u8> {
        &mut self.0
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Self(out)
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// 1-based position of the last one, if any.
    pub fn last_one(&self) -> Option<usize> {
        self.0.iter().rposition(|&b| b == 1).map(|p| p + 1)
    }

    /// Drops trailing zeros.
    pub fn strip_trailing_zeros(&self) -> BitString {
        Self(self.0[..self.last_one().unwrap_or(0)].to_vec())
    }

    /// Appends zeros up to `len`.
    pub fn zero_padded(&self, len: usize) -> Result<BitString> {
        if self.len() > len {
            return Err(Error::Bounds(format!("cannot pad length {} down to {len}", self.len())));
        }
        let mut out = self.0.clone();
        out.resize(len, 0);
        Ok(Self(out))
    }

    /// Length of the longest run of zeros.
    pub fn max_zero_run(&self) -> usize {
        self.0
            .split(|&b| b == 1)
            .map(<[u8]>::len)
            .max()
            .unwrap_or(0)
    }

    /// Smallest period, via the border (failure) function. Empty strings have period 0.
    pub fn period(&self) -> usize {
        let s = &self.0;
        if s.is_empty() {
            return 0;
        }
        let mut border = vec![0usize; s.len()];
        let mut k = 0;
        for q in 1..s.len() {
            while k > 0 && s[q] != s[k] {
                k = border[k - 1];
            }
            if s[q] == s[k] {
                k += 1;
            }
            border[q] = k;
        }
        s.len() - border[s.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

/// Hamming distance between equal-length strings.
pub fn hamming(a: &BitString, b: &BitString) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("lengths differ: {} vs {}", a.len(), b.len())));
    }
    Ok(hamming_slices(a.as_slice(), b.as_slice()))
}

pub(crate) fn hamming_slices(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// A pair of 1-based window starts `i < j` whose windows coincide (or nearly coincide).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Repeat {
    pub i: usize,
    pub j: usize,
}

impl Repeat {
    /// Whether the two windows of length `len` share positions.
    pub fn overlaps(&self, len: usize) -> bool {
        self.j - self.i < len
    }
}

const HASH_MOD: u64 = (1 << 61) - 1;
const HASH_BASE: u64 = 1_000_003;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(HASH_MOD)) as u64
}

/// The repeat of length `len` with the smallest second start `j`, ties broken by the
/// smallest first start `i`. `None` when every length-`len` window is unique.
///
/// Windows are indexed by a rolling hash; every hash hit is verified bit by bit.
pub fn find_repeat(x: &BitString, len: usize) -> Option<Repeat> {
    let s = x.as_slice();
    if len == 0 {
        return (!s.is_empty()).then_some(Repeat { i: 1, j: 2 });
    }
    if s.len() <= len {
        return None;
    }
    let top = (0..len - 1).fold(1u64, |acc, _| mul_mod(acc, HASH_BASE));
    let mut h = s[..len].iter().fold(0u64, |acc, &b| (mul_mod(acc, HASH_BASE) + u64::from(b) + 1) % HASH_MOD);
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    for j in 0..=s.len() - len {
        if j > 0 {
            let out = mul_mod(u64::from(s[j - 1]) + 1, top);
            h = (h + HASH_MOD - out) % HASH_MOD;
            h = (mul_mod(h, HASH_BASE) + u64::from(s[j + len - 1]) + 1) % HASH_MOD;
        }
        let bucket = seen.entry(h).or_default();
        if let Some(&i) = bucket.iter().find(|&&i| s[i..i + len] == s[j..j + len]) {
            return Some(Repeat { i: i + 1, j: j + 1 });
        }
        bucket.push(j);
    }
    None
}

/// True when no two windows of length `len` at distinct positions are equal.
pub fn is_substring_unique(x: &BitString, len: usize) -> bool {
    find_repeat(x, len).is_none()
}

/// True when every window of length `len` has at least `min_weight` ones.
/// Vacuously true for strings shorter than `len`.
pub fn is_heavy(x: &BitString, len: usize, min_weight: usize) -> bool {
    min_weight == 0 || find_light_window(x, len, min_weight - 1).is_none()
}

/// Smallest 1-based start of a length-`len` window with at most `max_weight` ones.
pub fn find_light_window(x: &BitString, len: usize, max_weight: usize) -> Option<usize> {
    let s = x.as_slice();
    if s.len() < len {
        return None;
    }
    let mut w = s[..len].iter().filter(|&&b| b == 1).count();
    for j in 0..=s.len() - len {
        if j > 0 {
            w = w + usize::from(s[j + len - 1]) - usize::from(s[j - 1]);
        }
        if w <= max_weight {
            return Some(j + 1);
        }
    }
    None
}

/// True when any two length-`len` windows at distinct positions differ in at least
/// `min_distance` places.
pub fn is_substring_distinct(x: &BitString, len: usize, min_distance: usize) -> bool {
    min_distance == 0 || find_near_repeat(x, len, min_distance - 1).is_none()
}

/// The pair of windows of length `len` at Hamming distance at most `max_distance`
/// with the smallest `j`, then the smallest `i`.
pub fn find_near_repeat(x: &BitString, len: usize, max_distance: usize) -> Option<Repeat> {
    if x.len() <= len || len == 0 {
        return (len == 0 && !x.is_empty()).then_some(Repeat { i: 1, j: 2 });
    }
    let packed = PackedBits::new(x.as_slice());
    let windows: Vec<Vec<u64>> = (0..=x.len() - len).map(|p| packed.window(p, len)).collect();
    for j in 1..windows.len() {
        for i in 0..j {
            if packed_distance_at_most(&windows[i], &windows[j], max_distance) {
                return Some(Repeat { i: i + 1, j: j + 1 });
            }
        }
    }
    None
}

pub(crate) fn packed_distance(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

fn packed_distance_at_most(a: &[u64], b: &[u64], bound: usize) -> bool {
    let mut d = 0;
    for (x, y) in a.iter().zip(b) {
        d += (x ^ y).count_ones() as usize;
        if d > bound {
            return false;
        }
    }
    true
}

/// MSB-first word packing used for fast window comparisons.
pub(crate) struct PackedBits {
    words: Vec<u64>,
}

impl PackedBits {
    pub(crate) fn new(bits: &[u8]) -> Self {
        let mut words = vec![0u64; bits.len() / 64 + 2];
        for (k, &b) in bits.iter().enumerate() {
            if b == 1 {
                words[k / 64] |= 1u64 << (63 - k % 64);
            }
        }
        Self { words }
    }

    fn get64(&self, pos: usize) -> u64 {
        let (w, off) = (pos / 64, pos % 64);
        if off == 0 {
            self.words[w]
        } else {
            (self.words[w] << off) | (self.words[w + 1] >> (64 - off))
        }
    }

    /// Window `[start, start + len)` packed into words, trailing bits masked off.
    pub(crate) fn window(&self, start: usize, len: usize) -> Vec<u64> {
        let mut out: Vec<u64> = (0..len.div_ceil(64)).map(|c| self.get64(start + 64 * c)).collect();
        let rem = len % 64;
        if rem != 0 {
            if let Some(last) = out.last_mut() {
                *last &= !0u64 << (64 - rem);
            }
        }
        out
    }
}
