//! Shortened narrow-sense binary BCH codes in systematic form, decoded with
//! Berlekamp–Massey and a Chien search.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Primitive polynomials for GF(2^m), bit `k` holding the coefficient of `x^k`.
const PRIMITIVE: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

const MAX_DEGREE: usize = 16;

#[derive(Clone, Debug)]
struct Field {
    order: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Field {
    fn new(m: usize) -> Self {
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut v: u32 = 1;
        for (k, e) in exp.iter_mut().take(order).enumerate() {
            *e = v as u16;
            log[v as usize] = k as u16;
            v <<= 1;
            if v & (1 << m) != 0 {
                v ^= PRIMITIVE[m];
            }
        }
        for k in order..2 * order {
            exp[k] = exp[k - order];
        }
        Self { order, exp, log }
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    fn inv(&self, a: u16) -> u16 {
        self.exp[(self.order - self.log[a as usize] as usize) % self.order]
    }

    fn pow_alpha(&self, e: usize) -> u16 {
        self.exp[e % self.order]
    }
}

/// Union of the cyclotomic cosets of `1..=2τ` modulo `2^m − 1`, i.e. the roots of the
/// generator polynomial as exponents of `α`.
fn generator_roots(m: usize, correctable: usize) -> Vec<usize> {
    let order = (1usize << m) - 1;
    let mut seen = vec![false; order];
    let mut roots = Vec::new();
    for i in 1..=2 * correctable {
        let mut e = i % order;
        while !seen[e] {
            seen[e] = true;
            roots.push(e);
            e = (2 * e) % order;
        }
    }
    roots
}

/// Generator degree of the length-`2^m − 1` BCH code correcting `correctable` errors.
pub fn bch_redundancy(m: usize, correctable: usize) -> usize {
    generator_roots(m, correctable).len()
}

/// A systematic binary code correcting up to `correctable` bit errors in words of
/// length `message_len + redundancy`. Words are laid out as `(message, parity)`.
#[derive(Clone, Debug)]
pub struct DistanceCode {
    field: Field,
    correctable: usize,
    message_len: usize,
    /// Generator coefficients, index `k` for `x^k`, monic of degree `redundancy`.
    generator: Vec<u8>,
}

impl DistanceCode {
    /// Smallest field admitting `message_len` message bits.
    pub fn for_message(message_len: usize, correctable: usize) -> Result<Self> {
        (2..=MAX_DEGREE)
            .find(|&m| message_len + bch_redundancy(m, correctable) < 1 << m)
            .map(|m| Self::build(m, message_len, correctable))
            .ok_or_else(|| Error::Parameter(format!("no field up to 2^{MAX_DEGREE} fits {message_len} message bits")))
    }

    /// Smallest field whose code has words of exactly `length` bits.
    pub fn for_length(length: usize, correctable: usize) -> Result<Self> {
        let m = (2..=MAX_DEGREE)
            .find(|&m| length < 1 << m)
            .ok_or_else(|| Error::Parameter(format!("length {length} exceeds 2^{MAX_DEGREE} − 1")))?;
        let r = bch_redundancy(m, correctable);
        if r >= length {
            return Err(Error::Parameter(format!("length {length} leaves no room beside {r} parity bits")));
        }
        Ok(Self::build(m, length - r, correctable))
    }

    /// Parity length for words of `length` bits, without building the code.
    pub fn redundancy_for_length(length: usize, correctable: usize) -> Option<usize> {
        (2..=MAX_DEGREE).find(|&m| length < 1 << m).map(|m| bch_redundancy(m, correctable))
    }

    /// Parity length for `message_len` message bits, without building the code.
    pub fn redundancy_for_message(message_len: usize, correctable: usize) -> Option<usize> {
        (2..=MAX_DEGREE)
            .map(|m| bch_redundancy(m, correctable))
            .enumerate()
            .find(|&(k, r)| message_len + r < 1 << (k + 2))
            .map(|(_, r)| r)
    }

    fn build(m: usize, message_len: usize, correctable: usize) -> Self {
        let field = Field::new(m);
        let mut poly: Vec<u16> = vec![1];
        for root in generator_roots(m, correctable) {
            let a = field.pow_alpha(root);
            let mut next = vec![0u16; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] ^= c;
                next[k] ^= field.mul(c, a);
            }
            poly = next;
        }
        let generator = poly
            .into_iter()
            .map(|c| {
                debug_assert!(c <= 1, "generator must have binary coefficients");
                c as u8
            })
            .collect();
        Self { field, correctable, message_len, generator }
    }

    pub fn message_len(&self) -> usize {
        self.message_len
    }

    pub fn redundancy(&self) -> usize {
        self.generator.len() - 1
    }

    pub fn length(&self) -> usize {
        self.message_len + self.redundancy()
    }

    pub fn correctable(&self) -> usize {
        self.correctable
    }

    /// Designed minimum distance `2τ + 1`.
    pub fn designed_distance(&self) -> usize {
        2 * self.correctable + 1
    }

    /// Field degree `m`.
    pub fn field_degree(&self) -> usize {
        self.field.order.trailing_ones() as usize
    }

    /// Parity bits for `message`.
    pub fn parity(&self, message: &BitString) -> Result<BitString> {
        if message.len() != self.message_len {
            return Err(Error::Domain(format!("message has {} bits, expected {}", message.len(), self.message_len)));
        }
        let r = self.redundancy();
        let g = &self.generator;
        let mut rem = vec![0u8; r];
        for b in message.iter() {
            let feedback = b ^ rem[r - 1];
            for k in (1..r).rev() {
                rem[k] = rem[k - 1] ^ (feedback & g[k]);
            }
            rem[0] = feedback & g[0];
        }
        Ok(BitString::from_raw(rem.into_iter().rev().collect()))
    }

    /// `(message, parity)`.
    pub fn encode(&self, message: &BitString) -> Result<BitString> {
        Ok(message.concat(&self.parity(message)?))
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u16> {
        (1..=2 * self.correctable)
            .map(|i| {
                let a = self.field.pow_alpha(i);
                word.iter().fold(0u16, |acc, &b| self.field.mul(acc, a) ^ u16::from(b))
            })
            .collect()
    }

    /// Corrects up to `correctable` flipped bits in a `(message, parity)` word.
    pub fn decode(&self, word: &BitString) -> Result<BitString> {
        let len = self.length();
        if word.len() != len {
            return Err(Error::Domain(format!("word has {} bits, expected {len}", word.len())));
        }
        let synd = self.syndromes(word.as_slice());
        if synd.iter().all(|&s| s == 0) {
            return Ok(word.clone());
        }
        let locator = self.berlekamp_massey(&synd);
        let degree = locator.len() - 1;
        if degree > self.correctable {
            return Err(Error::Decode(format!("more than {} errors", self.correctable)));
        }
        let f = &self.field;
        let mut fixed = word.clone().into_vec();
        let mut found = 0;
        for power in 0..len {
            let x_inv = f.inv(f.pow_alpha(power));
            let mut acc = 0u16;
            let mut xp = 1u16;
            for &c in &locator {
                acc ^= f.mul(c, xp);
                xp = f.mul(xp, x_inv);
            }
            if acc == 0 {
                fixed[len - 1 - power] ^= 1;
                found += 1;
            }
        }
        if found != degree {
            return Err(Error::Decode("error locator does not split over the code positions".into()));
        }
        let fixed = BitString::from_raw(fixed);
        if self.syndromes(fixed.as_slice()).iter().any(|&s| s != 0) {
            return Err(Error::Decode("correction did not yield a codeword".into()));
        }
        Ok(fixed)
    }

    /// Error locator polynomial, lowest degree first, trimmed of leading zeros.
    fn berlekamp_massey(&self, synd: &[u16]) -> Vec<u16> {
        let f = &self.field;
        let mut c = vec![1u16];
        let mut b = vec![1u16];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut last = 1u16;
        for step in 0..synd.len() {
            let mut d = synd[step];
            for k in 1..=l.min(c.len() - 1) {
                d ^= f.mul(c[k], synd[step - k]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let scale = f.mul(d, f.inv(last));
            let prev = c.clone();
            if c.len() < b.len() + shift {
                c.resize(b.len() + shift, 0);
            }
            for (k, &bk) in b.iter().enumerate() {
                c[k + shift] ^= f.mul(scale, bk);
            }
            if 2 * l <= step {
                l = step + 1 - l;
                b = prev;
                last = d;
                shift = 1;
            } else {
                shift += 1;
            }
        }
        while c.len() > 1 && *c.last().expect("non-empty") == 0 {
            c.pop();
        }
        c
    }
}
