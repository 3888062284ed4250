#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use respectra::BitString;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit literal")
}

pub fn random_bits(rng: &mut impl Rng, len: usize) -> BitString {
    BitString::from_bools((0..len).map(|_| rng.gen_bool(0.5)))
}

/// Bits drawn with `P(1) = p_one`.
pub fn biased_bits(rng: &mut impl Rng, len: usize, p_one: f64) -> BitString {
    BitString::from_bools((0..len).map(|_| rng.gen_bool(p_one)))
}

/// Copies `copies` random windows of length `window` onto later positions.
pub fn plant_repeats(rng: &mut impl Rng, x: &BitString, window: usize, copies: usize) -> BitString {
    let mut v = x.as_slice().to_vec();
    if v.len() <= window + 1 {
        return x.clone();
    }
    for _ in 0..copies {
        let i = rng.gen_range(0..v.len() - window);
        let j = rng.gen_range(i + 1..=v.len() - window);
        for t in 0..window {
            v[j + t] = v[i + t];
        }
    }
    BitString::new(v).expect("binary")
}

/// Every string of length `len`, as the binary expansions of `0..2^len`.
pub fn all_strings(len: usize) -> impl Iterator<Item = BitString> {
    (0u64..1 << len).map(move |v| BitString::from_uint(v, len).expect("fits"))
}

/// First `(i, j)` in `(j, i)` order with equal windows, by direct comparison.
pub fn quadratic_repeat(x: &BitString, len: usize) -> Option<(usize, usize)> {
    let s = x.as_slice();
    if s.len() < len + 1 {
        return None;
    }
    let last = s.len() - len;
    (1..=last).find_map(|j| (0..j).find(|&i| s[i..i + len] == s[j..j + len]).map(|i| (i + 1, j + 1)))
}

/// Smallest shift under which the string agrees with itself.
pub fn brute_period(x: &BitString) -> usize {
    let s = x.as_slice();
    (1..=s.len()).find(|&p| (0..s.len() - p).all(|i| s[i] == s[i + p])).unwrap_or(s.len())
}
