//! Multisets of fixed-length reads and their plain-text serialization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A multiset of length-`read_len` reads, kept in sorted order so equal multisets
/// compare equal and index `k` is a stable handle for per-read side data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    read_len: usize,
    reads: Vec<BitString>,
}

impl Spectrum {
    pub fn from_reads(read_len: usize, mut reads: Vec<BitString>) -> Result<Self> {
        if let Some(bad) = reads.iter().find(|r| r.len() != read_len) {
            return Err(Error::Domain(format!("read {bad} does not have length {read_len}")));
        }
        reads.sort();
        Ok(Self { read_len, reads })
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    /// Total number of reads, counting multiplicity.
    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// Reads in canonical (sorted) order, repeated by multiplicity.
    pub fn reads(&self) -> &[BitString] {
        &self.reads
    }

    /// Distinct reads with multiplicities.
    pub fn counts(&self) -> BTreeMap<&BitString, usize> {
        let mut out = BTreeMap::new();
        for r in &self.reads {
            *out.entry(r).or_insert(0) += 1;
        }
        out
    }

    /// True when every read occurs in `other` at least as often as here.
    pub fn is_submultiset_of(&self, other: &Spectrum) -> bool {
        let theirs = other.counts();
        self.read_len == other.read_len
            && self.counts().iter().all(|(r, c)| theirs.get(r).is_some_and(|t| t >= c))
    }

    /// `L=<int> count=<int>` header, then one read per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("L={} count={}\n", self.read_len, self.reads.len());
        for r in &self.reads {
            let _ = writeln!(out, "{r}");
        }
        out
    }

    /// Parses one block produced by [`Spectrum::to_text`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let block = Self::parse_block(&mut lines)?
            .ok_or_else(|| Error::Parse("empty spectrum text".into()))?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after spectrum block".into()));
        }
        Ok(block)
    }

    /// Parses any number of concatenated blocks.
    pub fn parse_many(text: &str) -> Result<Vec<Self>> {
        let mut lines = text.lines();
        let mut out = Vec::new();
        while let Some(block) = Self::parse_block(&mut lines)? {
            out.push(block);
        }
        Ok(out)
    }

    fn parse_block<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Option<Self>> {
        let header = loop {
            match lines.next() {
                None => return Ok(None),
                Some(l) if l.trim().is_empty() => continue,
                Some(l) => break l.trim(),
            }
        };
        let (read_len, count) = parse_header(header)?;
        let reads = (0..count)
            .map(|k| {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Parse(format!("expected {count} reads, found {k}")))?;
                line.trim().parse::<BitString>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_reads(read_len, reads)
            .map(Some)
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let mut read_len = None;
    let mut count = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("malformed header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::Parse(format!("non-integer header value {value:?}")))?;
        match key {
            "L" => read_len = Some(value),
            "count" => count = Some(value),
            other => return Err(Error::Parse(format!("unknown header key {other:?}"))),
        }
    }
    match (read_len, count) {
        (Some(l), Some(c)) => Ok((l, c)),
        _ => Err(Error::Parse(format!("header {header:?} needs L= and count="))),
    }
}

/// All `ℓ − L + 1` length-`L` substrings of `x`, with multiplicity.
pub fn multispectrum(x: &BitString, read_len: usize) -> Result<Spectrum> {
    if read_len == 0 || read_len > x.len() {
        return Err(Error::Domain(format!(
            "read length {read_len} must lie in 1..={}",
            x.len()
        )));
    }
    let reads = (0..=x.len() - read_len)
        .map(|p| BitString::from_raw(x.window(p, read_len).to_vec()))
        .collect();
    Spectrum::from_reads(read_len, reads)
}

/// The distinct length-`L` substrings of `x`.
pub fn set_spectrum(x: &BitString, read_len: usize) -> Result<BTreeSet<BitString>> {
    Ok(multispectrum(x, read_len)?.reads.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn multispectrum_counts_repeats() {
        let m = multispectrum(&bs("0000"), 2).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.counts()[&bs("00")], 3);
        assert_eq!(set_spectrum(&bs("0000"), 2).unwrap().len(), 1);
    }

    #[test]
    fn rejects_read_length_out_of_range() {
        assert!(matches!(multispectrum(&bs("01"), 3), Err(Error::Domain(_))));
        assert!(matches!(multispectrum(&bs("01"), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn text_round_trip_and_malformed_input() {
        let m = multispectrum(&bs("0110100"), 3).unwrap();
        assert_eq!(Spectrum::parse(&m.to_text()).unwrap(), m);
        let both = format!("{}{}", m.to_text(), m.to_text());
        assert_eq!(Spectrum::parse_many(&both).unwrap(), vec![m.clone(), m]);
        assert!(matches!(Spectrum::parse("L=3 count=2\n011\n"), Err(Error::Parse(_))));
        assert!(matches!(Spectrum::parse("L=3 count=1\n01\n"), Err(Error::Parse(_))));
        assert!(matches!(Spectrum::parse("L=3 n=1\n011\n"), Err(Error::Parse(_))));
        assert!(matches!(Spectrum::parse("L=3 count=1\n0a1\n"), Err(Error::Parse(_))));
    }
}
