use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};

/// Fixed-size list of the 1-based positions where two equal-length windows differ.
/// Each slot holds a position in `⌈log₂(len + 1)⌉` bits; 0 marks an empty slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffRecord {
    window_len: usize,
    slots: usize,
}

impl DiffRecord {
    pub fn new(window_len: usize, slots: usize) -> Self {
        Self { window_len, slots }
    }

    pub fn slot_width(&self) -> usize {
        ceil_log2(self.window_len + 1)
    }

    pub fn encoded_len(&self) -> usize {
        self.slots * self.slot_width()
    }

    /// Record of the positions where `from` and `to` differ.
    pub fn encode(&self, from: &[u8], to: &[u8]) -> Result<BitString> {
        if from.len() != self.window_len || to.len() != self.window_len {
            return Err(Error::Domain(format!("windows must have length {}", self.window_len)));
        }
        let positions: Vec<usize> = (0..self.window_len).filter(|&k| from[k] != to[k]).map(|k| k + 1).collect();
        if positions.len() > self.slots {
            return Err(Error::Domain(format!("{} differences exceed {} slots", positions.len(), self.slots)));
        }
        let mut out = BitString::default();
        for s in 0..self.slots {
            let value = positions.get(s).copied().unwrap_or(0);
            out.extend_from(&BitString::from_uint(value as u64, self.slot_width())?);
        }
        Ok(out)
    }

    /// 1-based differing positions listed in `record`.
    pub fn positions(&self, record: &[u8]) -> Result<Vec<usize>> {
        if record.len() != self.encoded_len() {
            return Err(Error::Decode(format!("difference record has {} bits", record.len())));
        }
        let w = self.slot_width();
        let mut out = Vec::new();
        for chunk in record.chunks(w.max(1)).take(self.slots) {
            let value = BitString::from_raw(chunk.to_vec()).to_uint()? as usize;
            if value > self.window_len {
                return Err(Error::Decode(format!("difference position {value} outside window")));
            }
            if value != 0 {
                out.push(value);
            }
        }
        Ok(out)
    }

    /// Applies `record` to `from`.
    pub fn apply(&self, from: &[u8], record: &[u8]) -> Result<BitString> {
        let mut out = from.to_vec();
        for p in self.positions(record)? {
            out[p - 1] ^= 1;
        }
        Ok(BitString::from_raw(out))
    }
}
