//! Reconstruction codes for binary strings observed through their substring
//! spectra.
//!
//! Four regimes are covered:
//!
//! * [`exact`]: full multispectrum, codewords `(L−1)`-substring unique, two bits of
//!   redundancy.
//! * [`primal`]: full multispectrum at shorter read length `log n + O(log log n)`,
//!   inputs drawn from a run-length-limited set.
//! * [`gap`]: up to `G` consecutive read positions lost, `3G + 3` bits of redundancy.
//! * [`noisy`]: lost positions plus up to `t` flips per read, corrected with a binary
//!   BCH code.
//!
//! [`bounds`] holds the counting results used to size the codes. Positions in the
//! public API are 1-based.

pub mod bits;
pub mod bounds;
pub mod channel;
pub mod error;
pub mod exact;
pub mod gap;
pub mod labeling;
pub mod noisy;
pub mod primal;
pub mod spectrum;
mod trace;

pub use bits::{ceil_log2, hamming, BitString, Repeat};
pub use error::{Error, Result};
pub use spectrum::{multispectrum, set_spectrum, Spectrum};
pub use trace::{EncodingRound, EncodingTrace, RoundKind};
