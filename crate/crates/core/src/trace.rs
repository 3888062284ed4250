use crate::bits::BitString;

/// What triggered an encoder round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundKind {
    /// A repeated (or nearly repeated) window.
    Repeat,
    /// A window with too few ones.
    LightWindow,
}

/// One replacement performed by an iterative encoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingRound {
    pub kind: RoundKind,
    /// 1-based start of the earlier window (equal to `j` for light windows).
    pub i: usize,
    /// 1-based start of the replaced window.
    pub j: usize,
    /// Record written for this round, as it stood before any end-of-round fixup.
    pub record: BitString,
    /// Whether the end-of-round fixup fired.
    pub fixup: bool,
    /// Length after the round.
    pub length_after: usize,
}

/// Rounds in the order they were applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodingTrace {
    pub rounds: Vec<EncodingRound>,
}
