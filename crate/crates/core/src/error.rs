//! Crate-wide error type. Variants are split by what the caller can do about
//! them: parameter mistakes, construction failures, and decode-time outcomes.

use alloc::boxed::Box;
use core::fmt;

use crate::bits::BitBlock;
use crate::scheme::{Group, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two operands disagree on length/dimension.
    LengthMismatch { expected: usize, actual: usize },
    /// A row band reaches outside the matrix.
    BandOutOfRange { start: usize, count: usize, rows: usize },
    /// Catch-all for parameter misuse; the message names the parameter.
    Invalid(&'static str),
    /// Parity-check rows are linearly dependent.
    RankDeficient,
    /// Exhaustive syndrome-table construction refused for this size.
    TableTooLarge { n: usize, max: usize },
    /// Two distinct error patterns within the claimed capability share a
    /// syndrome, so the code cannot actually correct that many errors.
    CapabilityBelow { t: usize },
    /// The syndrome is outside the decodable set.
    UndecodableSyndrome { syndrome: BitBlock },
    /// More nodes than assignable row bands.
    CapacityExceeded { nodes: usize, max_nodes: usize },
    /// Removing the node would leave its group with no member.
    GroupEmptied { group: Group },
    DuplicateNode(NodeId),
    UnknownNode(NodeId),
    /// Wire frame does not start with the magic byte.
    BadMagic(u8),
    /// Wire frame carries a version this decoder does not speak.
    UnsupportedVersion(u8),
    /// Wire frame scheme tag is neither of the known schemes.
    BadSchemeTag(u8),
    /// Wire frame shorter than its header claims.
    Truncated { needed: usize, got: usize },
    /// A membership-change replay failed at the given event index.
    ChurnStep { index: usize, cause: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::BandOutOfRange { start, count, rows } => write!(
                f,
                "row band [{start}, {start}+{count}) outside matrix with {rows} rows"
            ),
            Error::Invalid(what) => write!(f, "invalid parameter: {what}"),
            Error::RankDeficient => write!(f, "parity-check matrix is rank deficient"),
            Error::TableTooLarge { n, max } => write!(
                f,
                "syndrome table for n={n} beyond the supported bound n<={max}"
            ),
            Error::CapabilityBelow { t } => write!(
                f,
                "code cannot correct {t} errors: colliding patterns within weight {t}"
            ),
            Error::UndecodableSyndrome { syndrome } => {
                write!(f, "syndrome {syndrome} has no decodable error pattern")
            }
            Error::CapacityExceeded { nodes, max_nodes } => {
                write!(f, "{nodes} nodes exceed the {max_nodes} assignable bands")
            }
            Error::GroupEmptied { group } => {
                write!(f, "node is the last member of group {group}")
            }
            Error::DuplicateNode(id) => write!(f, "duplicate node {id}"),
            Error::UnknownNode(id) => write!(f, "unknown node {id}"),
            Error::BadMagic(b) => write!(f, "bad magic byte {b:#04x}"),
            Error::UnsupportedVersion(v) => write!(f, "unsupported frame version {v}"),
            Error::BadSchemeTag(s) => write!(f, "unknown scheme tag {s}"),
            Error::Truncated { needed, got } => {
                write!(f, "frame truncated: need {needed} bytes, got {got}")
            }
            Error::ChurnStep { index, cause } => {
                write!(f, "membership event #{index} failed: {cause}")
            }
        }
    }
}

impl core::error::Error for Error {}
