//! Lossless compression of correlated data blocks from groups of nodes.
//!
//! Every node holds an n-bit reading protected by the same systematic linear
//! block code. A node is assigned a band of rows of the transposed
//! parity-check matrix; it drops the data bits its band covers and folds the
//! band's partial syndrome into the check positions instead. Any two payloads
//! whose bands are disjoint can be combined by a decoder: their padded XOR
//! looks like a channel error equal to the difference between the two
//! readings, and as long as that difference is within the code's correction
//! capability both readings come back exactly.
//!
//! The crate is split the way the data flows:
//!
//! - [`bits`]: bit vectors and matrices over GF(2)
//! - [`code`]: systematic code construction, syndrome decoding, Gray coding
//! - [`scheme`]: row-band assignment across nodes (disjoint and two-group
//!   flexible variants) plus membership-change bookkeeping
//! - [`codec`]: compression, padding, pairwise and voted joint decoding
//! - [`wire`]: the framed byte format for payloads
//! - [`metrics`]: space-saving formulas, saving surface, decoding-range probe
//! - [`netsim`]: correlated trace generation, end-to-end simulation, tamper
//!   injection, churn replay
//! - [`selftest`]: fast self-contained checks wired into the CLI
//!
//! No_std with `alloc`; nothing here does IO.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bits;
pub mod code;
pub mod codec;
pub mod error;
pub mod metrics;
pub mod netsim;
mod prng;
pub mod scheme;
pub mod selftest;
pub mod wire;

pub use bits::{BinaryMatrix, BitBlock};
pub use code::LinearBlockCode;
pub use error::Error;
pub use scheme::{DgScheme, FgScheme, NodeId, Scheme};

pub type Result<T> = core::result::Result<T, Error>;
