//! Per-node compression and joint recovery.
//!
//! A node holding an n-bit block drops the data bits its band owns and folds
//! their check contribution into the tail, so the wire carries n - a bits.
//! Any two nodes with non-overlapping bands decode each other: zero-padding
//! both payloads preserves each block's check value, so the XOR of the pads
//! has the same check value as the XOR of the originals, and when the blocks
//! differ in at most t positions the code pins that difference down exactly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::BitBlock;
use crate::code::LinearBlockCode;
use crate::error::Error;
use crate::scheme::{DgScheme, FgScheme, NodeId, NodePartition, Scheme};
use crate::Result;

/// What one node sends: the data bits outside its band plus the folded tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedPayload {
    pub node_id: NodeId,
    pub kept_prefix: BitBlock,
    pub kept_suffix: BitBlock,
    pub m_bar: BitBlock,
}

impl CompressedPayload {
    /// Wire body: prefix, suffix, folded tail, in that order.
    pub fn body(&self) -> BitBlock {
        BitBlock::join(&[&self.kept_prefix, &self.kept_suffix, &self.m_bar])
    }

    pub fn body_len(&self) -> usize {
        self.kept_prefix.len() + self.kept_suffix.len() + self.m_bar.len()
    }
}

/// How a node picks partners during joint recovery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeMode {
    /// Lowest-index eligible partner only.
    Single,
    /// Every eligible partner, then a majority vote over the results.
    Vote,
}

/// Drops the band bits and folds their check contribution into the tail.
pub fn compress(
    code: &LinearBlockCode,
    part: &NodePartition,
    block: &BitBlock,
) -> Result<CompressedPayload> {
    part.fits(code)?;
    if block.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: block.len(),
        });
    }
    let kept_prefix = block.slice(0, part.u);
    let band = block.slice(part.u, part.a);
    let kept_suffix = block.slice(part.u + part.a, part.v);
    let tail = block.slice(code.k(), code.m());
    let m_bar = tail.xor(&code.partial_syndrome(part.u, &band)?)?;
    Ok(CompressedPayload {
        node_id: part.node_id,
        kept_prefix,
        kept_suffix,
        m_bar,
    })
}

/// Re-expands a payload to block length with zeros in the band. The result
/// has the same check value as the original block.
pub fn zero_pad(
    payload: &CompressedPayload,
    part: &NodePartition,
    code: &LinearBlockCode,
) -> Result<BitBlock> {
    part.fits(code)?;
    if payload.kept_prefix.len() != part.u
        || payload.kept_suffix.len() != part.v
        || payload.m_bar.len() != code.m()
    {
        return Err(Error::LengthMismatch {
            expected: code.n() - part.a,
            actual: payload.body_len(),
        });
    }
    let band_zeros = BitBlock::zeros(part.a);
    Ok(BitBlock::join(&[
        &payload.kept_prefix,
        &band_zeros,
        &payload.kept_suffix,
        &payload.m_bar,
    ]))
}

/// Every intermediate of a two-node joint decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTrace {
    pub padded: (BitBlock, BitBlock),
    pub combined: BitBlock,
    pub syndrome: BitBlock,
    pub error_pattern: BitBlock,
    pub codeword: BitBlock,
    pub decoded: (BitBlock, BitBlock),
}

/// Joint decode of two payloads with non-overlapping bands, keeping all
/// intermediates. Fails with [`Error::UndecodableSyndrome`] when the blocks
/// differ in more than t positions.
pub fn pair_decode_trace(
    code: &LinearBlockCode,
    px: &CompressedPayload,
    part_x: &NodePartition,
    py: &CompressedPayload,
    part_y: &NodePartition,
) -> Result<PairTrace> {
    if part_x.overlaps(part_y) {
        return Err(Error::Invalid("paired nodes must own disjoint bands"));
    }
    let zx = zero_pad(px, part_x, code)?;
    let zy = zero_pad(py, part_y, code)?;
    let combined = zx.xor(&zy)?;
    let syndrome = code.syndrome(&combined)?;
    let correction = code.correct(&combined)?;

    // The correction's codeword carries each block's own band bits: inside
    // band_x the pad XOR equals y's data, and adding the error x^y flips it
    // back to x's data (symmetrically for y).
    let dx = recover_from_codeword(code, px, part_x, &correction.codeword)?;
    let dy = recover_from_codeword(code, py, part_y, &correction.codeword)?;
    Ok(PairTrace {
        padded: (zx, zy),
        combined,
        syndrome,
        error_pattern: correction.error_pattern,
        codeword: correction.codeword,
        decoded: (dx, dy),
    })
}

/// Joint decode of two payloads; just the recovered blocks.
pub fn pair_decode(
    code: &LinearBlockCode,
    px: &CompressedPayload,
    part_x: &NodePartition,
    py: &CompressedPayload,
    part_y: &NodePartition,
) -> Result<(BitBlock, BitBlock)> {
    pair_decode_trace(code, px, part_x, py, part_y).map(|t| t.decoded)
}

fn recover_from_codeword(
    code: &LinearBlockCode,
    payload: &CompressedPayload,
    part: &NodePartition,
    codeword: &BitBlock,
) -> Result<BitBlock> {
    let band = codeword.slice(part.u, part.a);
    let tail = payload.m_bar.xor(&code.partial_syndrome(part.u, &band)?)?;
    Ok(BitBlock::join(&[
        &payload.kept_prefix,
        &band,
        &payload.kept_suffix,
        &tail,
    ]))
}

/// One node's outcome in a joint decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeDecode {
    pub node_id: NodeId,
    /// None when no partner pair decoded.
    pub recovered: Option<BitBlock>,
    /// Per-partner results, ascending partner id; undecodable pairs excluded.
    pub tentative: Vec<(NodeId, BitBlock)>,
    pub tally: BTreeMap<BitBlock, usize>,
    pub unanimous: bool,
    /// Set when partners disagreed about this node's block.
    pub integrity_alert: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeReport {
    /// Ascending node id, one entry per payload supplied.
    pub nodes: Vec<NodeDecode>,
}

impl DecodeReport {
    pub fn node(&self, id: NodeId) -> Option<&NodeDecode> {
        self.nodes.iter().find(|n| n.node_id == id)
    }

    pub fn all_recovered(&self) -> bool {
        self.nodes.iter().all(|n| n.recovered.is_some())
    }

    pub fn alert_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.integrity_alert).count()
    }
}

/// Joint recovery under a disjoint scheme: every other payload is an
/// eligible partner.
pub fn dg_decode(
    scheme: &DgScheme,
    payloads: &[CompressedPayload],
    mode: DecodeMode,
) -> Result<DecodeReport> {
    let entries = index_payloads(payloads, |id| scheme.partition_of(id).copied())?;
    decode_all(scheme.code(), &entries, mode, |_, _| true)
}

/// Joint recovery under a flexible scheme: partners come from the opposite
/// group, whose band is complementary by construction.
pub fn fg_decode(
    scheme: &FgScheme,
    payloads: &[CompressedPayload],
    mode: DecodeMode,
) -> Result<DecodeReport> {
    let entries = index_payloads(payloads, |id| scheme.partition_of(id))?;
    decode_all(scheme.code(), &entries, mode, |a, b| {
        scheme.group_of(a) != scheme.group_of(b)
    })
}

/// Dispatches on the scheme discipline.
pub fn joint_decode(
    scheme: &Scheme,
    payloads: &[CompressedPayload],
    mode: DecodeMode,
) -> Result<DecodeReport> {
    match scheme {
        Scheme::Dg(s) => dg_decode(s, payloads, mode),
        Scheme::Fg(s) => fg_decode(s, payloads, mode),
    }
}

struct Entry<'a> {
    payload: &'a CompressedPayload,
    part: NodePartition,
}

fn index_payloads<'a>(
    payloads: &'a [CompressedPayload],
    part_of: impl Fn(NodeId) -> Option<NodePartition>,
) -> Result<Vec<Entry<'a>>> {
    let mut entries: Vec<Entry<'a>> = Vec::with_capacity(payloads.len());
    for payload in payloads {
        let id = payload.node_id;
        if entries.iter().any(|e| e.payload.node_id == id) {
            return Err(Error::DuplicateNode(id));
        }
        let part = part_of(id).ok_or(Error::UnknownNode(id))?;
        entries.push(Entry { payload, part });
    }
    entries.sort_by_key(|e| e.payload.node_id);
    Ok(entries)
}

fn decode_all(
    code: &LinearBlockCode,
    entries: &[Entry<'_>],
    mode: DecodeMode,
    eligible: impl Fn(NodeId, NodeId) -> bool,
) -> Result<DecodeReport> {
    let mut nodes = Vec::with_capacity(entries.len());
    for subject in entries {
        let mut tentative: Vec<(NodeId, BitBlock)> = Vec::new();
        for partner in entries {
            let pid = partner.payload.node_id;
            if pid == subject.payload.node_id || !eligible(subject.payload.node_id, pid) {
                continue;
            }
            match pair_decode_trace(code, subject.payload, &subject.part, partner.payload, &partner.part)
            {
                Ok(trace) => tentative.push((pid, trace.decoded.0)),
                Err(Error::UndecodableSyndrome { .. }) => continue,
                Err(e) => return Err(e),
            }
            if mode == DecodeMode::Single {
                break;
            }
        }
        nodes.push(settle(subject.payload.node_id, tentative));
    }
    Ok(DecodeReport { nodes })
}

fn settle(node_id: NodeId, tentative: Vec<(NodeId, BitBlock)>) -> NodeDecode {
    let mut tally: BTreeMap<BitBlock, usize> = BTreeMap::new();
    for (_, block) in &tentative {
        *tally.entry(block.clone()).or_insert(0) += 1;
    }
    let total = tentative.len();
    let unanimous = tally.len() == 1;
    let integrity_alert = tally.len() > 1;
    // Strict majority wins; on a tie for the top count the smallest value is
    // reported and the alert already flags the disagreement.
    let recovered = tally
        .iter()
        .find(|&(_, &count)| 2 * count > total)
        .or_else(|| {
            let top = tally.values().copied().max()?;
            tally.iter().find(|&(_, &count)| count == top)
        })
        .map(|(block, _)| block.clone());
    NodeDecode {
        node_id,
        recovered,
        tentative,
        tally,
        unanimous,
        integrity_alert,
    }
}
