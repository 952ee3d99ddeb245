//! Byte-exact payload framing.
//!
//! Frame layout: magic 0xC5; one byte holding the format version in the high
//! nibble and the scheme tag in the low nibble (0 disjoint, 1 flexible);
//! node id as big-endian u16; u and a as one byte each (v is implied by the
//! code's data length); then the body bits (kept_prefix, kept_suffix, m-bar)
//! packed MSB-first and zero-padded to a byte boundary. Decoders reject
//! unknown versions, short or oversized frames, and nonzero padding.

use alloc::vec::Vec;

use crate::bits::BitBlock;
use crate::code::LinearBlockCode;
use crate::codec::CompressedPayload;
use crate::error::Error;
use crate::scheme::{NodeId, NodePartition, SchemeKind};
use crate::Result;

pub const MAGIC: u8 = 0xC5;
pub const VERSION: u8 = 1;

const HEADER_LEN: usize = 6;

/// A decoded frame: the payload plus the partition and scheme tag it was
/// framed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireFrame {
    pub payload: CompressedPayload,
    pub partition: NodePartition,
    pub kind: SchemeKind,
}

pub fn encode_payload(
    payload: &CompressedPayload,
    part: &NodePartition,
    kind: SchemeKind,
) -> Result<Vec<u8>> {
    if payload.node_id != part.node_id {
        return Err(Error::Invalid("payload and partition name different nodes"));
    }
    if payload.kept_prefix.len() != part.u || payload.kept_suffix.len() != part.v {
        return Err(Error::LengthMismatch {
            expected: part.u + part.v,
            actual: payload.kept_prefix.len() + payload.kept_suffix.len(),
        });
    }
    let (u, a) = (
        u8::try_from(part.u).map_err(|_| Error::Invalid("u exceeds the one-byte header field"))?,
        u8::try_from(part.a).map_err(|_| Error::Invalid("a exceeds the one-byte header field"))?,
    );
    let id = payload.node_id.0.to_be_bytes();
    let mut out = Vec::with_capacity(HEADER_LEN + payload.body_len().div_ceil(8));
    out.extend_from_slice(&[MAGIC, (VERSION << 4) | kind.tag(), id[0], id[1], u, a]);
    pack_msb_first(&payload.body(), &mut out);
    Ok(out)
}

pub fn decode_payload(bytes: &[u8], code: &LinearBlockCode) -> Result<WireFrame> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            needed: HEADER_LEN,
            got: bytes.len(),
        });
    }
    if bytes[0] != MAGIC {
        return Err(Error::BadMagic(bytes[0]));
    }
    let version = bytes[1] >> 4;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let kind = SchemeKind::from_tag(bytes[1] & 0x0F)?;
    let node_id = NodeId(u16::from_be_bytes([bytes[2], bytes[3]]));
    let u = bytes[4] as usize;
    let a = bytes[5] as usize;
    if u + a > code.k() {
        return Err(Error::Invalid("band reaches past the code's data rows"));
    }
    let v = code.k() - u - a;
    let body_bits = u + v + code.m();
    let body_bytes = body_bits.div_ceil(8);
    if bytes.len() < HEADER_LEN + body_bytes {
        return Err(Error::Truncated {
            needed: HEADER_LEN + body_bytes,
            got: bytes.len(),
        });
    }
    if bytes.len() > HEADER_LEN + body_bytes {
        return Err(Error::Invalid("trailing bytes after the payload body"));
    }
    let body = unpack_msb_first(&bytes[HEADER_LEN..], body_bits)?;
    let partition = NodePartition::new(node_id, u, a, v);
    let payload = CompressedPayload {
        node_id,
        kept_prefix: body.slice(0, u),
        kept_suffix: body.slice(u, v),
        m_bar: body.slice(u + v, code.m()),
    };
    Ok(WireFrame {
        payload,
        partition,
        kind,
    })
}

fn pack_msb_first(bits: &BitBlock, out: &mut Vec<u8>) {
    let mut acc = 0u8;
    let mut filled = 0u8;
    for bit in bits.iter() {
        acc = (acc << 1) | bit;
        filled += 1;
        if filled == 8 {
            out.push(acc);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(acc << (8 - filled));
    }
}

fn unpack_msb_first(bytes: &[u8], bit_len: usize) -> Result<BitBlock> {
    let mut bits = Vec::with_capacity(bit_len);
    for i in 0..bit_len {
        bits.push((bytes[i / 8] >> (7 - (i % 8))) & 1);
    }
    // every bit past bit_len is padding and must be zero
    for i in bit_len..bytes.len() * 8 {
        if (bytes[i / 8] >> (7 - (i % 8))) & 1 != 0 {
            return Err(Error::Invalid("nonzero padding bits in the final body byte"));
        }
    }
    BitBlock::from_bits(&bits)
}
