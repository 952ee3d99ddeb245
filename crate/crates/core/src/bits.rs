//! Bit vectors and matrices over GF(2).
//!
//! Values are immutable once built; every operation returns a new value, so
//! blocks and matrices can be shared across threads freely. The textual form
//! of a block is its bits as '0'/'1' characters with position 1 leftmost,
//! which is also the order bits enter the wire format.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::Result;

/// Fixed-length bit vector. One byte per bit; fine at the block lengths this
/// crate works with, and it keeps band splicing and tallying simple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitBlock {
    bits: Vec<u8>,
}

impl BitBlock {
    pub fn zeros(len: usize) -> Self {
        BitBlock { bits: vec![0; len] }
    }

    /// Builds from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Invalid("bit values must be 0 or 1"));
        }
        Ok(BitBlock { bits: bits.to_vec() })
    }

    /// Binary expansion of `value`, most significant bit first.
    pub fn from_value(value: u64, width: usize) -> Result<Self> {
        if width > 64 {
            return Err(Error::Invalid("width exceeds 64 bits"));
        }
        if width < 64 && value >> width != 0 {
            return Err(Error::Invalid("value does not fit the given width"));
        }
        let bits = (0..width)
            .map(|i| ((value >> (width - 1 - i)) & 1) as u8)
            .collect();
        Ok(BitBlock { bits })
    }

    /// Reads the block back as an integer, position 1 most significant.
    pub fn to_value(&self) -> Result<u64> {
        if self.len() > 64 {
            return Err(Error::Invalid("block wider than 64 bits"));
        }
        Ok(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 0-based `index`. Panics when out of range.
    pub fn get(&self, index: usize) -> u8 {
        self.bits[index]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    /// Elementwise XOR; both blocks must have the same length.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(BitBlock {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Copy with the bit at 0-based `index` inverted. Panics out of range.
    pub fn flipped(&self, index: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[index] ^= 1;
        BitBlock { bits }
    }

    /// Copy of `len` bits starting at 0-based `start`. Panics out of range.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        BitBlock {
            bits: self.bits[start..start + len].to_vec(),
        }
    }

    /// Concatenation of the given blocks in order.
    pub fn join(parts: &[&BitBlock]) -> Self {
        let mut bits = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            bits.extend_from_slice(&p.bits);
        }
        BitBlock { bits }
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock({self})")
    }
}

impl FromStr for BitBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(Error::Invalid("bit strings may only contain 0 and 1")),
            }
        }
        Ok(BitBlock { bits })
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from rows of equal length with 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::Invalid("matrix entries must be 0 or 1"));
            }
            data.extend_from_slice(row);
        }
        Ok(BinaryMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at (row, col), 0-based. Panics out of range.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.data[row * self.cols + col]
    }

    fn row_slice(&self, row: usize) -> &[u8] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Row as a block. Panics out of range.
    pub fn row(&self, row: usize) -> BitBlock {
        assert!(row < self.rows, "row out of range");
        BitBlock::from_bits(self.row_slice(row)).expect("rows hold valid bits")
    }

    /// Contiguous band of `count` rows starting at 0-based `start`.
    /// `count == 0` yields an empty matrix with the same column count.
    pub fn row_band(&self, start: usize, count: usize) -> Result<Self> {
        if start + count > self.rows {
            return Err(Error::BandOutOfRange {
                start,
                count,
                rows: self.rows,
            });
        }
        Ok(BinaryMatrix {
            rows: count,
            cols: self.cols,
            data: self.data[start * self.cols..(start + count) * self.cols].to_vec(),
        })
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Row vector times matrix: XOR of the rows selected by the set bits of
    /// `v`. `v.len()` must equal the row count.
    pub fn left_mul(&self, v: &BitBlock) -> Result<BitBlock> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                actual: v.len(),
            });
        }
        let mut acc = vec![0u8; self.cols];
        for (r, bit) in v.iter().enumerate() {
            if bit == 1 {
                for (a, &b) in acc.iter_mut().zip(self.row_slice(r)) {
                    *a ^= b;
                }
            }
        }
        Ok(BitBlock { bits: acc })
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for inner in 0..self.cols {
                if self.data[r * self.cols + inner] == 1 {
                    for c in 0..other.cols {
                        out.data[r * other.cols + c] ^= other.data[inner * other.cols + c];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse via Gauss-Jordan; None when singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.data[r * n + col] == 1)?;
            if pivot != col {
                for c in 0..n {
                    work.data.swap(col * n + c, pivot * n + c);
                    inv.data.swap(col * n + c, pivot * n + c);
                }
            }
            for r in 0..n {
                if r != col && work.data[r * n + col] == 1 {
                    for c in 0..n {
                        work.data[r * n + c] ^= work.data[col * n + c];
                        inv.data[r * n + c] ^= inv.data[col * n + c];
                    }
                }
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for &b in self.row_slice(r) {
                write!(f, "{b}")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
