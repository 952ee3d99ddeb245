//! Systematic linear block codes over GF(2) with table-driven syndrome
//! decoding, plus the reflected Gray coding used to turn sensor values into
//! blocks whose pairwise distance tracks value proximity.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{BinaryMatrix, BitBlock};
use crate::error::Error;
use crate::Result;

/// Largest block length for which an exhaustive multi-error syndrome table is
/// built; beyond this the table would not be worth its memory.
pub const MAX_TABLE_N: usize = 24;
const MAX_TABLE_ENTRIES: u128 = 1 << 20;

/// Systematic code with generator `[I_k | P]` and parity check `[P^T | I_m]`.
/// Decoding is strictly bounded-distance: the syndrome table maps each
/// syndrome reachable by a weight <= t pattern to that pattern, and anything
/// else is reported undecodable rather than guessed at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBlockCode {
    n: usize,
    k: usize,
    m: usize,
    t: usize,
    g: BinaryMatrix,
    h: BinaryMatrix,
    ht: BinaryMatrix,
    table: BTreeMap<BitBlock, BitBlock>,
}

/// Outcome of a successful bounded-distance correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionResult {
    pub codeword: BitBlock,
    pub error_pattern: BitBlock,
    pub corrected_bits: usize,
}

impl LinearBlockCode {
    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Data positions (also the number of assignable check-matrix rows).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Check positions.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Guaranteed correction capability. A code of minimum distance d
    /// corrects floor((d-1)/2) errors; construction fails if the table finds
    /// the claimed capability is not actually met.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn generator(&self) -> &BinaryMatrix {
        &self.g
    }

    pub fn parity(&self) -> &BinaryMatrix {
        &self.h
    }

    /// Transposed parity check; its first k rows are the bands nodes own.
    pub fn parity_t(&self) -> &BinaryMatrix {
        &self.ht
    }

    pub fn syndrome_entries(&self) -> usize {
        self.table.len()
    }

    /// block * H^T.
    pub fn syndrome(&self, block: &BitBlock) -> Result<BitBlock> {
        self.ht.left_mul(block)
    }

    /// Syndrome contribution of `bits` occupying check-matrix rows
    /// [start, start + bits.len()).
    pub fn partial_syndrome(&self, start: usize, bits: &BitBlock) -> Result<BitBlock> {
        self.ht.row_band(start, bits.len())?.left_mul(bits)
    }

    /// Bounded-distance correction via the syndrome table.
    pub fn correct(&self, block: &BitBlock) -> Result<CorrectionResult> {
        let syndrome = self.syndrome(block)?;
        let pattern = self
            .table
            .get(&syndrome)
            .ok_or(Error::UndecodableSyndrome {
                syndrome: syndrome.clone(),
            })?;
        Ok(CorrectionResult {
            codeword: block.xor(pattern)?,
            corrected_bits: pattern.weight(),
            error_pattern: pattern.clone(),
        })
    }

    fn assemble(ht: BinaryMatrix, t: usize) -> Result<Self> {
        let n = ht.rows();
        let m = ht.cols();
        let k = n - m;
        let h = ht.transpose();
        let mut g_rows = Vec::with_capacity(k);
        for i in 0..k {
            let mut row = vec![0u8; n];
            row[i] = 1;
            for j in 0..m {
                row[k + j] = ht.get(i, j);
            }
            g_rows.push(row);
        }
        let g = BinaryMatrix::from_rows(&g_rows)?;
        debug_assert!(
            g.mul(&ht).map(|z| (0..k).all(|r| z.row(r).weight() == 0)) == Ok(true),
            "generator rows must satisfy every parity check"
        );
        let table = build_syndrome_table(&ht, t)?;
        Ok(LinearBlockCode {
            n,
            k,
            m,
            t,
            g,
            h,
            ht,
            table,
        })
    }
}

/// Canonical single-error-correcting Hamming code of the given order:
/// n = 2^order - 1, m = order. The columns of H are the nonzero order-bit
/// values with position 1 carrying weight 1; the weight >= 2 values in
/// ascending order form the data columns, the weight-1 values the identity.
pub fn build_hamming(order: usize) -> Result<LinearBlockCode> {
    if order < 2 {
        return Err(Error::Invalid("order must be at least 2"));
    }
    if order > 16 {
        return Err(Error::Invalid("order above 16 not supported"));
    }
    let m = order;
    let n = (1usize << order) - 1;
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(n);
    for value in 1..=n {
        if value.count_ones() >= 2 {
            rows.push(expand(value, m));
        }
    }
    for j in 0..m {
        rows.push(expand(1 << j, m));
    }
    LinearBlockCode::assemble(BinaryMatrix::from_rows(&rows)?, 1)
}

fn expand(value: usize, width: usize) -> Vec<u8> {
    (0..width).map(|j| ((value >> j) & 1) as u8).collect()
}

/// Builds the column-permuted systematic code equivalent to an arbitrary
/// full-rank parity-check matrix, with correction capability `t` enforced by
/// exhaustive table construction.
///
/// Pivot columns are chosen right to left, so a matrix already in
/// `[P^T | I_m]` form comes through unchanged.
pub fn build_from_parity(h_raw: &BinaryMatrix, t: usize) -> Result<LinearBlockCode> {
    let m = h_raw.rows();
    let n = h_raw.cols();
    if m == 0 || n == 0 {
        return Err(Error::Invalid("parity-check matrix must be nonempty"));
    }
    if m > n {
        return Err(Error::RankDeficient);
    }
    if t >= 2 && n > MAX_TABLE_N {
        return Err(Error::TableTooLarge { n, max: MAX_TABLE_N });
    }

    // Greedy rank-extending pivot scan, right to left.
    let mut basis: Vec<Vec<u8>> = Vec::new(); // reduced, tagged by leading index
    let mut pivots: Vec<usize> = Vec::new();
    for col in (0..n).rev() {
        let mut v: Vec<u8> = (0..m).map(|r| h_raw.get(r, col)).collect();
        for b in &basis {
            let lead = b.iter().position(|&x| x == 1).expect("basis rows nonzero");
            if v[lead] == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if v.iter().any(|&x| x == 1) {
            basis.push(v);
            pivots.push(col);
            if pivots.len() == m {
                break;
            }
        }
    }
    if pivots.len() < m {
        return Err(Error::RankDeficient);
    }
    pivots.sort_unstable();
    let mut order: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    order.extend(&pivots);

    let permuted = BinaryMatrix::from_rows(
        &(0..m)
            .map(|r| order.iter().map(|&c| h_raw.get(r, c)).collect())
            .collect::<Vec<_>>(),
    )?;
    let b = BinaryMatrix::from_rows(
        &(0..m)
            .map(|r| pivots.iter().map(|&c| h_raw.get(r, c)).collect())
            .collect::<Vec<_>>(),
    )?;
    let u = b.inverse().ok_or(Error::RankDeficient)?;
    let h_sys = u.mul(&permuted)?;
    LinearBlockCode::assemble(h_sys.transpose(), t)
}

/// Maps each syndrome reachable by a weight <= t pattern to that pattern,
/// minimum weight first. Any two distinct patterns within weight t sharing a
/// syndrome XOR to a codeword of weight <= 2t, i.e. the code's true
/// capability is below t, so construction fails rather than mis-decode later.
fn build_syndrome_table(
    ht: &BinaryMatrix,
    t: usize,
) -> Result<BTreeMap<BitBlock, BitBlock>> {
    let n = ht.rows();
    let m = ht.cols();
    let t = t.min(n);
    let mut entries: u128 = 0;
    for w in 0..=t {
        entries += binomial(n, w);
        if entries > MAX_TABLE_ENTRIES {
            return Err(Error::TableTooLarge { n, max: MAX_TABLE_N });
        }
    }

    let mut table = BTreeMap::new();
    table.insert(BitBlock::zeros(m), BitBlock::zeros(n));
    for w in 1..=t {
        let mut positions: Vec<usize> = (0..w).collect();
        loop {
            let mut s = vec![0u8; m];
            let mut e = vec![0u8; n];
            for &p in &positions {
                e[p] = 1;
                for j in 0..m {
                    s[j] ^= ht.get(p, j);
                }
            }
            if table.insert(BitBlock::from_bits(&s)?, BitBlock::from_bits(&e)?).is_some() {
                return Err(Error::CapabilityBelow { t });
            }
            if !next_combination(&mut positions, n) {
                break;
            }
        }
    }
    Ok(table)
}

/// Advances `pos` to the next w-combination of 0..n in lexicographic order.
fn next_combination(pos: &mut [usize], n: usize) -> bool {
    let w = pos.len();
    for i in (0..w).rev() {
        if pos[i] != i + n - w {
            pos[i] += 1;
            for j in i + 1..w {
                pos[j] = pos[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Reflected Gray code of `value`, rendered MSB-first at the given width.
/// Consecutive values map to blocks exactly one bit apart, and values d apart
/// map to blocks at most d bits apart.
pub fn gray_encode(value: u64, width: usize) -> Result<BitBlock> {
    BitBlock::from_value(value ^ (value >> 1), width)
}

/// Inverse of [`gray_encode`] for blocks up to 64 bits.
pub fn gray_decode(block: &BitBlock) -> Result<u64> {
    let mut v = block.to_value()?;
    let mut shift = 1;
    while shift < 64 {
        v ^= v >> shift;
        shift <<= 1;
    }
    Ok(v)
}
