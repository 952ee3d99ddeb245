//! Shared test support.
//!
//! `reference` is a deliberately naive, self-contained model of the whole
//! compression pipeline, written before the production codec and kept free of
//! crate types. Tests compare crate output against it and against the frozen
//! values below, which were derived by hand from the reference model.

#![allow(dead_code)]

/// Hand-derived transposed parity-check rows of the canonical Hamming(7,4)
/// code. Row p (1-based) is the p-th column of H read as bits of an integer
/// with position 1 carrying weight 1; data rows are the weight>=2 column
/// values 3,5,6,7 in ascending order, check rows are the identity.
pub const HT_74: [[u8; 3]; 7] = [
    [1, 1, 0], // 3
    [1, 0, 1], // 5
    [0, 1, 1], // 6
    [1, 1, 1], // 7
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
];

/// Frozen worked pair: two messages one sensing step apart, compressed under
/// a two-node disjoint split (0,2,2)/(2,2,0) of the canonical Hamming(7,4).
pub const FIX_X: &str = "1011010";
pub const FIX_Y: &str = "1011110";
pub const FIX_X_PART: (usize, usize, usize) = (0, 2, 2);
pub const FIX_Y_PART: (usize, usize, usize) = (2, 2, 0);
pub const FIX_X_KEPT: &str = "11";
pub const FIX_X_MBAR: &str = "100";
pub const FIX_Y_KEPT: &str = "10";
pub const FIX_Y_MBAR: &str = "010";
pub const FIX_X_PADDED: &str = "0011100";
pub const FIX_Y_PADDED: &str = "1000010";
pub const FIX_COMBINED: &str = "1011110";
pub const FIX_SYNDROME: &str = "100";
pub const FIX_ERROR_POS: usize = 5; // 1-based
pub const FIX_CODEWORD: &str = "1011010";

pub fn bits(s: &str) -> Vec<u8> {
    s.chars()
        .map(|c| match c {
            '0' => 0,
            '1' => 1,
            _ => panic!("bad bit char {c:?}"),
        })
        .collect()
}

pub fn bit_string(b: &[u8]) -> String {
    b.iter().map(|&x| if x == 1 { '1' } else { '0' }).collect()
}

/// Naive end-to-end model of compression and joint decoding. Indexing is
/// 0-based here; the frozen constants above use 1-based positions in prose.
pub mod reference {
    use super::HT_74;

    pub fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
        assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }

    pub fn weight(a: &[u8]) -> usize {
        a.iter().filter(|&&x| x == 1).count()
    }

    /// All 16 codewords of the canonical Hamming(7,4), via G = [I4 | P] with
    /// P read off the first four rows of `HT_74`.
    pub fn codewords_74() -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for d in 0u32..16 {
            let data: Vec<u8> = (0..4).map(|i| ((d >> (3 - i)) & 1) as u8).collect();
            let mut check = vec![0u8; 3];
            for (i, &bit) in data.iter().enumerate() {
                if bit == 1 {
                    for j in 0..3 {
                        check[j] ^= HT_74[i][j];
                    }
                }
            }
            let mut cw = data.clone();
            cw.extend(check);
            out.push(cw);
        }
        out
    }

    pub fn syndrome_74(block: &[u8]) -> Vec<u8> {
        assert_eq!(block.len(), 7);
        let mut s = vec![0u8; 3];
        for (p, &bit) in block.iter().enumerate() {
            if bit == 1 {
                for j in 0..3 {
                    s[j] ^= HT_74[p][j];
                }
            }
        }
        s
    }

    /// Bounded-distance correction by scanning every codeword; returns the
    /// unique codeword within Hamming distance 1, with the error pattern.
    pub fn correct_74(block: &[u8]) -> Option<(Vec<u8>, Vec<u8>)> {
        let mut hit = None;
        for cw in codewords_74() {
            let e = xor(block, &cw);
            if weight(&e) <= 1 {
                assert!(hit.is_none(), "two codewords within distance 1");
                hit = Some((cw, e));
            }
        }
        hit
    }

    pub struct RefPayload {
        pub prefix: Vec<u8>,
        pub suffix: Vec<u8>,
        pub m_bar: Vec<u8>,
    }

    /// Drop the owned band [u, u+a) and fold its partial syndrome into the
    /// final check bits.
    pub fn compress_74(msg: &[u8], u: usize, a: usize) -> RefPayload {
        assert_eq!(msg.len(), 7);
        let k = 4;
        let mut m_bar = msg[k..].to_vec();
        for p in u..u + a {
            if msg[p] == 1 {
                for j in 0..3 {
                    m_bar[j] ^= HT_74[p][j];
                }
            }
        }
        RefPayload {
            prefix: msg[..u].to_vec(),
            suffix: msg[u + a..k].to_vec(),
            m_bar,
        }
    }

    pub fn zero_pad_74(p: &RefPayload, u: usize, a: usize) -> Vec<u8> {
        let mut out = p.prefix.clone();
        out.extend(core::iter::repeat(0).take(a));
        out.extend(&p.suffix);
        out.extend(&p.m_bar);
        assert_eq!(out.len(), 7);
        let _ = u;
        out
    }

    /// Joint decode of one payload pair with disjoint bands; returns both
    /// recovered messages or None when correction fails.
    pub fn pair_decode_74(
        pi: &RefPayload,
        (ui, ai): (usize, usize),
        pj: &RefPayload,
        (uj, aj): (usize, usize),
    ) -> Option<(Vec<u8>, Vec<u8>)> {
        let c = xor(&zero_pad_74(pi, ui, ai), &zero_pad_74(pj, uj, aj));
        let (cw, _e) = correct_74(&c)?;
        Some((rebuild(pi, ui, ai, &cw), rebuild(pj, uj, aj, &cw)))
    }

    fn rebuild(p: &RefPayload, u: usize, a: usize, cw: &[u8]) -> Vec<u8> {
        let band: Vec<u8> = cw[u..u + a].to_vec();
        let mut tail = p.m_bar.clone();
        for (off, &bit) in band.iter().enumerate() {
            if bit == 1 {
                for j in 0..3 {
                    tail[j] ^= HT_74[u + off][j];
                }
            }
        }
        let mut msg = p.prefix.clone();
        msg.extend(&band);
        msg.extend(&p.suffix);
        msg.extend(&tail);
        msg
    }

    /// Reflected Gray sequence built by the mirror construction, independent
    /// of the shift-xor formula used by the crate.
    pub fn gray_sequence(width: usize) -> Vec<Vec<u8>> {
        let mut seq: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..width {
            let mut next = Vec::with_capacity(seq.len() * 2);
            for half in [0u8, 1] {
                let iter: Box<dyn Iterator<Item = &Vec<u8>>> = if half == 0 {
                    Box::new(seq.iter())
                } else {
                    Box::new(seq.iter().rev())
                };
                for tail in iter {
                    let mut v = vec![half];
                    v.extend(tail);
                    next.push(v);
                }
            }
            seq = next;
        }
        seq
    }
}

/// Parity-check matrix of the narrow-sense BCH(15,7) code, built from its
/// generator polynomial by long division; minimum distance 5, so it corrects
/// two errors. Returned as (rows of H, n, t).
pub fn bch_15_7_parity() -> (Vec<Vec<u8>>, usize, usize) {
    // g(x) = x^8 + x^7 + x^6 + x^4 + 1, coefficients low power first
    let g = [1u8, 0, 0, 0, 1, 0, 1, 1, 1];
    let m = 8;
    let k = 7;
    let n = 15;
    // P row i = x^(m+i) mod g(x)
    let mut p = vec![vec![0u8; m]; k];
    for i in 0..k {
        let mut r = vec![0u8; m + i + 1];
        r[m + i] = 1;
        for d in (m..=m + i).rev() {
            if r[d] == 1 {
                for (gi, &gc) in g.iter().enumerate() {
                    r[d - m + gi] ^= gc;
                }
            }
        }
        p[i][..m].copy_from_slice(&r[..m]);
    }
    // H = [P^T | I_m]
    let mut h = vec![vec![0u8; n]; m];
    for j in 0..m {
        for i in 0..k {
            h[j][i] = p[i][j];
        }
        h[j][k + j] = 1;
    }
    (h, n, 2)
}

/// Exhaustive minimum distance of the code with parity rows `h` (n <= 20).
pub fn min_distance(h: &[Vec<u8>], n: usize) -> usize {
    let m = h.len();
    let mut best = n + 1;
    for w in 1u32..(1u32 << n) {
        let mut s = vec![0u8; m];
        for p in 0..n {
            if (w >> p) & 1 == 1 {
                for j in 0..m {
                    s[j] ^= h[j][n - 1 - p];
                }
            }
        }
        if s.iter().all(|&b| b == 0) {
            best = best.min(w.count_ones() as usize);
        }
    }
    best
}

/// Frozen wire frames, reproduced by direct arithmetic so the golden bytes in
/// the tests cannot drift with the implementation.
pub fn wire_fixture_bytes(
    scheme_tag: u8,
    node_id: u16,
    u: usize,
    a: usize,
    body: &[u8],
) -> Vec<u8> {
    let mut out = vec![0xc5, 0x10 | scheme_tag];
    out.extend(node_id.to_be_bytes());
    out.push(u as u8);
    out.push(a as u8);
    let mut cur = 0u8;
    for (i, &bit) in body.iter().enumerate() {
        cur |= bit << (7 - (i % 8));
        if i % 8 == 7 {
            out.push(cur);
            cur = 0;
        }
    }
    if body.len() % 8 != 0 {
        out.push(cur);
    }
    out
}
