//! Built-in diagnostic suite: the checks a deployment can run on target
//! hardware to confirm the codec, the closed-form accounting, and the churn
//! costs behave as shipped.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bits::BitBlock;
use crate::code::{build_hamming, gray_encode};
use crate::codec::{compress, dg_decode, fg_decode, pair_decode, DecodeMode};
use crate::metrics::{css_dg, css_empirical, css_fg, Ratio};
use crate::netsim::{run_churn_dg, run_churn_fg};
use crate::scheme::{ChurnAction, DgScheme, FgScheme, NodeId};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn all_passed(checks: &[SelfCheck]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Runs every diagnostic; failures carry a human-readable detail line.
pub fn run_all() -> Vec<SelfCheck> {
    [
        run("worked-pair-fixture", worked_pair_fixture),
        run("two-node-exhaustive-roundtrip", two_node_exhaustive),
        run("four-node-vote-roundtrip", four_node_vote),
        run("balanced-flexible-roundtrip", balanced_flexible),
        run("saving-identities", saving_identities),
        run("churn-asymmetry", churn_asymmetry),
        run("gray-adjacency", gray_adjacency),
    ]
    .into_iter()
    .collect()
}

fn run(name: &'static str, body: fn() -> Result<(bool, String)>) -> SelfCheck {
    match body() {
        Ok((passed, detail)) => SelfCheck { name, passed, detail },
        Err(e) => SelfCheck {
            name,
            passed: false,
            detail: format!("errored: {e}"),
        },
    }
}

fn worked_pair_fixture() -> Result<(bool, String)> {
    let code = build_hamming(3)?;
    let x: BitBlock = "1011010".parse()?;
    let y: BitBlock = "1011110".parse()?;
    let part_x = crate::scheme::NodePartition::new(NodeId(0), 0, 2, 2);
    let part_y = crate::scheme::NodePartition::new(NodeId(1), 2, 2, 0);
    let px = compress(&code, &part_x, &x)?;
    let py = compress(&code, &part_y, &y)?;
    let payload_ok = px.body().to_string() == "11100" && py.body().to_string() == "10010";
    let (dx, dy) = pair_decode(&code, &px, &part_x, &py, &part_y)?;
    let passed = payload_ok && dx == x && dy == y;
    Ok((passed, format!("payloads {} / {}, both recovered: {}", px.body(), py.body(), dx == x && dy == y)))
}

fn two_node_exhaustive() -> Result<(bool, String)> {
    let code = build_hamming(3)?;
    let part_x = crate::scheme::NodePartition::new(NodeId(0), 0, 2, 2);
    let part_y = crate::scheme::NodePartition::new(NodeId(1), 2, 2, 0);
    let mut ok = 0u32;
    let mut cases = 0u32;
    for base in 0..128u64 {
        let x = BitBlock::from_value(base, 7)?;
        for off in 0..8usize {
            let y = if off == 0 { x.clone() } else { x.flipped(off - 1) };
            cases += 1;
            let px = compress(&code, &part_x, &x)?;
            let py = compress(&code, &part_y, &y)?;
            if let Ok((dx, dy)) = pair_decode(&code, &px, &part_x, &py, &part_y) {
                if dx == x && dy == y {
                    ok += 1;
                }
            }
        }
    }
    Ok((ok == cases, format!("{ok}/{cases} lossless")))
}

fn four_node_vote() -> Result<(bool, String)> {
    let code = build_hamming(3)?;
    let scheme = DgScheme::balanced(code.clone(), 4)?;
    let mut ok = 0u32;
    let mut cases = 0u32;
    for base in 0..128u64 {
        let x = BitBlock::from_value(base, 7)?;
        for deviator in 0..4usize {
            for off in 0..8usize {
                cases += 1;
                let blocks: Vec<BitBlock> = (0..4)
                    .map(|i| {
                        if i == deviator && off > 0 {
                            x.flipped(off - 1)
                        } else {
                            x.clone()
                        }
                    })
                    .collect();
                let payloads = scheme
                    .partitions()
                    .iter()
                    .zip(&blocks)
                    .map(|(p, b)| compress(&code, p, b))
                    .collect::<Result<Vec<_>>>()?;
                let report = dg_decode(&scheme, &payloads, DecodeMode::Vote)?;
                let lossless = report
                    .nodes
                    .iter()
                    .zip(&blocks)
                    .all(|(n, b)| n.recovered.as_ref() == Some(b));
                if lossless {
                    ok += 1;
                }
            }
        }
    }
    Ok((ok == cases, format!("{ok}/{cases} lossless")))
}

fn balanced_flexible() -> Result<(bool, String)> {
    let code = build_hamming(3)?;
    let scheme = FgScheme::split(code.clone(), 4, 0.5, 2)?;
    let mut ok = 0u32;
    let mut cases = 0u32;
    for base in 0..128u64 {
        let x = BitBlock::from_value(base, 7)?;
        for deviator in 0..4usize {
            for off in 0..8usize {
                for mode in [DecodeMode::Single, DecodeMode::Vote] {
                    cases += 1;
                    let blocks: Vec<BitBlock> = (0..4)
                        .map(|i| {
                            if i == deviator && off > 0 {
                                x.flipped(off - 1)
                            } else {
                                x.clone()
                            }
                        })
                        .collect();
                    let payloads = (0..4u16)
                        .map(|i| {
                            let part = scheme.partition_of(NodeId(i)).unwrap();
                            compress(&code, &part, &blocks[i as usize])
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let report = fg_decode(&scheme, &payloads, mode)?;
                    let lossless = report
                        .nodes
                        .iter()
                        .zip(&blocks)
                        .all(|(n, b)| n.recovered.as_ref() == Some(b));
                    if lossless {
                        ok += 1;
                    }
                }
            }
        }
    }
    Ok((ok == cases, format!("{ok}/{cases} lossless")))
}

fn saving_identities() -> Result<(bool, String)> {
    let code = build_hamming(3)?;
    let dg = css_dg(&code, 4)?;
    let fg_bal = css_fg(&code, 2, 2, 2)?;
    let fg_max = css_fg(&code, 1, 3, 0)?;
    let mut ok = dg == Ratio::new(1, 7)?
        && fg_bal == Ratio::new(2, 7)?
        && fg_max == Ratio::new(3, 7)?
        && fg_bal.over(&dg)?.value() == 2.0
        && fg_max.over(&dg)?.value() == 3.0;

    // measured accounting: one step of a 4-node disjoint scheme
    let scheme = DgScheme::balanced(code.clone(), 4)?;
    let x: BitBlock = "1011010".parse()?;
    let mut body_bits = 0u64;
    for p in scheme.partitions() {
        body_bits += compress(&code, p, &x)?.body_len() as u64;
    }
    ok &= css_empirical(4 * 7, body_bits)? == dg;

    // balanced groups cancel the row split
    for order in [3usize, 4, 6] {
        let c = build_hamming(order)?;
        let half = Ratio::new(c.k() as i128, 2 * c.n() as i128)?;
        for r in [0, c.k() / 2, c.k()] {
            ok &= css_fg(&c, 5, 5, r)? == half;
        }
    }
    Ok((ok, format!("dg {dg}, balanced {fg_bal}, max {fg_max}, measured {body_bits} body bits")))
}

fn churn_asymmetry() -> Result<(bool, String)> {
    let code = build_hamming(4)?;
    let dg = DgScheme::balanced(code.clone(), 2)?;
    let fg = FgScheme::with_sizes(code, 1, 1, 5)?;
    let events: Vec<(ChurnAction, NodeId)> =
        (2..5u16).map(|i| (ChurnAction::Join, NodeId(i))).collect();
    let (_, dg_log) = run_churn_dg(&dg, &events)?;
    let (_, fg_log) = run_churn_fg(&fg, &events)?;
    let (dg_total, fg_total) = (dg_log.total_messages(), fg_log.total_messages());
    Ok((
        fg_total == 3 && dg_total == 3 + 4 + 5,
        format!("3 joins: flexible {fg_total} messages, disjoint {dg_total}"),
    ))
}

fn gray_adjacency() -> Result<(bool, String)> {
    let mut ok = true;
    for width in 1..=8usize {
        let space = 1u64 << width;
        for v in 0..space - 1 {
            let a = gray_encode(v, width)?;
            let b = gray_encode(v + 1, width)?;
            ok &= a.xor(&b)?.weight() == 1;
        }
    }
    // bit distance never exceeds value distance
    for a in 0..128u64 {
        for b in 0..128u64 {
            let d = gray_encode(a, 7)?.xor(&gray_encode(b, 7)?)?.weight();
            ok &= (d as u64) <= a.abs_diff(b);
        }
    }
    Ok((ok, "consecutive values differ by one bit; bit distance <= value distance".to_string()))
}
