//! Desk-scale network simulation: correlated Gray-coded readings, end-to-end
//! compress/decode statistics, tamper injection, and churn replay.
//!
//! Readings follow a common base value that walks by at most `drift` per
//! step, clamped so the whole window stays inside the value space; each node
//! reads somewhere in [base, base+window]. Gray coding keeps the bit
//! distance between two readings at most their value distance, which is what
//! makes small windows decodable.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

use crate::bits::BitBlock;
use crate::code::gray_encode;
use crate::codec::{compress, joint_decode, CompressedPayload, DecodeMode};
use crate::error::Error;
use crate::metrics::{css_empirical, Ratio, MAX_SIM_WIDTH};
use crate::prng::{uniform_below, PRNG_ID};
use crate::scheme::{ChurnAction, DgScheme, FgScheme, ManagementLog, NodeId, Scheme};
use crate::Result;

/// How node readings move together over time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrelationModel {
    /// Bits per reading; must equal the code's block length to simulate.
    pub width: usize,
    /// Max spread among simultaneous node values.
    pub window: u64,
    /// Max per-step change of the common base.
    pub drift: u64,
    pub seed: u64,
}

impl CorrelationModel {
    pub fn new(width: usize, window: u64, drift: u64, seed: u64) -> Result<Self> {
        if width < 1 || width > MAX_SIM_WIDTH {
            return Err(Error::Invalid("reading width must lie in 1..=24 bits"));
        }
        let space = 1u64 << width;
        if window >= space {
            return Err(Error::Invalid("window must be smaller than the value space"));
        }
        if drift >= space {
            return Err(Error::Invalid("drift must be smaller than the value space"));
        }
        Ok(CorrelationModel {
            width,
            window,
            drift,
            seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeReading {
    pub node: NodeId,
    pub value: u64,
    pub block: BitBlock,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub base: u64,
    pub readings: Vec<NodeReading>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub width: usize,
    pub seed: u64,
    /// Generator identifier; reports carry it so runs can be replayed.
    pub prng: &'static str,
    pub steps: Vec<TraceStep>,
}

/// Draws a correlated reading trace. Deterministic for a fixed model.
pub fn generate_trace(
    model: &CorrelationModel,
    nodes: &[NodeId],
    steps: usize,
) -> Result<Trace> {
    if nodes.is_empty() {
        return Err(Error::Invalid("a trace needs at least one node"));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode(w[0]));
    }

    let space = 1u64 << model.width;
    let top = space - 1 - model.window; // highest base keeping the window in range
    let mut rng = ChaCha12Rng::seed_from_u64(model.seed);
    let mut base = uniform_below(&mut rng, top + 1);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let readings = nodes
            .iter()
            .map(|&node| {
                let value = base + uniform_below(&mut rng, model.window + 1);
                Ok(NodeReading {
                    node,
                    value,
                    block: gray_encode(value, model.width)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(TraceStep { base, readings });
        let delta = uniform_below(&mut rng, 2 * model.drift + 1) as i64 - model.drift as i64;
        base = (base as i64 + delta).clamp(0, top as i64) as u64;
    }
    Ok(Trace {
        width: model.width,
        seed: model.seed,
        prng: PRNG_ID,
        steps: out,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: usize,
    /// Nodes whose recovered block differed from the source (or was absent).
    pub losses: u32,
    pub alerts: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub steps: usize,
    pub nodes: usize,
    pub recovered: u64,
    pub total: u64,
    pub decode_success_rate: f64,
    pub empirical_css: Ratio,
    pub integrity_alerts: u64,
    /// Zero for a static run; churn replays account for these separately.
    pub management_messages: u64,
    pub prng: &'static str,
    pub seed: u64,
    pub per_step: Vec<StepRecord>,
}

/// Compresses every reading, decodes jointly, and compares with the ground
/// truth, step by step.
pub fn run_simulation(scheme: &Scheme, trace: &Trace, mode: DecodeMode) -> Result<SimReport> {
    let code = scheme.code();
    if trace.width != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: trace.width,
        });
    }
    if trace.steps.is_empty() {
        return Err(Error::Invalid("a simulation needs at least one step"));
    }
    let node_count = scheme.len();
    let mut uncompressed_bits = 0u64;
    let mut compressed_bits = 0u64;
    let mut losses_total = 0u64;
    let mut alerts_total = 0u64;
    let mut per_step = Vec::with_capacity(trace.steps.len());

    for (step, ts) in trace.steps.iter().enumerate() {
        if ts.readings.len() != node_count {
            return Err(Error::Invalid("trace and scheme disagree on the node count"));
        }
        let mut payloads = Vec::with_capacity(ts.readings.len());
        let mut truth: BTreeMap<NodeId, &BitBlock> = BTreeMap::new();
        for reading in &ts.readings {
            let part = scheme
                .partition_of(reading.node)
                .ok_or(Error::UnknownNode(reading.node))?;
            let payload = compress(code, &part, &reading.block)?;
            uncompressed_bits += code.n() as u64;
            compressed_bits += payload.body_len() as u64;
            payloads.push(payload);
            truth.insert(reading.node, &reading.block);
        }
        let report = joint_decode(scheme, &payloads, mode)?;
        let losses = report
            .nodes
            .iter()
            .filter(|n| n.recovered.as_ref() != truth.get(&n.node_id).copied())
            .count() as u32;
        let alerts = report.alert_count() as u32;
        losses_total += u64::from(losses);
        alerts_total += u64::from(alerts);
        per_step.push(StepRecord { step, losses, alerts });
    }

    let total = (trace.steps.len() * node_count) as u64;
    let recovered = total - losses_total;
    Ok(SimReport {
        steps: trace.steps.len(),
        nodes: node_count,
        recovered,
        total,
        decode_success_rate: recovered as f64 / total as f64,
        empirical_css: css_empirical(uncompressed_bits, compressed_bits)?,
        integrity_alerts: alerts_total,
        management_messages: 0,
        prng: PRNG_ID,
        seed: trace.seed,
        per_step,
    })
}

/// Returns the payload set with the given body bit positions flipped on one
/// node; everything else is untouched.
pub fn inject_tamper(
    payloads: &[CompressedPayload],
    node: NodeId,
    flip_positions: &[usize],
) -> Result<Vec<CompressedPayload>> {
    let index = payloads
        .iter()
        .position(|p| p.node_id == node)
        .ok_or(Error::UnknownNode(node))?;
    let mut out = payloads.to_vec();
    let target = &mut out[index];
    for &pos in flip_positions {
        let u = target.kept_prefix.len();
        let v = target.kept_suffix.len();
        let m = target.m_bar.len();
        if pos < u {
            target.kept_prefix = target.kept_prefix.flipped(pos);
        } else if pos < u + v {
            target.kept_suffix = target.kept_suffix.flipped(pos - u);
        } else if pos < u + v + m {
            target.m_bar = target.m_bar.flipped(pos - u - v);
        } else {
            return Err(Error::Invalid("tamper position outside the payload body"));
        }
    }
    Ok(out)
}

/// Replays membership events against a disjoint scheme, collecting the
/// configuration messages each rebuild costs.
pub fn run_churn_dg(
    start: &DgScheme,
    events: &[(ChurnAction, NodeId)],
) -> Result<(DgScheme, ManagementLog)> {
    let mut scheme = start.clone();
    let mut log = ManagementLog::default();
    for (index, &(action, node)) in events.iter().enumerate() {
        let (next, event) = match action {
            ChurnAction::Join => scheme.join(node),
            ChurnAction::Leave => scheme.leave(node),
        }
        .map_err(|cause| Error::ChurnStep {
            index,
            cause: Box::new(cause),
        })?;
        scheme = next;
        log.push(event);
    }
    Ok((scheme, log))
}

/// Replays membership events against a flexible scheme; joins cost one
/// message, leaves none.
pub fn run_churn_fg(
    start: &FgScheme,
    events: &[(ChurnAction, NodeId)],
) -> Result<(FgScheme, ManagementLog)> {
    let mut scheme = start.clone();
    let mut log = ManagementLog::default();
    for (index, &(action, node)) in events.iter().enumerate() {
        let (next, event) = match action {
            ChurnAction::Join => scheme.join(node),
            ChurnAction::Leave => scheme.leave(node),
        }
        .map_err(|cause| Error::ChurnStep {
            index,
            cause: Box::new(cause),
        })?;
        scheme = next;
        log.push(event);
    }
    Ok((scheme, log))
}
