//! Closed-form and measured performance numbers.
//!
//! Space saving is reported as an exact unreduced fraction: saved bits over
//! raw bits, compared by cross-multiplication so "4/28" and "1/7" are equal.
//! The lossless-range probe drives the real codec over every value window it
//! certifies; it never extrapolates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

use crate::bits::BitBlock;
use crate::code::{gray_encode, LinearBlockCode};
use crate::codec::{compress, joint_decode, DecodeMode};
use crate::error::Error;
use crate::prng::uniform_below;
use crate::scheme::{NodeId, Scheme};
use crate::Result;

/// Exact fraction, kept unreduced so printed values mirror the counting that
/// produced them (e.g. "4/28" for 4 saved bits out of 28).
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Invalid("ratio denominator must be positive"));
        }
        Ok(Ratio { num, den })
    }

    pub fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact quotient self / other, as a fraction.
    pub fn over(&self, other: &Ratio) -> Result<Ratio> {
        match other.num.cmp(&0) {
            Ordering::Equal => Err(Error::Invalid("division by a zero ratio")),
            Ordering::Greater => Ratio::new(self.num * other.den, self.den * other.num),
            Ordering::Less => Ratio::new(-(self.num * other.den), -(self.den * other.num)),
        }
    }

    pub fn compare(&self, other: &Ratio) -> Ordering {
        // denominators are positive, so cross-multiplication preserves order
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Space saving of a disjoint scheme: each of the N nodes omits its band, so
/// k bits disappear from every N*n raw bits.
pub fn css_dg(code: &LinearBlockCode, nodes: usize) -> Result<Ratio> {
    if nodes < 1 || nodes > code.k() {
        return Err(Error::Invalid("disjoint node count must lie in 1..=k"));
    }
    Ratio::new(code.k() as i128, (code.n() * nodes) as i128)
}

/// Space saving of a flexible scheme: group 1 members omit r_g1 bits each,
/// group 2 members the complementary k - r_g1.
pub fn css_fg(code: &LinearBlockCode, n_g1: usize, n_g2: usize, r_g1: usize) -> Result<Ratio> {
    if n_g1 < 1 || n_g2 < 1 {
        return Err(Error::Invalid("each group needs at least one node"));
    }
    if r_g1 > code.k() {
        return Err(Error::Invalid("group 1 cannot own more rows than exist"));
    }
    let saved = n_g1 as i128 * r_g1 as i128 + n_g2 as i128 * (code.k() - r_g1) as i128;
    Ratio::new(saved, ((n_g1 + n_g2) * code.n()) as i128)
}

/// Large-population limit of the flexible scheme's saving: the code rate.
pub fn css_fg_limit(code: &LinearBlockCode) -> Ratio {
    Ratio {
        num: code.k() as i128,
        den: code.n() as i128,
    }
}

/// Measured saving: 1 - compressed/uncompressed, exactly. Negative when
/// framing overhead outweighs the compression.
pub fn css_empirical(uncompressed_bits: u64, compressed_bits: u64) -> Result<Ratio> {
    if uncompressed_bits == 0 {
        return Err(Error::Invalid("uncompressed size must be positive"));
    }
    Ratio::new(
        uncompressed_bits as i128 - compressed_bits as i128,
        uncompressed_bits as i128,
    )
}

/// The configuration a surface cell was evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CssScheme {
    Dg { nodes: usize },
    Fg { n_g1: usize, n_g2: usize, r_g1: usize, r_g2: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CssPoint {
    pub scheme: CssScheme,
    pub css: Ratio,
}

/// Full flexible-scheme saving grid over n_g1 in 1..=N-1 and r_g1 in 0..=k,
/// scanned in that order.
pub fn css_surface(code: &LinearBlockCode, nodes: usize) -> Result<Vec<CssPoint>> {
    if nodes < 2 {
        return Err(Error::Invalid("a surface needs at least two nodes"));
    }
    let k = code.k();
    let mut points = Vec::with_capacity((nodes - 1) * (k + 1));
    for n_g1 in 1..nodes {
        for r_g1 in 0..=k {
            points.push(CssPoint {
                scheme: CssScheme::Fg {
                    n_g1,
                    n_g2: nodes - n_g1,
                    r_g1,
                    r_g2: k - r_g1,
                },
                css: css_fg(code, n_g1, nodes - n_g1, r_g1)?,
            });
        }
    }
    Ok(points)
}

/// First cell attaining the grid maximum, in scan order.
pub fn surface_argmax(points: &[CssPoint]) -> Option<&CssPoint> {
    points
        .iter()
        .fold(None, |best: Option<&CssPoint>, p| match best {
            Some(b) if b.css.compare(&p.css) != Ordering::Less => Some(b),
            _ => Some(p),
        })
}

/// First cell attaining the grid minimum, in scan order.
pub fn surface_argmin(points: &[CssPoint]) -> Option<&CssPoint> {
    points
        .iter()
        .fold(None, |best: Option<&CssPoint>, p| match best {
            Some(b) if b.css.compare(&p.css) != Ordering::Greater => Some(b),
            _ => Some(p),
        })
}

/// A candidate operating point for two separately-encoded correlated
/// sources, against the entropies that bound it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePoint {
    r_x: f64,
    r_y: f64,
    h_x_given_y: f64,
    h_y_given_x: f64,
    h_xy: f64,
}

impl RatePoint {
    pub fn new(r_x: f64, r_y: f64, h_x_given_y: f64, h_y_given_x: f64, h_xy: f64) -> Result<Self> {
        let fields = [r_x, r_y, h_x_given_y, h_y_given_x, h_xy];
        if fields.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invalid("rates and entropies must be finite and non-negative"));
        }
        if h_xy < h_x_given_y || h_xy < h_y_given_x {
            return Err(Error::Invalid("joint entropy cannot be below a conditional entropy"));
        }
        Ok(RatePoint {
            r_x,
            r_y,
            h_x_given_y,
            h_y_given_x,
            h_xy,
        })
    }

    pub fn r_x(&self) -> f64 {
        self.r_x
    }

    pub fn r_y(&self) -> f64 {
        self.r_y
    }
}

/// True iff the point lies in the admissible region: each rate covers its
/// conditional entropy and the sum covers the joint entropy.
pub fn sw_admissible(p: &RatePoint) -> bool {
    p.r_x >= p.h_x_given_y && p.r_y >= p.h_y_given_x && p.r_x + p.r_y >= p.h_xy
}

/// How the lossless-range probe covers each window level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdrMode {
    /// Exhaustive up to 10-bit values, sampled beyond.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LdrOptions {
    /// Value width in bits; must equal the code's block length.
    pub width: usize,
    /// Highest window spread to certify.
    pub max_offset: u64,
    pub mode: LdrMode,
    /// Seed for sampled coverage.
    pub seed: u64,
    /// Cases per level in sampled coverage.
    pub trials: u64,
}

impl LdrOptions {
    pub fn exhaustive(width: usize, max_offset: u64) -> Self {
        LdrOptions {
            width,
            max_offset,
            mode: LdrMode::Exhaustive,
            seed: 0,
            trials: 0,
        }
    }

    pub fn sampled(width: usize, max_offset: u64, seed: u64, trials: u64) -> Self {
        LdrOptions {
            width,
            max_offset,
            mode: LdrMode::Sampled,
            seed,
            trials,
        }
    }

    pub fn auto(width: usize, max_offset: u64, seed: u64, trials: u64) -> Self {
        LdrOptions {
            width,
            max_offset,
            mode: LdrMode::Auto,
            seed,
            trials,
        }
    }
}

/// Coverage record for one window spread.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LdrLevel {
    pub offset: u64,
    /// Cases attempted; probing stops at the first counterexample.
    pub cases: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdrOutcome {
    /// Largest spread with every attempted case lossless. A guarantee only
    /// when `exhaustive` is set; otherwise an observation.
    pub guaranteed_range: u64,
    pub exhaustive: bool,
    pub levels: Vec<LdrLevel>,
}

const LDR_EXHAUSTIVE_CAP: u128 = 1 << 27;
const LDR_AUTO_EXHAUSTIVE_WIDTH: usize = 10;
pub const MAX_SIM_WIDTH: usize = 24;

/// Finds the largest window spread d <= max_offset such that every node
/// assignment of Gray-coded values from {b, ..., b+d}, for every base b,
/// decodes losslessly. Monotone downward: stops at the first failing level.
pub fn ldr_probe(scheme: &Scheme, opts: &LdrOptions) -> Result<LdrOutcome> {
    let code = scheme.code();
    if opts.width != code.n() {
        return Err(Error::Invalid("probe width must equal the code's block length"));
    }
    if opts.width > MAX_SIM_WIDTH {
        return Err(Error::Invalid("probe width is limited to 24-bit values"));
    }
    if opts.max_offset < 1 {
        return Err(Error::Invalid("max offset must be at least 1"));
    }
    if scheme.len() < 2 {
        return Err(Error::Invalid("joint decoding needs at least two nodes"));
    }
    let exhaustive = match opts.mode {
        LdrMode::Exhaustive => true,
        LdrMode::Sampled => false,
        LdrMode::Auto => opts.width <= LDR_AUTO_EXHAUSTIVE_WIDTH,
    };
    if !exhaustive && opts.trials == 0 {
        return Err(Error::Invalid("sampled coverage needs at least one trial"));
    }

    let ids = scheme.node_ids();
    let space = 1u64 << opts.width;
    let mut levels = Vec::new();
    let mut guaranteed = 0u64;
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);

    for d in 1..=opts.max_offset {
        if d >= space {
            break;
        }
        let level = if exhaustive {
            probe_level_exhaustive(scheme, &ids, opts.width, d)?
        } else {
            probe_level_sampled(scheme, &ids, opts.width, d, opts.trials, &mut rng)?
        };
        let clean = level.failures == 0;
        levels.push(level);
        if !clean {
            break;
        }
        guaranteed = d;
    }

    Ok(LdrOutcome {
        guaranteed_range: guaranteed,
        exhaustive,
        levels,
    })
}

fn probe_level_exhaustive(
    scheme: &Scheme,
    ids: &[NodeId],
    width: usize,
    d: u64,
) -> Result<LdrLevel> {
    let space = 1u64 << width;
    let bases = space - d;
    let mut assignments: u128 = 1;
    for _ in 0..ids.len() {
        assignments = assignments
            .checked_mul((d + 1) as u128)
            .ok_or(Error::Invalid("exhaustive sweep overflows"))?;
    }
    if bases as u128 * assignments > LDR_EXHAUSTIVE_CAP {
        return Err(Error::Invalid(
            "exhaustive sweep too large for this width and node count; use sampled coverage",
        ));
    }
    let mut cases = 0u64;
    let mut digits = alloc::vec![0u64; ids.len()];
    let mut values = alloc::vec![0u64; ids.len()];
    for base in 0..bases {
        digits.iter_mut().for_each(|x| *x = 0);
        loop {
            for (v, digit) in values.iter_mut().zip(&digits) {
                *v = base + digit;
            }
            cases += 1;
            if !case_is_lossless(scheme, ids, &values, width)? {
                return Ok(LdrLevel {
                    offset: d,
                    cases,
                    failures: 1,
                });
            }
            if !advance_odometer(&mut digits, d) {
                break;
            }
        }
    }
    Ok(LdrLevel {
        offset: d,
        cases,
        failures: 0,
    })
}

fn probe_level_sampled(
    scheme: &Scheme,
    ids: &[NodeId],
    width: usize,
    d: u64,
    trials: u64,
    rng: &mut ChaCha12Rng,
) -> Result<LdrLevel> {
    let space = 1u64 << width;
    let mut values = alloc::vec![0u64; ids.len()];
    let mut cases = 0u64;
    for _ in 0..trials {
        let base = uniform_below(rng, space - d);
        for v in values.iter_mut() {
            *v = base + uniform_below(rng, d + 1);
        }
        cases += 1;
        if !case_is_lossless(scheme, ids, &values, width)? {
            return Ok(LdrLevel {
                offset: d,
                cases,
                failures: 1,
            });
        }
    }
    Ok(LdrLevel {
        offset: d,
        cases,
        failures: 0,
    })
}

fn advance_odometer(digits: &mut [u64], max: u64) -> bool {
    for digit in digits.iter_mut().rev() {
        if *digit < max {
            *digit += 1;
            return true;
        }
        *digit = 0;
    }
    false
}

fn case_is_lossless(scheme: &Scheme, ids: &[NodeId], values: &[u64], width: usize) -> Result<bool> {
    let code = scheme.code();
    let mut payloads = Vec::with_capacity(ids.len());
    let mut truth: BTreeMap<NodeId, BitBlock> = BTreeMap::new();
    for (&id, &value) in ids.iter().zip(values) {
        let block = gray_encode(value, width)?;
        let part = scheme.partition_of(id).ok_or(Error::UnknownNode(id))?;
        payloads.push(compress(code, &part, &block)?);
        truth.insert(id, block);
    }
    let report = joint_decode(scheme, &payloads, DecodeMode::Vote)?;
    Ok(report
        .nodes
        .iter()
        .all(|n| n.recovered.as_ref() == truth.get(&n.node_id)))
}
