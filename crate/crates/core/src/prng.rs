//! Seeded randomness helpers shared by the simulator and the sampled probe.

use rand_core::RngCore;

/// Identifier recorded in reports so results can be replayed against the
/// exact generator that produced them.
pub(crate) const PRNG_ID: &str = "chacha12";

/// Uniform draw from [0, bound) by rejection, bias-free for any bound.
pub(crate) fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0, "uniform_below needs a positive bound");
    if bound.is_power_of_two() {
        return rng.next_u64() & (bound - 1);
    }
    // largest multiple of bound representable; draws past it would skew low residues
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}
