//! Deterministic seeding utilities.
//!
//! Every replica owns a `ChaCha8` stream seeded from a 64-bit value derived
//! from the experiment master seed and the replica index. The derivation is
//! fixed and test-pinned so that runs are reproducible across platforms and
//! degrees of parallelism.

use rand_xoshiro::Xoshiro256PlusPlus;

/// The deterministic generator used throughout the crate. Xoshiro256++ is
/// fast enough for the event loop and seeds canonically through SplitMix64,
/// so streams are reproducible across platforms.
pub type SimRng = Xoshiro256PlusPlus;

/// SplitMix64 finalizer. Bijective on `u64`, good avalanche behaviour.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replica `index` of an experiment with the given master seed:
/// `mix64(master_seed + mix64(index))` with wrapping addition.
#[inline]
pub fn replica_seed(master_seed: u64, index: u64) -> u64 {
    mix64(master_seed.wrapping_add(mix64(index)))
}

/// Fresh deterministic generator for one replica.
pub fn replica_rng(master_seed: u64, index: u64) -> SimRng {
    use rand::SeedableRng;
    SimRng::seed_from_u64(replica_seed(master_seed, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Pinned against an independent SplitMix64 implementation.
    #[test]
    fn mix64_vectors() {
        assert_eq!(mix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(mix64(1), 0x910A_2DEC_8902_5CC1);
        assert_eq!(mix64(0x1234_5678_9ABC_DEF0), 0x1619_22C6_45CE_50E8);
    }

    #[test]
    fn replica_seed_vectors() {
        assert_eq!(replica_seed(42, 0), 0xFE55_4343_B462_A664);
        assert_eq!(replica_seed(42, 1), 0x7EB3_B394_AC9E_FC29);
        assert_eq!(replica_seed(0xDEAD_BEEF, 123), 0xBF04_E03E_360B_716F);
    }

    #[test]
    fn distinct_replicas_get_distinct_streams() {
        use rand::RngCore;
        let mut a = replica_rng(7, 0);
        let mut b = replica_rng(7, 1);
        assert_ne!(a.next_u64(), b.next_u64());
        let mut a2 = replica_rng(7, 0);
        let mut a3 = replica_rng(7, 0);
        assert_eq!(a2.next_u64(), a3.next_u64());
    }
}
