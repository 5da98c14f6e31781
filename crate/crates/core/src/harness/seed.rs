//! Seed derivation for independent replications.
//!
//! `derive_seed` chains the SplitMix64 finalizer:
//!
//! ```text
//! h0   = mix(master ^ 0x9E3779B97F4A7C15)
//! h1   = mix(h0 ^ mix(density_index + 1))
//! seed = mix(h1 ^ mix(replication_index ^ 0xD1B54A32D192ED03))
//! ```
//!
//! `mix` is a bijection on `u64`, so for a fixed master seed and density
//! index distinct replication indices never collide.

const MASTER_SALT: u64 = 0x9E37_79B9_7F4A_7C15;
const REPLICATION_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master_seed: u64, density_index: u64, replication_index: u64) -> u64 {
    let h0 = mix64(master_seed ^ MASTER_SALT);
    let h1 = mix64(h0 ^ mix64(density_index.wrapping_add(1)));
    mix64(h1 ^ mix64(replication_index ^ REPLICATION_SALT))
}
