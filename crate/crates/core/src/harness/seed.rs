/// SplitMix64 finaliser (Stafford variant 13).
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-instance seed. The master seed, size and instance id are absorbed one
/// at a time, each followed by a full SplitMix64 finalisation:
///
/// ```text
/// h0 = mix(master + 0x9e3779b97f4a7c15)
/// h1 = mix(h0 ^ (n  * 0xd6e8feb86659fd93))
/// h2 = mix(h1 ^ (id * 0xa0761d6478bd642f + 1))
/// ```
///
/// All arithmetic wraps. The constants are fixed; changing them changes every
/// derived stream.
pub fn derive_seed(master_seed: u64, n: usize, instance_id: usize) -> u64 {
    let h = mix(master_seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let h = mix(h ^ (n as u64).wrapping_mul(0xd6e8_feb8_6659_fd93));
    mix(h ^ (instance_id as u64).wrapping_mul(0xa076_1d64_78bd_642f).wrapping_add(1))
}
