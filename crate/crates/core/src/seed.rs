//! Stable seed derivation (SplitMix64 finalizer chain).

/// Mixes `value` into `state`. Stable across platforms and releases.
pub fn mix(state: u64, value: u64) -> u64 {
    let mut z = state
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(value.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of indices into a seed, e.g. `derive(master, &[layout, treasure, trial])`.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(master, 0), |s, &v| mix(s, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_order_sensitive() {
        assert_eq!(derive(7, &[1, 2, 3]), derive(7, &[1, 2, 3]));
        assert_ne!(derive(7, &[1, 2, 3]), derive(7, &[1, 3, 2]));
        assert_ne!(derive(7, &[1]), derive(8, &[1]));
    }
}
