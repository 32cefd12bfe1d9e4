//! Counter-based randomness: every draw is a pure function of a word list,
//! so channel coefficients and precoder weights depend only on their
//! coordinates and never on evaluation order.

/// splitmix64 finalizer over an incremented state.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a word list to one output word.
pub fn derive(words: &[u64]) -> u64 {
    let mut h: u64 = 0x243F_6A88_85A3_08D3;
    for &w in words {
        h = mix(h.rotate_left(23) ^ w);
    }
    mix(h)
}

/// `derive` with one extra word, for rejection loops and paired draws.
pub fn derive_with(words: &[u64], salt: u64) -> u64 {
    let mut h: u64 = 0x243F_6A88_85A3_08D3;
    for &w in words {
        h = mix(h.rotate_left(23) ^ w);
    }
    mix(mix(h.rotate_left(23) ^ salt))
}

/// Uniform double in the open interval (0, 1).
pub fn uniform01(v: u64) -> f64 {
    ((v >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
}

pub const TAG_CHANNEL: u64 = 0x4348_414e;
pub const TAG_PRECODER: u64 = 0x5052_4543;
pub const TAG_TRIAL: u64 = 0x5452_4941;
