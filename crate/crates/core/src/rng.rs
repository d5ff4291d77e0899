//! Deterministic random substreams.
//!
//! All randomness is drawn from ChaCha8 (a counter-based stream cipher used as
//! a generator). A substream is addressed by the master seed, a domain tag and
//! a key path (for example an environment index); the 256-bit ChaCha key is
//! expanded from these with SplitMix64, and the path index selects the ChaCha
//! stream. Two substreams with different addresses never share a keystream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Pinned description written into run manifests.
pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.3); key = SplitMix64(master, domain, key path), stream = path index";

/// Module-level domain tags. Values are part of the reproducibility contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Reflected = 1,
    Limit = 2,
    Coupled = 3,
    FkLimit = 4,
    FkEps = 5,
    Picard = 6,
    Environment = 7,
    Mu = 8,
    /// Random media pairs for comparison checks.
    Comparison = 9,
    Test = 99,
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Substream for `(master, domain, key_path)` and path `index`.
pub fn substream(master: u64, domain: Domain, key_path: &[u64], index: u64) -> Rng {
    let mut state = master;
    let mut mix = splitmix64(&mut state) ^ (domain as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    for &k in key_path {
        let mut s = mix ^ k.wrapping_mul(0xA076_1D64_78BD_642F);
        mix = splitmix64(&mut s);
    }
    let mut seed = [0u8; 32];
    let mut s = mix;
    for chunk in seed.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    let mut rng = Rng::from_seed(seed);
    rng.set_stream(index);
    rng
}
