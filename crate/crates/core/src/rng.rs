//! Seeded random streams.
//!
//! Every `(sample, curve, channel)` triple gets its own ChaCha8 stream: the
//! key is derived from the run seed and the `(curve, channel)` pair, and the
//! sample index selects the ChaCha stream number. Streams never overlap, so
//! the result of a sample does not depend on which worker ran it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Noise channel within one curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    /// Driving position `ξ_α`.
    Position,
    /// Lie-group direction `ϑ^a_α`, `a ∈ {0, 1, 2}`.
    Lie(u8),
    /// Scalar streams used by the Bessel harnesses.
    Auxiliary,
}

impl Channel {
    fn tag(self) -> u64 {
        match self {
            Channel::Position => 0,
            Channel::Lie(a) => 1 + a as u64,
            Channel::Auxiliary => 0xff,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream for one sample, curve and noise channel.
pub fn stream(seed: u64, sample: u64, curve: usize, channel: Channel) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed;
    let words = [
        splitmix64(seed),
        splitmix64(seed ^ (curve as u64).wrapping_mul(0xd1b5_4a32_d192_ed03)),
        splitmix64(seed ^ channel.tag().wrapping_mul(0x8cb9_2ba7_2f3d_8dd7)),
        0,
    ];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        state = splitmix64(state ^ words[i]);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(sample);
    rng
}

/// Per-curve streams for the position channel and the three Lie directions.
pub struct SampleStreams {
    pub position: Vec<ChaCha8Rng>,
    pub lie: Vec<[ChaCha8Rng; 3]>,
}

impl SampleStreams {
    pub fn new(seed: u64, sample: u64, curves: usize) -> Self {
        SampleStreams {
            position: (0..curves)
                .map(|c| stream(seed, sample, c, Channel::Position))
                .collect(),
            lie: (0..curves)
                .map(|c| std::array::from_fn(|a| stream(seed, sample, c, Channel::Lie(a as u8))))
                .collect(),
        }
    }
}
