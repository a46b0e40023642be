//! Counter-based random streams.
//!
//! A stream is the triple `(seed, stream_id, counter)`. Every output is a
//! pure function of that triple, so chains never need to coordinate and a
//! stream can be cloned, moved to another worker, or reconstructed from its
//! fields without replaying history.
//!
//! Each raw 64-bit word is produced by two rounds of the SplitMix64
//! finalizer: the first keyed by the seed over a Weyl sequence in the
//! counter, the second keyed by the stream id. Both rounds are bijections
//! of their input, so a single stream never repeats within 2^64 draws.
//!
//! Uniforms take the top 53 bits of one word. Normals use the cosine branch
//! of the Box-Muller transform and always consume exactly two words; the
//! sine branch is discarded so that the stream position after any call is
//! known without extra state.

use std::f64::consts::TAU;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_SALT: u64 = 0xd1b5_4a32_d192_ed03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
    seed_key: u64,
    stream_key: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::at(seed, stream_id, 0)
    }

    /// Reconstructs a stream positioned at `counter`.
    pub fn at(seed: u64, stream_id: u64, counter: u64) -> Self {
        let seed_key = mix64(seed ^ GOLDEN_GAMMA);
        let stream_key = mix64(stream_id.wrapping_mul(GOLDEN_GAMMA) ^ STREAM_SALT ^ seed_key);
        RngStream {
            seed,
            stream_id,
            counter,
            seed_key,
            stream_key,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let x = self
            .seed_key
            .wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA));
        self.counter = self.counter.wrapping_add(1);
        mix64(mix64(x) ^ self.stream_key)
    }

    /// Uniform on `[0, 1)`. Advances the counter by one.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate. Advances the counter by two.
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        // 1 - u lies in (0, 1], so the logarithm is finite.
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for z in out {
            *z = self.next_normal();
        }
    }
}

/// Stream for chain `chain_id` of an experiment seeded with `seed`.
pub fn split(seed: u64, chain_id: u64) -> RngStream {
    RngStream::new(seed, chain_id)
}
