//! Counter-based uniform stream and seed derivation.
//!
//! The generator is SplitMix64 viewed as a counter-based function. For a key
//! `k` the `i`-th output (starting at `i = 0`) is
//!
//! ```text
//! z = k + (i + 1) * 0x9E3779B97F4A7C15        (wrapping, mod 2^64)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! which is bit-identical to the classic SplitMix64 sequence seeded with `k`.
//! Uniform doubles on the open interval (0, 1) are `((out >> 12) + 0.5) / 2^52`;
//! with 52 bits the half-offset is exact, so 1.0 is never produced.
//!
//! Seeds for sub-streams are derived with [`derive_seed`]:
//! `derive_seed(s, x) = mix(s ^ mix(x + GAMMA))`, and the per-trial seed used by
//! the Monte Carlo harness is `split(master, n, t) = derive_seed(derive_seed(master, n), t)`.

/// SplitMix64 increment (the odd integer closest to 2^64 / golden ratio).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

const TWO_POW_M52: f64 = 1.0 / (1u64 << 52) as f64;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent-looking child seed from `seed` and a tag.
#[inline]
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GAMMA)))
}

/// Per-trial seed: mixes the master seed, the sample size and the trial index.
#[inline]
pub fn split(master: u64, n: u64, trial: u64) -> u64 {
    derive_seed(derive_seed(master, n), trial)
}

/// Counter-based SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self {
            key: seed,
            counter: 0,
        }
    }

    /// Output at an arbitrary position without advancing the stream.
    #[inline]
    pub fn at(&self, index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)),
        )
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let out = self.at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        out
    }

    /// Uniform draw on the open interval (0, 1).
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * TWO_POW_M52
    }

    pub fn position(&self) -> u64 {
        self.counter
    }
}
