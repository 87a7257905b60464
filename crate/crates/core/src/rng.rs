//! Counter-based deterministic random numbers.
//!
//! Every value is a pure function of `(seed, stream, counter)`:
//!
//! ```text
//! key    = mix64(seed ^ mix64(stream + 0x632B_E59B_D9B4_E019))
//! x(c)   = mix64(key + (c + 1) * 0x9E37_79B9_7F4A_7C15)      (wrapping)
//! u(c)   = ((x(c) >> 12) + 0.5) * 2^-52                       in (0, 1)
//! z(c)   = -sqrt(2) * erfc_inv(2 u(c))                        standard normal
//! ```
//!
//! `mix64` is the SplitMix64 finalizer. Because values are indexed rather than
//! drawn from a shared state, parallel consumers that use disjoint streams get
//! results independent of scheduling.

use statrs::function::erf::erfc_inv;

const STREAM_OFFSET: u64 = 0x632B_E59B_D9B4_E019;
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Converts 64 random bits to a uniform float strictly inside (0, 1).
#[inline]
pub fn bits_to_open_unit(x: u64) -> f64 {
    ((x >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Standard normal quantile of `u` in (0, 1).
#[inline]
pub fn normal_quantile(u: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
}

/// A keyed counter-based generator: `(seed, stream)` selects an independent
/// substream, and values within it are addressed by a 64-bit counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
    stream: u64,
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_add(STREAM_OFFSET)));
        Self { seed, stream, key }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Substream derivation: a child generator keyed by this one's key.
    pub fn substream(&self, index: u64) -> Self {
        Self::new(self.key, index)
    }

    #[inline]
    pub fn bits_at(&self, counter: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    #[inline]
    pub fn uniform_at(&self, counter: u64) -> f64 {
        bits_to_open_unit(self.bits_at(counter))
    }

    #[inline]
    pub fn normal_at(&self, counter: u64) -> f64 {
        normal_quantile(self.uniform_at(counter))
    }

    /// A sequential cursor over this stream starting at counter 0.
    pub fn cursor(&self) -> RngCursor {
        RngCursor {
            rng: *self,
            counter: 0,
        }
    }
}

/// Sequential view over a [`CounterRng`] stream.
#[derive(Debug, Clone)]
pub struct RngCursor {
    rng: CounterRng,
    counter: u64,
}

impl RngCursor {
    pub fn position(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        let x = self.rng.bits_at(self.counter);
        self.counter += 1;
        x
    }

    /// Uniform in (0, 1).
    pub fn uniform(&mut self) -> f64 {
        bits_to_open_unit(self.next_u64())
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        normal_quantile(self.uniform())
    }

    /// Uniform integer in `0..bound` by rejection (no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound) - 1;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
