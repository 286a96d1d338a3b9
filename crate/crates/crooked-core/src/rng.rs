//! Splittable counter-based pseudo-random generator for the sampling
//! suites. Every stream is a pure function of `(seed, stream, counter)`,
//! so verification reports are reproducible and order-independent.

/// SplitMix64-style counter generator.
#[derive(Clone, Copy, Debug)]
pub struct Counter {
    seed: u64,
    stream: u64,
    counter: u64,
}

impl Counter {
    pub fn new(seed: u64, stream: u64) -> Counter {
        Counter {
            seed,
            stream,
            counter: 0,
        }
    }

    /// Derive an independent stream without disturbing this one.
    pub fn split(&self, stream: u64) -> Counter {
        Counter::new(self.seed, self.stream.wrapping_mul(0x9e37_79b9).wrapping_add(stream).wrapping_add(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut z = self
            .seed
            .wrapping_add(self.stream.wrapping_mul(0xbf58_476d_1ce4_e5b9))
            .wrapping_add(self.counter.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        self.counter = self.counter.wrapping_add(1);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
