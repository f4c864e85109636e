//! Seedable PRNG for reproducible initial points.
//!
//! This is the standard splitmix64 generator (Steele, Lea & Flood 2014):
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Uniform doubles in [0, 1) take the top 53 bits: `(output >> 11) * 2^-53`.
//! The generator is pinned here, constant for constant, so any other
//! implementation of this harness can reproduce the same experiment inputs
//! from the same seed.

/// splitmix64 generator state.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// `count` initial point pairs; each pair draws the `dim_x` coordinates of
/// `x0` first, then the `dim_y` coordinates of `y0`, componentwise uniform
/// over `range`.
pub fn random_pairs(
    seed: u64,
    count: usize,
    dim_x: usize,
    dim_y: usize,
    range: (f64, f64),
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let x = (0..dim_x).map(|_| rng.next_in(range.0, range.1)).collect();
            let y = (0..dim_y).map(|_| rng.next_in(range.0, range.1)).collect();
            (x, y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_the_reference_sequence() {
        // First three outputs for seed 1234567, cross-computed with an
        // independent big-integer implementation of the same recurrence.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 0x599E_D017_FB08_FC85);
        assert_eq!(rng.next_u64(), 0x2C73_F084_5854_0FA5);
        assert_eq!(rng.next_u64(), 0x883E_BCE5_A3F2_7C77);
    }

    #[test]
    fn doubles_are_in_unit_interval_and_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..1000 {
            let x = a.next_f64();
            assert!((0.0..1.0).contains(&x));
            assert_eq!(x, b.next_f64());
        }
    }

    #[test]
    fn pairs_are_componentwise_in_range() {
        for (x, y) in random_pairs(7, 20, 3, 3, (0.0, 1.0)) {
            assert!(x.iter().chain(&y).all(|c| (0.0..1.0).contains(c)));
        }
    }
}
