use super::NumericsError;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Deterministic 64-bit random generator (SplitMix64).
///
/// A counter-based generator: the state advances by a fixed odd constant and
/// each output is a bijective scramble of the counter, so identical seeds
/// produce identical sequences on every platform. The OS entropy source is
/// only consulted by [`RngState::from_entropy`].
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    state: u64,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState { seed, state: seed }
    }

    /// Seed from ambient entropy. Used only when the caller omits a seed.
    pub fn from_entropy() -> Self {
        use std::collections::hash_map::RandomState;
        use std::hash::{BuildHasher, Hasher};
        let mut h = RandomState::new().build_hasher();
        h.write_u64(0);
        RngState::new(h.finish())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream; the mapping `(seed, tag) -> child seed` is a
    /// fixed bijective mix so derived streams replay exactly.
    pub fn derive(&self, tag: u64) -> RngState {
        RngState::new(mix64(self.seed ^ tag.wrapping_mul(GOLDEN_GAMMA)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One uniform draw in `[lo, hi)`.
    pub fn uniform_one(&mut self, lo: f64, hi: f64) -> Result<f64, NumericsError> {
        if lo >= hi || lo.is_nan() || hi.is_nan() {
            return Err(NumericsError::Domain(format!(
                "uniform bounds require lo < hi, got lo={lo}, hi={hi}"
            )));
        }
        Ok(lo + (hi - lo) * self.next_f64())
    }

    /// `n` uniform draws in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, NumericsError> {
        if lo >= hi || lo.is_nan() || hi.is_nan() {
            return Err(NumericsError::Domain(format!(
                "uniform bounds require lo < hi, got lo={lo}, hi={hi}"
            )));
        }
        Ok((0..n).map(|_| lo + (hi - lo) * self.next_f64()).collect())
    }

    /// Standard normal draw via Box-Muller (two uniforms per output).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1], keeps ln finite
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform index in `[0, n)` by multiply-shift; `n` must be positive.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }
}
