//! Deterministic seeded randomness for test fixtures and scenario inputs.
//!
//! Everything derives from a 64-bit seed through the splitmix64 update
//! (state += 0x9E3779B97F4A7C15, then two xor-multiply mixes). The sequence
//! is fully specified here so a reimplementation in another language can
//! reproduce the same fixtures structurally.

use num_complex::Complex64 as C64;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform().max(f64::MIN_POSITIVE);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Complex entry with independent standard-normal real and imaginary parts.
    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }
}

/// Random complex Gaussian matrix entries, row-major.
pub fn complex_gaussian_entries(dim: usize, rng: &mut SplitMix64) -> Vec<C64> {
    (0..dim * dim).map(|_| rng.complex_normal()).collect()
}

/// Random unit vector.
pub fn random_unit_vector(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = SplitMix64::new(seed);
    let mut v: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
    let norm = crate::matrix::vec_norm(&v);
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}
