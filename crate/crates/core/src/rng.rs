//! Seeded generator used for every random fixture.
//!
//! The stream is SplitMix64: the state advances by `0x9E3779B97F4A7C15` and each
//! output is the standard mix of the new state. Uniforms take the top 53 bits
//! (`(z >> 11) · 2⁻⁵³`, in `[0, 1)`). Gaussians use the cosine branch of Box–Muller
//! on two consecutive uniforms, `√(−2 ln(1 − u₁)) · cos(2π u₂)`, one Gaussian per two
//! draws. Complex Gaussians draw the real part first, then the imaginary part.
//! Any implementation following these steps reproduces the fixtures bit-exactly.

use num_complex::Complex64;

#[derive(Debug, Clone)]
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

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let re = self.next_gaussian();
        let im = self.next_gaussian();
        Complex64::new(re, im)
    }

    /// Uniform index in `0..n` (modulo reduction; bias is irrelevant for fixtures).
    pub fn next_index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
