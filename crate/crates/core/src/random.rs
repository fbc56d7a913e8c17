use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Seeded random stream. Identical seed and algorithm give identical draws.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RandomSource {
    pub const ALGORITHM: &'static str = "chacha20";

    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` derived from the same seed.
    pub fn substream(&self, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(stream + 1);
        RandomSource {
            seed: self.seed,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        Self::ALGORITHM
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Standard exponential variate −ln(1 − U).
    pub fn standard_exponential(&mut self) -> f64 {
        -(-self.uniform()).ln_1p()
    }

    /// Gamma(m, 1) for integer shape m, as a sum of m standard exponentials.
    pub fn gamma_integer(&mut self, m: u32) -> f64 {
        (0..m).map(|_| self.standard_exponential()).sum()
    }
}
