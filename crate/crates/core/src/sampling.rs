//! Seeded sampling of test vectors.
//!
//! Every sample index gets its own ChaCha stream derived from `(seed, index)`,
//! so results do not depend on evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spaces::{CVector, NormSpec};

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Vector with independent standard complex-Gaussian coordinates.
pub fn complex_gaussian(rng: &mut SampleRng, dim: usize) -> CVector {
    let comps = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    CVector::new(comps).expect("gaussian samples are finite and dim >= 1")
}

/// Complex-Gaussian vector in which each coordinate is zeroed with
/// probability `sparsity`. At least one coordinate stays non-zero.
pub fn sparse_gaussian(rng: &mut SampleRng, dim: usize, sparsity: f64) -> CVector {
    let v = complex_gaussian(rng, dim);
    let keep = rng.random_range(0..dim);
    let comps = v
        .iter()
        .enumerate()
        .map(|(k, &z)| {
            let drop: bool = rng.random_bool(sparsity.clamp(0.0, 1.0));
            if drop && k != keep {
                Complex64::new(0.0, 0.0)
            } else {
                z
            }
        })
        .collect();
    CVector::new(comps).expect("finite")
}

/// Complex-Gaussian direction normalized to the unit sphere of `spec`.
pub fn unit_sphere(spec: &NormSpec, rng: &mut SampleRng) -> CVector {
    loop {
        let v = complex_gaussian(rng, spec.dim());
        let n = spec.eval(&v);
        if n > 0.0 {
            return v.scale_real(1.0 / n);
        }
    }
}

/// Uniform point on the complex unit circle.
pub fn unit_phase(rng: &mut SampleRng) -> Complex64 {
    let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(1.0, t)
}

/// Complex scalar with standard-Gaussian parts.
pub fn complex_scalar(rng: &mut SampleRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}
