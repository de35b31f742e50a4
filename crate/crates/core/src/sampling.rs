//! Seeded random sampling of test points: spheres, balls, and Lie balls.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::clifford::Paravector;
use crate::geometry::{gamma_max_dist, lie_norm};

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vector<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the unit sphere of `R^len`.
pub fn unit_vector<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v = normal_vector(len, rng);
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-8 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Uniform point in the ball of radius `radius` in `R^len`.
pub fn ball_point<R: Rng>(len: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / len as f64);
    unit_vector(len, rng).into_iter().map(|x| x * r).collect()
}

pub fn complex_normal_vector<R: Rng>(len: usize, rng: &mut R) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Point of `C^len` with Lie norm drawn uniformly from `[0, radius)`.
pub fn lie_ball_point<R: Rng>(len: usize, radius: f64, rng: &mut R) -> Vec<Complex64> {
    loop {
        let z = complex_normal_vector(len, rng);
        let nrm = lie_norm(&z);
        if nrm > 1e-8 {
            let target = radius * rng.random::<f64>();
            return z.into_iter().map(|c| c * (target / nrm)).collect();
        }
    }
}

/// Non-real point of `C^len` with Lie norm in `[lo, hi)`.
pub fn lie_shell_point<R: Rng>(len: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<Complex64> {
    loop {
        let z = complex_normal_vector(len, rng);
        let nrm = lie_norm(&z);
        if nrm > 1e-8 {
            let target = lo + (hi - lo) * rng.random::<f64>();
            return z.into_iter().map(|c| c * (target / nrm)).collect();
        }
    }
}

/// Complex paravector with `gamma_max_dist` drawn uniformly from `[0, bound)`.
pub fn kappa_point<R: Rng>(n: usize, bound: f64, rng: &mut R) -> Paravector {
    loop {
        let z = Paravector::new(complex_normal_vector(n + 1, rng)).expect("valid n");
        let d = gamma_max_dist(&z);
        if d > 1e-8 {
            let target = bound * rng.random::<f64>();
            return z.scale(Complex64::new(target / d, 0.0));
        }
    }
}

pub fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}
