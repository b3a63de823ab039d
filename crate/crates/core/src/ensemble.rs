//! Eigenvalue density of Hermitian matrices with prescribed eigenvalue
//! multiplicities, the closed-form partition function with one degenerate
//! eigenvalue, and Monte Carlo checks of both integrals.
//!
//! Sampling is split into fixed-size chunks; chunk `c` draws from a ChaCha8
//! stream `c` under the user seed. Chunks may run on any number of threads,
//! but their statistics are merged in chunk order, so the result depends
//! only on `(seed, samples)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};
use crate::moments::{hankel_det, weight_moments};

pub const MIN_SAMPLES: u64 = 10_000;
const CHUNK: u64 = 4096;

/// Multiplicities `m_1, ..., m_k` of the distinct eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityPartition {
    m: Vec<u32>,
}

impl MultiplicityPartition {
    pub fn new(m: Vec<u32>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidArgument("partition must have at least one part".into()));
        }
        if m.contains(&0) {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        Ok(MultiplicityPartition { m })
    }

    pub fn parts(&self) -> &[u32] {
        &self.m
    }

    /// Matrix size `N = sum m_i`.
    pub fn size(&self) -> u32 {
        self.m.iter().sum()
    }
}

/// Unnormalized log-density
/// `sum_{i<j} 2 m_i m_j log|mu_i - mu_j| - sum_i m_i mu_i^2`.
///
/// Coincident eigenvalues give `-inf`.
pub fn jpdf_log(mu: &[f64], part: &MultiplicityPartition) -> Result<f64> {
    let m = part.parts();
    if mu.len() != m.len() {
        return Err(Error::InvalidArgument(format!("{} eigenvalues for a partition with {} parts", mu.len(), m.len())));
    }
    let mut acc = 0.0;
    for i in 0..mu.len() {
        acc -= m[i] as f64 * mu[i] * mu[i];
        for j in i + 1..mu.len() {
            let gap = (mu[i] - mu[j]).abs();
            if gap == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            acc += 2.0 * (m[i] * m[j]) as f64 * gap.ln();
        }
    }
    Ok(acc)
}

/// `r` in `Delta_{n+K} = pi^((n+1)/2) r / sqrt(K)`, where
/// `Delta_{n+K} = integral exp(-K t^2) D_n(t) dt`.
pub fn exact_partition(n: usize, k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let dhat = hankel_det(&weight_moments(k, (2 * n).saturating_sub(2)), n)?;
    Ok(gaussian_average(&dhat, k))
}

/// `sqrt(K/pi) integral exp(-K t^2) p(t) dt` for a polynomial `p`.
fn gaussian_average(p: &Poly, k: u32) -> Rational {
    let kr = Rational::from(k as i64);
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(i, c)| i % 2 == 0 && !c.is_zero())
        .map(|(i, c)| {
            let j = (i / 2) as u32;
            // (2j)! / (4^j j!) K^-j
            let moment = Rational::factorial(2 * j) / (Rational::from(4).pow(j) * Rational::factorial(j) * kr.pow(j));
            c * &moment
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `(mean - exact) / std_error`; infinite when the error is zero and the
    /// mean misses.
    pub fn z_score(&self, exact: f64) -> f64 {
        let diff = self.mean - exact;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

fn run_chunks<F>(samples: u64, seed: u64, draw: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let size = CHUNK.min(samples - c * CHUNK);
            let mut acc = Moments::default();
            for _ in 0..size {
                acc.push(draw(&mut rng));
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(Moments::default(), Moments::merge);
    let variance = total.m2 / (total.count - 1) as f64;
    Ok(McEstimate { mean: total.mean, std_error: (variance / total.count as f64).sqrt(), samples, seed })
}

/// `(1/n!) prod_{i<j} (x_i - x_j)^2 prod_l (x_l - t)^(2K)`.
fn dn_integrand(x: &[f64], t: f64, k: u32, inv_fact: f64) -> f64 {
    let mut v = inv_fact;
    for i in 0..x.len() {
        v *= (x[i] - t).powi(2 * k as i32);
        for j in i + 1..x.len() {
            let d = x[i] - x[j];
            v *= d * d;
        }
    }
    v
}

fn inv_factorial(n: usize) -> f64 {
    1.0 / (1..=n).map(|i| i as f64).product::<f64>()
}

/// Monte Carlo estimate of `D_n(t) / pi^(n/2)` with `x_i` drawn from
/// `exp(-x^2) / sqrt(pi)`.
pub fn mc_dn(n: usize, k: u32, t: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid sigma");
    let inv_fact = inv_factorial(n);
    run_chunks(samples, seed, |rng| {
        let x: Vec<f64> = (0..n).map(|_| rng.sample(normal)).collect();
        dn_integrand(&x, t, k, inv_fact)
    })
}

/// Monte Carlo estimate of `sqrt(K) Delta_{n+K} / pi^((n+1)/2)`, sampling
/// `t` from `sqrt(K/pi) exp(-K t^2)` on top of [`mc_dn`].
pub fn mc_partition(n: usize, k: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid sigma");
    let t_dist = Normal::new(0.0, (0.5 / k as f64).sqrt()).expect("valid sigma");
    let inv_fact = inv_factorial(n);
    run_chunks(samples, seed, |rng| {
        let t = rng.sample(t_dist);
        let x: Vec<f64> = (0..n).map(|_| rng.sample(normal)).collect();
        dn_integrand(&x, t, k, inv_fact)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        let single = MultiplicityPartition::new(vec![3]).unwrap();
        assert_eq!(jpdf_log(&[0.5], &single).unwrap(), -0.75);
        let ones = MultiplicityPartition::new(vec![1, 1]).unwrap();
        assert_eq!(jpdf_log(&[0.0, 1.0], &ones).unwrap(), -1.0);
        let mixed = MultiplicityPartition::new(vec![2, 1]).unwrap();
        assert_eq!(jpdf_log(&[0.0, 1.0], &mixed).unwrap(), -1.0);
        assert!((jpdf_log(&[0.0, 2.0], &mixed).unwrap() - (4.0 * 2f64.ln() - 4.0)).abs() < 1e-14);
        assert_eq!(jpdf_log(&[0.3, 0.3], &ones).unwrap(), f64::NEG_INFINITY);
        assert!(jpdf_log(&[0.3], &ones).is_err());
        assert!(MultiplicityPartition::new(vec![1, 0]).is_err());
    }

    #[test]
    fn partition_values() {
        assert_eq!(exact_partition(0, 3).unwrap(), Rational::one());
        assert_eq!(exact_partition(1, 1).unwrap(), Rational::one());
        assert_eq!(exact_partition(2, 1).unwrap(), Rational::new(3, 4));
    }

    #[test]
    fn reproducible() {
        let a = mc_dn(2, 1, 0.7, 20_000, 7).unwrap();
        let b = mc_dn(2, 1, 0.7, 20_000, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.mean, mc_dn(2, 1, 0.7, 20_000, 8).unwrap().mean);
    }

    #[test]
    fn independent_of_thread_count() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| mc_partition(2, 1, 30_000, 11).unwrap());
        assert_eq!(serial, mc_partition(2, 1, 30_000, 11).unwrap());
    }

    #[test]
    fn constant_integrand() {
        let e = mc_partition(0, 2, 10_000, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn small_dn() {
        let e = mc_dn(1, 1, 1.0, 200_000, 3).unwrap();
        assert!(e.z_score(1.5).abs() < 3.0, "{e:?}");
    }

    #[test]
    fn too_few_samples() {
        assert!(mc_dn(1, 1, 0.0, 100, 0).is_err());
    }
}
