use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::integrals::SphereDim;

/// Samples per independent ChaCha stream. Chunk `c` of a run draws from
/// stream `c` of the generator seeded with [`MCConfig::seed`].
pub const CHUNK_SAMPLES: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MCConfig {
    pub seed: u64,
    pub samples: u64,
}

impl MCConfig {
    pub fn new(seed: u64, samples: u64) -> Self {
        Self { seed, samples }
    }

    pub(crate) fn chunk_count(&self) -> u64 {
        self.samples.div_ceil(CHUNK_SAMPLES)
    }

    pub(crate) fn chunk_len(&self, chunk: u64) -> u64 {
        (self.samples - chunk * CHUNK_SAMPLES).min(CHUNK_SAMPLES)
    }

    pub(crate) fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk);
        rng
    }
}

/// A point of `S^D` in cartesian coordinates together with its polar chart.
///
/// For `i ≤ n + ε`, `(X_{2i-1}, X_{2i}) = (mu_i cos phi_i, mu_i sin phi_i)`
/// with `mu_i ≥ 0` and `phi_i ∈ [0, 2π)`. For even `D` the last radius is
/// the signed coordinate `mu_{n+1} = X_{D+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint {
    xs: Vec<f64>,
    mus: Vec<f64>,
    phis: Vec<f64>,
}

impl SpherePoint {
    pub fn from_cartesian(dim: SphereDim, xs: Vec<f64>) -> Self {
        assert_eq!(xs.len(), dim.d() + 1, "cartesian point needs D+1 coordinates");
        let k = dim.killing_count();
        let mut mus = Vec::with_capacity(dim.mu_count());
        let mut phis = Vec::with_capacity(k);
        for pair in xs.chunks_exact(2) {
            mus.push(pair[0].hypot(pair[1]));
            phis.push(pair[1].atan2(pair[0]).rem_euclid(TAU));
        }
        if dim.eps() == 0 {
            mus.push(xs[dim.d()]);
        }
        Self { xs, mus, phis }
    }

    /// Cartesian coordinates rebuilt from the `(mu, phi)` chart.
    pub fn to_cartesian(&self) -> Vec<f64> {
        let mut xs = Vec::with_capacity(self.xs.len());
        for (mu, phi) in self.mus.iter().zip(&self.phis) {
            let (s, c) = phi.sin_cos();
            xs.push(mu * c);
            xs.push(mu * s);
        }
        if self.mus.len() > self.phis.len() {
            xs.push(self.mus[self.phis.len()]);
        }
        xs
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }
}

pub(crate) fn draw_point(dim: SphereDim, rng: &mut ChaCha8Rng, buf: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for x in buf.iter_mut() {
            *x = StandardNormal.sample(rng);
            norm_sq += *x * *x;
        }
        // The Gaussian vector is zero with probability zero; redraw if it is.
        if norm_sq > 0.0 {
            let inv = norm_sq.sqrt().recip();
            buf.iter_mut().for_each(|x| *x *= inv);
            debug_assert_eq!(buf.len(), dim.d() + 1);
            return;
        }
    }
}

/// Stream of i.i.d. uniform points on `S^D`: standard Gaussian vectors in
/// `R^(D+1)`, normalized.
pub struct UniformSampler {
    dim: SphereDim,
    config: MCConfig,
    chunk: u64,
    left_in_chunk: u64,
    rng: ChaCha8Rng,
}

impl Iterator for UniformSampler {
    type Item = SpherePoint;

    fn next(&mut self) -> Option<SpherePoint> {
        if self.left_in_chunk == 0 {
            self.chunk += 1;
            if self.chunk >= self.config.chunk_count() {
                return None;
            }
            self.rng = self.config.chunk_rng(self.chunk);
            self.left_in_chunk = self.config.chunk_len(self.chunk);
        }
        self.left_in_chunk -= 1;
        let mut xs = vec![0.0; self.dim.d() + 1];
        draw_point(self.dim, &mut self.rng, &mut xs);
        Some(SpherePoint::from_cartesian(self.dim, xs))
    }
}

pub fn sample_uniform(dim: SphereDim, config: MCConfig) -> UniformSampler {
    UniformSampler {
        dim,
        config,
        chunk: 0,
        left_in_chunk: if config.samples == 0 { 0 } else { config.chunk_len(0) },
        rng: config.chunk_rng(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_round_trip_and_constraint() {
        for d in 1..8 {
            let dim = SphereDim::new(d).unwrap();
            for p in sample_uniform(dim, MCConfig::new(7, 2000)) {
                let norm: f64 = p.xs().iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12);
                let mu_norm: f64 = p.mus().iter().map(|m| m * m).sum();
                assert!((mu_norm - 1.0).abs() < 1e-12);
                assert_eq!(p.mus().len(), dim.mu_count());
                assert_eq!(p.phis().len(), dim.killing_count());
                assert!(p.mus()[..dim.killing_count()].iter().all(|&m| m >= 0.0));
                assert!(p.phis().iter().all(|&f| (0.0..TAU).contains(&f)));
                for (a, b) in p.to_cartesian().iter().zip(p.xs()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sample_counts_cross_chunks() {
        let dim = SphereDim::new(2).unwrap();
        for n in [0, 1, CHUNK_SAMPLES - 1, CHUNK_SAMPLES, CHUNK_SAMPLES + 3] {
            assert_eq!(sample_uniform(dim, MCConfig::new(1, n)).count() as u64, n);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let dim = SphereDim::new(3).unwrap();
        let a: Vec<_> = sample_uniform(dim, MCConfig::new(99, 500)).collect();
        let b: Vec<_> = sample_uniform(dim, MCConfig::new(99, 500)).collect();
        assert_eq!(a, b);
        let c: Vec<_> = sample_uniform(dim, MCConfig::new(100, 500)).collect();
        assert_ne!(a, c);
    }
}
