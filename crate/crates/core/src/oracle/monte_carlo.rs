use super::sampler::{draw_point, MCConfig, SpherePoint};
use super::{OracleEstimate, Uncertainty};
use crate::error::{Error, Result};
use crate::integrals::{sphere_volume, SphereDim};

/// Running mean and sum of squared deviations (Welford).
#[derive(Clone, Copy, Debug, Default)]
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

    /// Pairwise combination of two disjoint sample sets.
    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / total as f64;
        self.mean += delta * weight;
        self.m2 += other.m2 + delta * delta * self.count as f64 * weight;
        self.count = total;
    }
}

/// Monte Carlo estimate of `∫_{S^D} f`: `V_D` times the sample mean, with
/// standard error `V_D s / sqrt(N)`.
pub fn mc_integrate<F>(dim: SphereDim, mut f: F, config: MCConfig) -> Result<OracleEstimate>
where
    F: FnMut(&SpherePoint) -> f64,
{
    let mut out = mc_integrate_many(dim, 1, |p, vals| vals[0] = f(p), config)?;
    Ok(out.pop().expect("one integrand"))
}

/// Estimates `count` integrals from one shared stream of sample points.
/// `f` writes the `count` integrand values at a point into its slice.
///
/// Each chunk of [`super::sampler::CHUNK_SAMPLES`] points is accumulated on
/// its own and the chunk moments are merged in chunk order, so the result
/// does not depend on how chunks are scheduled.
pub fn mc_integrate_many<F>(
    dim: SphereDim,
    count: usize,
    mut f: F,
    config: MCConfig,
) -> Result<Vec<OracleEstimate>>
where
    F: FnMut(&SpherePoint, &mut [f64]),
{
    if config.samples == 0 {
        return Err(Error::Domain("Monte Carlo needs at least one sample".into()));
    }
    let volume = sphere_volume(dim).to_f64()?;
    let mut totals = vec![Moments::default(); count];
    let mut chunk_moments = vec![Moments::default(); count];
    let mut values = vec![0.0; count];
    let mut xs = vec![0.0; dim.d() + 1];
    for chunk in 0..config.chunk_count() {
        let mut rng = config.chunk_rng(chunk);
        chunk_moments.iter_mut().for_each(|m| *m = Moments::default());
        for _ in 0..config.chunk_len(chunk) {
            draw_point(dim, &mut rng, &mut xs);
            let point = SpherePoint::from_cartesian(dim, xs.clone());
            f(&point, &mut values);
            for (m, &v) in chunk_moments.iter_mut().zip(&values) {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        value: v,
                        point: point.xs().to_vec(),
                    });
                }
                m.push(v);
            }
        }
        for (total, m) in totals.iter_mut().zip(&chunk_moments) {
            total.merge(m);
        }
    }
    Ok(totals
        .iter()
        .map(|m| {
            let n = m.count as f64;
            let std_error = if m.count > 1 {
                volume * (m.m2 / (n - 1.0) / n).sqrt()
            } else {
                f64::INFINITY
            };
            OracleEstimate {
                value: volume * m.mean,
                uncertainty: Uncertainty::StdError(std_error),
                samples_or_nodes: m.count,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::sample_uniform;

    #[test]
    fn constant_integrand_is_exact() {
        let dim = SphereDim::new(3).unwrap();
        let est = mc_integrate(dim, |_| 1.0, MCConfig::new(5, 10_000)).unwrap();
        let v3 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!((est.value - v3).abs() <= 4.0 * f64::EPSILON * v3);
        assert_eq!(est.error(), 0.0);
        assert_eq!(est.samples_or_nodes, 10_000);
    }

    #[test]
    fn merge_matches_single_pass() {
        let data: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut single = Moments::default();
        data.iter().for_each(|&x| single.push(x));
        let mut merged = Moments::default();
        for part in data.chunks(77) {
            let mut m = Moments::default();
            part.iter().for_each(|&x| m.push(x));
            merged.merge(&m);
        }
        assert_eq!(single.count, merged.count);
        assert!((single.mean - merged.mean).abs() < 1e-12);
        assert!((single.m2 - merged.m2).abs() < 1e-9 * single.m2);
    }

    #[test]
    fn uses_the_same_points_as_the_sampler() {
        let dim = SphereDim::new(4).unwrap();
        let config = MCConfig::new(11, 70_000);
        let n = config.samples as f64;
        let by_hand: f64 = sample_uniform(dim, config).map(|p| p.xs()[0].powi(2)).sum::<f64>() / n;
        let est = mc_integrate(dim, |p| p.xs()[0].powi(2), config).unwrap();
        let volume = sphere_volume(dim).to_f64().unwrap();
        assert!((est.value / volume - by_hand).abs() < 1e-12);
    }

    #[test]
    fn non_finite_values_abort() {
        let dim = SphereDim::new(2).unwrap();
        let err = mc_integrate(dim, |p| 1.0 / (p.xs()[0] - p.xs()[0]), MCConfig::new(1, 10)).unwrap_err();
        match err {
            Error::NonFinite { point, .. } => assert_eq!(point.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identical_configs_are_bitwise_identical() {
        let dim = SphereDim::new(5).unwrap();
        let f = |p: &SpherePoint| p.mus()[0].powi(3) + p.xs()[2];
        let a = mc_integrate(dim, f, MCConfig::new(3, 100_000)).unwrap();
        let b = mc_integrate(dim, f, MCConfig::new(3, 100_000)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error().to_bits(), b.error().to_bits());
    }
}
