//! Deterministic tensor-product quadrature over spheres.
//!
//! The positive orthant of `S^n` is parametrized by nested angles
//! `theta_1 .. theta_n ∈ [0, π/2]`:
//!
//! ```text
//! x_1     = cos θ_1
//! x_j     = sin θ_1 ⋯ sin θ_{j-1} cos θ_j
//! x_{n+1} = sin θ_1 ⋯ sin θ_n
//! dS^n    = ∏_{i<n} sin^{n-i} θ_i  dθ_1 ⋯ dθ_n
//! ```
//!
//! The other orthants are reached by sign flips of the coordinates, so an
//! integrand that behaves like `|x_j|^a` only ever meets its non-smooth
//! points at the ends of an angle interval.
//!
//! Each angle is substituted as `θ = (π/2) s(u)` with
//! `s(u) = u - sin(2πu) / (2π)` and Gauss-Legendre nodes are placed in
//! `u ∈ [0, 1]`. `s` is entire and `s'(u) = 1 - cos(2πu)` vanishes to second
//! order at both ends, so near an endpoint `θ ~ u^3`: an endpoint factor
//! `θ^p` (with `p > -1`) turns into `u^{3p + 2}`. In particular the factor
//! `mu^{a+1}` left after the measure shift of a mu-power integrand with
//! `a ∈ (-1, 0)` becomes at least `C^2`, and integrands analytic in `θ` stay
//! analytic in `u`.
//!
//! Each estimate is computed with `N` and `2N` nodes per axis; the finer
//! value is reported with the difference as the error bound, floored by a
//! rounding allowance of `64 ε Σ |w f|`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use super::{OracleEstimate, Uncertainty};
use crate::error::{Error, Result};
use crate::integrals::SphereDim;

/// Largest `n` of the `S^n` the tensor rule is built on; `N^n` nodes per
/// orthant. For mu-power integrands this caps `D` at `2 * 4 + 1 = 9`.
pub const MAX_QUAD_N: usize = 4;

/// Largest sphere dimension accepted by [`quad_integrate`].
pub const MAX_QUAD_D: usize = 2 * MAX_QUAD_N + 1;

const ROUNDING_ALLOWANCE: f64 = 64.0 * f64::EPSILON;

/// `s(u) = u - sin(2πu) / (2π)`, by its Taylor series near 0 where the
/// difference cancels.
fn substitution(u: f64) -> f64 {
    if u > 0.125 {
        return u - (TAU * u).sin() / TAU;
    }
    // u - sin(tu)/t = Σ_{k≥1} (-1)^{k+1} t^{2k} u^{2k+1} / (2k+1)!
    let t2u2 = (TAU * u).powi(2);
    let mut term = u * t2u2 / 6.0;
    let mut sum = 0.0f64;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs() {
        sum += term;
        k += 1.0;
        term *= -t2u2 / ((2.0 * k) * (2.0 * k + 1.0));
    }
    sum
}

struct AxisRule {
    cos: Vec<f64>,
    sin: Vec<f64>,
    weights: Vec<f64>,
}

impl AxisRule {
    /// Rule on `[0, π/2]` with the weight multiplied by `sin^jacobian_power`.
    fn new(gauss: &GaussLegendre, jacobian_power: usize) -> Self {
        let mut rule = AxisRule {
            cos: Vec::new(),
            sin: Vec::new(),
            weights: Vec::new(),
        };
        for (x, w) in gauss.iter() {
            let u = 0.5 * (x + 1.0);
            let v = 1.0 - u;
            // (π/2) s'(u) = (π/2)(1 - cos 2πu) = π sin^2(πu)
            let dtheta_du = PI * (PI * u).sin().powi(2);
            let sin = (FRAC_PI_2 * substitution(u)).sin();
            // cos θ = sin((π/2)(1 - s(u))) and 1 - s(u) = s(1 - u), which
            // keeps cos θ accurate near θ = π/2.
            rule.cos.push((FRAC_PI_2 * substitution(v)).sin());
            rule.sin.push(sin);
            rule.weights
                .push(0.5 * w * dtheta_du * sin.powi(jacobian_power as i32));
        }
        rule
    }
}

/// Tensor rule on the positive orthant of `S^n`; for `n = 0` the single
/// point `x_1 = 1` with unit weight.
pub struct OrthantRule {
    n: usize,
    axes: Vec<AxisRule>,
}

impl OrthantRule {
    pub fn new(n: usize, nodes_per_axis: usize) -> Result<Self> {
        if n > MAX_QUAD_N {
            return Err(Error::Domain(format!(
                "quadrature supports S^n with n <= {MAX_QUAD_N} (got n = {n}); use Monte Carlo"
            )));
        }
        if nodes_per_axis < 2 {
            return Err(Error::Domain("quadrature needs at least 2 nodes per axis".into()));
        }
        let gauss = GaussLegendre::new(NonZeroUsize::new(nodes_per_axis).expect("nonzero"));
        let axes = (1..=n).map(|i| AxisRule::new(&gauss, n - i)).collect();
        Ok(Self { n, axes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> u64 {
        self.axes.iter().map(|a| a.weights.len() as u64).product()
    }

    /// Visits every node with its `n + 1` coordinates and weight.
    pub fn for_each(&self, mut visit: impl FnMut(&[f64], f64)) {
        fn recurse(
            axes: &[AxisRule],
            axis: usize,
            prefix_sin: f64,
            weight: f64,
            coords: &mut [f64],
            visit: &mut impl FnMut(&[f64], f64),
        ) {
            if axis == axes.len() {
                coords[axis] = prefix_sin;
                visit(coords, weight);
                return;
            }
            let rule = &axes[axis];
            for k in 0..rule.weights.len() {
                coords[axis] = prefix_sin * rule.cos[k];
                recurse(
                    axes,
                    axis + 1,
                    prefix_sin * rule.sin[k],
                    weight * rule.weights[k],
                    coords,
                    visit,
                );
            }
        }
        let mut coords = vec![0.0; self.n + 1];
        recurse(&self.axes, 0, 1.0, 1.0, &mut coords, &mut visit);
    }
}

/// Neumaier-compensated sum together with the sum of magnitudes.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    compensation: f64,
    abs_sum: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Runs `integrate` on the `N` and `2N` rules and turns the pair into
/// estimates.
fn refine<G>(n: usize, count: usize, nodes: usize, images: u64, mut integrate: G) -> Result<Vec<OracleEstimate>>
where
    G: FnMut(&OrthantRule, &mut [Accumulator]) -> Result<()>,
{
    let coarse_rule = OrthantRule::new(n, nodes)?;
    let fine_rule = OrthantRule::new(n, 2 * nodes)?;
    let mut coarse = vec![Accumulator::default(); count];
    let mut fine = vec![Accumulator::default(); count];
    integrate(&coarse_rule, &mut coarse)?;
    integrate(&fine_rule, &mut fine)?;
    let evaluations = fine_rule.node_count() * images;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            let value = f.value();
            let bound = (c.value() - value).abs().max(ROUNDING_ALLOWANCE * f.abs_sum);
            OracleEstimate {
                value,
                uncertainty: Uncertainty::ErrorBound(bound),
                samples_or_nodes: evaluations,
            }
        })
        .collect())
}

fn non_finite(value: f64, point: &[f64]) -> Error {
    Error::NonFinite {
        value,
        point: point.to_vec(),
    }
}

/// Quadrature estimate of `∫_{S^D} f(mu)` for an integrand of the polar
/// radii only.
///
/// `f` receives `mu_1 .. mu_{n+1}`; for even `D` the last entry is signed
/// and both signs are evaluated. The rotation angles are integrated
/// analytically: the `S^D` measure is `(2π)^{n+ε} ∏_{j ≤ n+ε} mu_j` times
/// the `S^n` measure on the region `mu_1 .. mu_{n+ε} ≥ 0`.
pub fn quad_integrate<F>(dim: SphereDim, mut f: F, nodes_per_axis: usize) -> Result<OracleEstimate>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut out = quad_integrate_many(dim, 1, |mu, vals| vals[0] = f(mu), nodes_per_axis)?;
    Ok(out.pop().expect("one integrand"))
}

/// Batch form of [`quad_integrate`]: `f` writes `count` values per node.
pub fn quad_integrate_many<F>(
    dim: SphereDim,
    count: usize,
    mut f: F,
    nodes_per_axis: usize,
) -> Result<Vec<OracleEstimate>>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if dim.d() > MAX_QUAD_D {
        return Err(Error::Domain(format!(
            "quadrature supports D <= {MAX_QUAD_D} (got D = {}); use Monte Carlo",
            dim.d()
        )));
    }
    let k = dim.killing_count();
    let angle_factor = TAU.powi(k as i32);
    let mirrored = dim.eps() == 0;
    let images = if mirrored { 2 } else { 1 };
    let mut values = vec![0.0; count];
    refine(dim.n(), count, nodes_per_axis, images, |rule, acc| {
        let mut mus = vec![0.0; dim.mu_count()];
        let mut result = Ok(());
        rule.for_each(|coords, w| {
            if result.is_err() {
                return;
            }
            mus.copy_from_slice(coords);
            let weight = angle_factor * w * mus[..k].iter().product::<f64>();
            for sign in 0..images {
                if sign == 1 {
                    let last = mus.len() - 1;
                    mus[last] = -mus[last];
                }
                f(&mus, &mut values);
                for (a, &v) in acc.iter_mut().zip(&values) {
                    if !v.is_finite() {
                        result = Err(non_finite(v, &mus));
                        return;
                    }
                    a.add(weight * v);
                }
            }
        });
        result
    })
}

/// Quadrature estimate of `∫_{S^n} f(x)` for an integrand of the cartesian
/// coordinates, summing over all `2^{n+1}` sign images of each orthant node.
pub fn quad_integrate_sphere<F>(n: usize, mut f: F, nodes_per_axis: usize) -> Result<OracleEstimate>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut out = quad_integrate_sphere_many(n, 1, |x, vals| vals[0] = f(x), nodes_per_axis)?;
    Ok(out.pop().expect("one integrand"))
}

/// Batch form of [`quad_integrate_sphere`].
pub fn quad_integrate_sphere_many<F>(
    n: usize,
    count: usize,
    mut f: F,
    nodes_per_axis: usize,
) -> Result<Vec<OracleEstimate>>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let images = 1u64 << (n + 1);
    let mut values = vec![0.0; count];
    refine(n, count, nodes_per_axis, images, |rule, acc| {
        let mut xs = vec![0.0; n + 1];
        let mut result = Ok(());
        rule.for_each(|coords, w| {
            if result.is_err() {
                return;
            }
            for signs in 0..images {
                for (j, (x, &c)) in xs.iter_mut().zip(coords).enumerate() {
                    *x = if signs >> j & 1 == 1 { -c } else { c };
                }
                f(&xs, &mut values);
                for (a, &v) in acc.iter_mut().zip(&values) {
                    if !v.is_finite() {
                        result = Err(non_finite(v, &xs));
                        return;
                    }
                    a.add(w * v);
                }
            }
        });
        result
    })
}

#[cfg(test)]
mod tests {
    use super::*;


    fn dim(d: usize) -> SphereDim {
        SphereDim::new(d).unwrap()
    }

    fn within(est: &OracleEstimate, reference: f64, rel: f64) -> bool {
        ((est.value - reference) / reference).abs() <= rel
    }

    #[test]
    fn orthant_points_lie_on_the_sphere() {
        for n in 0..=MAX_QUAD_N {
            let rule = OrthantRule::new(n, 5).unwrap();
            let mut total = 0.0;
            rule.for_each(|x, w| {
                let norm: f64 = x.iter().map(|v| v * v).sum();
                assert!((norm - 1.0).abs() < 1e-14);
                assert!(x.iter().all(|&v| v > 0.0));
                total += w;
            });
            assert_eq!(rule.node_count(), 5u64.pow(n as u32));
            // orthant area: V_n / 2^{n+1}
            let area = crate::integrals::sphere_volume_float(dim(n.max(1))) / 2f64.powi(n as i32 + 1);
            if n >= 1 {
                let orthant = OrthantRule::new(n, 32).unwrap();
                let mut t = 0.0;
                orthant.for_each(|_, w| t += w);
                assert!((t - area).abs() < 1e-12 * area, "n = {n}");
            } else {
                assert_eq!(total, 1.0);
            }
        }
    }

    #[test]
    fn constant_on_three_sphere() {
        let est = quad_integrate(dim(3), |_| 1.0, 16).unwrap();
        assert!(within(&est, 2.0 * PI * PI, 1e-10));
    }

    #[test]
    fn mu_squared_on_two_sphere() {
        let est = quad_integrate(dim(2), |mu| mu[0] * mu[0], 16).unwrap();
        assert!(within(&est, 8.0 * PI / 3.0, 1e-10));
    }

    #[test]
    fn inverse_mu_on_two_sphere() {
        // 2π^{3/2} Γ(1/2) / Γ(1) = 2π^2
        let est = quad_integrate(dim(2), |mu| 1.0 / mu[0], 16).unwrap();
        assert!(within(&est, 2.0 * PI * PI, 1e-10));
    }

    #[test]
    fn negative_fractional_power() {
        // mu^{-1/2} on S^2: 2π^{3/2} Γ(3/4) / Γ(5/4)
        let reference = crate::integrals::mu_power_float(dim(2), &[-0.5]).unwrap();
        let est = quad_integrate(dim(2), |mu| mu[0].powf(-0.5), 32).unwrap();
        assert!(within(&est, reference, 1e-10), "{} vs {reference}", est.value);
        assert!((est.value - reference).abs() <= est.error());
    }

    #[test]
    fn circle_has_no_free_angles() {
        let est = quad_integrate(dim(1), |mu| mu[0].powi(7) + 2.0, 4).unwrap();
        assert!(within(&est, 3.0 * TAU, 1e-15));
    }

    #[test]
    fn even_dimension_sees_both_signs() {
        // ∫_{S^2} x_3 = 0 but ∫_{S^2} |x_3| = 2π
        let odd = quad_integrate(dim(2), |mu| mu[1], 12).unwrap();
        assert!(odd.value.abs() < 1e-14);
        let abs = quad_integrate(dim(2), |mu| mu[1].abs(), 12).unwrap();
        assert!(within(&abs, TAU, 1e-12));
    }

    #[test]
    fn cartesian_monomials() {
        let est = quad_integrate_sphere(2, |x| x[0] * x[0] * x[1] * x[1], 16).unwrap();
        assert!(within(&est, 4.0 * PI / 15.0, 1e-12));
        let odd = quad_integrate_sphere(2, |x| x[0] * x[1] * x[1], 12).unwrap();
        assert!(odd.value.abs() <= odd.error());
        let zero_sphere = quad_integrate_sphere(0, |x| x[0] * x[0] + x[0], 4).unwrap();
        assert_eq!(zero_sphere.value, 2.0);
    }

    #[test]
    fn rejects_out_of_range_requests() {
        assert!(matches!(quad_integrate(dim(10), |_| 1.0, 8), Err(Error::Domain(_))));
        assert!(matches!(quad_integrate(dim(3), |_| 1.0, 1), Err(Error::Domain(_))));
        assert!(matches!(
            quad_integrate(dim(3), |mu| 1.0 / (mu[0] - mu[0]), 4),
            Err(Error::NonFinite { .. })
        ));
    }
}
