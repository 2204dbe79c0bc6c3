//! The rigidly rotating conformal fluid on `S^D`.
//!
//! With angular velocities `omega_i`, one per rotation angle, the fluid has
//! `v^2 = Σ mu_i^2 omega_i^2` and Lorentz factor `gamma = (1 - v^2)^{-1/2}`.
//! The integral of `gamma^{D+1}` over the sphere has the closed form
//! `V_D / ∏ (1 - omega_j^2)`. [`fluid_series`] re-derives it from the
//! binomial expansion of `(1 - v^2)^{-(D+1)/2}` integrated term by term.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_arith::{gamma_half, pochhammer, HalfInteger, PiRational};
use crate::integrals::{sphere_volume, SphereDim};

/// Above this `max omega_j^2` the series evaluator refuses to run.
pub const SERIES_OMEGA_SQ_LIMIT: f64 = 0.99;

#[derive(Clone, Debug, PartialEq)]
pub struct FluidParams {
    dim: SphereDim,
    omegas: Vec<f64>,
}

impl FluidParams {
    /// Requires one finite `omega_i` per rotation angle with `omega_i^2 < 1`.
    pub fn new(dim: SphereDim, omegas: Vec<f64>) -> Result<Self> {
        if omegas.len() != dim.killing_count() {
            return Err(Error::LengthMismatch {
                what: "omega vector",
                expected: dim.killing_count(),
                got: omegas.len(),
            });
        }
        for (i, w) in omegas.iter().enumerate() {
            if !w.is_finite() || w * w >= 1.0 {
                return Err(Error::Domain(format!(
                    "omega #{i} = {w}: need omega^2 < 1, the integral diverges otherwise"
                )));
            }
        }
        Ok(Self { dim, omegas })
    }

    pub fn dim(&self) -> SphereDim {
        self.dim
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn max_omega_sq(&self) -> f64 {
        self.omegas.iter().map(|w| w * w).fold(0.0, f64::max)
    }

    /// `∏ (1 - omega_j^2)`.
    pub fn divergence_factor(&self) -> f64 {
        self.omegas.iter().map(|w| 1.0 - w * w).product()
    }
}

/// `gamma = 1 / sqrt(1 - Σ mu_i^2 omega_i^2)` at a point given by its polar
/// radii. `mus` holds either the `n + ε` rotated radii or all `n + 1`.
pub fn gamma_factor(params: &FluidParams, mus: &[f64]) -> Result<f64> {
    let k = params.dim.killing_count();
    if mus.len() < k || mus.len() > params.dim.mu_count() {
        return Err(Error::LengthMismatch {
            what: "mu vector",
            expected: k,
            got: mus.len(),
        });
    }
    let v_sq: f64 = mus
        .iter()
        .zip(&params.omegas)
        .map(|(mu, w)| mu * mu * w * w)
        .sum();
    if !(v_sq < 1.0) {
        return Err(Error::Domain(format!(
            "v^2 = {v_sq} >= 1; the point must lie on the unit sphere"
        )));
    }
    Ok(1.0 / (1.0 - v_sq).sqrt())
}

/// Closed form of `∫_{S^D} gamma^{D+1}` with its exact prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct FluidClosed {
    /// `V_D = 2 π^{(D+1)/2} / Γ((D+1)/2)`.
    pub volume: PiRational,
    /// `∏ (1 - omega_j^2)`.
    pub divergence_factor: f64,
    pub value: f64,
}

pub fn fluid_closed(params: &FluidParams) -> Result<FluidClosed> {
    let volume = sphere_volume(params.dim);
    let divergence_factor = params.divergence_factor();
    let value = volume.to_f64()? / divergence_factor;
    Ok(FluidClosed {
        volume,
        divergence_factor,
        value,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    /// Number of multi-indices summed.
    pub terms_used: u64,
    /// Absolute contribution of the outermost shell `Σ k_j = truncation_order`.
    pub last_term_magnitude: f64,
    pub truncation_order: u32,
    /// Upper bound on the omitted tail, `V_D Σ_{k > K} C(k+L-1, L-1) w^k`
    /// with `w = max omega_j^2` and `L` the number of angles.
    pub tail_bound: f64,
}

/// Calls `visit` with every composition of `total` into `parts` non-negative
/// integers, in lexicographic order.
fn for_each_composition(parts: usize, total: u32, visit: &mut impl FnMut(&[u32])) {
    fn recurse(slots: &mut [u32], at: usize, remaining: u32, visit: &mut impl FnMut(&[u32])) {
        if at + 1 == slots.len() {
            slots[at] = remaining;
            visit(slots);
            return;
        }
        for k in 0..=remaining {
            slots[at] = k;
            recurse(slots, at + 1, remaining - k, visit);
        }
    }
    let mut slots = vec![0; parts];
    recurse(&mut slots, 0, total, visit);
}

/// Exact term-integral pieces shared by every multi-index of a shell.
struct ShellCoefficients {
    a: HalfInteger,
    volume_prefactor: PiRational,
}

impl ShellCoefficients {
    fn new(dim: SphereDim) -> Self {
        Self {
            a: HalfInteger::from_twice(dim.d() as i64 + 1),
            volume_prefactor: PiRational::new(BigRational::from_integer(2.into()), dim.d() as i64 + 1),
        }
    }

    /// `((D+1)/2)_k` and `2 π^{(D+1)/2} / Γ((D+1)/2 + k)`.
    fn shell(&self, k: u32) -> (BigRational, PiRational) {
        let gamma = gamma_half(self.a.add_integer(i64::from(k))).expect("(D+1)/2 + k > 0");
        (pochhammer(self.a, k), &self.volume_prefactor / &gamma)
    }
}

/// Partial sum of the multinomial expansion of `∫ (1 - v^2)^{-(D+1)/2}`
/// over all multi-indices with `Σ k_j ≤ truncation_order`.
///
/// The term of a multi-index is
///
/// ```text
/// ((D+1)/2)_k ∏ omega_j^{2k_j} / k_j!  ×  ∫_{S^D} ∏ mu_j^{2k_j}
/// ```
///
/// and the `∏ k_j!` of the expansion cancels the one in the term integral,
/// leaving the simplified form
///
/// ```text
/// ((D+1)/2)_k 2 π^{(D+1)/2} / Γ((D+1)/2 + k)  ×  ∏ omega_j^{2k_j}
/// ```
///
/// which is what is summed here: the shell coefficient is computed exactly
/// from the Pochhammer symbol and the Gamma value and rounded to `f64` once
/// per shell, then multiplied by the sum of the `omega` monomials of that
/// shell. Within a shell, multi-indices are summed in lexicographic order;
/// shells are added in increasing `k`. The reduction order is fixed, so
/// results are reproducible bit for bit.
pub fn fluid_series(params: &FluidParams, truncation_order: u32) -> Result<SeriesResult> {
    let max_omega_sq = params.max_omega_sq();
    if max_omega_sq > SERIES_OMEGA_SQ_LIMIT {
        return Err(Error::SeriesRefused {
            max_omega_sq,
            limit: SERIES_OMEGA_SQ_LIMIT,
        });
    }
    let parts = params.dim.killing_count();
    let omega_sq: Vec<f64> = params.omegas.iter().map(|w| w * w).collect();
    let coeffs = ShellCoefficients::new(params.dim);

    let mut value = 0.0;
    let mut terms_used = 0u64;
    let mut last_shell = 0.0;
    for k in 0..=truncation_order {
        let (poch, integral_prefactor) = coeffs.shell(k);
        let coefficient = integral_prefactor.scale(&poch).to_f64()?;
        let mut monomials = 0.0;
        for_each_composition(parts, k, &mut |ks| {
            monomials += ks
                .iter()
                .zip(&omega_sq)
                .map(|(&kj, w2)| w2.powi(kj as i32))
                .product::<f64>();
            terms_used += 1;
        });
        let shell_sum = coefficient * monomials;
        value += shell_sum;
        last_shell = shell_sum.abs();
    }

    let volume = sphere_volume(params.dim).to_f64()?;
    Ok(SeriesResult {
        value,
        terms_used,
        last_term_magnitude: last_shell,
        truncation_order,
        tail_bound: volume * shell_count_tail(parts, max_omega_sq, truncation_order),
    })
}

/// `Σ_{k > order} C(k + parts - 1, parts - 1) w^k`, summed until the terms
/// stop mattering.
fn shell_count_tail(parts: usize, w: f64, order: u32) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let binom = |k: u32| -> f64 {
        (1..parts).fold(1.0, |acc, j| acc * (f64::from(k) + j as f64) / j as f64)
    };
    let mut tail = 0.0;
    let mut k = order + 1;
    loop {
        let term = binom(k) * w.powi(k as i32);
        tail += term;
        if term <= 1e-18 * tail || k > order + 100_000 {
            break;
        }
        k += 1;
    }
    tail
}

/// Raises the truncation order until the outermost shell falls below
/// `rel_tol` times the running value.
pub fn fluid_series_converged(
    params: &FluidParams,
    rel_tol: f64,
    max_order: u32,
) -> Result<SeriesResult> {
    let mut order = 8;
    loop {
        let result = fluid_series(params, order)?;
        if result.last_term_magnitude < rel_tol * result.value || order >= max_order {
            return Ok(result);
        }
        order = (order * 2).min(max_order);
    }
}
