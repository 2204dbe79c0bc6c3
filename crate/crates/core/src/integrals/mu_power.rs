use num_rational::BigRational;

use super::dirichlet::{dirichlet_abs_exact, dirichlet_abs_float};
use super::{check_len, exp_checked, ln_gamma, ExponentVector, IntegralValue, SphereDim};
use crate::error::{Error, Result};
use crate::exact_arith::{factorial, gamma_half, HalfInteger, PiRational};

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Volume of the unit `S^D`, `2 π^{(D+1)/2} / Γ((D+1)/2)`.
pub fn sphere_volume(dim: SphereDim) -> PiRational {
    let numer = PiRational::new(BigRational::from_integer(2.into()), dim.d() as i64 + 1);
    let denom = gamma_half(HalfInteger::from_twice(dim.d() as i64 + 1))
        .expect("(D+1)/2 is positive");
    &numer / &denom
}

pub fn sphere_volume_float(dim: SphereDim) -> f64 {
    let half = 0.5 * (dim.d() as f64 + 1.0);
    (std::f64::consts::LN_2 + half * LN_PI - ln_gamma(half)).exp()
}

fn check_mu_exponents(dim: SphereDim, alphas: &[f64]) -> Result<()> {
    check_len("mu exponent vector", dim.killing_count(), alphas.len())?;
    for (i, &a) in alphas.iter().enumerate() {
        if !(a >= -1.0) || !a.is_finite() {
            return Err(Error::Domain(format!(
                "mu exponent #{i} is {a}; the integral needs every exponent >= -1"
            )));
        }
    }
    Ok(())
}

fn check_mu_integers(dim: SphereDim, alphas: &[i64]) -> Result<()> {
    let as_f64: Vec<f64> = alphas.iter().map(|&a| a as f64).collect();
    check_mu_exponents(dim, &as_f64)
}

/// `∫_{S^D} ∏_{j ≤ n+ε} mu_j^{a_j}`, exact when every exponent is an integer.
pub fn mu_power_integral(dim: SphereDim, alphas: &ExponentVector) -> Result<IntegralValue> {
    match alphas.as_integers() {
        Some(ints) => mu_power_exact(dim, &ints).map(IntegralValue::Exact),
        None => mu_power_float(dim, &alphas.to_f64s()).map(IntegralValue::Float),
    }
}

/// Exact path: every Gamma argument is then an integer or a half-integer.
pub fn mu_power_exact(dim: SphereDim, alphas: &[i64]) -> Result<PiRational> {
    check_mu_integers(dim, alphas)?;
    let mut numer = PiRational::new(BigRational::from_integer(2.into()), dim.d() as i64 + 1);
    for &a in alphas {
        numer = &numer * &gamma_half(HalfInteger::from_twice(2 + a))?;
    }
    let total: i64 = alphas.iter().sum();
    let denom = gamma_half(HalfInteger::from_twice(dim.d() as i64 + 1 + total))?;
    Ok(&numer / &denom)
}

pub fn mu_power_float(dim: SphereDim, alphas: &[f64]) -> Result<f64> {
    check_mu_exponents(dim, alphas)?;
    let half = 0.5 * (dim.d() as f64 + 1.0);
    let total: f64 = alphas.iter().sum();
    let log_numer: f64 = alphas.iter().map(|a| ln_gamma(1.0 + 0.5 * a)).sum();
    exp_checked(std::f64::consts::LN_2 + half * LN_PI + log_numer - ln_gamma(half + 0.5 * total))
}

/// Right-hand side of the reduction of the `S^D` integral to one over the
/// `S^n` spanned by the polar radii:
///
/// ```text
/// ∫_{S^D} ∏ mu_j^{a_j} = π^{n+ε} ∫_{S^n} ∏_{j ≤ n+ε} |mu_j|^{a_j + 1}
/// ```
///
/// The `S^n` integral is the Dirichlet integral with exponents
/// `(a_1 + 1, .., a_{n+ε} + 1)`, padded with a zero for `mu_{n+1}` when `D`
/// is even so that it has `n + 1` entries.
pub fn reduction_rhs(dim: SphereDim, alphas: &ExponentVector) -> Result<IntegralValue> {
    let pi_power = PiRational::pi_power(2 * dim.killing_count() as i64);
    match alphas.as_integers() {
        Some(ints) => {
            check_mu_integers(dim, &ints)?;
            let mut shifted: Vec<i64> = ints.iter().map(|a| a + 1).collect();
            shifted.resize(dim.mu_count(), 0);
            let sn = dirichlet_abs_exact(dim.n(), &shifted)?;
            Ok(IntegralValue::Exact(&pi_power * &sn))
        }
        None => {
            let reals = alphas.to_f64s();
            check_mu_exponents(dim, &reals)?;
            let mut shifted: Vec<f64> = reals.iter().map(|a| a + 1.0).collect();
            shifted.resize(dim.mu_count(), 0.0);
            let sn = dirichlet_abs_float(dim.n(), &shifted)?;
            Ok(IntegralValue::Float(pi_power.to_f64()? * sn))
        }
    }
}

/// `∫_{S^D} ∏ mu_j^{2 k_j} = 2 π^{(D+1)/2} ∏ k_j! / Γ((D+1)/2 + k)` with
/// `k = Σ k_j`, evaluated with factorials rather than through the general
/// Gamma-product form.
pub fn term_integral(dim: SphereDim, ks: &[u32]) -> Result<PiRational> {
    check_len("k vector", dim.killing_count(), ks.len())?;
    let factorials = ks
        .iter()
        .fold(num_bigint::BigInt::from(2), |acc, &k| acc * factorial(u64::from(k)));
    let total: i64 = ks.iter().map(|&k| i64::from(k)).sum();
    let numer = PiRational::new(BigRational::from_integer(factorials), dim.d() as i64 + 1);
    let denom = gamma_half(HalfInteger::from_twice(dim.d() as i64 + 1).add_integer(total))?;
    Ok(&numer / &denom)
}
