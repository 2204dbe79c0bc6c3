use super::{check_len, exp_checked, ln_gamma, ExponentVector, IntegralValue};
use crate::error::{Error, Result};
use crate::exact_arith::{gamma_half, HalfInteger, PiRational};

fn check_non_negative<T: PartialOrd + Default + std::fmt::Debug>(alphas: &[T]) -> Result<()> {
    match alphas.iter().position(|a| !(*a >= T::default())) {
        Some(i) => Err(Error::Domain(format!(
            "Dirichlet exponent #{i} is {:?}; exponents must be non-negative",
            alphas[i]
        ))),
        None => Ok(()),
    }
}

/// `∫_{S^n} ∏ x_j^{a_j}` for non-negative integer exponents: zero when any
/// exponent is odd, the Dirichlet closed form otherwise.
pub fn dirichlet_signed(n: usize, alphas: &ExponentVector) -> Result<PiRational> {
    check_len("Dirichlet exponent vector", n + 1, alphas.len())?;
    let alphas = alphas.require_integers()?;
    check_non_negative(&alphas)?;
    if alphas.iter().any(|a| a % 2 != 0) {
        return Ok(PiRational::zero());
    }
    dirichlet_abs_exact(n, &alphas)
}

/// `∫_{S^n} ∏ |x_j|^{a_j}`, exact when every exponent is an integer.
pub fn dirichlet_abs(n: usize, alphas: &ExponentVector) -> Result<IntegralValue> {
    match alphas.as_integers() {
        Some(ints) => dirichlet_abs_exact(n, &ints).map(IntegralValue::Exact),
        None => dirichlet_abs_float(n, &alphas.to_f64s()).map(IntegralValue::Float),
    }
}

pub fn dirichlet_abs_exact(n: usize, alphas: &[i64]) -> Result<PiRational> {
    check_len("Dirichlet exponent vector", n + 1, alphas.len())?;
    check_non_negative(alphas)?;
    let mut numer = PiRational::from_integer(2);
    for &a in alphas {
        numer = &numer * &gamma_half(HalfInteger::from_twice(1 + a))?;
    }
    let total: i64 = alphas.iter().sum();
    let denom = gamma_half(HalfInteger::from_twice(n as i64 + 1 + total))?;
    Ok(&numer / &denom)
}

/// Log-Gamma evaluation of the Dirichlet closed form for real exponents.
pub fn dirichlet_abs_float(n: usize, alphas: &[f64]) -> Result<f64> {
    check_len("Dirichlet exponent vector", n + 1, alphas.len())?;
    if let Some(i) = alphas.iter().position(|a| !a.is_finite()) {
        return Err(Error::Domain(format!("Dirichlet exponent #{i} is not finite")));
    }
    check_non_negative(alphas)?;
    let total: f64 = alphas.iter().sum();
    let log_numer: f64 = alphas.iter().map(|a| ln_gamma(0.5 * (1.0 + a))).sum();
    exp_checked(std::f64::consts::LN_2 + log_numer - ln_gamma(0.5 * (n as f64 + 1.0 + total)))
}
