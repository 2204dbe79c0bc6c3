//! Closed-form sphere integrals.
//!
//! Two families are covered. The Dirichlet integral of a cartesian monomial
//! over `S^n`:
//!
//! ```text
//! ∫_{S^n} ∏ |x_j|^{a_j} = 2 ∏ Γ((1 + a_j)/2) / Γ((n + 1 + Σ a_j)/2)
//! ```
//!
//! and the integral over `S^D`, `D = 2n + ε`, of a product of powers of the
//! polar radii `mu_1 .. mu_{n+ε}`, which do not depend on the `n + ε`
//! rotation angles:
//!
//! ```text
//! ∫_{S^D} ∏ mu_j^{a_j} = 2 π^{(D+1)/2} ∏ Γ(1 + a_j/2) / Γ((D + 1 + Σ a_j)/2),   a_j ≥ -1
//! ```
//!
//! Integer exponents are evaluated exactly as [`PiRational`]; any real
//! exponent switches to a log-Gamma floating path.

mod dirichlet;
mod mu_power;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact_arith::PiRational;

pub use dirichlet::{dirichlet_abs, dirichlet_abs_exact, dirichlet_abs_float, dirichlet_signed};
pub use mu_power::{
    mu_power_exact, mu_power_float, mu_power_integral, reduction_rhs, sphere_volume,
    sphere_volume_float, term_integral,
};

/// Dimension bookkeeping for `S^D` with `D = 2n + ε`, `ε ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SphereDim {
    d: usize,
}

impl SphereDim {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("sphere dimension D must be at least 1".into()));
        }
        Ok(Self { d })
    }

    pub fn d(self) -> usize {
        self.d
    }

    pub fn n(self) -> usize {
        self.d / 2
    }

    pub fn eps(self) -> usize {
        self.d % 2
    }

    /// Number of rotation angles `phi_i`, `n + ε = ⌊(D+1)/2⌋`; also the
    /// number of exponents the mu-power integral takes.
    pub fn killing_count(self) -> usize {
        self.n() + self.eps()
    }

    /// Number of polar radii `mu_i`, `n + 1`.
    pub fn mu_count(self) -> usize {
        self.n() + 1
    }
}

impl fmt::Display for SphereDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{}", self.d)
    }
}

/// An exponent that is either an exact integer or a real number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Int(i64),
    Real(f64),
}

impl Exponent {
    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Int(k) => k as f64,
            Exponent::Real(x) => x,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Int(k) => write!(f, "{k}"),
            Exponent::Real(x) => write!(f, "{x:?}"),
        }
    }
}

/// `"2"` parses as an exact integer, `"2.0"` and `"0.5"` as reals.
impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(k) = s.parse::<i64>() {
            return Ok(Exponent::Int(k));
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Exponent::Real(x)),
            _ => Err(Error::Parse(format!("invalid exponent '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExponentVector(Vec<Exponent>);

impl ExponentVector {
    pub fn new(exponents: Vec<Exponent>) -> Self {
        Self(exponents)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().copied().map(Exponent::Int).collect())
    }

    pub fn from_reals(values: &[f64]) -> Self {
        Self(values.iter().copied().map(Exponent::Real).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Exponent] {
        &self.0
    }

    /// The integer exponents, if every entry is an exact integer.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|e| match e {
                Exponent::Int(k) => Some(*k),
                Exponent::Real(_) => None,
            })
            .collect()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(|e| e.to_f64()).collect()
    }

    pub(crate) fn require_integers(&self) -> Result<Vec<i64>> {
        self.0
            .iter()
            .enumerate()
            .map(|(index, e)| match e {
                Exponent::Int(k) => Ok(*k),
                Exponent::Real(x) => Err(Error::NotInteger {
                    index,
                    value: format!("{x:?}"),
                }),
            })
            .collect()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Comma-separated list, e.g. `"2,0,0.5"`.
impl FromStr for ExponentVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::default());
        }
        s.split(',').map(str::parse).collect::<Result<_>>().map(Self)
    }
}

impl From<Vec<Exponent>> for ExponentVector {
    fn from(v: Vec<Exponent>) -> Self {
        Self(v)
    }
}

/// Result of an evaluator that picks the exact path when it can.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegralValue {
    Exact(PiRational),
    Float(f64),
}

impl IntegralValue {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            IntegralValue::Exact(v) => v.to_f64(),
            IntegralValue::Float(x) => Ok(*x),
        }
    }

    pub fn exact(&self) -> Option<&PiRational> {
        match self {
            IntegralValue::Exact(v) => Some(v),
            IntegralValue::Float(_) => None,
        }
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

/// `exp(log_value)` with overflow and total underflow reported as range errors.
pub(crate) fn exp_checked(log_value: f64) -> Result<f64> {
    let value = log_value.exp();
    if !value.is_finite() {
        return Err(Error::Range(format!("e^{log_value} overflows f64")));
    }
    if value < f64::MIN_POSITIVE {
        return Err(Error::Range(format!("e^{log_value} underflows f64")));
    }
    Ok(value)
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_bookkeeping() {
        for d in 1..20 {
            let dim = SphereDim::new(d).unwrap();
            assert_eq!(2 * dim.n() + dim.eps(), d);
            assert_eq!(dim.killing_count(), d.div_ceil(2));
            assert_eq!(dim.mu_count(), dim.n() + 1);
        }
        assert!(SphereDim::new(0).is_err());
    }

    #[test]
    fn exponent_parsing() {
        let v: ExponentVector = "2, -1,0.5,2.0".parse().unwrap();
        assert_eq!(
            v.as_slice(),
            &[
                Exponent::Int(2),
                Exponent::Int(-1),
                Exponent::Real(0.5),
                Exponent::Real(2.0)
            ]
        );
        assert_eq!(v.as_integers(), None);
        assert_eq!("3,4".parse::<ExponentVector>().unwrap().as_integers(), Some(vec![3, 4]));
        assert!("1,x".parse::<ExponentVector>().is_err());
        assert!("inf".parse::<Exponent>().is_err());
    }
}
