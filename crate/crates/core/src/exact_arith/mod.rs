//! Exact arithmetic on `q * pi^(m/2)` and exact Gamma values at positive
//! integers and half-integers.

mod pi_rational;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

pub(crate) use pi_rational::parse_rational;
pub use pi_rational::PiRational;

/// A number `a` with `2a` an integer, stored as `2a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice_value: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice_value: i64) -> Self {
        Self { twice_value }
    }

    pub const fn from_integer(value: i64) -> Self {
        Self {
            twice_value: 2 * value,
        }
    }

    pub const fn twice_value(self) -> i64 {
        self.twice_value
    }

    pub const fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    pub const fn is_positive(self) -> bool {
        self.twice_value > 0
    }

    /// `self + k` for an integer `k`.
    pub const fn add_integer(self, k: i64) -> Self {
        Self {
            twice_value: self.twice_value + 2 * k,
        }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.twice_value.into(), 2.into())
    }

    pub fn to_f64(self) -> f64 {
        self.twice_value as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_value / 2)
        } else {
            write!(f, "{}/2", self.twice_value)
        }
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Exact `Gamma(a)` for a positive integer or half-integer `a`.
///
/// Integer `a` gives `(a-1)!`; `a = k + 1/2` gives
/// `(1/2)(3/2)...(k-1/2) * pi^(1/2)`.
pub fn gamma_half(a: HalfInteger) -> Result<PiRational> {
    if !a.is_positive() {
        return Err(Error::Domain(format!(
            "Gamma({a}) is a pole or undefined; the exact evaluator needs a positive argument"
        )));
    }
    let t = a.twice_value();
    if a.is_integer() {
        let n = (t / 2 - 1) as u64;
        return Ok(PiRational::new(BigRational::from_integer(factorial(n)), 0));
    }
    // Gamma(1/2) = sqrt(pi), then climb with Gamma(x + 1) = x Gamma(x).
    let k = (t - 1) / 2;
    let mut numer = BigInt::one();
    for j in 0..k {
        numer *= 2 * j + 1;
    }
    let denom = BigInt::one() << (k as usize);
    Ok(PiRational::new(BigRational::new(numer, denom), 1))
}

/// Rising factorial `a (a+1) ... (a+k-1)`; `1` for `k = 0`.
pub fn pochhammer(a: HalfInteger, k: u32) -> BigRational {
    let t = a.twice_value();
    let mut numer = BigInt::one();
    for i in 0..i64::from(k) {
        numer *= t + 2 * i;
    }
    BigRational::new(numer, BigInt::one() << (k as usize))
}
