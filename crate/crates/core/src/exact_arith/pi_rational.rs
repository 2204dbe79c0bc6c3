use std::fmt;
use std::ops::{Div, Mul, Neg};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

// 85 significant digits; the truncation error is far below f64 resolution
// for any power of pi that still fits in an f64.
const PI_DIGITS: &str =
    "3141592653589793238462643383279502884197169399375105820974944592307816406286208998628";
const SQRT_PI_DIGITS: &str =
    "1772453850905516027298167483341145182797549456122387128213807789852911284591032181375";

fn digits_to_rational(digits: &str) -> BigRational {
    let numer: BigInt = digits.parse().expect("constant digits");
    let denom = Pow::pow(BigInt::from(10u32), (digits.len() - 1) as u32);
    BigRational::new(numer, denom)
}

fn pi_rational() -> &'static BigRational {
    static PI: OnceLock<BigRational> = OnceLock::new();
    PI.get_or_init(|| digits_to_rational(PI_DIGITS))
}

fn sqrt_pi_rational() -> &'static BigRational {
    static SQRT_PI: OnceLock<BigRational> = OnceLock::new();
    SQRT_PI.get_or_init(|| digits_to_rational(SQRT_PI_DIGITS))
}

/// An exact value `q * pi^(m/2)` with `q` rational and `m` an integer.
///
/// Always canonical: `q` is in lowest terms (guaranteed by [`BigRational`])
/// and a zero coefficient forces `m = 0`, so derived equality is structural
/// equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiRational {
    coeff: BigRational,
    half_pi_power: i64,
}

impl PiRational {
    pub fn new(coeff: BigRational, half_pi_power: i64) -> Self {
        let half_pi_power = if coeff.is_zero() { 0 } else { half_pi_power };
        Self {
            coeff,
            half_pi_power,
        }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), 0)
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), 0)
    }

    pub fn from_integer(value: i64) -> Self {
        Self::new(BigRational::from_integer(value.into()), 0)
    }

    pub fn from_rational(coeff: BigRational) -> Self {
        Self::new(coeff, 0)
    }

    /// `pi^(m/2)` with unit coefficient.
    pub fn pi_power(half_pi_power: i64) -> Self {
        Self::new(BigRational::one(), half_pi_power)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    /// The integer `m` of `pi^(m/2)`.
    pub fn half_pi_power(&self) -> i64 {
        self.half_pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.coeff.is_negative()
    }

    /// Sum of two values carrying the same power of pi.
    ///
    /// Zero is the additive identity for every power; any other mismatch is
    /// an error rather than a coercion.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.half_pi_power != other.half_pi_power {
            return Err(Error::MixedPiPower {
                left: self.half_pi_power,
                right: other.half_pi_power,
            });
        }
        Ok(Self::new(&self.coeff + &other.coeff, self.half_pi_power))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division of a pi-rational by zero".into()));
        }
        Ok(Self::new(
            &self.coeff / &other.coeff,
            self.half_pi_power - other.half_pi_power,
        ))
    }

    /// Integer power; negative exponents of zero are rejected.
    pub fn powi(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::Domain("zero raised to a negative power".into()));
        }
        Ok(Self::new(
            Pow::pow(&self.coeff, exp),
            self.half_pi_power * i64::from(exp),
        ))
    }

    /// Multiplies the coefficient by a rational, leaving the power of pi alone.
    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(&self.coeff * factor, self.half_pi_power)
    }

    /// Decimal value of `q * pi^(m/2)`.
    ///
    /// The power of pi is taken from an 85-digit rational approximation and
    /// the product is rounded to `f64` once, so the relative error is within
    /// one ulp. Results outside the normal `f64` range are reported as
    /// [`Error::Range`].
    pub fn to_f64(&self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let m = self.half_pi_power;
        let whole = i32::try_from(m.div_euclid(2))
            .map_err(|_| Error::Range(format!("pi^({m}/2) is out of range")))?;
        let mut exact = &self.coeff * Pow::pow(pi_rational(), whole);
        if m.rem_euclid(2) == 1 {
            exact *= sqrt_pi_rational();
        }
        let value = exact.to_f64().unwrap_or(f64::NAN);
        if !value.is_finite() {
            return Err(Error::Range(format!("{self} overflows f64")));
        }
        if value.abs() < f64::MIN_POSITIVE {
            return Err(Error::Range(format!("{self} underflows f64")));
        }
        Ok(value)
    }
}

impl Mul for &PiRational {
    type Output = PiRational;

    fn mul(self, rhs: &PiRational) -> PiRational {
        PiRational::new(
            &self.coeff * &rhs.coeff,
            self.half_pi_power + rhs.half_pi_power,
        )
    }
}

impl Mul for PiRational {
    type Output = PiRational;

    fn mul(self, rhs: PiRational) -> PiRational {
        &self * &rhs
    }
}

/// Panics on a zero divisor, like [`BigRational`] division.
impl Div for &PiRational {
    type Output = PiRational;

    fn div(self, rhs: &PiRational) -> PiRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div for PiRational {
    type Output = PiRational;

    fn div(self, rhs: PiRational) -> PiRational {
        &self / &rhs
    }
}

impl Neg for PiRational {
    type Output = PiRational;

    fn neg(self) -> PiRational {
        PiRational::new(-self.coeff, self.half_pi_power)
    }
}

/// Renders `q * pi^(m/2)`: `pi^k` when `m = 2k`, `pi^(m/2)` when `m` is odd,
/// and just `q` when `m = 0`. Examples: `8/3 * pi^1`, `3/4 * pi^(1/2)`, `6`.
impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.half_pi_power;
        if m == 0 {
            write!(f, "{}", self.coeff)
        } else if m % 2 == 0 {
            write!(f, "{} * pi^{}", self.coeff, m / 2)
        } else {
            write!(f, "{} * pi^({}/2)", self.coeff, m)
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

impl FromStr for PiRational {
    type Err = Error;

    /// Accepts the rendered form; `pi^(2/2)` style exponents are normalized.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (coeff, power) = match s.split_once('*') {
            None => (s, None),
            Some((c, p)) => (c.trim(), Some(p.trim())),
        };
        let coeff = parse_rational(coeff)?;
        let half_pi_power = match power {
            None => 0,
            Some(p) => {
                let bad = || Error::Parse(format!("invalid power of pi '{p}'"));
                let exp = p.strip_prefix("pi^").ok_or_else(bad)?;
                if let Some(inner) = exp.strip_prefix('(').and_then(|e| e.strip_suffix(')')) {
                    let (num, den) = inner.split_once('/').ok_or_else(bad)?;
                    if den.trim() != "2" {
                        return Err(bad());
                    }
                    num.trim().parse::<i64>().map_err(|_| bad())?
                } else {
                    2 * exp.parse::<i64>().map_err(|_| bad())?
                }
            }
        };
        Ok(Self::new(coeff, half_pi_power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn zero_is_canonical() {
        let z = PiRational::new(BigRational::zero(), 5);
        assert_eq!(z, PiRational::zero());
        assert_eq!(z.half_pi_power(), 0);
    }

    #[test]
    fn coefficient_is_reduced() {
        let v = PiRational::new(rat(6, 4), 1);
        assert_eq!(v, PiRational::new(rat(3, 2), 1));
    }

    #[test]
    fn rendering() {
        assert_eq!(PiRational::new(rat(8, 3), 2).to_string(), "8/3 * pi^1");
        assert_eq!(PiRational::new(rat(3, 4), 1).to_string(), "3/4 * pi^(1/2)");
        assert_eq!(PiRational::from_integer(6).to_string(), "6");
        assert_eq!(PiRational::new(rat(2, 1), 4).to_string(), "2 * pi^2");
        assert_eq!(PiRational::new(rat(1, 1), -1).to_string(), "1 * pi^(-1/2)");
        assert_eq!(PiRational::new(rat(-1, 5), -4).to_string(), "-1/5 * pi^-2");
        assert_eq!(PiRational::zero().to_string(), "0");
    }

    #[test]
    fn parse_normalizes() {
        let v: PiRational = "4/2 * pi^(2/2)".parse().unwrap();
        assert_eq!(v.to_string(), "2 * pi^1");
        assert!("3 * e^2".parse::<PiRational>().is_err());
        assert!("1/0".parse::<PiRational>().is_err());
        assert!("1 * pi^(1/3)".parse::<PiRational>().is_err());
    }

    #[test]
    fn mixed_powers_do_not_add() {
        let a = PiRational::pi_power(1);
        let b = PiRational::pi_power(2);
        assert_eq!(
            a.checked_add(&b),
            Err(Error::MixedPiPower { left: 1, right: 2 })
        );
        assert_eq!(a.checked_add(&PiRational::zero()).unwrap(), a);
    }

    #[test]
    fn float_values() {
        let pi = PiRational::pi_power(2).to_f64().unwrap();
        assert_eq!(pi, std::f64::consts::PI);
        let four_pi = PiRational::new(rat(4, 1), 2).to_f64().unwrap();
        assert_eq!(four_pi, 4.0 * std::f64::consts::PI);
        // (3/4) sqrt(pi), reference from a 90-digit evaluation
        let v = PiRational::new(rat(3, 4), 1).to_f64().unwrap();
        let reference = 1.329_340_388_179_137_f64;
        assert!((v - reference).abs() / reference <= 1e-15);
    }

    #[test]
    fn float_range_errors() {
        let huge = PiRational::new(BigRational::from_integer(Pow::pow(BigInt::from(10), 400u32)), 0);
        assert!(matches!(huge.to_f64(), Err(Error::Range(_))));
        let tiny = PiRational::pi_power(-2000);
        assert!(matches!(tiny.to_f64(), Err(Error::Range(_))));
        // large but representable: pi^300 ~ 1e149
        let big = PiRational::pi_power(600).to_f64().unwrap();
        let reference = 300.0 * std::f64::consts::PI.ln();
        assert!((big.ln() - reference).abs() < 1e-12 * reference);
    }

    fn operand() -> impl Strategy<Value = PiRational> {
        (-50i64..50, 1i64..40, -6i64..6).prop_map(|(p, q, m)| PiRational::new(rat(p, q), m))
    }

    fn same_power_operands() -> impl Strategy<Value = (PiRational, PiRational, PiRational)> {
        (-6i64..6).prop_flat_map(|m| {
            let c = (-50i64..50, 1i64..40).prop_map(move |(p, q)| PiRational::new(rat(p, q), m));
            (c.clone(), c.clone(), c)
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in operand(), b in operand(), c in operand()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn addition_is_associative((a, b, c) in same_power_operands()) {
            let left = a.checked_add(&b).unwrap().checked_add(&c).unwrap();
            let right = a.checked_add(&b.checked_add(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn multiplication_distributes((b, c, _) in same_power_operands(), a in operand()) {
            let left = &a * &b.checked_add(&c).unwrap();
            let right = (&a * &b).checked_add(&(&a * &c)).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn division_inverts_multiplication(a in operand(), b in operand()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(&(&a * &b) / &b, a);
        }

        #[test]
        fn render_parse_round_trip(a in operand()) {
            prop_assert_eq!(a.to_string().parse::<PiRational>().unwrap(), a);
        }
    }
}
