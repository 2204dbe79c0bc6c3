use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{parse_rational, PiRational};
use crate::integrals::{dirichlet_signed, ExponentVector};

/// `coeff * x_1^{e_1} ⋯ x_{n+1}^{e_{n+1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigRational,
    pub exponents: Vec<i64>,
}

impl Monomial {
    pub fn new(coeff: BigRational, exponents: Vec<i64>) -> Self {
        Self { coeff, exponents }
    }

    pub fn eval(&self, xs: &[f64]) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        self.exponents
            .iter()
            .zip(xs)
            .fold(c, |acc, (&e, &x)| acc * x.powi(e as i32))
    }
}

/// Sparse polynomial in the cartesian coordinates of `R^{n+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        Self { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Number of variables, taken from the first monomial.
    pub fn variable_count(&self) -> Option<usize> {
        self.monomials.first().map(|m| m.exponents.len())
    }

    pub fn eval(&self, xs: &[f64]) -> f64 {
        self.monomials.iter().map(|m| m.eval(xs)).sum()
    }
}

/// One monomial per line: `coeff e_1 .. e_{n+1}`, `coeff` an integer or
/// `p/q`. Everything after `#` is ignored, as are blank lines.
impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut monomials = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let mut fields = line.split_whitespace();
            let coeff = parse_rational(fields.next().expect("non-empty line"))
                .map_err(|e| at(e.to_string()))?;
            let exponents = fields
                .map(|f| {
                    f.parse::<i64>()
                        .map_err(|_| at(format!("exponent {f:?} is not an integer")))
                })
                .collect::<Result<Vec<_>>>()?;
            if exponents.is_empty() {
                return Err(at("expected `coefficient e1 .. e_{n+1}`".into()));
            }
            if let Some(first) = monomials.first() {
                let first: &Monomial = first;
                if first.exponents.len() != exponents.len() {
                    return Err(at(format!(
                        "{} exponents, but the first monomial has {}",
                        exponents.len(),
                        first.exponents.len()
                    )));
                }
            }
            monomials.push(Monomial::new(coeff, exponents));
        }
        Ok(Polynomial { monomials })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.monomials {
            write!(f, "{}", m.coeff)?;
            for e in &m.exponents {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Exact `∫_{S^n} poly`, summing the signed Dirichlet integral of each
/// monomial.
///
/// A monomial with an odd exponent integrates to zero. All others give
/// `q π^{m/2}` with the same `m` (every numerator Gamma is at a half-integer,
/// the denominator one has the parity of `n + 1`), so the sum stays a single
/// [`PiRational`].
pub fn poly_integrate(n: usize, poly: &Polynomial) -> Result<PiRational> {
    let mut total = PiRational::zero();
    for (i, m) in poly.monomials.iter().enumerate() {
        if let Some(&e) = m.exponents.iter().find(|&&e| e < 0) {
            return Err(Error::Domain(format!(
                "monomial #{i} has negative exponent {e}; polynomials need exponents >= 0"
            )));
        }
        if m.coeff.is_zero() {
            continue;
        }
        let term = dirichlet_signed(n, &ExponentVector::from_ints(&m.exponents))?;
        total = total.checked_add(&term.scale(&m.coeff))?;
    }
    Ok(total)
}
