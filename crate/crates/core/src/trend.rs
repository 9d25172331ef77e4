//! Exact polynomials in one variable and limits of their ratios.
//!
//! Quantities built from eventually periodic data are, along each residue
//! class `n = n0 + r + m L`, polynomials in `m`. Their order limits reduce to
//! comparing leading coefficients, which this module does exactly.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::{ExtValue, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    /// Coefficients, lowest degree first, no trailing zeros.
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b m`.
    pub fn affine(a: Rational, b: Rational) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, m: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * m + c)
    }

    /// Sign of `p(m)` for all sufficiently large `m`.
    pub fn eventual_sign(&self) -> i8 {
        match self.leading() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }
}

/// `lim_{m -> inf} num(m) / den(m)` for a denominator that is eventually
/// positive. A zero denominator polynomial is rejected.
pub fn ratio_limit(num: &Poly, den: &Poly) -> Result<ExtValue> {
    if den.eventual_sign() <= 0 {
        return Err(Error::PreconditionViolated("denominator is not eventually positive".into()));
    }
    let dd = den.degree().expect("nonzero");
    match num.degree() {
        None => Ok(ExtValue::zero()),
        Some(nd) if nd < dd => Ok(ExtValue::zero()),
        Some(nd) if nd == dd => Ok(ExtValue::Finite(num.leading().unwrap() / den.leading().unwrap())),
        Some(_) => {
            if num.eventual_sign() > 0 {
                Ok(ExtValue::Infinity)
            } else {
                Err(Error::PreconditionViolated("ratio diverges to -inf".into()))
            }
        }
    }
}
