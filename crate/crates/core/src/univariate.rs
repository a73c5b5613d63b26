//! Dense univariate polynomials over the rationals.
//!
//! These hold the outer polynomial `g` of a composition `g(q)` and the
//! parametrizations of retract certificates. In text form the variable is
//! written `x`, so they share the bivariate grammar.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Monomial, Polynomial, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    // coeffs[i] is the coefficient of t^i; no trailing zeros
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn var() -> Self {
        UniPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// `g(q)` by Horner's rule.
    pub fn eval_poly(&self, q: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * q;
            acc.add_term(Monomial::ONE, c.clone());
        }
        acc
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// `self(other(t))`.
    pub fn compose(&self, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * other;
            acc = &acc + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// The same polynomial as a bivariate polynomial in `x`.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::new(i as u32, 0), c.clone())),
        )
    }

    /// Reads a bivariate polynomial that only involves `x`.
    pub fn from_polynomial(p: &Polynomial) -> Option<UniPoly> {
        if p.deg_y().unwrap_or(0) > 0 {
            return None;
        }
        let len = p.deg_x().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![Rational::zero(); len];
        for (m, c) in p.terms() {
            coeffs[m.xexp as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// All rational roots, without multiplicity, in ascending order.
    ///
    /// Uses the rational root theorem. Returns `None` for the zero polynomial
    /// or when the extreme coefficients are too large to enumerate divisors.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.is_zero() {
            return None;
        }
        let mut roots = Vec::new();
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if shift > 0 {
            roots.push(Rational::zero());
        }
        let trimmed = &self.coeffs[shift..];
        if trimmed.len() > 1 {
            let denom = trimmed.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = trimmed.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
            let low = small_divisors(&ints[0])?;
            let high = small_divisors(ints.last().unwrap())?;
            let reduced = UniPoly::new(trimmed.to_vec());
            for p in &low {
                for q in &high {
                    for sign in [-1, 1] {
                        let cand = Rational::new(BigInt::from(sign) * p, q.clone());
                        if reduced.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

impl std::ops::Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl UniPoly {
    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_polynomial(), f)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_polynomial().format_with("t", "?"))
    }
}

impl serde::Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
