//! Sparse bivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a map from [`Monomial`] to a nonzero [`Rational`]
//! coefficient. Zero coefficients are never stored, so structural equality
//! of the term maps is polynomial equality.

mod parse;
mod print;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use parse::parse_polynomial;
pub use print::format_rational;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `x^xexp * y^yexp`.
///
/// The `Ord` impl is the canonical printing order: total degree first, then
/// pure lex with `y > x` inside a degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub xexp: u32,
    pub yexp: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { xexp: 0, yexp: 0 };

    pub const fn new(xexp: u32, yexp: u32) -> Self {
        Monomial { xexp, yexp }
    }

    pub fn total_degree(&self) -> u32 {
        self.xexp + self.yexp
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.xexp + other.xexp, self.yexp + other.yexp)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.xexp <= other.xexp && self.yexp <= other.yexp
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial::new(other.xexp - self.xexp, other.yexp - self.yexp)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        MonomialOrder::GradedPureLex.cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Monomial orders on two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Total degree, ties broken by the smaller `y` exponent (`x > y`).
    GradedRevLex,
    /// `y` exponent first, then `x` exponent (`y > x`).
    PureLexYoverX,
    /// Lex with `x > y`; eliminates `x`.
    LexElimination,
    /// Total degree, ties broken by [`MonomialOrder::PureLexYoverX`]. Used for printing.
    GradedPureLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GradedRevLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| b.yexp.cmp(&a.yexp)),
            MonomialOrder::PureLexYoverX => a.yexp.cmp(&b.yexp).then(a.xexp.cmp(&b.xexp)),
            MonomialOrder::LexElimination => a.xexp.cmp(&b.xexp).then(a.yexp.cmp(&b.yexp)),
            MonomialOrder::GradedPureLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then(a.yexp.cmp(&b.yexp))
                .then(a.xexp.cmp(&b.xexp)),
        }
    }
}

/// Total degree; the zero polynomial has degree `NegInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

/// Result of [`Polynomial::degree_data`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeData {
    pub total_degree: Degree,
    pub leading_form: Polynomial,
    pub purelex_lead: Option<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::monomial(c, Monomial::ONE)
    }

    pub fn x() -> Self {
        Polynomial::monomial(Rational::one(), Monomial::new(1, 0))
    }

    pub fn y() -> Self {
        Polynomial::monomial(Rational::one(), Monomial::new(0, 1))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// `c * x^i * y^j` with an integer coefficient.
    pub fn term(c: i64, i: u32, j: u32) -> Self {
        Polynomial::monomial(rat(c), Monomial::new(i, j))
    }

    /// Builds a polynomial from (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(m) => Degree::Finite(m.total_degree()),
            None => Degree::NegInf,
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.degree().finite()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.xexp).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.yexp).max()
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .range(Monomial::new(d, 0)..=Monomial::new(0, d))
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Polynomial { terms }
    }

    pub fn leading_form(&self) -> Polynomial {
        match self.total_degree() {
            Some(d) => self.homogeneous_part(d),
            None => Polynomial::zero(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    /// Largest monomial under `order`, with its coefficient.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (*m, c))
    }

    /// Largest monomial in the canonical (graded pure-lex) order.
    pub fn lead(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn purelex_lead(&self) -> Option<Monomial> {
        self.leading_term(MonomialOrder::PureLexYoverX).map(|(m, _)| m)
    }

    pub fn degree_data(&self) -> DegreeData {
        DegreeData {
            total_degree: self.degree(),
            leading_form: self.leading_form(),
            purelex_lead: self.purelex_lead(),
        }
    }

    pub fn partial_x(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.xexp > 0)
            .map(|(m, c)| (Monomial::new(m.xexp - 1, m.yexp), c * rat(m.xexp as i64)))
            .collect();
        Polynomial { terms }
    }

    pub fn partial_y(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.yexp > 0)
            .map(|(m, c)| (Monomial::new(m.xexp, m.yexp - 1), c * rat(m.yexp as i64)))
            .collect();
        Polynomial { terms }
    }

    pub fn partial_derivatives(&self) -> (Polynomial, Polynomial) {
        (self.partial_x(), self.partial_y())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, a * c)).collect();
        Polynomial { terms }
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let terms = self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect();
        Polynomial { terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self / divisor` when the division is exact, `None` otherwise.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = divisor.lead()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quotient = Polynomial::zero();
        while let Some((m, c)) = rem.lead() {
            if !dm.divides(&m) {
                return None;
            }
            let qm = dm.quotient_of(&m);
            let qc = c / &dc;
            rem -= &divisor.mul_term(&qc, &qm);
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }

    /// When `self == c * other` for a rational `c`, returns `c`.
    pub fn proportional_to(&self, other: &Polynomial) -> Option<Rational> {
        if other.is_zero() || self.num_terms() != other.num_terms() {
            return None;
        }
        let (m, c) = other.lead()?;
        let ratio = self.coeff(&m) / c;
        if ratio.is_zero() {
            return None;
        }
        let proportional = self
            .terms
            .iter()
            .all(|(n, a)| other.terms.get(n).is_some_and(|b| *a == b * &ratio));
        proportional.then_some(ratio)
    }

    /// Value at a rational point.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * pow_rat(x, m.xexp) * pow_rat(y, m.yexp);
        }
        acc
    }

    /// Substitutes `y = 0`.
    pub fn at_y_zero(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.yexp == 0)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Polynomial { terms }
    }

    /// Substitutes `x = 0`.
    pub fn at_x_zero(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.xexp == 0)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Polynomial { terms }
    }

    /// Exchanges `x` and `y`.
    pub fn swap_variables(&self) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.yexp, m.xexp), c.clone())),
        )
    }

    /// Largest numerator or denominator among the coefficients.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .flat_map(|c| [c.numer().abs(), c.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Printed form with custom variable names.
    pub fn format_with(&self, xname: &str, yname: &str) -> String {
        print::format_polynomial(self, xname, yname)
    }

    fn common_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

pub(crate) fn pow_rat(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("x", "y"))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl std::str::FromStr for Polynomial {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_polynomial(&s).map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::constant(rat(c))
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        Polynomial { terms }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        multiply(self, rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// Products are accumulated over integer numerators (one shared denominator
// per operand) in a dense grid, so the inner loop never normalizes fractions.
fn multiply(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    if a.num_terms() == 1 {
        let (m, c) = a.lead().unwrap();
        return b.mul_term(c, &m);
    }
    if b.num_terms() == 1 {
        let (m, c) = b.lead().unwrap();
        return a.mul_term(c, &m);
    }
    let da = a.common_denominator();
    let db = b.common_denominator();
    let ints = |p: &Polynomial, d: &BigInt| -> Vec<(Monomial, BigInt)> {
        p.terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (d / c.denom())))
            .collect()
    };
    let ia = ints(a, &da);
    let ib = ints(b, &db);
    let width = (a.deg_x().unwrap() + b.deg_x().unwrap() + 1) as usize;
    let height = (a.deg_y().unwrap() + b.deg_y().unwrap() + 1) as usize;
    let denom = da * db;
    let mut out = BTreeMap::new();
    if width.saturating_mul(height) <= (1 << 22) {
        let mut grid = vec![BigInt::zero(); width * height];
        for (ma, ca) in &ia {
            for (mb, cb) in &ib {
                let idx = (ma.yexp + mb.yexp) as usize * width + (ma.xexp + mb.xexp) as usize;
                grid[idx] += ca * cb;
            }
        }
        for (idx, c) in grid.into_iter().enumerate() {
            if !c.is_zero() {
                let m = Monomial::new((idx % width) as u32, (idx / width) as u32);
                out.insert(m, Rational::new(c, denom.clone()));
            }
        }
    } else {
        let mut acc: std::collections::HashMap<Monomial, BigInt> = Default::default();
        for (ma, ca) in &ia {
            for (mb, cb) in &ib {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        for (m, c) in acc {
            if !c.is_zero() {
                out.insert(m, Rational::new(c, denom.clone()));
            }
        }
    }
    Polynomial { terms: out }
}
