//! Elementary reduction of generator pairs.
//!
//! A pair `(p, q)` is elementary reduced when no invertible linear mix and no
//! move `(p + mu*q^k, q)` or `(p, q + mu*p^k)` lowers `deg p + deg q`. A move
//! can only lower the degree sum by cancelling a leading form, so the search
//! below tries exactly those candidates and is finite.
//!
//! The same moves decide whether an endomorphism with constant Jacobian is a
//! (tame) automorphism: it is one iff its image pair reduces to an affine pair.

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::endo::{jacobian, Endomorphism};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, MultiPoly, TermOrder};
use crate::linalg;
use crate::poly::{format_rational, Monomial, Polynomial, Rational};
use crate::verdict::Verdict;

pub const REASON_NON_INJECTIVE: &str = "non-injective";
pub const REASON_NON_CONSTANT_JACOBIAN: &str = "non-constant Jacobian";
pub const REASON_STALLED: &str = "reduction stalled";

/// One invertible change of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// `(p, q) ↦ (a*p + b*q, c*p + d*q)` with `ad - bc != 0`.
    LinearMix {
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
    },
    /// `(p, q) ↦ (p + mu*q^k, q)`.
    ElemOnFirst { mu: Rational, k: u32 },
    /// `(p, q) ↦ (p, q + mu*p^k)`.
    ElemOnSecond { mu: Rational, k: u32 },
}

impl ReductionStep {
    pub fn apply(&self, p: &Polynomial, q: &Polynomial) -> (Polynomial, Polynomial) {
        match self {
            ReductionStep::LinearMix { a, b, c, d } => (
                &p.scale(a) + &q.scale(b),
                &p.scale(c) + &q.scale(d),
            ),
            ReductionStep::ElemOnFirst { mu, k } => (p + &q.pow(*k).scale(mu), q.clone()),
            ReductionStep::ElemOnSecond { mu, k } => (p.clone(), q + &p.pow(*k).scale(mu)),
        }
    }

    pub fn inverse(&self) -> ReductionStep {
        match self {
            ReductionStep::LinearMix { a, b, c, d } => {
                let det = a * d - b * c;
                ReductionStep::LinearMix {
                    a: d / &det,
                    b: -b / &det,
                    c: -c / &det,
                    d: a / &det,
                }
            }
            ReductionStep::ElemOnFirst { mu, k } => ReductionStep::ElemOnFirst { mu: -mu, k: *k },
            ReductionStep::ElemOnSecond { mu, k } => ReductionStep::ElemOnSecond { mu: -mu, k: *k },
        }
    }

    /// The substitution `e` with `(alpha∘e)(x, y) = step(alpha(x), alpha(y))`.
    pub fn as_endomorphism(&self) -> Endomorphism {
        let (x, y) = (Polynomial::x(), Polynomial::y());
        let (u, v) = self.apply(&x, &y);
        Endomorphism::new(u, v)
    }

    pub fn is_invertible(&self) -> bool {
        match self {
            ReductionStep::LinearMix { a, b, c, d } => !(a * d - b * c).is_zero(),
            ReductionStep::ElemOnFirst { mu, k } | ReductionStep::ElemOnSecond { mu, k } => {
                !mu.is_zero() && *k >= 2
            }
        }
    }
}

impl Serialize for ReductionStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            ReductionStep::LinearMix { a, b, c, d } => {
                map.serialize_entry("a", &format_rational(a))?;
                map.serialize_entry("b", &format_rational(b))?;
                map.serialize_entry("c", &format_rational(c))?;
                map.serialize_entry("d", &format_rational(d))?;
                map.serialize_entry("step", "linear_mix")?;
            }
            ReductionStep::ElemOnFirst { mu, k } => {
                map.serialize_entry("k", k)?;
                map.serialize_entry("mu", &format_rational(mu))?;
                map.serialize_entry("step", "elem_on_first")?;
            }
            ReductionStep::ElemOnSecond { mu, k } => {
                map.serialize_entry("k", k)?;
                map.serialize_entry("mu", &format_rational(mu))?;
                map.serialize_entry("step", "elem_on_second")?;
            }
        }
        map.end()
    }
}

/// The outcome of [`elementary_reduce`]: the reduced pair and the steps that
/// produced it from the input, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedPair {
    pub first: Polynomial,
    pub second: Polynomial,
    pub steps: Vec<ReductionStep>,
}

/// Certificate that an endomorphism is a tame automorphism.
///
/// Applying `steps` in order to the image pair yields `final_affine`;
/// replaying the inverse steps backwards from `final_affine` gives the images
/// back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub steps: Vec<ReductionStep>,
    pub final_affine: Endomorphism,
}

impl Decomposition {
    /// Rebuilds the automorphism the certificate was issued for.
    pub fn replay(&self) -> Endomorphism {
        let mut p = self.final_affine.x_image.clone();
        let mut q = self.final_affine.y_image.clone();
        for step in self.steps.iter().rev() {
            (p, q) = step.inverse().apply(&p, &q);
        }
        Endomorphism::new(p, q)
    }

    /// The inverse automorphism `e_1 ∘ ... ∘ e_n ∘ A^{-1}`.
    pub fn inverse_automorphism(&self) -> Option<Endomorphism> {
        let mut acc = affine_inverse(&self.final_affine)?;
        for step in self.steps.iter().rev() {
            acc = step.as_endomorphism().compose(&acc);
        }
        Some(acc)
    }

    /// Re-checks the certificate against `phi`.
    pub fn verify(&self, phi: &Endomorphism) -> bool {
        let affine = is_affine_automorphism(&self.final_affine);
        let steps_ok = self.steps.iter().all(ReductionStep::is_invertible);
        let det = phi.jacobian_det();
        affine && steps_ok && !det.is_zero() && det.is_constant() && self.replay() == *phi
    }
}

fn is_affine_automorphism(a: &Endomorphism) -> bool {
    let (u, v) = a.images();
    let linear = |p: &Polynomial| p.total_degree().is_some_and(|d| d <= 1);
    linear(u) && linear(v) && {
        let det = jacobian(u, v);
        det.is_constant() && !det.is_zero()
    }
}

/// Inverse of an invertible affine map; `None` if `a` is not one.
pub fn affine_inverse(a: &Endomorphism) -> Option<Endomorphism> {
    if !is_affine_automorphism(a) {
        return None;
    }
    let (u, v) = a.images();
    let m = |p: &Polynomial, mono| p.coeff(&mono);
    let (ex, ey) = (Monomial::new(1, 0), Monomial::new(0, 1));
    // a(x) = m00 x + m01 y + e, a(y) = m10 x + m11 y + f
    let (m00, m01, e) = (m(u, ex), m(u, ey), u.constant_term());
    let (m10, m11, f) = (m(v, ex), m(v, ey), v.constant_term());
    let det = &m00 * &m11 - &m01 * &m10;
    // rows of M^{-1}
    let (n00, n01) = (&m11 / &det, -&m01 / &det);
    let (n10, n11) = (-&m10 / &det, &m00 / &det);
    let row = |a0: &Rational, a1: &Rational| {
        let shift = -(a0 * &e + a1 * &f);
        Polynomial::from_terms([(ex, a0.clone()), (ey, a1.clone()), (Monomial::ONE, shift)])
    };
    Some(Endomorphism::new(row(&n00, &n01), row(&n10, &n11)))
}

/// The first degree-lowering move for `(p, q)`, if any.
///
/// Elementary moves are tried before linear ones, first component first.
pub fn find_reducing_step(p: &Polynomial, q: &Polynomial) -> Option<ReductionStep> {
    let n = p.total_degree()?;
    let m = q.total_degree()?;
    if n == 0 || m == 0 {
        return None;
    }
    let lp = p.leading_form();
    let lq = q.leading_form();
    if n % m == 0 && n / m >= 2 {
        let k = n / m;
        if let Some(c) = lp.proportional_to(&lq.pow(k)) {
            return Some(ReductionStep::ElemOnFirst { mu: -c, k });
        }
    }
    if m % n == 0 && m / n >= 2 {
        let k = m / n;
        if let Some(c) = lq.proportional_to(&lp.pow(k)) {
            return Some(ReductionStep::ElemOnSecond { mu: -c, k });
        }
    }
    if n == m {
        if let Some(lambda) = lq.proportional_to(&lp) {
            return Some(ReductionStep::LinearMix {
                a: Rational::one(),
                b: Rational::zero(),
                c: -lambda,
                d: Rational::one(),
            });
        }
    }
    None
}

/// Applies degree-lowering moves until none is left.
pub fn elementary_reduce(p: &Polynomial, q: &Polynomial) -> Result<ReducedPair> {
    if p.is_constant() || q.is_constant() {
        return Err(Error::ConstantInput);
    }
    if jacobian(p, q).is_zero() {
        return Err(Error::DependentPair);
    }
    Ok(reduce_unchecked(p.clone(), q.clone()))
}

fn reduce_unchecked(mut p: Polynomial, mut q: Polynomial) -> ReducedPair {
    let mut steps = Vec::new();
    while let Some(step) = find_reducing_step(&p, &q) {
        (p, q) = step.apply(&p, &q);
        steps.push(step);
    }
    ReducedPair {
        first: p,
        second: q,
        steps,
    }
}

pub fn is_elementary_reduced(p: &Polynomial, q: &Polynomial) -> Result<bool> {
    if p.is_constant() || q.is_constant() {
        return Err(Error::ConstantInput);
    }
    if jacobian(p, q).is_zero() {
        return Err(Error::DependentPair);
    }
    Ok(find_reducing_step(p, q).is_none())
}

/// Decides whether `phi` is an automorphism. Never inconclusive.
pub fn is_automorphism(phi: &Endomorphism) -> Verdict<Decomposition> {
    let det = phi.jacobian_det();
    if det.is_zero() {
        return Verdict::no(REASON_NON_INJECTIVE);
    }
    if !det.is_constant() {
        return Verdict::no(REASON_NON_CONSTANT_JACOBIAN);
    }
    let reduced = reduce_unchecked(phi.x_image.clone(), phi.y_image.clone());
    let affine = Endomorphism::new(reduced.first, reduced.second);
    if is_affine_automorphism(&affine) {
        Verdict::Yes(Decomposition {
            steps: reduced.steps,
            final_affine: affine,
        })
    } else {
        // A true automorphism always reduces to an affine pair; reaching this
        // means the move search missed a move.
        Verdict::no(REASON_STALLED)
    }
}

/// `true` when a verdict is the stall diagnostic.
pub fn is_stall<C>(v: &Verdict<C>) -> bool {
    matches!(v, Verdict::No { reason } if reason == REASON_STALLED)
}

/// A mate `q` with `(p, q)` an automorphism, plus its decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateCertificate {
    pub mate: Polynomial,
    pub decomposition: Decomposition,
}

impl CoordinateCertificate {
    pub fn verify(&self, p: &Polynomial) -> bool {
        let phi = Endomorphism::new(p.clone(), self.mate.clone());
        self.decomposition.verify(&phi)
    }

    pub fn automorphism(&self, p: &Polynomial) -> Endomorphism {
        Endomorphism::new(p.clone(), self.mate.clone())
    }
}

pub fn default_mate_bound(p: &Polynomial) -> u32 {
    p.total_degree().unwrap_or(0).max(1)
}

/// Searches for `q` with `deg q <= bound` and `D(p, q) = 1`.
///
/// `D(p, q) = p_x q_y - p_y q_x` is linear in the coefficients of `q`, so
/// each degree bound is one linear solve. The smallest feasible degree wins.
pub fn find_mate(p: &Polynomial, bound: u32) -> Result<Option<Polynomial>> {
    if p.is_constant() {
        return Err(Error::ConstantInput);
    }
    for b in 1..=bound.max(1) {
        if let Some(q) = solve_mate(p, b) {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

fn solve_mate(p: &Polynomial, bound: u32) -> Option<Polynomial> {
    let unknowns: Vec<Monomial> = crate::endo::monomials_up_to(bound)
        .into_iter()
        .filter(|m| *m != Monomial::ONE)
        .collect();
    let columns: Vec<Polynomial> = unknowns
        .iter()
        .map(|m| jacobian(p, &Polynomial::monomial(Rational::one(), *m)))
        .collect();
    let mut rows_index: Vec<Monomial> = columns
        .iter()
        .flat_map(|c| c.terms().map(|(m, _)| *m))
        .chain(std::iter::once(Monomial::ONE))
        .collect();
    rows_index.sort();
    rows_index.dedup();
    let a: Vec<Vec<Rational>> = rows_index
        .iter()
        .map(|r| columns.iter().map(|c| c.coeff(r)).collect())
        .collect();
    let b: Vec<Rational> = rows_index
        .iter()
        .map(|r| if *r == Monomial::ONE { Rational::one() } else { Rational::zero() })
        .collect();
    let sol = linalg::solve(&a, &b, unknowns.len())?;
    Some(Polynomial::from_terms(unknowns.into_iter().zip(sol.particular)))
}

/// Decides whether `p` is a coordinate, i.e. the first component of an automorphism.
pub fn is_coordinate(p: &Polynomial) -> Result<Verdict<CoordinateCertificate>> {
    is_coordinate_with_bound(p, default_mate_bound(p))
}

/// As [`is_coordinate`] with an explicit mate degree bound.
///
/// A bound of at least `deg p` is complete: a mate of minimal degree never
/// exceeds `deg p`, since a larger one admits a degree-lowering move that
/// keeps `D(p, q)` fixed. Smaller bounds turn infeasibility into
/// `Inconclusive`.
pub fn is_coordinate_with_bound(p: &Polynomial, bound: u32) -> Result<Verdict<CoordinateCertificate>> {
    if p.is_constant() {
        return Err(Error::ConstantInput);
    }
    let (px, py) = p.partial_derivatives();
    if px.constant_term().is_zero() && py.constant_term().is_zero() {
        return Ok(Verdict::no(
            "gradient vanishes at the origin, so D(p, q) = 1 is unreachable for every q",
        ));
    }
    if gradient_has_common_zero(&px, &py) {
        return Ok(Verdict::no(
            "partial derivatives have a common complex zero, so D(p, q) = 1 is unreachable for every q",
        ));
    }
    match find_mate(p, bound)? {
        Some(mate) => {
            let phi = Endomorphism::new(p.clone(), mate.clone());
            Ok(match is_automorphism(&phi) {
                Verdict::Yes(decomposition) => Verdict::Yes(CoordinateCertificate { mate, decomposition }),
                Verdict::No { reason } => Verdict::No { reason },
                Verdict::Inconclusive { reason, bounds } => Verdict::Inconclusive { reason, bounds },
            })
        }
        None if bound >= default_mate_bound(p) => Ok(Verdict::no(format!(
            "no q of degree <= {bound} solves D(p, q) = 1, and that bound is complete"
        ))),
        None => Ok(Verdict::inconclusive(
            format!("no mate of degree <= {bound}"),
            [("B_mate", bound as u64)],
        )),
    }
}

fn gradient_has_common_zero(px: &Polynomial, py: &Polynomial) -> bool {
    let o = TermOrder::GradedRevLex;
    let gens: Vec<MultiPoly> = [px, py]
        .into_iter()
        .filter(|g| !g.is_zero())
        .map(|g| MultiPoly::from_polynomial(g, 2, o))
        .collect();
    if gens.is_empty() {
        return true;
    }
    !buchberger(&gens, o).is_unit()
}
