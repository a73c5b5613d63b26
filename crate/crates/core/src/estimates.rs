//! Degree estimates for two-generated subalgebras and the bounded probe of
//! `phi^∞ = ∩_k phi^k(Q[x,y])`.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::endo::{jacobian, monomials_up_to, substitute, Endomorphism};
use crate::error::{Error, Result};
use crate::groebner::{buchberger_budgeted, Budget, MultiPoly, TermOrder};
use crate::linalg;
use crate::poly::{Monomial, Polynomial, Rational};
use crate::reduction::{elementary_reduce, is_elementary_reduced};

/// `N = mn/g - m - n + k + 2` for `n = deg p`, `m = deg q`, `g = gcd(n, m)`,
/// `k = deg D(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEstimate {
    pub n: u32,
    pub m: u32,
    pub g: u32,
    pub k: u32,
    #[serde(rename = "N")]
    pub big_n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<SuBranch>,
}

/// Which degree of `w` the lower bound was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum SuBranch {
    /// `deg_y w = (n/g) b + r != 0`.
    YDegree { b: u32, r: u32 },
    /// `deg_y w = 0` and `deg_x w = (m/g) b1 + r1`.
    XDegree { b1: u32, r1: u32 },
}

fn independent_degrees(p: &Polynomial, q: &Polynomial) -> Result<(u32, u32, u32)> {
    let n = p.total_degree().filter(|&d| d > 0).ok_or(Error::ConstantInput)?;
    let m = q.total_degree().filter(|&d| d > 0).ok_or(Error::ConstantInput)?;
    let det = jacobian(p, q);
    let k = det.total_degree().ok_or(Error::DependentPair)?;
    Ok((n, m, k))
}

/// `mn/gcd(n, m) - m - n + k + 2`.
pub fn formula_n(n: u32, m: u32, k: u32) -> i64 {
    let g = n.gcd(&m) as i64;
    let (n, m, k) = (n as i64, m as i64, k as i64);
    m * n / g - m - n + k + 2
}

pub fn estimate_n(p: &Polynomial, q: &Polynomial) -> Result<DegreeEstimate> {
    let (n, m, k) = independent_degrees(p, q)?;
    let g = n.gcd(&m);
    let big_n = formula_n(n, m, k);
    Ok(DegreeEstimate {
        n,
        m,
        g,
        k,
        big_n,
        branch: None,
    })
}

/// The lower bound on `deg w(p, q)` together with the data it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuBound {
    pub bound: i64,
    pub estimate: DegreeEstimate,
    /// The generators were exchanged to get `deg p < deg q`; `w` was
    /// exchanged with them.
    pub swapped: bool,
}

/// Orders the pair so that `deg p < deg q`, exchanging the variables of `w`
/// along with it.
fn ordered(w: &Polynomial, p: &Polynomial, q: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial, bool)> {
    let (n, m, _) = independent_degrees(p, q)?;
    if n == m {
        return Err(Error::HypothesisViolation(format!(
            "deg p = deg q = {n}; the generators must have distinct degrees"
        )));
    }
    Ok(if n > m {
        (w.swap_variables(), q.clone(), p.clone(), true)
    } else {
        (w.clone(), p.clone(), q.clone(), false)
    })
}

fn check_nonlinear(w: &Polynomial) -> Result<()> {
    if w.total_degree().is_none_or(|d| d <= 1) {
        return Err(Error::HypothesisViolation(
            "w is a linear combination of the generators".into(),
        ));
    }
    Ok(())
}

/// Lower bound on `deg w(p, q)` for `w` written in `x` (for `p`) and `y`
/// (for `q`).
pub fn su_lower_bound(w: &Polynomial, p: &Polynomial, q: &Polynomial) -> Result<SuBound> {
    let (w, p, q, swapped) = ordered(w, p, q)?;
    let (lp, lq) = (p.leading_form(), q.leading_form());
    if !jacobian(&lp, &lq).is_zero() {
        return Err(Error::HypothesisViolation(
            "leading forms of the generators are algebraically independent".into(),
        ));
    }
    let mut est = estimate_n(&p, &q)?;
    if est.m % est.n == 0 {
        return Err(Error::HypothesisViolation(format!(
            "deg p = {} divides deg q = {}, so the leading form of q is a multiple of a power of that of p",
            est.n, est.m
        )));
    }
    check_nonlinear(&w)?;
    let y_deg = w.deg_y().unwrap_or(0);
    let (branch, bound) = if y_deg != 0 {
        let step = est.n / est.g;
        let (b, r) = (y_deg / step, y_deg % step);
        (SuBranch::YDegree { b, r }, b as i64 * est.big_n + est.m as i64 * r as i64)
    } else {
        let x_deg = w.deg_x().unwrap_or(0);
        let step = est.m / est.g;
        let (b1, r1) = (x_deg / step, x_deg % step);
        (SuBranch::XDegree { b1, r1 }, b1 as i64 * est.big_n + est.n as i64 * r1 as i64)
    };
    est.branch = Some(branch);
    Ok(SuBound {
        bound,
        estimate: est,
        swapped,
    })
}

/// One evaluated instance of `deg w(p, q) > min(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaInstance {
    pub holds: bool,
    pub degree: u32,
    pub n: u32,
    pub k: u32,
    pub value: Polynomial,
}

pub fn verify_lemma_instance(w: &Polynomial, p: &Polynomial, q: &Polynomial) -> Result<bool> {
    Ok(lemma_instance(w, p, q)?.holds)
}

/// Expands `w(p, q)` for an elementary reduced pair and compares degrees.
pub fn lemma_instance(w: &Polynomial, p: &Polynomial, q: &Polynomial) -> Result<LemmaInstance> {
    if !is_elementary_reduced(p, q)? {
        return Err(Error::HypothesisViolation("pair is not elementary reduced".into()));
    }
    let (w, p, q, _) = ordered(w, p, q)?;
    let (n, m, k) = independent_degrees(&p, &q)?;
    if n < 2 || m < 2 {
        return Err(Error::HypothesisViolation(format!(
            "generator degrees {n} and {m} must both be at least 2"
        )));
    }
    check_nonlinear(&w)?;
    let value = substitute(&w, &p, &q);
    let degree = value.total_degree().expect("independent generators");
    Ok(LemmaInstance {
        holds: degree > n.min(k),
        degree,
        n,
        k,
        value,
    })
}

/// Per-iterate data of [`phi_infinity_probe`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeLevel {
    pub k: u32,
    /// The degree-bounded part of `phi^k(Q[x,y])` was computed completely.
    pub exact: bool,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    pub basis: Vec<Polynomial>,
    pub levels: Vec<ProbeLevel>,
}

/// Polynomials of degree at most `max_deg` lying in `phi^k(Q[x,y])` for
/// every `1 <= k <= iters`.
///
/// Each image algebra is `Q[a, b]` for the elementary reduction `(a, b)` of
/// the iterate's images. Products `a^i b^j` up to the degree cap
/// `2*max_deg + deg a + deg b` are combined to cancel everything above
/// `max_deg`. That is complete when the leading forms of `a`, `b` are
/// independent (no cancellation among products at all). Otherwise the level
/// is settled by Gröbner normal forms when the budget allows, and is marked
/// inexact when it does not.
pub fn phi_infinity_probe(phi: &Endomorphism, max_deg: u32, iters: u32) -> Result<ProbeResult> {
    phi_infinity_probe_with_budget(phi, max_deg, iters, &mut Budget::default())
}

pub fn phi_infinity_probe_with_budget(
    phi: &Endomorphism,
    max_deg: u32,
    iters: u32,
    budget: &mut Budget,
) -> Result<ProbeResult> {
    if !phi.is_injective() {
        return Err(Error::NonInjective);
    }
    if iters == 0 {
        return Err(Error::InvalidArgument("the number of iterates must be at least 1".into()));
    }
    let mut columns = monomials_up_to(max_deg);
    columns.reverse();
    let ncols = columns.len();
    let mut space: Option<Vec<Vec<Rational>>> = None;
    let mut levels = Vec::new();
    let mut iterate = Endomorphism::identity();
    for k in 1..=iters {
        iterate = iterate.compose(phi);
        let reduced = elementary_reduce(&iterate.x_image, &iterate.y_image)?;
        let (a, b) = (reduced.first, reduced.second);
        let independent = !jacobian(&a.leading_form(), &b.leading_form()).is_zero();
        let (level, exact) = if independent {
            (product_space(&a, &b, max_deg, &columns), true)
        } else {
            match normal_form_space(&a, &b, &columns, budget) {
                Some(s) => (s, true),
                None => (product_space(&a, &b, max_deg, &columns), false),
            }
        };
        levels.push(ProbeLevel {
            k,
            exact,
            dimension: level.len(),
        });
        space = Some(match space {
            None => level,
            Some(prev) => linalg::intersect(&prev, &level, ncols),
        });
    }
    let rows = linalg::row_basis(&space.unwrap_or_default(), ncols);
    let mut basis: Vec<Polynomial> = rows
        .into_iter()
        .map(|row| Polynomial::from_terms(columns.iter().copied().zip(row)))
        .collect();
    basis.sort_by_key(|f| f.lead().map(|(m, _)| m));
    Ok(ProbeResult { basis, levels })
}

/// Combinations of `a^i b^j` (formal degree within the cap) of degree at most
/// `max_deg`, as coefficient vectors over `columns`.
fn product_space(a: &Polynomial, b: &Polynomial, max_deg: u32, columns: &[Monomial]) -> Vec<Vec<Rational>> {
    let (da, db) = (a.total_degree().unwrap(), b.total_degree().unwrap());
    let cap = 2 * max_deg + da + db;
    let mut a_pows = vec![Polynomial::one()];
    while (a_pows.len() as u32) * da <= cap {
        let next = &a_pows[a_pows.len() - 1] * a;
        a_pows.push(next);
    }
    let mut products = Vec::new();
    let mut b_pow = Polynomial::one();
    for j in 0..=cap / db {
        for (i, ap) in a_pows.iter().enumerate() {
            if i as u32 * da + j * db <= cap {
                products.push(ap * &b_pow);
            }
        }
        b_pow = &b_pow * b;
    }
    let mut high: Vec<Monomial> = products
        .iter()
        .flat_map(|f| f.terms().map(|(m, _)| *m).filter(|m| m.total_degree() > max_deg).collect::<Vec<_>>())
        .collect();
    high.sort();
    high.dedup();
    let rows: Vec<Vec<Rational>> = high
        .iter()
        .map(|m| products.iter().map(|f| f.coeff(m)).collect())
        .collect();
    linalg::nullspace(&rows, products.len())
        .into_iter()
        .map(|combo| {
            let f = products
                .iter()
                .zip(&combo)
                .filter(|(_, c)| !c.is_zero())
                .fold(Polynomial::zero(), |acc, (f, c)| &acc + &f.scale(c));
            columns.iter().map(|m| f.coeff(m)).collect()
        })
        .collect()
}

/// `f ∈ Q[a, b]` iff the normal form of `f` modulo `{a - s, b - t}` (with
/// `x, y` eliminated first) involves only `s, t`. Normal forms are linear, so
/// the degree-bounded members form the kernel of one matrix.
fn normal_form_space(a: &Polynomial, b: &Polynomial, columns: &[Monomial], budget: &mut Budget) -> Option<Vec<Vec<Rational>>> {
    let order = TermOrder::ELIMINATE_XY_THEN_ST;
    let tag = |p: &Polynomial, var: usize| &MultiPoly::from_polynomial(p, 4, order) - &MultiPoly::var(4, order, var);
    let gb = buchberger_budgeted(&[tag(a, 2), tag(b, 3)], order, budget)?;
    let forms: Vec<MultiPoly> = columns
        .iter()
        .map(|m| gb.normal_form(&MultiPoly::from_polynomial(&Polynomial::monomial(Rational::one(), *m), 4, order)))
        .collect::<Result<_>>()
        .ok()?;
    let mut outside: Vec<_> = forms
        .iter()
        .flat_map(|f| f.terms().filter(|(e, _)| e[0] > 0 || e[1] > 0).map(|(e, _)| *e).collect::<Vec<_>>())
        .collect();
    outside.sort();
    outside.dedup();
    let rows: Vec<Vec<Rational>> = outside
        .iter()
        .map(|e| {
            forms
                .iter()
                .map(|f| f.terms().find(|(g, _)| *g == e).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    Some(linalg::nullspace(&rows, columns.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn endo(x: &str, y: &str) -> Endomorphism {
        Endomorphism::new(p(x), p(y))
    }

    #[test]
    fn estimate_examples() {
        // deg 2, 3 with D of degree 1
        let e = estimate_n(&p("x^2"), &p("y^3 + y*x")).unwrap();
        assert_eq!((e.n, e.m, e.g, e.k), (2, 3, 1, 3));
        let e = estimate_n(&p("x^2 + y"), &p("x + y^2")).unwrap();
        assert_eq!((e.n, e.m, e.k, e.big_n), (2, 2, 2, 2));
        let e = estimate_n(&p("x"), &p("y")).unwrap();
        assert_eq!((e.k, e.big_n), (0, 1));
        assert_eq!(estimate_n(&p("x"), &p("x")), Err(Error::DependentPair));
        assert_eq!(estimate_n(&p("1"), &p("x")), Err(Error::ConstantInput));
    }

    #[test]
    fn formula_arithmetic() {
        assert_eq!(formula_n(2, 3, 1), 4);
        assert_eq!(formula_n(2, 2, 0), 0);
        assert_eq!(formula_n(1, 1, 0), 1);
        assert_eq!(formula_n(4, 6, 3), 12 - 10 + 3 + 2);
    }

    #[test]
    fn su_bound_examples() {
        // n = 2, m = 3, g = 1, dependent leading forms x^2, x^3
        let (f, g) = (p("x^2 + y"), p("x^3"));
        let est = estimate_n(&f, &g).unwrap();
        let s = su_lower_bound(&p("y^3"), &f, &g).unwrap();
        assert_eq!(s.estimate.branch, Some(SuBranch::YDegree { b: 1, r: 1 }));
        assert_eq!(s.bound, est.big_n + 3);
        let s = su_lower_bound(&p("x^3"), &f, &g).unwrap();
        assert_eq!(s.estimate.branch, Some(SuBranch::XDegree { b1: 1, r1: 0 }));
        assert_eq!(s.bound, est.big_n);
        assert!(matches!(su_lower_bound(&p("x + 2*y"), &f, &g), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn su_bound_swaps_generators() {
        let s = su_lower_bound(&p("x^3"), &p("x^3"), &p("x^2 + y")).unwrap();
        assert!(s.swapped);
        assert_eq!(s.estimate.branch, Some(SuBranch::YDegree { b: 1, r: 1 }));
    }

    #[test]
    fn su_bound_hypotheses() {
        let err = su_lower_bound(&p("x^2"), &p("x^2"), &p("y^3")).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(ref s) if s.contains("independent")));
        let err = su_lower_bound(&p("x^2"), &p("x^2 + y"), &p("y^2")).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(ref s) if s.contains("distinct")));
    }

    #[test]
    fn lemma_examples() {
        let (f, g) = (p("x^2 + y"), p("x + y^3"));
        let inst = lemma_instance(&p("x*y"), &f, &g).unwrap();
        assert_eq!((inst.degree, inst.n, inst.k), (5, 2, 3));
        assert!(inst.holds);
        assert!(matches!(verify_lemma_instance(&p("x"), &f, &g), Err(Error::HypothesisViolation(_))));
        assert!(verify_lemma_instance(&p("x^2 + y^2"), &p("x^2"), &p("y^3")).unwrap());
    }

    #[test]
    fn lemma_rejects_unreduced_pairs() {
        let err = verify_lemma_instance(&p("x^2"), &p("x^2"), &p("y + x^4")).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(ref s) if s.contains("reduced")));
    }

    #[test]
    fn probe_examples() {
        let r = phi_infinity_probe(&endo("x", "y^2"), 4, 3).unwrap();
        let expected: Vec<Polynomial> = ["1", "x", "x^2", "x^3", "x^4"].iter().map(|s| p(s)).collect();
        assert_eq!(r.basis, expected);
        assert!(r.levels.iter().all(|l| l.exact));

        let r = phi_infinity_probe(&endo("x + y^3", "y"), 2, 2).unwrap();
        assert_eq!(r.basis.len(), 6);

        let r = phi_infinity_probe(&endo("x^2", "y^2"), 3, 2).unwrap();
        assert_eq!(r.basis, vec![Polynomial::one()]);

        assert_eq!(phi_infinity_probe(&endo("x", "x"), 2, 2), Err(Error::NonInjective));
    }

    #[test]
    fn probe_with_dependent_leading_forms() {
        // images x^2 + y, x^3: the leading forms are dependent but the pair is reduced
        let phi = endo("x^2 + y", "x^3");
        let r = phi_infinity_probe(&phi, 4, 1).unwrap();
        assert!(r.levels[0].exact);
        assert_eq!(r.basis, vec![Polynomial::one(), p("x^2 + y"), p("x^3"), p("(x^2 + y)^2")]);
    }

    #[test]
    fn probe_contains_fixed_polynomials() {
        let phi = endo("x", "x*y");
        assert!(phi.fixes(&p("x^2 + x")));
        let r = phi_infinity_probe(&phi, 3, 3).unwrap();
        let cols: Vec<Monomial> = monomials_up_to(3);
        let as_row = |f: &Polynomial| cols.iter().map(|m| f.coeff(m)).collect::<Vec<_>>();
        let basis: Vec<Vec<Rational>> = r.basis.iter().map(as_row).collect();
        let mut with = basis.clone();
        with.push(as_row(&p("x^2 + x")));
        assert_eq!(linalg::row_basis(&with, cols.len()).len(), basis.len());
    }

    #[test]
    fn probe_json() {
        let r = phi_infinity_probe(&endo("x^2", "y^2"), 1, 1).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"basis":["1"],"levels":[{"k":1,"exact":true,"dimension":1}]}"#
        );
    }
}
