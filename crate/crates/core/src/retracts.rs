//! Retracts of `Q[x,y]`, functional decomposition and test polynomials.
//!
//! A proper retract is `Q[q]` for a single `q`, and `q` generates one iff
//! `q(g1(t), g2(t)) = t` for univariate `g1`, `g2`; the retraction is then
//! `x ↦ g1(q), y ↦ g2(q)`. A polynomial is a test polynomial iff it lies in
//! no proper retract.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::endo::{substitute, Endomorphism};
use crate::error::{Error, Result};
use crate::groebner::{buchberger_budgeted, Budget, MultiPoly, TermOrder, MAX_VARS};
use crate::poly::{rat, Monomial, Polynomial, Rational};
use crate::reduction::is_coordinate;
use crate::univariate::UniPoly;
use crate::verdict::Verdict;

pub const DEFAULT_B_PARAM: u32 = 4;
pub const REASON_STEP_CAP: &str = "step cap";

/// `generator(g1(t), g2(t)) = t`, with the induced retraction onto `Q[generator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractCertificate {
    pub generator: Polynomial,
    pub g1: UniPoly,
    pub g2: UniPoly,
    pub retraction: Endomorphism,
}

impl RetractCertificate {
    pub fn new(generator: Polynomial, g1: UniPoly, g2: UniPoly) -> Self {
        let retraction = Endomorphism::new(g1.eval_poly(&generator), g2.eval_poly(&generator));
        RetractCertificate {
            generator,
            g1,
            g2,
            retraction,
        }
    }

    /// The parametrization identity, idempotency and `retraction(q) = q`.
    pub fn verify(&self) -> bool {
        let q = &self.generator;
        let param = substitute(q, &self.g1.to_polynomial(), &self.g2.to_polynomial());
        let expected = Endomorphism::new(self.g1.eval_poly(q), self.g2.eval_poly(q));
        param == Polynomial::x()
            && self.retraction == expected
            && self.retraction.compose(&self.retraction) == self.retraction
            && self.retraction.apply(q) == *q
    }
}

/// `f = g(q)` by leading-form peeling; `None` when `f ∉ Q[q]`.
pub fn univariate_membership(f: &Polynomial, q: &Polynomial) -> Result<Option<UniPoly>> {
    let Some(m) = q.total_degree().filter(|&m| m > 0) else {
        return Err(Error::ConstantGenerator);
    };
    let lq = q.leading_form();
    let mut powers = vec![Polynomial::one()];
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut rest = f.clone();
    while let Some(n) = rest.total_degree().filter(|&n| n > 0) {
        if n % m != 0 {
            return Ok(None);
        }
        let k = (n / m) as usize;
        while powers.len() <= k {
            let next = &powers[powers.len() - 1] * q;
            powers.push(next);
        }
        let Some(c) = rest.leading_form().proportional_to(&powers[k].leading_form()) else {
            return Ok(None);
        };
        // the leading form of q^k is lq^k, so this is the scalar of Lf against lq^k
        debug_assert_eq!(powers[k].leading_form(), lq.pow(k as u32));
        rest -= &powers[k].scale(&c);
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c;
    }
    if coeffs.is_empty() {
        coeffs.push(Rational::zero());
    }
    coeffs[0] = rest.constant_term();
    Ok(Some(UniPoly::new(coeffs)))
}

/// `p = g(q)` with `deg g = d`, `q` monic in the canonical order and without
/// constant term.
///
/// Under that normalization the inner polynomial is unique, so the search is
/// complete: `None` means no decomposition with outer degree `d` exists.
pub fn decompose_poly(p: &Polynomial, d: u32) -> Result<Option<(UniPoly, Polynomial)>> {
    let n = p.total_degree().filter(|&n| n > 0).ok_or(Error::ConstantInput)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("outer degree must be at least 2, got {d}")));
    }
    if n % d != 0 {
        return Err(Error::DegreeMismatch { d, degree: n });
    }
    let e = n / d;
    let lp = p.leading_form();
    let c = lp.lead().map(|(_, c)| c.clone()).expect("non-zero form");
    let Some(top) = homogeneous_root(&lp.scale(&(Rational::one() / &c)), d, e) else {
        return Ok(None);
    };
    let divisor = top.pow(d - 1).scale(&(&c * rat(d as i64)));
    let mut q = top;
    for j in 1..e {
        let residual = p - &q.pow(d).scale(&c);
        let part = residual.homogeneous_part(n - j);
        let Some(layer) = part.div_exact(&divisor) else {
            return Ok(None);
        };
        q += &layer;
    }
    match univariate_membership(p, &q)? {
        Some(g) if g.degree() == Some(d as usize) => Ok(Some((g, q))),
        _ => Ok(None),
    }
}

/// The monic degree-`e` form `r` with `r^d = f`, for a monic form `f`.
fn homogeneous_root(f: &Polynomial, d: u32, e: u32) -> Option<Polynomial> {
    // dehomogenize at x = 1; the canonical lead is the top power of y
    let top_y = f.lead()?.0.yexp;
    if top_y % d != 0 {
        return None;
    }
    let s = (top_y / d) as usize;
    let mut fy = vec![Rational::zero(); top_y as usize + 1];
    for (m, c) in f.terms() {
        fy[m.yexp as usize] = c.clone();
    }
    let mut root = vec![Rational::zero(); s + 1];
    root[s] = Rational::one();
    let ds = d as usize * s;
    for i in 1..=s {
        let current = UniPoly::new(root.clone()).pow(d);
        root[s - i] = (&fy[ds - i] - current.coeff(ds - i)) / rat(d as i64);
    }
    let r = Polynomial::from_terms(
        root.into_iter()
            .enumerate()
            .map(|(j, c)| (Monomial::new(e - j as u32, j as u32), c)),
    );
    (r.pow(d) == *f).then_some(r)
}

/// Some `(d, g, h)` with `q = g(h)` and `deg g = d >= 2`, smallest `d` first.
pub fn nontrivial_decomposition(q: &Polynomial) -> Result<Option<(u32, UniPoly, Polynomial)>> {
    let n = q.total_degree().filter(|&n| n > 0).ok_or(Error::ConstantInput)?;
    for d in (2..=n).filter(|d| n % d == 0) {
        if let Some((g, h)) = decompose_poly(q, d)? {
            return Ok(Some((d, g, h)));
        }
    }
    Ok(None)
}

pub fn is_retract_generator(q: &Polynomial, b_param: u32) -> Result<Verdict<RetractCertificate>> {
    is_retract_generator_with_budget(q, b_param, &mut Budget::default())
}

/// Decides whether `Q[q]` is a retract, searching parametrizations of degree
/// at most `b_param` when no cheaper argument settles it.
pub fn is_retract_generator_with_budget(
    q: &Polynomial,
    b_param: u32,
    budget: &mut Budget,
) -> Result<Verdict<RetractCertificate>> {
    if q.is_constant() {
        return Err(Error::ConstantInput);
    }
    if q.at_y_zero() == Polynomial::x() {
        return Ok(yes(q, UniPoly::var(), UniPoly::zero()));
    }
    if q.at_x_zero() == Polynomial::y() {
        return Ok(yes(q, UniPoly::zero(), UniPoly::var()));
    }
    if let Some((d, g, h)) = nontrivial_decomposition(q)? {
        return Ok(Verdict::no(format!(
            "q = g(h) with g = {g} of degree {d} and h = {h}; deg q(g1(t), g2(t)) is 0 or a multiple of {d}, never 1"
        )));
    }
    if let Some(cert) = coordinate_parametrization(q)? {
        return Ok(Verdict::Yes(cert));
    }
    if let Some((g1, g2)) = axis_section(q) {
        return Ok(yes(q, g1, g2));
    }
    Ok(match bounded_search(q, b_param, budget) {
        Search::Found(g1, g2) => yes(q, g1, g2),
        Search::StepCap => step_cap(b_param, budget),
        Search::Exhausted => Verdict::inconclusive(
            format!("no parametrization with deg g1, deg g2 <= {b_param}"),
            [("B_param", b_param as u64)],
        ),
    })
}

fn yes(q: &Polynomial, g1: UniPoly, g2: UniPoly) -> Verdict<RetractCertificate> {
    let cert = RetractCertificate::new(q.clone(), g1, g2);
    debug_assert!(cert.verify());
    Verdict::Yes(cert)
}

fn step_cap<C>(b_param: u32, budget: &Budget) -> Verdict<C> {
    Verdict::inconclusive(
        REASON_STEP_CAP,
        [("B_param", b_param as u64), ("max_steps", budget.limit())],
    )
}

/// For a coordinate `q` with automorphism `alpha = (q, q')`, the inverse
/// `(a1, a2)` satisfies `q(a1(s, r), a2(s, r)) = s`; take `r = 0`.
fn coordinate_parametrization(q: &Polynomial) -> Result<Option<RetractCertificate>> {
    let Verdict::Yes(coord) = is_coordinate(q)? else {
        return Ok(None);
    };
    let Some(inv) = coord.decomposition.inverse_automorphism() else {
        return Ok(None);
    };
    let at_axis = |a: &Polynomial| UniPoly::from_polynomial(&a.at_y_zero()).expect("only x remains");
    let cert = RetractCertificate::new(q.clone(), at_axis(&inv.x_image), at_axis(&inv.y_image));
    Ok(cert.verify().then_some(cert))
}

/// Parametrizations with one constant component: `g2 = c` works iff
/// `q(x, c)` is linear in `x` with non-zero slope. Likewise with `x` and `y`
/// exchanged.
fn axis_section(q: &Polynomial) -> Option<(UniPoly, UniPoly)> {
    if let Some((g1, c)) = constant_second(q) {
        return Some((g1, UniPoly::constant(c)));
    }
    let (g2, c) = constant_second(&q.swap_variables())?;
    Some((UniPoly::constant(c), g2))
}

fn constant_second(q: &Polynomial) -> Option<(UniPoly, Rational)> {
    // q = sum_i a_i(y) x^i
    let mut layers: Vec<Vec<Rational>> = vec![Vec::new(); q.deg_x()? as usize + 1];
    for (m, c) in q.terms() {
        let layer = &mut layers[m.xexp as usize];
        if layer.len() <= m.yexp as usize {
            layer.resize(m.yexp as usize + 1, Rational::zero());
        }
        layer[m.yexp as usize] = c.clone();
    }
    let layers: Vec<UniPoly> = layers.into_iter().map(UniPoly::new).collect();
    if layers.len() < 2 || layers[1].is_zero() {
        return None;
    }
    let candidates: Vec<Rational> = match layers.iter().skip(2).find(|a| !a.is_zero()) {
        Some(a) => {
            let mut roots = a.rational_roots()?;
            roots.sort_by(|u, v| (u.abs(), u).cmp(&(v.abs(), v)));
            roots
        }
        None => small_values(layers[1].degree().unwrap_or(0) + 1),
    };
    let c = candidates.into_iter().find(|c| {
        layers.iter().skip(2).all(|a| a.eval(c).is_zero()) && !layers[1].eval(c).is_zero()
    })?;
    let (slope, offset) = (layers[1].eval(&c), layers[0].eval(&c));
    let g = UniPoly::new(vec![-offset / &slope, Rational::one() / &slope]);
    Some((g, c))
}

/// `0, 1, -1, 2, -2, ...`, `count` values.
fn small_values(count: usize) -> Vec<Rational> {
    (0..count as i64)
        .map(|i| if i % 2 == 1 { rat((i + 1) / 2) } else { rat(-i / 2) })
        .collect()
}

enum Search {
    Found(UniPoly, UniPoly),
    Exhausted,
    StepCap,
}

/// Tries every degree pattern `1 <= d1, d2 <= bound`, solving
/// `q(g1(t), g2(t)) = t` in the unknown coefficients with Gröbner bases.
/// Constant components are covered exactly by the axis sections.
fn bounded_search(q: &Polynomial, bound: u32, budget: &mut Budget) -> Search {
    let mut patterns: Vec<(u32, u32)> = (1..=bound).flat_map(|a| (1..=bound).map(move |b| (a, b))).collect();
    patterns.sort_by_key(|&(a, b)| (a + b, a));
    for (d1, d2) in patterns {
        if (d1 + d2 + 2) as usize > MAX_VARS || top_form_cannot_cancel(q, d1, d2) {
            continue;
        }
        let nvars = (d1 + d2 + 2) as usize;
        let eqs = parametrization_system(q, d1, d2);
        match rational_point(eqs, nvars, budget) {
            Point::Found(values) => {
                let coeff = |slot: usize| values[unknown_index(nvars, slot)].clone();
                let g1 = UniPoly::new((0..=d1 as usize).map(coeff).collect());
                let g2 = UniPoly::new((d1 as usize + 1..nvars).map(coeff).collect());
                let param = substitute(q, &g1.to_polynomial(), &g2.to_polynomial());
                if param == Polynomial::x() {
                    return Search::Found(g1, g2);
                }
            }
            Point::StepCap => return Search::StepCap,
            Point::Infeasible | Point::NotFound => {}
        }
    }
    Search::Exhausted
}

/// With exact degrees `(d1, d2)`, the top of `q(g1, g2)` comes from the
/// weighted top form of `q`; a single monomial there cannot cancel.
fn top_form_cannot_cancel(q: &Polynomial, d1: u32, d2: u32) -> bool {
    let weight = |m: &Monomial| m.xexp * d1 + m.yexp * d2;
    let top = q.terms().map(|(m, _)| weight(m)).max().unwrap_or(0);
    let count = q.terms().filter(|(m, _)| weight(m) == top).count();
    count == 1 && top != 1
}

/// Variable of the `slot`-th unknown in `a_0..a_d1, b_0..b_d2`. Leading
/// coefficients come first, which keeps the Gröbner bases small.
fn unknown_index(nvars: usize, slot: usize) -> usize {
    nvars - 1 - slot
}

/// Coefficients of `q(g1(t), g2(t)) - t` as polynomials in the unknowns
/// `a_0..a_d1, b_0..b_d2`.
fn parametrization_system(q: &Polynomial, d1: u32, d2: u32) -> Vec<MultiPoly> {
    let nvars = (d1 + d2 + 2) as usize;
    let order = TermOrder::GradedRevLex;
    let unknowns = |start: usize, len: u32| -> Vec<MultiPoly> {
        (0..=len as usize).map(|i| MultiPoly::var(nvars, order, unknown_index(nvars, start + i))).collect()
    };
    let g1 = unknowns(0, d1);
    let g2 = unknowns(d1 as usize + 1, d2);
    let one = vec![MultiPoly::constant(nvars, order, Rational::one())];
    let powers = |g: &Vec<MultiPoly>, max: u32| {
        let mut out = vec![one.clone()];
        for i in 1..=max as usize {
            out.push(tpoly_mul(&out[i - 1], g));
        }
        out
    };
    let p1 = powers(&g1, q.deg_x().unwrap_or(0));
    let p2 = powers(&g2, q.deg_y().unwrap_or(0));
    let mut total: Vec<MultiPoly> = Vec::new();
    for (m, c) in q.terms() {
        let term = tpoly_mul(&p1[m.xexp as usize], &p2[m.yexp as usize]);
        if total.len() < term.len() {
            total.resize(term.len(), MultiPoly::zero(nvars, order));
        }
        for (acc, t) in total.iter_mut().zip(&term) {
            *acc = &*acc + &t.scale(c);
        }
    }
    if total.len() < 2 {
        total.resize(2, MultiPoly::zero(nvars, order));
    }
    total[1] = &total[1] - &one[0];
    total.into_iter().filter(|e| !e.is_zero()).collect()
}

fn tpoly_mul(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let (nvars, order) = (a[0].nvars(), a[0].order());
    let mut out = vec![MultiPoly::zero(nvars, order); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

enum Point {
    Found(Vec<Rational>),
    /// The equations have no common complex zero.
    Infeasible,
    /// Possibly feasible, but no rational point was reached.
    NotFound,
    StepCap,
}

/// A rational zero of `eqs`, fixing one variable at a time: a rational root
/// of the elimination polynomial when there is one, a small value when the
/// variable is free.
fn rational_point(eqs: Vec<MultiPoly>, nvars: usize, budget: &mut Budget) -> Point {
    let mut values = vec![None; nvars];
    match solve_rec(eqs, &mut values, budget) {
        Point::Found(_) => Point::Found(values.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect()),
        other => other,
    }
}

fn solve_rec(eqs: Vec<MultiPoly>, values: &mut Vec<Option<Rational>>, budget: &mut Budget) -> Point {
    let eqs: Vec<MultiPoly> = eqs
        .into_iter()
        .map(|e| e.with_order(TermOrder::GradedRevLex))
        .filter(|e| !e.is_zero())
        .collect();
    if eqs.iter().any(MultiPoly::is_constant) {
        return Point::Infeasible;
    }
    if eqs.is_empty() {
        return Point::Found(Vec::new());
    }
    let Some(gb) = buchberger_budgeted(&eqs, TermOrder::GradedRevLex, budget) else {
        return Point::StepCap;
    };
    if gb.is_unit() {
        return Point::Infeasible;
    }
    let nvars = values.len();
    let v = (0..nvars)
        .rev()
        .find(|&i| gb.generators().iter().any(|g| g.involves(i)))
        .expect("non-constant basis");
    let order = TermOrder::Block(v);
    let elim_input: Vec<MultiPoly> = gb.generators().iter().map(|g| g.with_order(order)).collect();
    let Some(elim) = buchberger_budgeted(&elim_input, order, budget) else {
        return Point::StepCap;
    };
    let univariate = elim
        .generators()
        .iter()
        .filter(|g| !g.is_constant())
        .find_map(|g| g.as_univariate(v));
    let candidates = match univariate {
        Some(u) => match u.rational_roots() {
            Some(r) => r,
            None => return Point::NotFound,
        },
        None => small_values(7),
    };
    for c in candidates {
        values[v] = Some(c.clone());
        let sub: Vec<MultiPoly> = gb.generators().iter().map(|g| g.substitute_value(v, &c)).collect();
        match solve_rec(sub, values, budget) {
            Point::Found(_) => return Point::Found(Vec::new()),
            Point::StepCap => return Point::StepCap,
            Point::Infeasible | Point::NotFound => {}
        }
        values[v] = None;
    }
    Point::NotFound
}

/// `p = g(generator)` together with the retract certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractMembership {
    pub certificate: RetractCertificate,
    pub g: UniPoly,
    /// The divisor branch `deg g` that succeeded.
    pub d: u32,
}

impl RetractMembership {
    pub fn verify(&self, p: &Polynomial) -> bool {
        self.certificate.verify() && self.g.eval_poly(&self.certificate.generator) == *p
    }
}

/// Outcome of one divisor branch of [`retract_membership`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    pub d: u32,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// False when the branch ended in a bounded search that found nothing.
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub verdict: Verdict<RetractMembership>,
    pub branches: Vec<BranchRecord>,
}

pub fn retract_membership(p: &Polynomial, b_param: u32) -> Result<Verdict<RetractMembership>> {
    Ok(retract_membership_report(p, b_param, &mut Budget::default())?.verdict)
}

/// Decides whether `p` lies in a proper retract, one divisor `d` of `deg p`
/// at a time in ascending order: `p = g(q)` with `deg g = d`, then `Q[q]`
/// a retract.
pub fn retract_membership_report(p: &Polynomial, b_param: u32, budget: &mut Budget) -> Result<MembershipReport> {
    let n = p.total_degree().filter(|&n| n > 0).ok_or(Error::ConstantInput)?;
    let mut branches = Vec::new();
    let mut pending: Option<Verdict<RetractMembership>> = None;
    for d in (1..=n).filter(|d| n % d == 0) {
        let (g, q) = if d == 1 {
            (UniPoly::var(), p.clone())
        } else {
            match decompose_poly(p, d)? {
                Some(found) => found,
                None => {
                    branches.push(BranchRecord {
                        d,
                        outcome: "no".into(),
                        reason: Some(format!("p is not g(q) with deg g = {d}")),
                        exhaustive: true,
                    });
                    continue;
                }
            }
        };
        let verdict = is_retract_generator_with_budget(&q, b_param, budget)?;
        branches.push(BranchRecord {
            d,
            outcome: verdict.outcome().to_string(),
            reason: verdict.reason().map(str::to_string),
            exhaustive: !verdict.is_inconclusive(),
        });
        match verdict {
            Verdict::Yes(certificate) => {
                return Ok(MembershipReport {
                    verdict: Verdict::Yes(RetractMembership { certificate, g, d }),
                    branches,
                });
            }
            Verdict::Inconclusive { reason, bounds } => {
                if pending.is_none() {
                    pending = Some(Verdict::Inconclusive { reason, bounds });
                }
            }
            Verdict::No { .. } => {}
        }
    }
    let verdict = pending.unwrap_or_else(|| Verdict::no("every divisor branch is refuted"));
    Ok(MembershipReport { verdict, branches })
}

/// Evidence attached to a positive test-polynomial verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestPolyEvidence {
    pub note: String,
    pub bounds: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestPolyReport {
    pub verdict: Verdict<TestPolyEvidence>,
    /// A non-automorphism fixing `p`, present when `p` is not a test polynomial.
    pub witness: Option<Endomorphism>,
    pub retract_found: Option<RetractCertificate>,
    pub branches: Vec<BranchRecord>,
}

pub fn is_test_polynomial(p: &Polynomial, b_param: u32) -> Result<TestPolyReport> {
    is_test_polynomial_with_budget(p, b_param, &mut Budget::default())
}

pub fn is_test_polynomial_with_budget(p: &Polynomial, b_param: u32, budget: &mut Budget) -> Result<TestPolyReport> {
    let report = retract_membership_report(p, b_param, budget)?;
    let branches = report.branches;
    Ok(match report.verdict {
        Verdict::Yes(member) => {
            let witness = construct_degenerate_fixer(&member.certificate, p)?;
            TestPolyReport {
                verdict: Verdict::no(format!(
                    "p = g(q) with g = {} lies in the proper retract Q[q], q = {}",
                    member.g, member.certificate.generator
                )),
                witness: Some(witness),
                retract_found: Some(member.certificate),
                branches,
            }
        }
        Verdict::No { .. } => TestPolyReport {
            verdict: Verdict::Yes(TestPolyEvidence {
                note: "no divisor branch admits a proper retract containing p".into(),
                bounds: BTreeMap::from([("B_param".to_string(), b_param as u64)]),
            }),
            witness: None,
            retract_found: None,
            branches,
        },
        Verdict::Inconclusive { reason, bounds } => TestPolyReport {
            verdict: Verdict::Inconclusive { reason, bounds },
            witness: None,
            retract_found: None,
            branches,
        },
    })
}

/// The retraction of `cert`, which fixes every element of `Q[generator]`
/// and has algebraically dependent images.
pub fn construct_degenerate_fixer(cert: &RetractCertificate, p: &Polynomial) -> Result<Endomorphism> {
    if univariate_membership(p, &cert.generator)?.is_none() {
        return Err(Error::NotInRetract);
    }
    Ok(cert.retraction.clone())
}
