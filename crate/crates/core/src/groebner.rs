//! A small Buchberger engine over the rationals.
//!
//! The subalgebra membership test uses four variables `(x, y, s, t)` where
//! `s`, `t` are tags for the generators. The retract parametrization search
//! reuses the same engine with its coefficient unknowns as variables, so the
//! variable count is a runtime value (at most [`MAX_VARS`]).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational};

pub const MAX_VARS: usize = 24;

pub type Exponents = [u16; MAX_VARS];

/// Term orders for [`MultiPoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    /// Graded reverse lex with `var0 > var1 > ...`.
    GradedRevLex,
    /// Block order: the first `k` variables outrank everything in the rest,
    /// graded reverse lex inside each block.
    Block(usize),
    /// Pure lex with `var0 > var1 > ...`.
    Lex,
}

impl TermOrder {
    /// `{x, y} >> {s, t}` for four variables `(x, y, s, t)`.
    pub const ELIMINATE_XY_THEN_ST: TermOrder = TermOrder::Block(2);

    pub fn cmp(&self, a: &Exponents, b: &Exponents, nvars: usize) -> Ordering {
        match *self {
            TermOrder::GradedRevLex => grevlex(&a[..nvars], &b[..nvars]),
            TermOrder::Block(k) => {
                let k = k.min(nvars);
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..nvars], &b[k..nvars]))
            }
            TermOrder::Lex => a[..nvars].cmp(&b[..nvars]),
        }
    }
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (ea, eb) in a.iter().zip(b).rev() {
            if ea != eb {
                return eb.cmp(ea);
            }
        }
        Ordering::Equal
    })
}

fn divides(a: &Exponents, b: &Exponents, nvars: usize) -> bool {
    (0..nvars).all(|i| a[i] <= b[i])
}

fn lcm(a: &Exponents, b: &Exponents, nvars: usize) -> Exponents {
    let mut out = [0; MAX_VARS];
    for i in 0..nvars {
        out[i] = a[i].max(b[i]);
    }
    out
}

fn quotient(num: &Exponents, den: &Exponents, nvars: usize) -> Exponents {
    let mut out = [0; MAX_VARS];
    for i in 0..nvars {
        out[i] = num[i] - den[i];
    }
    out
}

fn add_exp(a: &Exponents, b: &Exponents, nvars: usize) -> Exponents {
    let mut out = [0; MAX_VARS];
    for i in 0..nvars {
        out[i] = a[i] + b[i];
    }
    out
}

/// A polynomial in `nvars` variables carrying its term order.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    order: TermOrder,
    // ascending in `order`; the leading term is last
    terms: Vec<(Exponents, Rational)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, order: TermOrder) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        MultiPoly {
            nvars,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, order: TermOrder, c: Rational) -> Self {
        MultiPoly::from_terms(nvars, order, [([0; MAX_VARS], c)])
    }

    pub fn var(nvars: usize, order: TermOrder, i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        MultiPoly::from_terms(nvars, order, [(e, Rational::one())])
    }

    pub fn from_terms<I>(nvars: usize, order: TermOrder, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut acc: HashMap<Exponents, Rational> = HashMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0, nvars));
        let mut p = MultiPoly::zero(nvars, order);
        p.terms = terms;
        p
    }

    /// Embeds a bivariate polynomial with `x ↦ var0`, `y ↦ var1`.
    pub fn from_polynomial(p: &Polynomial, nvars: usize, order: TermOrder) -> Self {
        assert!(nvars >= 2);
        MultiPoly::from_terms(
            nvars,
            order,
            p.terms().map(|(m, c)| {
                let mut e = [0; MAX_VARS];
                e[0] = m.xexp as u16;
                e[1] = m.yexp as u16;
                (e, c.clone())
            }),
        )
    }

    /// Reads variables `i` and `j` back as `x` and `y`; `None` if any other
    /// variable occurs.
    pub fn to_polynomial_in(&self, i: usize, j: usize) -> Option<Polynomial> {
        let mut out = Polynomial::zero();
        for (e, c) in &self.terms {
            let others = (0..self.nvars).any(|v| v != i && v != j && e[v] != 0);
            if others {
                return None;
            }
            out.add_term(Monomial::new(e[i] as u32, e[j] as u32), c.clone());
        }
        Some(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e[..self.nvars].iter().all(|&v| v == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter().rev().map(|(e, c)| (e, c))
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.last().map(|(e, c)| (e, c))
    }

    pub fn leading_monomial(&self) -> Option<&Exponents> {
        self.terms.last().map(|(e, _)| e)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[var] != 0)
    }

    /// Re-sorts under another order.
    pub fn with_order(&self, order: TermOrder) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, order, self.terms.iter().cloned())
    }

    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&(Rational::one() / c)),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars, self.order);
        }
        let mut out = self.clone();
        for (_, v) in out.terms.iter_mut() {
            *v *= c;
        }
        out
    }

    /// `self - c * x^shift * other`, merging the two sorted term lists.
    fn sub_scaled_shift(&self, c: &Rational, shift: &Exponents, other: &MultiPoly) -> MultiPoly {
        let n = self.nvars;
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|(e, v)| (add_exp(e, shift, n), v * c))
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(ta), Some(tb)) => match order.cmp(&ta.0, &tb.0, n) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => {
                        let (e, v) = b.next().unwrap();
                        out.push((e, -v));
                    }
                    Ordering::Equal => {
                        let (e, va) = a.next().unwrap();
                        let (_, vb) = b.next().unwrap();
                        let v = va - vb;
                        if !v.is_zero() {
                            out.push((*e, v));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (e, v) = b.next().unwrap();
                    out.push((e, -v));
                }
                (None, None) => break,
            }
        }
        MultiPoly {
            nvars: n,
            order,
            terms: out,
        }
    }

    /// Substitutes the rational `value` for variable `var`.
    pub fn substitute_value(&self, var: usize, value: &Rational) -> MultiPoly {
        MultiPoly::from_terms(
            self.nvars,
            self.order,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = *e;
                e2[var] = 0;
                (e2, c * crate::poly::pow_rat(value, e[var] as u32))
            }),
        )
    }

    /// Univariate coefficients in `var` when no other variable occurs.
    pub fn as_univariate(&self, var: usize) -> Option<crate::univariate::UniPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if (0..self.nvars).any(|v| v != var && e[v] != 0) {
                return None;
            }
            let d = e[var] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += c;
        }
        Some(crate::univariate::UniPoly::new(coeffs))
    }

    fn format_vars(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&v| e[v] > 0)
                .map(|v| {
                    let name = names.get(v).map(|s| s.to_string()).unwrap_or(format!("z{v}"));
                    if e[v] == 1 {
                        name
                    } else {
                        format!("{name}^{}", e[v])
                    }
                })
                .collect();
            if i > 0 {
                out.push_str(" + ");
            }
            if mono.is_empty() {
                out.push_str(&crate::poly::format_rational(c));
            } else if c.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", crate::poly::format_rational(c), mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = if self.nvars == 4 { &["x", "y", "s", "t"] } else { &[] };
        write!(f, "MultiPoly({})", self.format_vars(names))
    }
}

impl std::ops::Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.sub_scaled_shift(&-Rational::one(), &[0; MAX_VARS], rhs)
    }
}

impl std::ops::Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.sub_scaled_shift(&Rational::one(), &[0; MAX_VARS], rhs)
    }
}

impl std::ops::Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let n = self.nvars;
        let mut acc: HashMap<Exponents, Rational> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                *acc.entry(add_exp(ea, eb, n)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        MultiPoly::from_terms(n, self.order, acc)
    }
}

/// Work counter shared by the bounded procedures.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    remaining: u64,
}

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

impl Budget {
    pub fn new(max_steps: u64) -> Self {
        Budget {
            limit: max_steps,
            remaining: max_steps,
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    /// Spends `n` steps; false once the cap is hit.
    pub fn charge(&mut self, n: u64) -> bool {
        if self.remaining < n {
            self.remaining = 0;
            false
        } else {
            self.remaining -= n;
            true
        }
    }

    pub fn exhausted(&self) -> bool {
        self.remaining == 0
    }

    /// The step cap this budget started with.
    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_MAX_STEPS)
    }
}

/// A reduced, monic Gröbner basis, sorted by descending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<MultiPoly>,
    order: TermOrder,
    nvars: usize,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    /// Full reduction of `f` modulo the basis.
    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.order != self.order || f.nvars != self.nvars {
            return Err(Error::OrderMismatch);
        }
        Ok(reduce(f, &self.generators, &mut Budget::unlimited()).expect("unlimited budget"))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// Full reduction; `None` if the budget runs out.
fn reduce(f: &MultiPoly, basis: &[MultiPoly], budget: &mut Budget) -> Option<MultiPoly> {
    let n = f.nvars;
    let mut rest = f.clone();
    let mut remainder: Vec<(Exponents, Rational)> = Vec::new();
    while let Some((lm, lc)) = rest.leading_term() {
        let lm = *lm;
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|gm| divides(gm, &lm, n)));
        match divisor {
            Some(g) => {
                // one step per term touched
                if !budget.charge(g.num_terms() as u64) {
                    return None;
                }
                let (gm, gc) = g.leading_term().unwrap();
                let c = lc / gc;
                let shift = quotient(&lm, gm, n);
                rest = rest.sub_scaled_shift(&c, &shift, g);
            }
            None => {
                remainder.push(rest.terms.pop().unwrap());
            }
        }
    }
    remainder.reverse();
    Some(MultiPoly {
        nvars: n,
        order: f.order,
        terms: remainder,
    })
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let n = f.nvars;
    let (fm, fc) = f.leading_term().unwrap();
    let (gm, gc) = g.leading_term().unwrap();
    let l = lcm(fm, gm, n);
    let zero = MultiPoly::zero(n, f.order);
    let a = zero.sub_scaled_shift(&-(Rational::one() / fc), &quotient(&l, fm, n), f);
    a.sub_scaled_shift(&(Rational::one() / gc), &quotient(&l, gm, n), g)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Panics if `gens` is empty or the generators disagree on variables or order.
pub fn buchberger(gens: &[MultiPoly], order: TermOrder) -> GroebnerBasis {
    buchberger_budgeted(gens, order, &mut Budget::unlimited()).expect("unlimited budget")
}

/// As [`buchberger`], giving up with `None` once `budget` is spent.
pub fn buchberger_budgeted(gens: &[MultiPoly], order: TermOrder, budget: &mut Budget) -> Option<GroebnerBasis> {
    assert!(!gens.is_empty(), "buchberger needs at least one generator");
    let n = gens[0].nvars;
    assert!(gens.iter().all(|g| g.nvars == n), "generators disagree on variable count");

    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in gens {
        let g = g.with_order(order);
        if !g.is_zero() {
            basis.push(g.monic());
        }
    }
    if basis.is_empty() {
        return Some(GroebnerBasis {
            generators: Vec::new(),
            order,
            nvars: n,
        });
    }
    if basis.iter().any(MultiPoly::is_constant) {
        return Some(unit_basis(n, order));
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let lcm_of = |basis: &[MultiPoly], (i, j): (usize, usize)| {
        lcm(basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap(), n)
    };

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let la = lcm_of(&basis, pairs[a]);
                let lb = lcm_of(&basis, pairs[b]);
                order.cmp(&la, &lb, n).then(pairs[a].cmp(&pairs[b]))
            })
            .unwrap();
        let (i, j) = pairs.remove(best);
        let mi = *basis[i].leading_monomial().unwrap();
        let mj = *basis[j].leading_monomial().unwrap();
        let l = lcm(&mi, &mj, n);

        // product criterion
        if add_exp(&mi, &mj, n) == l {
            continue;
        }
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].leading_monomial().unwrap(), &l, n)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        if !budget.charge(1) {
            return None;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis, budget)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Some(unit_basis(n, order));
        }
        let new_index = basis.len();
        basis.push(r.monic());
        for k in 0..new_index {
            pairs.push((k, new_index));
        }
    }

    reduce_basis(basis, order, n, budget)
}

fn unit_basis(n: usize, order: TermOrder) -> GroebnerBasis {
    GroebnerBasis {
        generators: vec![MultiPoly::constant(n, order, Rational::one())],
        order,
        nvars: n,
    }
}

fn reduce_basis(basis: Vec<MultiPoly>, order: TermOrder, n: usize, budget: &mut Budget) -> Option<GroebnerBasis> {
    // drop generators whose leading monomial is divisible by another's
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let gm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            let hm = h.leading_monomial().unwrap();
            k != idx && divides(hm, gm, n) && (hm != gm || k < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, g)| g.clone())
            .collect();
        let mut tail = minimal[idx].clone();
        let lead = tail.terms.pop().unwrap();
        let mut g = reduce(&tail, &others, budget)?;
        g.terms.push(lead);
        reduced.push(g.monic());
    }
    reduced.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap(), n));
    Some(GroebnerBasis {
        generators: reduced,
        order,
        nvars: n,
    })
}

pub fn normal_form(f: &MultiPoly, gb: &GroebnerBasis) -> Result<MultiPoly> {
    gb.normal_form(f)
}

/// Decides `f ∈ Q[u, v]`.
///
/// Returns `w` with `w(u, v) = f`, written as a polynomial in `x` (standing
/// for `u`) and `y` (standing for `v`).
pub fn subalgebra_membership(f: &Polynomial, u: &Polynomial, v: &Polynomial) -> Result<Option<Polynomial>> {
    if u.is_constant() || v.is_constant() {
        return Err(Error::ConstantGenerator);
    }
    let order = TermOrder::ELIMINATE_XY_THEN_ST;
    let tag = |p: &Polynomial, var: usize| &MultiPoly::from_polynomial(p, 4, order) - &MultiPoly::var(4, order, var);
    let gb = buchberger(&[tag(u, 2), tag(v, 3)], order);
    let nf = gb.normal_form(&MultiPoly::from_polynomial(f, 4, order))?;
    Ok(nf.to_polynomial_in(2, 3))
}
