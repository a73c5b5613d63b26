#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use retractlab_core::poly::{rat, ratio};
use retractlab_core::{Endomorphism, Monomial, Polynomial, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(text: &str) -> Polynomial {
    text.parse().unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn endo(fx: &str, fy: &str) -> Endomorphism {
    Endomorphism::new(p(fx), p(fy))
}

/// Nonzero rational with numerator and denominator bounded by `height`.
pub fn small_rational(r: &mut ChaCha8Rng, height: i64) -> Rational {
    loop {
        let n = r.gen_range(-height..=height);
        if n != 0 {
            return ratio(n, r.gen_range(1..=height));
        }
    }
}

pub fn small_integer(r: &mut ChaCha8Rng, height: i64) -> Rational {
    loop {
        let n = r.gen_range(-height..=height);
        if n != 0 {
            return rat(n);
        }
    }
}

/// Random polynomial of total degree at most `max_deg` with at most `terms`
/// terms. May be zero.
pub fn random_poly(r: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    for _ in 0..terms {
        let total = r.gen_range(0..=max_deg);
        let j = r.gen_range(0..=total);
        out.add_term(Monomial::new(total - j, j), small_rational(r, 3));
    }
    out
}

/// Random polynomial of exact total degree `deg`.
pub fn random_poly_of_degree(r: &mut ChaCha8Rng, deg: u32, terms: usize) -> Polynomial {
    loop {
        let j = r.gen_range(0..=deg);
        let mut out = random_poly(r, deg, terms);
        out.add_term(Monomial::new(deg - j, j), small_rational(r, 3));
        if out.total_degree() == Some(deg) {
            return out;
        }
    }
}

pub fn random_endo(r: &mut ChaCha8Rng, max_deg: u32) -> Endomorphism {
    let dx = r.gen_range(1..=max_deg);
    let dy = r.gen_range(1..=max_deg);
    Endomorphism::new(random_poly_of_degree(r, dx, 4), random_poly_of_degree(r, dy, 4))
}

// proptest strategies

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

pub fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, arb_rational()), 0..=max_terms).prop_map(
        move |terms| {
            Polynomial::from_terms(terms.into_iter().filter(|(i, j, _)| i + j <= max_deg).map(
                |(i, j, c)| (Monomial::new(i, j), c),
            ))
        },
    )
}

pub fn arb_nonzero_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    arb_poly(max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_nonconstant_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    arb_poly(max_deg, max_terms).prop_filter("non-constant", |p| !p.is_constant())
}

pub fn arb_endo(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Endomorphism> {
    (arb_poly(max_deg, max_terms), arb_poly(max_deg, max_terms))
        .prop_map(|(a, b)| Endomorphism::new(a, b))
}

/// Random invertible step; elementary exponents in `1..=max_k`.
pub fn random_step(r: &mut ChaCha8Rng, max_k: u32) -> retractlab_core::reduction::ReductionStep {
    use retractlab_core::reduction::ReductionStep;
    match r.gen_range(0..3) {
        0 => loop {
            let [a, b, c, d] = [0; 4].map(|_| {
                if r.gen_bool(0.3) {
                    rat(0)
                } else {
                    small_rational(r, 3)
                }
            });
            if &a * &d != &b * &c {
                return ReductionStep::LinearMix { a, b, c, d };
            }
        },
        1 => ReductionStep::ElemOnFirst {
            mu: small_rational(r, 3),
            k: r.gen_range(1..=max_k),
        },
        _ => ReductionStep::ElemOnSecond {
            mu: small_rational(r, 3),
            k: r.gen_range(1..=max_k),
        },
    }
}

/// Product of `steps` random steps applied to `(x, y)`, plus a random translation.
pub fn random_tame(r: &mut ChaCha8Rng, steps: usize, max_k: u32) -> Endomorphism {
    let (mut u, mut v) = (Polynomial::x(), Polynomial::y());
    for _ in 0..steps {
        (u, v) = random_step(r, max_k).apply(&u, &v);
    }
    let (cu, cv) = (rat(r.gen_range(-3..=3)), rat(r.gen_range(-3..=3)));
    Endomorphism::new(&u + &Polynomial::constant(cu), &v + &Polynomial::constant(cv))
}

/// Coefficient vectors of `polys` over their joint support.
pub fn coefficient_rows(polys: &[&Polynomial]) -> (Vec<Vec<Rational>>, Vec<Monomial>) {
    let mut support: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    support.sort();
    support.dedup();
    let rows = polys.iter().map(|p| support.iter().map(|m| p.coeff(m)).collect()).collect();
    (rows, support)
}

/// `target` is a Q-linear combination of `span`.
pub fn in_span(target: &Polynomial, span: &[Polynomial]) -> bool {
    use retractlab_core::linalg::solve;
    let mut all: Vec<&Polynomial> = span.iter().collect();
    all.push(target);
    let (rows, support) = coefficient_rows(&all);
    let n = span.len();
    // one equation per monomial, one unknown per spanning polynomial
    let a: Vec<Vec<Rational>> = (0..support.len()).map(|i| (0..n).map(|j| rows[j][i].clone()).collect()).collect();
    let b: Vec<Rational> = (0..support.len()).map(|i| rows[n][i].clone()).collect();
    if support.is_empty() || n == 0 {
        return target.is_zero();
    }
    solve(&a, &b, n).is_some()
}

/// A generating pair of `Q[u, v]` whose leading forms are not related by
/// `lf(b) = c * lf(a)^k`. The second entry is `None` once one generator has
/// become constant.
pub fn oracle_reduce(u: &Polynomial, v: &Polynomial) -> (Polynomial, Option<Polynomial>) {
    let strip = |p: &Polynomial| p - &Polynomial::constant(p.constant_term());
    let (mut a, mut b) = (strip(u), strip(v));
    loop {
        if a.total_degree() > b.total_degree() {
            std::mem::swap(&mut a, &mut b);
        }
        if a.is_zero() {
            return (b, None);
        }
        let (da, db) = (a.total_degree().unwrap(), b.total_degree().unwrap());
        if db % da != 0 {
            return (a, Some(b));
        }
        let power = a.leading_form().pow(db / da);
        let Some(c) = b.leading_form().proportional_to(&power) else {
            return (a, Some(b));
        };
        b = strip(&(&b - &a.pow(db / da).scale(&c)));
    }
}

/// Decides `f ∈ Q[u, v]` by linear algebra: after [`oracle_reduce`], solves
/// `f = Σ c_ij a^i b^j` over all `i*deg a + j*deg b <= 2*deg f`.
pub fn brute_force_membership(f: &Polynomial, u: &Polynomial, v: &Polynomial) -> bool {
    use retractlab_core::linalg::solve;
    let Some(df) = f.total_degree().filter(|&d| d > 0) else {
        return true;
    };
    let (a, b) = oracle_reduce(u, v);
    let b = b.unwrap_or_else(Polynomial::one);
    let (da, db) = (a.total_degree().unwrap(), b.total_degree().unwrap().max(1));
    let cap = 2 * df;
    let mut products = Vec::new();
    let mut ai = Polynomial::one();
    for i in 0..=cap / da {
        let mut ab = ai.clone();
        for _ in 0..=(cap - i * da) / db {
            products.push(ab.clone());
            if b.is_one() {
                break;
            }
            ab = &ab * &b;
        }
        ai = &ai * &a;
    }
    let mut all: Vec<&Polynomial> = products.iter().collect();
    all.push(f);
    let (rows, support) = coefficient_rows(&all);
    let n = products.len();
    let lhs: Vec<Vec<Rational>> = (0..support.len()).map(|i| (0..n).map(|j| rows[j][i].clone()).collect()).collect();
    let rhs: Vec<Rational> = (0..support.len()).map(|i| rows[n][i].clone()).collect();
    solve(&lhs, &rhs, n).is_some()
}
