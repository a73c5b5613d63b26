//! Worked examples for every library operation.

mod common;

use common::{endo, p};
use retractlab_core::endo::{check_fixed, verify_corollary_instance};
use retractlab_core::estimates::{
    estimate_n, formula_n, lemma_instance, phi_infinity_probe, su_lower_bound, verify_lemma_instance, SuBranch,
};
use retractlab_core::groebner::{buchberger, subalgebra_membership, MultiPoly, TermOrder};
use retractlab_core::poly::{rat, ratio};
use retractlab_core::reduction::{
    elementary_reduce, find_mate, is_automorphism, is_coordinate, is_elementary_reduced, ReductionStep,
    REASON_NON_CONSTANT_JACOBIAN,
};
use retractlab_core::retracts::{
    construct_degenerate_fixer, decompose_poly, is_retract_generator, is_test_polynomial, retract_membership,
    univariate_membership, RetractCertificate,
};
use retractlab_core::{Degree, Endomorphism, Error, Monomial, Polynomial, UniPoly, Verdict};

fn uni(coeffs: &[i64]) -> UniPoly {
    UniPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
}

#[test]
fn parse_examples() {
    let sum = p("x + y*x");
    assert_eq!(sum.num_terms(), 2);
    assert_eq!(sum.coeff(&Monomial::new(1, 0)), rat(1));
    assert_eq!(sum.coeff(&Monomial::new(1, 1)), rat(1));
    assert!(p("0").is_zero());
    assert_eq!(p("0").num_terms(), 0);
    assert_eq!(p("(x+y)^2"), p("x^2 + 2*x*y + y^2"));
}

#[test]
fn parse_rejects_implicit_multiplication() {
    match "2x".parse::<Polynomial>() {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn ring_op_examples() {
    assert_eq!(&p("x+y") + &p("x-y"), p("2*x"));
    assert!(p("x+y^2").pow(0).is_one());
    assert_eq!(&p("x+y^2") * &p("x-y^2"), p("x^2 - y^4"));
}

#[test]
fn degree_data_examples() {
    let d = p("x + x^2*y").degree_data();
    assert_eq!(d.total_degree, Degree::Finite(3));
    assert_eq!(d.leading_form, p("x^2*y"));
    assert_eq!(d.purelex_lead, Some(Monomial::new(2, 1)));

    let d = p("x^3 + y").degree_data();
    assert_eq!(d.total_degree, Degree::Finite(3));
    assert_eq!(d.leading_form, p("x^3"));
    assert_eq!(d.purelex_lead, Some(Monomial::new(0, 1)));

    let d = p("x^2 + 2*x*y + y^2 + x").degree_data();
    assert_eq!(d.total_degree, Degree::Finite(2));
    assert_eq!(d.leading_form, p("x^2 + 2*x*y + y^2"));
    assert_eq!(d.purelex_lead, Some(Monomial::new(0, 2)));

    assert_eq!(Polynomial::zero().degree(), Degree::NegInf);
}

#[test]
fn partial_derivative_examples() {
    assert_eq!(p("x^2*y").partial_derivatives(), (p("2*x*y"), p("x^2")));
    assert_eq!(p("7").partial_derivatives(), (p("0"), p("0")));
    assert_eq!(p("x + y^2").partial_derivatives(), (p("1"), p("2*y")));
}

#[test]
fn print_examples() {
    assert_eq!(Polynomial::zero().to_string(), "0");
    assert_eq!(p("x + x*y").to_string(), "x*y + x");
    assert_eq!(Polynomial::monomial(ratio(3, 2), Monomial::new(2, 0)).to_string(), "3/2*x^2");
}

#[test]
fn apply_examples() {
    assert_eq!(endo("y", "x").apply(&p("x^2 + y")), p("y^2 + x"));
    assert_eq!(endo("x", "0").apply(&p("x + y*x")), p("x"));
    assert_eq!(endo("x + y^2", "y").apply(&p("x")), p("x + y^2"));
}

#[test]
fn compose_examples() {
    let psi = endo("x^3 - y", "x*y");
    assert_eq!(Endomorphism::identity().compose(&psi), psi);
    assert_eq!(endo("x+y", "y").compose(&endo("x^2", "y")), endo("(x+y)^2", "y"));
    assert_eq!(endo("x", "y+x^2").compose(&endo("x", "y+x^2")), endo("x", "y+2*x^2"));
}

#[test]
fn iterate_examples() {
    assert_eq!(endo("y", "x").iterate(2), endo("x", "y"));
    assert_eq!(endo("x", "y+x^2").iterate(3), endo("x", "y+3*x^2"));
    assert_eq!(endo("x^2", "y").iterate(2), endo("x^4", "y"));
}

#[test]
fn jacobian_examples() {
    assert!(Endomorphism::identity().jacobian_det().is_one());
    assert!(endo("x", "y + x^2").jacobian_det().is_one());
    assert_eq!(endo("x^2", "y").jacobian_det(), p("2*x"));
}

#[test]
fn injectivity_examples() {
    assert!(endo("x^2", "y^2").is_injective());
    assert_eq!(endo("x^2", "y^2").jacobian_det(), p("4*x*y"));
    assert!(!endo("x", "x").is_injective());
    assert!(!endo("x+y", "x+y").is_injective());
}

#[test]
fn check_fixed_examples() {
    assert!(check_fixed(&endo("x", "y^2"), &p("x")));
    assert!(check_fixed(&endo("x+y*x", "0"), &p("x+y*x")));
    assert!(!check_fixed(&endo("y", "x"), &p("x")));
}

#[test]
fn corollary_examples() {
    let r = verify_corollary_instance(&endo("x+y", "y"), &endo("x-y", "y"), &p("x")).unwrap();
    assert!(r.jacobian_constant && r.psi_injective && r.recovers_p && r.hypotheses_met);
    assert!(r.phi_automorphism_verdict.is_yes());
    assert!(!r.contradiction);

    let r = verify_corollary_instance(&endo("x^2", "y"), &endo("x", "y"), &p("x")).unwrap();
    assert!(!r.recovers_p);

    let r = verify_corollary_instance(&endo("x", "y^2"), &endo("x", "y"), &p("x")).unwrap();
    assert!(!r.jacobian_constant);
    assert!(!r.hypotheses_met);
    assert!(r.notes.iter().any(|n| n.contains("unmet")));
}

#[test]
fn buchberger_examples() {
    let o = TermOrder::GradedRevLex;
    let x = MultiPoly::var(4, o, 0);
    let y = MultiPoly::var(4, o, 1);
    let gb = buchberger(&[x.clone(), y.clone()], o);
    assert_eq!(gb.generators(), &[x.clone(), y.clone()]);

    let e = TermOrder::ELIMINATE_XY_THEN_ST;
    let (xe, ye) = (MultiPoly::var(4, e, 0), MultiPoly::var(4, e, 1));
    let (s, t) = (MultiPoly::var(4, e, 2), MultiPoly::var(4, e, 3));
    let g1 = &(&xe * &xe) - &s;
    let g2 = &ye - &t;
    let gb = buchberger(&[g1.clone(), g2.clone()], e);
    assert_eq!(gb.generators(), &[g1, g2]);

    let one = MultiPoly::constant(4, o, rat(1));
    let gb = buchberger(&[x.clone(), &x + &one], o);
    assert!(gb.is_unit());
}

#[test]
fn normal_form_examples() {
    let o = TermOrder::GradedRevLex;
    let x = MultiPoly::var(4, o, 0);
    let y = MultiPoly::var(4, o, 1);
    let one = MultiPoly::constant(4, o, rat(1));
    assert!(buchberger(std::slice::from_ref(&x), o).normal_form(&x).unwrap().is_zero());
    let f = &x + &one;
    assert_eq!(buchberger(&[y], o).normal_form(&f).unwrap(), f);

    let e = TermOrder::ELIMINATE_XY_THEN_ST;
    let (xe, ye) = (MultiPoly::var(4, e, 0), MultiPoly::var(4, e, 1));
    let (s, t) = (MultiPoly::var(4, e, 2), MultiPoly::var(4, e, 3));
    let gb = buchberger(&[&(&xe * &xe) - &s, &ye - &t], e);
    assert_eq!(gb.normal_form(&(&(&xe * &xe) * &ye)).unwrap(), &s * &t);
}

#[test]
fn normal_form_rejects_mismatched_order() {
    let gb = buchberger(&[MultiPoly::var(4, TermOrder::GradedRevLex, 0)], TermOrder::GradedRevLex);
    let f = MultiPoly::var(4, TermOrder::Lex, 0);
    assert_eq!(gb.normal_form(&f), Err(Error::OrderMismatch));
}

#[test]
fn subalgebra_membership_examples() {
    assert_eq!(subalgebra_membership(&p("x"), &p("x+y"), &p("y")).unwrap(), Some(p("x - y")));
    assert_eq!(subalgebra_membership(&p("x^2*y"), &p("x^2"), &p("y")).unwrap(), Some(p("x*y")));
    assert_eq!(subalgebra_membership(&p("x"), &p("x^2"), &p("y^2")).unwrap(), None);
    assert_eq!(subalgebra_membership(&p("x"), &p("3"), &p("y")), Err(Error::ConstantGenerator));
}

#[test]
fn elementary_reduce_examples() {
    let r = elementary_reduce(&p("x + y^3"), &p("y")).unwrap();
    assert_eq!((r.first, r.second), (p("x"), p("y")));
    assert_eq!(r.steps, vec![ReductionStep::ElemOnFirst { mu: rat(-1), k: 3 }]);

    let r = elementary_reduce(&p("x"), &p("y")).unwrap();
    assert_eq!((r.first, r.second), (p("x"), p("y")));
    assert!(r.steps.is_empty());

    let r = elementary_reduce(&p("x^2"), &p("y^3")).unwrap();
    assert_eq!((r.first, r.second), (p("x^2"), p("y^3")));
    assert!(r.steps.is_empty());
}

#[test]
fn is_elementary_reduced_examples() {
    assert!(is_elementary_reduced(&p("x^2"), &p("y^3")).unwrap());
    assert!(!is_elementary_reduced(&p("x + y^2"), &p("y")).unwrap());
    assert!(is_elementary_reduced(&p("x"), &p("y")).unwrap());
}

#[test]
fn is_automorphism_examples() {
    let phi = endo("y", "x + y^2");
    let Verdict::Yes(dec) = is_automorphism(&phi) else {
        panic!("expected Yes")
    };
    assert!(matches!(dec.steps[0], ReductionStep::ElemOnSecond { .. }));
    assert_eq!(dec.final_affine, endo("y", "x"));
    assert_eq!(dec.replay(), phi);
    assert!(dec.verify(&phi));

    let v = is_automorphism(&endo("x^2", "y"));
    assert!(v.is_no());
    assert_eq!(v.reason(), Some(REASON_NON_CONSTANT_JACOBIAN));

    let phi = endo("x+y", "x-y");
    assert_eq!(phi.jacobian_det(), p("-2"));
    let Verdict::Yes(dec) = is_automorphism(&phi) else {
        panic!("expected Yes")
    };
    assert!(dec.verify(&phi));
}

#[test]
fn is_coordinate_examples() {
    let Verdict::Yes(c) = is_coordinate(&p("x")).unwrap() else {
        panic!()
    };
    assert_eq!(c.mate, p("y"));
    let Verdict::Yes(c) = is_coordinate(&p("x + y^2")).unwrap() else {
        panic!()
    };
    assert_eq!(c.mate, p("y"));
    assert!(c.verify(&p("x + y^2")));
    let v = is_coordinate(&p("x*y")).unwrap();
    assert!(v.is_no());
    assert!(v.reason().unwrap().contains("origin"));
}

#[test]
fn find_mate_examples() {
    assert_eq!(find_mate(&p("x"), 1).unwrap(), Some(p("y")));
    assert_eq!(find_mate(&p("x + y^2"), 1).unwrap(), Some(p("y")));
    for b in 1..=4 {
        assert_eq!(find_mate(&p("x*y"), b).unwrap(), None);
    }
}

#[test]
fn univariate_membership_examples() {
    let q = p("x + y^2");
    assert_eq!(univariate_membership(&p("(x+y^2)^2 + 1"), &q).unwrap(), Some(uni(&[1, 0, 1])));
    assert_eq!(univariate_membership(&p("x^2 + y"), &p("x^2")).unwrap(), None);
    assert_eq!(univariate_membership(&p("5"), &q).unwrap(), Some(uni(&[5])));
}

#[test]
fn decompose_examples() {
    let (g, q) = decompose_poly(&p("(x+y^2)^2 + (x+y^2)"), 2).unwrap().unwrap();
    assert_eq!((g, q), (uni(&[0, 1, 1]), p("x + y^2")));
    assert_eq!(decompose_poly(&p("x^2 + y^3"), 3).unwrap(), None);
    let (g, q) = decompose_poly(&p("x^4"), 2).unwrap().unwrap();
    assert_eq!((g, q), (uni(&[0, 0, 1]), p("x^2")));
    assert_eq!(decompose_poly(&p("x^3"), 2), Err(Error::DegreeMismatch { d: 2, degree: 3 }));
}

#[test]
fn is_retract_generator_examples() {
    let Verdict::Yes(c) = is_retract_generator(&p("x + y*x"), 4).unwrap() else {
        panic!()
    };
    assert_eq!((c.g1.clone(), c.g2.clone()), (uni(&[0, 1]), uni(&[])));
    assert!(c.verify());
    assert!(is_retract_generator(&p("x^2"), 4).unwrap().is_no());
    let Verdict::Yes(c) = is_retract_generator(&p("x"), 4).unwrap() else {
        panic!()
    };
    assert_eq!((c.g1, c.g2), (uni(&[0, 1]), uni(&[])));
}

#[test]
fn retract_membership_examples() {
    let target = p("(x + y*x)^2 + (x + y*x)");
    let Verdict::Yes(m) = retract_membership(&target, 4).unwrap() else {
        panic!()
    };
    assert_eq!(m.certificate.generator, p("x + y*x"));
    assert_eq!(m.g, uni(&[0, 1, 1]));
    assert!(m.verify(&target));
    assert!(retract_membership(&p("x"), 4).unwrap().is_yes());
    let v = retract_membership(&p("x^2 + y^3"), 2).unwrap();
    assert!(!v.is_yes());
}

#[test]
fn is_test_polynomial_examples() {
    let r = is_test_polynomial(&p("x + y*x"), 4).unwrap();
    assert!(r.verdict.is_no());
    let w = r.witness.unwrap();
    assert_eq!(w, endo("x + y*x", "0"));
    assert!(check_fixed(&w, &p("x + y*x")) && w.jacobian_det().is_zero());

    let r = is_test_polynomial(&p("x"), 4).unwrap();
    assert!(r.verdict.is_no());
    assert_eq!(r.witness.unwrap(), endo("x", "0"));
}

#[test]
fn degenerate_fixer_examples() {
    let q = p("x + y*x");
    let cert = RetractCertificate::new(q.clone(), uni(&[0, 1]), UniPoly::zero());
    let target = &q.pow(2) + &q;
    let phi = construct_degenerate_fixer(&cert, &target).unwrap();
    assert_eq!(phi, endo("x + y*x", "0"));
    assert!(phi.fixes(&target));

    let cert = RetractCertificate::new(p("x"), uni(&[0, 1]), UniPoly::zero());
    assert_eq!(construct_degenerate_fixer(&cert, &p("x^3")).unwrap(), endo("x", "0"));
    assert_eq!(construct_degenerate_fixer(&cert, &p("y")), Err(Error::NotInRetract));

    let Verdict::Yes(cert) = is_retract_generator(&p("x + y^2"), 4).unwrap() else {
        panic!()
    };
    let phi = construct_degenerate_fixer(&cert, &p("x + y^2")).unwrap();
    assert!(phi.fixes(&p("x + y^2")));
    assert!(phi.jacobian_det().is_zero());
}

#[test]
fn estimate_n_examples() {
    assert_eq!(formula_n(2, 3, 1), 4);
    assert_eq!(formula_n(2, 2, 0), 0);
    let e = estimate_n(&p("x"), &p("y")).unwrap();
    assert_eq!((e.n, e.m, e.k, e.big_n), (1, 1, 0, 1));
    assert_eq!(estimate_n(&p("x"), &p("x^2")), Err(Error::DependentPair));
}

#[test]
fn su_bound_examples() {
    // n = 2, m = 3, k = 1: D = -3/2*y.
    let (pp, qq) = (p("x^2 + y"), p("x^3 + 3/2*x*y"));
    let est = estimate_n(&pp, &qq).unwrap();
    assert_eq!((est.n, est.m, est.g, est.k, est.big_n), (2, 3, 1, 1, 4));

    let b = su_lower_bound(&p("y^3"), &pp, &qq).unwrap();
    assert_eq!(b.estimate.branch, Some(SuBranch::YDegree { b: 1, r: 1 }));
    assert_eq!(b.bound, 7);

    let b = su_lower_bound(&p("x^3"), &pp, &qq).unwrap();
    assert_eq!(b.estimate.branch, Some(SuBranch::XDegree { b1: 1, r1: 0 }));
    assert_eq!(b.bound, 4);

    assert!(matches!(su_lower_bound(&p("x + y"), &pp, &qq), Err(Error::HypothesisViolation(_))));
}

#[test]
fn lemma_examples() {
    let inst = lemma_instance(&p("x*y"), &p("x^2+y"), &p("x+y^3")).unwrap();
    assert_eq!((inst.degree, inst.n, inst.k), (5, 2, 3));
    assert!(inst.holds);
    assert_eq!(endo("x^2+y", "x+y^3").jacobian_det(), p("6*x*y^2 - 1"));

    assert!(matches!(
        verify_lemma_instance(&p("x"), &p("x^2+y"), &p("x+y^3")),
        Err(Error::HypothesisViolation(_))
    ));

    let inst = lemma_instance(&p("x^2 + y^2"), &p("x^2"), &p("y^3")).unwrap();
    assert_eq!((inst.degree, inst.n, inst.k), (6, 2, 3));
    assert!(inst.holds);
}

#[test]
fn probe_examples() {
    let r = phi_infinity_probe(&endo("x", "y^2"), 4, 3).unwrap();
    assert_eq!(r.basis, ["1", "x", "x^2", "x^3", "x^4"].map(p).to_vec());
    assert!(r.levels.iter().all(|l| l.exact));

    let r = phi_infinity_probe(&endo("x + y^2", "y"), 2, 2).unwrap();
    assert_eq!(r.basis.len(), 6);

    let r = phi_infinity_probe(&endo("x^2", "y^2"), 3, 2).unwrap();
    assert_eq!(r.basis, vec![p("1")]);

    assert_eq!(phi_infinity_probe(&endo("x", "x"), 2, 2), Err(Error::NonInjective));
}
