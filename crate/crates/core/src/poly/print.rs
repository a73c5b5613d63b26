use num_traits::{One, Signed};

use super::{Monomial, Polynomial, Rational};

/// Canonical text: terms by descending total degree, pure lex (`y > x`)
/// inside a degree. The output re-parses to the same polynomial.
pub(super) fn format_polynomial(p: &Polynomial, xname: &str, yname: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mono = format_monomial(m, xname, yname);
        if mono.is_empty() {
            out.push_str(&format_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rational(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_monomial(m: &Monomial, xname: &str, yname: &str) -> String {
    let power = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [power(xname, m.xexp), power(yname, m.yexp)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}
