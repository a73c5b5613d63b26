//! Endomorphisms of `Q[x,y]` as substitution maps.
//!
//! Composition convention: `apply(compose(phi, psi), p) == apply(phi, apply(psi, p))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::reduction::{is_automorphism, Decomposition};
use crate::verdict::Verdict;

/// The algebra map determined by `x ↦ x_image`, `y ↦ y_image`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endomorphism {
    #[serde(rename = "x")]
    pub x_image: Polynomial,
    #[serde(rename = "y")]
    pub y_image: Polynomial,
}

impl Endomorphism {
    pub fn new(x_image: Polynomial, y_image: Polynomial) -> Self {
        Endomorphism { x_image, y_image }
    }

    pub fn identity() -> Self {
        Endomorphism::new(Polynomial::x(), Polynomial::y())
    }

    /// `p(x_image, y_image)`.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        substitute(p, &self.x_image, &self.y_image)
    }

    /// The map `p ↦ self(other(p))`.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism::new(self.apply(&other.x_image), self.apply(&other.y_image))
    }

    /// `self^k` for `k >= 1`; `k == 0` gives the identity.
    pub fn iterate(&self, k: u32) -> Endomorphism {
        let mut acc = Endomorphism::identity();
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn jacobian_det(&self) -> Polynomial {
        jacobian(&self.x_image, &self.y_image)
    }

    /// Injective iff the images are algebraically independent iff the
    /// Jacobian determinant is not identically zero (characteristic 0).
    pub fn is_injective(&self) -> bool {
        !self.jacobian_det().is_zero()
    }

    pub fn fixes(&self, p: &Polynomial) -> bool {
        self.apply(p) == *p
    }

    pub fn images(&self) -> (&Polynomial, &Polynomial) {
        (&self.x_image, &self.y_image)
    }
}

pub fn apply(phi: &Endomorphism, p: &Polynomial) -> Polynomial {
    phi.apply(p)
}

pub fn compose(phi: &Endomorphism, psi: &Endomorphism) -> Endomorphism {
    phi.compose(psi)
}

pub fn iterate(phi: &Endomorphism, k: u32) -> Endomorphism {
    phi.iterate(k)
}

pub fn jacobian_det(phi: &Endomorphism) -> Polynomial {
    phi.jacobian_det()
}

pub fn is_injective(phi: &Endomorphism) -> bool {
    phi.is_injective()
}

pub fn check_fixed(phi: &Endomorphism, p: &Polynomial) -> bool {
    phi.fixes(p)
}

/// `u_x v_y - u_y v_x`.
pub fn jacobian(u: &Polynomial, v: &Polynomial) -> Polynomial {
    let (ux, uy) = u.partial_derivatives();
    let (vx, vy) = v.partial_derivatives();
    &(&ux * &vy) - &(&uy * &vx)
}

/// `p(u, v)`, Horner in `v` over the `y`-layers of `p`.
pub fn substitute(p: &Polynomial, u: &Polynomial, v: &Polynomial) -> Polynomial {
    let Some(max_x) = p.deg_x() else {
        return Polynomial::zero();
    };
    let max_y = p.deg_y().unwrap_or(0);
    let mut u_pows = Vec::with_capacity(max_x as usize + 1);
    u_pows.push(Polynomial::one());
    for i in 1..=max_x as usize {
        let next = &u_pows[i - 1] * u;
        u_pows.push(next);
    }
    let mut layers = vec![Polynomial::zero(); max_y as usize + 1];
    for (m, c) in p.terms() {
        let layer = &mut layers[m.yexp as usize];
        *layer += &u_pows[m.xexp as usize].scale(c);
    }
    let mut acc = Polynomial::zero();
    for layer in layers.iter().rev() {
        acc = &acc * v;
        acc += layer;
    }
    acc
}

/// Evaluation of the hypotheses and conclusion of the "invertible on one
/// polynomial" criterion on a concrete triple `(phi, psi, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub jacobian_constant: bool,
    pub psi_injective: bool,
    pub recovers_p: bool,
    pub phi_automorphism_verdict: Verdict<Decomposition>,
    /// All three hypotheses hold.
    pub hypotheses_met: bool,
    /// Hypotheses hold yet `phi` was refuted as an automorphism.
    pub contradiction: bool,
    pub notes: Vec<String>,
}

/// Checks a given `psi` only; no search for `psi` is attempted.
pub fn verify_corollary_instance(
    phi: &Endomorphism,
    psi: &Endomorphism,
    p: &Polynomial,
) -> Result<CorollaryReport> {
    if p.is_constant() {
        return Err(Error::ConstantInput);
    }
    let det = phi.jacobian_det();
    let jacobian_constant = !det.is_zero() && det.is_constant();
    let psi_injective = psi.is_injective();
    let recovers_p = psi.apply(&phi.apply(p)) == *p;
    let verdict = is_automorphism(phi);
    let hypotheses_met = jacobian_constant && psi_injective && recovers_p;
    let contradiction = hypotheses_met && verdict.is_no();

    let mut notes = Vec::new();
    if !jacobian_constant {
        notes.push(format!("Jacobian determinant of phi is {det}, not a nonzero constant"));
    }
    if !psi_injective {
        notes.push("psi has zero Jacobian determinant".to_string());
    }
    if !recovers_p {
        notes.push("psi(phi(p)) differs from p".to_string());
    }
    if hypotheses_met {
        notes.push("hypotheses met".to_string());
    } else {
        notes.push("hypotheses unmet".to_string());
    }
    if contradiction {
        notes.push("CONTRADICTION: hypotheses hold but phi is not an automorphism".to_string());
    }
    Ok(CorollaryReport {
        jacobian_constant,
        psi_injective,
        recovers_p,
        phi_automorphism_verdict: verdict,
        hypotheses_met,
        contradiction,
        notes,
    })
}

impl From<(Polynomial, Polynomial)> for Endomorphism {
    fn from((x_image, y_image): (Polynomial, Polynomial)) -> Self {
        Endomorphism::new(x_image, y_image)
    }
}

/// Monomials `x^i y^j` with `i + j <= d`, in canonical ascending order.
pub(crate) fn monomials_up_to(d: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0..=d)
        .flat_map(|total| (0..=total).map(move |j| Monomial::new(total - j, j)))
        .collect();
    out.sort();
    out
}
