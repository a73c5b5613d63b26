//! Exact analysis of polynomial endomorphisms of `Q[x,y]`.
//!
//! Decides automorphism, coordinate, retract and test-polynomial status with
//! machine-checkable certificates, and checks degree estimates for
//! two-generated subalgebras on concrete instances.

pub mod endo;
pub mod error;
pub mod estimates;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod reduction;
pub mod retracts;
pub mod univariate;
pub mod verdict;

pub use endo::Endomorphism;
pub use error::{Error, Result};
pub use groebner::Budget;
pub use poly::{parse_polynomial, Degree, Monomial, MonomialOrder, Polynomial, Rational};
pub use reduction::{CoordinateCertificate, Decomposition, ReductionStep};
pub use retracts::{RetractCertificate, TestPolyReport};
pub use univariate::UniPoly;
pub use verdict::Verdict;
