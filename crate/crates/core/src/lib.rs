//! Exact computation of the endomorphism ring of the projective envelope of
//! a cuspidal, non-supercuspidal mod-l representation of `GL_n(F_q)`.
//!
//! The ring is computed twice and compared: once as the ring of invariants of
//! `W(k)[X]/(X^{l^r} - 1)` under `X -> X^q` ([`invariants`]), and once as the
//! image of the central-character map on class sums ([`center`]), evaluated
//! from explicit character formulas ([`characters`]) on conjugacy class types
//! ([`classes`]). [`deformation`] checks the matching relations on points of
//! the Galois-side ring `W(k)[Fr, Psi]/(Fr Psi Fr^-1 = Psi^q)`.

pub mod arith;
pub mod center;
pub mod characters;
pub mod classes;
pub mod cyclotomic;
pub mod deformation;
pub mod error;
pub mod finite_field;
pub mod invariants;
pub mod linalg;
pub mod params;
pub mod poly;

pub use cyclotomic::CyclotomicNumber;
pub use error::{Error, Result};
pub use params::{reduce_parameters, validate_parameters, ParameterSet};
pub use poly::Polynomial;
