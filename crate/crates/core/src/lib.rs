//! Exact computer algebra for automorphisms of the free associative algebra
//! `F<x, y, z>` over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! - [`ncpoly`]: noncommutative polynomials (`B = Q<y1, y2, y3>`).
//! - [`commpoly`] and [`uenv`]: commutative polynomial rings (`A`, `U(A)`,
//!   `F[u, v]`, ...) and the enveloping algebra `U(B) = B' (x) B` with the
//!   universal derivation.
//! - [`fox`]: Fox derivatives, gradients, Jacobian matrices and the action of
//!   endomorphisms on `U(B)`.
//! - [`morphisms`]: the abelianisation and the projections onto `z`-only rings.
//! - [`metabelian`]: the free metabelian algebra `C = B / R^2` in canonical
//!   form, its Fox derivatives and Jacobians.
//! - [`autgroup`]: elementary automorphisms, tame words, relation checks and
//!   seeded samplers.
//! - [`e2decide`]: certificate-producing membership test for `E2` over
//!   bivariate polynomial rings.
//! - [`certify`] and [`selftest`]: the end-to-end wildness pipelines.

pub mod algebra;
pub mod autgroup;
pub mod certify;
pub mod commpoly;
pub mod e2decide;
pub mod error;
pub mod fox;
pub mod matrix;
pub mod metabelian;
pub mod morphisms;
pub mod ncpoly;
pub mod parse;
pub mod scalar;
pub mod selftest;
pub mod uenv;

pub use algebra::{AlgebraElement, Endomorphism};
pub use commpoly::{CommPoly, Ring};
pub use error::{Error, Result};
pub use metabelian::MetabelianElem;
pub use ncpoly::{NCPoly, Word};
pub use scalar::Scalar;
pub use uenv::TensorPoly;
