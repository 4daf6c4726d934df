//! Exact-arithmetic verification library for the enumerative geometry of
//! nets of conics: plane-cubic invariants over arbitrary-precision
//! rationals and Q(w), discriminant sweeps over pencils of planes in the
//! P^5 of conics, Chow-ring arithmetic on blow-ups of P^3, the Hesse
//! pencil, and the order-18 stabilizer of its Jacobian nets.
//!
//! The symbolic core is generic over the scalar ring (see [`scalar::Ring`]
//! and [`scalar::Field`]); the concrete instantiations used everywhere are
//! the type aliases below.

// index loops mirror the row/column arithmetic in the elimination and
// root-finding kernels; iterator rewrites there obscure the borrows
#![allow(clippy::needless_range_loop)]

pub mod chow;
pub mod hesse;
pub mod invariants;
pub mod linalg;
pub mod roots;
pub mod scalar;
pub mod stabilizer;
pub mod sweep;
pub mod ternary;
pub mod unipoly;

pub use scalar::{CplxApprox, EisRat, Rat};

/// Cubic or general form with exact rational coefficients.
pub type RatForm = ternary::TernaryForm<Rat>;
/// Form with coefficients in Q(w).
pub type EisForm = ternary::TernaryForm<EisRat>;
/// Net of conics over the rationals.
pub type RatNet = ternary::Net<Rat>;
/// Net of conics over Q(w).
pub type EisNet = ternary::Net<EisRat>;
/// Univariate polynomial over the rationals.
pub type RatPoly = unipoly::UniPoly<Rat>;
