//! Exact arithmetic for maximal curves over finite fields.
//!
//! * [`ff`]: prime and extension fields, relative norm and trace.
//! * [`curves`]: the Hermitian curve, the generalized GK curves, the curves
//!   `y^(q^2) - y = z^((q^n+1)/(q+1))` and a companion plane curve; genus formulas,
//!   affine point counts and Hasse–Weil maximality.
//! * [`autgroup`]: the stabilizer of the point at infinity in `PGU(3, Q)`, its
//!   group law and the Artin values `i(sigma)`, plus general unitary matrices.
//! * [`covers`]: Riemann–Hurwitz bookkeeping for Galois quotients.
//! * [`feasibility`]: degree bounds for Galois coverings of a maximal curve by
//!   the Hermitian curve.

pub mod arith;
pub mod autgroup;
pub mod covers;
pub mod curves;
mod error;
pub mod feasibility;
pub mod ff;

pub use error::{Error, Result};
