//! Exact arithmetic and sums-of-squares verification in the ring of integers
//! `Z[ρ]` of the cubic field of discriminant 49, `ρ³ + ρ² − 2ρ − 1 = 0`, and
//! in other monogenic totally real cubic orders where that makes sense.

pub mod classify;
pub mod dyadic;
pub mod error;
pub mod identity;
pub mod lattice;
pub mod order;
pub mod report;
pub mod sos;
pub mod survey;
pub mod text;
pub mod verify;

pub use error::{Error, Result};
pub use order::{CubicOrderSpec, Element};
