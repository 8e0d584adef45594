//! Bounded-width arithmetic circuits.
//!
//! The crate is organised bottom-up: [`coeffring`] supplies scalars, [`ir`]
//! the circuit representations and the expansion oracle, [`transforms`] the
//! width-preserving program rewrites, [`families`] the explicit polynomial
//! families, [`monotone`] support-set analysis and [`pit`] identity testing.

pub mod coeffring;
pub mod error;
pub mod families;
pub mod ir;
pub mod monotone;
pub mod pit;
pub mod rng;
pub mod transforms;

pub use coeffring::{Ring, Scalar};
pub use error::{Error, Result};
pub use ir::{
    Abp, Caps, Circuit, CircuitBuilder, Formula, LayeredCircuit, Mode, Monomial, Slp,
    SparsePolynomial,
};
