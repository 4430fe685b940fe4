//! Eisenstein series, modular invariants, hypergeometric series, Weierstrass
//! functions and division polynomials, assembled into Ramanujan-Chudnovsky
//! series for π.

pub mod cmcoeffs;
pub mod divpoly;
pub mod error;
pub mod hypergeom;
pub mod mpnum;
pub mod piengine;
pub mod qseries;
pub mod weierstrass;

pub use error::{Error, Result};
pub use mpnum::{BigComplex, BigReal, Int, PrecisionCtx, Rat};
