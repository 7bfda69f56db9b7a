//! Generalized cluster seeds, their tropicalization and F-polynomials, the
//! groupoid extension, higher Rogers dilogarithms, and numerical checks of the
//! dilogarithm identities attached to periodicities.

pub mod catalog;
pub mod dilog;
pub mod error;
pub mod exchange;
pub mod fpoly;
pub mod groupoid;
pub mod identities;
pub mod io;
pub mod matrix;
pub mod quad;
pub mod search;
pub mod suite;
pub mod tropical;

pub use error::{Error, Result};
pub use exchange::{DegreeTable, ExchangeData, MutationSequence, Permutation, Seed, Sign};
pub use matrix::IntMatrix;
