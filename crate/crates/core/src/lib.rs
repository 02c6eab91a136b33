//! Numerical toolkit for conjugations on `L²` of the unit circle, model
//! spaces `K_θ` of finite Blaschke products and truncated Toeplitz
//! operators.

pub mod blaschke;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fourier;
pub mod modelspace;
pub mod operators;
pub mod suite;
pub mod theorems;

pub use blaschke::BlaschkeProduct;
pub use error::{Error, Result};
pub use fourier::{GridParams, LaurentFunction, Verdict, C64};
