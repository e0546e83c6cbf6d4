//! # fibzeta
//!
//! Zeta functions of the Fibonacci-type sequences attached to real quadratic
//! fields Q(sqrt D), evaluated on all of C by three independent methods:
//! binomial series, Poisson summation, and (in the region of absolute
//! convergence) shifted-convolution sums.

pub mod complexfn;
pub mod continuation;
pub mod crosscheck;
pub mod error;
pub mod lattice;
pub mod options;
pub mod poisson;
pub mod quadfield;
pub mod verify;

pub use complexfn::Complex;
pub use continuation::{Method, Parity, ZetaEvaluation};
pub use error::{Error, LatticePoint, Result};
pub use options::EvalOptions;
pub use quadfield::{QuadraticField, UnitElement, UnitNorm};
