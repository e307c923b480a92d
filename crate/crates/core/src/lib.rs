//! Exact λ-bracket calculus on differential polynomial algebras.

pub mod cli;
pub mod coeff;
pub mod diffalg;
pub mod dshier;
pub mod error;
pub mod hierarchy;
pub mod liealg;
pub mod linalg;
pub mod nonlocal;
pub mod pva;
pub mod quantum;
pub mod syntax;
pub mod varcalc;

pub use coeff::Coeff;
pub use diffalg::{DerivVar, DiffOp, DiffPoly, LambdaPoly, Monomial, OpEntry};
pub use error::{Error, Result};
