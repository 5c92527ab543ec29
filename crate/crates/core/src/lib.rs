//! Diffuse-interface solutions of the Allen–Cahn equation concentrating on
//! critical catenoids inside axially symmetric convex domains.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod approx;
pub mod catenoid;
pub mod domain;
pub mod error;
pub mod jacobi;
pub mod exec;
pub mod field;
pub mod profile;
pub mod quadrature;
pub mod solver;
pub mod tridiag;

pub use error::{Error, Result};
pub use exec::Exec;
