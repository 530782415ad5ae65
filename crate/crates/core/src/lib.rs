// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod config;
pub mod corona;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod multiplier;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod spaces;

pub use config::{CirclePoisson, QuadConfig};
pub use error::{Error, Result};
pub use num_complex::Complex64;
