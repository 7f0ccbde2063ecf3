//! Exact symbolic verification of Poisson bivectors with cotangent metrics.
//!
//! Everything is computed over a single coordinate chart with coefficients in
//! the field of rational functions `Q(x_0, ..., x_{n-1})`, so every identity is
//! decided exactly.

pub mod cohomology;
pub mod connection;
pub mod error;
pub mod foliation;
pub mod input;
pub mod pipeline;
pub mod poisson;
pub mod reconstruction;
pub mod report;
pub mod symbolic;
pub mod tensor;

pub use error::{Error, Result};
