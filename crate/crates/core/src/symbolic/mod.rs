//! Exact scalar-field arithmetic: canonical rational functions over a chart,
//! an expression parser, and linear algebra over the rational-function field.

mod ansatz;
mod chart;
mod field;
mod gcd;
mod matrix;
mod parser;
mod poly;
mod qmatrix;

pub use ansatz::identically_zero_combinations;
pub use chart::{Chart, RationalPoint};
pub use field::{sum_fields, ScalarField};
pub use gcd::{gcd, lcm};
pub use matrix::FieldMatrix;
pub use parser::parse_scalar;
pub use poly::{rational_to_f64, Monomial, Poly, Rational};
pub use qmatrix::RationalMatrix;

/// Parses a rational literal such as `3`, `-2`, `3/4`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d == 0.into() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(t.parse().ok()?)),
    }
}
