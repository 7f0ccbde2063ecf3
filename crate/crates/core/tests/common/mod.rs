#![allow(dead_code)]

pub mod float;
pub mod naive;

use std::path::PathBuf;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rpoisson::input::{load_foliation, load_manifold, Manifold};
use rpoisson::reconstruction::FoliationInput;
use rpoisson::symbolic::{Monomial, Poly, Rational, RationalPoint, ScalarField};
use rpoisson::tensor::{OneForm, VectorField};

pub const MANIFOLDS: [&str; 6] = ["flat_r2", "flat_r3_id", "flat_r3_warped", "twisted_r3", "so3", "nonpoisson"];
pub const RIEMANN_POISSON: [&str; 3] = ["flat_r2", "flat_r3_id", "flat_r3_warped"];
pub const VALID_FOLIATIONS: [&str; 3] = ["foliation_flat", "foliation_warped", "foliation_tilted"];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json"))
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).unwrap()
}

pub fn manifold(name: &str) -> Manifold {
    load_manifold(&corpus_text(name)).unwrap()
}

pub fn foliation(name: &str) -> FoliationInput {
    load_foliation(&corpus_text(name)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Polynomial with up to four terms of degree at most `deg` and small
/// integer coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> ScalarField {
    let monomials = Monomial::up_to_degree(n, deg);
    let terms: Vec<(Monomial, Rational)> = (0..rng.gen_range(1..=4))
        .map(|_| (monomials[rng.gen_range(0..monomials.len())].clone(), q(rng.gen_range(-3..=3))))
        .collect();
    ScalarField::from_poly(Poly::from_terms(n, terms))
}

pub fn random_form(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> OneForm {
    OneForm::new((0..n).map(|_| random_poly(rng, n, deg)).collect())
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> VectorField {
    VectorField::new((0..n).map(|_| random_poly(rng, n, deg)).collect())
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> RationalPoint {
    RationalPoint::new(
        (0..n)
            .map(|_| Rational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=4))))
            .collect(),
    )
}

pub fn random_point_f64(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect()
}

pub fn coordinate_forms(n: usize) -> Vec<OneForm> {
    (0..n).map(|i| OneForm::coordinate(n, i)).collect()
}

/// Relative error with an absolute floor of one.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
