//! Linear ansatz solving: find all rational coefficient vectors `c` such that
//! `sum_m c_m * R_m` vanishes identically, for rational-function families `R`.

use super::field::ScalarField;
use super::gcd::lcm;
use super::poly::{Monomial, Poly, Rational};
use super::qmatrix::RationalMatrix;
use std::collections::BTreeMap;

/// `equations[e][m]` is the rational function multiplying unknown `m` in
/// equation `e`. Returns a basis of the rational solution space.
pub fn identically_zero_combinations(unknowns: usize, equations: &[Vec<ScalarField>]) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for eq in equations {
        assert_eq!(eq.len(), unknowns);
        let Some(first) = eq.first() else { continue };
        let n = first.nvars();
        let mut common = Poly::one(n);
        for f in eq {
            if !f.is_polynomial() {
                common = lcm(&common, f.denominator());
            }
        }
        // monomial -> coefficient row
        let mut by_monomial: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        for (m, f) in eq.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let p = if common.is_one() {
                f.numerator().clone()
            } else {
                f.numerator().mul(&common.div_exact(f.denominator()).expect("lcm"))
            };
            for (mono, c) in p.terms() {
                by_monomial.entry(mono.clone()).or_insert_with(|| vec![Rational::from_integer(0.into()); unknowns])
                    [m] = c.clone();
            }
        }
        rows.extend(by_monomial.into_values());
    }
    if rows.is_empty() {
        return (0..unknowns)
            .map(|i| {
                let mut v = vec![Rational::from_integer(0.into()); unknowns];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect();
    }
    RationalMatrix::from_rows(rows).kernel_basis()
}
