//! Polynomial degree windows and the matrices of `d_pi` on them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poisson::Bivector;
use crate::symbolic::{Monomial, Poly, Rational, RationalMatrix, ScalarField};
use crate::tensor::{binomial, subsets, Multi, PVector, Variance};

/// Monomial times coordinate basis element, for all monomials of degree at
/// most `bound` and all increasing `degree`-tuples out of `slots` indices.
///
/// Ordered by monomial (ascending graded-lex), then by multi-index.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    nvars: usize,
    slots: usize,
    degree: usize,
    bound: u32,
    elements: Vec<(Monomial, Vec<usize>)>,
    index: HashMap<(Monomial, Vec<usize>), usize>,
}

impl GradedBasis {
    pub fn new(nvars: usize, slots: usize, degree: usize, bound: u32) -> Self {
        let tuples = subsets(slots, degree);
        let elements: Vec<(Monomial, Vec<usize>)> = Monomial::up_to_degree(nvars, bound)
            .into_iter()
            .flat_map(|m| tuples.iter().map(move |t| (m.clone(), t.clone())))
            .collect();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        GradedBasis { nvars, slots, degree, bound, elements, index }
    }

    /// Window of `degree`-multivector fields on an `n`-dimensional chart.
    pub fn multivectors(n: usize, degree: usize, bound: u32) -> Self {
        Self::new(n, n, degree, bound)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Expected size `C(slots, degree) * C(nvars + bound, bound)`.
    pub fn expected_len(&self) -> usize {
        binomial(self.slots, self.degree) * binomial(self.nvars + self.bound as usize, self.bound as usize)
    }

    pub fn element(&self, i: usize) -> (&Monomial, &[usize]) {
        let (m, t) = &self.elements[i];
        (m, t)
    }

    pub fn position(&self, m: &Monomial, idx: &[usize]) -> Option<usize> {
        self.index.get(&(m.clone(), idx.to_vec())).copied()
    }

    pub fn to_multi<K: Variance>(&self, i: usize) -> Multi<K> {
        let (m, t) = &self.elements[i];
        let f = ScalarField::from_poly(Poly::monomial(m.clone(), Rational::from_integer(1.into())));
        Multi::basis(self.slots, f, t)
    }

    /// Element built from a coordinate vector.
    pub fn combine<K: Variance>(&self, coords: &[Rational]) -> Multi<K> {
        let mut out = Multi::zero(self.slots, self.nvars, self.degree);
        for ((m, t), c) in self.elements.iter().zip(coords) {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            out.add_sorted(t, &ScalarField::from_poly(Poly::monomial(m.clone(), c.clone())));
        }
        out
    }

    /// Coordinates of a polynomial element in this window.
    pub fn coordinates<K: Variance>(&self, q: &Multi<K>) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::from_integer(0.into()); self.len()];
        for (idx, c) in q.iter() {
            if c.is_zero() {
                continue;
            }
            if !c.is_polynomial() {
                return Err(Error::InternalInconsistency("rational coefficient in a polynomial window".into()));
            }
            for (m, coef) in c.numerator().terms() {
                let pos =
                    self.position(m, &idx).ok_or(Error::WindowTooSmall { needed: m.degree(), allowed: self.bound })?;
                out[pos] = coef.clone();
            }
        }
        Ok(out)
    }
}

fn polynomial_degree(pi: &Bivector) -> Result<u32> {
    pi.polynomial_degree().ok_or(Error::NonPolynomialBivector)
}

/// Matrix of `d_pi` from the degree-`p` window of bound `d_in` to the
/// degree-`p+1` window of bound `d_out`.
pub fn assemble_dpi_matrix(pi: &Bivector, p: usize, d_in: u32, d_out: u32) -> Result<RationalMatrix> {
    let n = pi.dim();
    let k = polynomial_degree(pi)?;
    let needed = (d_in + k).saturating_sub(1);
    if !pi.is_zero() && p < n && d_out < needed {
        return Err(Error::WindowTooSmall { needed, allowed: d_out });
    }
    let source = GradedBasis::multivectors(n, p, d_in);
    let target = GradedBasis::multivectors(n, p + 1, d_out);
    map_matrix(&source, &target, |q: PVector| Ok(pi.d_pi(&q)))
}

/// Matrix of a linear map between two windows, assembled column by column.
pub fn map_matrix<K: Variance + Send + Sync, L: Variance + Send + Sync>(
    source: &GradedBasis,
    target: &GradedBasis,
    map: impl Fn(Multi<K>) -> Result<Multi<L>> + Sync,
) -> Result<RationalMatrix> {
    let columns: Vec<Vec<Rational>> = (0..source.len())
        .into_par_iter()
        .map(|i| target.coordinates(&map(source.to_multi(i))?))
        .collect::<Result<_>>()?;
    Ok(RationalMatrix::from_columns(target.len(), &columns))
}

/// A truncated Betti number together with the windows used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiWindow {
    pub degree: usize,
    /// Coefficient bound for cocycles.
    pub window: u32,
    /// Coefficient bound of the preimage window for coboundaries, if any.
    pub preimage_window: Option<u32>,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub betti: usize,
}

/// Preimage bound whose image lands in the cocycle window `d`.
fn preimage_bound(d: u32, k: u32) -> Option<u32> {
    let bound = d as i64 + 1 - k as i64;
    (bound >= 0).then_some(bound as u32)
}

/// `dim ker(d_pi)` on degree-`p` fields with coefficient degree at most `d`,
/// minus the rank of `d_pi` on degree-`(p-1)` fields of coefficient degree
/// `d + 1 - deg(pi)`, whose image lies in the same window.
///
/// For homogeneous `pi` this is exact within the window; otherwise
/// coboundaries of higher-degree preimages are not counted.
pub fn truncated_betti(pi: &Bivector, p: usize, d: u32) -> Result<BettiWindow> {
    let n = pi.dim();
    let k = polynomial_degree(pi)?;
    if p > n {
        return Err(Error::DegreeOverflow(p));
    }
    if !pi.is_poisson() {
        return Err(Error::NotPoisson);
    }
    let d_out = (d + k).saturating_sub(1);
    let a = assemble_dpi_matrix(pi, p, d, d_out)?;
    let cocycles = a.nullity();
    let (preimage_window, coboundaries) = match (p, preimage_bound(d, k)) {
        (0, _) | (_, None) => (None, 0),
        (_, Some(dp)) => (Some(dp), assemble_dpi_matrix(pi, p - 1, dp, d)?.rank()),
    };
    Ok(BettiWindow { degree: p, window: d, preimage_window, cocycles, coboundaries, betti: cocycles - coboundaries })
}

/// Number of classes among `reps` that are independent modulo the
/// coboundaries in the window of [`truncated_betti`]. Non-closed elements are
/// rejected with `None`.
pub fn independent_classes(pi: &Bivector, reps: &[PVector], d: u32) -> Result<Option<usize>> {
    let n = pi.dim();
    let k = polynomial_degree(pi)?;
    let Some(p) = reps.first().map(Multi::degree) else {
        return Ok(Some(0));
    };
    if reps.iter().any(|q| !pi.d_pi(q).is_zero()) {
        return Ok(None);
    }
    let window = GradedBasis::multivectors(n, p, d);
    let rep_cols: Vec<Vec<Rational>> = reps.iter().map(|q| window.coordinates(q)).collect::<Result<_>>()?;
    let reps_m = RationalMatrix::from_columns(window.len(), &rep_cols);
    let image = match (p, preimage_bound(d, k)) {
        (0, _) | (_, None) => RationalMatrix::zeros(window.len(), 0),
        (_, Some(dp)) => assemble_dpi_matrix(pi, p - 1, dp, d)?,
    };
    Ok(Some(image.hstack(&reps_m).rank() - image.rank()))
}

/// Representatives of a basis of the truncated cohomology.
pub fn class_representatives(pi: &Bivector, p: usize, d: u32) -> Result<Vec<PVector>> {
    let n = pi.dim();
    let k = polynomial_degree(pi)?;
    let window = GradedBasis::multivectors(n, p, d);
    let a = assemble_dpi_matrix(pi, p, d, (d + k).saturating_sub(1))?;
    let mut span = match (p, preimage_bound(d, k)) {
        (0, _) | (_, None) => RationalMatrix::zeros(window.len(), 0),
        (_, Some(dp)) => assemble_dpi_matrix(pi, p - 1, dp, d)?,
    };
    let mut rank = span.rank();
    let mut reps = Vec::new();
    for z in a.kernel_basis() {
        let candidate = span.hstack(&RationalMatrix::from_columns(window.len(), std::slice::from_ref(&z)));
        let r = candidate.rank();
        if r > rank {
            rank = r;
            span = candidate;
            reps.push(window.combine(&z));
        }
    }
    Ok(reps)
}
