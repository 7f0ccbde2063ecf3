//! Splitting of multivector fields along a regular foliation, and the maps
//! from leafwise forms and basic forms into multivector fields.

use rayon::prelude::*;
use serde::Serialize;

use crate::connection::CoMetric;
use crate::error::{Error, Result};
use crate::foliation::{leafwise_d, FoliationSplit};
use crate::poisson::Bivector;
use crate::symbolic::{Chart, ScalarField};
use crate::tensor::{
    describe_form, describe_multivector, eval_multivector, exterior_d, interior_v, subsets, LeafwiseForm, OneForm,
    PForm, PVector, VectorField,
};

use super::window::GradedBasis;

/// `v_1 ^ ... ^ v_p`.
pub fn wedge_vectors(n: usize, nvars: usize, vs: &[&VectorField]) -> PVector {
    vs.iter().fold(PVector::scalar(n, ScalarField::one(nvars)), |acc, v| {
        acc.wedge(&v.to_multi()).expect("degree bounded by the number of factors")
    })
}

/// `(Q0, Q1)` with `Q = Q0 + Q1`, `Q0` killed by the kernel forms and `Q1`
/// vanishing when every argument is a perpendicular form.
pub fn split_multivector(q: &PVector, split: &FoliationSplit) -> (PVector, PVector) {
    let n = q.dim();
    let p = q.degree();
    if p == 0 {
        return (q.clone(), PVector::zero(n, q.nvars(), 0));
    }
    let mut q0 = PVector::zero(n, q.nvars(), p);
    for a in subsets(split.rank, p) {
        let forms: Vec<&OneForm> = a.iter().map(|&i| &split.perp_frame[i]).collect();
        let c = eval_multivector(q, &forms);
        if c.is_zero() {
            continue;
        }
        let duals: Vec<&VectorField> = a.iter().map(|&i| &split.ts_dual[i]).collect();
        q0 = q0.add(&wedge_vectors(n, q.nvars(), &duals).scale_by(&c));
    }
    let q1 = q.sub(&q0);
    (q0, q1)
}

/// First element whose differential leaks into the other summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitViolation {
    pub element: String,
    /// Summand (0 or 1) the element was taken from.
    pub summand: u8,
    pub leak: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPreservation {
    pub degree: usize,
    pub window: u32,
    pub checked: usize,
    pub violation: Option<SplitViolation>,
}

/// Splits every basis element of the degree-`p` window and checks that
/// `d_pi` maps each summand into the same summand one degree up.
pub fn dpi_preserves_split(pi: &Bivector, split: &FoliationSplit, p: usize, d: u32) -> SplitPreservation {
    let n = pi.dim();
    let chart = pi.chart();
    let basis = GradedBasis::multivectors(n, p, d);
    let violations: Vec<Option<SplitViolation>> = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            let (q0, q1) = split_multivector(&basis.to_multi(i), split);
            for (summand, part) in [(0u8, q0), (1u8, q1)] {
                if part.is_zero() {
                    continue;
                }
                let (a0, a1) = split_multivector(&pi.d_pi(&part), split);
                let leak = if summand == 0 { a1 } else { a0 };
                if !leak.is_zero() {
                    return Some(SplitViolation {
                        element: describe_multivector(&part, chart),
                        summand,
                        leak: describe_multivector(&leak, chart),
                    });
                }
            }
            None
        })
        .collect();
    SplitPreservation { degree: p, window: d, checked: basis.len(), violation: violations.into_iter().flatten().next() }
}

/// Pushforward of a leafwise form:
/// `pi(w)(a_1, ..., a_p) = w(pi(a_1), ..., pi(a_p))`.
pub fn pi_pushforward(split: &FoliationSplit, form: &LeafwiseForm) -> PVector {
    let n = split.dim();
    let nvars = form.nvars();
    let mut out = PVector::zero(n, nvars, form.degree());
    for (a, c) in form.iter() {
        if c.is_zero() {
            continue;
        }
        let duals: Vec<&VectorField> = a.iter().map(|&i| &split.ts_dual[i]).collect();
        out = out.add(&wedge_vectors(n, nvars, &duals).scale_by(c));
    }
    out
}

/// `pi(d_F w) - d_pi(pi(w))`.
pub fn naturality_residual(pi: &Bivector, split: &FoliationSplit, form: &LeafwiseForm) -> Result<PVector> {
    let lhs = pi_pushforward(split, &leafwise_d(split, form)?);
    Ok(lhs.sub(&pi.d_pi(&pi_pushforward(split, form))))
}

/// Checks that `w` and `dw` are killed by every leaf-tangent field.
pub fn check_basic(split: &FoliationSplit, form: &PForm, chart: &Chart) -> Result<()> {
    let dw = if form.degree() < form.dim() {
        exterior_d(form)?
    } else {
        PForm::zero(form.dim(), form.nvars(), form.degree() + 1)
    };
    for x in &split.ts_frame {
        if form.degree() > 0 {
            let c = interior_v(x, form)?;
            if !c.is_zero() {
                return Err(Error::NotBasic(format!(
                    "contraction of {} with {} is {}",
                    describe_form(form, chart),
                    x.display(chart),
                    describe_form(&c, chart)
                )));
            }
        }
        let c = interior_v(x, &dw)?;
        if !c.is_zero() {
            return Err(Error::NotBasic(format!(
                "contraction of d({}) with {} is {}",
                describe_form(form, chart),
                x.display(chart),
                describe_form(&c, chart)
            )));
        }
    }
    Ok(())
}

/// `#(w)(a_1, ..., a_p) = w(#a_1, ..., #a_p)` for a basic form `w`.
pub fn sharp_basic(g: &CoMetric, split: &FoliationSplit, form: &PForm) -> Result<PVector> {
    check_basic(split, form, g.chart())?;
    let n = form.dim();
    let nvars = form.nvars();
    let columns: Vec<VectorField> = (0..n).map(|i| g.sharp(&OneForm::coordinate(n, i))).collect();
    let mut out = PVector::zero(n, nvars, form.degree());
    for (idx, c) in form.iter() {
        if c.is_zero() {
            continue;
        }
        let vs: Vec<&VectorField> = idx.iter().map(|&i| &columns[i]).collect();
        out = out.add(&wedge_vectors(n, nvars, &vs).scale_by(c));
    }
    Ok(out)
}

/// `d_pi #(w)`, which vanishes for basic `w` on a Riemann-Poisson manifold.
pub fn sharp_basic_residual(pi: &Bivector, g: &CoMetric, split: &FoliationSplit, form: &PForm) -> Result<PVector> {
    Ok(pi.d_pi(&sharp_basic(g, split, form)?))
}
