//! Coordinate tensor fields and the classical operators on them.

mod multi;
mod vector;

pub use multi::{
    binomial, sort_with_sign, subset_rank, subsets, Contravariant, Covariant, Leafwise, LeafwiseForm, Multi, PForm,
    PVector, Variance,
};
pub use vector::{lie_bracket, OneForm, VectorField};

use crate::error::{Error, Result};
use crate::symbolic::{Chart, ScalarField};

/// Contraction `i_X omega` in the first slot.
pub fn interior_v(x: &VectorField, form: &PForm) -> Result<PForm> {
    form.contract_first(x.components())
}

/// Contraction `i_alpha Q` in the first slot.
pub fn interior_f(alpha: &OneForm, q: &PVector) -> Result<PVector> {
    q.contract_first(alpha.components())
}

/// Coordinate exterior derivative.
pub fn exterior_d(form: &PForm) -> Result<PForm> {
    if form.degree() >= form.dim() {
        return Err(Error::DegreeOverflow(form.degree() + 1));
    }
    Ok(d_any(form))
}

/// Exterior derivative that allows the result degree to exceed the
/// dimension (giving the empty form).
fn d_any(form: &PForm) -> PForm {
    let n = form.dim();
    let mut out = PForm::zero(n, form.nvars(), form.degree() + 1);
    for (idx, c) in form.iter() {
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            if idx.contains(&i) {
                continue;
            }
            let dc = c.deriv(i);
            if dc.is_zero() {
                continue;
            }
            let mut k = Vec::with_capacity(idx.len() + 1);
            k.push(i);
            k.extend_from_slice(&idx);
            let sign = sort_with_sign(&mut k).expect("distinct indices");
            out.add_sorted(&k, &if sign < 0 { -dc } else { dc });
        }
    }
    out
}

/// Lie derivative of a form by Cartan's formula `i_X d + d i_X`.
pub fn lie_derivative(x: &VectorField, form: &PForm) -> PForm {
    let mut out = d_any(form).contract_first(x.components()).expect("d raises degree");
    if form.degree() > 0 {
        let ix = form.contract_first(x.components()).expect("degree >= 1");
        out = out.add(&d_any(&ix));
    }
    out
}

/// Lie derivative of a multivector field, componentwise:
/// `(L_X Q)^I = X(Q^I) - sum_l sum_k d_k X^{i_l} Q^{i_1..k..i_p}`.
pub fn lie_derivative_multivector(x: &VectorField, q: &PVector) -> PVector {
    let n = q.dim();
    let jac: Vec<Vec<ScalarField>> = x.components().iter().map(|xi| (0..n).map(|k| xi.deriv(k)).collect()).collect();
    let mut out = q.map(|c| x.apply(c));
    for idx in subsets(n, q.degree()) {
        let mut acc = ScalarField::zero(q.nvars());
        for l in 0..idx.len() {
            for k in 0..n {
                let dx = &jac[idx[l]][k];
                if dx.is_zero() {
                    continue;
                }
                let mut sub = idx.clone();
                sub[l] = k;
                let c = q.get(&sub);
                if !c.is_zero() {
                    acc += &(dx * &c);
                }
            }
        }
        if !acc.is_zero() {
            let cur = out.get(&idx);
            out.set_sorted(&idx, &cur - &acc);
        }
    }
    out
}

/// `omega(X_1, ..., X_p)`.
pub fn eval_form(form: &PForm, args: &[&VectorField]) -> ScalarField {
    let a: Vec<&[ScalarField]> = args.iter().map(|v| v.components()).collect();
    form.evaluate(&a)
}

/// `Q(alpha_1, ..., alpha_p)`.
pub fn eval_multivector(q: &PVector, args: &[&OneForm]) -> ScalarField {
    let a: Vec<&[ScalarField]> = args.iter().map(|v| v.components()).collect();
    q.evaluate(&a)
}

/// Renders a form as e.g. `(x)*dx^dz + dy`.
pub fn describe_form(form: &PForm, chart: &Chart) -> String {
    form.describe(chart, |idx| join_basis(idx, |i| format!("d{}", chart.name(i))))
}

/// Renders a multivector as e.g. `(z)*D_x^D_y`.
pub fn describe_multivector(q: &PVector, chart: &Chart) -> String {
    q.describe(chart, |idx| join_basis(idx, |i| format!("D_{}", chart.name(i))))
}

/// Renders a leafwise form on the frame coframe `t0, t1, ...`.
pub fn describe_leafwise(form: &LeafwiseForm, chart: &Chart) -> String {
    form.describe(chart, |idx| join_basis(idx, |i| format!("t{i}")))
}

fn join_basis(idx: &[usize], name: impl Fn(usize) -> String) -> String {
    idx.iter().map(|&i| name(i)).collect::<Vec<_>>().join("^")
}
