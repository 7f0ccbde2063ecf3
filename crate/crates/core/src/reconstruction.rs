//! Builds a Poisson bivector and cotangent metric from a foliation with a
//! bundle-like metric and a leafwise symplectic form, and checks the result.

use crate::connection::{is_riemann_poisson, positive_definite_at, CoMetric};
use crate::error::{Error, Result};
use crate::foliation::{
    frame_to_coordinates, induced_tangent_metric, leafwise_d_on, leafwise_symplectic, split_cotangent,
    structure_functions, TangentMetric,
};
use crate::poisson::Bivector;
use crate::symbolic::{
    identically_zero_combinations, Chart, FieldMatrix, Monomial, Poly, Rational, RationalMatrix, RationalPoint,
    ScalarField,
};
use crate::tensor::{eval_form, lie_bracket, lie_derivative, subsets, LeafwiseForm, OneForm, PForm, VectorField};

/// Degree bound of the polynomial ansatz for perpendicular foliate fields.
pub const FOLIATE_ANSATZ_DEGREE: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationInput {
    pub chart: Chart,
    /// Spans the distribution `F`.
    pub frame: Vec<VectorField>,
    pub metric: TangentMetric,
    /// Coordinate 2-form, expected to vanish on the orthogonal complement of `F`.
    pub omega: PForm,
    pub samples: Vec<RationalPoint>,
}

/// Annihilators and orthogonal complement of the distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complements {
    /// Forms killing `F`.
    pub annihilator: Vec<OneForm>,
    /// Spans the `g`-orthogonal complement `F'`.
    pub perp_fields: Vec<VectorField>,
    /// Forms killing `F'`.
    pub perp_annihilator: Vec<OneForm>,
}

fn kernel_of_rows(n: usize, rows: Vec<Vec<ScalarField>>) -> Vec<Vec<ScalarField>> {
    if rows.is_empty() {
        return (0..n).map(|i| OneForm::coordinate(n, i).components().to_vec()).collect();
    }
    FieldMatrix::from_rows(n, rows).kernel_basis()
}

pub fn complements(input: &FoliationInput) -> Complements {
    let n = input.chart.dim();
    let annihilator: Vec<OneForm> = kernel_of_rows(n, input.frame.iter().map(|v| v.components().to_vec()).collect())
        .into_iter()
        .map(OneForm::new)
        .collect();
    let perp_fields: Vec<VectorField> =
        kernel_of_rows(n, input.frame.iter().map(|v| input.metric.flat(v).components().to_vec()).collect())
            .into_iter()
            .map(VectorField::new)
            .collect();
    let perp_annihilator: Vec<OneForm> =
        kernel_of_rows(n, perp_fields.iter().map(|v| v.components().to_vec()).collect())
            .into_iter()
            .map(OneForm::new)
            .collect();
    Complements { annihilator, perp_fields, perp_annihilator }
}

/// `omega(F_a, F_b)`.
fn frame_gram(input: &FoliationInput) -> FieldMatrix {
    let n = input.chart.dim();
    let r = input.frame.len();
    let mut w = FieldMatrix::zeros(n, r, r);
    for a in 0..r {
        for b in 0..r {
            w.set(a, b, eval_form(&input.omega, &[&input.frame[a], &input.frame[b]]));
        }
    }
    w
}

fn leafwise_omega(input: &FoliationInput) -> LeafwiseForm {
    let n = input.chart.dim();
    let r = input.frame.len();
    let comps =
        subsets(r, 2).iter().map(|ab| eval_form(&input.omega, &[&input.frame[ab[0]], &input.frame[ab[1]]])).collect();
    LeafwiseForm::from_components(r, n, 2, comps)
}

fn check_nondegenerate(input: &FoliationInput, w: &FieldMatrix) -> Result<()> {
    let r = input.frame.len();
    let frame_rows: Vec<Vec<ScalarField>> = input.frame.iter().map(|v| v.components().to_vec()).collect();
    for p in &input.samples {
        if r > 0 {
            let fr = RationalMatrix::from_rows(
                frame_rows
                    .iter()
                    .map(|row| row.iter().map(|c| c.eval(p)).collect::<Result<_>>())
                    .collect::<Result<_>>()?,
            )
            .rank();
            if fr < r {
                return Err(Error::RankNotConstant { point: p.to_string(), declared: r, found: fr });
            }
            if RationalMatrix::from_rows(w.eval(p)?).rank() < r {
                return Err(Error::DegenerateOmegaAt(p.to_string()));
            }
        }
        if !positive_definite_at(input.metric.matrix(), p)? {
            return Err(Error::NotPositiveDefiniteAt(p.to_string()));
        }
    }
    Ok(())
}

fn check_horizontal(input: &FoliationInput, comp: &Complements) -> Result<()> {
    let n = input.chart.dim();
    for v in &comp.perp_fields {
        for i in 0..n {
            let e = VectorField::coordinate(n, i);
            if !eval_form(&input.omega, &[v, &e]).is_zero() {
                return Err(Error::OmegaNotHorizontal);
            }
        }
    }
    Ok(())
}

/// Perpendicular foliate fields `sum_k h_k P_k` with polynomial `h_k` of
/// degree at most `max_degree`, as a rational basis of the solution space.
pub fn perpendicular_foliate_fields(input: &FoliationInput, comp: &Complements, max_degree: u32) -> Vec<VectorField> {
    let n = input.chart.dim();
    let monomials: Vec<ScalarField> = Monomial::up_to_degree(n, max_degree)
        .into_iter()
        .map(|m| ScalarField::from_poly(Poly::monomial(m, Rational::from_integer(1.into()))))
        .collect();
    let candidates: Vec<VectorField> =
        comp.perp_fields.iter().flat_map(|p| monomials.iter().map(move |m| p.scale_by(m))).collect();
    // sigma_l([X, F_j]) = 0 for every annihilator form and frame field
    let mut equations = Vec::new();
    for sigma in &comp.annihilator {
        for fj in &input.frame {
            equations.push(candidates.iter().map(|x| sigma.pair(&lie_bracket(x, fj))).collect::<Vec<_>>());
        }
    }
    identically_zero_combinations(candidates.len(), &equations)
        .into_iter()
        .map(|coeffs| {
            let mut acc = VectorField::zero(n);
            for (c, x) in coeffs.iter().zip(&candidates) {
                if !num_traits::Zero::is_zero(c) {
                    acc = acc.add(&x.scale_by(&ScalarField::constant(n, c.clone())));
                }
            }
            acc
        })
        .collect()
}

/// Result of a successful validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedFoliation {
    pub complements: Complements,
    pub foliate_fields: Vec<VectorField>,
}

/// Checks involutivity, leafwise closedness, nondegeneracy and horizontality
/// of the 2-form, invariance along perpendicular foliate fields, and the
/// bundle-like property, in that order.
pub fn validate_input(input: &FoliationInput) -> Result<ValidatedFoliation> {
    let structure = structure_functions(&input.frame)?;
    let om = leafwise_omega(input);
    if !leafwise_d_on(&input.frame, &structure, &om)?.is_zero() {
        return Err(Error::NotLeafwiseClosed);
    }
    let w = frame_gram(input);
    check_nondegenerate(input, &w)?;
    let comp = complements(input);
    check_horizontal(input, &comp)?;
    let foliate = if comp.perp_fields.is_empty() {
        Vec::new()
    } else {
        let fields = perpendicular_foliate_fields(input, &comp, FOLIATE_ANSATZ_DEGREE);
        if fields.is_empty() {
            return Err(Error::Inconclusive(format!(
                "no perpendicular foliate field with polynomial coefficients of degree <= {FOLIATE_ANSATZ_DEGREE}"
            )));
        }
        fields
    };
    for x in &foliate {
        let lx = lie_derivative(x, &input.omega);
        for u in 0..input.frame.len() {
            for v in u + 1..input.frame.len() {
                let value = eval_form(&lx, &[&input.frame[u], &input.frame[v]]);
                if !value.is_zero() {
                    return Err(Error::InvarianceFails {
                        x: x.display(&input.chart),
                        u,
                        v,
                        value: value.display(&input.chart).to_string(),
                    });
                }
            }
        }
    }
    for (i, x) in foliate.iter().enumerate() {
        for y in &foliate[i..] {
            let gxy = input.metric.inner(x, y);
            for f in &input.frame {
                let d = f.apply(&gxy);
                if !d.is_zero() {
                    return Err(Error::NotBundleLike(format!(
                        "g({}, {}) = {} varies along the leaves",
                        x.display(&input.chart),
                        y.display(&input.chart),
                        gxy.display(&input.chart)
                    )));
                }
            }
        }
    }
    Ok(ValidatedFoliation { complements: comp, foliate_fields: foliate })
}

/// `omega^{-1}(alpha)` for `alpha` killing the orthogonal complement:
/// the `v` in `F` with `omega(v, .) = alpha`.
fn omega_inverse(input: &FoliationInput, w_t: &FieldMatrix, alpha: &OneForm) -> Result<VectorField> {
    let rhs: Vec<ScalarField> = input.frame.iter().map(|f| alpha.pair(f)).collect();
    let c = w_t.solve_vec(&rhs)?;
    Ok(VectorField::combination(input.chart.dim(), &input.frame, &c))
}

/// Assembles the bivector and cotangent metric from the piecewise
/// definitions. Does not run [`validate_input`].
pub fn build_structure(input: &FoliationInput) -> Result<(Bivector, CoMetric)> {
    let n = input.chart.dim();
    let r = input.frame.len();
    let comp = complements(input);
    let w = frame_gram(input);
    if w.determinant()?.is_zero() {
        return Err(Error::DegenerateOmegaAt("a generic point".into()));
    }
    let w_t = w.transpose();
    let inv: Vec<VectorField> =
        comp.perp_annihilator.iter().map(|a| omega_inverse(input, &w_t, a)).collect::<Result<_>>()?;
    let metric_inv = input.metric.matrix().inverse().map_err(|_| Error::SingularMetric)?;
    let mut pi_block = FieldMatrix::zeros(n, n, n);
    let mut g_block = FieldMatrix::zeros(n, n, n);
    for a in 0..r {
        for b in 0..r {
            pi_block.set(a, b, eval_form(&input.omega, &[&inv[a], &inv[b]]));
            g_block.set(a, b, input.metric.inner(&inv[a], &inv[b]));
        }
    }
    let sharp: Vec<VectorField> =
        comp.annihilator.iter().map(|s| VectorField::new(metric_inv.mul_vec(s.components()))).collect();
    for k in 0..n - r {
        for l in 0..n - r {
            g_block.set(r + k, r + l, input.metric.inner(&sharp[k], &sharp[l]));
        }
    }
    // coordinates of the coframe [F'°; F°] as columns
    let coframe: Vec<VectorField> = comp
        .perp_annihilator
        .iter()
        .chain(&comp.annihilator)
        .map(|a| VectorField::new(a.components().to_vec()))
        .collect();
    let pi_m = frame_to_coordinates(n, &coframe, &pi_block)?;
    let g_m = frame_to_coordinates(n, &coframe, &g_block)?;
    let pi = Bivector::new(input.chart.clone(), pi_m)
        .map_err(|_| Error::InternalInconsistency("constructed bivector is not antisymmetric".into()))?;
    let g = CoMetric::new(input.chart.clone(), g_m)
        .map_err(|_| Error::InternalInconsistency("constructed metric is not symmetric".into()))?;
    g.validate(&input.samples)?;
    Ok((pi, g))
}

/// Verdicts of [`certify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub poisson: bool,
    pub riemann_poisson: bool,
    pub kernel_is_annihilator: bool,
}

/// Checks that the constructed structure is Poisson, Riemann-Poisson and has
/// kernel equal to the annihilator of the distribution.
pub fn certify(pi: &Bivector, g: &CoMetric, input: &FoliationInput) -> Result<Certificate> {
    let poisson = pi.is_poisson();
    let riemann_poisson = poisson && is_riemann_poisson(pi, g)?;
    let comp = complements(input);
    let kernel_is_annihilator =
        pi.matrix().rank() == input.frame.len() && comp.annihilator.iter().all(|s| pi.sharp(s).is_zero());
    let cert = Certificate { poisson, riemann_poisson, kernel_is_annihilator };
    if !cert.poisson {
        return Err(Error::CertificationFailed("the constructed bivector is not Poisson".into()));
    }
    if !cert.riemann_poisson {
        return Err(Error::CertificationFailed("the constructed structure is not Riemann-Poisson".into()));
    }
    if !cert.kernel_is_annihilator {
        return Err(Error::CertificationFailed("the kernel differs from the annihilator of the distribution".into()));
    }
    Ok(cert)
}

/// Extracts `(TS, induced metric, leafwise form extended by zero)` from a
/// regular Riemann-Poisson structure.
pub fn extract_foliation(
    pi: &Bivector,
    g: &CoMetric,
    declared_rank: usize,
    samples: &[RationalPoint],
) -> Result<FoliationInput> {
    let n = pi.dim();
    let split = split_cotangent(pi, g, declared_rank, samples)?;
    let metric = induced_tangent_metric(g, &split)?;
    let om = leafwise_symplectic(pi, &split, samples)?;
    let r = split.rank;
    let mut block = FieldMatrix::zeros(n, n, n);
    for a in 0..r {
        for b in 0..r {
            block.set(a, b, om.get(&[a, b]));
        }
    }
    let frame: Vec<VectorField> = split.ts_frame.iter().chain(&split.h_frame).cloned().collect();
    let coords = frame_to_coordinates(n, &frame, &block)?;
    let comps = subsets(n, 2).iter().map(|ij| coords.get(ij[0], ij[1]).clone()).collect();
    Ok(FoliationInput {
        chart: pi.chart().clone(),
        frame: split.ts_frame.clone(),
        metric,
        omega: PForm::from_components(n, n, 2, comps),
        samples: samples.to_vec(),
    })
}

/// Outcome of extract-then-rebuild.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub bivector_equal: bool,
    pub metric_equal: bool,
}

pub fn round_trip(pi: &Bivector, g: &CoMetric, declared_rank: usize, samples: &[RationalPoint]) -> Result<RoundTrip> {
    let input = extract_foliation(pi, g, declared_rank, samples)?;
    let (pi2, g2) = build_structure(&input)?;
    Ok(RoundTrip { bivector_equal: &pi2 == pi, metric_equal: &g2 == g })
}
