//! The regular symplectic foliation of a Poisson bivector with a cotangent
//! metric: splittings, leafwise symplectic form, induced metric, leaf
//! connection, basic forms and invariance properties.

use crate::connection::{frame_rank_at, positive_definite_at, ChristoffelTable, CoMetric};
use crate::error::{Error, Result};
use crate::poisson::Bivector;
use crate::symbolic::{FieldMatrix, RationalMatrix, RationalPoint, ScalarField};
use crate::tensor::{
    exterior_d, interior_v, lie_bracket, lie_derivative_multivector, subsets, LeafwiseForm, OneForm, VectorField,
};

/// Frames realizing `T*P = Ker pi + (Ker pi)^perp` and `TP = TS + H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationSplit {
    /// Symplectic rank `r`.
    pub rank: usize,
    /// Spans `Ker pi` (`n - r` forms).
    pub kernel_frame: Vec<OneForm>,
    /// Spans the metric complement of `Ker pi` (`r` forms).
    pub perp_frame: Vec<OneForm>,
    /// `pi(perp_frame)`, spanning `TS`.
    pub ts_frame: Vec<VectorField>,
    /// `#(kernel_frame)`, spanning `H`.
    pub h_frame: Vec<VectorField>,
    /// Vectors in `TS` dual to `perp_frame` and killed by the kernel forms.
    pub ts_dual: Vec<VectorField>,
    /// Vectors in `H` dual to `kernel_frame` and killed by the perp forms.
    pub h_dual: Vec<VectorField>,
}

impl FoliationSplit {
    pub fn dim(&self) -> usize {
        self.kernel_frame.len() + self.perp_frame.len()
    }

    /// Perp forms followed by kernel forms; dual to `ts_dual` then `h_dual`.
    pub fn coframe(&self) -> Vec<OneForm> {
        self.perp_frame.iter().chain(&self.kernel_frame).cloned().collect()
    }
}

fn column_matrix(n: usize, cols: &[Vec<ScalarField>]) -> FieldMatrix {
    FieldMatrix::from_columns(n, n, cols)
}

/// Coefficients of `v` in the span of `frame`, or `None` when `v` leaves it.
pub fn coordinates_in(frame: &[VectorField], v: &VectorField) -> Result<Option<Vec<ScalarField>>> {
    let n = v.dim();
    if frame.is_empty() {
        return Ok(v.is_zero().then(Vec::new));
    }
    let cols: Vec<Vec<ScalarField>> = frame.iter().map(|f| f.components().to_vec()).collect();
    match column_matrix(n, &cols).solve_vec(v.components()) {
        Ok(c) => Ok(Some(c)),
        Err(Error::Inconsistent) => Ok(None),
        Err(e) => Err(e),
    }
}

fn forms_kernel(n: usize, rows: &[Vec<ScalarField>]) -> Vec<Vec<ScalarField>> {
    if rows.is_empty() {
        return (0..n).map(|i| OneForm::coordinate(n, i).components().to_vec()).collect();
    }
    FieldMatrix::from_rows(n, rows.to_vec()).kernel_basis()
}

/// Splits the cotangent and tangent bundles along the symplectic foliation.
/// Regularity is checked at the samples against the declared rank.
pub fn split_cotangent(
    pi: &Bivector,
    g: &CoMetric,
    declared_rank: usize,
    samples: &[RationalPoint],
) -> Result<FoliationSplit> {
    let n = pi.dim();
    if declared_rank % 2 == 1 {
        return Err(Error::RankOdd(declared_rank));
    }
    for p in samples {
        let found = pi.rank_at(p)?;
        if found != declared_rank {
            return Err(Error::RankNotConstant { point: p.to_string(), declared: declared_rank, found });
        }
    }
    let generic = pi.matrix().rank();
    if generic != declared_rank {
        return Err(Error::RankNotConstant {
            point: "a generic point".into(),
            declared: declared_rank,
            found: generic,
        });
    }
    let kernel: Vec<Vec<ScalarField>> = pi.matrix().kernel_basis();
    // <kappa, beta> = kappa^T G beta
    let kg: Vec<Vec<ScalarField>> = kernel.iter().map(|k| g.matrix().transpose().mul_vec(k)).collect();
    let perp = forms_kernel(n, &kg);
    let kernel_frame: Vec<OneForm> = kernel.into_iter().map(OneForm::new).collect();
    let perp_frame: Vec<OneForm> = perp.into_iter().map(OneForm::new).collect();
    for p in samples {
        let kr = frame_rank_at(&kernel_frame.iter().map(|k| k.components().to_vec()).collect::<Vec<_>>(), p)?;
        let pr = frame_rank_at(&perp_frame.iter().map(|k| k.components().to_vec()).collect::<Vec<_>>(), p)?;
        if kr != kernel_frame.len() || pr != perp_frame.len() {
            return Err(Error::RankNotConstant { point: p.to_string(), declared: declared_rank, found: pr });
        }
    }
    let ts_frame: Vec<VectorField> = perp_frame.iter().map(|a| pi.sharp(a)).collect();
    let h_frame: Vec<VectorField> = kernel_frame.iter().map(|k| g.sharp(k)).collect();
    let coframe: Vec<Vec<ScalarField>> =
        perp_frame.iter().chain(&kernel_frame).map(|a| a.components().to_vec()).collect();
    let dual = FieldMatrix::from_rows(n, coframe).inverse().map_err(|_| Error::SingularMetric)?;
    let r = perp_frame.len();
    let ts_dual = (0..r).map(|c| VectorField::new(dual.column(c))).collect();
    let h_dual = (r..n).map(|c| VectorField::new(dual.column(c))).collect();
    Ok(FoliationSplit { rank: r, kernel_frame, perp_frame, ts_frame, h_frame, ts_dual, h_dual })
}

/// `pi^{-1}(u)` inside the perp bundle; `u` must be tangent to the leaves.
pub fn pi_inverse(split: &FoliationSplit, u: &VectorField) -> Result<OneForm> {
    let c = coordinates_in(&split.ts_frame, u)?.ok_or(Error::Inconsistent)?;
    Ok(OneForm::combination(u.dim(), &split.perp_frame, &c))
}

/// Leafwise symplectic form on `ts_frame`: `omega(ts_a, ts_b) = pi(perp_a, perp_b)`.
pub fn leafwise_symplectic(pi: &Bivector, split: &FoliationSplit, samples: &[RationalPoint]) -> Result<LeafwiseForm> {
    let n = pi.dim();
    let r = split.rank;
    let comps = subsets(r, 2).iter().map(|ab| pi.pair(&split.perp_frame[ab[0]], &split.perp_frame[ab[1]])).collect();
    let omega = LeafwiseForm::from_components(r, n, 2, comps);
    let m = FieldMatrix::from_rows(n, (0..r).map(|a| (0..r).map(|b| omega.get(&[a, b])).collect()).collect());
    for p in samples {
        let values = if r == 0 { Vec::new() } else { m.eval(p)? };
        if r > 0 && RationalMatrix::from_rows(values).rank() < r {
            return Err(Error::SingularLeafwiseForm(p.to_string()));
        }
    }
    Ok(omega)
}

/// Symmetric bilinear form on tangent vectors, `g(d/dx^i, d/dx^j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentMetric {
    matrix: FieldMatrix,
}

impl TangentMetric {
    pub fn new(matrix: FieldMatrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            let n = matrix.rows();
            for i in 0..n {
                for j in i + 1..n {
                    if matrix.get(i, j) != matrix.get(j, i) {
                        return Err(Error::NotSymmetric(i, j));
                    }
                }
            }
        }
        Ok(TangentMetric { matrix })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        self.matrix.get(i, j)
    }

    pub fn inner(&self, u: &VectorField, v: &VectorField) -> ScalarField {
        OneForm::new(self.matrix.mul_vec(u.components())).pair(v)
    }

    /// The 1-form `g(u, .)`.
    pub fn flat(&self, u: &VectorField) -> OneForm {
        OneForm::new(self.matrix.mul_vec(u.components()))
    }

    pub fn is_positive_definite_at(&self, p: &RationalPoint) -> Result<bool> {
        positive_definite_at(&self.matrix, p)
    }
}

/// Converts a bilinear form given on a vector frame (columns of `frame`) to
/// coordinates: `E^{-T} B E^{-1}`.
pub(crate) fn frame_to_coordinates(n: usize, frame: &[VectorField], block: &FieldMatrix) -> Result<FieldMatrix> {
    let e = column_matrix(n, &frame.iter().map(|v| v.components().to_vec()).collect::<Vec<_>>());
    let inv = e.inverse()?;
    Ok(inv.transpose().mul(block).mul(&inv))
}

/// The tangent metric defined blockwise: `<pi^{-1}u, pi^{-1}v>` on `TS`,
/// `<alpha, beta>` on `H = #(Ker pi)`, zero across.
pub fn induced_tangent_metric(g: &CoMetric, split: &FoliationSplit) -> Result<TangentMetric> {
    let n = g.dim();
    let r = split.rank;
    let mut block = FieldMatrix::zeros(n, n, n);
    for a in 0..r {
        for b in 0..r {
            block.set(a, b, g.inner(&split.perp_frame[a], &split.perp_frame[b]));
        }
    }
    for k in 0..n - r {
        for l in 0..n - r {
            block.set(r + k, r + l, g.inner(&split.kernel_frame[k], &split.kernel_frame[l]));
        }
    }
    let frame: Vec<VectorField> = split.ts_frame.iter().chain(&split.h_frame).cloned().collect();
    TangentMetric::new(frame_to_coordinates(n, &frame, &block)?)
}

/// Leaf connection on `ts_frame`: `nabla_{ts_a} ts_b = sum_c coeff[a][b][c] ts_c`,
/// from `nabla_{pi(alpha)} pi(beta) = pi(D_alpha beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafConnection {
    pub coeffs: Vec<Vec<Vec<ScalarField>>>,
}

impl LeafConnection {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().flatten().all(ScalarField::is_zero)
    }
}

pub fn leaf_connection(d: &ChristoffelTable, pi: &Bivector, split: &FoliationSplit) -> Result<LeafConnection> {
    let r = split.rank;
    let frame = &split.perp_frame[..r];
    let coeffs = frame
        .iter()
        .map(|alpha| {
            frame
                .iter()
                .map(|beta| {
                    let v = pi.sharp(&d.apply(pi, alpha, beta));
                    coordinates_in(&split.ts_frame, &v)?.ok_or_else(|| {
                        Error::InternalInconsistency("image of the sharp map left the leaf distribution".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LeafConnection { coeffs })
}

/// `ts_a.omega(b,c) - omega(nabla_a b, c) - omega(b, nabla_a c)` for every frame triple.
pub fn parallel_omega_residuals(
    split: &FoliationSplit,
    nabla: &LeafConnection,
    omega: &LeafwiseForm,
) -> Vec<((usize, usize, usize), ScalarField)> {
    let r = split.rank;
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let mut v = split.ts_frame[a].apply(&omega.get(&[b, c]));
                for e in 0..r {
                    let gb = &nabla.coeffs[a][b][e];
                    if !gb.is_zero() {
                        v -= &(gb * &omega.get(&[e, c]));
                    }
                    let gc = &nabla.coeffs[a][c][e];
                    if !gc.is_zero() {
                        v -= &(gc * &omega.get(&[b, e]));
                    }
                }
                out.push(((a, b, c), v));
            }
        }
    }
    out
}

/// Basic 1-form by definition: `pi(alpha) = 0` and `i_{pi(dx^i)} d alpha = 0`.
pub fn is_basic_by_definition(pi: &Bivector, alpha: &OneForm) -> Result<bool> {
    let n = pi.dim();
    if !pi.sharp(alpha).is_zero() {
        return Ok(false);
    }
    let da = exterior_d(&alpha.to_multi())?;
    for i in 0..n {
        if !interior_v(&pi.sharp(&OneForm::coordinate(n, i)), &da)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basic 1-form by vanishing Koszul brackets. Besides the coordinate forms the
/// brackets with `x^j dx^i` are tested, since `[alpha, f beta]` picks up
/// `(pi(alpha).f) beta`.
pub fn is_basic_by_bracket(pi: &Bivector, alpha: &OneForm) -> Result<bool> {
    let n = pi.dim();
    for i in 0..n {
        let e = OneForm::coordinate(n, i);
        if !pi.koszul_bracket(alpha, &e)?.is_zero() {
            return Ok(false);
        }
        for j in 0..n {
            let fe = e.scale_by(&ScalarField::var(n, j));
            if !pi.koszul_bracket(alpha, &fe)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Both routes; they must agree.
pub fn is_basic_one_form(pi: &Bivector, alpha: &OneForm) -> Result<bool> {
    let a = is_basic_by_definition(pi, alpha)?;
    let b = is_basic_by_bracket(pi, alpha)?;
    if a != b {
        return Err(Error::InternalInconsistency("basic-form tests disagree".into()));
    }
    Ok(a)
}

/// `[X, ts_j]` is tangent to the leaves for every `j`.
pub fn is_foliate(x: &VectorField, split: &FoliationSplit) -> bool {
    split.ts_frame.iter().all(|y| {
        let b = lie_bracket(x, y);
        split.kernel_frame.iter().all(|k| k.pair(&b).is_zero())
    })
}

/// The four characterizations of basic kernel forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCharacterization {
    pub basic: bool,
    pub parallel: bool,
    pub sharp_foliate: bool,
    pub sharp_preserves_pi: bool,
}

impl BasicCharacterization {
    pub fn all_agree(&self) -> bool {
        self.basic == self.parallel
            && self.parallel == self.sharp_foliate
            && self.sharp_foliate == self.sharp_preserves_pi
    }
}

pub fn characterize_kernel_form(
    pi: &Bivector,
    g: &CoMetric,
    d: &ChristoffelTable,
    split: &FoliationSplit,
    alpha: &OneForm,
) -> Result<BasicCharacterization> {
    let n = pi.dim();
    let basic = is_basic_one_form(pi, alpha)?;
    let parallel = (0..n).all(|i| d.apply(pi, &OneForm::coordinate(n, i), alpha).is_zero());
    let s = g.sharp(alpha);
    let sharp_foliate = is_foliate(&s, split);
    let sharp_preserves_pi = lie_derivative_multivector(&s, &pi.to_multivector()).is_zero();
    Ok(BasicCharacterization { basic, parallel, sharp_foliate, sharp_preserves_pi })
}

/// Basic forms among `kernel_frame[k] * casimir` for polynomial Casimirs up
/// to `max_degree`.
pub fn basic_form_family(pi: &Bivector, split: &FoliationSplit, max_degree: u32) -> Result<Vec<OneForm>> {
    let casimirs = pi.casimir_basis(max_degree);
    let mut out = Vec::new();
    for k in &split.kernel_frame {
        for c in &casimirs {
            let a = k.scale_by(c);
            if is_basic_one_form(pi, &a)? {
                out.push(a);
            }
        }
    }
    Ok(out)
}

/// Pairs in `family` whose inner product is not a Casimir function.
pub fn non_casimir_pairs(pi: &Bivector, g: &CoMetric, family: &[OneForm]) -> Vec<(usize, usize, ScalarField)> {
    let mut out = Vec::new();
    for i in 0..family.len() {
        for j in i..family.len() {
            let v = g.inner(&family[i], &family[j]);
            if !pi.is_casimir(&v) {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Outcome of the bundle-like test on an enumerated basic family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleLikeReport {
    pub family_size: usize,
    pub failures: Vec<(usize, usize, ScalarField)>,
}

/// `g(#alpha, #beta) = <alpha, beta>` is Casimir for basic `alpha, beta`.
pub fn bundle_like_check(
    pi: &Bivector,
    g: &CoMetric,
    split: &FoliationSplit,
    max_degree: u32,
) -> Result<BundleLikeReport> {
    let family = basic_form_family(pi, split, max_degree)?;
    let failures = non_casimir_pairs(pi, g, &family);
    Ok(BundleLikeReport { family_size: family.len(), failures })
}

/// `(L_X pi)(alpha, beta)`.
pub fn lie_derivative_pi_on(pi: &Bivector, x: &VectorField, alpha: &OneForm, beta: &OneForm) -> ScalarField {
    let lx = lie_derivative_multivector(x, &pi.to_multivector());
    Bivector::from_multivector(pi.chart().clone(), &lx).pair(alpha, beta)
}

/// `[alpha,beta]_pi(X) - (L_X pi)(alpha,beta)`. Vanishes when `alpha(X)` and
/// `beta(X)` are constant, in particular for perp forms and `X` tangent to `H`.
pub fn bracket_lie_residual(pi: &Bivector, x: &VectorField, alpha: &OneForm, beta: &OneForm) -> Result<ScalarField> {
    let lhs = pi.koszul_bracket(alpha, beta)?.pair(x);
    Ok(&lhs - &lie_derivative_pi_on(pi, x, alpha, beta))
}

/// `[alpha,beta]_pi(X) - (L_X pi)(alpha,beta) - pi(alpha).beta(X) + pi(beta).alpha(X)`,
/// which vanishes for all arguments.
pub fn bracket_lie_residual_general(
    pi: &Bivector,
    x: &VectorField,
    alpha: &OneForm,
    beta: &OneForm,
) -> Result<ScalarField> {
    let base = bracket_lie_residual(pi, x, alpha, beta)?;
    let c1 = pi.sharp(alpha).apply(&beta.pair(x));
    let c2 = pi.sharp(beta).apply(&alpha.pair(x));
    Ok(&(&base - &c1) + &c2)
}

/// `(L_{h_k} pi)(perp_a, perp_b)` for all frame indices, nonzero entries only.
pub fn h_invariance_residuals(pi: &Bivector, split: &FoliationSplit) -> Vec<((usize, usize, usize), ScalarField)> {
    let r = split.rank;
    let mut out = Vec::new();
    for (k, h) in split.h_frame.iter().enumerate() {
        for a in 0..r {
            for b in a + 1..r {
                let v = lie_derivative_pi_on(pi, h, &split.perp_frame[a], &split.perp_frame[b]);
                if !v.is_zero() {
                    out.push(((k, a, b), v));
                }
            }
        }
    }
    out
}

/// Structure functions `[f_i, f_j] = sum_c c[i][j][c] f_c` of an involutive frame.
pub fn structure_functions(frame: &[VectorField]) -> Result<Vec<Vec<Vec<ScalarField>>>> {
    let r = frame.len();
    let mut out = vec![vec![Vec::new(); r]; r];
    for i in 0..r {
        for j in 0..r {
            if j < i {
                out[i][j] = out[j][i].iter().map(|c: &ScalarField| -c).collect();
                continue;
            }
            let b = lie_bracket(&frame[i], &frame[j]);
            out[i][j] = coordinates_in(frame, &b)?.ok_or(Error::NotInvolutive(i, j))?;
        }
    }
    Ok(out)
}

/// Leafwise differential on a frame of the distribution, evaluated on frame tuples.
/// The differential of a top-degree form is the empty form of degree `r + 1`.
pub fn leafwise_d_on(
    frame: &[VectorField],
    structure: &[Vec<Vec<ScalarField>>],
    form: &LeafwiseForm,
) -> Result<LeafwiseForm> {
    let r = frame.len();
    let p = form.degree();
    if p > r {
        return Err(Error::DegreeOverflow(p + 1));
    }
    let nvars = form.nvars();
    let mut out = LeafwiseForm::zero(r, nvars, p + 1);
    for idx in subsets(r, p + 1) {
        let mut acc = ScalarField::zero(nvars);
        for j in 0..=p {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|(t, _)| *t != j).map(|(_, &v)| v).collect();
            let t = frame[idx[j]].apply(&form.get(&rest));
            if j % 2 == 0 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        for a in 0..=p {
            for b in a + 1..=p {
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|(t, _)| *t != a && *t != b).map(|(_, &v)| v).collect();
                let mut t = ScalarField::zero(nvars);
                for (c, coef) in structure[idx[a]][idx[b]].iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut full = vec![c];
                    full.extend_from_slice(&rest);
                    let v = form.get(&full);
                    if !v.is_zero() {
                        t += &(coef * &v);
                    }
                }
                if (a + b) % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
        }
        out.set_sorted(&idx, acc);
    }
    Ok(out)
}

pub fn leafwise_d(split: &FoliationSplit, form: &LeafwiseForm) -> Result<LeafwiseForm> {
    let s = structure_functions(&split.ts_frame)?;
    leafwise_d_on(&split.ts_frame, &s, form)
}

/// Outcome of the elementary connection properties on the split frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionProperties {
    /// `pi(D_alpha kappa) = 0` for kernel forms `kappa`.
    pub kernel_preserved: Option<String>,
    /// `D_kappa = 0` for kernel forms `kappa`.
    pub kernel_directions_flat: Option<String>,
    /// `D` and the Koszul bracket preserve perp sections.
    pub perp_closed: Option<String>,
}

impl ConnectionProperties {
    pub fn all_pass(&self) -> bool {
        self.kernel_preserved.is_none() && self.kernel_directions_flat.is_none() && self.perp_closed.is_none()
    }
}

/// Each entry is `None` on success or a description of the first failure.
pub fn connection_properties(
    pi: &Bivector,
    g: &CoMetric,
    d: &ChristoffelTable,
    split: &FoliationSplit,
) -> Result<ConnectionProperties> {
    let n = pi.dim();
    let chart = pi.chart();
    let e = |i| OneForm::coordinate(n, i);
    let mut kernel_preserved = None;
    'outer: for (k, kappa) in split.kernel_frame.iter().enumerate() {
        for i in 0..n {
            let v = pi.sharp(&d.apply(pi, &e(i), kappa));
            if !v.is_zero() {
                kernel_preserved = Some(format!("pi(D_d{} kernel[{k}]) = {}", chart.name(i), v.display(chart)));
                break 'outer;
            }
        }
    }
    let mut kernel_directions_flat = None;
    'outer: for (k, kappa) in split.kernel_frame.iter().enumerate() {
        for j in 0..n {
            let v = d.apply(pi, kappa, &e(j));
            if !v.is_zero() {
                kernel_directions_flat = Some(format!("D_kernel[{k}] d{} = {}", chart.name(j), v.display(chart)));
                break 'outer;
            }
        }
    }
    let mut perp_closed = None;
    let r = split.rank;
    'outer: for a in 0..r {
        for b in 0..r {
            let da = d.apply(pi, &split.perp_frame[a], &split.perp_frame[b]);
            let br = pi.koszul_bracket(&split.perp_frame[a], &split.perp_frame[b])?;
            for (k, kappa) in split.kernel_frame.iter().enumerate() {
                let v1 = g.inner(&da, kappa);
                if !v1.is_zero() {
                    perp_closed = Some(format!("<D_perp[{a}] perp[{b}], kernel[{k}]> = {}", v1.display(chart)));
                    break 'outer;
                }
                let v2 = g.inner(&br, kappa);
                if !v2.is_zero() {
                    perp_closed = Some(format!("<[perp[{a}], perp[{b}]], kernel[{k}]> = {}", v2.display(chart)));
                    break 'outer;
                }
            }
        }
    }
    Ok(ConnectionProperties { kernel_preserved, kernel_directions_flat, perp_closed })
}

/// `#(perp_frame[a])` lies in the span of `ts_frame`.
pub fn sharp_perp_is_tangent(g: &CoMetric, split: &FoliationSplit) -> Result<bool> {
    for a in &split.perp_frame {
        if coordinates_in(&split.ts_frame, &g.sharp(a))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::levi_civita;
    use crate::symbolic::{parse_scalar, Chart};

    fn chart3() -> Chart {
        Chart::new(["x", "y", "z"]).unwrap()
    }

    fn f(text: &str) -> ScalarField {
        parse_scalar(text, &chart3()).unwrap()
    }

    fn pi_with(entry: &str) -> Bivector {
        Bivector::from_upper(chart3(), [((0, 1), f(entry))]).unwrap()
    }

    fn diag(entries: &[&str]) -> CoMetric {
        CoMetric::from_upper(chart3(), entries.iter().enumerate().map(|(i, e)| ((i, i), f(e)))).unwrap()
    }

    fn samples() -> Vec<RationalPoint> {
        vec![RationalPoint::from_ints(&[0, 0, 0]), RationalPoint::from_ints(&[1, 1, 2])]
    }

    fn e(i: usize) -> OneForm {
        OneForm::coordinate(3, i)
    }

    fn v(i: usize) -> VectorField {
        VectorField::coordinate(3, i)
    }

    #[test]
    fn flat_split() {
        let s = split_cotangent(&pi_with("1"), &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        assert_eq!(s.kernel_frame, vec![e(2)]);
        assert_eq!(s.perp_frame, vec![e(0), e(1)]);
        assert_eq!(s.ts_frame, vec![v(1), v(0).neg()]);
        assert_eq!(s.h_frame, vec![v(2)]);
        assert_eq!(s.ts_dual, vec![v(0), v(1)]);
    }

    #[test]
    fn regularity_failures() {
        let so3 = Bivector::from_upper(chart3(), [((0, 1), f("z")), ((1, 2), f("x")), ((0, 2), f("-y"))]).unwrap();
        let r = split_cotangent(&so3, &CoMetric::identity(chart3()), 2, &samples());
        assert!(matches!(r, Err(Error::RankNotConstant { declared: 2, found: 0, .. })));
        let r = split_cotangent(&pi_with("1"), &CoMetric::identity(chart3()), 1, &samples());
        assert_eq!(r, Err(Error::RankOdd(1)));
    }

    #[test]
    fn symplectic_plane() {
        let c2 = Chart::new(["x", "y"]).unwrap();
        let pi = Bivector::from_upper(c2.clone(), [((0, 1), ScalarField::one(2))]).unwrap();
        let s = split_cotangent(&pi, &CoMetric::identity(c2), 2, &[RationalPoint::from_ints(&[0, 0])]).unwrap();
        assert!(s.kernel_frame.is_empty());
        assert_eq!(s.perp_frame.len(), 2);
    }

    #[test]
    fn leafwise_form_and_inverse() {
        let pi = pi_with("1");
        let s = split_cotangent(&pi, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        assert_eq!(pi_inverse(&s, &v(0)).unwrap(), e(1).neg());
        assert_eq!(pi_inverse(&s, &v(1)).unwrap(), e(0));
        let pi = pi_with("1+z^2");
        let s = split_cotangent(&pi, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        let om = leafwise_symplectic(&pi, &s, &samples()).unwrap();
        // omega(d/dx, d/dy) through pi^{-1}
        let a = pi_inverse(&s, &v(0)).unwrap();
        let b = pi_inverse(&s, &v(1)).unwrap();
        assert_eq!(pi.pair(&a, &b), f("1/(1+z^2)"));
        assert_eq!(om.get(&[0, 0]), ScalarField::zero(3));
    }

    #[test]
    fn induced_metric_examples() {
        let pi = pi_with("1");
        let s = split_cotangent(&pi, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        let g = induced_tangent_metric(&CoMetric::identity(chart3()), &s).unwrap();
        assert_eq!(g.matrix(), &FieldMatrix::identity(3, 3));
        let warped = diag(&["1", "1", "1/(1+z^2)"]);
        let s = split_cotangent(&pi, &warped, 2, &samples()).unwrap();
        let g = induced_tangent_metric(&warped, &s).unwrap();
        assert_eq!(g.entry(2, 2), &f("1+z^2"));
        assert!(g.inner(&s.ts_frame[0], &s.h_frame[0]).is_zero());
    }

    #[test]
    fn induced_metric_is_not_the_inverse_cometric() {
        let pi = pi_with("1");
        let cometric = diag(&["2", "1", "1"]);
        let s = split_cotangent(&pi, &cometric, 2, &samples()).unwrap();
        let g = induced_tangent_metric(&cometric, &s).unwrap();
        assert_eq!(g.entry(0, 0), &f("1"));
        assert_eq!(g.entry(1, 1), &f("2"));
        assert_ne!(g.matrix(), &cometric.matrix().inverse().unwrap());
    }

    #[test]
    fn leaf_connection_examples() {
        let pi = pi_with("1");
        let g = diag(&["1", "1", "1/(1+z^2)"]);
        let s = split_cotangent(&pi, &g, 2, &samples()).unwrap();
        let d = levi_civita(&pi, &g).unwrap();
        let nabla = leaf_connection(&d, &pi, &s).unwrap();
        assert!(nabla.is_zero());
        let om = leafwise_symplectic(&pi, &s, &samples()).unwrap();
        assert!(parallel_omega_residuals(&s, &nabla, &om).iter().all(|(_, r)| r.is_zero()));
    }

    #[test]
    fn basic_forms() {
        let pi = pi_with("1");
        assert!(is_basic_one_form(&pi, &e(2).scale_by(&f("z"))).unwrap());
        assert!(!is_basic_one_form(&pi, &e(2).scale_by(&f("x"))).unwrap());
        assert!(!is_basic_one_form(&pi, &e(0)).unwrap());
        let da = exterior_d(&e(2).scale_by(&f("x")).to_multi()).unwrap();
        let i = interior_v(&pi.sharp(&e(1)), &da).unwrap();
        assert_eq!(OneForm::from(&i), e(2).neg());
    }

    #[test]
    fn foliate_fields() {
        let pi = pi_with("1");
        let s = split_cotangent(&pi, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        assert!(is_foliate(&v(2), &s));
        assert!(!is_foliate(&v(2).scale_by(&f("x")), &s));
        assert!(is_foliate(&v(0), &s));
    }

    #[test]
    fn characterizations_on_flat_example() {
        let pi = pi_with("1");
        let g = CoMetric::identity(chart3());
        let s = split_cotangent(&pi, &g, 2, &samples()).unwrap();
        let d = levi_civita(&pi, &g).unwrap();
        let all = |b: bool| BasicCharacterization { basic: b, parallel: b, sharp_foliate: b, sharp_preserves_pi: b };
        assert_eq!(characterize_kernel_form(&pi, &g, &d, &s, &e(2)).unwrap(), all(true));
        assert_eq!(characterize_kernel_form(&pi, &g, &d, &s, &e(2).scale_by(&f("z"))).unwrap(), all(true));
        assert_eq!(characterize_kernel_form(&pi, &g, &d, &s, &e(2).scale_by(&f("x"))).unwrap(), all(false));
        assert_eq!(g.inner(&e(2).scale_by(&f("z")), &e(2)), f("z"));
    }

    #[test]
    fn invariance() {
        let pi = pi_with("1+z^2");
        assert_eq!(pi.koszul_bracket(&e(0), &e(1)).unwrap().pair(&v(2)), f("2*z"));
        assert_eq!(lie_derivative_pi_on(&pi, &v(2), &e(0), &e(1)), f("2*z"));
        assert!(bracket_lie_residual(&pi, &v(2), &e(0), &e(1)).unwrap().is_zero());
        let s = split_cotangent(&pi, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        let res = h_invariance_residuals(&pi, &s);
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].1, f("2*z"));
        let flat = pi_with("1");
        let s = split_cotangent(&flat, &diag(&["1", "1", "1/(1+z^2)"]), 2, &samples()).unwrap();
        assert!(h_invariance_residuals(&flat, &s).is_empty());
    }

    #[test]
    fn literal_bracket_identity_needs_correction_for_nonconstant_fields() {
        let flat = pi_with("1");
        let x = v(1).scale_by(&f("y"));
        assert!(!bracket_lie_residual(&flat, &x, &e(0), &e(1)).unwrap().is_zero());
        assert!(bracket_lie_residual_general(&flat, &x, &e(0), &e(1)).unwrap().is_zero());
    }

    #[test]
    fn bundle_like() {
        let pi = pi_with("1");
        for g in [CoMetric::identity(chart3()), diag(&["1", "1", "1/(1+z^2)"])] {
            let s = split_cotangent(&pi, &g, 2, &samples()).unwrap();
            let rep = bundle_like_check(&pi, &g, &s, 2).unwrap();
            assert_eq!(rep.family_size, 3);
            assert!(rep.failures.is_empty());
        }
    }

    #[test]
    fn leafwise_differential() {
        let pi = pi_with("1");
        let s = split_cotangent(&pi, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        let fx = LeafwiseForm::scalar(2, f("x"));
        let d1 = leafwise_d(&s, &fx).unwrap();
        assert_eq!(d1.components(), &[f("0"), f("-1")]);
        let g = LeafwiseForm::scalar(2, f("x^2*y+z*x"));
        assert!(leafwise_d(&s, &leafwise_d(&s, &g).unwrap()).unwrap().is_zero());
        let tw = pi_with("1+z^2");
        let s = split_cotangent(&tw, &CoMetric::identity(chart3()), 2, &samples()).unwrap();
        let om = leafwise_symplectic(&tw, &s, &samples()).unwrap();
        let top = leafwise_d(&s, &om).unwrap();
        assert_eq!(top.degree(), 3);
        assert!(top.is_zero());
    }

    #[test]
    fn connection_property_report() {
        let g = CoMetric::identity(chart3());
        let flat = pi_with("1");
        let s = split_cotangent(&flat, &g, 2, &samples()).unwrap();
        let d = levi_civita(&flat, &g).unwrap();
        assert!(connection_properties(&flat, &g, &d, &s).unwrap().all_pass());
        let tw = pi_with("1+z^2");
        let s = split_cotangent(&tw, &g, 2, &samples()).unwrap();
        let d = levi_civita(&tw, &g).unwrap();
        let rep = connection_properties(&tw, &g, &d, &s).unwrap();
        assert!(rep.kernel_directions_flat.is_some());
        assert_eq!(d.apply(&tw, &e(2), &e(0)), e(1).scale_by(&f("-z")));
    }
}
