//! Cotangent metrics and the contravariant Levi-Civita connection.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poisson::Bivector;
use crate::symbolic::{Chart, FieldMatrix, Rational, RationalMatrix, RationalPoint, ScalarField};
use crate::tensor::{OneForm, VectorField};

/// Symmetric matrix of `<dx^i, dx^j>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoMetric {
    chart: Chart,
    matrix: FieldMatrix,
}

impl CoMetric {
    pub fn new(chart: Chart, matrix: FieldMatrix) -> Result<Self> {
        let n = chart.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.rows() });
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix.get(i, j) != matrix.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(CoMetric { chart, matrix })
    }

    /// Builds the metric from entries on and above the diagonal.
    pub fn from_upper(chart: Chart, entries: impl IntoIterator<Item = ((usize, usize), ScalarField)>) -> Result<Self> {
        let n = chart.dim();
        let mut m = FieldMatrix::zeros(n, n, n);
        for ((i, j), v) in entries {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), dim: n });
            }
            if i > j {
                return Err(Error::Schema(format!("metric entry [{i}][{j}] must lie on or above the diagonal")));
            }
            m.set(j, i, v.clone());
            m.set(i, j, v);
        }
        Ok(CoMetric { chart, matrix: m })
    }

    pub fn identity(chart: Chart) -> Self {
        let n = chart.dim();
        CoMetric { chart, matrix: FieldMatrix::identity(n, n) }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    /// `<alpha, beta>`.
    pub fn inner(&self, alpha: &OneForm, beta: &OneForm) -> ScalarField {
        beta.pair(&self.sharp(alpha))
    }

    /// The vector `#(alpha)` with `beta(#(alpha)) = <alpha, beta>`.
    pub fn sharp(&self, alpha: &OneForm) -> VectorField {
        VectorField::new(self.matrix.mul_vec(alpha.components()))
    }

    /// Positive definiteness at each sample by leading principal minors.
    pub fn validate(&self, samples: &[RationalPoint]) -> Result<()> {
        for p in samples {
            if !positive_definite_at(&self.matrix, p)? {
                return Err(Error::NotPositiveDefiniteAt(p.to_string()));
            }
        }
        Ok(())
    }
}

/// Exact Sylvester criterion at a point.
pub(crate) fn positive_definite_at(m: &FieldMatrix, p: &RationalPoint) -> Result<bool> {
    let values = m.eval(p)?;
    let n = values.len();
    for k in 1..=n {
        let minor: Vec<Vec<Rational>> = values[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !rational_det(minor).is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Coefficients with `D_{dx^i} dx^j = sum_k gamma[i][j][k] dx^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChristoffelTable {
    n: usize,
    data: Vec<ScalarField>,
}

impl ChristoffelTable {
    pub fn zero(n: usize) -> Self {
        ChristoffelTable { n, data: vec![ScalarField::zero(n); n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &ScalarField {
        &self.data[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: ScalarField) {
        let n = self.n;
        self.data[(i * n + j) * n + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ScalarField::is_zero)
    }

    /// `D_{dx^i} dx^j`.
    pub fn basis_derivative(&self, i: usize, j: usize) -> OneForm {
        OneForm::new((0..self.n).map(|k| self.get(i, j, k).clone()).collect())
    }

    /// `D_alpha beta` by the contravariant Leibniz rule.
    pub fn apply(&self, pi: &Bivector, alpha: &OneForm, beta: &OneForm) -> OneForm {
        let n = self.n;
        let mut out = vec![ScalarField::zero(n); n];
        for (i, ai) in alpha.components().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let dir = pi.sharp(&OneForm::coordinate(n, i));
            for (j, bj) in beta.components().iter().enumerate() {
                if !bj.is_zero() {
                    let coef = ai * bj;
                    for (k, slot) in out.iter_mut().enumerate() {
                        let g = self.get(i, j, k);
                        if !g.is_zero() {
                            *slot += &(&coef * g);
                        }
                    }
                }
                let d = dir.apply(bj);
                if !d.is_zero() {
                    out[j] += &(ai * &d);
                }
            }
        }
        OneForm::new(out)
    }

    /// Nonzero entries as `(i, j, k, value)` in index order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, &ScalarField)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// Solves the six-term Koszul formula basiswise for the Levi-Civita
/// contravariant connection.
pub fn levi_civita(pi: &Bivector, g: &CoMetric) -> Result<ChristoffelTable> {
    let n = pi.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g.dim() });
    }
    // [dx^a, dx^b]_pi = d(pi_ab); its pairing with dx^k through the metric
    let bracket_pair = |a: usize, b: usize, k: usize| -> ScalarField {
        let e = pi.entry(a, b);
        let mut acc = ScalarField::zero(n);
        for m in 0..n {
            let d = e.deriv(m);
            if !d.is_zero() {
                acc += &(&d * g.entry(m, k));
            }
        }
        acc
    };
    let dirs: Vec<VectorField> = (0..n).map(|i| pi.sharp(&OneForm::coordinate(n, i))).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let columns: Vec<Vec<ScalarField>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            (0..n)
                .map(|k| {
                    let terms = [
                        dirs[i].apply(g.entry(j, k)),
                        dirs[j].apply(g.entry(i, k)),
                        -dirs[k].apply(g.entry(i, j)),
                        bracket_pair(i, j, k),
                        bracket_pair(k, i, j),
                        bracket_pair(k, j, i),
                    ];
                    let half = Rational::new(1.into(), 2.into());
                    terms.iter().fold(ScalarField::zero(n), |acc, t| &acc + t).scale(&half)
                })
                .collect()
        })
        .collect();
    if g.matrix().determinant()?.is_zero() {
        return Err(Error::SingularMetric);
    }
    let sol = g.matrix().solve(&FieldMatrix::from_columns(n, n, &columns))?;
    let mut table = ChristoffelTable::zero(n);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..n {
            table.set(i, j, k, sol.get(k, c).clone());
        }
    }
    Ok(table)
}

/// `D_alpha beta - D_beta alpha - [alpha, beta]_pi`.
pub fn torsion_defect(d: &ChristoffelTable, pi: &Bivector, alpha: &OneForm, beta: &OneForm) -> Result<OneForm> {
    let lhs = d.apply(pi, alpha, beta).sub(&d.apply(pi, beta, alpha));
    Ok(lhs.sub(&pi.koszul_bracket(alpha, beta)?))
}

/// `pi(alpha).<beta,gamma> - <D_alpha beta, gamma> - <beta, D_alpha gamma>`.
pub fn metric_defect(
    d: &ChristoffelTable,
    g: &CoMetric,
    pi: &Bivector,
    alpha: &OneForm,
    beta: &OneForm,
    gamma: &OneForm,
) -> ScalarField {
    let lhs = pi.sharp(alpha).apply(&g.inner(beta, gamma));
    let a = g.inner(&d.apply(pi, alpha, beta), gamma);
    let b = g.inner(beta, &d.apply(pi, alpha, gamma));
    &(&lhs - &a) - &b
}

/// `D pi(alpha, beta, gamma) = pi(alpha).pi(beta,gamma) - pi(D_alpha beta, gamma) - pi(beta, D_alpha gamma)`.
pub fn d_pi_tensor(
    d: &ChristoffelTable,
    pi: &Bivector,
    alpha: &OneForm,
    beta: &OneForm,
    gamma: &OneForm,
) -> ScalarField {
    let lhs = pi.sharp(alpha).apply(&pi.pair(beta, gamma));
    let a = pi.pair(&d.apply(pi, alpha, beta), gamma);
    let b = pi.pair(beta, &d.apply(pi, alpha, gamma));
    &(&lhs - &a) - &b
}

/// Coordinate triple where `D pi` does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpiWitness {
    pub indices: (usize, usize, usize),
    pub value: ScalarField,
}

/// First coordinate triple `(i, j, k)` with `j < k` and `D pi` nonzero.
pub fn riemann_poisson_witness(d: &ChristoffelTable, pi: &Bivector) -> Option<DpiWitness> {
    let n = pi.dim();
    let e = |i| OneForm::coordinate(n, i);
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let value = d_pi_tensor(d, pi, &e(i), &e(j), &e(k));
                if !value.is_zero() {
                    return Some(DpiWitness { indices: (i, j, k), value });
                }
            }
        }
    }
    None
}

pub fn is_riemann_poisson(pi: &Bivector, g: &CoMetric) -> Result<bool> {
    let d = levi_civita(pi, g)?;
    Ok(pi.is_poisson() && riemann_poisson_witness(&d, pi).is_none())
}

/// `D pi(a,b,c) + D pi(b,c,a) + D pi(c,a,b)`.
pub fn cyclic_dpi(d: &ChristoffelTable, pi: &Bivector, a: &OneForm, b: &OneForm, c: &OneForm) -> ScalarField {
    let s1 = d_pi_tensor(d, pi, a, b, c);
    let s2 = d_pi_tensor(d, pi, b, c, a);
    let s3 = d_pi_tensor(d, pi, c, a, b);
    &(&s1 + &s2) + &s3
}

/// The constant `c` with `cyclic_dpi(dx^i, dx^j, dx^k) = c * jacobiator(x^i, x^j, x^k)`
/// on the first non-Jacobi coordinate triple. It is read off at the first
/// sample where the jacobiator is nonzero and then confirmed symbolically.
/// Returns `None` for Poisson bivectors or when no sample works.
pub fn schouten_constant(d: &ChristoffelTable, pi: &Bivector, samples: &[RationalPoint]) -> Option<Rational> {
    let w = pi.jacobi_witness()?;
    let n = pi.dim();
    let (i, j, k) = w.indices;
    let e = |t| OneForm::coordinate(n, t);
    let cyc = cyclic_dpi(d, pi, &e(i), &e(j), &e(k));
    let c = samples.iter().find_map(|p| {
        let jac = w.value.eval(p).ok()?;
        if jac.is_zero() {
            return None;
        }
        Some(cyc.eval(p).ok()? / jac)
    })?;
    (cyc == w.value.scale(&c)).then_some(c)
}

/// Rank of the bivector at every sample.
pub fn sample_ranks(pi: &Bivector, samples: &[RationalPoint]) -> Result<Vec<usize>> {
    samples.iter().map(|p| pi.rank_at(p)).collect()
}

/// Rank at a point of the span of `frame` (each entry one vector of components).
pub(crate) fn frame_rank_at(frame: &[Vec<ScalarField>], point: &RationalPoint) -> Result<usize> {
    let rows: Vec<Vec<Rational>> =
        frame.iter().map(|v| v.iter().map(|c| c.eval(point)).collect::<Result<_>>()).collect::<Result<_>>()?;
    Ok(RationalMatrix::from_rows(rows).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_scalar;

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

    fn e(i: usize) -> OneForm {
        OneForm::coordinate(3, i)
    }

    #[test]
    fn validation() {
        let samples = [RationalPoint::from_ints(&[0, 0, 0]), RationalPoint::from_ints(&[1, 1, 2])];
        assert!(CoMetric::identity(chart3()).validate(&samples).is_ok());
        assert!(diag(&["1", "1", "1/(1+z^2)"]).validate(&samples).is_ok());
        let c2 = Chart::new(["x", "y"]).unwrap();
        let bad =
            CoMetric::from_upper(c2, [((0, 0), ScalarField::one(2)), ((1, 1), ScalarField::integer(2, -1))]).unwrap();
        assert!(matches!(bad.validate(&[RationalPoint::from_ints(&[0, 0])]), Err(Error::NotPositiveDefiniteAt(_))));
        let mut m = FieldMatrix::identity(3, 3);
        m.set(0, 1, f("x"));
        assert_eq!(CoMetric::new(chart3(), m), Err(Error::NotSymmetric(0, 1)));
    }

    #[test]
    fn flat_connections_vanish() {
        let id = CoMetric::identity(chart3());
        assert!(levi_civita(&pi_with("1"), &id).unwrap().is_zero());
        assert!(levi_civita(&pi_with("1"), &diag(&["1", "1", "1/(1+z^2)"])).unwrap().is_zero());
    }

    #[test]
    fn twisted_christoffel_symbols() {
        let pi = pi_with("1+z^2");
        let d = levi_civita(&pi, &CoMetric::identity(chart3())).unwrap();
        assert_eq!(d.basis_derivative(0, 1), e(2).scale_by(&f("z")));
        assert_eq!(d.basis_derivative(0, 2), e(1).scale_by(&f("-z")));
        assert!(d.basis_derivative(0, 0).is_zero());
        assert_eq!(d.basis_derivative(2, 0), e(1).scale_by(&f("-z")));
        let t = d.basis_derivative(0, 1).sub(&d.basis_derivative(1, 0));
        assert_eq!(t, e(2).scale_by(&f("2*z")));
    }

    #[test]
    fn defining_identities_hold() {
        let pi = pi_with("1+z^2");
        let g = diag(&["2", "1+x^2", "3"]);
        let d = levi_civita(&pi, &g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!(torsion_defect(&d, &pi, &e(a), &e(b)).unwrap().is_zero());
                for c in 0..3 {
                    assert!(metric_defect(&d, &g, &pi, &e(a), &e(b), &e(c)).is_zero());
                }
            }
        }
        let alpha = e(0).scale_by(&f("y*z")).add(&e(2));
        let beta = e(1).scale_by(&f("x^2"));
        assert!(torsion_defect(&d, &pi, &alpha, &beta).unwrap().is_zero());
        assert!(metric_defect(&d, &g, &pi, &alpha, &beta, &e(2).scale_by(&f("x"))).is_zero());
    }

    #[test]
    fn mutation_breaks_identities() {
        let pi = pi_with("1+z^2");
        let g = CoMetric::identity(chart3());
        let d = levi_civita(&pi, &g).unwrap();
        let mut bad = d.clone();
        bad.set(0, 1, 2, d.get(0, 1, 2) + &f("1"));
        let torsion = torsion_defect(&bad, &pi, &e(0), &e(1)).unwrap();
        let metric = metric_defect(&bad, &g, &pi, &e(0), &e(1), &e(2));
        assert!(!torsion.is_zero() || !metric.is_zero());
    }

    #[test]
    fn riemann_poisson_classification() {
        assert!(is_riemann_poisson(&pi_with("1"), &CoMetric::identity(chart3())).unwrap());
        assert!(is_riemann_poisson(&pi_with("1"), &diag(&["1", "1", "1/(1+z^2)"])).unwrap());
        let pi = pi_with("1+z^2");
        let d = levi_civita(&pi, &CoMetric::identity(chart3())).unwrap();
        let w = riemann_poisson_witness(&d, &pi).unwrap();
        assert_eq!(w.indices, (0, 0, 2));
        assert_eq!(w.value, f("z+z^3"));
        assert!(!is_riemann_poisson(&pi, &CoMetric::identity(chart3())).unwrap());
    }

    #[test]
    fn cyclic_sum_is_metric_independent() {
        let pi = pi_with("1+z^2");
        let d1 = levi_civita(&pi, &CoMetric::identity(chart3())).unwrap();
        let d2 = levi_civita(&pi, &diag(&["2", "2", "3"])).unwrap();
        let a = cyclic_dpi(&d1, &pi, &e(0), &e(1), &e(2));
        assert_eq!(a, cyclic_dpi(&d2, &pi, &e(0), &e(1), &e(2)));
        assert!(a.is_zero());
    }

    #[test]
    fn cyclic_sum_matches_jacobiator_up_to_constant() {
        let pi = Bivector::from_upper(chart3(), [((0, 1), f("y")), ((0, 2), f("-x"))]).unwrap();
        let d = levi_civita(&pi, &CoMetric::identity(chart3())).unwrap();
        let samples = [RationalPoint::from_ints(&[1, 2, 3]), RationalPoint::from_ints(&[2, -1, 1])];
        let c = schouten_constant(&d, &pi, &samples).unwrap();
        assert_eq!(c, Rational::from_integer((-2).into()));
    }
}
