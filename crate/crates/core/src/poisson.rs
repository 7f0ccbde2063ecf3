//! Poisson bivectors: sharp map, brackets, Jacobi test and the Lichnerowicz
//! differential.

use crate::error::{Error, Result};
use crate::symbolic::{
    identically_zero_combinations, Chart, FieldMatrix, Monomial, Poly, Rational, RationalMatrix, RationalPoint,
    ScalarField,
};
use crate::tensor::{
    exterior_d, interior_v, lie_bracket, lie_derivative, subsets, OneForm, PForm, PVector, VectorField,
};

/// Antisymmetric bivector with entries `pi(dx^i, dx^j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    chart: Chart,
    matrix: FieldMatrix,
}

/// A coordinate triple on which the Jacobi identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiWitness {
    pub indices: (usize, usize, usize),
    pub value: ScalarField,
}

impl Bivector {
    pub fn new(chart: Chart, matrix: FieldMatrix) -> Result<Self> {
        let n = chart.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.rows() });
        }
        for i in 0..n {
            for j in i..n {
                if &-matrix.get(j, i) != matrix.get(i, j) {
                    return Err(Error::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(Bivector { chart, matrix })
    }

    /// Builds the bivector from entries above the diagonal.
    pub fn from_upper(chart: Chart, entries: impl IntoIterator<Item = ((usize, usize), ScalarField)>) -> Result<Self> {
        let n = chart.dim();
        let mut m = FieldMatrix::zeros(n, n, n);
        for ((i, j), v) in entries {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), dim: n });
            }
            if i >= j {
                return Err(Error::Schema(format!("bivector entry [{i}][{j}] must lie above the diagonal")));
            }
            m.set(j, i, -&v);
            m.set(i, j, v);
        }
        Ok(Bivector { chart, matrix: m })
    }

    pub fn zero(chart: Chart) -> Self {
        let n = chart.dim();
        Bivector { chart, matrix: FieldMatrix::zeros(n, n, n) }
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

    pub fn to_multivector(&self) -> PVector {
        let n = self.dim();
        let comps = subsets(n, 2).iter().map(|ij| self.entry(ij[0], ij[1]).clone()).collect();
        PVector::from_components(n, n, 2, comps)
    }

    pub fn from_multivector(chart: Chart, q: &PVector) -> Self {
        assert_eq!(q.degree(), 2);
        let entries = q.iter().map(|(ij, c)| ((ij[0], ij[1]), c.clone())).collect::<Vec<_>>();
        Bivector::from_upper(chart, entries).expect("sorted pairs")
    }

    /// `pi(alpha)` with `beta(pi(alpha)) = pi(alpha, beta)`.
    pub fn sharp(&self, alpha: &OneForm) -> VectorField {
        VectorField::new(self.matrix.transpose().mul_vec(alpha.components()))
    }

    /// `pi(alpha, beta)`.
    pub fn pair(&self, alpha: &OneForm, beta: &OneForm) -> ScalarField {
        beta.pair(&self.sharp(alpha))
    }

    /// `{f, g} = pi(df, dg)`.
    pub fn fn_bracket(&self, f: &ScalarField, g: &ScalarField) -> ScalarField {
        self.pair(&OneForm::differential(f), &OneForm::differential(g))
    }

    /// `{{f,g},h} + {{g,h},f} + {{h,f},g}`.
    pub fn jacobiator(&self, f: &ScalarField, g: &ScalarField, h: &ScalarField) -> ScalarField {
        let a = self.fn_bracket(&self.fn_bracket(f, g), h);
        let b = self.fn_bracket(&self.fn_bracket(g, h), f);
        let c = self.fn_bracket(&self.fn_bracket(h, f), g);
        &(&a + &b) + &c
    }

    /// First coordinate triple `i < j < k` with a nonzero jacobiator.
    pub fn jacobi_witness(&self) -> Option<JacobiWitness> {
        let n = self.dim();
        let x = |i| ScalarField::var(n, i);
        subsets(n, 3).into_iter().find_map(|t| {
            let value = self.jacobiator(&x(t[0]), &x(t[1]), &x(t[2]));
            (!value.is_zero()).then_some(JacobiWitness { indices: (t[0], t[1], t[2]), value })
        })
    }

    pub fn is_poisson(&self) -> bool {
        self.jacobi_witness().is_none()
    }

    /// Koszul bracket of 1-forms. Both the Lie-derivative and the contraction
    /// expressions are computed and must agree.
    pub fn koszul_bracket(&self, alpha: &OneForm, beta: &OneForm) -> Result<OneForm> {
        let pa = self.sharp(alpha);
        let pb = self.sharp(beta);
        let a = alpha.to_multi();
        let b = beta.to_multi();
        let d_pair = exterior_d(&PForm::scalar(self.dim(), self.pair(alpha, beta)))?;
        let via_lie = lie_derivative(&pa, &b).sub(&lie_derivative(&pb, &a)).sub(&d_pair);
        let via_contraction = interior_v(&pa, &exterior_d(&b)?)?.sub(&interior_v(&pb, &exterior_d(&a)?)?).add(&d_pair);
        if via_lie != via_contraction {
            return Err(Error::InternalInconsistency("the two Koszul bracket expressions disagree".into()));
        }
        Ok(OneForm::from(&via_lie))
    }

    /// `pi([alpha,beta]_pi) - [pi(alpha), pi(beta)]`.
    pub fn homomorphism_defect(&self, alpha: &OneForm, beta: &OneForm) -> Result<VectorField> {
        let lhs = self.sharp(&self.koszul_bracket(alpha, beta)?);
        Ok(lhs.sub(&lie_bracket(&self.sharp(alpha), &self.sharp(beta))))
    }

    /// Lichnerowicz differential evaluated on coordinate forms. On functions
    /// `d_pi f (alpha) = pi(alpha).f`, which is `-pi(df)`.
    pub fn d_pi(&self, q: &PVector) -> PVector {
        let n = self.dim();
        let p = q.degree();
        // [dx^a, dx^b]_pi = d(pi_ab) for closed coordinate forms
        let dpi: Vec<Vec<Vec<ScalarField>>> =
            (0..n).map(|a| (0..n).map(|b| (0..n).map(|m| self.entry(a, b).deriv(m)).collect()).collect()).collect();
        let mut out = PVector::zero(n, n, p + 1);
        for idx in subsets(n, p + 1) {
            let mut acc = ScalarField::zero(n);
            for j in 0..=p {
                let rest: Vec<usize> = idx.iter().enumerate().filter(|(t, _)| *t != j).map(|(_, &v)| v).collect();
                let c = q.get(&rest);
                if c.is_zero() {
                    continue;
                }
                let mut t = ScalarField::zero(n);
                for k in 0..n {
                    let e = self.entry(idx[j], k);
                    if !e.is_zero() {
                        let dc = c.deriv(k);
                        if !dc.is_zero() {
                            t += &(e * &dc);
                        }
                    }
                }
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
                    let mut t = ScalarField::zero(n);
                    for (m, g) in dpi[idx[a]][idx[b]].iter().enumerate() {
                        if g.is_zero() || rest.contains(&m) {
                            continue;
                        }
                        let mut full = Vec::with_capacity(p);
                        full.push(m);
                        full.extend_from_slice(&rest);
                        let c = q.get(&full);
                        if !c.is_zero() {
                            t += &(g * &c);
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
        out
    }

    pub fn is_casimir(&self, f: &ScalarField) -> bool {
        self.sharp(&OneForm::differential(f)).is_zero()
    }

    /// Rank of the matrix of `pi` at a point.
    pub fn rank_at(&self, point: &RationalPoint) -> Result<usize> {
        point.check_dim(self.dim())?;
        Ok(RationalMatrix::from_rows(self.matrix.eval(point)?).rank())
    }

    pub fn is_polynomial(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.entry(i, j).is_polynomial()))
    }

    /// Maximal total degree of the entries (0 for the zero bivector); `None`
    /// when an entry is not a polynomial.
    pub fn polynomial_degree(&self) -> Option<u32> {
        let n = self.dim();
        let mut deg = 0;
        for i in 0..n {
            for j in 0..n {
                let e = self.entry(i, j);
                if !e.is_polynomial() {
                    return None;
                }
                if !e.is_zero() {
                    deg = deg.max(e.numerator().total_degree().unwrap_or(0));
                }
            }
        }
        Some(deg)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Basis of the polynomial Casimir functions of degree at most `max_degree`.
    pub fn casimir_basis(&self, max_degree: u32) -> Vec<ScalarField> {
        let n = self.dim();
        let monomials = Monomial::up_to_degree(n, max_degree);
        let fields: Vec<ScalarField> = monomials
            .iter()
            .map(|m| ScalarField::from_poly(Poly::monomial(m.clone(), Rational::from_integer(1.into()))))
            .collect();
        let images: Vec<VectorField> = fields.iter().map(|f| self.sharp(&OneForm::differential(f))).collect();
        let equations: Vec<Vec<ScalarField>> =
            (0..n).map(|k| images.iter().map(|v| v.component(k).clone()).collect()).collect();
        identically_zero_combinations(fields.len(), &equations)
            .into_iter()
            .map(|coeffs| {
                let mut acc = ScalarField::zero(n);
                for (c, f) in coeffs.iter().zip(&fields) {
                    if !num_traits::Zero::is_zero(c) {
                        acc += &f.scale(c);
                    }
                }
                acc
            })
            .collect()
    }
}
