//! Vector fields and 1-forms.

use crate::symbolic::{Chart, ScalarField};

use super::multi::{PForm, PVector};

/// Coefficients of `d/dx^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<ScalarField>,
}

/// Coefficients of `dx^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    comps: Vec<ScalarField>,
}

macro_rules! component_ops {
    ($t:ident) => {
        impl $t {
            pub fn new(comps: Vec<ScalarField>) -> Self {
                $t { comps }
            }

            pub fn zero(n: usize) -> Self {
                $t { comps: vec![ScalarField::zero(n); n] }
            }

            /// The `i`-th coordinate basis element.
            pub fn coordinate(n: usize, i: usize) -> Self {
                let mut v = Self::zero(n);
                v.comps[i] = ScalarField::one(n);
                v
            }

            pub fn dim(&self) -> usize {
                self.comps.len()
            }

            pub fn components(&self) -> &[ScalarField] {
                &self.comps
            }

            pub fn component(&self, i: usize) -> &ScalarField {
                &self.comps[i]
            }

            pub fn is_zero(&self) -> bool {
                self.comps.iter().all(ScalarField::is_zero)
            }

            pub fn add(&self, other: &Self) -> Self {
                $t { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
            }

            pub fn sub(&self, other: &Self) -> Self {
                $t { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
            }

            pub fn neg(&self) -> Self {
                $t { comps: self.comps.iter().map(|a| -a).collect() }
            }

            pub fn scale_by(&self, f: &ScalarField) -> Self {
                $t { comps: self.comps.iter().map(|a| a * f).collect() }
            }

            /// Componentwise display, e.g. `(0, 1+z^2, -x)`.
            pub fn display(&self, chart: &Chart) -> String {
                let parts: Vec<String> = self.comps.iter().map(|c| c.display(chart).to_string()).collect();
                format!("({})", parts.join(", "))
            }
        }
    };
}

component_ops!(VectorField);
component_ops!(OneForm);

impl VectorField {
    /// Directional derivative `X.f`.
    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        let mut acc = ScalarField::zero(f.nvars());
        for (i, xi) in self.comps.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let d = f.deriv(i);
            if !d.is_zero() {
                acc += &(xi * &d);
            }
        }
        acc
    }

    pub fn to_multi(&self) -> PVector {
        let n = self.dim();
        PVector::from_components(n, n, 1, self.comps.clone())
    }

    /// Sum of `coeffs[k] * frame[k]`.
    pub fn combination(n: usize, frame: &[VectorField], coeffs: &[ScalarField]) -> Self {
        let mut out = Self::zero(n);
        for (v, c) in frame.iter().zip(coeffs) {
            if !c.is_zero() {
                out = out.add(&v.scale_by(c));
            }
        }
        out
    }
}

impl OneForm {
    /// Exact form `df`.
    pub fn differential(f: &ScalarField) -> Self {
        OneForm { comps: (0..f.nvars()).map(|i| f.deriv(i)).collect() }
    }

    /// Pairing `alpha(X)`.
    pub fn pair(&self, x: &VectorField) -> ScalarField {
        let n = self.dim();
        let mut acc = ScalarField::zero(n);
        for (a, b) in self.comps.iter().zip(&x.comps) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn to_multi(&self) -> PForm {
        let n = self.dim();
        PForm::from_components(n, n, 1, self.comps.clone())
    }

    pub fn combination(n: usize, frame: &[OneForm], coeffs: &[ScalarField]) -> Self {
        let mut out = Self::zero(n);
        for (v, c) in frame.iter().zip(coeffs) {
            if !c.is_zero() {
                out = out.add(&v.scale_by(c));
            }
        }
        out
    }
}

impl From<&PForm> for OneForm {
    fn from(m: &PForm) -> Self {
        assert_eq!(m.degree(), 1);
        OneForm { comps: m.components().to_vec() }
    }
}

impl From<&PVector> for VectorField {
    fn from(m: &PVector) -> Self {
        assert_eq!(m.degree(), 1);
        VectorField { comps: m.components().to_vec() }
    }
}

/// Commutator `[X, Y]^i = X(Y^i) - Y(X^i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField { comps: x.comps.iter().zip(&y.comps).map(|(xi, yi)| &x.apply(yi) - &y.apply(xi)).collect() }
}
