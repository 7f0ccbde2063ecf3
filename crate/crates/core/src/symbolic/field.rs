//! Canonical multivariate rational functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::chart::{Chart, RationalPoint};
use super::gcd::gcd;
use super::poly::{Poly, Rational};
use crate::error::{Error, Result};

/// An element of `Q(x_0, ..., x_{n-1})` in canonical form: numerator and
/// denominator coprime, denominator monic under graded-lex, zero is `0/1`.
///
/// The chart is carried by the tensors and structures built from these
/// fields; a `ScalarField` only knows its number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarField {
    num: Poly,
    den: Poly,
}

impl ScalarField {
    pub fn zero(nvars: usize) -> Self {
        ScalarField { num: Poly::zero(nvars), den: Poly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        ScalarField { num: Poly::one(nvars), den: Poly::one(nvars) }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        ScalarField { num: Poly::constant(nvars, c), den: Poly::one(nvars) }
    }

    pub fn integer(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        ScalarField { num: Poly::var(nvars, i), den: Poly::one(nvars) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        ScalarField { num: p, den: Poly::one(n) }
    }

    /// `num / den`, reduced to canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroField);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        if let Some(c) = den.constant_value() {
            return ScalarField { num: num.scale(&c.recip()), den: Poly::one(den.nvars()) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::normalize(num, den)
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            ScalarField { num, den }
        } else {
            let inv = lc.recip();
            ScalarField { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        ScalarField { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroField);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        ScalarField { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Partial derivative with respect to coordinate `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.nvars() });
        }
        Ok(self.deriv(i))
    }

    pub(crate) fn deriv(&self, i: usize) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative(i));
        }
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // (n/d)' = (n' d - n d') / d^2, and d^2 shares with the numerator at most d
        let top = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::reduce(top, self.den.mul(&self.den))
    }

    pub fn eval(&self, point: &RationalPoint) -> Result<Rational> {
        point.check_dim(self.nvars())?;
        let d = self.den.eval(point.coords());
        if d.is_zero() {
            return Err(Error::PoleAtPoint(point.to_string()));
        }
        Ok(self.num.eval(point.coords()) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn display<'a>(&'a self, chart: &'a Chart) -> FieldDisplay<'a> {
        FieldDisplay { field: self, names: chart.names() }
    }

    pub fn display_names<'a>(&'a self, names: &'a [String]) -> FieldDisplay<'a> {
        FieldDisplay { field: self, names }
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return ScalarField::from_poly(self.num.add(&rhs.num));
            }
            return ScalarField::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        if rhs.den.is_one() {
            return ScalarField { num: self.num.add(&rhs.num.mul(&self.den)), den: self.den.clone() };
        }
        if self.den.is_one() {
            return ScalarField { num: rhs.num.add(&self.num.mul(&rhs.den)), den: rhs.den.clone() };
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&rhs.num.mul(&a));
        ScalarField::reduce(num, a.mul(&rhs.den))
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self + &(-rhs)
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() || rhs.is_zero() {
            return ScalarField::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarField::from_poly(self.num.mul(&rhs.num));
        }
        // cross-cancel: inputs are already reduced
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        ScalarField::normalize(n1.mul(&n2), d1.mul(&d2))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: &ScalarField) -> ScalarField {
                (&self).$m(rhs)
            }
        }
        impl $tr<ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        -&self
    }
}

impl std::ops::AddAssign<&ScalarField> for ScalarField {
    fn add_assign(&mut self, rhs: &ScalarField) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&ScalarField> for ScalarField {
    fn sub_assign(&mut self, rhs: &ScalarField) {
        *self = &*self - rhs;
    }
}

/// Sum of fields over `nvars` variables (zero for an empty iterator).
pub fn sum_fields(nvars: usize, iter: impl IntoIterator<Item = ScalarField>) -> ScalarField {
    let mut acc = ScalarField::zero(nvars);
    for f in iter {
        acc += &f;
    }
    acc
}

pub struct FieldDisplay<'a> {
    field: &'a ScalarField,
    names: &'a [String],
}

impl fmt::Display for FieldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = &self.field.num;
        let den = &self.field.den;
        if den.is_one() {
            return write!(f, "{}", num.display(self.names));
        }
        if num.num_terms() > 1 {
            write!(f, "({})", num.display(self.names))?;
        } else {
            write!(f, "{}", num.display(self.names))?;
        }
        let bare_den = den.num_terms() == 1 && {
            let (m, _) = den.leading().unwrap();
            m.exponents().iter().filter(|&&e| e > 0).count() == 1
        };
        if bare_den {
            write!(f, "/{}", den.display(self.names))
        } else {
            write!(f, "/({})", den.display(self.names))
        }
    }
}
