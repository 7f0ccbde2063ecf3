//! Dense matrices over the rational-function field.
//!
//! Elimination is fraction-free: each row is first scaled to polynomial
//! entries, then a Bareiss sweep produces an echelon form whose entries are
//! minors of the scaled matrix (all divisions exact). Back substitution is
//! done in the field.

use super::field::ScalarField;
use super::gcd::lcm;
use super::poly::{Poly, Rational};
use super::RationalPoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<ScalarField>,
}

impl FieldMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, nvars, data: vec![ScalarField::zero(nvars); rows * cols] }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m.set(i, i, ScalarField::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<ScalarField>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        FieldMatrix { rows: r, cols: c, nvars, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(nvars: usize, rows: usize, cols: &[Vec<ScalarField>]) -> Self {
        let mut m = Self::zeros(nvars, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, e) in col.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarField {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ScalarField) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ScalarField] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ScalarField> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ScalarField::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc += &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ScalarField]) -> Vec<ScalarField> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ScalarField::zero(self.nvars);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ScalarField::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn eval(&self, point: &RationalPoint) -> Result<Vec<Vec<Rational>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>()).collect()
    }

    /// Generic rank over the rational-function field.
    pub fn rank(&self) -> usize {
        Echelon::of(self).pivots.len()
    }

    /// Basis of the right kernel. Each free column contributes one vector with
    /// a 1 in that position.
    pub fn kernel_basis(&self) -> Vec<Vec<ScalarField>> {
        let e = Echelon::of(self);
        let rref = e.reduced();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ScalarField::zero(self.nvars); self.cols];
                v[f] = ScalarField::one(self.nvars);
                for (r, &p) in e.pivots.iter().enumerate() {
                    v[p] = -&rref[r][f];
                }
                v
            })
            .collect()
    }

    /// Solves `self * X = rhs`. Free unknowns are set to zero.
    pub fn solve(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        assert_eq!(self.rows, rhs.rows, "row mismatch");
        let mut aug = Self::zeros(self.nvars, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                aug.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        let e = Echelon::of(&aug);
        if e.pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Inconsistent);
        }
        let rref = e.reduced();
        let mut x = Self::zeros(self.nvars, self.cols, rhs.cols);
        for (r, &p) in e.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, rref[r][self.cols + j].clone());
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, rhs: &[ScalarField]) -> Result<Vec<ScalarField>> {
        let b = FieldMatrix::from_columns(self.nvars, self.rows, &[rhs.to_vec()]);
        Ok(self.solve(&b)?.column(0))
    }

    pub fn inverse(&self) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        if self.rank() < self.rows {
            return Err(Error::SingularMatrix);
        }
        self.solve(&Self::identity(self.nvars, self.rows))
    }

    pub fn determinant(&self) -> Result<ScalarField> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        if self.rows == 0 {
            return Ok(ScalarField::one(self.nvars));
        }
        let e = Echelon::of(self);
        if e.pivots.len() < self.rows {
            return Ok(ScalarField::zero(self.nvars));
        }
        // last Bareiss pivot is det of the row-scaled matrix
        let last = e.rows[self.rows - 1][self.cols - 1].clone();
        let mut det = ScalarField::from_poly(last);
        for s in &e.row_scale {
            det = det.checked_div(&ScalarField::from_poly(s.clone()))?;
        }
        Ok(if e.swaps % 2 == 1 { -det } else { det })
    }
}

/// Fraction-free echelon form of a row-scaled copy of a matrix.
struct Echelon {
    rows: Vec<Vec<Poly>>,
    pivots: Vec<usize>,
    row_scale: Vec<Poly>,
    swaps: usize,
}

impl Echelon {
    fn of(m: &FieldMatrix) -> Self {
        let n = m.nvars;
        let mut row_scale = Vec::with_capacity(m.rows);
        let mut rows: Vec<Vec<Poly>> = (0..m.rows)
            .map(|i| {
                let mut l = Poly::one(n);
                for e in m.row(i) {
                    if !e.is_polynomial() {
                        l = lcm(&l, e.denominator());
                    }
                }
                row_scale.push(l.clone());
                m.row(i)
                    .iter()
                    .map(|e| {
                        if l.is_one() {
                            e.numerator().clone()
                        } else {
                            e.numerator().mul(&l.div_exact(e.denominator()).expect("lcm"))
                        }
                    })
                    .collect()
            })
            .collect();

        let mut pivots = Vec::new();
        let mut prev = Poly::one(n);
        let mut r = 0;
        let mut swaps = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                rows.swap(p, r);
                row_scale.swap(p, r);
                swaps += 1;
            }
            let (top, bottom) = rows.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pv = &pivot_row[c];
            for row in bottom.iter_mut() {
                let lead = std::mem::replace(&mut row[c], Poly::zero(n));
                for j in c + 1..m.cols {
                    let t =
                        if lead.is_zero() { pv.mul(&row[j]) } else { pv.mul(&row[j]).sub(&lead.mul(&pivot_row[j])) };
                    row[j] = if prev.is_one() { t } else { t.div_exact(&prev).expect("Bareiss division is exact") };
                }
            }
            // rows above the pivot are untouched; keep the pivot row as is
            prev = rows[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        Echelon { rows, pivots, row_scale, swaps }
    }

    /// Reduced row echelon form over the field (pivot entries 1), one row per pivot.
    fn reduced(&self) -> Vec<Vec<ScalarField>> {
        let mut out: Vec<Vec<ScalarField>> = self.rows[..self.pivots.len()]
            .iter()
            .map(|row| row.iter().map(|p| ScalarField::from_poly(p.clone())).collect())
            .collect();
        for r in (0..self.pivots.len()).rev() {
            let c = self.pivots[r];
            let inv = out[r][c].inv().expect("pivot nonzero");
            for e in out[r].iter_mut() {
                if !e.is_zero() {
                    *e = &*e * &inv;
                }
            }
            for above in 0..r {
                let factor = out[above][c].clone();
                if factor.is_zero() {
                    continue;
                }
                let pivot_row = out[r].clone();
                for (e, p) in out[above].iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *e = &*e - &(&factor * p);
                    }
                }
            }
        }
        out
    }
}
