//! Alternating multi-index storage shared by forms and multivectors.

use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::symbolic::{Chart, ScalarField};

/// Strictly increasing index tuples of length `p` drawn from `0..n`, in
/// lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that can move
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - p + i {
                cur[i] += 1;
                for j in i + 1..p {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of a strictly increasing tuple in [`subsets`] order.
pub fn subset_rank(n: usize, idx: &[usize]) -> usize {
    let p = idx.len();
    let mut rank = 0;
    let mut start = 0;
    for (pos, &v) in idx.iter().enumerate() {
        for skipped in start..v {
            rank += binomial(n - skipped - 1, p - pos - 1);
        }
        start = v + 1;
    }
    rank
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

pub trait Variance: Clone + std::fmt::Debug + PartialEq + Eq {}

/// Differential forms (covariant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covariant;
/// Multivector fields (contravariant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contravariant;
/// Forms on a leafwise frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leafwise;

impl Variance for Covariant {}
impl Variance for Contravariant {}
impl Variance for Leafwise {}

/// Totally antisymmetric tensor of degree `p` over a `dim`-dimensional
/// frame, stored by strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multi<K: Variance> {
    dim: usize,
    nvars: usize,
    degree: usize,
    comps: Vec<ScalarField>,
    _kind: PhantomData<K>,
}

pub type PForm = Multi<Covariant>;
pub type PVector = Multi<Contravariant>;
pub type LeafwiseForm = Multi<Leafwise>;

impl<K: Variance> Multi<K> {
    /// Degrees above `dim` are allowed and have no components.
    pub fn zero(dim: usize, nvars: usize, degree: usize) -> Self {
        Multi { dim, nvars, degree, comps: vec![ScalarField::zero(nvars); binomial(dim, degree)], _kind: PhantomData }
    }

    pub fn scalar(dim: usize, f: ScalarField) -> Self {
        Multi { dim, nvars: f.nvars(), degree: 0, comps: vec![f], _kind: PhantomData }
    }

    pub fn from_components(dim: usize, nvars: usize, degree: usize, comps: Vec<ScalarField>) -> Self {
        assert_eq!(comps.len(), binomial(dim, degree), "component count");
        Multi { dim, nvars, degree, comps, _kind: PhantomData }
    }

    /// Single basis element `f * e_{i1} ^ ... ^ e_{ip}` for an arbitrary index tuple.
    pub fn basis(dim: usize, f: ScalarField, idx: &[usize]) -> Self {
        let mut out = Self::zero(dim, f.nvars(), idx.len());
        let mut sorted = idx.to_vec();
        if let Some(sign) = sort_with_sign(&mut sorted) {
            let r = subset_rank(dim, &sorted);
            out.comps[r] = if sign < 0 { -f } else { f };
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &ScalarField)> {
        subsets(self.dim, self.degree).into_iter().zip(self.comps.iter())
    }

    /// Component for an arbitrary (possibly unsorted) index tuple.
    pub fn get(&self, idx: &[usize]) -> ScalarField {
        debug_assert_eq!(idx.len(), self.degree);
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => ScalarField::zero(self.nvars),
            Some(sign) => {
                let c = &self.comps[subset_rank(self.dim, &sorted)];
                if sign < 0 {
                    -c
                } else {
                    c.clone()
                }
            }
        }
    }

    /// Sets the component of a strictly increasing tuple.
    pub fn set_sorted(&mut self, idx: &[usize], v: ScalarField) {
        let r = subset_rank(self.dim, idx);
        self.comps[r] = v;
    }

    pub fn add_sorted(&mut self, idx: &[usize], v: &ScalarField) {
        if v.is_zero() {
            return;
        }
        let r = subset_rank(self.dim, idx);
        self.comps[r] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ScalarField::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.comps.iter().all(ScalarField::is_polynomial)
    }

    /// Nonzero terms as `(coef)*basis`, joined by ` + `; `0` when empty.
    /// `basis` renders a sorted index tuple, e.g. as `dx^dz`.
    pub fn describe(&self, chart: &Chart, basis: impl Fn(&[usize]) -> String) -> String {
        let terms: Vec<String> = self
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let b = basis(&idx);
                match (c.is_one(), b.is_empty()) {
                    (true, false) => b,
                    (_, true) => c.display(chart).to_string(),
                    (false, false) => format!("({})*{b}", c.display(chart)),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Multi { comps: self.comps.iter().map(f).collect(), ..self.clone() }
    }

    pub fn scale_by(&self, f: &ScalarField) -> Self {
        self.map(|c| if c.is_zero() { c.clone() } else { c * f })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        Multi { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        Multi { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    /// Graded-antisymmetric product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let p = self.degree + other.degree;
        if p > self.dim {
            return Err(Error::DegreeOverflow(p));
        }
        let mut out = Self::zero(self.dim, self.nvars, p);
        for (i, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.iter() {
                if b.is_zero() {
                    continue;
                }
                let mut k: Vec<usize> = i.iter().chain(&j).copied().collect();
                if let Some(sign) = sort_with_sign(&mut k) {
                    let t = a * b;
                    out.add_sorted(&k, &if sign < 0 { -t } else { t });
                }
            }
        }
        Ok(out)
    }

    /// Contraction in the first slot with a dual vector `v` (components
    /// indexed like the frame).
    pub(crate) fn contract_first(&self, v: &[ScalarField]) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeUnderflow);
        }
        let mut out = Self::zero(self.dim, self.nvars, self.degree - 1);
        for j in subsets(self.dim, self.degree - 1) {
            let mut acc = ScalarField::zero(self.nvars);
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() || j.contains(&i) {
                    continue;
                }
                let mut idx = Vec::with_capacity(self.degree);
                idx.push(i);
                idx.extend_from_slice(&j);
                let c = self.get(&idx);
                if !c.is_zero() {
                    acc += &(vi * &c);
                }
            }
            out.set_sorted(&j, acc);
        }
        Ok(out)
    }

    /// Full evaluation on `p` dual vectors: `sum_I T_I det[v_k(e_{I_l})]`.
    pub(crate) fn evaluate(&self, args: &[&[ScalarField]]) -> ScalarField {
        assert_eq!(args.len(), self.degree);
        let mut acc = ScalarField::zero(self.nvars);
        for (idx, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            let m: Vec<Vec<ScalarField>> = args.iter().map(|a| idx.iter().map(|&i| a[i].clone()).collect()).collect();
            let d = small_det(&m, self.nvars);
            if !d.is_zero() {
                acc += &(c * &d);
            }
        }
        acc
    }
}

/// Determinant by cofactor expansion; `m` is at most a few rows.
pub(crate) fn small_det(m: &[Vec<ScalarField>], nvars: usize) -> ScalarField {
    match m.len() {
        0 => ScalarField::one(nvars),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = ScalarField::zero(nvars);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<ScalarField>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
                    .collect();
                let t = &m[0][col] * &small_det(&minor, nvars);
                if col % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_and_rank() {
        for n in 0..6 {
            for p in 0..=n {
                let s = subsets(n, p);
                assert_eq!(s.len(), binomial(n, p));
                for (r, idx) in s.iter().enumerate() {
                    assert_eq!(subset_rank(n, idx), r);
                }
            }
        }
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn permutation_sign() {
        let mut a = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut a), Some(1));
        let mut b = vec![1, 0, 2];
        assert_eq!(sort_with_sign(&mut b), Some(-1));
        let mut c = vec![1, 1];
        assert_eq!(sort_with_sign(&mut c), None);
    }
}
