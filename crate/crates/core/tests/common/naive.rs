//! Naive dense computation of truncated Poisson cohomology on the plane,
//! independent of the graded window code: the plane differential is written
//! out by hand and every rank comes from plain rational elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Poly = BTreeMap<(u32, u32), BigRational>;

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn add_into(acc: &mut Poly, p: &Poly, s: &BigRational) {
    for (m, c) in p {
        let e = acc.entry(*m).or_insert_with(BigRational::zero);
        *e += c * s;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((i, j), c) in a {
        for ((k, l), d) in b {
            *out.entry((i + k, j + l)).or_insert_with(BigRational::zero) += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn deriv(a: &Poly, var: usize) -> Poly {
    let mut out = Poly::new();
    for (&(i, j), c) in a {
        let (e, m) = if var == 0 { (i, (i.wrapping_sub(1), j)) } else { (j, (i, j.wrapping_sub(1))) };
        if e > 0 {
            out.insert(m, c * int(e as i64));
        }
    }
    out
}

fn monomials(bound: u32) -> Vec<(u32, u32)> {
    (0..=bound).flat_map(|t| (0..=t).map(move |i| (t - i, i))).collect()
}

/// The plane differential for `pi = f dx^dy`, one slot per component:
/// functions go to Hamiltonian fields, fields `X` go to `X(f) - f div X`,
/// bivectors go to zero.
fn differential(f: &Poly, p: usize, q: &[Poly]) -> Vec<Poly> {
    match p {
        0 => {
            let mut a = Poly::new();
            add_into(&mut a, &mul(f, &deriv(&q[0], 1)), &int(1));
            let mut b = Poly::new();
            add_into(&mut b, &mul(f, &deriv(&q[0], 0)), &int(-1));
            vec![a, b]
        }
        1 => {
            let mut out = Poly::new();
            add_into(&mut out, &mul(&q[0], &deriv(f, 0)), &int(1));
            add_into(&mut out, &mul(&q[1], &deriv(f, 1)), &int(1));
            add_into(&mut out, &mul(f, &deriv(&q[0], 0)), &int(-1));
            add_into(&mut out, &mul(f, &deriv(&q[1], 1)), &int(-1));
            vec![out]
        }
        _ => vec![],
    }
}

fn slots(p: usize) -> usize {
    [1, 2, 1][p]
}

/// Basis elements of degree-`p` multivectors with coefficients of degree at most `bound`.
fn window(p: usize, bound: u32) -> Vec<Vec<Poly>> {
    let mut out = Vec::new();
    for s in 0..slots(p) {
        for m in monomials(bound) {
            let mut v = vec![Poly::new(); slots(p)];
            v[s].insert(m, int(1));
            out.push(v);
        }
    }
    out
}

fn flatten(v: &[Poly], big: u32) -> Vec<BigRational> {
    let ms = monomials(big);
    v.iter().flat_map(|poly| ms.iter().map(|m| poly.get(m).cloned().unwrap_or_else(BigRational::zero))).collect()
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = BigRational::one() / &rows[r][c];
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] * &inv;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn naive_betti(f: &Poly, k: u32, p: usize, d: u32) -> usize {
    let preimage = d + 3;
    let big = preimage + k + d;
    let source = window(p, d);
    let images: Vec<Vec<BigRational>> = source.iter().map(|v| flatten(&differential(f, p, v), big)).collect();
    let cocycles = source.len() - if p == 2 { 0 } else { rank(images) };
    if p == 0 {
        return cocycles;
    }
    let w: Vec<Vec<BigRational>> = source.iter().map(|v| flatten(v, big)).collect();
    let b: Vec<Vec<BigRational>> =
        window(p - 1, preimage).iter().map(|v| flatten(&differential(f, p - 1, v), big)).collect();
    let rank_b = rank(b.clone());
    let joint = rank(w.iter().cloned().chain(b).collect());
    let intersection = w.len() + rank_b - joint;
    cocycles - intersection
}
