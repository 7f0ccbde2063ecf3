//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive primitive remainder sequence: split off the content with respect
//! to one variable (a gcd over strictly fewer variables), then run a
//! pseudo-remainder sequence on the primitive parts.

use super::poly::Poly;

/// Monic gcd of `a` and `b`. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a == b {
        return a.monic();
    }
    let Some(v) = (0..n).find(|&v| a.involves(v) || b.involves(v)) else {
        return Poly::one(n);
    };
    let (ca, pa) = content_and_primitive(a, v);
    let (cb, pb) = content_and_primitive(b, v);
    let c = gcd(&ca, &cb);
    let g = primitive_gcd(&pa, &pb, v);
    c.mul(&g).monic()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.nvars());
    }
    let g = gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul(b).monic()
}

/// Content with respect to `v` (a polynomial free of `v`) and the primitive part.
fn content_and_primitive(a: &Poly, v: usize) -> (Poly, Poly) {
    let coeffs = a.to_univariate(v);
    let mut content = Poly::zero(a.nvars());
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        content = gcd(&content, c);
        if content.is_one() {
            break;
        }
    }
    let pp = a.div_exact(&content).expect("content divides");
    (content, pp.integer_primitive())
}

fn primitive_part(a: &Poly, v: usize) -> Poly {
    content_and_primitive(a, v).1
}

fn primitive_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let (mut r0, mut r1) =
        if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    loop {
        if r1.degree_in(v) == 0 {
            return Poly::one(a.nvars());
        }
        let r = pseudo_remainder(&r0, &r1, v);
        if r.is_zero() {
            return r1;
        }
        r0 = r1;
        r1 = primitive_part(&r, v);
    }
}

/// Sparse pseudo-remainder of `a` by `b` with respect to `v`.
fn pseudo_remainder(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lcb = b.to_univariate(v).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.to_univariate(v).pop().expect("nonzero");
        r = lcb.mul(&r).sub(&lcr.mul(b).shift_var(v, dr - db));
    }
    r
}
