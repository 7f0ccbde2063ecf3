mod common;

use common::*;
use rpoisson::cohomology::{
    assemble_dpi_matrix, dpi_preserves_split, map_matrix, pi_pushforward, split_multivector, GradedBasis,
};
use rpoisson::foliation::split_cotangent;
use rpoisson::tensor::{LeafwiseForm, PVector};

#[test]
fn consecutive_differentials_compose_to_zero() {
    for name in ["flat_r2", "flat_r3_id", "twisted_r3", "so3"] {
        let pi = manifold(name).pi;
        let n = pi.dim();
        let k = pi.polynomial_degree().unwrap();
        for p in 0..n {
            for d in 0..=4 {
                let mid = d + k;
                let first = assemble_dpi_matrix(&pi, p, d, mid).unwrap();
                let second = assemble_dpi_matrix(&pi, p + 1, mid, mid + k).unwrap();
                assert!(second.mul(&first).is_zero(), "{name}: p={p}, d={d}");
            }
        }
    }
}

#[test]
fn composition_is_nonzero_without_jacobi() {
    let pi = manifold("nonpoisson").pi;
    let first = assemble_dpi_matrix(&pi, 0, 1, 1).unwrap();
    let second = assemble_dpi_matrix(&pi, 1, 1, 1).unwrap();
    assert!(!second.mul(&first).is_zero());
}

#[test]
fn split_projectors_are_complementary_idempotents() {
    for name in RIEMANN_POISSON {
        let m = manifold(name);
        let s = split_cotangent(&m.pi, &m.metric, m.declared_rank, &m.samples).unwrap();
        let n = m.pi.dim();
        for p in 0..=n {
            let basis = GradedBasis::multivectors(n, p, 2);
            for i in 0..basis.len() {
                let q: PVector = basis.to_multi(i);
                let (q0, q1) = split_multivector(&q, &s);
                assert_eq!(q0.add(&q1), q);
                let (a, b) = split_multivector(&q0, &s);
                assert_eq!((a, b.is_zero()), (q0.clone(), true));
                let (a, b) = split_multivector(&q1, &s);
                assert_eq!((a.is_zero(), b), (true, q1.clone()));
            }
        }
    }
}

#[test]
fn differential_preserves_the_split() {
    for name in RIEMANN_POISSON {
        let m = manifold(name);
        let s = split_cotangent(&m.pi, &m.metric, m.declared_rank, &m.samples).unwrap();
        for p in 0..=2.min(m.pi.dim()) {
            for d in 0..=2 {
                let r = dpi_preserves_split(&m.pi, &s, p, d);
                assert_eq!(r.violation, None, "{name}: p={p}, d={d}");
                assert!(r.checked > 0);
            }
        }
    }
}

#[test]
fn pushforward_is_injective_on_windows() {
    for name in RIEMANN_POISSON {
        let m = manifold(name);
        let s = split_cotangent(&m.pi, &m.metric, m.declared_rank, &m.samples).unwrap();
        let n = m.pi.dim();
        for p in 0..=s.rank {
            for d in 0..=3 {
                let source = GradedBasis::new(n, s.rank, p, d);
                let target = GradedBasis::multivectors(n, p, d);
                let a = map_matrix(&source, &target, |w: LeafwiseForm| Ok(pi_pushforward(&s, &w))).unwrap();
                assert_eq!(a.rank(), source.len(), "{name}: p={p}, d={d}");
            }
        }
    }
}
