//! Lichnerowicz and leafwise cohomology on polynomial windows, and the
//! cochain-level comparison between them for regular Riemann-Poisson
//! structures.
//!
//! Every rank here is truncated: it is computed on coefficients of bounded
//! degree and says nothing directly about smooth cohomology.

mod split;
mod window;

pub use split::{
    check_basic, dpi_preserves_split, naturality_residual, pi_pushforward, sharp_basic, sharp_basic_residual,
    split_multivector, wedge_vectors, SplitPreservation, SplitViolation,
};
pub use window::{
    assemble_dpi_matrix, class_representatives, independent_classes, map_matrix, truncated_betti, BettiWindow,
    GradedBasis,
};

use serde::Serialize;

use crate::connection::CoMetric;
use crate::error::{Error, Result};
use crate::foliation::{leafwise_d, FoliationSplit};
use crate::poisson::Bivector;
use crate::symbolic::identically_zero_combinations;
use crate::tensor::{describe_form, describe_leafwise, subsets, LeafwiseForm, Multi, PForm, Variance};

/// Dimension over the rationals of the span of `items`.
pub fn rank_over_rationals<K: Variance>(items: &[Multi<K>]) -> usize {
    let Some(first) = items.first() else {
        return 0;
    };
    let equations: Vec<Vec<_>> =
        (0..first.components().len()).map(|c| items.iter().map(|q| q.components()[c].clone()).collect()).collect();
    items.len() - identically_zero_combinations(items.len(), &equations).len()
}

/// Casimir functions of degree at most `d` times wedges of kernel forms,
/// filtered to the basic ones.
pub fn basic_pform_family(pi: &Bivector, split: &FoliationSplit, p: usize, d: u32) -> Result<Vec<PForm>> {
    let n = pi.dim();
    let casimirs = pi.casimir_basis(d);
    let mut out = Vec::new();
    for idx in subsets(split.kernel_frame.len(), p) {
        let base = idx.iter().try_fold(PForm::scalar(n, crate::symbolic::ScalarField::one(n)), |acc, &i| {
            acc.wedge(&split.kernel_frame[i].to_multi())
        })?;
        for c in &casimirs {
            let form = base.scale_by(c);
            if form.is_zero() {
                continue;
            }
            match check_basic(split, &form, pi.chart()) {
                Ok(()) => out.push(form),
                Err(Error::NotBasic(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

fn require_constant_frame(split: &FoliationSplit) -> Result<()> {
    if split.ts_frame.iter().all(|v| v.components().iter().all(|c| c.is_constant())) {
        Ok(())
    } else {
        Err(Error::NonConstantFrame)
    }
}

/// Truncated leafwise Betti number for a constant leaf frame.
pub fn leafwise_betti(split: &FoliationSplit, p: usize, d: u32) -> Result<BettiWindow> {
    require_constant_frame(split)?;
    let r = split.rank;
    let n = split.dim();
    if p > r {
        return Err(Error::DegreeOverflow(p));
    }
    let dmap = |w: LeafwiseForm| leafwise_d(split, &w);
    let a = map_matrix(&GradedBasis::new(n, r, p, d), &GradedBasis::new(n, r, p + 1, d), dmap)?;
    let cocycles = a.nullity();
    let (preimage_window, coboundaries) = if p == 0 {
        (None, 0)
    } else {
        let b = map_matrix(&GradedBasis::new(n, r, p - 1, d + 1), &GradedBasis::new(n, r, p, d), dmap)?;
        (Some(d + 1), b.rank())
    };
    Ok(BettiWindow { degree: p, window: d, preimage_window, cocycles, coboundaries, betti: cocycles - coboundaries })
}

/// Cochain-level comparison of Poisson and leafwise cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm31Report {
    pub degree: usize,
    pub window: u32,
    /// Size of the enumerated basic family.
    pub basic_family: usize,
    /// Basic forms whose image under the metric is not `d_pi`-closed.
    pub basic_failures: Vec<String>,
    /// Number of basis elements of leafwise-closed forms in the window.
    pub leafwise_closed: usize,
    /// Closed leafwise forms whose pushforward is not `d_pi`-closed.
    pub leafwise_failures: Vec<String>,
    pub basic_dimension: usize,
    pub poisson_betti: Option<usize>,
    pub leafwise_betti: Option<usize>,
    /// `poisson_betti == basic_dimension + leafwise_betti`, in degree one.
    pub dimensions_agree: Option<bool>,
}

impl Thm31Report {
    pub fn all_pass(&self) -> bool {
        self.basic_failures.is_empty() && self.leafwise_failures.is_empty() && self.dimensions_agree != Some(false)
    }
}

pub fn thm31_cochain_report(
    pi: &Bivector,
    g: &CoMetric,
    split: &FoliationSplit,
    p: usize,
    d: u32,
) -> Result<Thm31Report> {
    let n = pi.dim();
    let r = split.rank;
    let chart = pi.chart();
    let family = basic_pform_family(pi, split, p, d)?;
    let mut basic_failures = Vec::new();
    for w in &family {
        if !sharp_basic_residual(pi, g, split, w)?.is_zero() {
            basic_failures.push(describe_form(w, chart));
        }
    }

    let mut leafwise_failures = Vec::new();
    let mut leafwise_closed = 0;
    if p <= r {
        let basis = GradedBasis::new(n, r, p, d);
        let forms: Vec<LeafwiseForm> = (0..basis.len()).map(|i| basis.to_multi(i)).collect();
        let images: Vec<LeafwiseForm> = forms.iter().map(|w| leafwise_d(split, w)).collect::<Result<_>>()?;
        let rows = images.first().map_or(0, |w| w.components().len());
        let equations: Vec<Vec<_>> =
            (0..rows).map(|c| images.iter().map(|w| w.components()[c].clone()).collect()).collect();
        let closed = identically_zero_combinations(forms.len(), &equations);
        leafwise_closed = closed.len();
        for coeffs in closed {
            let w: LeafwiseForm = basis.combine(&coeffs);
            if !pi.d_pi(&pi_pushforward(split, &w)).is_zero() {
                leafwise_failures.push(describe_leafwise(&w, chart));
            }
        }
    }

    let basic_dimension = rank_over_rationals(&family);
    let (poisson_betti, leafwise_b) = if p == 1 && pi.polynomial_degree().is_some() {
        let pb = truncated_betti(pi, 1, d)?.betti;
        let lb = match leafwise_betti(split, 1, d) {
            Ok(b) => Some(b.betti),
            Err(Error::NonConstantFrame | Error::DegreeOverflow(_)) => None,
            Err(e) => return Err(e),
        };
        (Some(pb), lb)
    } else {
        (None, None)
    };
    let dimensions_agree = match (poisson_betti, leafwise_b) {
        (Some(pb), Some(lb)) => Some(pb == basic_dimension + lb),
        _ => None,
    };
    Ok(Thm31Report {
        degree: p,
        window: d,
        basic_family: family.len(),
        basic_failures,
        leafwise_closed,
        leafwise_failures,
        basic_dimension,
        poisson_betti,
        leafwise_betti: leafwise_b,
        dimensions_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::split_cotangent;
    use crate::symbolic::{parse_scalar, Chart, RationalPoint, ScalarField};

    fn flat(n: usize) -> (Bivector, CoMetric, FoliationSplit) {
        let names = ["x", "y", "z"];
        let chart = Chart::new(names[..n].iter().copied()).unwrap();
        let pi = Bivector::from_upper(chart.clone(), [((0, 1), ScalarField::one(n))]).unwrap();
        let g = CoMetric::identity(chart);
        let split = split_cotangent(&pi, &g, 2, &[RationalPoint::from_ints(&vec![0; n])]).unwrap();
        (pi, g, split)
    }

    #[test]
    fn space_report() {
        let (pi, g, s) = flat(3);
        let rep = thm31_cochain_report(&pi, &g, &s, 1, 3).unwrap();
        assert_eq!(rep.basic_dimension, 4);
        assert_eq!(rep.poisson_betti, Some(4));
        assert_eq!(rep.leafwise_betti, Some(0));
        assert_eq!(rep.dimensions_agree, Some(true));
        assert!(rep.all_pass());
        let z2 = PForm::basis(3, parse_scalar("z^2", pi.chart()).unwrap(), &[2]);
        assert!(sharp_basic_residual(&pi, &g, &s, &z2).unwrap().is_zero());
    }

    #[test]
    fn plane_report() {
        let (pi, g, s) = flat(2);
        let rep = thm31_cochain_report(&pi, &g, &s, 1, 3).unwrap();
        assert_eq!((rep.poisson_betti, rep.basic_dimension, rep.leafwise_betti), (Some(0), 0, Some(0)));
        assert!(rep.all_pass());
    }

    #[test]
    fn leafwise_betti_numbers() {
        let (_, _, s) = flat(3);
        assert_eq!(leafwise_betti(&s, 0, 2).unwrap().betti, 3);
        assert_eq!(leafwise_betti(&s, 1, 2).unwrap().betti, 0);
        assert_eq!(leafwise_betti(&s, 2, 2).unwrap().betti, 0);
    }

    #[test]
    fn basic_family_flat() {
        let (pi, _, s) = flat(3);
        assert_eq!(basic_pform_family(&pi, &s, 1, 2).unwrap().len(), 3);
        assert_eq!(basic_pform_family(&pi, &s, 0, 2).unwrap().len(), 3);
    }
}
