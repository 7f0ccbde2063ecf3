mod common;

use common::naive::{int, naive_betti, Poly};
use rpoisson::cohomology::truncated_betti;
use rpoisson::poisson::Bivector;
use rpoisson::symbolic::{parse_scalar, Chart};

/// Coefficient text, its monomial terms, and its degree.
type Case = (&'static str, Vec<((u32, u32), i64)>, u32);

#[test]
fn graded_windows_match_the_naive_oracle() {
    let chart = Chart::new(["x", "y"]).unwrap();
    let cases: [Case; 4] = [
        ("1", vec![((0, 0), 1)], 0),
        ("x", vec![((1, 0), 1)], 1),
        ("x^2+y^2", vec![((2, 0), 1), ((0, 2), 1)], 2),
        ("x*y", vec![((1, 1), 1)], 2),
    ];
    for (text, terms, k) in cases {
        let f: Poly = terms.into_iter().map(|(m, c)| (m, int(c))).collect();
        let pi = Bivector::from_upper(chart.clone(), [((0, 1), parse_scalar(text, &chart).unwrap())]).unwrap();
        for p in 0..=2 {
            for d in 0..=2 {
                let graded = truncated_betti(&pi, p, d).unwrap().betti;
                let naive = naive_betti(&f, k, p, d);
                assert_eq!(graded, naive, "pi = ({text}) dx^dy, p={p}, d={d}");
            }
        }
    }
}
