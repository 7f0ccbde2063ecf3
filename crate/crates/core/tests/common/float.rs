//! Floating-point oracles that only evaluate the input fields.

use rpoisson::connection::CoMetric;
use rpoisson::poisson::Bivector;
use rpoisson::symbolic::ScalarField;

pub const H: f64 = 1e-6;

pub fn central(f: impl Fn(&[f64]) -> f64, p: &[f64], i: usize, h: f64) -> f64 {
    let mut a = p.to_vec();
    let mut b = p.to_vec();
    a[i] += h;
    b[i] -= h;
    (f(&a) - f(&b)) / (2.0 * h)
}

pub fn field_fn(f: &ScalarField) -> impl Fn(&[f64]) -> f64 + '_ {
    move |p| f.eval_f64(p)
}

/// Least-squares solution of `a x = b` through the normal equations.
fn solve_least_squares(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = a[0].len();
    let mut aug: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..m).map(|j| a.iter().map(|r| r[i] * r[j]).sum()).collect();
            row.push(a.iter().zip(b).map(|(r, bi)| r[i] * bi).sum());
            row
        })
        .collect();
    for c in 0..m {
        let piv = (c..m).max_by(|&x, &y| aug[x][c].abs().total_cmp(&aug[y][c].abs())).unwrap();
        aug.swap(c, piv);
        assert!(aug[c][c].abs() > 1e-12, "singular connection system");
        for r in 0..m {
            if r != c {
                let f = aug[r][c] / aug[c][c];
                for k in c..=m {
                    aug[r][k] -= f * aug[c][k];
                }
            }
        }
    }
    (0..m).map(|i| aug[i][m] / aug[i][i]).collect()
}

/// Connection coefficients at `p` from torsion-freeness and metric
/// compatibility on coordinate forms, with every derivative numerical.
pub fn christoffel_oracle(pi: &Bivector, g: &CoMetric, p: &[f64]) -> Vec<f64> {
    let n = pi.dim();
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let pij = |i: usize, j: usize, x: &[f64]| pi.entry(i, j).eval_f64(x);
    let gij = |i: usize, j: usize, x: &[f64]| g.entry(i, j).eval_f64(x);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // D_{dx^i} dx^j - D_{dx^j} dx^i = d(pi_ij)
                let mut row = vec![0.0; n * n * n];
                row[idx(i, j, k)] += 1.0;
                row[idx(j, i, k)] -= 1.0;
                rows.push(row);
                rhs.push(central(|x| pij(i, j, x), p, k, H));
                // pi(dx^i).g^{jk} = <D_i dx^j, dx^k> + <dx^j, D_i dx^k>
                let mut row = vec![0.0; n * n * n];
                for m in 0..n {
                    row[idx(i, j, m)] += gij(m, k, p);
                    row[idx(i, k, m)] += gij(j, m, p);
                }
                rows.push(row);
                rhs.push((0..n).map(|l| pij(i, l, p) * central(|x| gij(j, k, x), p, l, H)).sum());
            }
        }
    }
    solve_least_squares(&rows, &rhs)
}

/// `D pi(dx^a, dx^b, dx^c)` at `p` from the numerical connection.
pub fn dpi_oracle(pi: &Bivector, g: &CoMetric, p: &[f64], (a, b, c): (usize, usize, usize)) -> f64 {
    let n = pi.dim();
    let gamma = christoffel_oracle(pi, g, p);
    let pij = |i: usize, j: usize, x: &[f64]| pi.entry(i, j).eval_f64(x);
    // D_{dx^a} dx^b = sum_k Gamma[a][b][k] dx^k
    let along = (0..n).map(|l| pij(a, l, p) * central(|x| pij(b, c, x), p, l, H)).sum::<f64>();
    let first = (0..n).map(|k| gamma[(a * n + b) * n + k] * pij(k, c, p)).sum::<f64>();
    let second = (0..n).map(|k| pij(b, k, p) * gamma[(a * n + c) * n + k]).sum::<f64>();
    along - first - second
}
