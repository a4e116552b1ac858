//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use scalecalc_core::GrowthFunction;

/// `f * h` by concatenating both prefixes and sorting.
pub fn brute_force_star(f: &[f64], h: &[f64], count: usize) -> Vec<f64> {
    let mut all: Vec<f64> = f.iter().chain(h).copied().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.truncate(count);
    all
}

pub fn prefix(f: &GrowthFunction, n: usize) -> Vec<f64> {
    f.prefix(n).unwrap()
}

/// Tridiagonal matrix given by its diagonal and the products
/// `a_{i,i+1}·a_{i+1,i}` of off-diagonal pairs (all positive).
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off_products: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - self.off_products[i - 1] / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th smallest eigenvalue (1-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let bound = self.diag.iter().map(|d| d.abs()).fold(0.0, f64::max)
            + 2.0 * self.off_products.iter().map(|p| p.sqrt()).fold(0.0, f64::max);
        let (mut lo, mut hi) = (-bound - 1.0, bound + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi.abs().max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Bc {
    Dirichlet,
    Neumann,
    Mixed,
}

/// Second-difference discretisation of `−u''` on `[0, 1]` with `n` cells.
/// Neumann ends use a ghost point, which makes the row `(2, −2)/h²`.
pub fn interval_matrix(bc: Bc, n: usize) -> Tridiagonal {
    let h2 = 1.0 / (n as f64 * n as f64);
    let (size, left_neumann, right_neumann) = match bc {
        Bc::Dirichlet => (n - 1, false, false),
        Bc::Neumann => (n + 1, true, true),
        Bc::Mixed => (n, false, true),
    };
    let diag = vec![2.0 / h2; size];
    let mut off = vec![1.0 / (h2 * h2); size - 1];
    if left_neumann {
        off[0] *= 2.0;
    }
    if right_neumann {
        off[size - 2] *= 2.0;
    }
    Tridiagonal { diag, off_products: off }
}

/// First `count` eigenvalues on a grid of `n` cells, Richardson-extrapolated
/// against the grid of `n/2` cells.
pub fn interval_fd_eigenvalues(bc: Bc, n: usize, count: usize) -> Vec<f64> {
    let fine = interval_matrix(bc, n);
    let coarse = interval_matrix(bc, n / 2);
    (1..=count)
        .map(|k| {
            let (f, c) = (fine.eigenvalue(k), coarse.eigenvalue(k));
            (4.0 * f - c) / 3.0
        })
        .collect()
}

/// Eigenvalues of the periodic second-difference matrix on `n` points of
/// the circle of length 2π, from the DFT of its first row.
pub fn circle_fd_eigenvalues(n: usize, count: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let mut row = vec![0.0; n];
    row[0] = 2.0 / (h * h);
    row[1] = -1.0 / (h * h);
    row[n - 1] = -1.0 / (h * h);
    let mut eig: Vec<f64> = (0..n)
        .map(|k| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(j, c)| c * (2.0 * PI * (j * k % n) as f64 / n as f64).cos())
                .sum()
        })
        .collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig.truncate(count);
    eig
}

/// Ordinary least squares slope of `ln y` against `ln x` over `1..=len`,
/// restricted to the upper half.
pub fn loglog_slope(values: &[f64]) -> f64 {
    let start = values.len() / 2;
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .skip(start)
        .map(|(i, v)| (((i + 1) as f64).ln(), v.ln()))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx).powi(2), a.1 + (p.0 - mx) * (p.1 - my)));
    sxy / sxx
}
