mod common;

use common::{circle_fd_eigenvalues, interval_fd_eigenvalues, loglog_slope, Bc};
use proptest::prelude::*;
use scalecalc_core::growth::star;
use scalecalc_core::spectral::{
    enumerate_spectrum, enumerate_up_to, merge_spectra, shifted_growth, sphere_multiplicity,
};
use scalecalc_core::{BoundaryCondition, ManifoldModel};

fn close(got: f64, want: f64, tol: f64) -> bool {
    if want.abs() < 1e-9 {
        got.abs() < tol
    } else {
        ((got - want) / want).abs() < tol
    }
}

#[test]
fn interval_spectra_match_finite_differences() {
    for (bc, fd) in [
        (BoundaryCondition::Dirichlet, Bc::Dirichlet),
        (BoundaryCondition::Neumann, Bc::Neumann),
        (BoundaryCondition::Mixed, Bc::Mixed),
    ] {
        let exact = enumerate_spectrum(ManifoldModel::interval(bc), 20).unwrap().to_vec();
        let approx = interval_fd_eigenvalues(fd, 1024, 20);
        for (mu, (e, a)) in exact.iter().zip(&approx).enumerate() {
            assert!(close(*a, *e, 1e-3), "{bc:?} μ={}: {a} vs {e}", mu + 1);
        }
    }
}

#[test]
fn circle_spectrum_matches_periodic_differences() {
    let exact = enumerate_spectrum(ManifoldModel::Circle, 7).unwrap().to_vec();
    let approx = circle_fd_eigenvalues(2048, 7);
    for (e, a) in exact.iter().zip(&approx) {
        assert!(close(*a, *e, 1e-3), "{a} vs {e}");
    }
}

#[test]
fn torus_counts_match_brute_force() {
    // points of ℤ² and ℤ³ in a ball, counted directly
    for (dim, bound) in [(2u32, 400i64), (3, 100)] {
        let r = (bound as f64).sqrt() as i64 + 1;
        let mut count = 0u64;
        let range = -r..=r;
        for a in range.clone() {
            for b in range.clone() {
                if dim == 2 {
                    count += (a * a + b * b <= bound) as u64;
                } else {
                    for c in range.clone() {
                        count += (a * a + b * b + c * c <= bound) as u64;
                    }
                }
            }
        }
        let s = enumerate_up_to(ManifoldModel::torus(dim).unwrap(), bound as f64).unwrap();
        assert_eq!(s.counting(bound as f64) as u64, count, "T^{dim}");
    }
}

#[test]
fn sphere_multiplicities_are_harmonic_dimensions() {
    // dim of degree-l harmonic polynomials in n+1 variables, by recursion
    // on the dimension of all homogeneous polynomials
    fn homogeneous(vars: u64, l: u64) -> u64 {
        (1..=l).fold(1u64, |acc, i| acc * (vars - 1 + i) / i)
    }
    for n in 1..=4u32 {
        for l in 0..30u64 {
            let vars = n as u64 + 1;
            let want = homogeneous(vars, l) - if l >= 2 { homogeneous(vars, l - 2) } else { 0 };
            assert_eq!(sphere_multiplicity(n, l), want, "S^{n} ℓ={l}");
        }
    }
}

#[test]
fn order_d_slopes() {
    for n in 1..=3u32 {
        for d in [2u32, 4] {
            let s = enumerate_spectrum(ManifoldModel::order_d(n, d).unwrap(), 10_000).unwrap();
            let v: Vec<f64> = s.to_vec().into_iter().skip(1).collect();
            let slope = loglog_slope(&v);
            assert!((slope - d as f64 / n as f64).abs() < 0.05, "n={n} d={d}: {slope}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn merged_spectrum_is_star_of_shifted_growths(a in 0usize..4, b in 0usize..4) {
        let models = [
            ManifoldModel::Circle,
            ManifoldModel::torus(2).unwrap(),
            ManifoldModel::sphere(2).unwrap(),
            ManifoldModel::interval(BoundaryCondition::Neumann),
        ];
        let (sa, sb) = (
            enumerate_spectrum(models[a], 2000).unwrap(),
            enumerate_spectrum(models[b], 2000).unwrap(),
        );
        let merged = merge_spectra(&sa, &sb);
        let n = 1000;
        // both spectra start at 0, so the common shift is 1 on each side
        let shifted: Vec<f64> = merged.expanded().take(n).map(|x| x + 1.0).collect();
        let fa = shifted_growth(&sa).unwrap();
        let fb = shifted_growth(&sb).unwrap();
        let st = star(&fa, &fb, n).unwrap();
        prop_assert_eq!(&shifted[..], st.values());
    }
}
