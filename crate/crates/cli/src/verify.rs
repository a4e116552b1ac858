//! Verification suites behind `scalecalc verify`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalecalc_core::fmt::sig;
use scalecalc_core::fourier::{gram_matrix, level_weight, phi_map};
use scalecalc_core::growth::{equivalent, idempotency_check, star, star_class};
use scalecalc_core::scale::scale_product;
use scalecalc_core::spectral::{enumerate_spectrum, merge_spectra, shifted_growth, weyl_fit};
use scalecalc_core::{
    BasisMode, FourierCoefficients, FractalModel, GrowthClass, GrowthFunction, ManifoldModel, Source,
};
use serde::Serialize;

use crate::args::{Format, Suite, VerifyArgs};
use crate::output::{write_csv, write_json, write_table};
use crate::{specs, CliError};

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Relation {
    /// `|measured − target| ≤ tolerance`
    Within,
    AtMost,
    AtLeast,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub property: String,
    pub measured: f64,
    relation: Relation,
    pub target: f64,
    tolerance: f64,
    passed: bool,
    pub detail: String,
}

impl Check {
    fn within(property: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let passed = (measured - target).abs() <= tolerance;
        Check { property: property.into(), measured, relation: Relation::Within, target, tolerance, passed, detail: String::new() }
    }

    fn at_most(property: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Check {
            property: property.into(),
            measured,
            relation: Relation::AtMost,
            target: bound,
            tolerance,
            passed: measured <= bound + tolerance,
            detail: String::new(),
        }
    }

    fn at_least(property: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Check {
            relation: Relation::AtLeast,
            passed: measured >= bound - tolerance,
            ..Check::at_most(property, measured, bound, tolerance)
        }
    }

    fn failed(property: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { passed: false, detail: detail.into(), ..Check::at_most(property, f64::NAN, 0.0, 0.0) }
    }

    fn note(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    suite: &'static str,
    passed: bool,
    checks: Vec<Check>,
}

impl Report {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<(), CliError> {
        if format == Format::Json {
            return write_json(out, self);
        }
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                let relation = match c.relation {
                    Relation::Within => "within",
                    Relation::AtMost => "<=",
                    Relation::AtLeast => ">=",
                };
                vec![
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.property.clone(),
                    if c.measured.is_nan() { "-".into() } else { sig(c.measured) },
                    relation.to_string(),
                    sig(c.target),
                    sig(c.tolerance),
                    c.detail.clone(),
                ]
            })
            .collect();
        let headers = ["status", "property", "measured", "relation", "target", "tolerance", "detail"];
        match format {
            Format::Csv => write_csv(out, &headers, &rows),
            _ => {
                write_table(out, &headers, &rows)?;
                writeln!(out, "{}: {}", self.suite, if self.passed { "pass" } else { "fail" })?;
                Ok(())
            }
        }
    }
}

pub fn run(args: &VerifyArgs) -> Result<Report, CliError> {
    let (suite, checks) = match args.suite {
        Suite::Gram => ("gram", gram(args)?),
        Suite::Weyl => ("weyl", weyl(args)?),
        Suite::Star => ("star", star_suite(args)?),
        Suite::Idempotent => ("idempotent", idempotent(args)?),
        Suite::ProductB => ("productB", product_b(args)?),
        Suite::Bounds => ("bounds", bounds(args)?),
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { suite, passed, checks })
}

fn gram(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let modes = args.modes.unwrap_or(32);
    if modes == 0 {
        return Err(CliError::Usage("--modes must be at least 1".into()));
    }
    let tolerance = args.tolerance.unwrap_or(1e-10);
    let indices: Vec<usize> = (1..=modes).collect();
    let mut checks = Vec::new();
    for k in 0..=args.k.unwrap_or(3) {
        let g = gram_matrix(&indices, k)?;
        let (mut off, mut diag) = (0.0f64, 0.0f64);
        for a in 0..modes {
            for b in 0..modes {
                if a == b {
                    let lambda = BasisMode::from_index(a + 1).map_or(0.0, |m| m.eigenvalue());
                    let want = level_weight(lambda, k);
                    diag = diag.max(((g[(a, a)] - want) / want).abs());
                } else {
                    off = off.max(g[(a, b)].abs());
                }
            }
        }
        checks.push(Check::at_most(format!("k={k} max off-diagonal"), off, tolerance, 0.0));
        checks.push(Check::at_most(format!("k={k} diagonal relative error"), diag, 1e-8, 0.0));
    }
    Ok(checks)
}

fn weyl(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let model = specs::model(args.model.as_deref().unwrap_or("circle"))?;
    let s = enumerate_spectrum(model, args.count.unwrap_or(10_000) as usize)?;
    let fit = weyl_fit(&s, args.tail.unwrap_or(0.5))?;
    Ok(vec![Check::within(format!("{model} exponent"), fit.exponent, model.weyl_exponent(), args.tolerance.unwrap_or(0.05))
        .note(format!("C = {}, residual {}", sig(fit.constant), sig(fit.residual)))])
}

/// Running maximum of `f·r`, `r ∈ [1/c, c]`.
fn perturb(f: &[f64], c: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut m = 0.0f64;
    f.iter()
        .map(|v| {
            m = m.max(v * rng.gen_range(1.0 / c..=c));
            m
        })
        .collect()
}

fn star_suite(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let trials = args.count.unwrap_or(200);
    let prefix = args.horizon.unwrap_or(1000) as usize;
    let slack = args.tolerance.unwrap_or(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (mut oracle_fail, mut comm_fail) = (None, None);
    let mut worst = 0.0f64;
    let mut worst_trial = 0;
    for trial in 0..trials {
        let c = rng.gen_range(1.01..4.0);
        let f = GrowthFunction::monomial(rng.gen_range(0.5..3.0))?;
        let fp = GrowthFunction::explicit(perturb(&f.prefix(2 * prefix)?, c, &mut rng), None)?;
        let h = GrowthFunction::power_law(rng.gen_range(0.5..5.0), rng.gen_range(0.5..3.0))?;

        let fh = star(&f, &h, prefix)?;
        let mut sorted: Vec<f64> = f.prefix(prefix)?.into_iter().chain(h.prefix(prefix)?).collect();
        sorted.sort_by(f64::total_cmp);
        if oracle_fail.is_none() && fh.values() != &sorted[..prefix] {
            oracle_fail = Some(trial);
        }
        if comm_fail.is_none() && star(&h, &f, prefix)?.values() != fh.values() {
            comm_fail = Some(trial);
        }
        let base = equivalent(&f, &fp, 2 * prefix).constant.unwrap_or(f64::INFINITY);
        let merged = equivalent(&fh.to_growth(), &star(&fp, &h, prefix)?.to_growth(), prefix)
            .constant
            .unwrap_or(f64::INFINITY);
        if merged / base > worst {
            worst = merged / base;
            worst_trial = trial;
        }
    }
    let first = |t: Option<u64>| t.map_or(String::new(), |t| format!("first counterexample: trial {t}"));
    Ok(vec![
        Check::at_most("matches sorted concatenation", oracle_fail.is_some() as u8 as f64, 0.0, 0.0).note(first(oracle_fail)),
        Check::at_most("commutative", comm_fail.is_some() as u8 as f64, 0.0, 0.0).note(first(comm_fail)),
        Check::at_most("c(f*h, f′*h) / c(f, f′)", worst, 1.0, slack)
            .note(format!("{trials} seeded triples on prefix {prefix}; worst trial {worst_trial}")),
    ])
}

fn idempotent(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let horizon = args.horizon.unwrap_or(100_000) as usize;
    let exponents: Vec<u32> = match args.k {
        Some(0) => return Err(CliError::Usage("--k must be at least 1".into())),
        Some(k) => vec![k],
        None => vec![1, 2, 3],
    };
    let mut checks = Vec::new();
    for k in exponents {
        let f = GrowthFunction::monomial(k as f64)?;
        match idempotency_check(&f, horizon) {
            Ok(r) => {
                let scale = 2f64.powi(k as i32);
                checks.push(Check::at_least(format!("k={k} min (f*f)/f"), r.min_ratio, 1.0 / scale, 0.0));
                checks.push(Check::at_most(format!("k={k} max (f*f)/f"), r.max_ratio, scale, 0.0));
            }
            Err(e) => checks.push(Check::failed(format!("k={k} bounds"), e.to_string())),
        }
        let merged = star(&f, &f, horizon)?;
        let bad = (1usize..)
            .zip(merged.values())
            .find(|&(mu, &v)| v != (((mu - 1) / 2 + 1) as f64).powi(k as i32));
        let check = Check::at_most(format!("k={k} f*f(μ) = f(⌊(μ−1)/2⌋+1)"), bad.is_some() as u8 as f64, 0.0, 0.0);
        checks.push(match bad {
            Some((mu, v)) => check.note(format!("first counterexample μ = {mu}, value {}", sig(*v))),
            None => check.note(format!("μ ≤ {horizon}")),
        });
    }
    Ok(checks)
}

fn torus(n: u32) -> Result<ManifoldModel, CliError> {
    Ok(if n == 1 { ManifoldModel::Circle } else { ManifoldModel::torus(n)? })
}

fn product_b(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let (n1, n2) = (args.n1.unwrap_or(1), args.n2.unwrap_or(2));
    let count = args.count.unwrap_or(10_000) as usize;
    let tolerance = args.tolerance.unwrap_or(0.05);
    let expected = (2.0 / n1 as f64).min(2.0 / n2 as f64);

    let (a, b) = (enumerate_spectrum(torus(n1)?, count)?, enumerate_spectrum(torus(n2)?, count)?);
    let merged = merge_spectra(&a, &b);
    let fitted = GrowthClass::classify(&shifted_growth(&merged)?, count)?;

    let (m1, m2) = (FractalModel::mapping_space(n1, 2)?, FractalModel::mapping_space(n2, 2)?);
    let symbolic = star_class(&m1.class()?, &m2.class()?)?;
    let product = scale_product(&m1, &m2, count)?;
    let cert = product.certificate(&m1, &m2)?;
    let absorbing = match cert.absorbing {
        Some(Source::Left) => m1.label.clone(),
        Some(Source::Right) => m2.label.clone(),
        None => "neither (equal classes)".into(),
    };
    Ok(vec![
        Check::within(format!("T^{n1} ⊔ T^{n2} fitted exponent"), fitted.exponent, expected, tolerance)
            .note(format!("{} merged eigenvalues", merged.len())),
        Check::within("symbolic star class", symbolic.exponent, expected, 1e-9),
        Check::within("scale product class", cert.product.exponent, expected, 1e-9)
            .note(format!("absorbing factor {absorbing}")),
    ])
}

/// `‖ψ‖_{Δ^{k+k₀,2}} / ‖Φψ‖_{f^k}` for ψ without a constant term.
fn phi_ratio(psi: &FourierCoefficients, k: u32, k0: u32) -> Result<f64, CliError> {
    let x = phi_map(psi, k0)?;
    let weighted: f64 = psi
        .iter()
        .zip(&x)
        .map(|((mode, _), xv)| mode.eigenvalue().powi(k as i32) * xv * xv)
        .sum();
    Ok((psi.weighted_norm_squared(k + k0) / weighted).sqrt())
}

fn bounds(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let max_m = args.count.unwrap_or(10_000) as u128;
    let k_max = args.k.unwrap_or(6);
    let slack = args.tolerance.unwrap_or(1e-12);
    let mut violation = None;
    'outer: for m in 1..=max_m {
        let lambda = m * m;
        for k0 in 1..=3u32 {
            let top = lambda.pow(k0);
            let sum: u128 = (0..=k0).map(|j| lambda.pow(j)).sum();
            if !(top <= sum && sum <= (1 + k0 as u128) * top) {
                violation = Some((lambda, k0));
                break 'outer;
            }
        }
    }
    let exact = Check::at_most("λ^k₀ ≤ Σ_{j≤k₀} λ^j ≤ (1+k₀)λ^k₀ violations", violation.is_some() as u8 as f64, 0.0, 0.0);
    let exact = match violation {
        Some((l, k0)) => exact.note(format!("first counterexample λ = {l}, k₀ = {k0}")),
        None => exact.note(format!("λ = m², m ≤ {max_m}, k₀ ∈ 1..3, integer arithmetic")),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (mut lo, mut sharp, mut coarse) = (f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let mut psi = FourierCoefficients::zeros(8);
        for m in 1..=8 {
            psi.set(BasisMode::Cos(m), rng.gen_range(-1.0..1.0));
            psi.set(BasisMode::Sin(m), rng.gen_range(-1.0..1.0));
        }
        for k0 in 1..=3u32 {
            for k in 0..=k_max {
                let r = phi_ratio(&psi, k, k0)?;
                lo = lo.min(r);
                sharp = sharp.max(r / (1.0 + k as f64 / (k0 as f64 + 1.0)).sqrt());
                if k <= k0 * (k0 + 1) {
                    coarse = coarse.max(r / (1.0 + k0 as f64).sqrt());
                }
            }
        }
    }
    Ok(vec![
        exact,
        Check::at_least("Φ norm ratio", lo, 1.0, slack).note("‖ψ‖_{k+k₀} / ‖Φψ‖_{f^k}, 50 seeded ψ"),
        Check::at_most("Φ ratio / √(1 + k/(k₀+1))", sharp, 1.0, slack).note(format!("k ≤ {k_max}")),
        Check::at_most("Φ ratio / √(1+k₀)", coarse, 1.0, slack).note("k ≤ k₀(k₀+1)"),
    ])
}
