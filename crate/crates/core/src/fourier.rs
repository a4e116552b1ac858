//! Fourier analysis on the flat circle `ℝ/2πℤ` with target `ℝ`.
//!
//! Basis (L²-orthonormal, indexed like the circle spectrum):
//! `μ = 1 ↦ 1/√(2π)`, `μ = 2m ↦ cos(mt)/√π`, `μ = 2m+1 ↦ sin(mt)/√π`,
//! so mode `μ` has eigenvalue `λ_μ = m²` for `Δ = −d²/dt²`.
//! Derivatives are taken spectrally: transform, multiply by `iω`, invert.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fmt::sig;

/// Smallest accepted number of samples.
pub const MIN_SAMPLES: usize = 64;

/// Allowed mismatch `|u(0) − u(2π)|` for closed-form functions.
pub const SEAM_TOLERANCE: f64 = 1e-8;

/// Relative magnitude below which DFT components of a basis mode are roundoff.
const GRAM_CHOP: f64 = 1e-12;

/// Allowed share of the level-`k` norm carried by frequencies above `K`.
pub const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("sample count {0} must be a power of two and at least {MIN_SAMPLES}")]
    SampleCount(usize),
    #[error("closed form is not periodic: |u(0) − u(2π)| = {0:e}")]
    Seam(f64),
    #[error("resolution: {0}")]
    Resolution(String),
    #[error("basis index must be at least 1")]
    ZeroMode,
    #[error("mode {0} listed twice")]
    DuplicateMode(usize),
    #[error("base level k₀ must be at least 1")]
    ZeroBaseLevel,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Element of the real Fourier basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "frequency", rename_all = "lowercase")]
pub enum BasisMode {
    #[serde(rename = "const")]
    Constant,
    Cos(u32),
    Sin(u32),
}

impl BasisMode {
    /// Mode with 1-based index `mu`.
    pub fn from_index(mu: usize) -> Option<Self> {
        match mu {
            0 => None,
            1 => Some(BasisMode::Constant),
            _ if mu % 2 == 0 => Some(BasisMode::Cos((mu / 2) as u32)),
            _ => Some(BasisMode::Sin((mu / 2) as u32)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            BasisMode::Constant => 1,
            BasisMode::Cos(m) => 2 * m as usize,
            BasisMode::Sin(m) => 2 * m as usize + 1,
        }
    }

    pub fn frequency(self) -> u32 {
        match self {
            BasisMode::Constant => 0,
            BasisMode::Cos(m) | BasisMode::Sin(m) => m,
        }
    }

    /// Laplace eigenvalue `m²`.
    pub fn eigenvalue(self) -> f64 {
        let m = self.frequency() as f64;
        m * m
    }

    pub fn type_name(self) -> &'static str {
        match self {
            BasisMode::Constant => "const",
            BasisMode::Cos(_) => "cos",
            BasisMode::Sin(_) => "sin",
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            BasisMode::Constant => 1.0 / (2.0 * PI).sqrt(),
            BasisMode::Cos(m) => (m as f64 * t).cos() / PI.sqrt(),
            BasisMode::Sin(m) => (m as f64 * t).sin() / PI.sqrt(),
        }
    }

    /// Samples at `t_j = 2πj/n`, reducing `m·j mod n` in integers first.
    pub fn sample(self, n: usize) -> Vec<f64> {
        let m = self.frequency() as usize;
        (0..n)
            .map(|j| {
                let angle = 2.0 * PI * ((m * j) % n) as f64 / n as f64;
                match self {
                    BasisMode::Constant => 1.0 / (2.0 * PI).sqrt(),
                    BasisMode::Cos(_) => angle.cos() / PI.sqrt(),
                    BasisMode::Sin(_) => angle.sin() / PI.sqrt(),
                }
            })
            .collect()
    }
}

/// `Σ_{j=0}^{k} λ^j`, the `Δ^{k,2}` weight of an eigenmode.
pub fn level_weight(lambda: f64, k: u32) -> f64 {
    (0..=k).fold((0.0, 1.0), |(sum, p), _| (sum + p, p * lambda)).0
}

/// A real function on the circle.
#[derive(Clone)]
pub enum CircleFunction {
    ClosedForm(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Values at `t_j = 2πj/n`.
    Samples(Vec<f64>),
}

impl fmt::Debug for CircleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleFunction::ClosedForm(_) => f.write_str("CircleFunction::ClosedForm(..)"),
            CircleFunction::Samples(s) => write!(f, "CircleFunction::Samples({} values)", s.len()),
        }
    }
}

impl CircleFunction {
    pub fn closed_form<F>(u: F) -> Result<Self, FourierError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let gap = (u(0.0) - u(2.0 * PI)).abs();
        if !(gap <= SEAM_TOLERANCE) {
            return Err(FourierError::Seam(gap));
        }
        Ok(CircleFunction::ClosedForm(Arc::new(u)))
    }

    pub fn samples(values: Vec<f64>) -> Result<Self, FourierError> {
        if values.len() < MIN_SAMPLES || !values.len().is_power_of_two() {
            return Err(FourierError::SampleCount(values.len()));
        }
        Ok(CircleFunction::Samples(values))
    }

    /// Sample count used to resolve `max_frequency`.
    fn sample_count(&self, max_frequency: usize) -> Result<usize, FourierError> {
        let needed = 4 * max_frequency;
        match self {
            CircleFunction::ClosedForm(_) => Ok(needed.max(MIN_SAMPLES).next_power_of_two()),
            CircleFunction::Samples(s) if s.len() >= needed => Ok(s.len()),
            CircleFunction::Samples(s) => Err(FourierError::Resolution(format!(
                "{} samples cannot resolve frequency {max_frequency} (need at least {needed})",
                s.len()
            ))),
        }
    }

    fn sampled(&self, n: usize) -> Vec<f64> {
        match self {
            CircleFunction::ClosedForm(u) => {
                (0..n).map(|j| u(2.0 * PI * j as f64 / n as f64)).collect()
            }
            CircleFunction::Samples(s) => s.clone(),
        }
    }
}

fn forward(samples: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn inverse(mut spectrum: Vec<Complex<f64>>) -> Vec<f64> {
    let n = spectrum.len();
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    spectrum.into_iter().map(|z| z.re / n as f64).collect()
}

/// Signed angular frequency of DFT bin `k`.
fn bin_frequency(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Symbol of the term operator `∇^{j mod 2} Δ^{⌊j/2⌋}` of the `Δ^{k,2}`
/// product at DFT bin `k`: `(iω)^{j mod 2} ω^{2⌊j/2⌋}`.
fn term_symbol(k: usize, n: usize, j: u32) -> Complex<f64> {
    if j % 2 == 1 && k == n / 2 {
        return Complex::new(0.0, 0.0);
    }
    let w = bin_frequency(k, n);
    let mut factor = Complex::new(w.powi(2 * (j / 2) as i32), 0.0);
    if j % 2 == 1 {
        factor *= Complex::new(0.0, w);
    }
    factor
}

/// Applies the `j`-th term operator spectrally.
fn term_operator(samples: &[f64], j: u32) -> Vec<f64> {
    if j == 0 {
        return samples.to_vec();
    }
    let n = samples.len();
    let mut spec = forward(samples);
    for (k, z) in spec.iter_mut().enumerate() {
        *z *= term_symbol(k, n, j);
    }
    inverse(spec)
}

/// `d^j u/dt^j` by spectral differentiation.
pub fn spectral_derivative(samples: &[f64], order: u32) -> Vec<f64> {
    if order == 0 {
        return samples.to_vec();
    }
    let n = samples.len();
    let mut spec = forward(samples);
    for (k, z) in spec.iter_mut().enumerate() {
        if order % 2 == 1 && k == n / 2 {
            *z = Complex::new(0.0, 0.0);
            continue;
        }
        *z *= Complex::new(0.0, bin_frequency(k, n)).powu(order);
    }
    inverse(spec)
}

/// Trapezoidal `∫₀^{2π} u v dt` on a uniform periodic grid.
pub fn quadrature(u: &[f64], v: &[f64]) -> f64 {
    let h = 2.0 * PI / u.len() as f64;
    h * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
}

/// `⟨u, v⟩_{Δ^{k,2}} = Σ_{j ≤ k} ⟨∇^{j mod 2}Δ^{⌊j/2⌋}u, ∇^{j mod 2}Δ^{⌊j/2⌋}v⟩_{L²}`
/// by quadrature of spectrally differentiated samples.
pub fn delta_product(u: &[f64], v: &[f64], k: u32) -> f64 {
    (0..=k)
        .map(|j| quadrature(&term_operator(u, j), &term_operator(v, j)))
        .sum()
}

/// Coordinates with respect to the orthonormal basis, up to frequency `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    pub constant: f64,
    /// `cos[m-1]` multiplies `cos(mt)/√π`.
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierCoefficients {
    pub fn zeros(max_frequency: usize) -> Self {
        FourierCoefficients {
            constant: 0.0,
            cos: vec![0.0; max_frequency],
            sin: vec![0.0; max_frequency],
        }
    }

    /// Unit vector along `mode`.
    pub fn mode(mode: BasisMode, max_frequency: usize) -> Self {
        let mut c = Self::zeros(max_frequency.max(mode.frequency() as usize));
        c.set(mode, 1.0);
        c
    }

    pub fn max_frequency(&self) -> usize {
        self.cos.len()
    }

    /// Number of basis functions, `2K + 1`.
    pub fn len(&self) -> usize {
        2 * self.max_frequency() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, mode: BasisMode) -> f64 {
        match mode {
            BasisMode::Constant => self.constant,
            BasisMode::Cos(m) => self.cos.get(m as usize - 1).copied().unwrap_or(0.0),
            BasisMode::Sin(m) => self.sin.get(m as usize - 1).copied().unwrap_or(0.0),
        }
    }

    pub fn set(&mut self, mode: BasisMode, value: f64) {
        match mode {
            BasisMode::Constant => self.constant = value,
            BasisMode::Cos(m) => self.cos[m as usize - 1] = value,
            BasisMode::Sin(m) => self.sin[m as usize - 1] = value,
        }
    }

    /// `(mode, coefficient)` in basis-index order.
    pub fn iter(&self) -> impl Iterator<Item = (BasisMode, f64)> + '_ {
        (1..=self.len()).map(move |mu| {
            let mode = BasisMode::from_index(mu).expect("mu ≥ 1");
            (mode, self.get(mode))
        })
    }

    /// Coefficients in basis-index order.
    pub fn to_vec(&self) -> Vec<f64> {
        self.iter().map(|(_, c)| c).collect()
    }

    /// `Σ_μ (Σ_{j≤k} λ_μ^j) c_μ²`; `k = 0` is the L² norm squared.
    pub fn weighted_norm_squared(&self, k: u32) -> f64 {
        self.iter().map(|(m, c)| level_weight(m.eigenvalue(), k) * c * c).sum()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.iter().map(|(m, c)| c * m.eval(t)).sum()
    }

    /// Reconstruction sampled on `n` points.
    pub fn synthesize(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (mode, c) in self.iter().filter(|(_, c)| *c != 0.0) {
            for (o, s) in out.iter_mut().zip(mode.sample(n)) {
                *o += c * s;
            }
        }
        out
    }

    /// The band-limited function with these coefficients.
    pub fn to_function(&self) -> CircleFunction {
        let c = self.clone();
        CircleFunction::ClosedForm(Arc::new(move |t| c.eval(t)))
    }

    pub fn scaled_sum(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        let k = self.max_frequency().max(other.max_frequency());
        let mut out = Self::zeros(k);
        for mu in 1..=2 * k + 1 {
            let mode = BasisMode::from_index(mu).expect("mu ≥ 1");
            out.set(mode, alpha * self.get(mode) + beta * other.get(mode));
        }
        out
    }

    /// Writes `mode,type,frequency,value` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), FourierError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["mode", "type", "frequency", "value"])?;
        for (mode, c) in self.iter() {
            out.write_record([
                mode.index().to_string(),
                mode.type_name().to_string(),
                mode.frequency().to_string(),
                sig(c),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Full coefficient set from `n` samples, frequencies below `n/2`.
fn coefficients_from_samples(samples: &[f64], max_frequency: usize) -> FourierCoefficients {
    let n = samples.len();
    let spec = forward(samples);
    let scale = 2.0 * PI.sqrt() / n as f64;
    FourierCoefficients {
        constant: (2.0 * PI).sqrt() / n as f64 * spec[0].re,
        cos: (1..=max_frequency).map(|m| scale * spec[m].re).collect(),
        sin: (1..=max_frequency).map(|m| -scale * spec[m].im).collect(),
    }
}

/// Coefficients of the first `2K + 1` basis functions.
pub fn analyze(u: &CircleFunction, max_frequency: usize) -> Result<FourierCoefficients, FourierError> {
    let n = u.sample_count(max_frequency)?;
    Ok(coefficients_from_samples(&u.sampled(n), max_frequency))
}

/// `Δ^{k,2}` Gram matrix of the listed basis functions, computed by
/// quadrature with spectral derivatives.
pub fn gram_matrix(modes: &[usize], k: u32) -> Result<DMatrix<f64>, FourierError> {
    let mut seen = std::collections::HashSet::new();
    let basis = modes
        .iter()
        .map(|&mu| {
            if !seen.insert(mu) {
                return Err(FourierError::DuplicateMode(mu));
            }
            BasisMode::from_index(mu).ok_or(FourierError::ZeroMode)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let top = basis.iter().map(|m| m.frequency() as usize).max().unwrap_or(0);
    let n = (4 * (top + 1)).max(MIN_SAMPLES).next_power_of_two();

    // Spectra of the basis samples, chopped at roundoff level so that
    // distinct modes have disjoint support.
    let spectra: Vec<Vec<Complex<f64>>> = basis
        .iter()
        .map(|m| {
            let mut spec = forward(&m.sample(n));
            let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let chop = |x: f64| if x.abs() < GRAM_CHOP * peak { 0.0 } else { x };
            for z in spec.iter_mut() {
                *z = Complex::new(chop(z.re), chop(z.im));
            }
            spec
        })
        .collect();
    // Trapezoidal quadrature (2π/N)Σ u_i v_i evaluated through the discrete
    // Parseval identity as (2π/N²) Re Σ U_k conj(V_k).
    let scale = 2.0 * PI / (n as f64 * n as f64);
    let size = basis.len();
    let mut g = DMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            let mut v = 0.0;
            for j in 0..=k {
                v += spectra[a]
                    .iter()
                    .zip(&spectra[b])
                    .enumerate()
                    .filter(|(_, (x, y))| x.norm_sqr() > 0.0 && y.norm_sqr() > 0.0)
                    .map(|(bin, (x, y))| {
                        let s = term_symbol(bin, n, j);
                        (x * s * (y * s).conj()).re
                    })
                    .sum::<f64>();
            }
            g[(a, b)] = scale * v;
            g[(b, a)] = scale * v;
        }
    }
    Ok(g)
}

/// Weighted sequence coordinates of `ψ`:
/// `x_μ = (ψ, φ_μ)_{Δ^{k₀,2}} / √(Σ_{j≤k₀} λ_μ^j)`.
///
/// The basis is `Δ^{k₀,2}`-orthogonal with `(φ_μ, φ_μ) = Σ_{j≤k₀} λ_μ^j`,
/// so the pairing is that weight times the L² coefficient.
pub fn phi_map(psi: &FourierCoefficients, k0: u32) -> Result<Vec<f64>, FourierError> {
    if k0 == 0 {
        return Err(FourierError::ZeroBaseLevel);
    }
    Ok(psi
        .iter()
        .map(|(mode, c)| {
            let w = level_weight(mode.eigenvalue(), k0);
            w * c / w.sqrt()
        })
        .collect())
}

/// Norms of one level computed two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelNorms {
    pub k: u32,
    /// `√(Σ_{j≤k} ‖u^{(j)}‖²_{L²})` from spectrally differentiated samples.
    pub derivative_norm: f64,
    /// `√(Σ_μ (Σ_{j≤k} λ_μ^j) c_μ²)` from the coefficients.
    pub weight_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevReport {
    pub max_frequency: usize,
    pub samples: usize,
    pub levels: Vec<LevelNorms>,
}

impl SobolevReport {
    /// Largest `|ratio − 1|` over all levels.
    pub fn max_deviation(&self) -> f64 {
        self.levels.iter().map(|l| (l.ratio - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// `W^{k,2}` versus weight-formula norms for `k = 0..=k_max`.
pub fn sobolev_report(
    u: &CircleFunction,
    k_max: u32,
    max_frequency: usize,
) -> Result<SobolevReport, FourierError> {
    let n = u.sample_count(max_frequency)?;
    let samples = u.sampled(n);
    let full = coefficients_from_samples(&samples, n / 2 - 1);
    let total = full.weighted_norm_squared(k_max);
    let kept = FourierCoefficients {
        constant: full.constant,
        cos: full.cos[..max_frequency].to_vec(),
        sin: full.sin[..max_frequency].to_vec(),
    };
    let tail = (total - kept.weighted_norm_squared(k_max)).max(0.0);
    if total > 0.0 && (tail / total).sqrt() >= TAIL_TOLERANCE {
        return Err(FourierError::Resolution(format!(
            "frequencies above {max_frequency} carry {:e} of the level-{k_max} norm",
            (tail / total).sqrt()
        )));
    }

    let mut derivative_sq = 0.0;
    let levels = (0..=k_max)
        .map(|k| {
            let d = spectral_derivative(&samples, k);
            derivative_sq += quadrature(&d, &d);
            let derivative_norm = derivative_sq.sqrt();
            let weight_norm = kept.weighted_norm_squared(k).sqrt();
            let ratio = if weight_norm == 0.0 && derivative_norm == 0.0 {
                1.0
            } else {
                derivative_norm / weight_norm
            };
            LevelNorms { k, derivative_norm, weight_norm, ratio }
        })
        .collect();
    Ok(SobolevReport { max_frequency, samples: n, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn mode_indexing() {
        for mu in 1..200 {
            assert_eq!(BasisMode::from_index(mu).unwrap().index(), mu);
        }
        assert_eq!(BasisMode::from_index(0), None);
        // eigenvalues follow the circle spectrum 0, 1, 1, 4, 4, ...
        let eig: Vec<f64> = (1..=7).map(|mu| BasisMode::from_index(mu).unwrap().eigenvalue()).collect();
        assert_eq!(eig, vec![0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0]);
    }

    #[test]
    fn analyze_examples() {
        let c = analyze(&CircleFunction::closed_form(f64::cos).unwrap(), 8).unwrap();
        assert!(close(c.cos[0], PI.sqrt(), 1e-12));
        for (mode, v) in c.iter().filter(|(m, _)| *m != BasisMode::Cos(1)) {
            assert!(v.abs() < 1e-10, "{mode:?}: {v}");
        }

        let one = analyze(&CircleFunction::closed_form(|_| 1.0).unwrap(), 4).unwrap();
        assert!(close(one.constant, (2.0 * PI).sqrt(), 1e-12));

        let s3 = analyze(&CircleFunction::closed_form(|t| (3.0 * t).sin()).unwrap(), 8).unwrap();
        assert!(close(s3.get(BasisMode::Sin(3)), PI.sqrt(), 1e-12));
    }

    #[test]
    fn resolution_and_sample_errors() {
        let s = CircleFunction::samples(vec![0.0; 64]).unwrap();
        assert!(analyze(&s, 16).is_ok());
        assert!(matches!(analyze(&s, 17), Err(FourierError::Resolution(_))));
        assert!(matches!(CircleFunction::samples(vec![0.0; 100]), Err(FourierError::SampleCount(100))));
        assert!(matches!(CircleFunction::samples(vec![0.0; 32]), Err(FourierError::SampleCount(32))));
        assert!(matches!(CircleFunction::closed_form(|t| t), Err(FourierError::Seam(_))));
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&[4], 1).unwrap(); // cos 2t / √π
        assert!(close(g[(0, 0)], 5.0, 1e-10));
        let modes: Vec<usize> = (1..=9).collect();
        let id = gram_matrix(&modes, 0).unwrap();
        assert!((id - DMatrix::<f64>::identity(9, 9)).amax() < 1e-12);
        assert!(matches!(gram_matrix(&[2, 2], 1), Err(FourierError::DuplicateMode(2))));
        assert!(matches!(gram_matrix(&[0], 1), Err(FourierError::ZeroMode)));
    }

    #[test]
    fn phi_examples() {
        let psi = FourierCoefficients::mode(BasisMode::Cos(2), 4);
        let x = phi_map(&psi, 1).unwrap();
        for (i, v) in x.iter().enumerate() {
            if i + 1 == BasisMode::Cos(2).index() {
                assert!(close(*v, 5f64.sqrt(), 1e-14));
            } else {
                assert_eq!(*v, 0.0);
            }
        }
        assert!(phi_map(&FourierCoefficients::zeros(5), 1).unwrap().iter().all(|v| *v == 0.0));
        assert!(matches!(phi_map(&psi, 0), Err(FourierError::ZeroBaseLevel)));
    }

    #[test]
    fn phi_pairing_matches_quadrature() {
        let mut psi = FourierCoefficients::zeros(6);
        psi.set(BasisMode::Constant, 0.3);
        psi.set(BasisMode::Cos(2), -1.0);
        psi.set(BasisMode::Sin(5), 0.7);
        let n = 64;
        let samples = psi.synthesize(n);
        let x = phi_map(&psi, 2).unwrap();
        for (mu, xv) in (1..).zip(&x) {
            let mode = BasisMode::from_index(mu).unwrap();
            let pairing = delta_product(&samples, &mode.sample(n), 2);
            let w = level_weight(mode.eigenvalue(), 2);
            assert!(close(pairing / w.sqrt(), *xv, 1e-9), "μ={mu}");
        }
    }

    #[test]
    fn sobolev_examples() {
        let r = sobolev_report(&CircleFunction::closed_form(f64::cos).unwrap(), 1, 8).unwrap();
        assert!(close(r.levels[1].derivative_norm.powi(2), 2.0 * PI, 1e-10));
        assert!(close(r.levels[1].weight_norm.powi(2), 2.0 * PI, 1e-10));

        let r = sobolev_report(&CircleFunction::closed_form(|_| 1.0).unwrap(), 3, 4).unwrap();
        for l in &r.levels {
            assert!(close(l.derivative_norm, (2.0 * PI).sqrt(), 1e-12));
            assert!(close(l.weight_norm, (2.0 * PI).sqrt(), 1e-12));
        }

        let r = sobolev_report(&CircleFunction::closed_form(|t| (2.0 * t).sin()).unwrap(), 2, 8).unwrap();
        assert!(close(r.levels[2].weight_norm.powi(2), 21.0 * PI, 1e-9));
        assert!(close(r.levels[2].derivative_norm.powi(2), 21.0 * PI, 1e-9));
        assert!(r.max_deviation() < 1e-12);
    }

    #[test]
    fn sobolev_tail_guard() {
        // frequency 20 content is invisible with K = 4
        let u = CircleFunction::closed_form(|t| t.cos() + (20.0 * t).cos()).unwrap();
        assert!(matches!(sobolev_report(&u, 1, 4), Err(FourierError::Resolution(_))));
        assert!(sobolev_report(&u, 1, 20).is_ok());
    }

    #[test]
    fn level_weights() {
        assert_eq!(level_weight(4.0, 1), 5.0);
        assert_eq!(level_weight(4.0, 2), 21.0);
        assert_eq!(level_weight(0.0, 3), 1.0);
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        FourierCoefficients::mode(BasisMode::Sin(1), 1).write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "mode,type,frequency,value\n1,const,0,0\n2,cos,1,0\n3,sin,1,1\n"
        );
    }
}
