//! Exact spectra of Laplace-type operators on model manifolds and Weyl
//! exponent fitting.

mod model;
mod spectrum;
mod weyl;

use thiserror::Error;

pub use model::{BoundaryCondition, ManifoldModel};
pub use spectrum::{
    enumerate_spectrum, enumerate_up_to, merge_spectra, sphere_multiplicity, Level, Spectrum,
};
pub use weyl::{fit_power_law, weyl_fit, WeylFit, DEFAULT_TAIL_FRACTION, MIN_FIT_LEN};

use crate::growth::GrowthFunction;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("cannot parse model {0}")]
    ParseModel(String),
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("spectrum is degenerate: all materialized eigenvalues are equal")]
    Degenerate,
    #[error("fit needs at least {required} entries, got {len}")]
    TooShort { len: usize, required: usize },
    #[error("tail fraction {0} is outside (0, 1]")]
    InvalidTailFraction(f64),
    #[error("entry {rank} in the fit window is {value} (not positive); shift the spectrum first")]
    NonPositiveTail { rank: usize, value: f64 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Growth function `f(μ) = λ_μ + s` with `s = max(0, 1 − λ_min)`.
///
/// The additive shift keeps every value `≥ 1` without deleting entries, so
/// indices are preserved and the class of the unbounded tail is unchanged.
pub fn shifted_growth(spectrum: &Spectrum) -> Result<GrowthFunction, SpectralError> {
    let (lo, hi) = match (spectrum.first(), spectrum.last()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(SpectralError::Degenerate),
    };
    if lo == hi {
        return Err(SpectralError::Degenerate);
    }
    let shift = (1.0 - lo).max(0.0);
    GrowthFunction::from_spectrum(spectrum.clone(), shift)
        .map_err(|e| SpectralError::InvalidSpectrum(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn shifted_circle() {
        let s = enumerate_spectrum(ManifoldModel::Circle, 7).unwrap();
        let f = shifted_growth(&s).unwrap();
        let v: Vec<f64> = (1..=7).map(|m| f.evaluate(m).unwrap()).collect();
        assert_eq!(v, vec![1.0, 2.0, 2.0, 5.0, 5.0, 10.0, 10.0]);
    }

    #[test]
    fn positive_spectrum_is_not_shifted() {
        let s = enumerate_spectrum(ManifoldModel::interval(BoundaryCondition::Dirichlet), 5).unwrap();
        let f = shifted_growth(&s).unwrap();
        assert_eq!(f.evaluate(1).unwrap(), PI * PI);
    }

    #[test]
    fn degenerate_rejected() {
        let s = enumerate_spectrum(ManifoldModel::Circle, 1).unwrap();
        assert!(matches!(shifted_growth(&s), Err(SpectralError::Degenerate)));
        assert!(matches!(shifted_growth(&Spectrum::empty()), Err(SpectralError::Degenerate)));
    }
}
