use serde::{Deserialize, Serialize};

use super::{SpectralError, Spectrum};

/// Minimum number of entries accepted by the exponent fit.
pub const MIN_FIT_LEN: usize = 100;

/// Default share of the sequence (its upper end) used by the fit.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

/// Least-squares fit of `λ_μ ≈ C·μ^q` in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylFit {
    #[serde(rename = "q")]
    pub exponent: f64,
    #[serde(rename = "C")]
    pub constant: f64,
    /// RMS of the log-space residuals over the tail window.
    pub residual: f64,
    pub tail_fraction: f64,
    /// Length of the fitted sequence.
    pub count: usize,
}

impl WeylFit {
    pub fn predict(&self, rank: usize) -> f64 {
        self.constant * (rank as f64).powf(self.exponent)
    }
}

/// Fits `values[μ-1] ≈ C·μ^q` over the last `tail_fraction` of the entries.
pub fn fit_power_law(values: &[f64], tail_fraction: f64) -> Result<WeylFit, SpectralError> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(SpectralError::InvalidTailFraction(tail_fraction));
    }
    let len = values.len();
    if len < MIN_FIT_LEN {
        return Err(SpectralError::TooShort { len, required: MIN_FIT_LEN });
    }
    let window = ((len as f64 * tail_fraction).round() as usize).clamp(2, len);
    let start = len - window;

    let mut points = Vec::with_capacity(window);
    for (i, &v) in values.iter().enumerate().skip(start) {
        if !(v > 0.0) {
            return Err(SpectralError::NonPositiveTail { rank: i + 1, value: v });
        }
        points.push((((i + 1) as f64).ln(), v.ln()));
    }

    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxx, sxy) = points.iter().fold((0.0, 0.0), |(sxx, sxy), &(x, y)| {
        let dx = x - mean_x;
        (sxx + dx * dx, sxy + dx * (y - mean_y))
    });
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum::<f64>();

    Ok(WeylFit {
        exponent: slope,
        constant: intercept.exp(),
        residual: (sse / n).sqrt(),
        tail_fraction,
        count: len,
    })
}

/// Weyl exponent of a spectrum; see [`fit_power_law`].
pub fn weyl_fit(spectrum: &Spectrum, tail_fraction: f64) -> Result<WeylFit, SpectralError> {
    fit_power_law(&spectrum.to_vec(), tail_fraction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{enumerate_spectrum, ManifoldModel};

    #[test]
    fn exact_power_law_is_recovered() {
        let v: Vec<f64> = (1..=1000).map(|m| 3.0 * (m as f64).powf(1.5)).collect();
        let fit = fit_power_law(&v, 0.5).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!((fit.constant - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn circle_exponent() {
        let s = enumerate_spectrum(ManifoldModel::Circle, 10_000).unwrap();
        let fit = weyl_fit(&s, 0.5).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn order_d_grid() {
        for n in 1..=3 {
            for d in [2, 4] {
                let model = ManifoldModel::order_d(n, d).unwrap();
                let fit = weyl_fit(&enumerate_spectrum(model, 10_000).unwrap(), 0.5).unwrap();
                assert!((fit.exponent - d as f64 / n as f64).abs() < 0.05, "{model}: {fit:?}");
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(fit_power_law(&[1.0; 50], 0.5), Err(SpectralError::TooShort { .. })));
        assert!(matches!(
            fit_power_law(&[1.0; 200], 0.0),
            Err(SpectralError::InvalidTailFraction(_))
        ));
        let mut v = vec![1.0; 200];
        v[150] = 0.0;
        assert!(matches!(
            fit_power_law(&v, 0.5),
            Err(SpectralError::NonPositiveTail { rank: 151, .. })
        ));
        // zero eigenvalue outside the window is fine
        let circle = enumerate_spectrum(ManifoldModel::Circle, 200).unwrap();
        assert!(weyl_fit(&circle, 0.5).is_ok());
        assert!(weyl_fit(&circle, 1.0).is_err());
    }

    #[test]
    fn json_field_names() {
        let fit = WeylFit { exponent: 2.0, constant: 0.25, residual: 0.0, tail_fraction: 0.5, count: 100 };
        let v = serde_json::to_value(fit).unwrap();
        for key in ["q", "C", "residual", "tail_fraction", "count"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
