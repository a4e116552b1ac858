//! Growth-function and scale-space specifiers.
//!
//! `power:p=P[,a=A]` is `A·μ^P`, `map:n=N[,d=D]` the mapping-space model
//! with growth `μ^{D/N}` (`D` defaults to 2). Any manifold model spec is
//! accepted as well: as a scale space it is the mapping space of its
//! dimension and operator order, as a growth function it is its shifted
//! spectrum.

use scalecalc_core::scale::FractalModel;
use scalecalc_core::spectral::{enumerate_spectrum, shifted_growth};
use scalecalc_core::{GrowthFunction, ManifoldModel};

use crate::CliError;

enum Spec {
    Power { coefficient: f64, exponent: f64 },
    Map { dimension: u32, order: u32 },
    Model(ManifoldModel),
}

fn params(body: &str) -> Result<Vec<(&str, &str)>, CliError> {
    body.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{kv}`")))
        })
        .collect()
}

fn parse(spec: &str) -> Result<Spec, CliError> {
    let bad = |msg: String| CliError::Usage(format!("{spec}: {msg}"));
    if let Some(body) = spec.strip_prefix("power:") {
        let (mut a, mut p) = (1.0, None);
        for (k, v) in params(body)? {
            let x: f64 = v.parse().map_err(|_| bad(format!("`{v}` is not a number")))?;
            match k {
                "a" => a = x,
                "p" => p = Some(x),
                _ => return Err(bad(format!("unknown parameter `{k}`"))),
            }
        }
        let exponent = p.ok_or_else(|| bad("missing p".into()))?;
        return Ok(Spec::Power { coefficient: a, exponent });
    }
    if let Some(body) = spec.strip_prefix("map:") {
        let (mut n, mut d) = (None, 2);
        for (k, v) in params(body)? {
            let x: u32 = v.parse().map_err(|_| bad(format!("`{v}` is not a natural number")))?;
            match k {
                "n" => n = Some(x),
                "d" => d = x,
                _ => return Err(bad(format!("unknown parameter `{k}`"))),
            }
        }
        let dimension = n.ok_or_else(|| bad("missing n".into()))?;
        if dimension == 0 || d == 0 {
            return Err(bad("n and d must be at least 1".into()));
        }
        return Ok(Spec::Map { dimension, order: d });
    }
    model(spec).map(Spec::Model)
}

pub fn model(spec: &str) -> Result<ManifoldModel, CliError> {
    spec.parse().map_err(|e| CliError::Usage(format!("{e}")))
}

pub fn scale_space(spec: &str) -> Result<FractalModel, CliError> {
    let built = match parse(spec)? {
        Spec::Power { coefficient, exponent } => GrowthFunction::power_law(coefficient, exponent)
            .map_err(|e| CliError::Usage(e.to_string()))
            .and_then(|g| FractalModel::new(spec, g).map_err(|e| CliError::Usage(e.to_string())))?,
        Spec::Map { dimension, order } => FractalModel::mapping_space(dimension, order)?,
        Spec::Model(m) => {
            let mut f = FractalModel::mapping_space(m.dimension(), m.order())?;
            f.label = format!("Map({m})");
            f
        }
    };
    Ok(built)
}

/// Growth function named by `spec`; spectra are enumerated to `materialize`.
pub fn growth(spec: &str, materialize: usize) -> Result<GrowthFunction, CliError> {
    match parse(spec)? {
        Spec::Power { coefficient, exponent } => {
            GrowthFunction::power_law(coefficient, exponent).map_err(|e| CliError::Usage(e.to_string()))
        }
        Spec::Map { dimension, order } => Ok(FractalModel::mapping_space(dimension, order)?.growth),
        Spec::Model(m) => {
            let s = enumerate_spectrum(m, materialize.max(2))?;
            Ok(shifted_growth(&s)?)
        }
    }
}
