//! Growth functions `f: ℕ → (0, ∞)`, their equivalence classes and the
//! `*`-operation.
//!
//! "Monotone" is read as nondecreasing throughout: spectra repeat
//! eigenvalues. Indices are 1-based to match `μ ∈ ℕ`.

mod class;
mod star;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::spectral::Spectrum;

pub use class::{
    equivalent, leq_class, star_class, ClassBasis, EquivalenceMode, EquivalenceVerdict,
    GrowthClass, EXACT_EXPONENT_TOLERANCE, FITTED_EXPONENT_TOLERANCE,
};
pub use star::{idempotency_check, star, IdempotencyReport, Source, StarMerge};

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("growth functions are defined on μ ≥ 1; got μ = 0")]
    ZeroIndex,
    #[error("value at μ = {requested} is not materialized (only {available} values available)")]
    NotMaterialized { requested: usize, available: usize },
    #[error("requested {requested} merged values but only {achieved} are determined by the inputs")]
    Truncated { requested: usize, achieved: usize },
    #[error("invalid growth function: {0}")]
    Invalid(String),
    #[error("unsupported class: {0}")]
    UnsupportedClass(String),
    #[error("cannot classify: {0}")]
    Unclassifiable(String),
    #[error(
        "idempotency bound violated at μ = {mu}: f*f = {value} outside [{lower}, {upper}]"
    )]
    IdempotencyViolation { mu: usize, value: f64, lower: f64, upper: f64 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The power law `coefficient · μ^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub coefficient: f64,
    pub exponent: f64,
}

impl PowerLaw {
    pub fn eval(&self, mu: usize) -> f64 {
        self.coefficient * int_pow(mu as f64, self.exponent)
    }
}

/// `x^p` using repeated multiplication when `p` is a small integer.
fn int_pow(x: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p.abs() <= 64.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    PowerLaw,
    SpectrumBacked,
    ExplicitPrefix,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    PowerLaw(PowerLaw),
    SpectrumBacked { spectrum: Arc<Spectrum>, shift: f64, power: u32 },
    ExplicitPrefix { values: Arc<[f64]>, tail: Option<PowerLaw>, power: u32 },
}

/// A monotone positive sequence, either symbolic or backed by stored values.
///
/// Values are immutable and cheap to clone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "Value")]
pub struct GrowthFunction {
    repr: Repr,
}

impl GrowthFunction {
    /// `coefficient · μ^exponent` with both parameters positive.
    pub fn power_law(coefficient: f64, exponent: f64) -> Result<Self, GrowthError> {
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(GrowthError::Invalid(format!("coefficient {coefficient} must be positive")));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(GrowthError::Invalid(format!("exponent {exponent} must be positive")));
        }
        Ok(GrowthFunction { repr: Repr::PowerLaw(PowerLaw { coefficient, exponent }) })
    }

    /// `μ ↦ μ^exponent`.
    pub fn monomial(exponent: f64) -> Result<Self, GrowthError> {
        Self::power_law(1.0, exponent)
    }

    /// `μ ↦ λ_μ + shift`, which must be positive on the materialized range.
    pub fn from_spectrum(spectrum: Spectrum, shift: f64) -> Result<Self, GrowthError> {
        if !(shift >= 0.0 && shift.is_finite()) {
            return Err(GrowthError::Invalid(format!("shift {shift} must be nonnegative")));
        }
        if let Some(lo) = spectrum.first() {
            if !(lo + shift > 0.0) {
                return Err(GrowthError::Invalid(format!(
                    "λ_1 + shift = {} is not positive",
                    lo + shift
                )));
            }
        }
        Ok(GrowthFunction {
            repr: Repr::SpectrumBacked { spectrum: Arc::new(spectrum), shift, power: 1 },
        })
    }

    /// Stored positive nondecreasing values, optionally continued by a
    /// declared power-law tail for `μ` beyond the prefix.
    pub fn explicit(values: Vec<f64>, tail: Option<PowerLaw>) -> Result<Self, GrowthError> {
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GrowthError::Invalid(format!("value at μ = {} is {v}", i + 1)));
            }
            if i > 0 && values[i - 1] > v {
                return Err(GrowthError::Invalid(format!(
                    "values decrease at μ = {}: {} > {v}",
                    i + 1,
                    values[i - 1]
                )));
            }
        }
        if let Some(t) = tail {
            Self::power_law(t.coefficient, t.exponent)?;
        }
        Ok(GrowthFunction { repr: Repr::ExplicitPrefix { values: values.into(), tail, power: 1 } })
    }

    pub fn kind(&self) -> GrowthKind {
        match self.repr {
            Repr::PowerLaw(_) => GrowthKind::PowerLaw,
            Repr::SpectrumBacked { .. } => GrowthKind::SpectrumBacked,
            Repr::ExplicitPrefix { .. } => GrowthKind::ExplicitPrefix,
        }
    }

    pub fn as_power_law(&self) -> Option<PowerLaw> {
        match self.repr {
            Repr::PowerLaw(p) => Some(p),
            _ => None,
        }
    }

    /// Declared tail of an explicit prefix, raised to the stored power.
    pub fn declared_tail(&self) -> Option<PowerLaw> {
        match &self.repr {
            Repr::ExplicitPrefix { tail: Some(t), power, .. } => Some(PowerLaw {
                coefficient: t.coefficient.powi(*power as i32),
                exponent: t.exponent * *power as f64,
            }),
            _ => None,
        }
    }

    pub fn spectrum(&self) -> Option<&Spectrum> {
        match &self.repr {
            Repr::SpectrumBacked { spectrum, .. } => Some(spectrum),
            _ => None,
        }
    }

    /// Number of values that can be evaluated; `None` when unlimited.
    pub fn materialized_len(&self) -> Option<usize> {
        match &self.repr {
            Repr::PowerLaw(_) => None,
            Repr::SpectrumBacked { spectrum, .. } => Some(spectrum.len()),
            Repr::ExplicitPrefix { tail: Some(_), .. } => None,
            Repr::ExplicitPrefix { values, tail: None, .. } => Some(values.len()),
        }
    }

    /// True for `f^0 ≡ 1`, which is only meaningful as the level-0 weight.
    pub fn is_bounded(&self) -> bool {
        match &self.repr {
            Repr::PowerLaw(p) => p.exponent == 0.0,
            Repr::SpectrumBacked { power, .. } | Repr::ExplicitPrefix { power, .. } => *power == 0,
        }
    }

    /// `f(μ)` for `μ ≥ 1`.
    pub fn evaluate(&self, mu: usize) -> Result<f64, GrowthError> {
        if mu == 0 {
            return Err(GrowthError::ZeroIndex);
        }
        match &self.repr {
            Repr::PowerLaw(p) => Ok(p.eval(mu)),
            Repr::SpectrumBacked { spectrum, shift, power } => spectrum
                .value(mu)
                .map(|v| (v + shift).powi(*power as i32))
                .ok_or(GrowthError::NotMaterialized { requested: mu, available: spectrum.len() }),
            Repr::ExplicitPrefix { values, tail, power } => {
                let base = match (values.get(mu - 1), tail) {
                    (Some(&v), _) => v,
                    (None, Some(t)) => t.eval(mu),
                    (None, None) => {
                        return Err(GrowthError::NotMaterialized {
                            requested: mu,
                            available: values.len(),
                        })
                    }
                };
                Ok(base.powi(*power as i32))
            }
        }
    }

    /// Iterator over `f(1), f(2), …` that stops where the function stops
    /// being materialized.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (1..).map_while(move |mu| self.evaluate(mu).ok())
    }

    /// `f(1..=n)`, or an error if fewer values exist.
    pub fn prefix(&self, n: usize) -> Result<Vec<f64>, GrowthError> {
        if let Some(avail) = self.materialized_len() {
            if avail < n {
                return Err(GrowthError::NotMaterialized { requested: n, available: avail });
            }
        }
        (1..=n).map(|mu| self.evaluate(mu)).collect()
    }

    /// Pointwise power `f^k`; `k = 0` yields the bounded constant 1.
    pub fn power(&self, k: u32) -> GrowthFunction {
        let repr = match &self.repr {
            Repr::PowerLaw(p) => {
                if k == 0 {
                    Repr::PowerLaw(PowerLaw { coefficient: 1.0, exponent: 0.0 })
                } else {
                    Repr::PowerLaw(PowerLaw {
                        coefficient: p.coefficient.powi(k as i32),
                        exponent: p.exponent * k as f64,
                    })
                }
            }
            Repr::SpectrumBacked { spectrum, shift, power } => Repr::SpectrumBacked {
                spectrum: Arc::clone(spectrum),
                shift: *shift,
                power: power * k,
            },
            Repr::ExplicitPrefix { values, tail, power } => Repr::ExplicitPrefix {
                values: Arc::clone(values),
                tail: *tail,
                power: power * k,
            },
        };
        GrowthFunction { repr }
    }

    /// Checks membership in the set of growth functions on the first
    /// `horizon` values: positive, nondecreasing, and carrying an
    /// unboundedness certificate.
    pub fn check_membership(&self, horizon: usize) -> Result<(), GrowthError> {
        if self.is_bounded() {
            return Err(GrowthError::Invalid("f^0 is bounded".into()));
        }
        if let Repr::SpectrumBacked { spectrum, .. } = &self.repr {
            if spectrum.first() == spectrum.last() {
                return Err(GrowthError::Invalid("constant spectrum".into()));
            }
        }
        if let Repr::ExplicitPrefix { tail: None, .. } = &self.repr {
            return Err(GrowthError::Invalid(
                "explicit prefix without a declared tail has no unboundedness certificate".into(),
            ));
        }
        let mut prev = 0.0;
        for (i, v) in self.values().take(horizon).enumerate() {
            if !(v > 0.0) || v < prev {
                return Err(GrowthError::Invalid(format!("f({}) = {v} after {prev}", i + 1)));
            }
            prev = v;
        }
        Ok(())
    }
}

impl From<GrowthFunction> for Value {
    fn from(f: GrowthFunction) -> Value {
        match f.repr {
            Repr::PowerLaw(p) => json!({
                "kind": GrowthKind::PowerLaw,
                "params": p,
            }),
            Repr::SpectrumBacked { spectrum, shift, power } => json!({
                "kind": GrowthKind::SpectrumBacked,
                "params": { "shift": shift, "power": power, "spectrum": *spectrum },
            }),
            Repr::ExplicitPrefix { values, tail, power } => json!({
                "kind": GrowthKind::ExplicitPrefix,
                "params": { "power": power, "tail": tail },
                "prefix": &*values,
            }),
        }
    }
}

#[derive(Deserialize)]
struct SpectrumParams {
    shift: f64,
    #[serde(default = "one")]
    power: u32,
    spectrum: Spectrum,
}

#[derive(Deserialize)]
struct PrefixParams {
    #[serde(default = "one")]
    power: u32,
    #[serde(default)]
    tail: Option<PowerLaw>,
}

fn one() -> u32 {
    1
}

impl TryFrom<Value> for GrowthFunction {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, Self::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: GrowthKind,
            #[serde(default)]
            params: Value,
            #[serde(default)]
            prefix: Option<Vec<f64>>,
        }
        let raw: Raw = serde_json::from_value(v).map_err(|e| e.to_string())?;
        let err = |e: GrowthError| e.to_string();
        match raw.kind {
            GrowthKind::PowerLaw => {
                let p: PowerLaw = serde_json::from_value(raw.params).map_err(|e| e.to_string())?;
                if p.exponent == 0.0 && p.coefficient == 1.0 {
                    return Ok(GrowthFunction { repr: Repr::PowerLaw(p) });
                }
                GrowthFunction::power_law(p.coefficient, p.exponent).map_err(err)
            }
            GrowthKind::SpectrumBacked => {
                let p: SpectrumParams =
                    serde_json::from_value(raw.params).map_err(|e| e.to_string())?;
                let f = GrowthFunction::from_spectrum(p.spectrum, p.shift).map_err(err)?;
                Ok(if p.power == 1 { f } else { f.power(p.power) })
            }
            GrowthKind::ExplicitPrefix => {
                let p: PrefixParams = if raw.params.is_null() {
                    PrefixParams { power: 1, tail: None }
                } else {
                    serde_json::from_value(raw.params).map_err(|e| e.to_string())?
                };
                let values = raw.prefix.ok_or("explicit_prefix requires `prefix`")?;
                let f = GrowthFunction::explicit(values, p.tail).map_err(err)?;
                Ok(if p.power == 1 { f } else { f.power(p.power) })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{enumerate_spectrum, shifted_growth, ManifoldModel};

    #[test]
    fn evaluate_power_law() {
        let f = GrowthFunction::monomial(2.0).unwrap();
        assert_eq!(f.evaluate(3).unwrap(), 9.0);
        assert_eq!(f.evaluate(5).unwrap(), 25.0);
        assert!(matches!(f.evaluate(0), Err(GrowthError::ZeroIndex)));
    }

    #[test]
    fn evaluate_spectrum_backed() {
        let s = enumerate_spectrum(ManifoldModel::Circle, 10).unwrap();
        let f = GrowthFunction::from_spectrum(s, 1.0).unwrap();
        assert_eq!(f.evaluate(1).unwrap(), 1.0);
        assert!(matches!(
            f.evaluate(11),
            Err(GrowthError::NotMaterialized { requested: 11, available: 10 })
        ));
    }

    #[test]
    fn powers() {
        let f = GrowthFunction::monomial(2.0).unwrap();
        assert_eq!(f.power(3).evaluate(2).unwrap(), 64.0);
        assert_eq!(f.power(1), f);
        let zero = f.power(0);
        assert!(zero.is_bounded());
        assert_eq!(zero.evaluate(17).unwrap(), 1.0);
        assert!(zero.check_membership(10).is_err());

        let g = shifted_growth(&enumerate_spectrum(ManifoldModel::Circle, 50).unwrap()).unwrap();
        for mu in 1..=50 {
            let lhs = g.power(5).evaluate(mu).unwrap();
            let rhs = g.power(2).evaluate(mu).unwrap() * g.power(3).evaluate(mu).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(g.power(2).power(3), g.power(6));
    }

    #[test]
    fn map_reindex_exponent() {
        // growth of H[j] for Map(N, ℝ): (μ^{2/n})^j = μ^{2j/n}
        for n in 1..=4u32 {
            for j in 1..=4u32 {
                let f = GrowthFunction::monomial(2.0 / n as f64).unwrap().power(j);
                let p = f.as_power_law().unwrap();
                assert!((p.exponent - 2.0 * j as f64 / n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_validation() {
        assert!(GrowthFunction::explicit(vec![1.0, 0.5], None).is_err());
        assert!(GrowthFunction::explicit(vec![0.0, 1.0], None).is_err());
        let f = GrowthFunction::explicit(
            vec![1.0, 2.0],
            Some(PowerLaw { coefficient: 1.0, exponent: 1.0 }),
        )
        .unwrap();
        assert_eq!(f.evaluate(5).unwrap(), 5.0);
        assert!(f.check_membership(100).is_ok());
        assert!(GrowthFunction::explicit(vec![1.0, 2.0], None).unwrap().check_membership(2).is_err());
    }

    #[test]
    fn json_shapes() {
        let f = GrowthFunction::power_law(3.0, 2.0).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v, json!({"kind": "power_law", "params": {"coefficient": 3.0, "exponent": 2.0}}));

        let s = enumerate_spectrum(ManifoldModel::torus(2).unwrap(), 12).unwrap();
        let fs = [
            f.power(2),
            f.power(0),
            GrowthFunction::from_spectrum(s, 1.0).unwrap().power(3),
            GrowthFunction::explicit(vec![1.0, 1.0, 2.0], None).unwrap(),
            GrowthFunction::explicit(vec![1.0, 4.0], Some(PowerLaw { coefficient: 1.0, exponent: 2.0 }))
                .unwrap()
                .power(2),
        ];
        for f in fs {
            let text = serde_json::to_string(&f).unwrap();
            let back: GrowthFunction = serde_json::from_str(&text).unwrap();
            assert_eq!(back, f, "{text}");
        }
        let bad = json!({"kind": "power_law", "params": {"coefficient": -1.0, "exponent": 2.0}});
        assert!(serde_json::from_value::<GrowthFunction>(bad).is_err());
    }
}
