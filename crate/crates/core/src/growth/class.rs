use serde::{Deserialize, Serialize};

use super::{GrowthError, GrowthFunction};
use crate::spectral::{fit_power_law, DEFAULT_TAIL_FRACTION, MIN_FIT_LEN};

/// Exponents of symbolic classes closer than this are treated as equal.
pub const EXACT_EXPONENT_TOLERANCE: f64 = 1e-9;

/// Exponent agreement required when either class comes from a fit.
pub const FITTED_EXPONENT_TOLERANCE: f64 = 0.05;

/// How a class exponent was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum ClassBasis {
    /// Read off a power law or a declared tail; valid for all `μ`.
    Symbolic,
    /// Log-log fit over the tail half of the first `horizon` values.
    Fitted { horizon: usize, residual: f64 },
}

/// Equivalence class `[μ^p]` of a power-law-like growth function.
///
/// Coefficients are absorbed by the equivalence constant, so the exponent
/// is the whole class datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthClass {
    pub exponent: f64,
    #[serde(flatten)]
    pub basis: ClassBasis,
}

impl GrowthClass {
    pub fn power_law(exponent: f64) -> Self {
        GrowthClass { exponent, basis: ClassBasis::Symbolic }
    }

    /// Class of `f`: symbolic for power laws and declared tails, otherwise
    /// fitted on the first `horizon` materialized values.
    pub fn classify(f: &GrowthFunction, horizon: usize) -> Result<Self, GrowthError> {
        if f.is_bounded() {
            return Err(GrowthError::Unclassifiable("f^0 is bounded".into()));
        }
        if let Some(p) = f.as_power_law().or_else(|| f.declared_tail()) {
            return Ok(GrowthClass::power_law(p.exponent));
        }
        let n = f.materialized_len().map_or(horizon, |m| m.min(horizon));
        if n < MIN_FIT_LEN {
            return Err(GrowthError::Unclassifiable(format!(
                "only {n} values available, need {MIN_FIT_LEN}"
            )));
        }
        let values = f.prefix(n)?;
        let fit = fit_power_law(&values, DEFAULT_TAIL_FRACTION)
            .map_err(|e| GrowthError::Unclassifiable(e.to_string()))?;
        Ok(GrowthClass {
            exponent: fit.exponent,
            basis: ClassBasis::Fitted { horizon: n, residual: fit.residual },
        })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.basis, ClassBasis::Symbolic)
    }

    /// Canonical representative `μ^p`.
    pub fn representative(&self) -> Result<GrowthFunction, GrowthError> {
        GrowthFunction::monomial(self.exponent)
    }

    /// `[f^k]` from `[f]`.
    pub fn powered(&self, k: u32) -> GrowthClass {
        GrowthClass { exponent: self.exponent * k as f64, basis: self.basis }
    }

    fn tolerance(&self, other: &GrowthClass) -> f64 {
        if self.is_symbolic() && other.is_symbolic() {
            EXACT_EXPONENT_TOLERANCE
        } else {
            FITTED_EXPONENT_TOLERANCE
        }
    }

    /// Equality of classes up to the applicable exponent tolerance.
    pub fn same_class(&self, other: &GrowthClass) -> bool {
        (self.exponent - other.exponent).abs() <= self.tolerance(other)
    }
}

/// `[f₁] ≤ [f₂]`, i.e. `f₁ ≤ c·f₂` for some `c`; for power laws this is
/// `p₁ ≤ p₂`.
pub fn leq_class(a: &GrowthClass, b: &GrowthClass) -> bool {
    a.exponent <= b.exponent + a.tolerance(b)
}

/// `[f₁] * [f₂]` for symbolic power-law classes: the smaller class absorbs.
pub fn star_class(a: &GrowthClass, b: &GrowthClass) -> Result<GrowthClass, GrowthError> {
    if !(a.is_symbolic() && b.is_symbolic()) {
        return Err(GrowthError::UnsupportedClass(
            "symbolic star needs power-law classes; merge the sequences with `star` and classify".into(),
        ));
    }
    Ok(GrowthClass::power_law(a.exponent.min(b.exponent)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    SymbolicExact,
    PrefixNumeric,
}

/// Result of [`equivalent`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub related: bool,
    /// Witness `c ≥ 1` with `f/c ≤ h ≤ c·f`, when related.
    pub constant: Option<f64>,
    /// Number of indices actually compared (0 in symbolic mode).
    pub tested_prefix: usize,
    pub mode: EquivalenceMode,
}

/// Decides `f ∼ h`.
///
/// Two power laws are decided symbolically (related iff exponents agree,
/// `c` = coefficient ratio). Anything else is compared on the first `prefix`
/// values (or fewer, if fewer are materialized): `c` is the largest ratio
/// `max(f/h, h/f)` seen, and the verdict holds only on that range.
pub fn equivalent(f: &GrowthFunction, h: &GrowthFunction, prefix: usize) -> EquivalenceVerdict {
    if let (Some(p), Some(q)) = (f.as_power_law(), h.as_power_law()) {
        let related = (p.exponent - q.exponent).abs() <= EXACT_EXPONENT_TOLERANCE;
        let ratio = p.coefficient / q.coefficient;
        return EquivalenceVerdict {
            related,
            constant: related.then(|| ratio.max(1.0 / ratio)),
            tested_prefix: 0,
            mode: EquivalenceMode::SymbolicExact,
        };
    }
    let mut c = 1.0f64;
    let mut tested = 0;
    for (a, b) in f.values().zip(h.values()).take(prefix) {
        c = c.max(a / b).max(b / a);
        tested += 1;
    }
    EquivalenceVerdict {
        related: c.is_finite(),
        constant: c.is_finite().then_some(c),
        tested_prefix: tested,
        mode: EquivalenceMode::PrefixNumeric,
    }
}
