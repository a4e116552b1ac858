//! Fractal scale Hilbert spaces `ℓ^{2,f}` at finite truncation.
//!
//! Level `k` of `ℓ^{2,f}` is `ℓ²` weighted by `f^k`. Isomorphism questions
//! are decided on growth classes; no scale isomorphism is synthesized.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::growth::{
    equivalent, GrowthClass, GrowthError, GrowthFunction, EquivalenceVerdict, Source, StarMerge,
};

/// Horizon used when a class has to be fitted from values.
pub const CLASSIFY_HORIZON: usize = 10_000;

/// Horizon over which model construction checks monotonicity.
const CHECK_HORIZON: usize = 10_000;

#[derive(Debug, Error)]
pub enum ScaleError {
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error("vectors have different truncations: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("truncated vectors need at least one coordinate")]
    EmptyVector,
    #[error("reindexing factor must be at least 1")]
    ZeroReindex,
    #[error("tail start must be at least 1")]
    ZeroTailStart,
    #[error("j_max must be at least 1")]
    ZeroJMax,
    #[error("({i}, {j}) is outside Λ = {{(i, j) : i < j}}")]
    OutsideLambda { i: u32, j: u32 },
    #[error("({i}, {j}) exceeds the table bound j_max = {j_max}")]
    OutOfRange { i: u32, j: u32, j_max: u32 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// Dimension and operator order of a mapping-space model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingSpace {
    pub dimension: u32,
    pub order: u32,
}

/// `ℓ^{2,f}` identified by its growth function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalModel {
    pub label: String,
    pub growth: GrowthFunction,
    /// Smallest `k₀` with `2k₀ > n`, for mapping-space models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_offset: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping_space: Option<MappingSpace>,
}

/// Smallest natural number `k₀` with `2k₀ > n`.
pub fn base_offset(dimension: u32) -> u32 {
    dimension / 2 + 1
}

impl FractalModel {
    /// Wraps `growth`, checking it is unbounded, starts at a value `≥ 1`
    /// and is nondecreasing on its materialized prefix.
    pub fn new(label: impl Into<String>, growth: GrowthFunction) -> Result<Self, ScaleError> {
        if growth.is_bounded() {
            return Err(ScaleError::InvalidModel("growth function is bounded".into()));
        }
        let mut prev = 1.0;
        for (i, v) in growth.values().take(CHECK_HORIZON).enumerate() {
            if v < prev {
                return Err(ScaleError::InvalidModel(format!(
                    "f({}) = {v} is below {prev}; values must be nondecreasing and at least 1",
                    i + 1
                )));
            }
            prev = v;
        }
        Ok(FractalModel { label: label.into(), growth, base_offset: None, mapping_space: None })
    }

    /// `X_P(N, E)` for `dim N = n` and an operator of order `d`:
    /// `ℓ^{2,f}` with `f(μ) = μ^{d/n}`. With `d = 2` this is `Map(N, M)`.
    pub fn mapping_space(dimension: u32, order: u32) -> Result<Self, ScaleError> {
        if dimension == 0 || order == 0 {
            return Err(ScaleError::InvalidModel(format!(
                "need n ≥ 1 and d ≥ 1, got n = {dimension}, d = {order}"
            )));
        }
        let growth = GrowthFunction::monomial(order as f64 / dimension as f64)?;
        let label = if order == 2 {
            format!("Map(N^{dimension}, M)")
        } else {
            format!("X_P(N^{dimension}, E), ord P = {order}")
        };
        Ok(FractalModel {
            label,
            growth,
            base_offset: Some(base_offset(dimension)),
            mapping_space: Some(MappingSpace { dimension, order }),
        })
    }

    /// Class of the growth function (symbolic when possible).
    pub fn class(&self) -> Result<GrowthClass, ScaleError> {
        Ok(GrowthClass::classify(&self.growth, CLASSIFY_HORIZON)?)
    }
}

/// Finitely many coordinates `x₁..x_M` of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedVector(Vec<f64>);

impl TruncatedVector {
    pub fn new(coords: Vec<f64>) -> Result<Self, ScaleError> {
        if coords.is_empty() {
            return Err(ScaleError::EmptyVector);
        }
        Ok(TruncatedVector(coords))
    }

    /// `e_μ` in `M` coordinates.
    pub fn unit(len: usize, mu: usize) -> Result<Self, ScaleError> {
        let mut v = vec![0.0; len];
        *v.get_mut(mu.wrapping_sub(1)).ok_or(ScaleError::EmptyVector)? = 1.0;
        Ok(TruncatedVector(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// `⟨x, y⟩_{f^k} = Σ_{μ ≤ M} f(μ)^k x_μ y_μ`.
pub fn level_inner_product(
    model: &FractalModel,
    k: u32,
    x: &TruncatedVector,
    y: &TruncatedVector,
) -> Result<f64, ScaleError> {
    if x.len() != y.len() {
        return Err(ScaleError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    let weights = model.growth.power(k).prefix(x.len())?;
    Ok(weights
        .iter()
        .zip(x.coords().iter().zip(y.coords()))
        .map(|(w, (a, b))| w * a * b)
        .sum())
}

pub fn level_norm(model: &FractalModel, k: u32, x: &TruncatedVector) -> Result<f64, ScaleError> {
    Ok(level_inner_product(model, k, x, x)?.sqrt())
}

/// Norm of the inclusion `level k+1 → level k` restricted to coordinates
/// `μ ≥ tail_start`: `sup f^k/f^{k+1} = 1/f(tail_start)`, independent of `k`.
/// It tends to zero exactly when the inclusion is compact.
pub fn compact_inclusion_margin(
    model: &FractalModel,
    _k: u32,
    tail_start: usize,
) -> Result<f64, ScaleError> {
    if tail_start == 0 {
        return Err(ScaleError::ZeroTailStart);
    }
    Ok(1.0 / model.growth.evaluate(tail_start)?)
}

/// Classes of the two factors of a scale product and of the product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductCertificate {
    pub left: GrowthClass,
    pub right: GrowthClass,
    pub product: GrowthClass,
    /// Factor whose class the product takes; `None` when both agree.
    pub absorbing: Option<Source>,
}

/// `ℓ^{2,f₁} ⊕_sc ℓ^{2,f₂} ≅ ℓ^{2,f₁*f₂}` on a prefix of `count` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleProduct {
    pub model: FractalModel,
    /// Merge of the two growth functions; its origins are the coordinate
    /// interleaving map.
    pub merge: StarMerge,
}

impl ScaleProduct {
    /// Interleaves `(x, y)` into `z` with `z_μ = x_ν` or `y_ν` by origin.
    pub fn interleave(&self, x: &[f64], y: &[f64]) -> Option<Vec<f64>> {
        self.merge
            .origins()
            .iter()
            .map(|&(src, nu)| match src {
                Source::Left => x.get(nu - 1).copied(),
                Source::Right => y.get(nu - 1).copied(),
            })
            .collect()
    }

    /// Classes of both factors and the product. Power-law factors give a
    /// symbolic certificate; otherwise classes are fitted.
    pub fn certificate(&self, left: &FractalModel, right: &FractalModel) -> Result<ProductCertificate, ScaleError> {
        let (l, r) = (left.class()?, right.class()?);
        let product = self.model.class()?;
        let absorbing = if l.same_class(&r) {
            None
        } else if l.exponent < r.exponent {
            Some(Source::Left)
        } else {
            Some(Source::Right)
        };
        Ok(ProductCertificate { left: l, right: r, product, absorbing })
    }
}

/// Scale product of two fractal models, materialized to `count` coordinates.
pub fn scale_product(a: &FractalModel, b: &FractalModel, count: usize) -> Result<ScaleProduct, ScaleError> {
    let merge = crate::growth::star(&a.growth, &b.growth, count)?;
    let model = FractalModel::new(format!("{} ⊕ {}", a.label, b.label), merge.to_growth())?;
    Ok(ScaleProduct { model, merge })
}

/// `H[j] = {H_{jk}}_k`, i.e. `ℓ^{2,f^j}`.
pub fn reindex(model: &FractalModel, j: u32) -> Result<FractalModel, ScaleError> {
    if j == 0 {
        return Err(ScaleError::ZeroReindex);
    }
    if j == 1 {
        return Ok(model.clone());
    }
    Ok(FractalModel {
        label: format!("{}[{j}]", model.label),
        growth: model.growth.power(j),
        base_offset: model.base_offset,
        mapping_space: None,
    })
}

/// The local invariant `(i, j) ↦ [f^{j−i}]` on `Λ ∩ [0, j_max]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantTable {
    j_max: u32,
    base: GrowthClass,
}

impl InvariantTable {
    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    /// `[f]`, the entry at `(0, 1)`.
    pub fn base_class(&self) -> GrowthClass {
        self.base
    }

    pub fn get(&self, i: u32, j: u32) -> Result<GrowthClass, ScaleError> {
        if i >= j {
            return Err(ScaleError::OutsideLambda { i, j });
        }
        if j > self.j_max {
            return Err(ScaleError::OutOfRange { i, j, j_max: self.j_max });
        }
        Ok(self.base.powered(j - i))
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, GrowthClass)> + '_ {
        (0..self.j_max).flat_map(move |i| {
            ((i + 1)..=self.j_max).map(move |j| (i, j, self.base.powered(j - i)))
        })
    }
}

#[derive(Serialize)]
struct TableRepr {
    j_max: u32,
    entries: Vec<EntryRepr>,
}

#[derive(Serialize)]
struct EntryRepr {
    i: u32,
    j: u32,
    exponent: f64,
    representative: GrowthFunction,
}

impl Serialize for InvariantTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .entries()
            .map(|(i, j, c)| {
                let representative = c.representative().map_err(serde::ser::Error::custom)?;
                Ok(EntryRepr { i, j, exponent: crate::fmt::round_sig(c.exponent), representative })
            })
            .collect::<Result<Vec<_>, S::Error>>()?;
        TableRepr { j_max: self.j_max, entries }.serialize(s)
    }
}

pub fn invariant_table(model: &FractalModel, j_max: u32) -> Result<InvariantTable, ScaleError> {
    if j_max == 0 {
        return Err(ScaleError::ZeroJMax);
    }
    Ok(InvariantTable { j_max, base: model.class()? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Isomorphic,
    NotIsomorphic,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    SharedClass { class: GrowthClass },
    /// The `(0, 1)` invariant entries of the two models.
    DifferingInvariant { left: GrowthClass, right: GrowthClass },
    Undecided { reason: String, evidence: EquivalenceVerdict },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsomorphismVerdict {
    pub decision: Decision,
    pub certificate: Certificate,
}

impl IsomorphismVerdict {
    pub fn is_isomorphic(&self) -> bool {
        self.decision == Decision::Isomorphic
    }
}

/// Whether two fractal models are scale isomorphic, i.e. have equal growth
/// classes.
pub fn locally_isomorphic(a: &FractalModel, b: &FractalModel) -> IsomorphismVerdict {
    match (a.class(), b.class()) {
        (Ok(ca), Ok(cb)) if ca.same_class(&cb) => IsomorphismVerdict {
            decision: Decision::Isomorphic,
            certificate: Certificate::SharedClass { class: ca },
        },
        (Ok(ca), Ok(cb)) => IsomorphismVerdict {
            decision: Decision::NotIsomorphic,
            certificate: Certificate::DifferingInvariant { left: ca, right: cb },
        },
        (Err(e), _) | (_, Err(e)) => IsomorphismVerdict {
            decision: Decision::Undecided,
            certificate: Certificate::Undecided {
                reason: e.to_string(),
                evidence: equivalent(&a.growth, &b.growth, CLASSIFY_HORIZON),
            },
        },
    }
}
