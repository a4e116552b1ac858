use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Boundary condition for the unit interval `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// Dirichlet at 0, Neumann at 1.
    Mixed,
}

impl BoundaryCondition {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Mixed => "mixed",
        }
    }
}

/// Model manifold together with its Laplace-type operator.
///
/// Geometries are fixed: circle of circumference 2π, flat torus `ℝⁿ/2πℤⁿ`,
/// unit round sphere, unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ManifoldModel {
    Circle,
    FlatTorus { dim: u32 },
    RoundSphere { dim: u32 },
    Interval { bc: BoundaryCondition },
    /// `Δ^{d/2}` on the flat torus of dimension `dim`.
    SyntheticOrderD { dim: u32, order: u32 },
}

impl ManifoldModel {
    pub fn torus(dim: u32) -> Result<Self, SpectralError> {
        ManifoldModel::FlatTorus { dim }.validated()
    }

    pub fn sphere(dim: u32) -> Result<Self, SpectralError> {
        ManifoldModel::RoundSphere { dim }.validated()
    }

    pub fn interval(bc: BoundaryCondition) -> Self {
        ManifoldModel::Interval { bc }
    }

    pub fn order_d(dim: u32, order: u32) -> Result<Self, SpectralError> {
        ManifoldModel::SyntheticOrderD { dim, order }.validated()
    }

    pub fn validated(self) -> Result<Self, SpectralError> {
        match self {
            ManifoldModel::FlatTorus { dim: 0 }
            | ManifoldModel::RoundSphere { dim: 0 }
            | ManifoldModel::SyntheticOrderD { dim: 0, .. } => Err(SpectralError::InvalidModel(
                format!("{self}: dimension must be at least 1"),
            )),
            ManifoldModel::SyntheticOrderD { order: 0, .. } => Err(SpectralError::InvalidModel(
                format!("{self}: order must be at least 1"),
            )),
            m => Ok(m),
        }
    }

    /// Dimension of the underlying manifold.
    pub fn dimension(&self) -> u32 {
        match *self {
            ManifoldModel::Circle | ManifoldModel::Interval { .. } => 1,
            ManifoldModel::FlatTorus { dim }
            | ManifoldModel::RoundSphere { dim }
            | ManifoldModel::SyntheticOrderD { dim, .. } => dim,
        }
    }

    /// Order of the operator whose spectrum is enumerated.
    pub fn order(&self) -> u32 {
        match *self {
            ManifoldModel::SyntheticOrderD { order, .. } => order,
            _ => 2,
        }
    }

    /// Weyl exponent `order / dimension` predicted for this model.
    pub fn weyl_exponent(&self) -> f64 {
        self.order() as f64 / self.dimension() as f64
    }
}

impl fmt::Display for ManifoldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldModel::Circle => write!(f, "circle"),
            ManifoldModel::FlatTorus { dim } => write!(f, "torus:{dim}"),
            ManifoldModel::RoundSphere { dim } => write!(f, "sphere:{dim}"),
            ManifoldModel::Interval { bc } => write!(f, "interval:{}", bc.name()),
            ManifoldModel::SyntheticOrderD { dim, order } => write!(f, "orderd:n={dim},d={order}"),
        }
    }
}

/// Parses `key=value` pairs separated by commas, e.g. `n=1,d=4`.
pub(crate) fn parse_params(src: &str) -> Result<Vec<(&str, &str)>, String> {
    src.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| format!("expected key=value, got `{p}`"))
        })
        .collect()
}

pub(crate) fn parse_u32(what: &str, v: &str) -> Result<u32, String> {
    v.parse::<u32>()
        .map_err(|_| format!("{what}: `{v}` is not a non-negative integer"))
}

impl FromStr for ManifoldModel {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| SpectralError::ParseModel(format!("`{s}`: {msg}"));
        let (head, rest) = match s.trim().split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s.trim(), None),
        };
        let model = match (head.to_ascii_lowercase().as_str(), rest) {
            ("circle", None) => ManifoldModel::Circle,
            ("torus", Some(r)) => ManifoldModel::FlatTorus { dim: parse_u32("dimension", r).map_err(bad)? },
            ("sphere", Some(r)) => ManifoldModel::RoundSphere { dim: parse_u32("dimension", r).map_err(bad)? },
            ("interval", Some(r)) => {
                let bc = match r.to_ascii_lowercase().as_str() {
                    "dirichlet" => BoundaryCondition::Dirichlet,
                    "neumann" => BoundaryCondition::Neumann,
                    "mixed" => BoundaryCondition::Mixed,
                    other => return Err(bad(format!("unknown boundary condition `{other}`"))),
                };
                ManifoldModel::Interval { bc }
            }
            ("orderd", Some(r)) => {
                let (mut dim, mut order) = (None, None);
                for (k, v) in parse_params(r).map_err(bad)? {
                    match k {
                        "n" => dim = Some(parse_u32("n", v).map_err(bad)?),
                        "d" => order = Some(parse_u32("d", v).map_err(bad)?),
                        other => return Err(bad(format!("unknown parameter `{other}`"))),
                    }
                }
                ManifoldModel::SyntheticOrderD {
                    dim: dim.ok_or_else(|| bad("missing n".into()))?,
                    order: order.ok_or_else(|| bad("missing d".into()))?,
                }
            }
            _ => return Err(bad("unknown model".into())),
        };
        model.validated()
    }
}

impl TryFrom<String> for ManifoldModel {
    type Error = SpectralError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ManifoldModel> for String {
    fn from(m: ManifoldModel) -> String {
        m.to_string()
    }
}
