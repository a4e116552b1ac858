//! Computable scale structures on mapping spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] enumerates exact Laplace-type spectra on model manifolds
//!   and fits Weyl growth exponents.
//! * [`growth`] implements growth functions, their equivalence classes and
//!   the `*`-operation (sorted merge of value multisets).
//! * [`scale`] models fractal scale Hilbert spaces `ℓ^{2,f}` at finite
//!   truncation, the local invariant table and isomorphism decisions.
//! * [`fourier`] realises the circle case concretely: Fourier coefficients,
//!   `Δ^{k,2}` Gram matrices, the coordinate map `Φ` and Sobolev norms.

pub mod fmt;
pub mod fourier;
pub mod growth;
pub mod scale;
pub mod spectral;


pub use growth::{
    EquivalenceVerdict, GrowthClass, GrowthError, GrowthFunction, IdempotencyReport, Source,
    StarMerge,
};
pub use spectral::{BoundaryCondition, ManifoldModel, Spectrum, SpectralError, WeylFit};
pub use scale::{
    FractalModel, InvariantTable, IsomorphismVerdict, ScaleError, ScaleProduct, TruncatedVector,
};
pub use fourier::{BasisMode, CircleFunction, FourierCoefficients, FourierError, SobolevReport};
