use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{GrowthError, GrowthFunction, PowerLaw};
use crate::fmt::sig;

/// Which operand of a merge a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Left,
    Right,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Left => "left",
            Source::Right => "right",
        }
    }
}

/// Prefix of `f * h`: the sorted interleaving of the value multisets of
/// `f` and `h`, with the slot each value came from.
///
/// `origins[i] = (side, ν)` means the `i+1`-th merged value is `side(ν)`;
/// this is the coordinate bijection `ℕ → ℕ ⊔ ℕ` of the scale product.
#[derive(Debug, Clone, PartialEq)]
pub struct StarMerge {
    values: Vec<f64>,
    origins: Vec<(Source, usize)>,
    tail: Option<PowerLaw>,
}

impl StarMerge {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origins(&self) -> &[(Source, usize)] {
        &self.origins
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Asymptotic tail of the merge, known when both operands are power laws.
    pub fn tail(&self) -> Option<PowerLaw> {
        self.tail
    }

    /// The merged prefix as an explicit growth function.
    pub fn to_growth(&self) -> GrowthFunction {
        GrowthFunction::explicit(self.values.clone(), self.tail)
            .expect("merge of nondecreasing positive sequences is valid")
    }

    /// Writes `index,value,source` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), GrowthError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "value", "source"])?;
        for (i, (v, (src, _))) in self.values.iter().zip(&self.origins).enumerate() {
            out.write_record([(i + 1).to_string(), sig(*v), src.name().to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Asymptotic form of `f * h` for two power laws.
///
/// Counting values below `x` gives `(x/a₁)^{1/p₁} + (x/a₂)^{1/p₂}`; the
/// smaller exponent dominates, and equal exponents combine their counts.
fn power_law_star_tail(f: PowerLaw, h: PowerLaw) -> PowerLaw {
    if f.exponent < h.exponent {
        f
    } else if h.exponent < f.exponent {
        h
    } else {
        let p = f.exponent;
        let density = f.coefficient.powf(-1.0 / p) + h.coefficient.powf(-1.0 / p);
        PowerLaw { coefficient: density.powf(-p), exponent: p }
    }
}

/// First `count` values of `f * h`.
///
/// Ties take the left value first. Merging stops as soon as either operand
/// runs out of materialized values, since later values of that operand are
/// unknown; fewer than `count` values is a [`GrowthError::Truncated`].
pub fn star(f: &GrowthFunction, h: &GrowthFunction, count: usize) -> Result<StarMerge, GrowthError> {
    let mut left = f.values().peekable();
    let mut right = h.values().peekable();
    let (mut i, mut j) = (0usize, 0usize);
    let mut values = Vec::with_capacity(count);
    let mut origins = Vec::with_capacity(count);
    while values.len() < count {
        let (a, b) = match (left.peek(), right.peek()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => break,
        };
        if a <= b {
            i += 1;
            values.push(a);
            origins.push((Source::Left, i));
            left.next();
        } else {
            j += 1;
            values.push(b);
            origins.push((Source::Right, j));
            right.next();
        }
    }
    if values.len() < count {
        return Err(GrowthError::Truncated { requested: count, achieved: values.len() });
    }
    let asymptotic = |g: &GrowthFunction| g.as_power_law().or_else(|| g.declared_tail());
    let tail = match (asymptotic(f), asymptotic(h)) {
        (Some(p), Some(q)) if p.exponent > 0.0 && q.exponent > 0.0 => Some(power_law_star_tail(p, q)),
        _ => None,
    };
    Ok(StarMerge { values, origins, tail })
}

/// Outcome of [`idempotency_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdempotencyReport {
    pub exponent: f64,
    pub horizon: usize,
    /// Smallest and largest observed `(f*f)(μ) / f(μ)`.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Checks `(1/2)^k f(μ) ≤ (f*f)(μ) ≤ 2^k f(μ)` for `f(μ) = μ^k`, `μ ≤ horizon`.
pub fn idempotency_check(f: &GrowthFunction, horizon: usize) -> Result<IdempotencyReport, GrowthError> {
    let p = f
        .as_power_law()
        .filter(|p| p.coefficient == 1.0 && p.exponent > 0.0)
        .ok_or_else(|| GrowthError::UnsupportedClass("idempotency check needs f(μ) = μ^k".into()))?;
    let merged = star(f, f, horizon)?;
    let lo = 0.5f64.powf(p.exponent);
    let hi = 2.0f64.powf(p.exponent);
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, 0.0f64);
    for (mu, &value) in (1..).zip(merged.values()) {
        let fv = p.eval(mu);
        let (lower, upper) = (lo * fv, hi * fv);
        if value < lower || value > upper {
            return Err(GrowthError::IdempotencyViolation { mu, value, lower, upper });
        }
        min_ratio = min_ratio.min(value / fv);
        max_ratio = max_ratio.max(value / fv);
    }
    Ok(IdempotencyReport { exponent: p.exponent, horizon, min_ratio, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{enumerate_spectrum, ManifoldModel};

    fn mono(p: f64) -> GrowthFunction {
        GrowthFunction::monomial(p).unwrap()
    }

    #[test]
    fn linear_star_square() {
        let m = star(&mono(1.0), &mono(2.0), 7).unwrap();
        assert_eq!(m.values(), &[1.0, 1.0, 2.0, 3.0, 4.0, 4.0, 5.0]);
        assert_eq!(m.origins()[0], (Source::Left, 1));
        assert_eq!(m.origins()[1], (Source::Right, 1));
        assert_eq!(m.origins()[5], (Source::Right, 2));
    }

    #[test]
    fn self_star_halves_index() {
        let m = star(&mono(1.0), &mono(1.0), 7).unwrap();
        assert_eq!(m.values(), &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0]);
    }

    #[test]
    fn truncation_reports_achieved_length() {
        let s = enumerate_spectrum(ManifoldModel::Circle, 5).unwrap();
        let f = GrowthFunction::from_spectrum(s, 1.0).unwrap();
        // f = 1,2,2,5,5 ; h = μ: 1,1,2,2,2,3,4,5,5 then f runs out
        match star(&f, &mono(1.0), 20) {
            Err(GrowthError::Truncated { requested: 20, achieved }) => assert_eq!(achieved, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn idempotency_examples() {
        let r = idempotency_check(&mono(2.0), 10_000).unwrap();
        assert!(r.min_ratio >= 0.25 && r.max_ratio <= 4.0);
        // f = μ, μ = 5: f*f(5) = 3 ∈ [2.5, 10]
        let m = star(&mono(1.0), &mono(1.0), 5).unwrap();
        assert_eq!(m.values()[4], 3.0);
        // f = μ³, μ = 1: f*f(1) = 1 ∈ [1/8, 8]
        assert!(idempotency_check(&mono(3.0), 1).is_ok());
        assert!(idempotency_check(&GrowthFunction::power_law(2.0, 1.0).unwrap(), 10).is_err());
    }

    #[test]
    fn power_law_tails() {
        let t = star(&mono(2.0), &mono(1.0), 3).unwrap().tail().unwrap();
        assert_eq!(t, PowerLaw { coefficient: 1.0, exponent: 1.0 });
        // μ * μ: two values per integer, f*f(μ) ≈ μ/2
        let t = star(&mono(1.0), &mono(1.0), 3).unwrap().tail().unwrap();
        assert!((t.coefficient - 0.5).abs() < 1e-15);
        // μ² * μ²: f*f(μ) ≈ (μ/2)²
        let t = star(&mono(2.0), &mono(2.0), 3).unwrap().tail().unwrap();
        assert!((t.coefficient - 0.25).abs() < 1e-15);
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        star(&mono(1.0), &mono(2.0), 3).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "index,value,source\n1,1,left\n2,1,right\n3,2,left\n"
        );
    }
}
