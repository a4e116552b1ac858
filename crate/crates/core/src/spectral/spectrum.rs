use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{BoundaryCondition, ManifoldModel, SpectralError};
use crate::fmt::sig;

/// One distinct eigenvalue and the full dimension of its eigenspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// A nondecreasing eigenvalue sequence stored as levels with multiplicities.
///
/// `levels` carry full eigenspace dimensions; only the first `count` entries
/// of the expanded sequence are considered materialized, so the last level
/// may be partially materialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumRepr", into = "SpectrumRepr")]
pub struct Spectrum {
    label: String,
    model: Option<ManifoldModel>,
    levels: Vec<Level>,
    /// `cumulative[i]` = number of entries in levels `0..=i`.
    cumulative: Vec<u64>,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<ManifoldModel>,
    count: usize,
    levels: Vec<(f64, u64)>,
}

impl TryFrom<SpectrumRepr> for Spectrum {
    type Error = SpectralError;

    fn try_from(r: SpectrumRepr) -> Result<Self, Self::Error> {
        let levels = r
            .levels
            .into_iter()
            .map(|(eigenvalue, multiplicity)| Level { eigenvalue, multiplicity })
            .collect();
        let mut s = Spectrum::from_levels(r.label, levels, r.count)?;
        s.model = r.model;
        Ok(s)
    }
}

impl From<Spectrum> for SpectrumRepr {
    fn from(s: Spectrum) -> Self {
        SpectrumRepr {
            label: s.label,
            model: s.model,
            count: s.count,
            levels: s.levels.iter().map(|l| (l.eigenvalue, l.multiplicity)).collect(),
        }
    }
}

impl Spectrum {
    pub fn empty() -> Self {
        Spectrum {
            label: "empty".into(),
            model: None,
            levels: Vec::new(),
            cumulative: Vec::new(),
            count: 0,
        }
    }

    /// Builds a spectrum from levels with strictly increasing eigenvalues.
    pub fn from_levels(
        label: impl Into<String>,
        levels: Vec<Level>,
        count: usize,
    ) -> Result<Self, SpectralError> {
        let mut cumulative = Vec::with_capacity(levels.len());
        let mut total: u64 = 0;
        for (i, level) in levels.iter().enumerate() {
            if !level.eigenvalue.is_finite() {
                return Err(SpectralError::InvalidSpectrum(format!(
                    "level {i}: eigenvalue {} is not finite",
                    level.eigenvalue
                )));
            }
            if level.multiplicity == 0 {
                return Err(SpectralError::InvalidSpectrum(format!("level {i}: zero multiplicity")));
            }
            if i > 0 && levels[i - 1].eigenvalue >= level.eigenvalue {
                return Err(SpectralError::InvalidSpectrum(format!(
                    "levels must be strictly increasing: {} then {}",
                    levels[i - 1].eigenvalue, level.eigenvalue
                )));
            }
            total = total.saturating_add(level.multiplicity);
            cumulative.push(total);
        }
        if count as u64 > total {
            return Err(SpectralError::InvalidSpectrum(format!(
                "count {count} exceeds the {total} entries described by the levels"
            )));
        }
        Ok(Spectrum { label: label.into(), model: None, levels, cumulative, count })
    }

    /// Groups a nondecreasing list of values into levels.
    pub fn from_values(label: impl Into<String>, values: &[f64]) -> Result<Self, SpectralError> {
        let mut levels: Vec<Level> = Vec::new();
        for (i, &v) in values.iter().enumerate() {
            match levels.last_mut() {
                Some(last) if last.eigenvalue == v => last.multiplicity += 1,
                Some(last) if last.eigenvalue > v => {
                    return Err(SpectralError::InvalidSpectrum(format!(
                        "values must be nondecreasing: entry {} ({v}) < {}",
                        i + 1,
                        last.eigenvalue
                    )))
                }
                _ => levels.push(Level { eigenvalue: v, multiplicity: 1 }),
            }
        }
        Spectrum::from_levels(label, levels, values.len())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn model(&self) -> Option<ManifoldModel> {
        self.model
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of materialized entries, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn level_of_rank(&self, rank: usize) -> Option<usize> {
        if rank == 0 || rank > self.count {
            return None;
        }
        Some(self.cumulative.partition_point(|&c| c < rank as u64))
    }

    /// The `rank`-th eigenvalue (1-based), if materialized.
    pub fn value(&self, rank: usize) -> Option<f64> {
        self.level_of_rank(rank).map(|i| self.levels[i].eigenvalue)
    }

    /// Full multiplicity of the level containing the `rank`-th eigenvalue.
    pub fn level_multiplicity(&self, rank: usize) -> Option<u64> {
        self.level_of_rank(rank).map(|i| self.levels[i].multiplicity)
    }

    pub fn first(&self) -> Option<f64> {
        self.value(1)
    }

    pub fn last(&self) -> Option<f64> {
        self.value(self.count)
    }

    /// Materialized entries in nondecreasing order.
    pub fn expanded(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.eigenvalue, l.multiplicity as usize))
            .take(self.count)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.expanded().collect()
    }

    /// `#{μ : λ_μ ≤ bound}` over the materialized entries.
    pub fn counting(&self, bound: f64) -> usize {
        let levels = self.levels.partition_point(|l| l.eigenvalue <= bound);
        if levels == 0 {
            0
        } else {
            (self.cumulative[levels - 1] as usize).min(self.count)
        }
    }

    /// Keeps only the first `count` entries.
    pub fn truncated(&self, count: usize) -> Spectrum {
        let mut s = self.clone();
        s.count = count.min(self.count);
        s
    }

    /// Writes `rank,eigenvalue,multiplicity` rows for every materialized entry.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SpectralError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["rank", "eigenvalue", "multiplicity"])?;
        let mut rank = 0usize;
        'outer: for level in &self.levels {
            for _ in 0..level.multiplicity {
                rank += 1;
                if rank > self.count {
                    break 'outer;
                }
                out.write_record([
                    rank.to_string(),
                    sig(level.eigenvalue),
                    level.multiplicity.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Dimension of degree-`l` spherical harmonics on `Sⁿ`.
pub fn sphere_multiplicity(dim: u32, l: u64) -> u64 {
    let n = dim as i64;
    let l = l as i64;
    let m = binomial(n + l, l).saturating_sub(binomial(n + l - 2, l - 2));
    u64::try_from(m).unwrap_or(u64::MAX)
}

/// `r_n(m)` for `m ≤ max_norm`: number of `k ∈ ℤⁿ` with `|k|² = m`.
///
/// Built one coordinate at a time; each pass only visits norms already
/// reached, so the work is proportional to the number of lattice points.
fn lattice_representations(dim: u32, max_norm: usize) -> Vec<u64> {
    let mut reps = vec![0u64; max_norm + 1];
    reps[0] = 1;
    for _ in 0..dim {
        let mut next = vec![0u64; max_norm + 1];
        for (m, &c) in reps.iter().enumerate().filter(|(_, &c)| c > 0) {
            next[m] = next[m].saturating_add(c);
            for j in 1.. {
                let norm = m + j * j;
                if norm > max_norm {
                    break;
                }
                next[norm] = next[norm].saturating_add(c.saturating_mul(2));
            }
        }
        reps = next;
    }
    reps
}

fn torus_levels(dim: u32, bound: f64) -> Vec<Level> {
    if bound < 0.0 {
        return Vec::new();
    }
    if dim == 1 {
        // 0 once, then k² for ±k
        return (0u64..)
            .map(|k| (k, (k * k) as f64))
            .take_while(|&(_, lambda)| lambda <= bound)
            .map(|(k, lambda)| Level { eigenvalue: lambda, multiplicity: if k == 0 { 1 } else { 2 } })
            .collect();
    }
    let max_norm = bound.floor() as usize;
    lattice_representations(dim, max_norm)
        .into_iter()
        .enumerate()
        .filter(|&(_, r)| r > 0)
        .map(|(m, r)| Level { eigenvalue: m as f64, multiplicity: r })
        .collect()
}

/// `λ^{order/2}` for a nonnegative integer-valued torus eigenvalue.
fn order_power(lambda: f64, order: u32) -> f64 {
    let half = (order / 2) as i32;
    if order % 2 == 0 {
        lambda.powi(half)
    } else {
        lambda.powi(half) * lambda.sqrt()
    }
}

fn interval_eigenvalue(bc: BoundaryCondition, mu: u64) -> f64 {
    let x = match bc {
        BoundaryCondition::Dirichlet => mu as f64,
        BoundaryCondition::Neumann => (mu - 1) as f64,
        BoundaryCondition::Mixed => mu as f64 - 0.5,
    };
    (PI * x) * (PI * x)
}

/// All levels with eigenvalue `≤ bound`, with full multiplicities.
fn levels_up_to(model: ManifoldModel, bound: f64) -> Vec<Level> {
    match model {
        ManifoldModel::Circle => torus_levels(1, bound),
        ManifoldModel::FlatTorus { dim } => torus_levels(dim, bound),
        ManifoldModel::RoundSphere { dim } => {
            let n = dim as f64;
            (0u64..)
                .map(|l| (l, l as f64 * (l as f64 + n - 1.0)))
                .take_while(|&(_, lambda)| lambda <= bound)
                .map(|(l, lambda)| Level { eigenvalue: lambda, multiplicity: sphere_multiplicity(dim, l) })
                .collect()
        }
        ManifoldModel::Interval { bc } => (1u64..)
            .map(|mu| interval_eigenvalue(bc, mu))
            .take_while(|&lambda| lambda <= bound)
            .map(|lambda| Level { eigenvalue: lambda, multiplicity: 1 })
            .collect(),
        ManifoldModel::SyntheticOrderD { dim, order } => {
            let torus_bound = if bound < 0.0 { -1.0 } else { bound.powf(2.0 / order as f64) };
            torus_levels(dim, torus_bound.ceil())
                .into_iter()
                .map(|l| Level { eigenvalue: order_power(l.eigenvalue, order), ..l })
                .filter(|l| l.eigenvalue <= bound)
                .collect()
        }
    }
}

fn build(model: ManifoldModel, levels: Vec<Level>, count: usize) -> Result<Spectrum, SpectralError> {
    let mut s = Spectrum::from_levels(model.to_string(), levels, count)?;
    s.model = Some(model);
    Ok(s)
}

/// First `count` eigenvalues (with multiplicity) of the model operator.
pub fn enumerate_spectrum(model: ManifoldModel, count: usize) -> Result<Spectrum, SpectralError> {
    let model = model.validated()?;
    if count == 0 {
        return Err(SpectralError::ZeroCount);
    }
    let mut bound = 16.0;
    loop {
        let levels = levels_up_to(model, bound);
        let total: u64 = levels.iter().fold(0u64, |acc, l| acc.saturating_add(l.multiplicity));
        if total >= count as u64 {
            // drop levels that are not reached by the first `count` entries
            let mut seen = 0u64;
            let keep = levels
                .iter()
                .take_while(|l| {
                    let before = seen;
                    seen = seen.saturating_add(l.multiplicity);
                    before < count as u64
                })
                .count();
            let mut levels = levels;
            levels.truncate(keep);
            return build(model, levels, count);
        }
        bound *= 2.0;
    }
}

/// Every eigenvalue `≤ bound` (with multiplicity).
pub fn enumerate_up_to(model: ManifoldModel, bound: f64) -> Result<Spectrum, SpectralError> {
    let model = model.validated()?;
    let levels = levels_up_to(model, bound);
    let total = levels.iter().map(|l| l.multiplicity).sum::<u64>();
    let count = usize::try_from(total)
        .map_err(|_| SpectralError::InvalidSpectrum(format!("{total} entries do not fit in memory")))?;
    build(model, levels, count)
}

/// Spectrum of the direct sum of two operators.
///
/// The result contains every level up to the smaller of the two largest
/// materialized eigenvalues, where both inputs are known to be complete;
/// multiplicities add on collisions. An empty input is the identity.
pub fn merge_spectra(a: &Spectrum, b: &Spectrum) -> Spectrum {
    if b.is_empty() {
        return a.clone();
    }
    if a.is_empty() {
        return b.clone();
    }
    let bound = a.last().unwrap().min(b.last().unwrap());
    let within = |s: &Spectrum| -> Vec<Level> {
        s.levels.iter().copied().take_while(|l| l.eigenvalue <= bound).collect()
    };
    let (la, lb) = (within(a), within(b));
    let mut merged = Vec::with_capacity(la.len() + lb.len());
    let (mut i, mut j) = (0, 0);
    while i < la.len() || j < lb.len() {
        let next = match (la.get(i), lb.get(j)) {
            (Some(x), Some(y)) if x.eigenvalue == y.eigenvalue => {
                i += 1;
                j += 1;
                Level { eigenvalue: x.eigenvalue, multiplicity: x.multiplicity + y.multiplicity }
            }
            (Some(x), Some(y)) if x.eigenvalue < y.eigenvalue => {
                i += 1;
                *x
            }
            (Some(x), None) => {
                i += 1;
                *x
            }
            (_, Some(y)) => {
                j += 1;
                *y
            }
            (None, None) => unreachable!(),
        };
        merged.push(next);
    }
    let count = merged.iter().map(|l| l.multiplicity).sum::<u64>() as usize;
    let label = format!("{} ⊔ {}", a.label, b.label);
    Spectrum::from_levels(label, merged, count).expect("merge of valid spectra is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first(model: &str, count: usize) -> Vec<f64> {
        enumerate_spectrum(model.parse().unwrap(), count).unwrap().to_vec()
    }

    #[test]
    fn circle_prefix() {
        assert_eq!(first("circle", 7), vec![0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0]);
    }

    #[test]
    fn interval_prefixes() {
        let pi2 = PI * PI;
        let d = first("interval:dirichlet", 3);
        for (got, want) in d.iter().zip([pi2, 4.0 * pi2, 9.0 * pi2]) {
            assert!((got - want).abs() <= 1e-12 * want);
        }
        assert_eq!(first("interval:neumann", 2)[0], 0.0);
        assert!((first("interval:mixed", 1)[0] - pi2 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn torus_two_multiplicities() {
        // r_2(m): 1, 4, 4, 0, 4, 8, 0, 0, 4, 4, 8
        let s = enumerate_up_to(ManifoldModel::torus(2).unwrap(), 10.0).unwrap();
        let levels: Vec<(f64, u64)> = s.levels().iter().map(|l| (l.eigenvalue, l.multiplicity)).collect();
        assert_eq!(
            levels,
            vec![(0.0, 1), (1.0, 4), (2.0, 4), (4.0, 4), (5.0, 8), (8.0, 4), (9.0, 4), (10.0, 8)]
        );
    }

    #[test]
    fn sphere_multiplicities() {
        for l in 0..50u64 {
            assert_eq!(sphere_multiplicity(2, l), 2 * l + 1);
        }
        // S¹ reproduces the circle
        assert_eq!(first("sphere:1", 9), first("circle", 9));
        // S³: (l+1)²
        for l in 0..20u64 {
            assert_eq!(sphere_multiplicity(3, l), (l + 1) * (l + 1));
        }
    }

    #[test]
    fn order_d_squares_the_circle() {
        let circle = first("circle", 50);
        let order4 = first("orderd:n=1,d=4", 50);
        for (c, o) in circle.iter().zip(&order4) {
            assert_eq!(c * c, *o);
        }
    }

    #[test]
    fn enumeration_is_exact_length_and_sorted() {
        for m in ["circle", "torus:3", "sphere:2", "interval:mixed", "orderd:n=2,d=3", "torus:8"] {
            for count in [1, 2, 17, 1000] {
                let s = enumerate_spectrum(m.parse().unwrap(), count).unwrap();
                let v = s.to_vec();
                assert_eq!(v.len(), count, "{m}");
                assert!(v.windows(2).all(|w| w[0] <= w[1]), "{m}");
            }
        }
    }

    #[test]
    fn zero_count_rejected() {
        assert!(matches!(
            enumerate_spectrum(ManifoldModel::Circle, 0),
            Err(SpectralError::ZeroCount)
        ));
    }

    #[test]
    fn gauss_circle_counting() {
        let torus = ManifoldModel::torus(2).unwrap();
        for r in [50.0f64, 80.0, 120.0] {
            let s = enumerate_up_to(torus, r * r).unwrap();
            let ratio = s.counting(r * r) as f64 / (PI * r * r);
            assert!((ratio - 1.0).abs() < 0.05, "R={r}: {ratio}");
        }
    }

    #[test]
    fn merge_examples() {
        let c = enumerate_spectrum(ManifoldModel::Circle, 7).unwrap();
        let m = merge_spectra(&c, &c);
        assert_eq!(m.to_vec()[..6], [0.0, 0.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(merge_spectra(&c, &Spectrum::empty()), c);
        assert_eq!(merge_spectra(&Spectrum::empty(), &c), c);
    }

    #[test]
    fn merge_keeps_only_complete_levels() {
        let c = enumerate_spectrum(ManifoldModel::Circle, 5).unwrap(); // up to 4
        let d = enumerate_spectrum("interval:dirichlet".parse().unwrap(), 3).unwrap();
        let m = merge_spectra(&c, &d);
        assert_eq!(m.last(), Some(4.0));
        assert_eq!(m.to_vec(), vec![0.0, 1.0, 1.0, 4.0, 4.0]);
    }

    #[test]
    fn from_values_groups_levels() {
        let s = Spectrum::from_values("x", &[0.0, 1.0, 1.0, 3.0]).unwrap();
        assert_eq!(s.levels().len(), 3);
        assert_eq!(s.level_multiplicity(3), Some(2));
        assert!(Spectrum::from_values("x", &[1.0, 0.0]).is_err());
    }

    #[test]
    fn csv_rows() {
        let s = enumerate_spectrum(ManifoldModel::Circle, 3).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "rank,eigenvalue,multiplicity\n1,0,1\n2,1,2\n3,1,2\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let s = enumerate_spectrum(ManifoldModel::torus(2).unwrap(), 30).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: Spectrum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
