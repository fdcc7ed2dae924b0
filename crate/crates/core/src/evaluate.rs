//! Front quality (hypervolume, hyperarea) and power-law degree fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::front::{dominates, Fitness};

pub const DEFAULT_SEED_FRACTION_BOUND: f64 = 0.025;

/// Lower-left corner of the dominated region: zero influence at the largest
/// admissible seed fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefPoint {
    pub influence: f64,
    pub seed_fraction: f64,
}

impl Default for RefPoint {
    fn default() -> Self {
        RefPoint {
            influence: 0.0,
            seed_fraction: DEFAULT_SEED_FRACTION_BOUND,
        }
    }
}

impl RefPoint {
    pub fn with_seed_fraction(seed_fraction: f64) -> Self {
        RefPoint {
            influence: 0.0,
            seed_fraction,
        }
    }
}

/// Non-dominated subset with duplicates collapsed, sorted by influence.
pub fn pareto_filter(points: &[Fitness]) -> Vec<Fitness> {
    let mut out: Vec<Fitness> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        if points.iter().any(|&q| dominates(q, p)) {
            continue;
        }
        if points[..i].contains(&p) {
            continue;
        }
        out.push(p);
    }
    out.sort_by(|a, b| {
        a.influence
            .total_cmp(&b.influence)
            .then(a.seed_fraction.total_cmp(&b.seed_fraction))
    });
    out
}

/// Area dominated by `front` and bounded by `reference`.
///
/// Points beyond the reference seed fraction are rejected.
pub fn hypervolume_2d(front: &[Fitness], reference: RefPoint) -> Result<f64> {
    if let Some(p) = front.iter().find(|p| p.seed_fraction > reference.seed_fraction) {
        return Err(Error::InfeasiblePoint {
            seed_fraction: p.seed_fraction,
            bound: reference.seed_fraction,
        });
    }
    let sorted = pareto_filter(front);
    let mut area = 0.0;
    let mut previous = reference.influence;
    for p in &sorted {
        if p.influence > previous {
            area += (p.influence - previous) * (reference.seed_fraction - p.seed_fraction);
            previous = p.influence;
        }
    }
    Ok(area)
}

/// Hypervolume after discarding points that lie beyond the reference bound;
/// such points dominate no part of the reference box.
pub fn hypervolume_clipped(front: &[Fitness], reference: RefPoint) -> f64 {
    let feasible: Vec<Fitness> = front
        .iter()
        .copied()
        .filter(|p| p.seed_fraction <= reference.seed_fraction)
        .collect();
    hypervolume_2d(&feasible, reference).expect("all points are feasible")
}

/// Ratio of two hypervolumes.
pub fn hyperarea(hv_test: f64, hv_reference: f64) -> Result<f64> {
    if hv_reference == 0.0 {
        return Err(Error::ZeroReferenceVolume);
    }
    Ok(hv_test / hv_reference)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub d_min: usize,
    /// Kolmogorov-Smirnov distance of the tail at the chosen cutoff.
    pub ks: f64,
    pub tail: usize,
}

/// Smallest tail accepted when scanning cutoffs.
pub const MIN_TAIL: usize = 10;

/// Discrete power-law fit: for every cutoff, the approximate maximum-likelihood
/// exponent `1 + n / sum ln(d / (d_min - 1/2))`, keeping the cutoff whose
/// fitted tail is closest to the data in KS distance.
pub fn fit_power_law(degrees: &[usize]) -> Result<PowerLawFit> {
    let mut sorted: Vec<usize> = degrees.iter().copied().filter(|&d| d >= 1).collect();
    if sorted.len() < MIN_TAIL {
        return Err(Error::DegenerateDegrees(format!(
            "{} positive degrees, at least {MIN_TAIL} are needed",
            sorted.len()
        )));
    }
    sorted.sort_unstable();
    if sorted[0] == sorted[sorted.len() - 1] {
        return Err(Error::DegenerateDegrees("all degrees are equal".into()));
    }

    let mut best: Option<PowerLawFit> = None;
    let mut start = 0;
    while start < sorted.len() {
        let d_min = sorted[start];
        let tail = &sorted[start..];
        let next_start = start + sorted[start..].partition_point(|&d| d == d_min);
        start = next_start;
        if tail.len() < MIN_TAIL || tail[0] == tail[tail.len() - 1] {
            break;
        }
        let shift = d_min as f64 - 0.5;
        let log_sum: f64 = tail.iter().map(|&d| (d as f64 / shift).ln()).sum();
        let alpha = 1.0 + tail.len() as f64 / log_sum;
        let ks = tail_ks(tail, d_min, alpha);
        if best.as_ref().is_none_or(|b| ks < b.ks) {
            best = Some(PowerLawFit {
                alpha,
                d_min,
                ks,
                tail: tail.len(),
            });
        }
    }
    best.ok_or_else(|| Error::DegenerateDegrees("no cutoff leaves a usable tail".into()))
}

/// KS distance between the empirical CDF of a sorted tail and the
/// continuity-corrected model CDF `1 - ((d + 1/2) / (d_min - 1/2))^(1 - alpha)`.
fn tail_ks(tail: &[usize], d_min: usize, alpha: f64) -> f64 {
    let n = tail.len() as f64;
    let shift = d_min as f64 - 0.5;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < tail.len() {
        let d = tail[i];
        let j = i + tail[i..].partition_point(|&x| x == d);
        let empirical = j as f64 / n;
        let model = 1.0 - ((d as f64 + 0.5) / shift).powf(1.0 - alpha);
        worst = worst.max((empirical - model).abs());
        i = j;
    }
    worst
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[usize], b: &[usize]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}
