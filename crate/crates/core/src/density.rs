//! Approximate inverse Morse density and the kernel width multiplier.
//!
//! The raw inverse density of a point is the spread of lens values over its
//! k nearest ambient neighbours. It is smoothed with a separable raised-cosine
//! window whose per-dimension width is a tenth of that dimension's range, and
//! normalised by the window mass so that a constant field is a fixed point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Error, Result};
use crate::geometry::{knn, KdTree, LensMap, NeighborGraph, PointCloud};

/// Raw and smoothed inverse density, with the mean and (population) standard
/// deviation of the smoothed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub mean_mu: f64,
    pub std_sigma: f64,
}

impl DensityProfile {
    /// Runs kNN, raw spread and smoothing on a cloud.
    pub fn compute(cloud: &PointCloud, lens: &LensMap, k: usize) -> Result<Self> {
        lens.check_matches(cloud)?;
        let nbrs = knn(cloud, k)?;
        let raw = raw_inverse_density(lens, &nbrs)?;
        let smoothed = smooth_density(&raw, cloud)?;
        Ok(Self::from_parts(raw, smoothed))
    }

    pub fn from_parts(raw: Vec<f64>, smoothed: Vec<f64>) -> Self {
        let n = smoothed.len().max(1) as f64;
        let mean_mu = smoothed.iter().sum::<f64>() / n;
        let var = smoothed.iter().map(|b| (b - mean_mu).powi(2)).sum::<f64>() / n;
        DensityProfile {
            raw,
            smoothed,
            mean_mu,
            std_sigma: var.sqrt(),
        }
    }

    /// Width multiplier `c(beta(x))` for every point.
    pub fn multipliers(&self, scaler: &WidthScaler) -> Vec<f64> {
        self.smoothed
            .iter()
            .map(|&b| width_multiplier(b, self, scaler))
            .collect()
    }
}

/// Parameters of the width multiplier: its ceiling `c_max` and the rate
/// sensitivity exponent `s`. `s = 0` turns density scaling off entirely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthScaler {
    c_max: f64,
    sensitivity: f64,
}

impl WidthScaler {
    pub fn new(c_max: f64, sensitivity: f64) -> Result<Self> {
        if !(c_max >= 1.0) || !c_max.is_finite() {
            return Err(invalid_param(format!("c_max must be a finite value >= 1, got {c_max}")));
        }
        if !(sensitivity >= 0.0) || !sensitivity.is_finite() {
            return Err(invalid_param(format!(
                "rate sensitivity must be a finite value >= 0, got {sensitivity}"
            )));
        }
        Ok(WidthScaler { c_max, sensitivity })
    }

    /// The scaler that reproduces standard Mapper.
    pub fn standard() -> Self {
        WidthScaler {
            c_max: 1.0,
            sensitivity: 0.0,
        }
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    /// True when every multiplier is exactly 1, so density need not be computed.
    pub fn is_trivial(&self) -> bool {
        self.sensitivity == 0.0 || self.c_max == 1.0
    }
}

impl Default for WidthScaler {
    fn default() -> Self {
        WidthScaler {
            c_max: 3.0,
            sensitivity: 1.0,
        }
    }
}

/// Spread (max - min) of lens values over each point's neighbour list.
pub fn raw_inverse_density(lens: &LensMap, nbrs: &NeighborGraph) -> Result<Vec<f64>> {
    if lens.len() != nbrs.len() {
        return Err(Error::InvalidData(format!(
            "lens has {} values but the neighbour graph has {} points",
            lens.len(),
            nbrs.len()
        )));
    }
    Ok((0..nbrs.len())
        .map(|i| {
            let (lo, hi) = nbrs
                .neighbors(i)
                .iter()
                .map(|&j| lens.get(j))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
            hi - lo
        })
        .collect())
}

#[inline]
fn raised_cosine(u: f64) -> f64 {
    if u < 1.0 {
        0.5 * (1.0 + (std::f64::consts::PI * u).cos())
    } else {
        0.0
    }
}

/// Per-dimension smoothing window widths: a tenth of each coordinate range.
pub fn window_widths(cloud: &PointCloud) -> Vec<f64> {
    (0..cloud.dim())
        .map(|d| {
            let (lo, hi) = cloud.axis_range(d);
            (hi - lo) / 10.0
        })
        .collect()
}

/// Separable raised-cosine window between two points.
pub fn window_weight(x: &[f64], y: &[f64], widths: &[f64]) -> f64 {
    let mut w = 1.0;
    for ((&a, &b), &width) in x.iter().zip(y).zip(widths) {
        let gap = (a - b).abs();
        if width > 0.0 {
            w *= raised_cosine(gap / width);
        } else if gap != 0.0 {
            return 0.0;
        }
        if w == 0.0 {
            return 0.0;
        }
    }
    w
}

/// Window-weighted average of `raw` around every point.
pub fn smooth_density(raw: &[f64], cloud: &PointCloud) -> Result<Vec<f64>> {
    if raw.len() != cloud.len() {
        return Err(Error::InvalidData(format!(
            "{} raw densities for {} points",
            raw.len(),
            cloud.len()
        )));
    }
    let widths = window_widths(cloud);
    let tree = KdTree::new(cloud);
    Ok((0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let x = cloud.point(i);
            // the box query yields exactly the support of the window
            let mut support = Vec::new();
            tree.within_box(x, &widths, |j| support.push(j));
            support.sort_unstable();
            let (mut num, mut den) = (0.0, 0.0);
            for j in support {
                let w = window_weight(x, cloud.point(j), &widths);
                num += raw[j] * w;
                den += w;
            }
            // den >= 1 because the point itself has weight 1
            num / den
        })
        .collect())
}

/// `c(beta)`: an increasing sigmoid from 1 towards `c_max`, centred at the
/// mean inverse density and scaled by its standard deviation, raised to the
/// rate sensitivity.
pub fn width_multiplier(beta: f64, profile: &DensityProfile, scaler: &WidthScaler) -> f64 {
    if scaler.is_trivial() || profile.std_sigma == 0.0 {
        return 1.0;
    }
    let z = (beta - profile.mean_mu) / profile.std_sigma;
    let sigmoid = 1.0 / (1.0 + (-z).exp());
    let base = 1.0 + (scaler.c_max - 1.0) * sigmoid;
    base.powf(scaler.sensitivity)
}
