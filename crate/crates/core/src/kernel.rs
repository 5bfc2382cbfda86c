//! f-kernels and kerneled cover sets.
//!
//! A kernel centred at `t0` with base radius `r` is evaluated at a point with
//! lens value `t` and width multiplier `c >= 1`. The multiplier scales the
//! effective radius to `c * r`:
//!
//! * square: `1` if `|t - t0| < c r`, else `0`
//! * gaussian: `exp[(2 ln eps / r^2) * (t - t0)^2 / (2 c^2)]`, which equals
//!   `eps` exactly at `|t - t0| = c r`
//!
//! Both have sufficient width for every `c >= 1`, and thresholding either at
//! `eps` selects the same points.

use serde::{Deserialize, Serialize};

use crate::cover::{GomicCover, Interval};
use crate::error::{invalid_param, Error, Result};
use crate::geometry::LensMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelShape {
    Square,
    Gaussian,
}

impl std::str::FromStr for KernelShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(KernelShape::Square),
            "gaussian" => Ok(KernelShape::Gaussian),
            other => Err(invalid_param(format!(
                "unknown kernel `{other}` (expected square or gaussian)"
            ))),
        }
    }
}

impl std::fmt::Display for KernelShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelShape::Square => "square",
            KernelShape::Gaussian => "gaussian",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    shape: KernelShape,
    epsilon: f64,
}

impl KernelSpec {
    pub fn new(shape: KernelShape, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid_param(format!("kernel threshold must lie in (0, 1), got {epsilon}")));
        }
        Ok(KernelSpec { shape, epsilon })
    }

    pub fn square() -> Self {
        KernelSpec {
            shape: KernelShape::Square,
            epsilon: 0.1,
        }
    }

    pub fn gaussian(epsilon: f64) -> Result<Self> {
        Self::new(KernelShape::Gaussian, epsilon)
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self::square()
    }
}

/// Kernel value at lens value `t` for a kernel centred at `t0` with base
/// radius `r` and width multiplier `c`.
pub fn eval_kernel(spec: &KernelSpec, t: f64, t0: f64, r: f64, c: f64) -> f64 {
    let dev = t - t0;
    match spec.shape {
        KernelShape::Square => {
            if dev.abs() < c * r {
                1.0
            } else {
                0.0
            }
        }
        KernelShape::Gaussian => {
            let scale = 2.0 * spec.epsilon.ln() / (r * r);
            (scale * dev * dev / (2.0 * c * c)).exp()
        }
    }
}

/// Soft membership of points in one cover element: the points whose kernel
/// value exceeds the threshold, with those values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KerneledSet {
    pub interval_index: usize,
    pub center: f64,
    pub radius: f64,
    /// `(point index, kernel value)`, sorted by point index.
    pub members: Vec<(usize, f64)>,
}

impl KerneledSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&(i, _)| i)
    }

    pub fn index_vec(&self) -> Vec<usize> {
        self.indices().collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|&(_, w)| w).collect()
    }

    pub fn weight_of(&self, point: usize) -> Option<f64> {
        self.members
            .binary_search_by_key(&point, |&(i, _)| i)
            .ok()
            .map(|pos| self.members[pos].1)
    }

    pub fn contains(&self, point: usize) -> bool {
        self.weight_of(point).is_some()
    }
}

/// Points of `lens` whose kernel value for `interval` exceeds the threshold.
/// `multipliers` holds one width multiplier per point.
pub fn build_kerneled_set(
    lens: &LensMap,
    interval_index: usize,
    interval: &Interval,
    spec: &KernelSpec,
    multipliers: &[f64],
) -> Result<KerneledSet> {
    if multipliers.len() != lens.len() {
        return Err(Error::InvalidData(format!(
            "{} width multipliers for {} points",
            multipliers.len(),
            lens.len()
        )));
    }
    let center = interval.midpoint();
    let radius = interval.radius();
    let members = lens
        .values()
        .iter()
        .zip(multipliers)
        .enumerate()
        .filter_map(|(i, (&t, &c))| {
            let w = eval_kernel(spec, t, center, radius, c);
            (w > spec.epsilon).then_some((i, w))
        })
        .collect();
    Ok(KerneledSet {
        interval_index,
        center,
        radius,
        members,
    })
}

/// Kerneled sets for every interval of a cover. Empty sets are kept and logged.
pub fn build_kerneled_cover(
    lens: &LensMap,
    cover: &GomicCover,
    spec: &KernelSpec,
    multipliers: &[f64],
) -> Result<Vec<KerneledSet>> {
    let sets = cover
        .intervals()
        .iter()
        .enumerate()
        .map(|(i, iv)| build_kerneled_set(lens, i, iv, spec, multipliers))
        .collect::<Result<Vec<_>>>()?;
    for set in sets.iter().filter(|s| s.is_empty()) {
        log::warn!("kerneled set {} has no members", set.interval_index);
    }
    Ok(sets)
}

/// True when every sample `(deviation, c)` with `|deviation| < r` evaluates
/// above the threshold. Deviations are lens offsets from the kernel centre.
pub fn check_sufficient_width(spec: &KernelSpec, r: f64, samples: &[(f64, f64)]) -> bool {
    samples
        .iter()
        .filter(|(dev, _)| dev.abs() < r)
        .all(|&(dev, c)| eval_kernel(spec, dev, 0.0, r, c) > spec.epsilon)
}
