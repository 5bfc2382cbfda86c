//! Interval covers of the lens range.
//!
//! A cover stores its intervals unclipped. The first and last intervals of a
//! Morse-spaced cover extend past the lens range `L = [lo, hi]`; clipping to `L`
//! is available through [`GomicCover::clipped`] and never changes which data
//! points an interval contains.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Error, Result};
use crate::geometry::LensMap;
use crate::kernel::KerneledSet;

/// An open interval `(lo, hi)` of lens values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::DegenerateCover(format!("interval ({lo}, {hi}) is empty")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn radius(&self) -> f64 {
        self.length() / 2.0
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }
}

/// An interval cover in which only consecutive intervals meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GomicCover {
    intervals: Vec<Interval>,
    overlap_g: f64,
    domain: (f64, f64),
}

impl GomicCover {
    /// Wraps intervals without checking the gomic conditions; see
    /// [`validate_gomic`].
    pub fn from_intervals(mut intervals: Vec<Interval>, overlap_g: f64, domain: (f64, f64)) -> Self {
        intervals.sort_by(|a, b| a.midpoint().total_cmp(&b.midpoint()));
        GomicCover {
            intervals,
            overlap_g,
            domain,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn overlap_g(&self) -> f64 {
        self.overlap_g
    }

    /// The lens range `L` this cover was built for.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Interval `i` intersected with the closed lens range.
    pub fn clipped(&self, i: usize) -> (f64, f64) {
        let iv = self.intervals[i];
        (iv.lo.max(self.domain.0), iv.hi.min(self.domain.1))
    }

    /// Intersection of intervals `i` and `i + 1` (within `L`), if non-empty.
    pub fn overlap(&self, i: usize) -> Option<(f64, f64)> {
        let (a_lo, a_hi) = self.clipped(i);
        let (b_lo, b_hi) = self.clipped(i + 1);
        let lo = a_lo.max(b_lo);
        let hi = a_hi.min(b_hi);
        (lo < hi).then_some((lo, hi))
    }

    /// Largest interval length.
    pub fn resolution(&self) -> f64 {
        self.intervals.iter().map(Interval::length).fold(0.0, f64::max)
    }
}

fn check_overlap(g: f64) -> Result<()> {
    if !(g > 0.0 && g < 1.0) {
        return Err(invalid_param(format!("overlap g must lie in (0, 1), got {g}")));
    }
    Ok(())
}

/// `n` equal-length intervals with evenly spaced midpoints
/// `lo + (i - 1/2) * delta`, each of length `delta * (1 + g/2)`.
pub fn morse_spaced_cover(lo: f64, hi: f64, n: usize, g: f64) -> Result<GomicCover> {
    if !(lo < hi) {
        return Err(invalid_param(format!("lens range must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    if n == 0 {
        return Err(invalid_param("number of intervals must be at least 1"));
    }
    check_overlap(g)?;
    let step = (hi - lo) / n as f64;
    let half = step / 2.0 * (1.0 + g / 2.0);
    let intervals = (1..=n)
        .map(|i| {
            let mid = lo + (i as f64 - 0.5) * step;
            Interval {
                lo: mid - half,
                hi: mid + half,
            }
        })
        .collect();
    Ok(GomicCover {
        intervals,
        overlap_g: g,
        domain: (lo, hi),
    })
}

/// Zero-based positions `j_0 .. j_n` into the sorted lens values at which the
/// data-spaced cover places its breakpoints.
pub fn data_spaced_breakpoints(point_count: usize, n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(invalid_param("number of intervals must be at least 1"));
    }
    if point_count < n + 1 {
        return Err(invalid_param(format!(
            "data-spaced cover with {n} intervals needs at least {} points, got {point_count}",
            n + 1
        )));
    }
    let span = point_count - 1;
    // one-based j_i = 1 + ceil(i (n_pts - 1) / n)
    Ok((0..=n).map(|i| (i * span).div_ceil(n)).collect())
}

/// Intervals holding (about) the same number of lens values each. Interval
/// `i` spans `(t_{j_{i-1}} - g L_i / 2, t_{j_i} + g L_i / 2)` with
/// `L_i = t_{j_i} - t_{j_{i-1}}`.
pub fn data_spaced_cover(lens: &LensMap, n: usize, g: f64) -> Result<GomicCover> {
    check_overlap(g)?;
    let mut sorted = lens.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let breaks = data_spaced_breakpoints(sorted.len(), n)?;
    let mut intervals = Vec::with_capacity(n);
    for w in breaks.windows(2) {
        let (a, b) = (sorted[w[0]], sorted[w[1]]);
        if !(a < b) {
            return Err(Error::DegenerateCover(format!(
                "breakpoints {} and {} share the lens value {a}; reduce the number of intervals",
                w[0], w[1]
            )));
        }
        let pad = g * (b - a) / 2.0;
        intervals.push(Interval {
            lo: a - pad,
            hi: b + pad,
        });
    }
    Ok(GomicCover::from_intervals(intervals, g, (lens.lo(), lens.hi())))
}

/// A failed gomic condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GomicViolation {
    /// The point is in `[lo, hi]` but in no interval.
    Uncovered { at: f64 },
    /// Three or more intervals share the region `(lo, hi)`.
    TripleIntersection { lo: f64, hi: f64 },
    /// Intervals `first` and `first + 1` (by midpoint) overlap by a fraction
    /// outside `(0, 1)`.
    OverlapFraction { first: usize, fraction: f64 },
    Containment { outer: usize, inner: usize },
    EmptyInterval { index: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GomicReport {
    pub violations: Vec<GomicViolation>,
}

impl GomicReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks coverage of `[lo, hi]`, absence of triple intersections, overlap
/// fractions in `(0, 1)` and absence of nested intervals. The endpoints of
/// `[lo, hi]` count as covered by an interval ending exactly there.
pub fn validate_gomic(cover: &GomicCover, lo: f64, hi: f64) -> GomicReport {
    let ivs = cover.intervals();
    let mut violations = Vec::new();
    for (index, iv) in ivs.iter().enumerate() {
        if !(iv.lo < iv.hi) {
            violations.push(GomicViolation::EmptyInterval { index });
        }
    }
    if !violations.is_empty() {
        return GomicReport { violations };
    }

    let mut by_lo: Vec<usize> = (0..ivs.len()).collect();
    by_lo.sort_by(|&a, &b| ivs[a].lo.total_cmp(&ivs[b].lo).then(ivs[b].hi.total_cmp(&ivs[a].hi)));

    // coverage
    match by_lo.first() {
        None => violations.push(GomicViolation::Uncovered { at: lo }),
        Some(&first) if ivs[first].lo > lo => violations.push(GomicViolation::Uncovered { at: lo }),
        Some(_) => {
            let mut reach = f64::NEG_INFINITY;
            for &i in &by_lo {
                let iv = ivs[i];
                if reach >= hi {
                    break;
                }
                if reach > f64::NEG_INFINITY && iv.lo >= reach && reach > lo {
                    violations.push(GomicViolation::Uncovered { at: reach });
                    break;
                }
                reach = reach.max(iv.hi);
            }
            if reach < hi && !violations.iter().any(|v| matches!(v, GomicViolation::Uncovered { .. })) {
                violations.push(GomicViolation::Uncovered { at: reach });
            }
        }
    }

    // triple intersections: sweep over endpoints, closing before opening
    let mut events: Vec<(f64, i32)> = ivs.iter().flat_map(|iv| [(iv.lo, 1), (iv.hi, -1)]).collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut depth = 0;
    for (k, &(x, delta)) in events.iter().enumerate() {
        depth += delta;
        if depth >= 3 {
            let next = events[k + 1..].iter().find(|e| e.1 < 0).map_or(x, |e| e.0);
            if next > x {
                violations.push(GomicViolation::TripleIntersection { lo: x, hi: next });
                break;
            }
        }
    }

    // containment: sorted by lo ascending then hi descending
    let mut widest: Option<usize> = None;
    for &i in &by_lo {
        if let Some(w) = widest {
            if ivs[i].hi <= ivs[w].hi {
                violations.push(GomicViolation::Containment { outer: w, inner: i });
                continue;
            }
        }
        widest = Some(i);
    }

    // overlap fraction of consecutive intervals, relative to each of the pair
    for (first, pair) in ivs.windows(2).enumerate() {
        let overlap = (pair[0].hi.min(pair[1].hi) - pair[0].lo.max(pair[1].lo)).max(0.0);
        for iv in pair {
            let fraction = overlap / iv.length();
            if !(fraction > 0.0 && fraction < 1.0) {
                violations.push(GomicViolation::OverlapFraction { first, fraction });
                break;
            }
        }
    }

    GomicReport { violations }
}

/// Largest lens spread of any kerneled set.
pub fn kerneled_resolution(sets: &[KerneledSet], lens: &LensMap) -> Result<f64> {
    let mut r: f64 = 0.0;
    for set in sets {
        let (lo, hi) = member_range(set, lens)?;
        r = r.max(hi - lo);
    }
    Ok(r)
}

fn member_range(set: &KerneledSet, lens: &LensMap) -> Result<(f64, f64)> {
    if set.is_empty() {
        return Err(Error::DegenerateCover(format!(
            "kerneled set {} has no members",
            set.interval_index
        )));
    }
    Ok(set
        .indices()
        .map(|i| lens.get(i))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t))))
}

/// The maximally-coarse and maximally-fine interval covers associated with a
/// kerneled cover.
///
/// The coarse interval of a set spans the lens values of its members. The fine
/// interval is the largest range around the set's centre whose every data
/// point is a member: it is bounded by the nearest non-members on each side
/// and then shrunk to member values. Pulled back with closed endpoints, the
/// fine set is contained in the kerneled set, which is contained in the coarse set.
pub fn coarse_fine_covers(sets: &[KerneledSet], lens: &LensMap) -> Result<(GomicCover, GomicCover)> {
    let domain = (lens.lo(), lens.hi());
    let mut coarse = Vec::with_capacity(sets.len());
    let mut fine = Vec::with_capacity(sets.len());
    for set in sets {
        let (lo, hi) = member_range(set, lens)?;
        coarse.push(Interval::new(lo, hi)?);

        let mut is_member = vec![false; lens.len()];
        for i in set.indices() {
            is_member[i] = true;
        }
        let mut below = f64::NEG_INFINITY;
        let mut above = f64::INFINITY;
        for (i, &t) in lens.values().iter().enumerate() {
            if is_member[i] {
                continue;
            }
            if t <= set.center {
                below = below.max(t);
            }
            if t >= set.center {
                above = above.min(t);
            }
        }
        let (f_lo, f_hi) = set
            .indices()
            .map(|i| lens.get(i))
            .filter(|&t| below < t && t < above)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
        fine.push(Interval::new(f_lo, f_hi).map_err(|_| {
            Error::DegenerateCover(format!(
                "maximally-fine interval of set {} is empty",
                set.interval_index
            ))
        })?);
    }
    let coarse = GomicCover::from_intervals(coarse, f64::NAN, domain);
    let report = validate_gomic(&coarse, domain.0, domain.1);
    if !report.is_valid() {
        return Err(Error::NonRegularCover(format!(
            "maximally-coarse cover is not a gomic: {:?}",
            report.violations
        )));
    }
    let fine = GomicCover::from_intervals(fine, f64::NAN, domain);
    Ok((coarse, fine))
}
