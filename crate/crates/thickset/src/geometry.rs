//! Boxes, box-union regions, gap systems, and the two primitive measurements
//! everything else is built from: the size of a set with respect to a
//! diagonal contraction, and the threshold at which a contraction-power box
//! can bridge two boxes.
//!
//! All geometry is done in the square metric, so the ball `B[z, rho]` is the
//! axis-aligned box with center `z` and half-width `rho` on every axis. A
//! diagonal contraction `A = diag(b_1..b_n)` with `0 < b_j < 1` acts on such
//! balls by scaling the half-width on axis `j` to `b_j^e` for a real power
//! `e`; sizes and bridging thresholds are the critical exponents of that
//! scaling and come out of per-axis logarithms.
//!
//! Comparisons on raw coordinates are exact: subtraction and coverage only
//! ever slice at coordinates already present in the input, so no tolerance
//! is needed there. Tolerances enter only where logarithms do.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("contraction entry {0} outside (0, 1)")]
    BetaOutOfRange(f64),
    #[error("box is degenerate or inverted on axis {0}")]
    DegenerateBox(usize),
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("region has no boxes")]
    EmptyRegion,
    #[error("hull box lies outside the complement frame")]
    OutsideFrame,
}

/// Diagonal contraction matrix `diag(b_1..b_n)` with every entry in (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalContraction {
    betas: Vec<f64>,
}

impl DiagonalContraction {
    pub fn new(betas: Vec<f64>) -> Result<Self, GeometryError> {
        if betas.is_empty() {
            return Err(GeometryError::DimensionMismatch { expected: 1, got: 0 });
        }
        for &b in &betas {
            if !b.is_finite() {
                return Err(GeometryError::NonFinite("contraction entry"));
            }
            if b <= 0.0 || b >= 1.0 {
                return Err(GeometryError::BetaOutOfRange(b));
            }
        }
        Ok(Self { betas })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.betas.len()
    }

    #[inline]
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Half-widths of `A^e(B[0, 1])`, i.e. `b_j^e` per axis.
    pub fn pow(&self, e: f64) -> Vec<f64> {
        self.betas.iter().map(|b| b.powf(e)).collect()
    }

    /// Same for an integer power, computed without going through `exp`.
    pub fn pow_i(&self, e: i32) -> Vec<f64> {
        self.betas.iter().map(|b| b.powi(e)).collect()
    }

    /// Product of the diagonal entries (the volume contraction factor).
    pub fn product(&self) -> f64 {
        self.betas.iter().product()
    }

    pub fn beta_max(&self) -> f64 {
        self.betas.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn beta_min(&self) -> f64 {
        self.betas.iter().cloned().fold(f64::MAX, f64::min)
    }
}

/// Whether a region's boxes are meant as open or closed point sets.
///
/// An open region denotes the interior of the union of the closed boxes, so
/// two boxes sharing a face belong to one connected open region. Sizes and
/// bridging thresholds never distinguish the two: they only see closures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Openness {
    Open,
    Closed,
}

/// Axis-aligned box `[lo_1, hi_1] x .. x [lo_n, hi_n]` with `lo < hi` on
/// every axis. Infinite bounds are allowed so that complement half-slabs can
/// be carried through bridging computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, GeometryError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(GeometryError::DimensionMismatch {
                expected: lo.len().max(1),
                got: hi.len(),
            });
        }
        for j in 0..lo.len() {
            if lo[j].is_nan() || hi[j].is_nan() {
                return Err(GeometryError::NonFinite("box coordinate"));
            }
            if !(lo[j] < hi[j]) {
                return Err(GeometryError::DegenerateBox(j));
            }
        }
        Ok(Self { lo, hi })
    }

    /// The ball `B[center, rho]` of the square metric.
    pub fn ball(center: &[f64], rho: f64) -> Result<Self, GeometryError> {
        Self::new(
            center.iter().map(|c| c - rho).collect(),
            center.iter().map(|c| c + rho).collect(),
        )
    }

    /// Box with per-axis half-widths around a center point.
    pub fn around(center: &[f64], half_widths: &[f64]) -> Result<Self, GeometryError> {
        if center.len() != half_widths.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: center.len(),
                got: half_widths.len(),
            });
        }
        Self::new(
            center.iter().zip(half_widths).map(|(c, h)| c - h).collect(),
            center.iter().zip(half_widths).map(|(c, h)| c + h).collect(),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.lo.len()
    }

    #[inline]
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    #[inline]
    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect()
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (h - l)).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|c| c.is_finite())
    }

    pub fn volume(&self) -> f64 {
        self.widths().iter().product()
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        p.len() == self.n()
            && (0..self.n()).all(|j| self.lo[j] <= p[j] && p[j] <= self.hi[j])
    }

    /// Closed containment of another box.
    pub fn contains_box(&self, other: &AxisBox) -> bool {
        other.n() == self.n()
            && (0..self.n()).all(|j| self.lo[j] <= other.lo[j] && other.hi[j] <= self.hi[j])
    }

    /// True when the interiors overlap, i.e. the closed intersection has
    /// positive volume. Face or corner contact does not count.
    pub fn overlaps_open(&self, other: &AxisBox) -> bool {
        other.n() == self.n()
            && (0..self.n()).all(|j| self.lo[j] < other.hi[j] && other.lo[j] < self.hi[j])
    }

    /// True when the closed boxes share at least one point.
    pub fn meets_closed(&self, other: &AxisBox) -> bool {
        other.n() == self.n()
            && (0..self.n()).all(|j| self.lo[j] <= other.hi[j] && other.lo[j] <= self.hi[j])
    }

    /// Grow symmetrically so each width is multiplied by `factor`.
    pub fn inflate(&self, factor: f64) -> AxisBox {
        let c = self.center();
        let h = self.half_widths();
        AxisBox::around(&c, &h.iter().map(|x| x * factor).collect::<Vec<_>>())
            .expect("inflating a valid box keeps it valid")
    }
}

/// Per-axis separation of two closed boxes: `max(0, lo-gap)` on each axis.
/// All zeros exactly when the closed boxes intersect.
pub fn axis_gaps(u: &AxisBox, w: &AxisBox) -> Vec<f64> {
    assert_eq!(u.n(), w.n(), "axis_gaps: dimension mismatch");
    (0..u.n())
        .map(|j| (u.lo[j] - w.hi[j]).max(w.lo[j] - u.hi[j]).max(0.0))
        .collect()
}

fn log_base(beta: f64, x: f64) -> f64 {
    x.ln() / beta.ln()
}

/// Critical exponent `1/t*` of [`bridge_threshold`]: the largest `e` such
/// that the box with half-widths `b_j^e` can still touch both `u` and `w`.
///
/// Conventions: `+inf` when the closed boxes already intersect, `0` when
/// some axis gap is at least 2 (no contraction power bridges it, since
/// half-widths stay below 1).
pub fn bridge_exponent(u: &AxisBox, w: &AxisBox, a: &DiagonalContraction) -> f64 {
    let gaps = axis_gaps(u, w);
    assert_eq!(gaps.len(), a.n(), "bridge_exponent: dimension mismatch");
    let mut exponent = f64::INFINITY;
    for (j, &g) in gaps.iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        if g >= 2.0 {
            return 0.0;
        }
        // A translate with half-width h_j on this axis reaches across the
        // gap iff 2 h_j >= g, so the critical exponent solves b^e = g/2.
        exponent = exponent.min(log_base(a.betas[j], 0.5 * g));
    }
    exponent
}

/// Infimum of `t > 0` such that some translate of `A^{1/t}(B[0,1])` meets
/// both closed boxes. `0` when they intersect, `+inf` when unreachable.
pub fn bridge_threshold(u: &AxisBox, w: &AxisBox, a: &DiagonalContraction) -> f64 {
    let e = bridge_exponent(u, w, a);
    if e == f64::INFINITY {
        0.0
    } else if e == 0.0 {
        f64::INFINITY
    } else {
        1.0 / e
    }
}

/// Finite union of boxes, open or closed as a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub boxes: Vec<AxisBox>,
    pub openness: Openness,
}

impl BoxRegion {
    pub fn open(boxes: Vec<AxisBox>) -> Self {
        Self { boxes, openness: Openness::Open }
    }

    pub fn closed(boxes: Vec<AxisBox>) -> Self {
        Self { boxes, openness: Openness::Closed }
    }

    pub fn n(&self) -> Option<usize> {
        self.boxes.first().map(AxisBox::n)
    }

    pub fn bounding_box(&self) -> Result<AxisBox, GeometryError> {
        let first = self.boxes.first().ok_or(GeometryError::EmptyRegion)?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for b in &self.boxes[1..] {
            if b.n() != lo.len() {
                return Err(GeometryError::DimensionMismatch { expected: lo.len(), got: b.n() });
            }
            for j in 0..lo.len() {
                lo[j] = lo[j].min(b.lo[j]);
                hi[j] = hi[j].max(b.hi[j]);
            }
        }
        AxisBox::new(lo, hi)
    }

    /// Volume of the union (overlaps counted once).
    pub fn volume(&self) -> f64 {
        let mut pieces: Vec<AxisBox> = Vec::new();
        for b in &self.boxes {
            let mut fresh = vec![b.clone()];
            for p in &pieces {
                fresh = subtract_box(fresh, p);
            }
            pieces.extend(fresh);
        }
        pieces.iter().map(AxisBox::volume).sum()
    }
}

/// Closure of `stock \ cut`, as positive-volume boxes with pairwise disjoint
/// interiors. Slicing planes are taken from `cut`'s own coordinates, so the
/// arithmetic is exact.
pub fn subtract_box(stock: Vec<AxisBox>, cut: &AxisBox) -> Vec<AxisBox> {
    let mut out = Vec::new();
    for s in stock {
        if !s.overlaps_open(cut) {
            out.push(s);
            continue;
        }
        let mut core = s;
        for j in 0..core.n() {
            if cut.lo[j] > core.lo[j] {
                let mut piece = core.clone();
                piece.hi[j] = cut.lo[j];
                out.push(piece);
                core.lo[j] = cut.lo[j];
            }
            if cut.hi[j] < core.hi[j] {
                let mut piece = core.clone();
                piece.lo[j] = cut.hi[j];
                out.push(piece);
                core.hi[j] = cut.hi[j];
            }
        }
        // what is left of `core` lies inside `cut` and is dropped
    }
    out
}

/// Exact test that the closed box `target` is covered by the union of the
/// closed boxes in `cover`.
pub fn covered_by(target: &AxisBox, cover: &[AxisBox]) -> bool {
    // A cover box only helps if its intersection with `target` has positive
    // extent on every axis where `target` does; thinner contact covers a
    // relatively measure-zero slice whose points are reached through the
    // closures of the substantial pieces anyway.
    for (idx, b) in cover.iter().enumerate() {
        if !target.meets_closed(b) {
            continue;
        }
        let n = target.n();
        let substantial = (0..n).all(|j| {
            target.lo[j] == target.hi[j]
                || target.lo[j].max(b.lo[j]) < target.hi[j].min(b.hi[j])
        });
        if !substantial {
            continue;
        }
        if b.contains_box(target) {
            return true;
        }
        let mut split = vec![target.clone()];
        for j in 0..n {
            let mut next = Vec::new();
            for piece in split {
                let mut cuts: Vec<f64> = [b.lo[j], b.hi[j]]
                    .into_iter()
                    .filter(|p| piece.lo[j] < *p && *p < piece.hi[j])
                    .collect();
                cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                cuts.dedup();
                let mut start = piece.lo[j];
                for plane in cuts.into_iter().chain(std::iter::once(piece.hi[j])) {
                    let mut sub = piece.clone();
                    sub.lo[j] = start;
                    sub.hi[j] = plane;
                    next.push(sub);
                    start = plane;
                }
            }
            split = next;
        }
        let rest: Vec<AxisBox> = split.into_iter().filter(|p| !b.contains_box(p)).collect();
        let remaining: Vec<AxisBox> =
            cover.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, c)| c.clone()).collect();
        return rest.iter().all(|piece| covered_by(piece, &remaining));
    }
    false
}

/// Size of the smallest translated contraction-power box containing the
/// region: `S` such that `F` fits inside some translate of
/// `A^{1/S}(B[0,1])`. Depends only on the bounding box. `+inf` when some
/// bounding half-width is 1 or more (no power fits, half-widths stay
/// below 1).
pub fn size_wrt(f: &BoxRegion, a: &DiagonalContraction) -> Result<f64, GeometryError> {
    let e = size_exponent(f, a)?;
    Ok(if e == 0.0 { f64::INFINITY } else { 1.0 / e })
}

/// Reciprocal form of [`size_wrt`]: `1/S = min_j log_{b_j}(h_j)` over the
/// bounding half-widths, with `0` standing for `S = +inf`.
pub fn size_exponent(f: &BoxRegion, a: &DiagonalContraction) -> Result<f64, GeometryError> {
    let bb = f.bounding_box()?;
    if bb.n() != a.n() {
        return Err(GeometryError::DimensionMismatch { expected: a.n(), got: bb.n() });
    }
    if !bb.is_finite() {
        return Err(GeometryError::NonFinite("region bounding box"));
    }
    let mut e = f64::INFINITY;
    for (j, h) in bb.half_widths().into_iter().enumerate() {
        if h >= 1.0 {
            return Ok(0.0);
        }
        e = e.min(log_base(a.betas()[j], h));
    }
    Ok(e)
}

/// Closure of `frame \ hull` as finite boxes, followed by the 2n half-slabs
/// that stand for the rest of the complement outside the frame. Slab boxes
/// have infinite coordinates; keep them out of volume bookkeeping.
///
/// Requires the hull to lie inside the frame.
pub fn region_complement(hull: &BoxRegion, frame: &AxisBox) -> Result<BoxRegion, GeometryError> {
    let n = frame.n();
    for b in &hull.boxes {
        if b.n() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: b.n() });
        }
        if !frame.contains_box(b) {
            return Err(GeometryError::OutsideFrame);
        }
    }
    let mut pieces = vec![frame.clone()];
    for b in &hull.boxes {
        pieces = subtract_box(pieces, b);
    }
    for j in 0..n {
        let mut lo = vec![f64::NEG_INFINITY; n];
        let mut hi = vec![f64::INFINITY; n];
        hi[j] = frame.lo[j];
        pieces.push(AxisBox { lo: lo.clone(), hi });
        let mut hi2 = vec![f64::INFINITY; n];
        lo[j] = frame.hi[j];
        hi2[j] = f64::INFINITY;
        pieces.push(AxisBox { lo, hi: hi2 });
    }
    Ok(BoxRegion::closed(pieces))
}

/// A compact set presented as a closed hull minus disjoint open gaps,
/// together with the ambient reference ball the construction lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSystem {
    pub hull: BoxRegion,
    pub gaps: Vec<BoxRegion>,
    pub ambient: AxisBox,
}

impl GapSystem {
    /// Ambient defaults to `B[0,1]` in the hull's dimension.
    pub fn new(hull: BoxRegion, gaps: Vec<BoxRegion>) -> Result<Self, GeometryError> {
        let n = hull.n().ok_or(GeometryError::EmptyRegion)?;
        let ambient = AxisBox::ball(&vec![0.0; n], 1.0)?;
        Ok(Self { hull, gaps, ambient })
    }

    pub fn with_ambient(mut self, ambient: AxisBox) -> Self {
        self.ambient = ambient;
        self
    }

    pub fn n(&self) -> usize {
        self.hull.n().unwrap_or(0)
    }
}

/// Outcome of structural validation: hard violations plus informational
/// flags (things checked loosely or not at all in some dimensions).
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub flags: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn adjacency_connected(boxes: &[AxisBox]) -> bool {
    // Two boxes are adjacent when their closed intersection is nonempty and
    // degenerate on at most one axis: overlap of positive volume, or contact
    // along a full face. Corner-only contact does not connect interiors.
    if boxes.len() <= 1 {
        return true;
    }
    let n = boxes[0].n();
    let adjacent = |a: &AxisBox, b: &AxisBox| -> bool {
        let mut degenerate = 0usize;
        for j in 0..n {
            let lo = a.lo[j].max(b.lo[j]);
            let hi = a.hi[j].min(b.hi[j]);
            if lo > hi {
                return false;
            }
            if lo == hi {
                degenerate += 1;
            }
        }
        degenerate <= 1
    };
    let mut seen = vec![false; boxes.len()];
    let mut queue = vec![0usize];
    seen[0] = true;
    while let Some(i) = queue.pop() {
        for k in 0..boxes.len() {
            if !seen[k] && adjacent(&boxes[i], &boxes[k]) {
                seen[k] = true;
                queue.push(k);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Structural checks on a gap system: finite nondegenerate boxes, gaps
/// connected and inside the hull, gaps pairwise disjoint as open sets, and
/// the unbounded complement connected (dimension two and up; flagged as
/// unchecked in dimension one, where it never is).
pub fn validate_gap_system(sys: &GapSystem) -> ValidationReport {
    let mut violations = Vec::new();
    let mut flags = Vec::new();
    let n = sys.n();
    if sys.hull.boxes.is_empty() {
        violations.push("hull has no boxes".to_string());
        return ValidationReport { violations, flags };
    }
    for (i, b) in sys.hull.boxes.iter().enumerate() {
        if b.n() != n {
            violations.push(format!("hull box {i} has dimension {} (expected {n})", b.n()));
        } else if !b.is_finite() {
            violations.push(format!("hull box {i} has non-finite coordinates"));
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations, flags };
    }
    for (g, gap) in sys.gaps.iter().enumerate() {
        if gap.boxes.is_empty() {
            violations.push(format!("gap {g} has no boxes"));
            continue;
        }
        for (i, b) in gap.boxes.iter().enumerate() {
            if b.n() != n {
                violations.push(format!("gap {g} box {i} has dimension {} (expected {n})", b.n()));
                continue;
            }
            if !b.is_finite() {
                violations.push(format!("gap {g} box {i} has non-finite coordinates"));
                continue;
            }
            if !covered_by(b, &sys.hull.boxes) {
                violations.push(format!("gap {g} box {i} is not inside the hull"));
            }
        }
        if !adjacency_connected(&gap.boxes) {
            violations.push(format!("gap {g} is not connected"));
        }
    }
    for g1 in 0..sys.gaps.len() {
        for g2 in g1 + 1..sys.gaps.len() {
            let overlap = sys.gaps[g1]
                .boxes
                .iter()
                .any(|a| sys.gaps[g2].boxes.iter().any(|b| a.overlaps_open(b)));
            if overlap {
                violations.push(format!("gaps {g1} and {g2} overlap"));
            }
        }
    }
    if n == 1 {
        flags.push("dimension 1: unbounded-complement connectivity not validated".to_string());
    } else if violations.is_empty() {
        if let Ok(bb) = sys.hull.bounding_box() {
            let frame = bb.inflate(2.0);
            match region_complement(&sys.hull, &frame) {
                Ok(compl) => {
                    if !adjacency_connected(&compl.boxes) {
                        violations
                            .push("unbounded complement of the hull is not connected".to_string());
                    }
                }
                Err(e) => violations.push(format!("complement construction failed: {e}")),
            }
        }
    }
    if violations.is_empty() {
        let hull_vol = sys.hull.volume();
        let mut left = sys.hull.boxes.clone();
        for gap in &sys.gaps {
            for b in &gap.boxes {
                left = subtract_box(left, b);
            }
        }
        let leftover: f64 = left.iter().map(AxisBox::volume).sum();
        if leftover <= 1e-15 * hull_vol {
            flags.push("set has empty interior (gaps exhaust the hull volume)".to_string());
        }
    }
    ValidationReport { violations, flags }
}

/// Bisection oracle for [`size_wrt`]: decides feasibility of each candidate
/// `t` directly (does the power box admit a translate containing the
/// bounding box, axis by axis) and never takes a logarithm.
pub fn brute_force_size(
    f: &BoxRegion,
    a: &DiagonalContraction,
    tol: f64,
) -> Result<f64, GeometryError> {
    let bb = f.bounding_box()?;
    if bb.n() != a.n() {
        return Err(GeometryError::DimensionMismatch { expected: a.n(), got: bb.n() });
    }
    let half = bb.half_widths();
    let feasible = |t: f64| -> bool {
        (0..a.n()).all(|j| a.betas()[j].powf(1.0 / t) >= half[j])
    };
    bisect_threshold(feasible, tol)
}

/// Bisection oracle for [`bridge_threshold`]: feasibility of `t` is decided
/// by intersecting, per axis, the translate centers that reach `u` with
/// those that reach `w`.
pub fn brute_force_bridge(
    u: &AxisBox,
    w: &AxisBox,
    a: &DiagonalContraction,
    tol: f64,
) -> Result<f64, GeometryError> {
    if u.n() != a.n() || w.n() != a.n() {
        return Err(GeometryError::DimensionMismatch { expected: a.n(), got: u.n() });
    }
    let feasible = |t: f64| -> bool {
        (0..a.n()).all(|j| {
            let h = a.betas()[j].powf(1.0 / t);
            let lo = u.lo[j].max(w.lo[j]) - h;
            let hi = u.hi[j].min(w.hi[j]) + h;
            lo <= hi
        })
    };
    bisect_threshold(feasible, tol)
}

/// Smallest `t` with `feasible(t)` true, for a predicate monotone in `t`.
/// Returns 0 when already feasible arbitrarily close to 0 and `+inf` when
/// infeasible out to the search cap.
fn bisect_threshold<F: Fn(f64) -> bool>(feasible: F, tol: f64) -> Result<f64, GeometryError> {
    let mut lo = 1e-12;
    if feasible(lo) {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let cap = 1e15;
    while !feasible(hi) {
        hi *= 2.0;
        if hi > cap {
            return Ok(f64::INFINITY);
        }
    }
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn contraction(betas: &[f64]) -> DiagonalContraction {
        DiagonalContraction::new(betas.to_vec()).unwrap()
    }

    fn bx(lo: &[f64], hi: &[f64]) -> AxisBox {
        AxisBox::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn contraction_rejects_bad_entries() {
        assert!(DiagonalContraction::new(vec![]).is_err());
        assert!(DiagonalContraction::new(vec![0.0]).is_err());
        assert!(DiagonalContraction::new(vec![1.0]).is_err());
        assert!(DiagonalContraction::new(vec![0.5, f64::NAN]).is_err());
        assert!(DiagonalContraction::new(vec![0.5, 0.25]).is_ok());
    }

    #[test]
    fn box_constructor_rejects_degenerate() {
        assert_eq!(
            AxisBox::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap_err(),
            GeometryError::DegenerateBox(1)
        );
        assert!(AxisBox::new(vec![0.0], vec![0.0]).is_err());
        assert!(AxisBox::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn size_of_small_square_under_anisotropic_contraction() {
        // half-widths (1/8, 1/8); exponents log_{1/4}(1/8) = 3/2 and
        // log_{1/2}(1/8) = 3; the binding axis gives 1/S = 3/2.
        let a = contraction(&[0.25, 0.5]);
        let f = BoxRegion::closed(vec![bx(&[-0.125, -0.125], &[0.125, 0.125])]);
        let s = size_wrt(&f, &a).unwrap();
        assert!((s - 2.0 / 3.0).abs() < 1e-12, "S = {s}");
        assert!((size_exponent(&f, &a).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn size_is_infinite_once_a_half_width_reaches_one() {
        let a = contraction(&[0.5, 0.5]);
        let f = BoxRegion::closed(vec![bx(&[0.0, 0.0], &[2.0, 0.5])]);
        assert_eq!(size_wrt(&f, &a).unwrap(), f64::INFINITY);
        assert_eq!(size_exponent(&f, &a).unwrap(), 0.0);
    }

    #[test]
    fn size_sees_only_the_bounding_box() {
        let a = contraction(&[0.3, 0.4]);
        let one = BoxRegion::closed(vec![bx(&[0.0, 0.0], &[0.4, 0.3])]);
        let split = BoxRegion::closed(vec![
            bx(&[0.0, 0.0], &[0.1, 0.3]),
            bx(&[0.3, 0.1], &[0.4, 0.3]),
        ]);
        assert_eq!(size_wrt(&one, &a).unwrap(), size_wrt(&split, &a).unwrap());
    }

    #[test]
    fn axis_gaps_zero_on_overlap_and_positive_on_separation() {
        let u = bx(&[0.0, 0.0], &[0.1, 0.1]);
        let w = bx(&[0.3, 0.0], &[0.4, 0.1]);
        assert_eq!(axis_gaps(&u, &w), vec![0.19999999999999998, 0.0]);
        let o = bx(&[0.05, -0.2], &[0.3, 0.05]);
        assert_eq!(axis_gaps(&u, &o), vec![0.0, 0.0]);
    }

    #[test]
    fn bridge_threshold_of_separated_squares() {
        // single positive axis gap 0.2 under beta = 0.2: the critical
        // exponent is log_{0.2}(0.1) and t* its reciprocal (both frozen
        // from the bisection oracle).
        let a = contraction(&[0.2, 0.2]);
        let u = bx(&[0.0, 0.0], &[0.1, 0.1]);
        let w = bx(&[0.3, 0.0], &[0.4, 0.1]);
        let e = bridge_exponent(&u, &w, &a);
        let t = bridge_threshold(&u, &w, &a);
        assert!((e - 1.430676558073393).abs() < 1e-12);
        assert!((t - 0.6989700043360187).abs() < 1e-12);
        let oracle = brute_force_bridge(&u, &w, &a, 1e-9).unwrap();
        assert!((t - oracle).abs() < 1e-6, "closed form {t} vs oracle {oracle}");
    }

    #[test]
    fn bridge_threshold_zero_iff_closed_boxes_meet() {
        let a = contraction(&[0.5, 0.5]);
        let u = bx(&[0.0, 0.0], &[1.0, 1.0]);
        let touching = bx(&[1.0, 0.0], &[2.0, 1.0]);
        assert_eq!(bridge_threshold(&u, &touching, &a), 0.0);
        let apart = bx(&[1.5, 0.0], &[2.0, 1.0]);
        assert!(bridge_threshold(&u, &apart, &a) > 0.0);
    }

    #[test]
    fn bridge_threshold_infinite_across_gap_of_two() {
        let a = contraction(&[0.5]);
        let u = bx(&[0.0], &[1.0]);
        let w = bx(&[3.0], &[4.0]);
        assert_eq!(bridge_threshold(&u, &w, &a), f64::INFINITY);
        assert_eq!(brute_force_bridge(&u, &w, &a, 1e-9).unwrap(), f64::INFINITY);
    }

    #[test]
    fn size_oracle_agrees_on_a_fixed_instance() {
        let a = contraction(&[0.25, 0.5]);
        let f = BoxRegion::closed(vec![bx(&[-0.125, -0.125], &[0.125, 0.125])]);
        let s = size_wrt(&f, &a).unwrap();
        let o = brute_force_size(&f, &a, 1e-9).unwrap();
        assert!((s - o).abs() < 1e-6);
    }

    #[test]
    fn subtraction_produces_complement_closure() {
        let frame = bx(&[-2.0, -2.0], &[2.0, 2.0]);
        let hull = BoxRegion::closed(vec![bx(&[-1.0, -1.0], &[1.0, 1.0])]);
        let compl = region_complement(&hull, &frame).unwrap();
        let finite: Vec<_> = compl.boxes.iter().filter(|b| b.is_finite()).collect();
        assert_eq!(finite.len(), 4);
        assert_eq!(compl.boxes.len() - finite.len(), 4, "two slabs per axis");
        let vol: f64 = finite.iter().map(|b| b.volume()).sum();
        assert!((vol - 12.0).abs() < 1e-12);
    }

    #[test]
    fn covered_by_handles_split_covers_and_gaps() {
        let t = bx(&[0.0, 0.0], &[1.0, 1.0]);
        let halves = [bx(&[0.0, 0.0], &[1.0, 0.5]), bx(&[0.0, 0.5], &[1.0, 1.0])];
        assert!(covered_by(&t, &halves));
        let short = [bx(&[0.0, 0.0], &[1.0, 0.5]), bx(&[0.0, 0.6], &[1.0, 1.0])];
        assert!(!covered_by(&t, &short));
        let bigger = [bx(&[-1.0, -1.0], &[2.0, 2.0])];
        assert!(covered_by(&t, &bigger));
        assert!(!covered_by(&t, &[]));
    }

    #[test]
    fn validation_flags_overlap_containment_and_disconnection() {
        let hull = BoxRegion::closed(vec![bx(&[-1.0, -1.0], &[1.0, 1.0])]);
        let ok = GapSystem::new(
            hull.clone(),
            vec![BoxRegion::open(vec![bx(&[-0.2, -0.2], &[0.2, 0.2])])],
        )
        .unwrap();
        assert!(validate_gap_system(&ok).ok());

        let overlapping = GapSystem::new(
            hull.clone(),
            vec![
                BoxRegion::open(vec![bx(&[-0.2, -0.2], &[0.2, 0.2])]),
                BoxRegion::open(vec![bx(&[0.0, 0.0], &[0.3, 0.3])]),
            ],
        )
        .unwrap();
        assert!(!validate_gap_system(&overlapping).ok());

        let escaping = GapSystem::new(
            hull.clone(),
            vec![BoxRegion::open(vec![bx(&[0.5, 0.5], &[1.5, 0.9])])],
        )
        .unwrap();
        assert!(!validate_gap_system(&escaping).ok());

        // two boxes touching only at a corner do not make one open region
        let corner = GapSystem::new(
            hull,
            vec![BoxRegion::open(vec![
                bx(&[-0.4, -0.4], &[-0.1, -0.1]),
                bx(&[-0.1, -0.1], &[0.2, 0.2]),
            ])],
        )
        .unwrap();
        let report = validate_gap_system(&corner);
        assert!(report.violations.iter().any(|v| v.contains("not connected")), "{report:?}");
    }

    #[test]
    fn validation_rejects_hull_with_disconnected_complement() {
        // a square ring of four boxes encloses a hole, splitting the
        // complement into the hole and the outside
        let ring = BoxRegion::closed(vec![
            bx(&[-1.0, -1.0], &[1.0, -0.5]),
            bx(&[-1.0, 0.5], &[1.0, 1.0]),
            bx(&[-1.0, -0.5], &[-0.5, 0.5]),
            bx(&[0.5, -0.5], &[1.0, 0.5]),
        ]);
        let sys = GapSystem::new(ring, vec![]).unwrap();
        let report = validate_gap_system(&sys);
        assert!(
            report.violations.iter().any(|v| v.contains("complement")),
            "expected complement violation, got {report:?}"
        );
    }

    #[test]
    fn validation_flags_dimension_one() {
        let sys = GapSystem::new(
            BoxRegion::closed(vec![bx(&[-1.0], &[1.0])]),
            vec![BoxRegion::open(vec![bx(&[-0.1], &[0.1])])],
        )
        .unwrap();
        let report = validate_gap_system(&sys);
        assert!(report.ok());
        assert!(report.flags.iter().any(|f| f.contains("dimension 1")));
    }

    #[test]
    fn shared_wall_gaps_validate_and_touch() {
        // disjoint as open sets even though the closures share a wall
        let hull = BoxRegion::closed(vec![bx(&[0.0, 0.0], &[2.0, 1.0])]);
        let sys = GapSystem::new(
            hull,
            vec![
                BoxRegion::open(vec![bx(&[0.2, 0.2], &[1.0, 0.8])]),
                BoxRegion::open(vec![bx(&[1.0, 0.2], &[1.8, 0.8])]),
            ],
        )
        .unwrap();
        assert!(validate_gap_system(&sys).ok());
        let a = contraction(&[0.5, 0.5]);
        assert_eq!(
            bridge_threshold(&sys.gaps[0].boxes[0], &sys.gaps[1].boxes[0], &a),
            0.0
        );
    }

    proptest! {
        #[test]
        fn size_is_translation_invariant(
            cx in -5.0f64..5.0, cy in -5.0f64..5.0,
            hx in 0.01f64..0.9, hy in 0.01f64..0.9,
            b1 in 0.05f64..0.95, b2 in 0.05f64..0.95,
            tx in -3.0f64..3.0, ty in -3.0f64..3.0,
        ) {
            let a = contraction(&[b1, b2]);
            let f = BoxRegion::closed(vec![AxisBox::around(&[cx, cy], &[hx, hy]).unwrap()]);
            let g = BoxRegion::closed(vec![AxisBox::around(&[cx + tx, cy + ty], &[hx, hy]).unwrap()]);
            let sf = size_exponent(&f, &a).unwrap();
            let sg = size_exponent(&g, &a).unwrap();
            prop_assert!((sf - sg).abs() <= 1e-9 * sf.abs().max(1.0));
        }

        #[test]
        fn bridge_is_symmetric(
            ux in -2.0f64..2.0, uy in -2.0f64..2.0,
            wx in -2.0f64..2.0, wy in -2.0f64..2.0,
            h in 0.05f64..0.5,
            b1 in 0.05f64..0.95, b2 in 0.05f64..0.95,
        ) {
            let a = contraction(&[b1, b2]);
            let u = AxisBox::around(&[ux, uy], &[h, h]).unwrap();
            let w = AxisBox::around(&[wx, wy], &[h, h]).unwrap();
            prop_assert_eq!(
                bridge_threshold(&u, &w, &a).to_bits(),
                bridge_threshold(&w, &u, &a).to_bits()
            );
        }

        #[test]
        fn subtraction_conserves_volume(
            sl in -1.0f64..0.0, sw in 0.5f64..2.0,
            cl in -1.5f64..1.5, cw in 0.2f64..1.5,
        ) {
            let s = bx(&[sl, sl], &[sl + sw, sl + sw]);
            let c = bx(&[cl, cl], &[cl + cw, cl + cw]);
            let pieces = subtract_box(vec![s.clone()], &c);
            let cut_vol = if s.overlaps_open(&c) {
                let lo: Vec<f64> = (0..2).map(|j| s.lo()[j].max(c.lo()[j])).collect();
                let hi: Vec<f64> = (0..2).map(|j| s.hi()[j].min(c.hi()[j])).collect();
                (hi[0] - lo[0]) * (hi[1] - lo[1])
            } else { 0.0 };
            let total: f64 = pieces.iter().map(AxisBox::volume).sum();
            prop_assert!((total + cut_vol - s.volume()).abs() < 1e-12);
            for p in &pieces {
                prop_assert!(!p.overlaps_open(&c));
            }
        }
    }
}
