//! Exact-arithmetic checks for the gap-lemma hypotheses.
//!
//! The predicates in this module ask questions like "is the boundary of this
//! open region contained in that one?". Such tests are not robust under
//! floating-point rounding: a boundary face lies exactly on a coordinate
//! plane, and a one-ulp error flips the answer. So everything here runs on
//! arbitrary-precision rationals, with boxes that record per-face openness.
//! Every predicate reduces to exact emptiness tests of box-union regions
//! built by intersection and subtraction; no tolerances appear anywhere.
//!
//! A compact set is described by an [`ExactSystem`]: a closed hull (box
//! union) minus a list of open gaps (each a connected box union). The listed
//! gaps are the bounded complementary components of the set; everything
//! outside the hull counts as the unbounded component. Callers should supply
//! hulls whose complement is connected, which holds for every system built
//! by this crate.
//!
//! The final verdict is one-sided by design: `CertifiedNonempty` asserts the
//! two sets intersect, while `Inconclusive` asserts nothing. Thickness alone
//! cannot certify an empty intersection.

use num::{BigInt, BigRational, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{AxisBox, BoxRegion, DiagonalContraction, GapSystem, GeometryError};
use crate::thickness::{affine_thickness, ThicknessError, ThicknessTag};

/// Arbitrary-precision rational coordinate.
pub type Rat = BigRational;

#[derive(Debug, Error)]
pub enum GapLemmaError {
    #[error("a box needs at least one axis")]
    NoAxes,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("box bounds out of order on axis {axis}")]
    BadBounds { axis: usize },
    #[error("{0} boxes must be {1}")]
    WrongOpenness(&'static str, &'static str),
    #[error("hull box {0} is degenerate (zero width on some axis)")]
    DegenerateHullBox(usize),
    #[error("gap {0} is empty")]
    EmptyGap(usize),
    #[error("system needs at least one hull box")]
    EmptyHull,
    #[error("gap {0} reaches outside the hull")]
    GapOutsideHull(usize),
    #[error("gaps {0} and {1} overlap")]
    OverlappingGaps(usize, usize),
    #[error("gap {0} is a disconnected box union")]
    DisconnectedGap(usize),
    #[error("coordinate {0} has no exact rational value")]
    Unrepresentable(f64),
    #[error("cannot read {0:?} as a rational (use \"p/q\" or an integer)")]
    BadRational(String),
    #[error("coordinate overflows double precision")]
    FloatOverflow,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Thickness(#[from] ThicknessError),
}

/// Axis-aligned box with exact rational corners and per-face openness.
///
/// An axis interval runs from `lo` to `hi`; each end is either closed
/// (included) or open (excluded). Degenerate boxes, where `lo == hi` on some
/// axis with both faces closed, are legal and denote lower-dimensional
/// slabs; they arise as boundary pieces under subtraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactBox {
    lo: Vec<Rat>,
    hi: Vec<Rat>,
    lo_closed: Vec<bool>,
    hi_closed: Vec<bool>,
}

impl ExactBox {
    pub fn new(
        lo: Vec<Rat>,
        hi: Vec<Rat>,
        lo_closed: Vec<bool>,
        hi_closed: Vec<bool>,
    ) -> Result<Self, GapLemmaError> {
        if lo.is_empty() {
            return Err(GapLemmaError::NoAxes);
        }
        for other in [hi.len(), lo_closed.len(), hi_closed.len()] {
            if other != lo.len() {
                return Err(GapLemmaError::DimensionMismatch(lo.len(), other));
            }
        }
        for (axis, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if l > h {
                return Err(GapLemmaError::BadBounds { axis });
            }
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    /// Box with every face closed.
    pub fn closed(lo: Vec<Rat>, hi: Vec<Rat>) -> Result<Self, GapLemmaError> {
        let n = lo.len();
        Self::new(lo, hi, vec![true; n], vec![true; n])
    }

    /// Box with every face open.
    pub fn open(lo: Vec<Rat>, hi: Vec<Rat>) -> Result<Self, GapLemmaError> {
        let n = lo.len();
        Self::new(lo, hi, vec![false; n], vec![false; n])
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rat] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rat] {
        &self.hi
    }

    /// True when no point satisfies all the face constraints.
    pub fn is_empty(&self) -> bool {
        (0..self.n()).any(|j| {
            self.lo[j] > self.hi[j]
                || (self.lo[j] == self.hi[j] && !(self.lo_closed[j] && self.hi_closed[j]))
        })
    }

    pub fn is_fully_open(&self) -> bool {
        self.lo_closed.iter().chain(&self.hi_closed).all(|&c| !c)
    }

    pub fn is_fully_closed(&self) -> bool {
        self.lo_closed.iter().chain(&self.hi_closed).all(|&c| c)
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        p.len() == self.n()
            && (0..self.n()).all(|j| {
                let above = p[j] > self.lo[j] || (self.lo_closed[j] && p[j] == self.lo[j]);
                let below = p[j] < self.hi[j] || (self.hi_closed[j] && p[j] == self.hi[j]);
                above && below
            })
    }

    pub fn closure(&self) -> ExactBox {
        let n = self.n();
        ExactBox {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: vec![true; n],
            hi_closed: vec![true; n],
        }
    }

    /// Intersection; may come out empty. On a tied face the result is closed
    /// only when both operands are.
    pub fn intersect(&self, other: &ExactBox) -> ExactBox {
        debug_assert_eq!(self.n(), other.n());
        let n = self.n();
        let mut out = self.clone();
        for j in 0..n {
            match other.lo[j].cmp(&out.lo[j]) {
                std::cmp::Ordering::Greater => {
                    out.lo[j] = other.lo[j].clone();
                    out.lo_closed[j] = other.lo_closed[j];
                }
                std::cmp::Ordering::Equal => out.lo_closed[j] &= other.lo_closed[j],
                std::cmp::Ordering::Less => {}
            }
            match other.hi[j].cmp(&out.hi[j]) {
                std::cmp::Ordering::Less => {
                    out.hi[j] = other.hi[j].clone();
                    out.hi_closed[j] = other.hi_closed[j];
                }
                std::cmp::Ordering::Equal => out.hi_closed[j] &= other.hi_closed[j],
                std::cmp::Ordering::Greater => {}
            }
        }
        out
    }

    /// A point inside the box, or `None` when empty. Midpoints keep the
    /// sample clear of open faces.
    pub fn sample(&self) -> Option<Vec<Rat>> {
        if self.is_empty() {
            return None;
        }
        let two = Rat::from_integer(BigInt::from(2));
        Some(
            (0..self.n())
                .map(|j| {
                    if self.lo[j] == self.hi[j] {
                        self.lo[j].clone()
                    } else {
                        (&self.lo[j] + &self.hi[j]) / &two
                    }
                })
                .collect(),
        )
    }
}

/// Removes `b` from `a`, returning disjoint leftover pieces. Face openness
/// is tracked exactly: cutting a closed box along an open one leaves the
/// shared faces in the output.
fn subtract_box(a: &ExactBox, b: &ExactBox) -> Vec<ExactBox> {
    let core = a.intersect(b);
    if core.is_empty() {
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    let mut rem = a.clone();
    for j in 0..a.n() {
        let mut left = rem.clone();
        left.hi[j] = core.lo[j].clone();
        left.hi_closed[j] = !core.lo_closed[j];
        if !left.is_empty() {
            out.push(left);
        }
        let mut right = rem.clone();
        right.lo[j] = core.hi[j].clone();
        right.lo_closed[j] = !core.hi_closed[j];
        if !right.is_empty() {
            out.push(right);
        }
        rem.lo[j] = core.lo[j].clone();
        rem.lo_closed[j] = core.lo_closed[j];
        rem.hi[j] = core.hi[j].clone();
        rem.hi_closed[j] = core.hi_closed[j];
    }
    out
}

/// Finite union of [`ExactBox`]es. The boxes may overlap; all operations
/// treat the region as the set union.
#[derive(Debug, Clone)]
pub struct ExactRegion {
    boxes: Vec<ExactBox>,
}

impl ExactRegion {
    pub fn new(boxes: Vec<ExactBox>) -> Self {
        Self { boxes: boxes.into_iter().filter(|b| !b.is_empty()).collect() }
    }

    pub fn boxes(&self) -> &[ExactBox] {
        &self.boxes
    }

    pub fn n(&self) -> Option<usize> {
        self.boxes.first().map(ExactBox::n)
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    pub fn closure(&self) -> ExactRegion {
        ExactRegion::new(self.boxes.iter().map(ExactBox::closure).collect())
    }

    pub fn intersect(&self, other: &ExactRegion) -> ExactRegion {
        let mut out = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        ExactRegion { boxes: out }
    }

    pub fn meets(&self, other: &ExactRegion) -> bool {
        self.boxes
            .iter()
            .any(|a| other.boxes.iter().any(|b| !a.intersect(b).is_empty()))
    }

    pub fn subtract(&self, other: &ExactRegion) -> ExactRegion {
        let mut pieces = self.boxes.clone();
        for b in &other.boxes {
            pieces = pieces.iter().flat_map(|p| subtract_box(p, b)).collect();
        }
        ExactRegion { boxes: pieces }
    }

    pub fn is_subset_of(&self, other: &ExactRegion) -> bool {
        self.subtract(other).is_empty()
    }

    /// Topological boundary of the union: its closure minus the region
    /// itself. For open regions this is exactly the usual boundary; shared
    /// internal faces covered by a neighboring box drop out.
    pub fn boundary(&self) -> ExactRegion {
        self.closure().subtract(self)
    }

    pub fn sample(&self) -> Option<Vec<Rat>> {
        self.boxes.iter().find_map(ExactBox::sample)
    }
}

/// True when the two regions are equal as point sets.
pub fn regions_equal(a: &ExactRegion, b: &ExactRegion) -> bool {
    a.is_subset_of(b) && b.is_subset_of(a)
}

/// Compact set given as a closed hull minus open bounded gaps.
///
/// Each gap region is one bounded complementary component, so it must be a
/// connected open union, sit inside the hull, and stay disjoint from every
/// other gap (closures may touch; the shared face then belongs to the set).
#[derive(Debug, Clone)]
pub struct ExactSystem {
    hull: ExactRegion,
    gaps: Vec<ExactRegion>,
}

impl ExactSystem {
    pub fn new(hull: ExactRegion, gaps: Vec<ExactRegion>) -> Result<Self, GapLemmaError> {
        let n = hull.n().ok_or(GapLemmaError::EmptyHull)?;
        for (i, b) in hull.boxes.iter().enumerate() {
            if b.n() != n {
                return Err(GapLemmaError::DimensionMismatch(n, b.n()));
            }
            if !b.is_fully_closed() {
                return Err(GapLemmaError::WrongOpenness("hull", "closed"));
            }
            if (0..n).any(|j| b.lo[j] == b.hi[j]) {
                return Err(GapLemmaError::DegenerateHullBox(i));
            }
        }
        for (i, gap) in gaps.iter().enumerate() {
            if gap.is_empty() {
                return Err(GapLemmaError::EmptyGap(i));
            }
            for b in &gap.boxes {
                if b.n() != n {
                    return Err(GapLemmaError::DimensionMismatch(n, b.n()));
                }
                if !b.is_fully_open() {
                    return Err(GapLemmaError::WrongOpenness("gap", "open"));
                }
            }
            if !connected(gap) {
                return Err(GapLemmaError::DisconnectedGap(i));
            }
            if !gap.is_subset_of(&hull) {
                return Err(GapLemmaError::GapOutsideHull(i));
            }
        }
        for i in 0..gaps.len() {
            for j in i + 1..gaps.len() {
                if gaps[i].meets(&gaps[j]) {
                    return Err(GapLemmaError::OverlappingGaps(i, j));
                }
            }
        }
        Ok(Self { hull, gaps })
    }

    pub fn n(&self) -> usize {
        self.hull.n().expect("validated hull is nonempty")
    }

    pub fn hull(&self) -> &ExactRegion {
        &self.hull
    }

    pub fn gaps(&self) -> &[ExactRegion] {
        &self.gaps
    }

    /// The represented compact set, hull minus all gaps, as an explicit
    /// region.
    pub fn compact_region(&self) -> ExactRegion {
        let mut k = self.hull.clone();
        for gap in &self.gaps {
            k = k.subtract(gap);
        }
        k
    }
}

/// An open box union is connected exactly when its boxes form a connected
/// graph under open overlap (face-touching does not count: the shared face
/// is in neither box).
fn connected(region: &ExactRegion) -> bool {
    let m = region.boxes.len();
    if m <= 1 {
        return true;
    }
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..m {
            if !seen[j] && !region.boxes[i].intersect(&region.boxes[j]).is_empty() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Two open regions are linked when they overlap and each one's boundary
/// escapes the other. A pair that is equal as a point set is treated as not
/// linked (and not disjoint), the reading under which a set is never linked
/// with itself.
pub fn linked(u: &ExactRegion, v: &ExactRegion) -> bool {
    if !u.meets(v) || regions_equal(u, v) {
        return false;
    }
    !u.boundary().subtract(v).is_empty() && !v.boundary().subtract(u).is_empty()
}

#[derive(Debug, Clone, Serialize)]
pub struct BgLinkedReport {
    pub holds: bool,
    /// First gap pair (index in first system, index in second) that overlaps
    /// without being linked.
    pub counterwitness: Option<(usize, usize)>,
}

/// Checks that every bounded gap pair across the two systems is either
/// linked or disjoint.
pub fn bg_linked(sys1: &ExactSystem, sys2: &ExactSystem) -> BgLinkedReport {
    for (i, g1) in sys1.gaps.iter().enumerate() {
        for (j, g2) in sys2.gaps.iter().enumerate() {
            if g1.meets(g2) && !linked(g1, g2) {
                return BgLinkedReport { holds: false, counterwitness: Some((i, j)) };
            }
        }
    }
    BgLinkedReport { holds: true, counterwitness: None }
}

/// Drops from the first system every gap whose closure lies inside a single
/// gap of the second, then drops from the second system every gap whose
/// closure lies inside a gap of the already-refined first. The order
/// matters: a gap of the second system contained only in a just-removed gap
/// of the first is retained. Removing gaps fills them back into the set, so
/// the represented intersection is unchanged and neither thickness can
/// decrease.
pub fn remove_contained_gaps(
    sys1: &ExactSystem,
    sys2: &ExactSystem,
) -> (ExactSystem, ExactSystem) {
    let surviving1: Vec<ExactRegion> = sys1
        .gaps
        .iter()
        .filter(|g1| {
            let closure = g1.closure();
            !sys2.gaps.iter().any(|g2| closure.is_subset_of(g2))
        })
        .cloned()
        .collect();
    let surviving2: Vec<ExactRegion> = sys2
        .gaps
        .iter()
        .filter(|g2| {
            let closure = g2.closure();
            !surviving1.iter().any(|g1| closure.is_subset_of(g1))
        })
        .cloned()
        .collect();
    let refined1 = ExactSystem { hull: sys1.hull.clone(), gaps: surviving1 };
    let refined2 = ExactSystem { hull: sys2.hull.clone(), gaps: surviving2 };
    (refined1, refined2)
}

#[derive(Debug, Clone, Serialize)]
pub struct SufficientConditionReport {
    /// Some gap of each system survives any gap of the other (its closure
    /// fits in none of them) while its boundary still touches the other
    /// hull.
    pub bullet1: bool,
    pub witness1: Option<usize>,
    pub witness2: Option<usize>,
    /// For every cross pair, a boundary trapped inside the other gap forces
    /// the whole gap inside (no annulus-style wrapping).
    pub bullet2: bool,
    pub violation: Option<(usize, usize)>,
    pub holds: bool,
}

fn bullet1_witness(from: &ExactSystem, against: &ExactSystem) -> Option<usize> {
    from.gaps.iter().position(|g| {
        let closure = g.closure();
        let escapes_gaps = !against.gaps.iter().any(|other| closure.is_subset_of(other));
        escapes_gaps && g.boundary().meets(&against.hull)
    })
}

/// Checks the two-bullet sufficient condition under which the pair can be
/// refined into a linked configuration without losing thickness or
/// intersection points.
pub fn strongly_refinable_sufficient(
    sys1: &ExactSystem,
    sys2: &ExactSystem,
) -> SufficientConditionReport {
    let witness1 = bullet1_witness(sys1, sys2);
    let witness2 = bullet1_witness(sys2, sys1);
    let bullet1 = witness1.is_some() && witness2.is_some();

    let mut violation = None;
    'pairs: for (i, g1) in sys1.gaps.iter().enumerate() {
        for (j, g2) in sys2.gaps.iter().enumerate() {
            let forward = !g1.boundary().is_subset_of(g2) || g1.is_subset_of(g2);
            let backward = !g2.boundary().is_subset_of(g1) || g2.is_subset_of(g1);
            if !(forward && backward) {
                violation = Some((i, j));
                break 'pairs;
            }
        }
    }
    let bullet2 = violation.is_none();
    SufficientConditionReport {
        bullet1,
        witness1,
        witness2,
        bullet2,
        violation,
        holds: bullet1 && bullet2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedNonempty,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapLemmaVerdict {
    /// Whether the refined pair is fully linked-or-disjoint; informational,
    /// since identical gap pairs report false here without blocking the
    /// certificate.
    pub bg_linked: bool,
    pub bg_counterwitness: Option<(usize, usize)>,
    pub sufficient: SufficientConditionReport,
    pub tau1: f64,
    pub tau1_tag: ThicknessTag,
    pub tau2: f64,
    pub tau2_tag: ThicknessTag,
    pub thickness_sum: f64,
    pub verdict: Verdict,
}

/// Full pipeline: refine away contained gaps, test the sufficient
/// condition, measure both thicknesses, and certify a nonempty intersection
/// when the condition holds and the thicknesses sum to something positive.
///
/// The thicknesses are taken on the systems as given, which is the
/// conservative side: refinement can only raise them. An indeterminate sum
/// (one thickness at each infinity) never certifies.
pub fn gap_lemma_verdict(
    sys1: &ExactSystem,
    sys2: &ExactSystem,
    a: &DiagonalContraction,
) -> Result<GapLemmaVerdict, GapLemmaError> {
    if sys1.n() != sys2.n() {
        return Err(GapLemmaError::DimensionMismatch(sys1.n(), sys2.n()));
    }
    let (refined1, refined2) = remove_contained_gaps(sys1, sys2);
    let bg = bg_linked(&refined1, &refined2);
    let sufficient = strongly_refinable_sufficient(sys1, sys2);
    let rep1 = affine_thickness(&float_system_from_exact(sys1)?, a)?;
    let rep2 = affine_thickness(&float_system_from_exact(sys2)?, a)?;
    let thickness_sum = rep1.tau + rep2.tau;
    let verdict = if sufficient.holds && thickness_sum > 0.0 {
        Verdict::CertifiedNonempty
    } else {
        Verdict::Inconclusive
    };
    Ok(GapLemmaVerdict {
        bg_linked: bg.holds,
        bg_counterwitness: bg.counterwitness,
        sufficient,
        tau1: rep1.tau,
        tau1_tag: rep1.tag,
        tau2: rep2.tau,
        tau2_tag: rep2.tag,
        thickness_sum,
        verdict,
    })
}

/// Exact intersection of the two represented compact sets.
pub fn exact_intersection(sys1: &ExactSystem, sys2: &ExactSystem) -> ExactRegion {
    sys1.compact_region().intersect(&sys2.compact_region())
}

/// A point in both compact sets, or `None` when they are disjoint.
pub fn exact_intersection_witness(
    sys1: &ExactSystem,
    sys2: &ExactSystem,
) -> Option<Vec<Rat>> {
    let k1 = sys1.compact_region();
    let k2 = sys2.compact_region();
    for a in k1.boxes() {
        for b in k2.boxes() {
            if let Some(p) = a.intersect(b).sample() {
                return Some(p);
            }
        }
    }
    None
}

/// Exact rational for a finite double; the conversion is always exact since
/// doubles are dyadic.
pub fn rat_from_f64(x: f64) -> Result<Rat, GapLemmaError> {
    Rat::from_float(x).ok_or(GapLemmaError::Unrepresentable(x))
}

/// Parses `"p/q"` or a plain integer.
pub fn parse_rat(s: &str) -> Result<Rat, GapLemmaError> {
    s.trim().parse().map_err(|_| GapLemmaError::BadRational(s.to_owned()))
}

/// Embeds a floating-point gap system exactly. Hull boxes become closed
/// exact boxes, gap boxes open ones.
pub fn exact_system_from_float(sys: &GapSystem) -> Result<ExactSystem, GapLemmaError> {
    let to_box = |b: &AxisBox, open: bool| -> Result<ExactBox, GapLemmaError> {
        let lo = b.lo().iter().copied().map(rat_from_f64).collect::<Result<Vec<_>, _>>()?;
        let hi = b.hi().iter().copied().map(rat_from_f64).collect::<Result<Vec<_>, _>>()?;
        if open {
            ExactBox::open(lo, hi)
        } else {
            ExactBox::closed(lo, hi)
        }
    };
    let hull = ExactRegion::new(
        sys.hull.boxes.iter().map(|b| to_box(b, false)).collect::<Result<Vec<_>, _>>()?,
    );
    let gaps = sys
        .gaps
        .iter()
        .map(|g| {
            Ok(ExactRegion::new(
                g.boxes.iter().map(|b| to_box(b, true)).collect::<Result<Vec<_>, _>>()?,
            ))
        })
        .collect::<Result<Vec<_>, GapLemmaError>>()?;
    ExactSystem::new(hull, gaps)
}

/// Rounds an exact system to doubles for the floating-point thickness
/// pipeline.
pub fn float_system_from_exact(sys: &ExactSystem) -> Result<GapSystem, GapLemmaError> {
    let to_box = |b: &ExactBox| -> Result<AxisBox, GapLemmaError> {
        let take = |r: &Rat| r.to_f64().filter(|v| v.is_finite()).ok_or(GapLemmaError::FloatOverflow);
        let lo = b.lo.iter().map(take).collect::<Result<Vec<_>, _>>()?;
        let hi = b.hi.iter().map(take).collect::<Result<Vec<_>, _>>()?;
        Ok(AxisBox::new(lo, hi)?)
    };
    let hull = BoxRegion::closed(
        sys.hull.boxes.iter().map(to_box).collect::<Result<Vec<_>, _>>()?,
    );
    let gaps = sys
        .gaps
        .iter()
        .map(|g| Ok(BoxRegion::open(g.boxes.iter().map(to_box).collect::<Result<Vec<_>, _>>()?)))
        .collect::<Result<Vec<_>, GapLemmaError>>()?;
    Ok(GapSystem::new(hull, gaps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpets::CarpetSpec;

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn ri(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn obox(lo: [i64; 2], hi: [i64; 2], den: i64) -> ExactBox {
        ExactBox::open(
            lo.iter().map(|&v| rq(v, den)).collect(),
            hi.iter().map(|&v| rq(v, den)).collect(),
        )
        .unwrap()
    }

    fn cbox(lo: [i64; 2], hi: [i64; 2], den: i64) -> ExactBox {
        ExactBox::closed(
            lo.iter().map(|&v| rq(v, den)).collect(),
            hi.iter().map(|&v| rq(v, den)).collect(),
        )
        .unwrap()
    }

    fn unit_hull() -> ExactRegion {
        ExactRegion::new(vec![cbox([-1, -1], [1, 1], 1)])
    }

    fn sys(gaps: Vec<Vec<ExactBox>>) -> ExactSystem {
        ExactSystem::new(unit_hull(), gaps.into_iter().map(ExactRegion::new).collect())
            .unwrap()
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> Vec<Rat> {
        vec![rq(x.0, x.1), rq(y.0, y.1)]
    }

    #[test]
    fn subtracting_an_open_box_from_its_closure_leaves_the_faces() {
        let closed = ExactRegion::new(vec![cbox([-1, -1], [1, 1], 1)]);
        let open = ExactRegion::new(vec![obox([-1, -1], [1, 1], 1)]);
        let boundary = closed.subtract(&open);
        assert_eq!(boundary.boxes().len(), 4);
        for b in boundary.boxes() {
            assert!((0..2).any(|j| b.lo()[j] == b.hi()[j]));
        }
        assert!(boundary.contains(&pt((1, 1), (0, 1))));
        assert!(boundary.contains(&pt((-1, 1), (-1, 1))));
        assert!(!boundary.contains(&pt((0, 1), (0, 1))));
    }

    #[test]
    fn intersection_respects_face_openness() {
        let a = cbox([0, 0], [1, 1], 1);
        let b = obox([1, 0], [2, 1], 1);
        assert!(a.intersect(&b).is_empty());
        let c = cbox([1, 0], [2, 1], 1);
        let edge = a.intersect(&c);
        assert!(!edge.is_empty());
        assert!(edge.contains(&pt((1, 1), (1, 2))));
    }

    #[test]
    fn samples_land_inside() {
        let b = obox([-1, -1], [1, 3], 2);
        let p = b.sample().unwrap();
        assert!(b.contains(&p));
        let degenerate = cbox([1, -1], [1, 1], 1);
        let q = degenerate.sample().unwrap();
        assert_eq!(q[0], ri(1));
    }

    #[test]
    fn region_equality_ignores_how_the_union_is_cut() {
        let whole = ExactRegion::new(vec![cbox([0, 0], [2, 2], 1)]);
        let split = ExactRegion::new(vec![cbox([0, 0], [1, 2], 1), cbox([1, 0], [2, 2], 1)]);
        assert!(regions_equal(&whole, &split));
        let missing = ExactRegion::new(vec![cbox([0, 0], [1, 2], 1)]);
        assert!(!regions_equal(&whole, &missing));
    }

    #[test]
    fn linked_requires_overlap_and_mutual_escape() {
        let u = ExactRegion::new(vec![obox([0, 0], [2, 2], 1)]);
        let v = ExactRegion::new(vec![obox([1, 1], [3, 3], 1)]);
        assert!(linked(&u, &v));
        assert!(linked(&v, &u));

        let far = ExactRegion::new(vec![obox([5, 5], [6, 6], 1)]);
        assert!(!linked(&u, &far));

        let inside = ExactRegion::new(vec![obox([1, 1], [3, 3], 2)]);
        assert!(!linked(&u, &inside));
        assert!(!linked(&inside, &u));
    }

    #[test]
    fn identical_regions_are_not_linked() {
        let u = ExactRegion::new(vec![obox([0, 0], [4, 4], 2)]);
        // Same open square, written as two overlapping halves.
        let split = ExactRegion::new(vec![obox([0, 0], [3, 4], 2), obox([1, 0], [4, 4], 2)]);
        assert!(regions_equal(&u, &split));
        assert!(!linked(&u, &u));
        assert!(!linked(&u, &split));
        assert!(!linked(&split, &u));
    }

    #[test]
    fn system_validation_rejects_bad_shapes() {
        let hull = unit_hull();
        let outside = ExactRegion::new(vec![obox([1, -1], [3, 1], 2)]);
        assert!(matches!(
            ExactSystem::new(hull.clone(), vec![outside]),
            Err(GapLemmaError::GapOutsideHull(0))
        ));

        let a = ExactRegion::new(vec![obox([-1, -1], [1, 1], 2)]);
        let b = ExactRegion::new(vec![obox([0, 0], [3, 3], 4)]);
        assert!(matches!(
            ExactSystem::new(hull.clone(), vec![a.clone(), b]),
            Err(GapLemmaError::OverlappingGaps(0, 1))
        ));

        let torn = ExactRegion::new(vec![obox([-1, -1], [0, 1], 2), obox([0, -1], [1, 1], 2)]);
        assert!(matches!(
            ExactSystem::new(hull.clone(), vec![torn]),
            Err(GapLemmaError::DisconnectedGap(0))
        ));

        let open_hull = ExactRegion::new(vec![obox([-1, -1], [1, 1], 1)]);
        assert!(matches!(
            ExactSystem::new(open_hull, vec![]),
            Err(GapLemmaError::WrongOpenness(..))
        ));
    }

    #[test]
    fn bg_linked_accepts_disjoint_and_properly_overlapping_gaps() {
        let s1 = sys(vec![vec![obox([-3, -3], [-1, -1], 4)]]);
        let s2 = sys(vec![vec![obox([1, 1], [3, 3], 4)]]);
        let report = bg_linked(&s1, &s2);
        assert!(report.holds);
        assert!(report.counterwitness.is_none());

        let left = sys(vec![vec![obox([-2, -1], [1, 1], 4)]]);
        let right = sys(vec![vec![obox([-1, -1], [2, 1], 4)]]);
        assert!(bg_linked(&left, &right).holds);
    }

    #[test]
    fn bg_linked_flags_contained_and_identical_gaps() {
        let small = sys(vec![vec![obox([-1, -1], [1, 1], 4)]]);
        let big = sys(vec![vec![obox([-1, -1], [1, 1], 2)]]);
        let report = bg_linked(&small, &big);
        assert!(!report.holds);
        assert_eq!(report.counterwitness, Some((0, 0)));

        let same = sys(vec![vec![obox([-1, -1], [1, 1], 4)]]);
        let identical = bg_linked(&same, &same);
        assert!(!identical.holds);
        assert_eq!(identical.counterwitness, Some((0, 0)));
    }

    #[test]
    fn contained_gap_is_removed_from_the_first_system_first() {
        let s1 = sys(vec![vec![obox([-1, -1], [1, 1], 2)]]);
        let s2 = sys(vec![vec![obox([-3, -3], [3, 3], 5)]]);
        let (r1, r2) = remove_contained_gaps(&s1, &s2);
        assert_eq!(r1.gaps().len(), 0);
        assert_eq!(r2.gaps().len(), 1);
    }

    #[test]
    fn second_system_gap_contained_in_surviving_gap_is_removed() {
        let s1 = sys(vec![vec![obox([-3, -3], [3, 3], 5)]]);
        let s2 = sys(vec![vec![obox([-1, -1], [1, 1], 2)]]);
        let (r1, r2) = remove_contained_gaps(&s1, &s2);
        assert_eq!(r1.gaps().len(), 1);
        assert_eq!(r2.gaps().len(), 0);
    }

    #[test]
    fn refinement_leaves_untouched_systems_alone() {
        let s1 = sys(vec![vec![obox([-2, -1], [1, 1], 4)]]);
        let s2 = sys(vec![vec![obox([-1, -1], [2, 1], 4)]]);
        let (r1, r2) = remove_contained_gaps(&s1, &s2);
        assert_eq!(r1.gaps().len(), 1);
        assert_eq!(r2.gaps().len(), 1);
    }

    #[test]
    fn refinement_preserves_the_exact_intersection() {
        let s1 = sys(vec![vec![obox([-1, -1], [1, 1], 2)], vec![obox([5, 5], [7, 7], 8)]]);
        let s2 = sys(vec![vec![obox([-3, -3], [3, 3], 5)]]);
        let (r1, r2) = remove_contained_gaps(&s1, &s2);
        assert_eq!(r1.gaps().len(), 1);
        let before = exact_intersection(&s1, &s2);
        let after = exact_intersection(&r1, &r2);
        assert!(regions_equal(&before, &after));
    }

    #[test]
    fn sufficient_condition_holds_for_generic_single_boxes() {
        let s1 = sys(vec![vec![obox([-2, -1], [1, 1], 4)]]);
        let s2 = sys(vec![vec![obox([-1, -1], [2, 1], 4)]]);
        let report = strongly_refinable_sufficient(&s1, &s2);
        assert!(report.holds);
        assert_eq!(report.witness1, Some(0));
        assert_eq!(report.witness2, Some(0));
        assert!(report.violation.is_none());
    }

    #[test]
    fn annulus_gap_breaks_the_second_bullet() {
        let ring = vec![
            obox([-3, -3], [-1, 3], 4),
            obox([1, -3], [3, 3], 4),
            obox([-3, -3], [3, -1], 4),
            obox([-3, 1], [3, 3], 4),
        ];
        let s1 = sys(vec![ring]);
        let s2 = sys(vec![vec![obox([-1, -1], [1, 1], 2)]]);
        let report = strongly_refinable_sufficient(&s1, &s2);
        assert!(!report.bullet2);
        assert_eq!(report.violation, Some((0, 0)));
        assert!(!report.holds);
    }

    fn separated_pair() -> (ExactSystem, ExactSystem) {
        let hull1 = ExactRegion::new(vec![cbox([-4, -4], [-2, 4], 4)]);
        let gap1 = ExactRegion::new(vec![obox([-7, -1], [-5, 1], 8)]);
        let s1 = ExactSystem::new(hull1, vec![gap1]).unwrap();
        let hull2 = ExactRegion::new(vec![cbox([2, -4], [4, 4], 4)]);
        let gap2 = ExactRegion::new(vec![obox([5, -1], [7, 1], 8)]);
        let s2 = ExactSystem::new(hull2, vec![gap2]).unwrap();
        (s1, s2)
    }

    #[test]
    fn separated_supports_break_the_first_bullet() {
        let (s1, s2) = separated_pair();
        let report = strongly_refinable_sufficient(&s1, &s2);
        assert!(!report.bullet1);
        assert!(report.witness1.is_none());
        assert!(report.witness2.is_none());
        assert!(report.bullet2, "disjoint gaps satisfy the pair condition vacuously");
        assert!(!report.holds);
    }

    #[test]
    fn verdict_certifies_identical_carpets() {
        let spec = CarpetSpec::new(vec![5, 5], 0.3, 2).unwrap();
        let float_sys = spec.generate().unwrap();
        let exact = exact_system_from_float(&float_sys).unwrap();
        let a = spec.contraction().unwrap();
        let verdict = gap_lemma_verdict(&exact, &exact, &a).unwrap();
        assert!(verdict.sufficient.holds);
        assert!(!verdict.bg_linked);
        let tau = spec.closed_form_thickness();
        assert!((verdict.thickness_sum - 2.0 * tau).abs() <= 1e-9);
        assert_eq!(verdict.verdict, Verdict::CertifiedNonempty);
        assert!(exact_intersection_witness(&exact, &exact).is_some());
    }

    #[test]
    fn verdict_is_inconclusive_for_separated_supports() {
        let (s1, s2) = separated_pair();
        let a = DiagonalContraction::new(vec![0.2, 0.2]).unwrap();
        let verdict = gap_lemma_verdict(&s1, &s2, &a).unwrap();
        assert!(!verdict.sufficient.holds);
        assert_eq!(verdict.verdict, Verdict::Inconclusive);
        assert!(exact_intersection_witness(&s1, &s2).is_none());
    }

    #[test]
    fn verdict_is_inconclusive_when_thickness_sum_is_negative() {
        let wide = sys(vec![vec![obox([-9, -9], [9, 9], 10)]]);
        let a = DiagonalContraction::new(vec![0.5, 0.5]).unwrap();
        let verdict = gap_lemma_verdict(&wide, &wide, &a).unwrap();
        assert!(verdict.sufficient.holds);
        assert!(verdict.thickness_sum < 0.0);
        assert_eq!(verdict.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn disjoint_compact_sets_have_no_witness() {
        let s1 = sys(vec![vec![obox([-1, -1], [1, 1], 2)]]);
        let hull2 = ExactRegion::new(vec![cbox([-1, -1], [1, 1], 4)]);
        let gap2 = ExactRegion::new(vec![obox([-1, -1], [1, 1], 8)]);
        let s2 = ExactSystem::new(hull2, vec![gap2]).unwrap();
        assert!(exact_intersection_witness(&s1, &s2).is_none());
        assert!(exact_intersection(&s1, &s2).is_empty());
    }

    #[test]
    fn overlapping_sets_yield_a_checkable_witness() {
        let s1 = sys(vec![vec![obox([-1, -1], [1, 1], 2)]]);
        let s2 = sys(vec![vec![obox([-7, -7], [-5, -5], 8)]]);
        let p = exact_intersection_witness(&s1, &s2).unwrap();
        assert!(s1.compact_region().contains(&p));
        assert!(s2.compact_region().contains(&p));
    }

    #[test]
    fn float_roundtrip_is_exact() {
        let spec = CarpetSpec::new(vec![5, 7], 0.7, 2).unwrap();
        let float_sys = spec.generate().unwrap();
        let exact = exact_system_from_float(&float_sys).unwrap();
        let back = float_system_from_exact(&exact).unwrap();
        for (orig, round) in float_sys.hull.boxes.iter().zip(&back.hull.boxes) {
            assert_eq!(orig.lo(), round.lo());
            assert_eq!(orig.hi(), round.hi());
        }
        assert_eq!(float_sys.gaps.len(), back.gaps.len());
    }

    #[test]
    fn rational_parsing_accepts_ratios_and_integers() {
        assert_eq!(parse_rat("3/4").unwrap(), rq(3, 4));
        assert_eq!(parse_rat(" -1/64 ").unwrap(), rq(-1, 64));
        assert_eq!(parse_rat("7").unwrap(), ri(7));
        assert!(parse_rat("0.5").is_err());
        assert!(rat_from_f64(f64::NAN).is_err());
        assert_eq!(rat_from_f64(0.25).unwrap(), rq(1, 4));
    }
}
