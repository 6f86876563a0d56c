//! Mega carpets: products of middle-cut Cantor constructions on `[-1, 1]^n`.
//!
//! Axis `j` is cut into `r_j` equal slices (`r_j` odd, so there is a middle
//! one) and the open middle cell of the product grid is removed; the
//! surviving cells repeat the cut. The natural contraction for exponent
//! `t > 0` scales axis `j` by `r_j^{-t}`, and both the thickness and the
//! matching potential weight have closed forms against which the generic
//! geometry pipeline can be tested: a level-`k` gap needs covering exponent
//! `k/t`, while earlier structure is never nearer than one slice width, so
//! per-axis bridging costs at least `(k - log_{r_j}((r_j-1)/2))/t`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{AxisBox, BoxRegion, DiagonalContraction, GapSystem, GeometryError};

/// Cap on the surviving-cell count at the deepest level a carpet may expand
/// to geometrically.
pub const MAX_LEVEL_CELLS: u128 = 1_000_000;

#[derive(Debug, Error)]
pub enum CarpetError {
    #[error("subdivision count {0} must be an integer >= 3")]
    BadSubdivision(u32),
    #[error("geometric expansion needs odd subdivision counts, got {0}")]
    EvenSubdivision(u32),
    #[error("carpet needs at least one axis")]
    NoAxes,
    #[error("contraction exponent must lie in (0, 1], got {0}")]
    BadExponent(f64),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("depth {depth} expands to {count} cells at the last level (limit {limit})")]
    TooManyCells { depth: u32, count: u128, limit: u128 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A carpet: per-axis subdivision counts, contraction exponent, and how
/// many levels of gaps to realize. Closed forms work for any counts >= 3;
/// expanding the geometry additionally needs odd counts (so a middle cell
/// exists) and a bounded cell population.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarpetSpec {
    pub r: Vec<u32>,
    pub t: f64,
    pub depth: u32,
}

impl CarpetSpec {
    pub fn new(r: Vec<u32>, t: f64, depth: u32) -> Result<Self, CarpetError> {
        if r.is_empty() {
            return Err(CarpetError::NoAxes);
        }
        for &rj in &r {
            if rj < 3 {
                return Err(CarpetError::BadSubdivision(rj));
            }
        }
        if !(t.is_finite() && 0.0 < t && t <= 1.0) {
            return Err(CarpetError::BadExponent(t));
        }
        if depth == 0 {
            return Err(CarpetError::ZeroDepth);
        }
        Ok(CarpetSpec { r, t, depth })
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    /// Surviving cells per subdivision step.
    fn branching(&self) -> u128 {
        self.r.iter().map(|&rj| rj as u128).product::<u128>() - 1
    }

    /// Total number of gaps across all levels up to `depth`.
    pub fn gap_count(&self) -> u128 {
        let b = self.branching();
        let mut total = 0u128;
        let mut level = 1u128;
        for _ in 0..self.depth {
            total = total.saturating_add(level);
            level = level.saturating_mul(b);
        }
        total
    }

    /// The contraction scaling axis `j` by `r_j^{-t}`.
    pub fn contraction(&self) -> Result<DiagonalContraction, GeometryError> {
        DiagonalContraction::new(self.r.iter().map(|&rj| (rj as f64).powf(-self.t)).collect())
    }

    /// `min_j log_{r_j}((r_j - 1)/2)`: the cheapest per-axis bridging offset.
    /// Zero exactly when some axis has `r_j = 3`.
    pub fn min_face_exponent(&self) -> f64 {
        min_face_exponent_of(&self.r)
    }

    /// Closed-form thickness of the carpet under its own contraction.
    pub fn closed_form_thickness(&self) -> f64 {
        self.min_face_exponent() / self.t
    }

    /// Closed-form potential weight `prod_j b_j^(tau - 1) = prod_j r_j^(t - m)`
    /// where `m` is [`min_face_exponent`](Self::min_face_exponent).
    pub fn closed_form_alpha(&self) -> f64 {
        let m = self.min_face_exponent();
        self.r.iter().map(|&rj| (rj as f64).powf(self.t - m)).product()
    }

    /// Whether every contraction entry lies strictly below `1/5`, the range
    /// the pattern certificates require. Equivalent to `t > log_{r_j} 5` on
    /// every axis.
    pub fn fits_certificate_range(&self) -> bool {
        self.r.iter().all(|&rj| (rj as f64).powf(-self.t) < 0.2)
    }

    /// Expand the carpet into an explicit gap system on `[-1, 1]^n`.
    /// Gaps come out level by level, cells in lexicographic order, so equal
    /// sizes tie-break into generation order.
    pub fn generate(&self) -> Result<GapSystem, CarpetError> {
        self.generate_with_limit(MAX_LEVEL_CELLS)
    }

    /// [`generate`](Self::generate) with a caller-chosen cap on surviving
    /// cells per level.
    pub fn generate_with_limit(&self, limit: u128) -> Result<GapSystem, CarpetError> {
        for &rj in &self.r {
            if rj % 2 == 0 {
                return Err(CarpetError::EvenSubdivision(rj));
            }
        }
        let last_level = self.branching().saturating_pow(self.depth - 1);
        if last_level > limit {
            return Err(CarpetError::TooManyCells {
                depth: self.depth,
                count: last_level,
                limit,
            });
        }
        let n = self.n();
        let hull = BoxRegion::closed(vec![AxisBox::new(vec![-1.0; n], vec![1.0; n])?]);
        let mut gaps = Vec::with_capacity(self.gap_count() as usize);
        // queue of surviving cell centers at the current level
        let mut centers: Vec<Vec<f64>> = vec![vec![0.0; n]];
        for level in 1..=self.depth {
            let gap_hw: Vec<f64> = self.r.iter().map(|&rj| (rj as f64).powi(-(level as i32))).collect();
            let cell_hw: Vec<f64> =
                self.r.iter().map(|&rj| (rj as f64).powi(1 - level as i32)).collect();
            for c in &centers {
                let lo = (0..n).map(|j| c[j] - gap_hw[j]).collect();
                let hi = (0..n).map(|j| c[j] + gap_hw[j]).collect();
                gaps.push(BoxRegion::open(vec![AxisBox::new(lo, hi)?]));
            }
            if level < self.depth {
                centers = self.subdivide(&centers, &cell_hw);
            }
        }
        Ok(GapSystem::new(hull, gaps)?)
    }

    /// All non-middle child cell centers of the given cells, lexicographic
    /// per parent (last axis fastest).
    fn subdivide(&self, centers: &[Vec<f64>], cell_hw: &[f64]) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut out = Vec::with_capacity(centers.len() * self.branching() as usize);
        for c in centers {
            let mut idx = vec![0u32; n];
            'cells: loop {
                if idx.iter().zip(&self.r).any(|(&i, &rj)| 2 * i + 1 != rj) {
                    let child: Vec<f64> = (0..n)
                        .map(|j| {
                            let d = (2 * idx[j] + 1) as f64 - self.r[j] as f64;
                            c[j] + cell_hw[j] * d / self.r[j] as f64
                        })
                        .collect();
                    out.push(child);
                }
                let mut j = n;
                while j > 0 {
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < self.r[j] {
                        continue 'cells;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
        out
    }
}

/// `min_j log_{r_j}((r_j - 1)/2)` for raw subdivision counts.
pub fn min_face_exponent_of(r: &[u32]) -> f64 {
    r.iter()
        .map(|&rj| (((rj - 1) as f64) / 2.0).ln() / (rj as f64).ln())
        .fold(f64::INFINITY, f64::min)
}

/// `max_j log_{r_j} 5`: the smallest contraction exponent putting every
/// axis's scale strictly below 1/5 (as the pattern certificates require).
pub fn certificate_exponent_floor(r: &[u32]) -> f64 {
    r.iter().map(|&rj| 5f64.ln() / (rj as f64).ln()).fold(f64::NEG_INFINITY, f64::max)
}
