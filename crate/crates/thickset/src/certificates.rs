//! Numerical certificates for pattern-size and intersection bounds, plus
//! the closed-form counterexample to additivity of thickness bounds.
//!
//! A pattern certificate fixes `(betas, alpha, c, delta, M)` and evaluates
//! two residuals: the covering budget `slack1 = d^2 (1 - (prod b)^(1-c)) -
//! M a^c` and the separation margin `slack2 = 3^-n prod_j (1 - 5 b_j^k) -
//! 8^n (1 + 2^(2n+1)) d` with `k = floor(d (M^(1/c) a)^-1)`. Valid means
//! `slack1 >= 0` and `slack2 > 0` (and `k >= 1`; `k = 0` puts a negative
//! factor in the product and is reported as its own failure). The constant
//! `K_M = 2 d^-1 |ln slack2|` then yields the dimension bound
//! `n - K_M a / |ln b_max|`.
//!
//! Mega-carpet parameters underflow doubles, so everything sensitive runs
//! in log space: a floor exponent beyond `e^41.5` makes every `b_j^k`
//! negligible and the corresponding factor is taken as exactly 1.
//!
//! The search over a carpet family walks deterministic grids in the
//! contraction exponent `t`, the budget exponent `c`, and `delta`, bisects
//! the largest valid `M` at each grid point (validity is antitone in `M`),
//! and refines twice around the incumbent. Identical grids reproduce the
//! result bit for bit.

use serde::Serialize;
use thiserror::Error;

use crate::carpets::{certificate_exponent_floor, min_face_exponent_of};
use crate::geometry::{AxisBox, BoxRegion, GapSystem};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("need at least one axis scale")]
    NoAxes,
    #[error("axis scale {0} outside the open interval (0, 1/5)")]
    ScaleOutOfRange(f64),
    #[error("{name} = {value} outside the open interval (0, 1)")]
    UnitIntervalViolation { name: &'static str, value: f64 },
    #[error("pattern size M must be at least 1")]
    ZeroPatternSize,
    #[error("weight alpha must be finite and positive, got {0}")]
    BadWeight(f64),
    #[error("need at least one weight to combine")]
    NoWeights,
    #[error("diameter must be finite and positive, got {0}")]
    BadDiameter(f64),
    #[error("subdivision count {0} must be at least 3")]
    BadSubdivision(u32),
    #[error("counterexample needs dimension >= 2, got {0}")]
    DimensionTooLow(usize),
    #[error("counterexample scales need 0 < t < s < r < 1/4, got r = {r}, s = {s}, t = {t}")]
    ScalesOutOfOrder { r: f64, s: f64, t: f64 },
}

/// Why a certificate failed, when it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateFailure {
    /// `floor(d (M^(1/c) a)^-1) = 0`: the product picks up a `1 - 5` factor.
    FloorZero,
    /// `slack1 < 0`: the covering budget is overdrawn.
    CoveringBudget,
    /// `slack2 <= 0`: no separation margin survives.
    SeparationMargin,
}

/// A fully evaluated pattern certificate. `valid` summarizes the residuals;
/// everything that went into them is kept for the report.
#[derive(Debug, Clone, Serialize)]
pub struct PatternCertificate {
    pub n: usize,
    pub betas: Vec<f64>,
    pub alpha: f64,
    pub c: f64,
    pub delta: f64,
    pub m: u64,
    /// `floor(delta (M^(1/c) alpha)^-1)`; `+inf` when the true value
    /// overflows, in which case every `b_j^k` factor is taken as 0.
    pub floor_exponent: f64,
    pub slack1: f64,
    pub slack2: f64,
    /// `2 delta^-1 |ln slack2|`; `+inf` exactly when `slack2 <= 0`.
    pub k_m: f64,
    pub dim_bound: f64,
    pub dim_condition_met: bool,
    /// `1 - beta_max`; divide by `diam F` for the admissible scaling range.
    pub lambda_max_per_diam: f64,
    pub valid: bool,
    pub reason: Option<CertificateFailure>,
}

fn checked_betas(betas: &[f64]) -> Result<(), CertificateError> {
    if betas.is_empty() {
        return Err(CertificateError::NoAxes);
    }
    for &b in betas {
        if !(b.is_finite() && 0.0 < b && b < 0.2) {
            return Err(CertificateError::ScaleOutOfRange(b));
        }
    }
    Ok(())
}

fn checked_unit(name: &'static str, value: f64) -> Result<(), CertificateError> {
    if !(value.is_finite() && 0.0 < value && value < 1.0) {
        return Err(CertificateError::UnitIntervalViolation { name, value });
    }
    Ok(())
}

/// Core evaluation on log-scales: `ln_betas[j] = ln b_j`, `ln_alpha = ln a`.
/// Used directly by the carpet search, where the scales themselves would
/// underflow.
fn evaluate_log(
    ln_betas: &[f64],
    ln_alpha: f64,
    c: f64,
    delta: f64,
    m: u64,
) -> (f64, f64, f64, f64) {
    let n = ln_betas.len();
    let ln_prod: f64 = ln_betas.iter().sum();
    let slack1 =
        delta * delta * (1.0 - ((1.0 - c) * ln_prod).exp()) - m as f64 * (c * ln_alpha).exp();
    let ln_floor_arg = delta.ln() - (m as f64).ln() / c - ln_alpha;
    let floor_exponent = if ln_floor_arg > 41.5 {
        f64::INFINITY
    } else {
        ln_floor_arg.exp().floor()
    };
    let mut prod = 1.0;
    for &lb in ln_betas {
        let term = if floor_exponent.is_infinite() {
            1.0
        } else {
            let e = floor_exponent * lb;
            if e > -745.0 {
                1.0 - 5.0 * e.exp()
            } else {
                1.0
            }
        };
        prod *= term;
    }
    let overhead = 8f64.powi(n as i32) * (1.0 + 2f64.powi(2 * n as i32 + 1)) * delta;
    let slack2 = 3f64.powi(-(n as i32)) * prod - overhead;
    (slack1, slack2, floor_exponent, ln_prod)
}

/// `K_M` from an already-computed separation margin: `2 delta^-1 |ln s|`,
/// with `+inf` exactly when the margin is not positive.
pub fn k_m_from_margin(delta: f64, slack2: f64) -> f64 {
    if slack2 > 0.0 {
        2.0 / delta * slack2.ln().abs()
    } else {
        f64::INFINITY
    }
}

fn assemble(
    betas: Vec<f64>,
    ln_betas: &[f64],
    alpha: f64,
    ln_alpha: f64,
    c: f64,
    delta: f64,
    m: u64,
) -> PatternCertificate {
    let n = ln_betas.len();
    let (slack1, slack2, floor_exponent, ln_prod) = evaluate_log(ln_betas, ln_alpha, c, delta, m);
    let k_m = k_m_from_margin(delta, slack2);
    let ln_beta_max = ln_betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let dim_bound = n as f64 - k_m * alpha / ln_beta_max.abs();
    let budget = m as f64 * (c * ln_alpha).exp();
    let allowance =
        (delta * delta).min(n as f64 * ln_beta_max.abs() / k_m) * (1.0 - ((1.0 - c) * ln_prod).exp());
    let dim_condition_met = budget <= allowance;
    let (valid, reason) = if floor_exponent < 1.0 {
        (false, Some(CertificateFailure::FloorZero))
    } else if slack1 < 0.0 {
        (false, Some(CertificateFailure::CoveringBudget))
    } else if slack2 <= 0.0 {
        (false, Some(CertificateFailure::SeparationMargin))
    } else {
        (true, None)
    };
    PatternCertificate {
        n,
        lambda_max_per_diam: 1.0 - ln_beta_max.exp(),
        betas,
        alpha,
        c,
        delta,
        m,
        floor_exponent,
        slack1,
        slack2,
        k_m,
        dim_bound,
        dim_condition_met,
        valid,
        reason,
    }
}

/// Evaluate a pattern certificate for explicit inputs.
pub fn check_pattern(
    betas: &[f64],
    alpha: f64,
    c: f64,
    delta: f64,
    m: u64,
) -> Result<PatternCertificate, CertificateError> {
    checked_betas(betas)?;
    checked_unit("c", c)?;
    checked_unit("delta", delta)?;
    if m < 1 {
        return Err(CertificateError::ZeroPatternSize);
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(CertificateError::BadWeight(alpha));
    }
    let ln_betas: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
    Ok(assemble(betas.to_vec(), &ln_betas, alpha, alpha.ln(), c, delta, m))
}

/// `K_M` for explicit inputs; `+inf` when the separation margin fails.
pub fn k_m_constant(
    betas: &[f64],
    alpha: f64,
    c: f64,
    delta: f64,
    m: u64,
) -> Result<f64, CertificateError> {
    Ok(check_pattern(betas, alpha, c, delta, m)?.k_m)
}

/// The open interval of admissible homothety scales, `(0, (1 - b_max)/diam)`.
pub fn lambda_range(diam_f: f64, beta_max: f64) -> Result<(f64, f64), CertificateError> {
    if !(diam_f.is_finite() && diam_f > 0.0) {
        return Err(CertificateError::BadDiameter(diam_f));
    }
    checked_unit("beta_max", beta_max)?;
    Ok((0.0, (1.0 - beta_max) / diam_f))
}

/// A certificate for intersecting countably many translates: the weights
/// combine through `a^c = sum_i a_i^c` and the conditions are the `M`-free
/// pattern conditions with floor exponent `floor(delta / a)`.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionCertificate {
    pub n: usize,
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub alpha_combined: f64,
    pub c: f64,
    pub delta: f64,
    pub floor_exponent: f64,
    pub slack1: f64,
    pub slack2: f64,
    /// `K_1` has no canonical closed form here; this uses the `K_M`
    /// formula with the floor exponent above. Flagged so reports can say so.
    pub k1_adopted_convention: bool,
    pub k1: f64,
    pub dim_bound: f64,
    pub valid: bool,
    pub reason: Option<CertificateFailure>,
}

/// Evaluate an intersection certificate for explicit per-set weights.
pub fn check_intersection(
    betas: &[f64],
    alphas: &[f64],
    c: f64,
    delta: f64,
) -> Result<IntersectionCertificate, CertificateError> {
    checked_betas(betas)?;
    checked_unit("c", c)?;
    checked_unit("delta", delta)?;
    if alphas.is_empty() {
        return Err(CertificateError::NoWeights);
    }
    for &a in alphas {
        if !(a.is_finite() && a > 0.0) {
            return Err(CertificateError::BadWeight(a));
        }
    }
    let combined_pow_c: f64 = alphas.iter().map(|a| a.powf(c)).sum();
    let alpha = combined_pow_c.powf(1.0 / c);
    let ln_betas: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
    let n = betas.len();
    let ln_prod: f64 = ln_betas.iter().sum();
    // condition 1 uses the combined weight directly: a^c <= d^2 (1 - (prod b)^(1-c)) < 1
    let cond1_rhs = delta * delta * (1.0 - ((1.0 - c) * ln_prod).exp());
    let slack1 = cond1_rhs - combined_pow_c;
    let floor_exponent = (delta / alpha).floor();
    let mut prod = 1.0;
    for &lb in &ln_betas {
        let e = floor_exponent * lb;
        prod *= if e > -745.0 { 1.0 - 5.0 * e.exp() } else { 1.0 };
    }
    let overhead = 8f64.powi(n as i32) * (1.0 + 2f64.powi(2 * n as i32 + 1)) * delta;
    let slack2 = 3f64.powi(-(n as i32)) * prod - overhead;
    let k1 = k_m_from_margin(delta, slack2);
    let ln_beta_max = ln_betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let dim_bound = n as f64 - k1 * alpha / ln_beta_max.abs();
    let (valid, reason) = if floor_exponent < 1.0 {
        (false, Some(CertificateFailure::FloorZero))
    } else if !(slack1 >= 0.0 && cond1_rhs < 1.0) {
        (false, Some(CertificateFailure::CoveringBudget))
    } else if slack2 <= 0.0 {
        (false, Some(CertificateFailure::SeparationMargin))
    } else {
        (true, None)
    };
    Ok(IntersectionCertificate {
        n,
        betas: betas.to_vec(),
        alphas: alphas.to_vec(),
        alpha_combined: alpha,
        c,
        delta,
        floor_exponent,
        slack1,
        slack2,
        k1_adopted_convention: true,
        k1,
        dim_bound,
        valid,
        reason,
    })
}

/// Deterministic grid parameters for the carpet certificate search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchGrid {
    /// Points per axis in each round.
    pub points: usize,
    /// Refinement rounds around the incumbent after the initial sweep.
    pub rounds: usize,
    /// Cap for the pattern-size bisection.
    pub m_max: u64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid { points: 64, rounds: 2, m_max: 1 << 60 }
    }
}

/// How a search ended: the best certificate (if any) and counters for the
/// report.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub r: Vec<u32>,
    pub exponent_floor: f64,
    pub best: Option<PatternCertificate>,
    pub evaluations: u64,
    pub note: Option<String>,
}

fn log_grid(lo: f64, hi: f64, p: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..p).map(|i| (llo + (lhi - llo) * i as f64 / (p - 1) as f64).exp()).collect()
}

fn lin_grid(lo: f64, hi: f64, p: usize) -> Vec<f64> {
    (0..p).map(|i| lo + (hi - lo) * i as f64 / (p - 1) as f64).collect()
}

fn valid_at(ln_betas: &[f64], ln_alpha: f64, c: f64, delta: f64, m: u64) -> bool {
    let (slack1, slack2, floor_exponent, _) = evaluate_log(ln_betas, ln_alpha, c, delta, m);
    floor_exponent >= 1.0 && slack1 >= 0.0 && slack2 > 0.0
}

/// Largest valid `M` at a grid point, 0 when even `M = 1` fails. Validity
/// is antitone in `M`, so plain bisection applies.
fn max_pattern_size(ln_betas: &[f64], ln_alpha: f64, c: f64, delta: f64, m_max: u64) -> u64 {
    if !valid_at(ln_betas, ln_alpha, c, delta, 1) {
        return 0;
    }
    if valid_at(ln_betas, ln_alpha, c, delta, m_max) {
        return m_max;
    }
    let (mut lo, mut hi) = (1u64, m_max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if valid_at(ln_betas, ln_alpha, c, delta, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Search the carpet family `b_j = r_j^-t` for the certificate maximizing
/// the pattern size. Deterministic: grid sweeps in lexicographic order with
/// strict improvement, so the lexicographically smallest maximizer wins.
pub fn search_pattern_certificate(r: &[u32], grid: &SearchGrid) -> Result<SearchOutcome, CertificateError> {
    if r.is_empty() {
        return Err(CertificateError::NoAxes);
    }
    for &rj in r {
        if rj < 3 {
            return Err(CertificateError::BadSubdivision(rj));
        }
    }
    let t_floor = certificate_exponent_floor(r);
    let mut outcome = SearchOutcome {
        r: r.to_vec(),
        exponent_floor: t_floor,
        best: None,
        evaluations: 0,
        note: None,
    };
    if t_floor >= 1.0 {
        outcome.note = Some(format!(
            "no admissible contraction exponent: scales reach 1/5 only at t >= {t_floor:.6}, \
             but t must stay below 1"
        ));
        return Ok(outcome);
    }
    let m_hat = min_face_exponent_of(r);
    let sum_ln_r: f64 = r.iter().map(|&rj| (rj as f64).ln()).sum();
    let p = grid.points.max(2);

    let mut evals = 0u64;
    let mut eval_point = |u: f64, c: f64, delta: f64| -> u64 {
        evals += 1;
        let t = t_floor + (1.0 - t_floor) * u;
        if !(t_floor < t && t < 1.0) || !(0.0 < c && c < 1.0) || !(0.0 < delta && delta < 1.0) {
            return 0;
        }
        let ln_betas: Vec<f64> = r.iter().map(|&rj| -t * (rj as f64).ln()).collect();
        let ln_alpha = (t - m_hat) * sum_ln_r;
        if ln_alpha >= 0.0 {
            return 0;
        }
        max_pattern_size(&ln_betas, ln_alpha, c, delta, grid.m_max)
    };

    let mut us = log_grid(1e-12, 0.99, p);
    let mut cs = lin_grid(1.0 / (p as f64 + 1.0), p as f64 / (p as f64 + 1.0), p);
    let mut ds = log_grid(1e-12, 0.99, p);
    let mut best: (u64, Option<(f64, f64, f64)>) = (0, None);
    for round in 0..=grid.rounds {
        if round > 0 {
            let Some((u0, c0, d0)) = best.1 else { break };
            let ru = (us[p - 1].ln() - us[0].ln()) / (p - 1) as f64;
            let rd = (ds[p - 1].ln() - ds[0].ln()) / (p - 1) as f64;
            let hc = cs[1] - cs[0];
            us = log_grid(
                (u0 * (-2.0 * ru).exp()).max(1e-18),
                (u0 * (2.0 * ru).exp()).min(0.999999),
                p,
            );
            ds = log_grid(
                (d0 * (-2.0 * rd).exp()).max(1e-18),
                (d0 * (2.0 * rd).exp()).min(0.999999),
                p,
            );
            cs = lin_grid((c0 - 2.0 * hc).max(1e-9), (c0 + 2.0 * hc).min(1.0 - 1e-9), p);
        }
        for &u in &us {
            for &c in &cs {
                for &d in &ds {
                    let m = eval_point(u, c, d);
                    if m > best.0 {
                        best = (m, Some((u, c, d)));
                    }
                }
            }
        }
    }
    outcome.evaluations = evals;
    if let (m, Some((u, c, d))) = best {
        let t = t_floor + (1.0 - t_floor) * u;
        let betas: Vec<f64> = r.iter().map(|&rj| (rj as f64).powf(-t)).collect();
        let ln_betas: Vec<f64> = r.iter().map(|&rj| -t * (rj as f64).ln()).collect();
        let ln_alpha = (t - m_hat) * sum_ln_r;
        outcome.best = Some(assemble(betas, &ln_betas, ln_alpha.exp(), ln_alpha, c, d, m));
    } else {
        outcome.note = Some("no valid certificate on the searched grids".to_string());
    }
    Ok(outcome)
}

/// The two-set configuration whose thicknesses sum to any prescribed
/// positive value while the sets themselves stay disjoint: two blocks of
/// side 1/2 with gaps of scale `r`, beside a small block of scale `s` with
/// a gap of scale `t`.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleInstance {
    pub n: usize,
    pub betas: Vec<f64>,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub sum: f64,
    pub sum_positive: bool,
}

/// Evaluate the closed forms for given scales.
pub fn counterexample(
    betas: &[f64],
    r: f64,
    s: f64,
    t: f64,
) -> Result<CounterexampleInstance, CertificateError> {
    if betas.len() < 2 {
        return Err(CertificateError::DimensionTooLow(betas.len()));
    }
    for &b in betas {
        checked_unit("beta", b)?;
    }
    if !(0.0 < t && t < s && s < r && r < 0.25) {
        return Err(CertificateError::ScalesOutOfOrder { r, s, t });
    }
    let ln_min = betas.iter().cloned().fold(f64::INFINITY, f64::min).ln();
    let ln_max = betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ln();
    let tau1 = r.ln() / ln_min - (0.125 - r / 2.0).ln() / ln_max;
    let tau2 = t.ln() / ln_min - ((s - t) / 2.0).ln() / ln_max;
    Ok(CounterexampleInstance {
        n: betas.len(),
        betas: betas.to_vec(),
        r,
        s,
        t,
        tau1,
        tau2,
        sum: tau1 + tau2,
        sum_positive: tau1 + tau2 > 0.0,
    })
}

/// Shrink the scales deterministically until both thicknesses are positive:
/// halve `r` from 1/8 until the first is, then set `s = r/2` and halve `t`
/// until the second is. Both closed forms diverge as their scale goes to 0,
/// so this terminates.
pub fn auto_counterexample(betas: &[f64]) -> Result<CounterexampleInstance, CertificateError> {
    if betas.len() < 2 {
        return Err(CertificateError::DimensionTooLow(betas.len()));
    }
    for &b in betas {
        checked_unit("beta", b)?;
    }
    let ln_min = betas.iter().cloned().fold(f64::INFINITY, f64::min).ln();
    let ln_max = betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ln();
    let mut r = 0.125f64;
    while r.ln() / ln_min - (0.125 - r / 2.0).ln() / ln_max <= 0.0 {
        r /= 2.0;
    }
    let s = r / 2.0;
    let mut t = s / 2.0f64;
    while t.ln() / ln_min - ((s - t) / 2.0).ln() / ln_max <= 0.0 {
        t /= 2.0;
    }
    counterexample(betas, r, s, t)
}

/// The boxes behind the closed forms: the first system is two blocks of
/// half-width 1/4 at `(+-3/4, 0, ..., 0)`, each with a centered open gap of
/// half-width `r`; the second is one block of half-width `s` at the first
/// center with an open gap of half-width `t` (the far puncture point of the
/// original construction is not box-representable and affects neither
/// measurement). The second block sits inside the first system's gap, so
/// the two sets are disjoint.
pub fn counterexample_systems(
    n: usize,
    r: f64,
    s: f64,
    t: f64,
) -> Result<(GapSystem, GapSystem), CertificateError> {
    if n < 2 {
        return Err(CertificateError::DimensionTooLow(n));
    }
    if !(0.0 < t && t < s && s < r && r < 0.25) {
        return Err(CertificateError::ScalesOutOfOrder { r, s, t });
    }
    let mut x = vec![0.0; n];
    x[0] = 0.75;
    let neg_x: Vec<f64> = x.iter().map(|v| -v).collect();
    let block = |center: &[f64], hw: f64| {
        AxisBox::around(center, &vec![hw; n]).expect("positive half-width")
    };
    let c1 = GapSystem::new(
        BoxRegion::closed(vec![block(&x, 0.25), block(&neg_x, 0.25)]),
        vec![
            BoxRegion::open(vec![block(&x, r)]),
            BoxRegion::open(vec![block(&neg_x, r)]),
        ],
    )
    .expect("two disjoint blocks with interior gaps");
    let c2 = GapSystem::new(
        BoxRegion::closed(vec![block(&x, s)]),
        vec![BoxRegion::open(vec![block(&x, t)])],
    )
    .expect("one block with an interior gap");
    Ok((c1, c2))
}
