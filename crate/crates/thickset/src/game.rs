//! The matrix potential game. Player I nests boxes `U_m = A^m(B[0,r]) + b_m`,
//! Player II deletes affine boxes `(q, y)` under a per-turn budget tied to a
//! weight `alpha` and an exponent `c`. The engine enforces legality exactly
//! as stated (nesting per axis, radius window on the opening move, budget
//! with a fixed additive tolerance), records every deletion, and truncates
//! the limit point at a finite horizon with an explicit error radius.
//!
//! Player II's thick-set strategy deletes each gap of a system at most once,
//! at the first turn that both reaches past the gap's bridging threshold and
//! actually meets the gap. With the weight derived from the system's
//! thickness it is always budget-legal; seeded playouts against pluggable
//! Player I policies check the winning contract by Monte Carlo.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{covered_by, AxisBox, DiagonalContraction, GapSystem, GeometryError};
use crate::thickness::{ThicknessReport, ThicknessTag};

#[derive(Debug, Error)]
pub enum GameError {
    #[error("alpha must be finite and positive, got {0}")]
    BadAlpha(f64),
    #[error("budget exponent must lie in [0, 1), got {0}")]
    BadBudgetExponent(f64),
    #[error("radius window needs 0 < rho2 <= rho1, got rho2 = {rho2}, rho1 = {rho1}")]
    BadRadiusWindow { rho2: f64, rho1: f64 },
    #[error("opening radius {r} outside [{rho2}, {rho1}]")]
    RadiusOutOfRange { r: f64, rho2: f64, rho1: f64 },
    #[error("radius may only be chosen on the first move")]
    RadiusAlreadyFixed,
    #[error("first move must choose a radius")]
    RadiusRequired,
    #[error("center has dimension {got}, game is in dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("nesting violated on axis {axis}: |shift| = {shift} > {bound}")]
    NestingViolation { axis: usize, shift: f64, bound: f64 },
    #[error("deletion exponent must be >= 1, got {0}")]
    ExponentBelowOne(f64),
    #[error("budget exponent 0 admits at most one deletion per turn, got {0}")]
    SingleDeletionOnly(usize),
    #[error("turn {turn} budget exceeded: spent {lhs}, allowed {rhs}")]
    BudgetExceeded { turn: u32, lhs: f64, rhs: f64 },
    #[error("Player II already moved this turn")]
    AlreadyMoved,
    #[error("no moves played yet")]
    NotStarted,
    #[error("horizon {horizon} not reached, only {played} turns played")]
    HorizonNotReached { horizon: u32, played: u32 },
    #[error("thick strategy needs a finite thickness report")]
    ReportNotFinite,
    #[error("thick strategy precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Fixed data of one game: the contraction, the weight `alpha`, the budget
/// exponent `c`, and the window `[rho2, rho1]` for Player I's opening radius.
#[derive(Debug, Clone, Serialize)]
pub struct GameParams {
    pub a: DiagonalContraction,
    pub alpha: f64,
    pub c: f64,
    pub rho2: f64,
    pub rho1: f64,
}

impl GameParams {
    pub fn new(
        a: DiagonalContraction,
        alpha: f64,
        c: f64,
        rho2: f64,
        rho1: f64,
    ) -> Result<Self, GameError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(GameError::BadAlpha(alpha));
        }
        if !(c.is_finite() && (0.0..1.0).contains(&c)) {
            return Err(GameError::BadBudgetExponent(c));
        }
        if !(rho2.is_finite() && rho1.is_finite() && 0.0 < rho2 && rho2 <= rho1) {
            return Err(GameError::BadRadiusWindow { rho2, rho1 });
        }
        Ok(GameParams { a, alpha, c, rho2, rho1 })
    }

    /// Parameters of the game the thick-set strategy is built for:
    /// `alpha = prod_j b_j^(tau - 1)`, budget exponent 0, radius pinned to 1.
    pub fn thick_set(a: DiagonalContraction, tau: f64) -> Result<Self, GameError> {
        let alpha = alpha_for_thickness(&a, tau);
        GameParams::new(a, alpha, 0.0, 1.0, 1.0)
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }
}

/// `prod_j b_j^(tau - 1)`, the weight matching a thickness value.
pub fn alpha_for_thickness(a: &DiagonalContraction, tau: f64) -> f64 {
    a.pow(tau - 1.0).iter().product()
}

/// One recorded deletion: the closed box `A^q(B[0,r]) + y`, stamped with the
/// turn it was played on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Deletion {
    pub q: f64,
    pub y: Vec<f64>,
    pub turn: u32,
}

/// Per-axis slack Player I has when moving from turn `m-1` to turn `m`:
/// `r (b_j^(m-1) - b_j^m)`. Policies clamp with exactly this expression, so
/// their moves pass the legality check bit for bit.
fn nesting_bounds(params: &GameParams, r: f64, m: u32) -> Vec<f64> {
    params
        .a
        .pow_i(m as i32 - 1)
        .iter()
        .zip(params.a.pow_i(m as i32))
        .map(|(prev, cur)| r * (prev - cur))
        .collect()
}

const BUDGET_TOLERANCE: f64 = 1e-15;

/// Check a prospective set of turn-`m` deletions against the budget without
/// touching any state.
pub fn deletions_legal(
    params: &GameParams,
    turn: u32,
    deletions: &[(f64, Vec<f64>)],
) -> Result<f64, GameError> {
    for (q, y) in deletions {
        if !(*q >= 1.0) {
            return Err(GameError::ExponentBelowOne(*q));
        }
        if y.len() != params.n() {
            return Err(GameError::DimensionMismatch { expected: params.n(), got: y.len() });
        }
    }
    let scale: f64 = params.a.pow_i(turn as i32).iter().product();
    if params.c == 0.0 {
        if deletions.len() > 1 {
            return Err(GameError::SingleDeletionOnly(deletions.len()));
        }
        let Some((q, _)) = deletions.first() else { return Ok(0.0) };
        let lhs: f64 = params.a.pow(*q).iter().product();
        let rhs = params.alpha * scale;
        if lhs > rhs + BUDGET_TOLERANCE {
            return Err(GameError::BudgetExceeded { turn, lhs, rhs });
        }
        Ok(lhs)
    } else {
        let lhs: f64 = deletions
            .iter()
            .map(|(q, _)| params.a.pow(*q).iter().product::<f64>().powf(params.c))
            .sum();
        let rhs = (params.alpha * scale).powf(params.c);
        if lhs > rhs + BUDGET_TOLERANCE {
            return Err(GameError::BudgetExceeded { turn, lhs, rhs });
        }
        Ok(lhs)
    }
}

/// Full game history: Player I's radius and centers, Player II's ledger, and
/// the budget actually spent each turn.
#[derive(Debug, Clone)]
pub struct GameState {
    pub params: GameParams,
    turn: u32,
    r: Option<f64>,
    centers: Vec<Vec<f64>>,
    ledger: Vec<Deletion>,
    budget_spent: Vec<f64>,
    moved_this_turn: bool,
}

impl GameState {
    pub fn new(params: GameParams) -> Self {
        GameState {
            params,
            turn: 0,
            r: None,
            centers: Vec::new(),
            ledger: Vec::new(),
            budget_spent: Vec::new(),
            moved_this_turn: false,
        }
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    pub fn radius(&self) -> Option<f64> {
        self.r
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn ledger(&self) -> &[Deletion] {
        &self.ledger
    }

    pub fn budget_spent(&self) -> &[f64] {
        &self.budget_spent
    }

    /// Player I's current box `U_m`.
    pub fn current_box(&self) -> Result<AxisBox, GameError> {
        let r = self.r.ok_or(GameError::NotStarted)?;
        let b = self.centers.last().ok_or(GameError::NotStarted)?;
        let hw: Vec<f64> =
            self.params.a.pow_i(self.turn as i32).iter().map(|p| r * p).collect();
        Ok(AxisBox::around(b, &hw)?)
    }

    /// Advance to the next turn with center `b`; the radius must be chosen
    /// on the first move and only there. Nesting is checked per axis with
    /// no tolerance.
    pub fn player1_move(&mut self, b: Vec<f64>, r: Option<f64>) -> Result<(), GameError> {
        if b.len() != self.params.n() {
            return Err(GameError::DimensionMismatch { expected: self.params.n(), got: b.len() });
        }
        if self.turn == 0 {
            let r = r.ok_or(GameError::RadiusRequired)?;
            if !(r.is_finite() && self.params.rho2 <= r && r <= self.params.rho1) {
                return Err(GameError::RadiusOutOfRange {
                    r,
                    rho2: self.params.rho2,
                    rho1: self.params.rho1,
                });
            }
            self.r = Some(r);
        } else {
            if r.is_some() {
                return Err(GameError::RadiusAlreadyFixed);
            }
            let bounds = nesting_bounds(&self.params, self.r.unwrap(), self.turn + 1);
            let prev = self.centers.last().unwrap();
            for j in 0..b.len() {
                let shift = (b[j] - prev[j]).abs();
                if !(shift <= bounds[j]) {
                    return Err(GameError::NestingViolation { axis: j, shift, bound: bounds[j] });
                }
            }
        }
        self.turn += 1;
        self.centers.push(b);
        self.budget_spent.push(0.0);
        self.moved_this_turn = false;
        Ok(())
    }

    /// Record Player II's deletions for the current turn (empty list =
    /// skip). At most one call per turn; the budget is per turn and does not
    /// roll over.
    pub fn player2_move(&mut self, deletions: Vec<(f64, Vec<f64>)>) -> Result<(), GameError> {
        if self.turn == 0 {
            return Err(GameError::NotStarted);
        }
        if self.moved_this_turn {
            return Err(GameError::AlreadyMoved);
        }
        let spent = deletions_legal(&self.params, self.turn, &deletions)?;
        *self.budget_spent.last_mut().unwrap() = spent;
        for (q, y) in deletions {
            self.ledger.push(Deletion { q, y, turn: self.turn });
        }
        self.moved_this_turn = true;
        Ok(())
    }

    /// Center of `U_horizon` together with the truncation error radius
    /// `r * max_j b_j^horizon`.
    pub fn outcome(&self, horizon: u32) -> Result<(Vec<f64>, f64), GameError> {
        let r = self.r.ok_or(GameError::NotStarted)?;
        if horizon == 0 || horizon > self.turn {
            return Err(GameError::HorizonNotReached { horizon, played: self.turn });
        }
        let radius = r * self.params.a.beta_max().powi(horizon as i32);
        Ok((self.centers[horizon as usize - 1].clone(), radius))
    }

    /// Closed box of a recorded deletion: `A^q(B[0,r]) + y`.
    pub fn deletion_box(&self, d: &Deletion) -> Result<AxisBox, GameError> {
        let r = self.r.ok_or(GameError::NotStarted)?;
        let hw: Vec<f64> = self.params.a.pow(d.q).iter().map(|p| r * p).collect();
        Ok(AxisBox::around(&d.y, &hw)?)
    }

    /// Whether the point lies in the deleted region (a union of closed
    /// boxes, so faces count).
    pub fn in_deleted(&self, point: &[f64]) -> bool {
        self.ledger.iter().any(|d| {
            self.deletion_box(d).map(|b| b.contains_point(point)).unwrap_or(false)
        })
    }
}

/// Player II's thick-set move for the current turn: the first gap in rank
/// order that is not yet deleted, meets `U_m`, and whose bridging threshold
/// the turn index has passed, covered by one deletion at its own size. Skips
/// when no gap qualifies or the single qualifying deletion would be illegal.
pub fn thick_strategy(
    state: &GameState,
    sys: &GapSystem,
    report: &ThicknessReport,
) -> Result<Vec<(f64, Vec<f64>)>, GameError> {
    if report.tag != ThicknessTag::Finite {
        return Err(GameError::ReportNotFinite);
    }
    // Deep turns can shrink the ball below one ulp of its center, so the
    // box collapses at double precision. An empty-interior box overlaps no
    // gap openly, so the strategy has nothing to delete on such turns.
    let u = match state.current_box() {
        Ok(u) => u,
        Err(GameError::Geometry(GeometryError::DegenerateBox(_))) => return Ok(vec![]),
        Err(e) => return Err(e),
    };
    let m = state.turn() as f64;
    for g in &report.per_gap {
        let gap = &sys.gaps[g.original_index];
        let bbox = gap.bounding_box().map_err(GeometryError::from)?;
        if !(m > g.gap_distance_exponent) {
            continue;
        }
        if !gap.boxes.iter().any(|b| b.overlaps_open(&u)) {
            continue;
        }
        let already = state.ledger().iter().any(|d| {
            state.deletion_box(d).map(|db| db.contains_box(&bbox)).unwrap_or(false)
        });
        if already {
            continue;
        }
        let q = g.size_exponent;
        let z = bbox.center();
        if q >= 1.0 && deletions_legal(&state.params, state.turn(), &[(q, z.clone())]).is_ok() {
            return Ok(vec![(q, z)]);
        }
        return Ok(vec![]);
    }
    Ok(vec![])
}

/// Square-metric distance from a point to the complement of the open gaps
/// (the surviving set together with everything outside the hull). Zero when
/// the point is not strictly inside any gap box; otherwise found by
/// bisecting the largest ball still covered by the gap closures, which never
/// understates the distance.
pub fn distance_to_ce(point: &[f64], sys: &GapSystem) -> f64 {
    let boxes: Vec<AxisBox> =
        sys.gaps.iter().flat_map(|g| g.boxes.iter().cloned()).collect();
    let host = boxes.iter().find(|b| {
        (0..b.n()).all(|j| b.lo()[j] < point[j] && point[j] < b.hi()[j])
    });
    let Some(host) = host else { return 0.0 };
    let covered = |rho: f64| -> bool {
        AxisBox::ball(point, rho).map(|ball| covered_by(&ball, &boxes)).unwrap_or(false)
    };
    let mut lo = (0..host.n())
        .map(|j| (point[j] - host.lo()[j]).min(host.hi()[j] - point[j]))
        .fold(f64::INFINITY, f64::min);
    let cap = match sys.hull.bounding_box() {
        Ok(bb) => 4.0 * bb.widths().into_iter().fold(1.0, f64::max),
        Err(_) => 1e6,
    };
    let mut hi = lo;
    while covered(hi) {
        hi *= 2.0;
        if hi > cap {
            return cap;
        }
    }
    while hi - lo > 1e-12 * hi.max(1e-300) {
        let mid = 0.5 * (lo + hi);
        if covered(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A Player I policy: choose the opening radius, then a center each turn.
/// The previous center and radius arrive through the state (the radius
/// argument covers the opening move, when the state has none yet).
pub trait PlayerOne {
    fn choose_radius(&mut self, params: &GameParams, rng: &mut dyn RngCore) -> f64;
    fn choose_center(&mut self, state: &GameState, r: f64, rng: &mut dyn RngCore) -> Vec<f64>;
}

fn clamp_unit_radius(params: &GameParams) -> f64 {
    1.0f64.clamp(params.rho2, params.rho1)
}

/// `p + delta` with the guarantee that the realized shift stays within the
/// slack. The sum rounds, so a shift chosen inside the slack can land one
/// representable step outside it; the legality check measures exactly the
/// realized difference, and staying put is always legal.
fn step_within(p: f64, delta: f64, s: f64) -> f64 {
    let c = p + delta;
    if (c - p).abs() <= s {
        c
    } else {
        p
    }
}

/// Opens at a fixed center and never moves.
#[derive(Debug, Clone)]
pub struct ConstantCenter {
    pub center: Vec<f64>,
}

impl PlayerOne for ConstantCenter {
    fn choose_radius(&mut self, params: &GameParams, _rng: &mut dyn RngCore) -> f64 {
        clamp_unit_radius(params)
    }

    fn choose_center(&mut self, state: &GameState, _r: f64, _rng: &mut dyn RngCore) -> Vec<f64> {
        if state.turn() == 0 {
            self.center.clone()
        } else {
            state.centers().last().unwrap().clone()
        }
    }
}

/// Opens uniformly inside `B[0,1]` (so `U_1` stays there) and afterwards
/// shifts uniformly within the exact nesting slack.
#[derive(Debug, Clone, Default)]
pub struct RandomCenters;

impl PlayerOne for RandomCenters {
    fn choose_radius(&mut self, params: &GameParams, _rng: &mut dyn RngCore) -> f64 {
        clamp_unit_radius(params)
    }

    fn choose_center(&mut self, state: &GameState, r: f64, rng: &mut dyn RngCore) -> Vec<f64> {
        if state.turn() == 0 {
            state
                .params
                .a
                .betas()
                .iter()
                .map(|b| {
                    let bound = (1.0 - r * b).max(0.0);
                    if bound > 0.0 {
                        rng.gen_range(-bound..=bound)
                    } else {
                        0.0
                    }
                })
                .collect()
        } else {
            let bounds = nesting_bounds(&state.params, r, state.turn() + 1);
            let prev = state.centers().last().unwrap();
            prev.iter()
                .zip(&bounds)
                .map(|(p, s)| {
                    if *s > 0.0 {
                        step_within(*p, rng.gen_range(-*s..=*s), *s)
                    } else {
                        *p
                    }
                })
                .collect()
        }
    }
}

/// Opens on a target point and keeps steering toward it, clamped to the
/// nesting slack; a target reachable from the opening box is hit exactly.
#[derive(Debug, Clone)]
pub struct GapSeeker {
    pub target: Vec<f64>,
}

impl PlayerOne for GapSeeker {
    fn choose_radius(&mut self, params: &GameParams, _rng: &mut dyn RngCore) -> f64 {
        clamp_unit_radius(params)
    }

    fn choose_center(&mut self, state: &GameState, r: f64, _rng: &mut dyn RngCore) -> Vec<f64> {
        if state.turn() == 0 {
            return self.target.clone();
        }
        let bounds = nesting_bounds(&state.params, r, state.turn() + 1);
        let prev = state.centers().last().unwrap();
        prev.iter()
            .zip(&self.target)
            .zip(&bounds)
            .map(|((p, t), s)| step_within(*p, (t - p).clamp(-*s, *s), *s))
            .collect()
    }
}

/// Everything observable about one finished playout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlayoutRecord {
    pub seed: u64,
    pub horizon: u32,
    pub outcome: Vec<f64>,
    pub radius: f64,
    pub in_deleted: bool,
    pub distance_to_ce: f64,
    pub fault: Option<String>,
}

impl PlayoutRecord {
    /// The winning contract at this horizon: the outcome is deleted or the
    /// truncated limit point sits within its own error radius of the
    /// surviving set or the exterior.
    pub fn satisfies_contract(&self) -> bool {
        self.fault.is_none() && (self.in_deleted || self.distance_to_ce <= self.radius)
    }
}

fn check_thick_preconditions(
    params: &GameParams,
    report: &ThicknessReport,
) -> Result<(), GameError> {
    if report.tag != ThicknessTag::Finite {
        return Err(GameError::ReportNotFinite);
    }
    if params.c != 0.0 {
        return Err(GameError::Precondition(format!(
            "budget exponent must be 0, got {}",
            params.c
        )));
    }
    if params.rho2 != 1.0 || params.rho1 != 1.0 {
        return Err(GameError::Precondition(format!(
            "radius window must pin r = 1, got [{}, {}]",
            params.rho2, params.rho1
        )));
    }
    let expected = alpha_for_thickness(&params.a, report.tau);
    if (params.alpha - expected).abs() > 1e-9 * expected.abs() {
        return Err(GameError::Precondition(format!(
            "alpha = {} does not match the thickness weight {}",
            params.alpha, expected
        )));
    }
    Ok(())
}

/// One seeded playout: the policy drives Player I, the thick-set strategy
/// drives Player II. Illegal policy moves end the playout and are recorded
/// as a fault rather than an error; engine-level failures still surface as
/// errors.
pub fn run_playout<P: PlayerOne + ?Sized>(
    sys: &GapSystem,
    report: &ThicknessReport,
    params: &GameParams,
    policy: &mut P,
    horizon: u32,
    seed: u64,
) -> Result<(PlayoutRecord, GameState), GameError> {
    check_thick_preconditions(params, report)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = GameState::new(params.clone());
    let mut fault = None;
    let mut r = 0.0;
    for _ in 1..=horizon {
        let opening = state.turn() == 0;
        if opening {
            r = policy.choose_radius(params, &mut rng);
        }
        let b = policy.choose_center(&state, r, &mut rng);
        if let Err(e) = state.player1_move(b, opening.then_some(r)) {
            fault = Some(e.to_string());
            break;
        }
        let deletions = thick_strategy(&state, sys, report)?;
        state.player2_move(deletions)?;
    }
    let played = state.turn();
    let (outcome, radius) = if played > 0 {
        state.outcome(played)?
    } else {
        (vec![0.0; params.n()], f64::INFINITY)
    };
    let record = PlayoutRecord {
        seed,
        horizon,
        in_deleted: state.in_deleted(&outcome),
        distance_to_ce: distance_to_ce(&outcome, sys),
        outcome,
        radius,
        fault,
    };
    Ok((record, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpets::CarpetSpec;
    use crate::geometry::BoxRegion;
    use crate::thickness::affine_thickness;

    fn bx(lo: &[f64], hi: &[f64]) -> AxisBox {
        AxisBox::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    fn central_gap() -> GapSystem {
        GapSystem::new(
            BoxRegion::closed(vec![bx(&[-1.0, -1.0], &[1.0, 1.0])]),
            vec![BoxRegion::open(vec![bx(&[-0.1, -0.1], &[0.1, 0.1])])],
        )
        .unwrap()
    }

    fn a2(beta: f64) -> DiagonalContraction {
        DiagonalContraction::new(vec![beta, beta]).unwrap()
    }

    fn params(alpha: f64, c: f64) -> GameParams {
        GameParams::new(a2(0.2), alpha, c, 1.0, 1.0).unwrap()
    }

    #[test]
    fn nesting_bound_is_exact() {
        let mut st = GameState::new(params(1.0, 0.0));
        st.player1_move(vec![0.0, 0.0], Some(1.0)).unwrap();
        // slack at turn 2 is 0.2 - 0.04 = 0.16 per axis
        let mut ok = st.clone();
        ok.player1_move(vec![0.16, 0.0], None).unwrap();
        let err = st.player1_move(vec![0.161, 0.0], None).unwrap_err();
        assert!(matches!(err, GameError::NestingViolation { axis: 0, .. }));
    }

    #[test]
    fn radius_rules() {
        let p = GameParams::new(a2(0.2), 1.0, 0.0, 0.5, 2.0).unwrap();
        let mut st = GameState::new(p.clone());
        assert!(matches!(
            st.player1_move(vec![0.0, 0.0], Some(0.4)),
            Err(GameError::RadiusOutOfRange { .. })
        ));
        assert!(matches!(st.player1_move(vec![0.0, 0.0], None), Err(GameError::RadiusRequired)));
        st.player1_move(vec![0.0, 0.0], Some(2.0)).unwrap();
        assert!(matches!(
            st.player1_move(vec![0.0, 0.0], Some(2.0)),
            Err(GameError::RadiusAlreadyFixed)
        ));
    }

    #[test]
    fn zero_exponent_budget_boundary() {
        // q = 2 spends 0.2^2 * 0.2^2 = 0.0016, the allowance alpha * (0.2 * 0.2)
        let p = params(0.04, 0.0);
        assert!(deletions_legal(&p, 1, &[(2.0, vec![0.0, 0.0])]).is_ok());
        assert!(matches!(
            deletions_legal(&p, 1, &[(1.9, vec![0.0, 0.0])]),
            Err(GameError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            deletions_legal(&p, 1, &[(2.0, vec![0.0, 0.0]), (2.0, vec![0.0, 0.0])]),
            Err(GameError::SingleDeletionOnly(2))
        ));
        assert!(matches!(
            deletions_legal(&p, 1, &[(0.9, vec![0.0, 0.0])]),
            Err(GameError::ExponentBelowOne(_))
        ));
        // skipping is always legal
        assert!(deletions_legal(&p, 1, &[]).is_ok());
    }

    #[test]
    fn positive_exponent_budget_sums() {
        // two q = 2 deletions spend 2 * 0.0016^0.5 = 0.08; the allowance is
        // (alpha * 0.04)^0.5, so alpha = 0.16 sits exactly on the boundary
        let p = params(0.16, 0.5);
        let two = vec![(2.0, vec![0.0, 0.0]), (2.0, vec![0.0, 0.0])];
        assert!(deletions_legal(&p, 1, &two).is_ok());
        let tight = params(0.1599, 0.5);
        assert!(matches!(
            deletions_legal(&tight, 1, &two),
            Err(GameError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn raising_alpha_keeps_deletions_legal() {
        let base = params(0.04, 0.0);
        let raised = params(0.05, 0.0);
        for q in [2.0, 2.5, 3.0, 4.0] {
            let dels = vec![(q, vec![0.0, 0.0])];
            if deletions_legal(&base, 2, &dels).is_ok() {
                assert!(deletions_legal(&raised, 2, &dels).is_ok(), "q = {q}");
            }
        }
    }

    #[test]
    fn budget_does_not_roll_over() {
        let p = params(0.04, 0.0);
        let mut st = GameState::new(p);
        st.player1_move(vec![0.0, 0.0], Some(1.0)).unwrap();
        st.player2_move(vec![]).unwrap();
        assert!(matches!(st.player2_move(vec![]), Err(GameError::AlreadyMoved)));
        st.player1_move(vec![0.0, 0.0], None).unwrap();
        // the turn-2 allowance is alpha * 0.04^2, not the unspent turn-1 one
        let err = st.player2_move(vec![(2.0, vec![0.0, 0.0])]).unwrap_err();
        assert!(matches!(err, GameError::BudgetExceeded { turn: 2, .. }));
    }

    #[test]
    fn thick_strategy_deletes_the_met_gap_once() {
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        assert!((p.alpha - 1.2349).abs() < 1e-3);
        let mut st = GameState::new(p);
        st.player1_move(vec![0.0, 0.0], Some(1.0)).unwrap();
        // turn 1 exceeds the bridging exponent 0.496... and U_1 meets the gap
        let dels = thick_strategy(&st, &sys, &report).unwrap();
        assert_eq!(dels.len(), 1);
        assert!((dels[0].0 - 1.430676558073393).abs() < 1e-9);
        assert_eq!(dels[0].1, vec![0.0, 0.0]);
        st.player2_move(dels).unwrap();
        st.player1_move(vec![0.0, 0.0], None).unwrap();
        // the gap is in the ledger now, so the strategy skips
        assert!(thick_strategy(&st, &sys, &report).unwrap().is_empty());
    }

    #[test]
    fn thick_strategy_skips_when_no_gap_is_met() {
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        let mut st = GameState::new(p);
        st.player1_move(vec![0.7, 0.7], Some(1.0)).unwrap();
        st.player2_move(thick_strategy(&st, &sys, &report).unwrap()).unwrap();
        st.player1_move(vec![0.7, 0.7], None).unwrap();
        // U_2 = B[(0.7, 0.7), 0.04] stays clear of the gap
        assert!(thick_strategy(&st, &sys, &report).unwrap().is_empty());
        assert!(st.ledger().is_empty());
    }

    #[test]
    fn outcome_and_membership() {
        let mut st = GameState::new(params(1.0, 0.0));
        assert!(matches!(st.outcome(1), Err(GameError::NotStarted)));
        st.player1_move(vec![0.3, -0.2], Some(1.0)).unwrap();
        st.player2_move(vec![(2.0, vec![0.3, -0.2])]).unwrap();
        let (pt, rad) = st.outcome(1).unwrap();
        assert_eq!(pt, vec![0.3, -0.2]);
        assert_eq!(rad, 0.2);
        assert!(matches!(st.outcome(2), Err(GameError::HorizonNotReached { .. })));
        for _ in 0..19 {
            st.player1_move(vec![0.3, -0.2], None).unwrap();
        }
        let (_, rad) = st.outcome(20).unwrap();
        assert!((rad - 1.048576e-14).abs() < 1e-20);
    }

    #[test]
    fn deleted_region_is_closed() {
        let mut st = GameState::new(params(100.0, 0.0));
        assert!(!st.in_deleted(&[0.0, 0.0]));
        st.player1_move(vec![0.0, 0.0], Some(1.0)).unwrap();
        st.player2_move(vec![(2.0, vec![0.5, 0.5])]).unwrap();
        assert!(st.in_deleted(&[0.5, 0.5]));
        // face point: 0.5 + 0.2^2 on one axis
        assert!(st.in_deleted(&[0.54, 0.5]));
        assert!(!st.in_deleted(&[0.5401, 0.5]));
    }

    #[test]
    fn distance_to_ce_inside_the_central_gap() {
        let sys = central_gap();
        assert_eq!(distance_to_ce(&[0.5, 0.5], &sys), 0.0);
        assert_eq!(distance_to_ce(&[0.1, 0.0], &sys), 0.0);
        let d = distance_to_ce(&[0.0, 0.0], &sys);
        assert!((d - 0.1).abs() < 1e-9, "d = {d}");
        let d = distance_to_ce(&[0.05, 0.02], &sys);
        assert!((d - 0.05).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn gap_seeker_playout_lands_in_the_deleted_region() {
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        let mut policy = GapSeeker { target: vec![0.0, 0.0] };
        let (rec, st) = run_playout(&sys, &report, &p, &mut policy, 20, 7).unwrap();
        assert!(rec.fault.is_none());
        assert_eq!(rec.outcome, vec![0.0, 0.0]);
        assert!(rec.in_deleted);
        assert!(rec.satisfies_contract());
        assert_eq!(st.ledger().len(), 1);
    }

    #[test]
    fn constant_playout_on_the_surviving_set() {
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        let mut policy = ConstantCenter { center: vec![0.5, 0.5] };
        let (rec, st) = run_playout(&sys, &report, &p, &mut policy, 20, 0).unwrap();
        assert_eq!(rec.outcome, vec![0.5, 0.5]);
        assert!(!rec.in_deleted);
        assert_eq!(rec.distance_to_ce, 0.0);
        assert!(rec.satisfies_contract());
        assert!(st.ledger().is_empty());
    }

    #[test]
    fn random_playouts_on_a_carpet_respect_the_contract() {
        let spec = CarpetSpec::new(vec![5, 5], 1.0, 2).unwrap();
        let sys = spec.generate().unwrap();
        let a = spec.contraction().unwrap();
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        for seed in 0..20 {
            let mut policy = RandomCenters;
            let (rec, _) = run_playout(&sys, &report, &p, &mut policy, 15, seed).unwrap();
            assert!(rec.satisfies_contract(), "seed {seed}: {rec:?}");
        }
    }

    #[test]
    fn playouts_are_deterministic_in_the_seed() {
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        let run = |seed| {
            let mut policy = RandomCenters;
            run_playout(&sys, &report, &p, &mut policy, 12, seed).unwrap().0
        };
        let (a1, a2) = (run(42), run(42));
        assert_eq!(a1.outcome, a2.outcome);
        assert_eq!(a1.in_deleted, a2.in_deleted);
        let b = run(43);
        assert_ne!(a1.outcome, b.outcome);
    }

    #[test]
    fn policy_faults_are_recorded_not_raised() {
        struct Lunge;
        impl PlayerOne for Lunge {
            fn choose_radius(&mut self, params: &GameParams, _: &mut dyn RngCore) -> f64 {
                clamp_unit_radius(params)
            }
            fn choose_center(&mut self, state: &GameState, _: f64, _: &mut dyn RngCore) -> Vec<f64> {
                if state.turn() == 0 {
                    vec![0.0, 0.0]
                } else {
                    vec![0.9, 0.9]
                }
            }
        }
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let p = GameParams::thick_set(a, report.tau).unwrap();
        let (rec, st) = run_playout(&sys, &report, &p, &mut Lunge, 10, 1).unwrap();
        assert!(rec.fault.is_some());
        assert_eq!(st.turn(), 1);
        assert!(!rec.satisfies_contract());
    }

    #[test]
    fn strategy_preconditions_are_enforced() {
        let sys = central_gap();
        let a = a2(0.2);
        let report = affine_thickness(&sys, &a).unwrap();
        let wrong_alpha = GameParams::new(a2(0.2), 1.0, 0.0, 1.0, 1.0).unwrap();
        let err = run_playout(&sys, &report, &wrong_alpha, &mut RandomCenters, 5, 0).unwrap_err();
        assert!(matches!(err, GameError::Precondition(_)));
        let wrong_c =
            GameParams::new(a2(0.2), alpha_for_thickness(&a2(0.2), report.tau), 0.5, 1.0, 1.0)
                .unwrap();
        let err = run_playout(&sys, &report, &wrong_c, &mut RandomCenters, 5, 0).unwrap_err();
        assert!(matches!(err, GameError::Precondition(_)));
    }

    #[test]
    fn always_skipping_never_faults() {
        let p = params(1.0, 0.0);
        let mut st = GameState::new(p);
        st.player1_move(vec![0.1, 0.1], Some(1.0)).unwrap();
        st.player2_move(vec![]).unwrap();
        for _ in 0..10 {
            st.player1_move(st.centers().last().unwrap().clone(), None).unwrap();
            st.player2_move(vec![]).unwrap();
        }
        assert_eq!(st.turn(), 11);
        assert!(st.ledger().is_empty());
    }
}
