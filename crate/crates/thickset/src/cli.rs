//! Command-line front end: load a JSON run configuration, dispatch one of
//! the eight subcommands, print the text report to stdout and write the
//! text/JSON report files.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad flags, unreadable or
//! inconsistent configs, malformed geometry), 3 when a requested certificate
//! or verdict comes back negative (no pattern certificate found, gap-lemma
//! verdict inconclusive, counterexample sum not positive). A crash keeps its
//! own exit code, so 3 is a definite answer rather than a failure mode.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::carpets::CarpetError;
use crate::certificates::{
    auto_counterexample, check_intersection, check_pattern, counterexample,
    counterexample_systems, search_pattern_certificate, CertificateError, CounterexampleInstance,
    IntersectionCertificate, PatternCertificate, SearchGrid, SearchOutcome,
};
use crate::config::{
    resolve_set, resolve_set_exact, ConfigDocument, ConfigError, PolicyConfig, ReportFormat,
};
use crate::game::{
    alpha_for_thickness, run_playout, ConstantCenter, GameError, GameParams, GameState, GapSeeker,
    PlayerOne, PlayoutRecord, RandomCenters,
};
use crate::gaplemma::{
    exact_intersection_witness, gap_lemma_verdict, GapLemmaError, GapLemmaVerdict, Verdict,
};
use crate::geometry::{AxisBox, BoxRegion, DiagonalContraction, GeometryError};
use crate::render::{render_svg, RenderError};
use crate::report::{fmt_f, Report, ReportError};
use crate::thickness::{
    affine_thickness, fy_affine_relation, fy_thickness, FyAffineRelation, FyThicknessReport,
    ThicknessError, ThicknessReport, ThicknessTag,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Thickness(#[from] ThicknessError),
    #[error(transparent)]
    Carpet(#[from] CarpetError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    GapLemma(#[from] GapLemmaError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "thickset",
    version,
    about = "Thickness reports, carpet certificates, the deletion game and exact gap-lemma checks for box-gap compact sets"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory for report files; overrides `output.path` from the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Replace the configured seed list with this single seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Decimal places in text reports.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    /// Cap on surviving cells per carpet level during generation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_cells: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Affine and metric thickness of every configured set
    Thickness,
    /// Closed forms and generated geometry for the configured carpet
    Carpet,
    /// Check or search a pattern-size certificate for the carpet family
    CertifyPattern,
    /// Check an intersection certificate for explicit per-set weights
    CertifyIntersection,
    /// Seeded playouts of the deletion game on a configured set
    Game,
    /// Exact-arithmetic gap-lemma verdict for two configured sets
    GapLemma,
    /// Closed-form thickness counterexample and its box geometry
    Counterexample,
    /// SVG drawings of the configured planar sets
    Render,
}

struct Ctx {
    doc: ConfigDocument,
    out_dir: PathBuf,
    format: ReportFormat,
    precision: usize,
    max_cells: u128,
    seed: Option<u64>,
}

/// Parse arguments, run the requested command, and return the process exit
/// code. Never panics on bad input; the binary just forwards this value.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| input("--config <FILE> is required"))?;
    let doc = ConfigDocument::load(path)?;
    let out_dir = cli
        .out
        .or_else(|| doc.output.as_ref().and_then(|o| o.path.clone()))
        .unwrap_or_else(|| PathBuf::from("."));
    let format = doc
        .output
        .as_ref()
        .and_then(|o| o.format)
        .unwrap_or(ReportFormat::Both);
    let ctx = Ctx {
        doc,
        out_dir,
        format,
        precision: cli.precision,
        max_cells: cli.max_cells as u128,
        seed: cli.seed,
    };
    let (report, code) = match cli.command {
        Command::Thickness => thickness_cmd(&ctx)?,
        Command::Carpet => carpet_cmd(&ctx)?,
        Command::CertifyPattern => certify_pattern_cmd(&ctx)?,
        Command::CertifyIntersection => certify_intersection_cmd(&ctx)?,
        Command::Game => game_cmd(&ctx)?,
        Command::GapLemma => gap_lemma_cmd(&ctx)?,
        Command::Counterexample => counterexample_cmd(&ctx)?,
        Command::Render => render_cmd(&ctx)?,
    };
    print!("{}", report.text());
    report.emit(&ctx.out_dir, ctx.format)?;
    Ok(code)
}

fn tag_label(tag: ThicknessTag) -> &'static str {
    match tag {
        ThicknessTag::Finite => "finite",
        ThicknessTag::PlusInfinity => "plus_infinity",
        ThicknessTag::MinusInfinity => "minus_infinity",
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct SetThickness {
    name: String,
    affine: ThicknessReport,
    fy: FyThicknessReport,
    relation: Option<FyAffineRelation>,
}

fn thickness_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let a = ctx.doc.contraction()?;
    if ctx.doc.sets.is_empty() {
        return Err(input("thickness needs at least one entry under \"sets\""));
    }
    let p = ctx.precision;
    let mut rows = Vec::new();
    let mut body = String::new();
    for (name, set) in &ctx.doc.sets {
        let sys = resolve_set(set, ctx.max_cells)?;
        let affine = affine_thickness(&sys, &a)?;
        let fy = fy_thickness(&sys)?;
        let b0 = a.betas()[0];
        let uniform = a.betas().iter().all(|&b| b == b0);
        let relation = if uniform { fy_affine_relation(&sys, b0).ok() } else { None };
        body.push_str(&format!("set {name:?} ({} gaps)\n", sys.gaps.len()));
        body.push_str(&format!(
            "  affine tau_A = {} [{}]\n",
            fmt_f(affine.tau, p),
            tag_label(affine.tag)
        ));
        body.push_str(&format!(
            "  metric tau   = {} [{}]\n",
            fmt_f(fy.tau, p),
            tag_label(fy.tag)
        ));
        if let Some(rel) = &relation {
            body.push_str(&format!(
                "  relation |ln(tau)/ln(beta) + tau_A| = {}\n",
                fmt_f(rel.discrepancy, p)
            ));
        }
        rows.push(SetThickness { name: name.clone(), affine, fy, relation });
    }
    Ok((Report::new("thickness", &ctx.doc, body, &rows)?, 0))
}

#[derive(Serialize)]
struct GeneratedSummary {
    gaps: usize,
    tau_geometry: f64,
    tau_discrepancy: f64,
}

#[derive(Serialize)]
struct CarpetResult {
    r: Vec<u32>,
    t: f64,
    depth: u32,
    min_face_exponent: f64,
    tau: f64,
    alpha: f64,
    certificate_exponent_floor: f64,
    fits_certificate_range: bool,
    generated: Option<GeneratedSummary>,
    note: Option<String>,
}

fn carpet_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let spec = ctx.doc.carpet()?.spec()?;
    let p = ctx.precision;
    let tau = spec.closed_form_thickness();
    let alpha = spec.closed_form_alpha();
    let floor = crate::carpets::certificate_exponent_floor(&spec.r);
    let mut note = None;
    let generated = match spec.generate_with_limit(ctx.max_cells) {
        Ok(sys) => {
            let a = spec.contraction()?;
            let rep = affine_thickness(&sys, &a)?;
            Some(GeneratedSummary {
                gaps: sys.gaps.len(),
                tau_geometry: rep.tau,
                tau_discrepancy: (rep.tau - tau).abs(),
            })
        }
        Err(e) => {
            note = Some(e.to_string());
            None
        }
    };
    let mut body = format!("carpet r = {:?}, t = {}, depth = {}\n", spec.r, fmt_f(spec.t, p), spec.depth);
    body.push_str(&format!("  min face exponent m = {}\n", fmt_f(spec.min_face_exponent(), p)));
    body.push_str(&format!("  tau   = {}\n", fmt_f(tau, p)));
    body.push_str(&format!("  alpha = {}\n", fmt_f(alpha, p)));
    body.push_str(&format!(
        "  certificate exponent floor = {} (t in certificate range: {})\n",
        fmt_f(floor, p),
        yn(spec.fits_certificate_range())
    ));
    match (&generated, &note) {
        (Some(g), _) => body.push_str(&format!(
            "  generated {} gaps; geometric tau = {}; |closed - geometric| = {}\n",
            g.gaps,
            fmt_f(g.tau_geometry, p),
            fmt_f(g.tau_discrepancy, p)
        )),
        (None, Some(msg)) => body.push_str(&format!("  generation skipped: {msg}\n")),
        (None, None) => {}
    }
    let result = CarpetResult {
        r: spec.r.clone(),
        t: spec.t,
        depth: spec.depth,
        min_face_exponent: spec.min_face_exponent(),
        tau,
        alpha,
        certificate_exponent_floor: floor,
        fits_certificate_range: spec.fits_certificate_range(),
        generated,
        note,
    };
    Ok((Report::new("carpet", &ctx.doc, body, &result)?, 0))
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
enum PatternResult {
    Explicit { certificate: PatternCertificate },
    Search { outcome: SearchOutcome },
}

fn certificate_lines(body: &mut String, cert: &PatternCertificate, p: usize) {
    body.push_str(&format!(
        "  floor exponent = {}, slack1 = {}, slack2 = {}\n",
        fmt_f(cert.floor_exponent, p),
        fmt_f(cert.slack1, p),
        fmt_f(cert.slack2, p)
    ));
    body.push_str(&format!(
        "  K_M = {}, dim bound = {} (dim condition met: {})\n",
        fmt_f(cert.k_m, p),
        fmt_f(cert.dim_bound, p),
        yn(cert.dim_condition_met)
    ));
    match &cert.reason {
        None => body.push_str("  valid: yes\n"),
        Some(r) => body.push_str(&format!("  valid: no ({r:?})\n")),
    }
}

fn certify_pattern_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let block = ctx.doc.carpet()?;
    let cert_cfg = ctx.doc.certify.as_ref();
    let p = ctx.precision;
    let explicit = cert_cfg
        .map(|c| c.t.is_some() || c.c.is_some() || c.delta.is_some() || c.m.is_some())
        .unwrap_or(false);
    if explicit {
        let cfg = cert_cfg.expect("explicit implies a certify block");
        let t = cfg.t.unwrap_or(block.t);
        let c = cfg.c.ok_or_else(|| input("explicit certificates need certify.c"))?;
        let delta = cfg.delta.ok_or_else(|| input("explicit certificates need certify.delta"))?;
        let m = cfg.m.ok_or_else(|| input("explicit certificates need certify.m"))?;
        let spec = crate::carpets::CarpetSpec::new(block.r.clone(), t, block.depth)?;
        let betas = spec.contraction()?.betas().to_vec();
        let alpha = spec.closed_form_alpha();
        let certificate = check_pattern(&betas, alpha, c, delta, m)?;
        let mut body = format!("pattern certificate for r = {:?}\n", block.r);
        body.push_str(&format!(
            "  t = {}, c = {}, delta = {:e}, M = {}\n",
            fmt_f(t, p),
            fmt_f(c, p),
            delta,
            m
        ));
        certificate_lines(&mut body, &certificate, p);
        let code = if certificate.valid { 0 } else { 3 };
        let result = PatternResult::Explicit { certificate };
        return Ok((Report::new("certify-pattern", &ctx.doc, body, &result)?, code));
    }
    let defaults = SearchGrid::default();
    let grid = SearchGrid {
        points: cert_cfg.and_then(|c| c.points).unwrap_or(defaults.points),
        rounds: cert_cfg.and_then(|c| c.rounds).unwrap_or(defaults.rounds),
        m_max: defaults.m_max,
    };
    if grid.points < 2 {
        return Err(input("certify.points must be at least 2"));
    }
    let outcome = search_pattern_certificate(&block.r, &grid)?;
    let mut body = format!("certificate search for r = {:?}\n", block.r);
    body.push_str(&format!(
        "  exponent floor = {}, grid = {} points x {} refinement rounds\n",
        fmt_f(outcome.exponent_floor, p),
        grid.points,
        grid.rounds
    ));
    body.push_str(&format!("  evaluations = {}\n", outcome.evaluations));
    if let Some(n) = &outcome.note {
        body.push_str(&format!("  note: {n}\n"));
    }
    let code = match &outcome.best {
        Some(best) => {
            let t = -best.betas[0].ln() / (block.r[0] as f64).ln();
            body.push_str(&format!(
                "  best: M = {} at t = {}, c = {}, delta = {:e}\n",
                best.m,
                fmt_f(t, p),
                fmt_f(best.c, p),
                best.delta
            ));
            certificate_lines(&mut body, best, p);
            0
        }
        None => {
            body.push_str("  no valid certificate found\n");
            3
        }
    };
    let result = PatternResult::Search { outcome };
    Ok((Report::new("certify-pattern", &ctx.doc, body, &result)?, code))
}

fn certify_intersection_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let a = ctx.doc.contraction()?;
    let cfg = ctx
        .doc
        .certify
        .as_ref()
        .ok_or_else(|| input("certify-intersection needs a \"certify\" block"))?;
    let alphas = cfg
        .alphas
        .as_ref()
        .ok_or_else(|| input("certify-intersection needs certify.alphas"))?;
    let c = cfg.c.ok_or_else(|| input("certify-intersection needs certify.c"))?;
    let delta = cfg.delta.ok_or_else(|| input("certify-intersection needs certify.delta"))?;
    let cert: IntersectionCertificate = check_intersection(a.betas(), alphas, c, delta)?;
    let p = ctx.precision;
    let mut body = format!(
        "intersection certificate for {} sets, betas = {:?}\n",
        cert.alphas.len(),
        cert.betas
    );
    body.push_str(&format!(
        "  combined alpha = {}, c = {}, delta = {:e}\n",
        fmt_f(cert.alpha_combined, p),
        fmt_f(cert.c, p),
        cert.delta
    ));
    body.push_str(&format!(
        "  floor exponent = {}, slack1 = {}, slack2 = {}\n",
        fmt_f(cert.floor_exponent, p),
        fmt_f(cert.slack1, p),
        fmt_f(cert.slack2, p)
    ));
    body.push_str(&format!(
        "  K_1 = {} (adopted convention), dim bound = {}\n",
        fmt_f(cert.k1, p),
        fmt_f(cert.dim_bound, p)
    ));
    match &cert.reason {
        None => body.push_str("  valid: yes\n"),
        Some(r) => body.push_str(&format!("  valid: no ({r:?})\n")),
    }
    let code = if cert.valid { 0 } else { 3 };
    Ok((Report::new("certify-intersection", &ctx.doc, body, &cert)?, code))
}

fn region_center(region: &BoxRegion, n: usize) -> Vec<f64> {
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for b in &region.boxes {
        for j in 0..n {
            lo[j] = lo[j].min(b.lo()[j]);
            hi[j] = hi[j].max(b.hi()[j]);
        }
    }
    lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect()
}

struct GameRun {
    set_name: String,
    tau: f64,
    alpha: f64,
    records: Vec<PlayoutRecord>,
    states: Vec<GameState>,
}

fn run_game(ctx: &Ctx) -> Result<GameRun, CliError> {
    let game = ctx
        .doc
        .game
        .as_ref()
        .ok_or_else(|| input("this command needs a \"game\" block"))?;
    let a = ctx.doc.contraction()?;
    let (set_name, set_cfg) = ctx.doc.set(game.set.as_deref())?;
    let sys = resolve_set(set_cfg, ctx.max_cells)?;
    let report = affine_thickness(&sys, &a)?;
    if game.alpha.is_none() && report.tag != ThicknessTag::Finite {
        return Err(input(format!(
            "set {set_name:?} has no finite thickness, so game.alpha cannot be defaulted"
        )));
    }
    let alpha = game.alpha.unwrap_or_else(|| alpha_for_thickness(&a, report.tau));
    let params = GameParams::new(a, alpha, game.c, game.rho2, game.rho1)?;
    if let Some(pt) = &game.point {
        if pt.len() != sys.n() {
            return Err(input(format!(
                "game.point has {} coordinates but the set is {}-dimensional",
                pt.len(),
                sys.n()
            )));
        }
    }
    let mut policy: Box<dyn PlayerOne> = match game.policy {
        PolicyConfig::Random => Box::new(RandomCenters),
        PolicyConfig::GapSeeker => Box::new(GapSeeker {
            target: game.point.clone().unwrap_or_else(|| {
                sys.gaps
                    .first()
                    .map(|g| region_center(g, sys.n()))
                    .unwrap_or_else(|| vec![0.0; sys.n()])
            }),
        }),
        PolicyConfig::Constant => Box::new(ConstantCenter {
            center: game.point.clone().unwrap_or_else(|| vec![0.0; sys.n()]),
        }),
    };
    let seeds: Vec<u64> = match ctx.seed {
        Some(s) => vec![s],
        None => game.seeds.clone(),
    };
    if seeds.is_empty() {
        return Err(input("game needs at least one seed"));
    }
    let mut records = Vec::new();
    let mut states = Vec::new();
    for &seed in &seeds {
        let (rec, state) = run_playout(&sys, &report, &params, &mut *policy, game.horizon, seed)?;
        records.push(rec);
        states.push(state);
    }
    Ok(GameRun { set_name: set_name.to_string(), tau: report.tau, alpha, records, states })
}

#[derive(Serialize)]
struct GameResult {
    set: String,
    tau: f64,
    alpha: f64,
    c: f64,
    horizon: u32,
    policy: PolicyConfig,
    playouts: Vec<PlayoutRecord>,
    contract_satisfied: usize,
    faults: usize,
    all_satisfy: bool,
}

fn game_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let game = ctx.doc.game.clone().ok_or_else(|| input("game needs a \"game\" block"))?;
    let run = run_game(ctx)?;
    let p = ctx.precision;
    let satisfied = run.records.iter().filter(|r| r.satisfies_contract()).count();
    let faults = run.records.iter().filter(|r| r.fault.is_some()).count();
    let mut body = format!(
        "deletion game on set {:?} (tau_A = {})\n",
        run.set_name,
        fmt_f(run.tau, p)
    );
    body.push_str(&format!(
        "  alpha = {}, c = {}, horizon = {}, policy = {:?}\n",
        fmt_f(run.alpha, p),
        fmt_f(game.c, p),
        game.horizon,
        game.policy
    ));
    for rec in &run.records {
        let status = match &rec.fault {
            Some(f) => format!("FAULT: {f}"),
            None if rec.in_deleted => "outcome in deleted region".to_string(),
            None => format!(
                "distance {} within radius {}",
                fmt_f(rec.distance_to_ce, p),
                fmt_f(rec.radius, p)
            ),
        };
        body.push_str(&format!(
            "  seed {}: {status}; contract {}\n",
            rec.seed,
            if rec.satisfies_contract() { "ok" } else { "broken" }
        ));
    }
    body.push_str(&format!(
        "  playouts = {}, contract satisfied = {satisfied}, faults = {faults}\n",
        run.records.len()
    ));
    let result = GameResult {
        set: run.set_name,
        tau: run.tau,
        alpha: run.alpha,
        c: game.c,
        horizon: game.horizon,
        policy: game.policy,
        contract_satisfied: satisfied,
        faults,
        all_satisfy: satisfied == run.records.len(),
        playouts: run.records,
    };
    Ok((Report::new("game", &ctx.doc, body, &result)?, 0))
}

#[derive(Serialize)]
struct GapLemmaResult {
    first: String,
    second: String,
    verdict: GapLemmaVerdict,
    witness: Option<Vec<String>>,
}

fn gap_lemma_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let gl = ctx
        .doc
        .gaplemma
        .as_ref()
        .ok_or_else(|| input("gap-lemma needs a \"gaplemma\" block"))?;
    let a = ctx.doc.contraction()?;
    let (_, first_cfg) = ctx.doc.set(Some(&gl.first))?;
    let (_, second_cfg) = ctx.doc.set(Some(&gl.second))?;
    let s1 = resolve_set_exact(first_cfg, ctx.max_cells)?;
    let s2 = resolve_set_exact(second_cfg, ctx.max_cells)?;
    let verdict = gap_lemma_verdict(&s1, &s2, &a)?;
    let witness = exact_intersection_witness(&s1, &s2)
        .map(|pt| pt.iter().map(|r| r.to_string()).collect::<Vec<_>>());
    let p = ctx.precision;
    let mut body = format!("gap lemma for sets {:?} and {:?}\n", gl.first, gl.second);
    body.push_str(&format!(
        "  bullet 1 (boundaries escape the other system): {}",
        yn(verdict.sufficient.bullet1)
    ));
    match (verdict.sufficient.witness1, verdict.sufficient.witness2) {
        (Some(w1), Some(w2)) => body.push_str(&format!(" (witness gaps {w1} and {w2})\n")),
        _ => body.push('\n'),
    }
    body.push_str(&format!(
        "  bullet 2 (boundary containment implies containment): {}",
        yn(verdict.sufficient.bullet2)
    ));
    match verdict.sufficient.violation {
        Some((i, j)) => body.push_str(&format!(" (violated by gaps {i} and {j})\n")),
        None => body.push('\n'),
    }
    body.push_str(&format!(
        "  boundedly-gap-linked after refinement: {}",
        yn(verdict.bg_linked)
    ));
    match verdict.bg_counterwitness {
        Some((i, j)) => body.push_str(&format!(" (counterwitness gaps {i} and {j})\n")),
        None => body.push('\n'),
    }
    body.push_str(&format!(
        "  tau_A = {} [{}] and {} [{}]; sum = {}\n",
        fmt_f(verdict.tau1, p),
        tag_label(verdict.tau1_tag),
        fmt_f(verdict.tau2, p),
        tag_label(verdict.tau2_tag),
        fmt_f(verdict.thickness_sum, p)
    ));
    let certified = matches!(verdict.verdict, Verdict::CertifiedNonempty);
    body.push_str(&format!(
        "  verdict: {}\n",
        if certified { "certified nonempty" } else { "inconclusive" }
    ));
    match &witness {
        Some(pt) => body.push_str(&format!("  exact witness point: ({})\n", pt.join(", "))),
        None => body.push_str("  exact witness point: none (sets are disjoint)\n"),
    }
    let code = if certified { 0 } else { 3 };
    let result = GapLemmaResult {
        first: gl.first.clone(),
        second: gl.second.clone(),
        verdict,
        witness,
    };
    Ok((Report::new("gap-lemma", &ctx.doc, body, &result)?, code))
}

#[derive(Serialize)]
struct CounterexampleResult {
    mode: &'static str,
    instance: CounterexampleInstance,
    tau1_geometry: Option<f64>,
    tau2_geometry: Option<f64>,
}

fn counterexample_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    let ce = ctx
        .doc
        .counterexample
        .as_ref()
        .ok_or_else(|| input("counterexample needs a \"counterexample\" block"))?;
    let (mode, instance) = match (ce.r, ce.s, ce.t) {
        (Some(r), Some(s), Some(t)) => ("explicit", counterexample(&ce.betas, r, s, t)?),
        (None, None, None) => ("auto", auto_counterexample(&ce.betas)?),
        _ => {
            return Err(input(
                "counterexample scales r, s, t must be given all together or not at all",
            ))
        }
    };
    let (tau1_geometry, tau2_geometry) =
        match counterexample_systems(instance.n, instance.r, instance.s, instance.t) {
            Ok((c1, c2)) => {
                let a = DiagonalContraction::new(instance.betas.clone())?;
                (
                    Some(affine_thickness(&c1, &a)?.tau),
                    Some(affine_thickness(&c2, &a)?.tau),
                )
            }
            Err(_) => (None, None),
        };
    let p = ctx.precision;
    let mut body = format!("thickness sum counterexample ({mode} scales)\n");
    body.push_str(&format!(
        "  betas = {:?}, r = {:e}, s = {:e}, t = {:e}\n",
        instance.betas, instance.r, instance.s, instance.t
    ));
    body.push_str(&format!(
        "  tau1 = {}, tau2 = {}, sum = {} (positive: {})\n",
        fmt_f(instance.tau1, p),
        fmt_f(instance.tau2, p),
        fmt_f(instance.sum, p),
        yn(instance.sum_positive)
    ));
    if let (Some(t1), Some(t2)) = (tau1_geometry, tau2_geometry) {
        body.push_str(&format!(
            "  geometry check: tau_A(C1) = {}, tau_A(C2) = {}\n",
            fmt_f(t1, p),
            fmt_f(t2, p)
        ));
    }
    let code = if instance.sum_positive { 0 } else { 3 };
    let result = CounterexampleResult { mode, instance, tau1_geometry, tau2_geometry };
    Ok((Report::new("counterexample", &ctx.doc, body, &result)?, code))
}

#[derive(Serialize)]
struct RenderResult {
    files: Vec<PathBuf>,
    overlay_set: Option<String>,
}

fn render_cmd(ctx: &Ctx) -> Result<(Report, i32), CliError> {
    if ctx.doc.sets.is_empty() {
        return Err(input("render needs at least one entry under \"sets\""));
    }
    let overlay = if ctx.doc.game.is_some() {
        let run = run_game(ctx)?;
        let state = run.states.first().expect("seed list checked nonempty");
        let mut boxes = Vec::new();
        for d in state.ledger() {
            boxes.push(state.deletion_box(d)?);
        }
        let outcome = run.records.first().expect("one record per seed").outcome.clone();
        Some((run.set_name, boxes, outcome))
    } else {
        None
    };
    std::fs::create_dir_all(&ctx.out_dir)?;
    let mut files = Vec::new();
    let mut body = format!("rendered {} sets\n", ctx.doc.sets.len());
    for (name, set_cfg) in &ctx.doc.sets {
        let sys = resolve_set(set_cfg, ctx.max_cells)?;
        let (deletions, outcome): (&[AxisBox], Option<&[f64]>) = match &overlay {
            Some((overlay_name, boxes, point)) if overlay_name == name => {
                (boxes, Some(point))
            }
            _ => (&[], None),
        };
        let svg = render_svg(&sys, deletions, outcome)?;
        let path = ctx.out_dir.join(format!("{name}.svg"));
        std::fs::write(&path, svg)?;
        body.push_str(&format!(
            "  {name} -> {}{}\n",
            path.display(),
            if outcome.is_some() { " (deletions and outcome overlaid)" } else { "" }
        ));
        files.push(path);
    }
    let result = RenderResult {
        files,
        overlay_set: overlay.map(|(name, _, _)| name),
    };
    Ok((Report::new("render", &ctx.doc, body, &result)?, 0))
}
