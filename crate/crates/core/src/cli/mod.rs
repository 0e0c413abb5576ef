//! Command-line front end: scenario files in, reports and plots out.

pub mod artifacts;
pub mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::admissibility::{condition_c, verdict_for, AdmissibilityReport, Verdict, VerdictOptions};
use crate::characteristics::{alfven_speeds, characteristic_speeds, classify_local, LocalParams};
use crate::error::{Error, Result};
use crate::phaseplane::{classify_rest_point, trace_locus, LocusKind};
use crate::profile::{crossing_direction_checks, shoot_profile, viscosity_ratio_sweep, ProfileTrajectory};
use crate::shock::{
    entropy_at, find_rest_points, jump_residuals, polish_rest_point, reconstruct_state, upstream_constants,
    PhasePoint, UpstreamConstants,
};

use artifacts::{phase_portrait_svg, trajectory_csv, Report};
pub use config::{parse_scenario, Scenario};

pub const FIGURE1: &str = include_str!("../../scenarios/figure1.cfg");
pub const FIGURE2: &str = include_str!("../../scenarios/figure2.cfg");
pub const FIGURE3: &str = include_str!("../../scenarios/figure3.cfg");

const DEFAULT_RATIOS: [f64; 3] = [1.0, 0.1, 0.01];

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_ADMISSIBLE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "viscous-shock",
    version,
    about = "Viscous-profile admissibility of relativistic MHD shocks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario file; the figure commands fall back to their bundled scenario.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,

    /// Directory for CSV, SVG and report files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// Viscosity ratio eta/xi for `sweep`; may be repeated.
    #[arg(long, global = true)]
    pub ratio: Vec<f64>,

    #[arg(long, global = true)]
    pub grid_n: Option<usize>,

    #[arg(long, global = true)]
    pub ode_tol: Option<f64>,

    /// Only diagnostics on stderr; artifacts are still written.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Characteristic speeds and shock regime of the upstream state.
    Speeds,
    /// Table of downstream states allowed by the jump conditions.
    Jump,
    /// Conditions A-D and the verdict.
    Admissible,
    /// Connecting orbit as CSV plus a phase portrait.
    Profile,
    /// Profiles for several viscosity ratios.
    Sweep,
    /// Fast shock with a unique profile.
    Figure1,
    /// Slow shock with a unique profile.
    Figure2,
    /// Fast shock with non-monotone Y2 under a shrinking viscosity ratio.
    Figure3,
}

/// Exit code for an error that ends a run.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Validation { .. } | Error::Io(_) => EXIT_USAGE,
        Error::DegenerateConfiguration(_) | Error::DegeneratePoint(_) => EXIT_DEGENERATE,
        _ => EXIT_NUMERICAL,
    }
}

pub fn verdict_exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::AdmissibleUniqueProfile => EXIT_OK,
        Verdict::NotAdmissible(_) => EXIT_NOT_ADMISSIBLE,
        Verdict::Degenerate(_) => EXIT_DEGENERATE,
    }
}

/// Where artifacts go and how loud to be.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub ratios: Vec<f64>,
    pub quiet: bool,
}

/// Text for stdout and the exit code of a completed command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if !cli.quiet {
                print!("{}", out.stdout);
            }
            out.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if !cli.ratio.is_empty() && cli.command != Command::Sweep && cli.command != Command::Figure3 {
        return Err(Error::Validation {
            field: "--ratio".into(),
            constraint: "only applies to sweep".into(),
        });
    }
    let text = match (&cli.scenario, cli.command) {
        (Some(path), _) => {
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        (None, Command::Figure1) => FIGURE1.to_string(),
        (None, Command::Figure2) => FIGURE2.to_string(),
        (None, Command::Figure3) => FIGURE3.to_string(),
        (None, _) => {
            return Err(Error::Validation {
                field: "--scenario".into(),
                constraint: "required for this command".into(),
            })
        }
    };
    let mut scenario = parse_scenario(&text)?;
    if let Some(g) = cli.grid_n {
        if g < 32 {
            return Err(Error::Validation {
                field: "--grid-n".into(),
                constraint: "must be at least 32".into(),
            });
        }
        scenario.numerics.grid_n = g;
    }
    if let Some(t) = cli.ode_tol {
        if !(t > 0.0) {
            return Err(Error::Validation {
                field: "--ode-tol".into(),
                constraint: "must be positive".into(),
            });
        }
        scenario.numerics.ode_tol = t;
    }
    if cli.ratio.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Validation {
            field: "--ratio".into(),
            constraint: "must be positive".into(),
        });
    }
    let opts = RunOptions {
        out_dir: cli.out_dir.clone(),
        ratios: cli.ratio.clone(),
        quiet: cli.quiet,
    };
    run_command(cli.command, &scenario, &opts)
}

pub fn run_command(command: Command, scenario: &Scenario, opts: &RunOptions) -> Result<Outcome> {
    match command {
        Command::Speeds => speeds(scenario),
        Command::Jump => jump(scenario),
        Command::Admissible => analyse(scenario, opts, false),
        Command::Profile => profile(scenario, opts),
        Command::Figure1 | Command::Figure2 => analyse(scenario, opts, true),
        Command::Sweep | Command::Figure3 => sweep(scenario, opts),
    }
}

fn constants(scenario: &Scenario) -> Result<(UpstreamConstants, LocalParams)> {
    let state = scenario.fluid_state()?;
    let c = upstream_constants(&state, &scenario.eos)?;
    let l = LocalParams::from_state(&c.upstream, &c.eos)?;
    Ok((c, l))
}

fn resolve_target(c: &UpstreamConstants, scenario: &Scenario) -> Result<PhasePoint> {
    if let Some(guess) = scenario.target {
        return polish_rest_point(c, guess);
    }
    let found = find_rest_points(c, scenario.search_box(c), scenario.numerics.grid_n)?;
    found
        .nontrivial(c)
        .first()
        .copied()
        .ok_or_else(|| Error::SolverFailure("no downstream rest point in the search box".into()))
}

fn artifact_path(opts: &RunOptions, configured: &Option<PathBuf>, default: String) -> PathBuf {
    let p = configured.clone().unwrap_or_else(|| PathBuf::from(default));
    if p.is_absolute() {
        p
    } else {
        opts.out_dir.join(p)
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn speeds(scenario: &Scenario) -> Result<Outcome> {
    let (c, l) = constants(scenario)?;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", scenario.name);
    match characteristic_speeds(&l) {
        Ok(s) => {
            let _ = writeln!(out, "u_sl  = {:.9}", s.u_sl);
            let _ = writeln!(out, "u_A   = {:.9}", s.u_a);
            let _ = writeln!(out, "u_A*  = {:.9}", s.u_a_star);
            let _ = writeln!(out, "u_f   = {:.9}", s.u_f);
        }
        Err(Error::ComplexMagnetosonicRoots(d)) => {
            let (a, a_star) = alfven_speeds(&l)?;
            let _ = writeln!(out, "u_sl  = complex");
            let _ = writeln!(out, "u_A   = {a:.9}");
            let _ = writeln!(out, "u_A*  = {a_star:.9}");
            let _ = writeln!(out, "u_f   = complex (discriminant {d:e})");
        }
        Err(e) => return Err(e),
    }
    let _ = writeln!(out, "u1    = {:.9}", c.y0());
    let _ = writeln!(out, "regime: {}", classify_local(c.y0(), &l));
    Ok(Outcome {
        stdout: out,
        exit_code: EXIT_OK,
    })
}

fn jump(scenario: &Scenario) -> Result<Outcome> {
    let (c, _) = constants(scenario)?;
    let found = find_rest_points(&c, scenario.search_box(&c), scenario.numerics.grid_n)?;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", scenario.name);
    let _ = writeln!(
        out,
        "{:>4} {:>14} {:>14} {:>10} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "", "y", "v", "kind", "p", "eps", "n", "S", "residual"
    );
    let o = c.origin();
    for p in &found.points {
        let label = if *p == o { "\"0\"" } else { "" };
        let kind = classify_rest_point(&c, *p).map_or("?".to_string(), |k| k.kind.to_string());
        let s = reconstruct_state(&c, *p)?;
        let res = jump_residuals(&c, *p)?.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let _ = writeln!(
            out,
            "{label:>4} {:>14.9} {:>14.9} {kind:>10} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {res:>10.2e}",
            p.y,
            p.v,
            s.p,
            s.eps,
            s.n,
            entropy_at(&c, *p)?
        );
    }
    if !found.failed_cells.is_empty() {
        let _ = writeln!(out, "{} flagged cells did not converge", found.failed_cells.len());
    }
    Ok(Outcome {
        stdout: out,
        exit_code: EXIT_OK,
    })
}

fn verdict_options(scenario: &Scenario) -> VerdictOptions {
    VerdictOptions {
        grid_n: scenario.numerics.grid_n,
        samples_n: scenario.numerics.grid_n.max(256),
    }
}

fn describe_upstream(r: &mut Report, scenario: &Scenario, c: &UpstreamConstants) {
    let u = &c.upstream;
    r.line(format!("scenario: {}", scenario.name));
    r.line(format!(
        "upstream: u1 = {}, h1 = {}, h2 = {}, n = {}, p = {}, eps = {}",
        u.u[1], u.h[1], u.h[2], u.n, u.p, u.eps
    ));
}

fn verdict_lines(r: &mut Report, a: &AdmissibilityReport) {
    r.line(format!("target \"1\": y = {}, v = {}", a.target.y, a.target.v));
    r.line(format!("regime: {}", a.condition_d));
    if let Some(k) = &a.origin_kind {
        r.line(format!("rest point \"0\": {} (det {:e})", k.kind, k.det));
    }
    if let Some(k) = &a.target_kind {
        r.line(format!("rest point \"1\": {} (det {:e})", k.kind, k.det));
    }
    r.line(format!(
        "condition C (h1 h2 != 0): {}",
        if a.condition_c { "pass" } else { "fail" }
    ));
    r.line(format!(
        "condition D (evolutionary): {}",
        if a.condition_d_pass() { "pass" } else { "fail" }
    ));
    if let Some(ca) = &a.condition_a {
        r.line(format!(
            "condition A: {}; {}",
            if ca.pass { "pass" } else { "fail" },
            ca.evidence
        ));
    }
    if let Some(cb) = &a.condition_b {
        r.line(format!(
            "condition B: {}; {}",
            if cb.pass { "pass" } else { "fail" },
            cb.evidence
        ));
        if cb.samples > 0 {
            r.line(format!(
                "  min margin {:e} at (y = {}, v = {})",
                cb.min_margin, cb.argmin.y, cb.argmin.v
            ));
        }
        for p in &cb.sign_changes {
            r.line(format!("  V1 crosses V2 at (y = {}, v = {})", p.y, p.v));
        }
    }
    if let Some(p) = a.cj_contact {
        r.line(format!("Chapman-Jouguet contact at (y = {}, v = {})", p.y, p.v));
    }
    let detail = match &a.verdict {
        Verdict::AdmissibleUniqueProfile => String::new(),
        Verdict::NotAdmissible(f) => format!(
            " (failed: {})",
            f.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ),
        Verdict::Degenerate(why) => format!(" ({why})"),
    };
    r.line(format!("verdict: {}{detail}", a.verdict.label()));
}

fn verdict_keys(r: &mut Report, a: &AdmissibilityReport) {
    let opt = |b: Option<bool>| b.map_or("none".to_string(), |b| b.to_string());
    r.key("verdict", a.verdict.label());
    if let Verdict::NotAdmissible(f) = &a.verdict {
        r.key(
            "failed_conditions",
            f.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        );
    }
    r.key("regime", a.condition_d);
    r.key("target_y", a.target.y);
    r.key("target_v", a.target.v);
    r.key("condition_a", opt(a.condition_a.as_ref().map(|x| x.pass)));
    r.key("condition_b", opt(a.condition_b.as_ref().map(|x| x.pass)));
    r.key("condition_c", a.condition_c);
    r.key("condition_d", a.condition_d_pass());
    r.key("cj_contact", a.cj_contact.is_some());
    r.key(
        "condition_b_min_margin",
        a.condition_b
            .as_ref()
            .filter(|b| b.samples > 0)
            .map_or("none".to_string(), |b| b.min_margin.to_string()),
    );
}

fn profile_lines(r: &mut Report, t: &ProfileTrajectory) {
    r.line(format!(
        "profile: {:?}, {} points, x in [{}, {}], endpoint distance {:e}",
        t.direction,
        t.points.len(),
        t.points[0].x,
        t.points.last().unwrap().x,
        t.endpoint_distance
    ));
    let (s0, s1) = (t.points[0].s, t.points.last().unwrap().s);
    r.line(format!("entropy per baryon: {s0} -> {s1}"));
}

fn crossing_lines(
    r: &mut Report,
    c: &UpstreamConstants,
    target: PhasePoint,
    t: &ProfileTrajectory,
    grid_n: usize,
) {
    let v1 = trace_locus(c, LocusKind::V1, c.origin(), target.y, grid_n);
    let v2 = trace_locus(c, LocusKind::V2, c.origin(), target.v, grid_n);
    match (v1, v2) {
        (Ok(v1), Ok(v2)) => match crossing_direction_checks(c, t, &v1, &v2) {
            Ok(rep) => r.line(format!(
                "crossing directions: {} ({} V1 samples, {} V2 samples, {} trajectory crossings, {} violations)",
                if rep.conforms() { "conform" } else { "violated" },
                rep.v1_samples_checked,
                rep.v2_samples_checked,
                rep.trajectory_crossings,
                rep.violations.len()
            )),
            Err(e) => r.line(format!("crossing directions: not checked ({e})")),
        },
        (Err(e), _) | (_, Err(e)) => r.line(format!("crossing directions: not checked ({e})")),
    }
}

fn profile_artifacts(
    scenario: &Scenario,
    opts: &RunOptions,
    c: &UpstreamConstants,
    target: PhasePoint,
    t: &ProfileTrajectory,
) -> Result<()> {
    let csv = artifact_path(opts, &scenario.outputs.csv_path, format!("{}.csv", scenario.name));
    write(&csv, &trajectory_csv(t))?;
    let svg = artifact_path(opts, &scenario.outputs.svg_path, format!("{}.svg", scenario.name));
    let image = phase_portrait_svg(
        c,
        &scenario.viscosity,
        c.origin(),
        target,
        &[("VP".to_string(), thin(&t.phase_points()))],
        &scenario.name,
    );
    write(&svg, &image)
}

// Plots do not need every integrator step.
fn thin(pts: &[PhasePoint]) -> Vec<PhasePoint> {
    const MAX: usize = 2000;
    if pts.len() <= MAX {
        return pts.to_vec();
    }
    let stride = pts.len().div_ceil(MAX);
    let mut out: Vec<PhasePoint> = pts.iter().step_by(stride).copied().collect();
    if out.last() != pts.last() {
        out.push(*pts.last().unwrap());
    }
    out
}

fn report_path(scenario: &Scenario, opts: &RunOptions) -> PathBuf {
    artifact_path(
        opts,
        &scenario.outputs.report_path,
        format!("{}.report.txt", scenario.name),
    )
}

/// `admissible`, and with `with_profile` also the figure commands, which add
/// the connecting orbit and its plot when the verdict allows one.
fn analyse(scenario: &Scenario, opts: &RunOptions, with_profile: bool) -> Result<Outcome> {
    let (c, l) = constants(scenario)?;
    let target = match resolve_target(&c, scenario) {
        Ok(t) => t,
        // Nothing downstream needs to be found to reject a degenerate field.
        Err(_) if !condition_c(&l) => PhasePoint::new(c.y0() * 0.5, 0.0),
        Err(e) => return Err(e),
    };
    let a = verdict_for(&c, target, &verdict_options(scenario))?;
    let mut r = Report::default();
    describe_upstream(&mut r, scenario, &c);
    verdict_lines(&mut r, &a);
    verdict_keys(&mut r, &a);
    let mut endpoint = "none".to_string();
    if a.verdict == Verdict::AdmissibleUniqueProfile {
        let t = shoot_profile(
            &c,
            &scenario.viscosity,
            c.origin(),
            target,
            a.condition_d,
            &scenario.shoot_options(),
        )?;
        profile_lines(&mut r, &t);
        endpoint = t.endpoint_distance.to_string();
        if with_profile {
            crossing_lines(&mut r, &c, target, &t, scenario.numerics.grid_n);
            profile_artifacts(scenario, opts, &c, target, &t)?;
        }
    }
    r.key("endpoint_distance", endpoint);
    let text = r.render();
    write(&report_path(scenario, opts), &text)?;
    Ok(Outcome {
        stdout: text,
        exit_code: verdict_exit_code(&a.verdict),
    })
}

fn profile(scenario: &Scenario, opts: &RunOptions) -> Result<Outcome> {
    let (c, l) = constants(scenario)?;
    let target = resolve_target(&c, scenario)?;
    let regime = classify_local(c.y0(), &l);
    let t = shoot_profile(
        &c,
        &scenario.viscosity,
        c.origin(),
        target,
        regime,
        &scenario.shoot_options(),
    )?;
    let mut r = Report::default();
    describe_upstream(&mut r, scenario, &c);
    r.line(format!("target \"1\": y = {}, v = {}", target.y, target.v));
    r.line(format!("regime: {regime}"));
    r.line(format!(
        "viscosity: xi = {}, eta = {}",
        scenario.viscosity.xi, scenario.viscosity.eta
    ));
    profile_lines(&mut r, &t);
    crossing_lines(&mut r, &c, target, &t, scenario.numerics.grid_n);
    r.key("regime", regime);
    r.key("connected", t.connected);
    r.key("points", t.points.len());
    r.key("endpoint_distance", t.endpoint_distance);
    profile_artifacts(scenario, opts, &c, target, &t)?;
    let text = r.render();
    write(&report_path(scenario, opts), &text)?;
    Ok(Outcome {
        stdout: text,
        exit_code: EXIT_OK,
    })
}

fn sweep(scenario: &Scenario, opts: &RunOptions) -> Result<Outcome> {
    let (c, l) = constants(scenario)?;
    let target = resolve_target(&c, scenario)?;
    let regime = classify_local(c.y0(), &l);
    let ratios: Vec<f64> = if !opts.ratios.is_empty() {
        opts.ratios.clone()
    } else if !scenario.sweep_ratios.is_empty() {
        scenario.sweep_ratios.clone()
    } else {
        DEFAULT_RATIOS.to_vec()
    };
    let entries = viscosity_ratio_sweep(
        &c,
        &ratios,
        scenario.viscosity.xi,
        c.origin(),
        target,
        regime,
        &scenario.shoot_options(),
    )?;

    let mut r = Report::default();
    describe_upstream(&mut r, scenario, &c);
    r.line(format!("target \"1\": y = {}, v = {}", target.y, target.v));
    r.line(format!("regime: {regime}"));
    r.line(format!("xi = {}", scenario.viscosity.xi));
    r.line(
        "tracking distance: mean |y - Y2(v)| along the monotone part of V2; \
         max slope: largest |dv/dy| on the orbit (our measure of the limiting jump)",
    );
    r.line(format!(
        "{:>10} {:>14} {:>14} {:>12} {:>10} {:>6}",
        "eta/xi", "tracking", "max tracking", "max slope", "endpoint", "jump"
    ));
    r.key("regime", regime);
    r.key("ratios", ratios.len());
    let stem = artifact_path(opts, &scenario.outputs.csv_path, format!("{}.csv", scenario.name));
    let stem = stem.with_extension("");
    let mut curves = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        r.line(format!(
            "{:>10} {:>14.6e} {:>14.6e} {:>12.4} {:>10.2e} {:>6}",
            e.ratio,
            e.tracking_distance,
            e.max_tracking_distance,
            e.max_slope,
            e.trajectory.endpoint_distance,
            e.jump_detected
        ));
        r.key(&format!("ratio_{k}"), e.ratio);
        r.key(&format!("tracking_distance_{k}"), e.tracking_distance);
        r.key(&format!("max_slope_{k}"), e.max_slope);
        r.key(&format!("jump_detected_{k}"), e.jump_detected);
        r.key(&format!("endpoint_distance_{k}"), e.trajectory.endpoint_distance);
        let mut name = stem.clone().into_os_string();
        name.push(format!("_ratio{k}.csv"));
        write(Path::new(&name), &trajectory_csv(&e.trajectory))?;
        curves.push((
            format!("eta/xi = {}", e.ratio),
            thin(&e.trajectory.phase_points()),
        ));
    }
    let svg = artifact_path(opts, &scenario.outputs.svg_path, format!("{}.svg", scenario.name));
    write(
        &svg,
        &phase_portrait_svg(
            &c,
            &scenario.viscosity,
            c.origin(),
            target,
            &curves,
            &scenario.name,
        ),
    )?;
    let text = r.render();
    write(&report_path(scenario, opts), &text)?;
    Ok(Outcome {
        stdout: text,
        exit_code: EXIT_OK,
    })
}
