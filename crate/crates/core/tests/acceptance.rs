//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use viscous_shock::admissibility::{full_verdict, verdict_for, Condition, Verdict, VerdictOptions};
use viscous_shock::characteristics::{
    characteristic_speeds, classify_regime, q_polynomial, r_star, LocalParams, ShockRegime,
};
use viscous_shock::cli::{main_with_args, parse_scenario, Scenario, FIGURE1, FIGURE2, FIGURE3};
use viscous_shock::covariant::stress_energy;
use viscous_shock::eos::EosSpec;
use viscous_shock::phaseplane::{
    determinant_closed_form, f1, f2, field, jacobian_at_point, jacobian_at_zero, local_expansion_checks,
    RestPointKind,
};
use viscous_shock::profile::{shoot_profile, viscosity_ratio_sweep, ShootOptions, ViscosityPair};
use viscous_shock::shock::{
    entropy_stationarity_check, find_rest_points, polish_rest_point, reconstruct_state, upstream_constants,
    PhasePoint, UpstreamConstants,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

struct Loaded {
    scenario: Scenario,
    c: UpstreamConstants,
    target: Option<PhasePoint>,
}

fn load(text: &str) -> Result<Loaded, String> {
    let scenario = ok(parse_scenario(text))?;
    let c = ok(upstream_constants(&ok(scenario.fluid_state())?, &scenario.eos))?;
    let target = match scenario.target {
        Some(t) => Some(ok(polish_rest_point(&c, t))?),
        None => None,
    };
    Ok(Loaded { scenario, c, target })
}

fn load_file(name: &str) -> Result<Loaded, String> {
    load(&ok(std::fs::read_to_string(data(name)))?)
}

fn figures() -> Result<Vec<Loaded>, String> {
    [FIGURE1, FIGURE2, FIGURE3].iter().map(|t| load(t)).collect()
}

// Quartic and auxiliary polynomial spelled out independently of the library.
fn q_oracle(y: f64, l: &LocalParams) -> f64 {
    let w = l.p + l.eps;
    let m = l.mu_over_4pi;
    let y2 = y * y;
    (1.0 - l.cs2) * y2 * y2 - y2 * (l.cs2 + m * l.h_sq / w) + m * l.cs2 * l.h1 * l.h1 / w
}

fn r_oracle(y: f64, l: &LocalParams) -> f64 {
    (l.p + l.eps) * y * y * (1.0 + y * y) - l.mu_over_4pi * l.h1 * l.h1
}

// Draws cover p, eps, cs2 in (0, 1) and |h|^2 >= (h1)^2 > 0.
fn speed_ordering() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (
        (0.05f64..5.0, 1.1f64..20.0, 0.01f64..0.99),
        (0.01f64..3.0, 0.0f64..9.0, 0.1f64..2.0),
    );
    let result = runner.run(&strategy, |((p, ratio, cs2), (h1, extra, m))| {
        let l = LocalParams {
            p,
            eps: p * ratio,
            cs2,
            h_sq: h1 * h1 + extra,
            h0: 0.0,
            h1,
            h2: extra.sqrt(),
            mu_over_4pi: m,
        };
        let w = p + l.eps;
        let s = characteristic_speeds(&l).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(
            s.u_sl < s.u_a && s.u_a < s.u_a_star && s.u_a_star < s.u_f,
            "not ordered: {:?}",
            s
        );
        let qs = (1.0 - cs2) + (cs2 + m * l.h_sq / w) + m * cs2 * h1 * h1 / w;
        for y in [s.u_sl, s.u_f] {
            prop_assert!(q_oracle(y, &l).abs() <= 1e-10 * qs);
            prop_assert!((q_polynomial(y, &l) - q_oracle(y, &l)).abs() <= 1e-12 * qs);
        }
        let rs = w * s.u_a_star.powi(2) * (1.0 + s.u_a_star.powi(2));
        prop_assert!(r_oracle(s.u_a_star, &l).abs() <= 1e-10 * rs);
        prop_assert!((r_star(s.u_a_star, &l) - r_oracle(s.u_a_star, &l)).abs() <= 1e-12 * rs);
        Ok(())
    });
    ok(result)?;
    Ok("1000 draws strictly ordered, roots of Q and R* to 1e-10".into())
}

fn ex1_regression() -> Outcome {
    let ex = load_file("ex1.cfg")?;
    let l = ok(LocalParams::from_state(&ex.c.upstream, &ex.c.eos))?;
    ensure!(
        (l.p - 1.0).abs() < 1e-15 && (l.eps - 3.0).abs() < 1e-14,
        "p, eps = {}, {}",
        l.p,
        l.eps
    );
    ensure!(
        (l.h_sq - 1.0).abs() < 1e-15 && (l.h1 - 1.0).abs() < 1e-15,
        "h = {}, {}",
        l.h_sq,
        l.h1
    );
    let s = ok(characteristic_speeds(&l))?;
    let got = [s.u_sl, s.u_a, s.u_a_star, s.u_f];
    let want = [0.424036, 0.447214, 0.455090, 0.833783];
    for (g, w) in got.iter().zip(want) {
        ensure!((g - w).abs() < 1e-6, "{g} vs {w}");
    }
    // Exact values from the closed forms.
    let exact = [
        ((7.0 - 17f64.sqrt()) / 16.0).sqrt(),
        0.2f64.sqrt(),
        ((2f64.sqrt() - 1.0) / 2.0).sqrt(),
        ((7.0 + 17f64.sqrt()) / 16.0).sqrt(),
    ];
    for (g, e) in got.iter().zip(exact) {
        ensure!((g - e).abs() < 1e-13, "{g} vs exact {e}");
    }
    Ok(format!("{got:.6?}"))
}

fn random_points(c: &UpstreamConstants, seed: u64, count: usize) -> Vec<PhasePoint> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pts = Vec::new();
    while pts.len() < count {
        let pt = PhasePoint::new(rng.random_range(0.2..2.5) * c.y0(), rng.random_range(-1.5..1.5));
        if reconstruct_state(c, pt).is_ok() {
            pts.push(pt);
        }
    }
    pts
}

fn cross_form_identities() -> Outcome {
    let mut worst = 0.0f64;
    for (k, fig) in figures()?.iter().enumerate() {
        let c = &fig.c;
        for pt in random_points(c, 17 + k as u64, 100) {
            let s = ok(reconstruct_state(c, pt))?;
            let t = ok(stress_energy(&s))?;
            let a = 1.0 + pt.y * pt.y;
            let g1 = (t[1][1] - c.t1[1]) / a;
            let g2 = (t[1][2] - c.t1[2] - pt.y * s.u[2] * g1) / a.powf(1.5);
            let size = t.iter().flatten().fold(c.t1[1].abs(), |m, x| m.max(x.abs())) / a;
            let e1 = (ok(f1(c, pt))? - g1).abs() / size;
            let e2 = (ok(f2(c, pt))? - g2).abs() / size;
            ensure!(e1 <= 1e-9 && e2 <= 1e-9, "scenario {k} at {pt:?}: {e1:e}, {e2:e}");
            worst = worst.max(e1).max(e2);
        }
    }
    Ok(format!("300 points, worst relative deviation {worst:.1e}"))
}

fn f2_eos_independence() -> Outcome {
    let others = [
        EosSpec::linear(0.1).map_err(|e| e.to_string())?,
        EosSpec::AnomalousWindow {
            kappa_out: 0.5,
            kappa_in: 0.02,
            eps_lo: 1.0,
            eps_hi: 2.0,
            smoothing_width: 0.3,
        },
    ];
    let mut n = 0;
    for (k, fig) in figures()?.iter().enumerate() {
        for pt in random_points(&fig.c, 99 + k as u64, 100) {
            for eos in others {
                let other = UpstreamConstants { eos, ..fig.c };
                let (a, b) = (ok(f2(&fig.c, pt))?, ok(f2(&other, pt))?);
                ensure!(a.to_bits() == b.to_bits(), "F2 {a} vs {b} at {pt:?}");
                n += 1;
            }
        }
    }
    Ok(format!("{n} bitwise-equal evaluations"))
}

fn jump_consistency() -> Outcome {
    let mut count = 0;
    let mut worst = 0.0f64;
    let mut cases = figures()?;
    cases.push(load_file("three_point.cfg")?);
    for fig in &cases {
        let c = &fig.c;
        let bx = fig.scenario.search_box(c);
        let rp = ok(find_rest_points(c, bx, fig.scenario.numerics.grid_n))?;
        let origin = c.origin();
        ensure!(
            rp.points
                .iter()
                .any(|p| p.distance(&origin) < 1e-8 * (1.0 + c.y0())),
            "{}: identity rest point missing",
            fig.scenario.name
        );
        if let Some(t) = fig.target {
            ensure!(
                rp.points.iter().any(|p| p.distance(&t) < 1e-7),
                "{}: target {t:?} not among {:?}",
                fig.scenario.name,
                rp.points
            );
        }
        for p in &rp.points {
            let s = ok(reconstruct_state(c, *p))?;
            let t = ok(stress_energy(&s))?;
            let y = s.u[1];
            let flux = [
                (t[1][0], c.t1[0]),
                (t[1][1], c.t1[1]),
                (t[1][2], c.t1[2]),
                (s.n * y, c.j),
                (y * s.h[0] - s.h[1] * s.u[0], c.h[0]),
                (y * s.h[2] - s.h[1] * s.u[2], c.h[2]),
            ];
            for (got, want) in flux {
                let rel = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
                let rel = if want.abs() < 1e-12 {
                    (got - want).abs()
                } else {
                    rel
                };
                ensure!(rel < 1e-8, "{}: flux {got} vs {want} at {p:?}", fig.scenario.name);
                worst = worst.max(rel);
            }
            count += 1;
        }
    }
    Ok(format!(
        "{count} rest points, worst relative flux mismatch {worst:.1e}"
    ))
}

fn entropy_stationarity() -> Outcome {
    let mut notes = Vec::new();
    let mut cases = figures()?;
    cases.push(load_file("three_point.cfg")?);
    for fig in &cases {
        let c = &fig.c;
        let o = c.origin();
        let r = |h: f64| -> Result<f64, String> {
            let (a, b) = ok(entropy_stationarity_check(c, o, h))?;
            Ok(a.hypot(b))
        };
        let r1 = r(1e-4)?;
        let r2 = r(5e-5)?;
        ensure!(r1 < 1e-6, "{}: residual {r1:e} at step 1e-4", fig.scenario.name);
        let q = r1 / r2;
        ensure!(
            (3.5..4.5).contains(&q),
            "{}: residual ratio {q} under step halving",
            fig.scenario.name
        );
        notes.push(format!("{:.1e}/{q:.2}", r1));
    }
    Ok(format!("residual/halving ratio: {}", notes.join(", ")))
}

// Central differences of (F1, F2), Richardson-extrapolated.
fn fd_jacobian_oracle(c: &UpstreamConstants, at: PhasePoint, h: f64) -> Result<[[f64; 2]; 2], String> {
    let d = |h: f64| -> Result<[[f64; 2]; 2], String> {
        let fy = |s: f64| field(c, PhasePoint::new(at.y + s, at.v)).map_err(|e| e.to_string());
        let fv = |s: f64| field(c, PhasePoint::new(at.y, at.v + s)).map_err(|e| e.to_string());
        let (yp, ym, vp, vm) = (fy(h)?, fy(-h)?, fv(h)?, fv(-h)?);
        Ok([
            [(yp[0] - ym[0]) / (2.0 * h), (vp[0] - vm[0]) / (2.0 * h)],
            [(yp[1] - ym[1]) / (2.0 * h), (vp[1] - vm[1]) / (2.0 * h)],
        ])
    };
    let (a, b) = (d(h)?, d(h / 2.0)?);
    let mut r = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = (4.0 * b[i][j] - a[i][j]) / 3.0;
        }
    }
    Ok(r)
}

fn jacobian_and_saddles() -> Outcome {
    let mut worst = 0.0f64;
    let mut kinds = Vec::new();
    for fig in figures()? {
        let c = &fig.c;
        let j = ok(jacobian_at_zero(c))?;
        let fd = fd_jacobian_oracle(c, c.origin(), 1e-4 * c.y0())?;
        for i in 0..2 {
            for k in 0..2 {
                let e = (j.jacobian[i][k] - fd[i][k]).abs() / j.jacobian[i][k].abs();
                ensure!(
                    e < 1e-5,
                    "{}: J[{i}][{k}] = {} vs {}",
                    fig.scenario.name,
                    j.jacobian[i][k],
                    fd[i][k]
                );
                worst = worst.max(e);
            }
        }
        let closed = ok(determinant_closed_form(c))?;
        ensure!(
            (j.det - closed).abs() <= 1e-9 * closed.abs(),
            "{}: det {} vs closed form {closed}",
            fig.scenario.name,
            j.det
        );
        let regime = ok(classify_regime(&c.upstream, &c.eos))?;
        let t = fig.target.ok_or("figure without target")?;
        let at1 = ok(jacobian_at_point(c, t))?;
        match regime {
            ShockRegime::Slow => ensure!(
                j.kind == RestPointKind::Saddle,
                "{}: \"0\" is {:?}",
                fig.scenario.name,
                j.kind
            ),
            ShockRegime::Fast => ensure!(
                at1.kind == RestPointKind::Saddle,
                "{}: \"1\" is {:?}",
                fig.scenario.name,
                at1.kind
            ),
            ShockRegime::NotEvolutionary => return Err(format!("{}: not evolutionary", fig.scenario.name)),
        }
        kinds.push(format!(
            "{}: {regime}, \"0\" {}, \"1\" {}",
            fig.scenario.name, j.kind, at1.kind
        ));
    }
    Ok(format!("worst entry error {worst:.1e}; {}", kinds.join("; ")))
}

fn local_expansions() -> Outcome {
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for fig in figures()? {
        let c = &fig.c;
        let rep = ok(local_expansion_checks(c))?;
        for ch in &rep.checks {
            ensure!(
                ch.rel_err() <= 1e-3,
                "{}: {} analytic {} measured {}",
                fig.scenario.name,
                ch.name,
                ch.analytic,
                ch.measured
            );
            worst = worst.max(ch.rel_err());
        }
        let agree = (rep.ratio_from_q - rep.ratio_from_d).abs() / rep.ratio_from_q.abs();
        ensure!(
            agree <= 1e-3,
            "{}: tangent ratio {} vs {}",
            fig.scenario.name,
            rep.ratio_from_q,
            rep.ratio_from_d
        );
        let regime = ok(classify_regime(&c.upstream, &c.eos))?;
        match regime {
            ShockRegime::Fast => ensure!(
                rep.ratio_from_q > 1.0,
                "{}: fast with ratio {}",
                fig.scenario.name,
                rep.ratio_from_q
            ),
            ShockRegime::Slow => ensure!(
                rep.ratio_from_q < 1.0,
                "{}: slow with ratio {}",
                fig.scenario.name,
                rep.ratio_from_q
            ),
            ShockRegime::NotEvolutionary => return Err("not evolutionary".into()),
        }
        notes.push(format!(
            "{} {regime} ratio {:.4}",
            fig.scenario.name, rep.ratio_from_q
        ));
    }
    Ok(format!("worst {worst:.1e}; {}", notes.join(", ")))
}

// Distance from `p` to the polyline through `line`.
fn distance_to_polyline(p: PhasePoint, line: &[PhasePoint]) -> f64 {
    line.windows(2)
        .map(|w| {
            let (ax, ay, bx, by) = (w[0].y, w[0].v, w[1].y, w[1].v);
            let (dx, dy) = (bx - ax, by - ay);
            let len2 = dx * dx + dy * dy;
            let t = if len2 > 0.0 {
                (((p.y - ax) * dx + (p.v - ay) * dy) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (p.y - ax - t * dx).hypot(p.v - ay - t * dy)
        })
        .fold(f64::INFINITY, f64::min)
}

fn admissible_profiles_connect() -> Outcome {
    let mut notes = Vec::new();
    for text in [FIGURE1, FIGURE2] {
        let fig = load(text)?;
        let c = &fig.c;
        let t = fig.target.ok_or("figure without target")?;
        let rep = ok(full_verdict(&c.upstream, &c.eos, t, &VerdictOptions::default()))?;
        ensure!(
            rep.verdict == Verdict::AdmissibleUniqueProfile,
            "{}: verdict {:?}",
            fig.scenario.name,
            rep.verdict
        );
        let regime = rep.condition_d;
        let opts = ShootOptions::default();
        let mut worst = 0.0f64;
        for ratio in [0.01, 1.0, 100.0] {
            let visc = ok(ViscosityPair::new(1.0, ratio))?;
            let tr = ok(shoot_profile(c, &visc, c.origin(), t, regime, &opts))?;
            ensure!(
                tr.connected && tr.endpoint_distance < 1e-5,
                "{} eta/xi = {ratio}: endpoint distance {:e}",
                fig.scenario.name,
                tr.endpoint_distance
            );
            worst = worst.max(tr.endpoint_distance);
        }
        // Scaling both viscosities only rescales x.
        let base = ok(shoot_profile(
            c,
            &ok(ViscosityPair::new(1.0, 1.0))?,
            c.origin(),
            t,
            regime,
            &opts,
        ))?;
        let scaled = ok(shoot_profile(
            c,
            &ok(ViscosityPair::new(7.0, 7.0))?,
            c.origin(),
            t,
            regime,
            &opts,
        ))?;
        let line = base.phase_points();
        let dev = scaled
            .phase_points()
            .iter()
            .map(|p| distance_to_polyline(*p, &line))
            .fold(0.0f64, f64::max);
        ensure!(
            dev < 1e-6,
            "{}: rescaled orbit deviates by {dev:e}",
            fig.scenario.name
        );
        notes.push(format!(
            "{} endpoint {worst:.1e}, rescaling {dev:.1e}",
            fig.scenario.name
        ));
    }
    Ok(notes.join("; "))
}

fn figure3_sweep() -> Outcome {
    let fig = load(FIGURE3)?;
    let c = &fig.c;
    let t = fig.target.ok_or("figure without target")?;
    let regime = ok(classify_regime(&c.upstream, &c.eos))?;
    let sweep = ok(viscosity_ratio_sweep(
        c,
        &[1.0, 0.1, 0.01],
        fig.scenario.viscosity.xi,
        c.origin(),
        t,
        regime,
        &fig.scenario.shoot_options(),
    ))?;
    for e in &sweep {
        ensure!(e.trajectory.connected, "ratio {} did not connect", e.ratio);
    }
    for w in sweep.windows(2) {
        ensure!(
            w[1].tracking_distance < w[0].tracking_distance,
            "tracking distance {} at {} after {} at {}",
            w[1].tracking_distance,
            w[1].ratio,
            w[0].tracking_distance,
            w[0].ratio
        );
    }
    let growth = sweep[2].max_slope / sweep[0].max_slope;
    ensure!(growth >= 10.0, "max slope grows only {growth}x");
    // Frozen regression of the first derivation.
    let frozen = [
        (0.2697630859056053, 1.0324009917209862),
        (0.11468526855130029, 2.7261847813943922),
        (0.031838676476050355, 16.18897581767281),
    ];
    for (e, (td, ms)) in sweep.iter().zip(frozen) {
        ensure!(
            (e.tracking_distance - td).abs() < 1e-6 * td,
            "tracking {} vs frozen {td}",
            e.tracking_distance
        );
        ensure!(
            (e.max_slope - ms).abs() < 1e-6 * ms,
            "slope {} vs frozen {ms}",
            e.max_slope
        );
    }
    let td: Vec<String> = sweep
        .iter()
        .map(|e| format!("{:.4}", e.tracking_distance))
        .collect();
    Ok(format!("tracking {}, slope growth {growth:.1}x", td.join(" > ")))
}

fn run_cli(args: &[&str]) -> i32 {
    let mut v = vec!["viscous-shock"];
    v.extend_from_slice(args);
    v.push("--quiet");
    main_with_args(v)
}

fn condition_machinery() -> Outcome {
    let dir = ok(tempfile::tempdir())?;
    let out = dir.path().to_str().ok_or("temp path")?;

    let perp = data("perpendicular.cfg");
    let code = run_cli(&[
        "admissible",
        "--scenario",
        perp.to_str().unwrap(),
        "--out-dir",
        out,
    ]);
    ensure!(code == 3, "perpendicular field exits {code}");

    let gap = load_file("gap.cfg")?;
    let l = ok(LocalParams::from_state(&gap.c.upstream, &gap.c.eos))?;
    let s = ok(characteristic_speeds(&l))?;
    let y0 = gap.c.y0();
    ensure!(
        s.u_a < y0 && y0 < s.u_f,
        "gap upstream {y0} outside ({}, {})",
        s.u_a,
        s.u_f
    );
    let guess = PhasePoint::new(0.5 * y0, 0.0);
    let rep = ok(verdict_for(&gap.c, guess, &VerdictOptions::default()))?;
    let gap_failed = match &rep.verdict {
        Verdict::NotAdmissible(v) if v.contains(&Condition::D) => v.clone(),
        other => return Err(format!("gap verdict {other:?}")),
    };
    ensure!(
        rep.condition_d == ShockRegime::NotEvolutionary,
        "gap regime {}",
        rep.condition_d
    );

    let tp = load_file("three_point.cfg")?;
    let t = tp.target.ok_or("three_point without target")?;
    let rep = ok(verdict_for(&tp.c, t, &VerdictOptions::default()))?;
    ensure!(
        rep.verdict == Verdict::NotAdmissible(vec![Condition::B]),
        "three_point verdict {:?}",
        rep.verdict
    );
    let b = rep.condition_b.as_ref().ok_or("no condition B record")?;
    ensure!(b.samples >= 256, "only {} samples", b.samples);
    ensure!(b.min_margin.is_finite(), "min margin {}", b.min_margin);
    let middle = PhasePoint::new(0.193346177, -0.160106579);
    let near = b.sign_changes.iter().any(|p| p.distance(&middle) < 1e-5);
    ensure!(
        near,
        "sign changes {:?} miss the middle rest point",
        b.sign_changes
    );
    ensure!(
        b.argmin.y > t.y.min(tp.c.y0()) && b.argmin.y < t.y.max(tp.c.y0()),
        "argmin {:?} outside the corridor",
        b.argmin
    );
    Ok(format!(
        "exit 3; gap fails {gap_failed:?}; corridor fails B, sign change at ({:.6}, {:.6}), argmin ({:.6}, {:.6})",
        b.sign_changes[0].y,
        b.sign_changes[0].v,
        b.argmin.y,
        b.argmin.v
    ))
}

fn determinism() -> Outcome {
    let a = ok(tempfile::tempdir())?;
    let b = ok(tempfile::tempdir())?;
    for fig in ["figure1", "figure2", "figure3"] {
        for d in [&a, &b] {
            let code = run_cli(&[fig, "--out-dir", d.path().to_str().unwrap()]);
            ensure!(code == 0, "{fig} exits {code}");
        }
    }
    let mut names: Vec<_> = ok(std::fs::read_dir(a.path()))?
        .map(|e| e.map(|e| e.file_name()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    names.sort();
    let mut bytes = 0;
    for n in &names {
        let x = ok(std::fs::read(a.path().join(n)))?;
        let y = ok(std::fs::read(b.path().join(n)))?;
        ensure!(x == y, "{n:?} differs between runs");
        bytes += x.len();
    }
    Ok(format!("{} files, {bytes} bytes identical", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("speed ordering", speed_ordering),
        ("reference speeds", ex1_regression),
        ("cross-form identities", cross_form_identities),
        ("F2 independent of the EOS", f2_eos_independence),
        ("jump consistency", jump_consistency),
        ("entropy stationary at \"0\"", entropy_stationarity),
        ("Jacobian and saddles", jacobian_and_saddles),
        ("local expansions", local_expansions),
        ("admissible profiles connect", admissible_profiles_connect),
        ("viscosity-ratio sweep", figure3_sweep),
        ("condition machinery", condition_machinery),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(note) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {note}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
