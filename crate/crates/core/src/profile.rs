//! Viscous profiles: integration of the shock-structure system for given
//! bulk and shear viscosities, construction of the connecting orbit by
//! shooting along a saddle separatrix, and the viscosity-ratio sweep.

use crate::characteristics::{q_polynomial, LocalParams, ShockRegime};
use crate::error::{Error, Result};
use crate::ode::{integrate, Flow, StepControl};
use crate::phaseplane::{self, field, solve_on_locus, Locus, LocusKind};
use crate::roots::Mat2;
use crate::shock::{reconstruct_state, PhasePoint, UpstreamConstants};

/// Bulk (`xi`) and shear (`eta`) viscosity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityPair {
    pub xi: f64,
    pub eta: f64,
}

impl ViscosityPair {
    pub fn new(xi: f64, eta: f64) -> Result<Self> {
        if !(xi > 0.0) {
            return Err(Error::NonPositiveInput("bulk viscosity xi"));
        }
        if !(eta > 0.0) {
            return Err(Error::NonPositiveInput("shear viscosity eta"));
        }
        Ok(ViscosityPair { xi, eta })
    }

    fn longitudinal(&self) -> f64 {
        self.xi + 4.0 * self.eta / 3.0
    }

    pub fn ratio(&self) -> f64 {
        self.eta / self.xi
    }
}

/// `(dy/dx, dv/dx)`.
pub fn rhs(c: &UpstreamConstants, visc: &ViscosityPair, pt: PhasePoint) -> Result<[f64; 2]> {
    let f = field(c, pt)?;
    Ok([f[0] / visc.longitudinal(), f[1] / visc.eta])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShootDirection {
    /// Along the unstable separatrix of a saddle at `"0"`.
    ForwardFrom0,
    /// Backwards along the stable separatrix of a saddle at `"1"`.
    BackwardFrom1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    pub pt: PhasePoint,
    pub u2: f64,
    pub p: f64,
    pub eps: f64,
    pub n: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTrajectory {
    /// Ordered by increasing `x`, from the `"0"` end to the `"1"` end.
    pub points: Vec<ProfilePoint>,
    pub connected: bool,
    /// Distance from the end of the integration to the rest point it aimed at.
    pub endpoint_distance: f64,
    pub direction: ShootDirection,
}

impl ProfileTrajectory {
    pub fn phase_points(&self) -> Vec<PhasePoint> {
        self.points.iter().map(|p| p.pt).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    /// Relative tolerance of the integrator; the absolute one is `1e-3 tol`
    /// and the endpoint tolerance `10 tol`.
    pub tol: f64,
    /// Offset from the saddle as a fraction of the `"0"`-`"1"` distance.
    pub delta: f64,
    pub max_steps: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            tol: 1e-9,
            delta: 1e-6,
            max_steps: 2_000_000,
        }
    }
}

fn eigen_split(a: &Mat2) -> Option<(f64, f64)> {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = tr * tr - 4.0 * det;
    if det >= 0.0 || disc <= 0.0 {
        return None;
    }
    let r = disc.sqrt();
    Some(((tr - r) / 2.0, (tr + r) / 2.0))
}

fn eigenvector(a: &Mat2, lambda: f64) -> [f64; 2] {
    let e1 = [a[0][1], lambda - a[0][0]];
    let e2 = [lambda - a[1][1], a[1][0]];
    let e = if e1[0].hypot(e1[1]) >= e2[0].hypot(e2[1]) {
        e1
    } else {
        e2
    };
    let n = e[0].hypot(e[1]);
    [e[0] / n, e[1] / n]
}

/// Inside the region bounded by `V1` and `V2` the flow moves monotonically
/// from `"0"` towards `"1"` in both coordinates.
fn inside_corridor(f: [f64; 2], from: PhasePoint, to: PhasePoint, guard: f64) -> bool {
    let sy = (to.y - from.y).signum();
    let sv = (to.v - from.v).signum();
    f[0] * sy >= -guard && f[1] * sv >= -guard
}

fn summarise(c: &UpstreamConstants, x: f64, pt: PhasePoint) -> Result<ProfilePoint> {
    let s = reconstruct_state(c, pt)?;
    Ok(ProfilePoint {
        x,
        pt,
        u2: s.u[2],
        p: s.p,
        eps: s.eps,
        n: s.n,
        s: c.eos.entropy_per_baryon(s.eps, s.n)?,
    })
}

/// Connects `from` (`"0"`) to `to` (`"1"`) by integrating along the saddle
/// separatrix. A slow shock has its saddle at `"0"`; a fast shock at `"1"`,
/// which is then shot backwards. For a non-evolutionary regime whichever of
/// the two points is a saddle is used.
pub fn shoot_profile(
    c: &UpstreamConstants,
    visc: &ViscosityPair,
    from: PhasePoint,
    to: PhasePoint,
    regime: ShockRegime,
    opts: &ShootOptions,
) -> Result<ProfileTrajectory> {
    let step = phaseplane::default_fd_step(c);
    let det_at = |p: PhasePoint| -> Result<f64> {
        let j = phaseplane::fd_jacobian(c, p, step)?;
        Ok(j[0][0] * j[1][1] - j[0][1] * j[1][0])
    };
    let direction = match regime {
        ShockRegime::Slow => ShootDirection::ForwardFrom0,
        ShockRegime::Fast => ShootDirection::BackwardFrom1,
        ShockRegime::NotEvolutionary => {
            if det_at(to)? < 0.0 {
                ShootDirection::BackwardFrom1
            } else if det_at(from)? < 0.0 {
                ShootDirection::ForwardFrom0
            } else {
                return Err(Error::DegeneratePoint("neither end point is a saddle".into()));
            }
        }
    };
    let (saddle, target, sigma) = match direction {
        ShootDirection::ForwardFrom0 => (from, to, 1.0),
        ShootDirection::BackwardFrom1 => (to, from, -1.0),
    };
    let j = phaseplane::fd_jacobian(c, saddle, step)?;
    let (l, e) = (visc.longitudinal(), visc.eta);
    let a = [[j[0][0] / l, j[0][1] / l], [j[1][0] / e, j[1][1] / e]];
    let (stable, unstable) = eigen_split(&a).ok_or_else(|| {
        Error::DegeneratePoint(format!(
            "({}, {}) is not a saddle of the viscous system",
            saddle.y, saddle.v
        ))
    })?;
    let lambda = if sigma > 0.0 { unstable } else { stable };
    let ev = eigenvector(&a, lambda);
    let diameter = from.distance(&to);
    let delta = opts.delta * diameter;
    let scale = c.scale();
    let guard = 1e-13 * scale;

    // Try the half of the separatrix that points into the corridor first.
    let mut candidates: Vec<(bool, PhasePoint)> = [1.0, -1.0]
        .iter()
        .map(|s| {
            let z = PhasePoint::new(saddle.y + s * delta * ev[0], saddle.v + s * delta * ev[1]);
            let ok = field(c, z)
                .map(|f| inside_corridor(f, from, to, guard))
                .unwrap_or(false);
            (ok, z)
        })
        .collect();
    candidates.sort_by_key(|(ok, _)| !ok);

    let x_scale = 1.0 / stable.abs().max(unstable.abs());
    let ctl = StepControl {
        rtol: opts.tol,
        atol: 1e-3 * opts.tol,
        h_init: 1e-2 * x_scale,
        h_min: 1e-14 * x_scale,
        h_max: f64::INFINITY,
        max_steps: opts.max_steps,
    };
    let end_tol = 10.0 * opts.tol;
    let lo_y = from.y.min(to.y) - diameter;
    let hi_y = from.y.max(to.y) + diameter;
    let lo_v = from.v.min(to.v) - diameter;
    let hi_v = from.v.max(to.v) + diameter;

    let mut first_err = None;
    for (_, start) in candidates {
        let mut path = vec![(0.0, start)];
        let f = |z: &[f64; 2]| -> Result<[f64; 2]> {
            let r = rhs(c, visc, PhasePoint::new(z[0], z[1]))?;
            Ok([sigma * r[0], sigma * r[1]])
        };
        let outcome = integrate(f, 0.0, [start.y, start.v], &ctl, |x, z| {
            let p = PhasePoint::new(z[0], z[1]);
            path.push((x, p));
            if p.distance(&target) < end_tol {
                return Ok(Flow::Stop);
            }
            let fz = field(c, p)?;
            let escaped = p.y < lo_y || p.y > hi_y || p.v < lo_v || p.v > hi_v;
            if escaped || !inside_corridor(fz, from, to, guard) {
                return Err(Error::NotConnected { y: p.y, v: p.v });
            }
            Ok(Flow::Continue)
        });
        let outcome = outcome.map(|_| ());
        match outcome {
            Ok(()) => {
                if sigma < 0.0 {
                    path.reverse();
                    for p in path.iter_mut() {
                        p.0 = -p.0;
                    }
                }
                let x0 = path[0].0;
                let points = path
                    .iter()
                    .map(|(x, p)| summarise(c, x - x0, *p))
                    .collect::<Result<Vec<_>>>()?;
                let terminus = if sigma > 0.0 {
                    points.last().unwrap().pt
                } else {
                    points[0].pt
                };
                return Ok(ProfileTrajectory {
                    points,
                    connected: true,
                    endpoint_distance: terminus.distance(&target),
                    direction,
                });
            }
            Err(Error::UnphysicalPoint { y, v, .. }) => {
                first_err.get_or_insert(Error::NotConnected { y, v });
            }
            Err(err) => {
                first_err.get_or_insert(err);
            }
        }
    }
    Err(first_err.expect("two candidates were tried"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingViolation {
    pub locus: LocusKind,
    pub at: PhasePoint,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossingReport {
    pub v1_samples_checked: usize,
    pub v2_samples_checked: usize,
    pub trajectory_crossings: usize,
    pub violations: Vec<CrossingViolation>,
}

impl CrossingReport {
    pub fn conforms(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Expected signs of the transverse field on each locus between `"0"` and
/// `"1"`: on `V2` the flow crosses with `sign F1 = sign(y1 - y0)`, on `V1`
/// with `sign F2 = -sign(Q(y0) h1 h2 (y1 - y0))`.
pub fn expected_crossing_signs(c: &UpstreamConstants, to: PhasePoint) -> Result<(f64, f64)> {
    let l = LocalParams::from_state(&c.upstream, &c.eos)?;
    let dy = to.y - c.y0();
    let on_v2 = dy.signum();
    let on_v1 = -(q_polynomial(c.y0(), &l) * l.h1 * l.h2 * dy).signum();
    Ok((on_v1, on_v2))
}

/// Checks the direction in which the flow crosses `V1` and `V2`, both at
/// the traced locus samples and wherever the trajectory itself crosses.
pub fn crossing_direction_checks(
    c: &UpstreamConstants,
    traj: &ProfileTrajectory,
    v1: &Locus,
    v2: &Locus,
) -> Result<CrossingReport> {
    let from = c.origin();
    let to = v1.end();
    let (on_v1, on_v2) = expected_crossing_signs(c, to)?;
    let d = from.distance(&to);
    let quiet = 1e-12 * c.scale();
    let mut rep = CrossingReport::default();
    let near_end = |p: &PhasePoint| p.distance(&from) < 1e-6 * d || p.distance(&to) < 1e-6 * d;
    for p in v1.samples.iter().filter(|p| !near_end(p)) {
        let f = field(c, *p)?;
        if f[1].abs() > quiet {
            rep.v1_samples_checked += 1;
            if f[1].signum() != on_v1 {
                rep.violations.push(CrossingViolation {
                    locus: LocusKind::V1,
                    at: *p,
                });
            }
        }
    }
    for p in v2.samples.iter().filter(|p| !near_end(p)) {
        let f = field(c, *p)?;
        if f[0].abs() > quiet {
            rep.v2_samples_checked += 1;
            if f[0].signum() != on_v2 {
                rep.violations.push(CrossingViolation {
                    locus: LocusKind::V2,
                    at: *p,
                });
            }
        }
    }
    let fields = traj
        .points
        .iter()
        .map(|p| field(c, p.pt))
        .collect::<Result<Vec<_>>>()?;
    for (k, w) in fields.windows(2).enumerate() {
        let at = traj.points[k + 1].pt;
        if near_end(&at) {
            continue;
        }
        if w[0][0].signum() != w[1][0].signum() {
            rep.trajectory_crossings += 1;
            if w[1][1].signum() != on_v1 {
                rep.violations.push(CrossingViolation {
                    locus: LocusKind::V1,
                    at,
                });
            }
        }
        if w[0][1].signum() != w[1][1].signum() {
            rep.trajectory_crossings += 1;
            if w[1][0].signum() != on_v2 {
                rep.violations.push(CrossingViolation {
                    locus: LocusKind::V2,
                    at,
                });
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub ratio: f64,
    pub trajectory: ProfileTrajectory,
    /// Mean of `|y(v) - Y2(v)|` over the stretch of `v` where `Y2` is
    /// monotone next to `"0"`.
    pub tracking_distance: f64,
    pub max_tracking_distance: f64,
    /// Largest `|dv/dy|` along the trajectory.
    pub max_slope: f64,
    /// `max_slope` exceeds ten times that of the largest ratio in the sweep.
    pub jump_detected: bool,
}

/// The `v` at which `Y2` first turns back, walking from `"0"`, or the end of
/// the locus if it never does.
pub fn fold_of(v2: &Locus) -> f64 {
    let s = &v2.samples;
    for k in 1..s.len().saturating_sub(1) {
        let a = s[k].y - s[k - 1].y;
        let b = s[k + 1].y - s[k].y;
        if a * b < 0.0 {
            return s[k].v;
        }
    }
    v2.end().v
}

fn tracking(c: &UpstreamConstants, traj: &ProfileTrajectory, v2: &Locus, v_end: f64) -> Result<(f64, f64)> {
    let mut pts: Vec<PhasePoint> = traj.phase_points();
    pts.sort_by(|a, b| a.v.total_cmp(&b.v));
    let interp = |v: f64| -> Option<f64> {
        let k = pts.partition_point(|p| p.v < v);
        if k == 0 || k == pts.len() {
            return None;
        }
        let (a, b) = (pts[k - 1], pts[k]);
        let t = if b.v == a.v { 0.0 } else { (v - a.v) / (b.v - a.v) };
        Some(a.y + t * (b.y - a.y))
    };
    let v0 = v2.samples[0].v;
    let n = 200;
    let (mut sum, mut max, mut count) = (0.0, 0.0f64, 0);
    for k in 0..=n {
        let v = v0 + (v_end - v0) * k as f64 / n as f64;
        let (Some(yt), Some(g)) = (interp(v), v2.interpolate(v)) else {
            continue;
        };
        let y2 = solve_on_locus(c, LocusKind::V2, v, g)?.y;
        let d = (yt - y2).abs();
        sum += d;
        max = max.max(d);
        count += 1;
    }
    if count == 0 {
        return Err(Error::SolverFailure("trajectory does not overlap V2".into()));
    }
    Ok((sum / count as f64, max))
}

fn max_slope(c: &UpstreamConstants, visc: &ViscosityPair, traj: &ProfileTrajectory) -> Result<f64> {
    let first = traj.points[0].pt;
    let last = traj.points.last().unwrap().pt;
    let d = first.distance(&last);
    let mut m = 0.0f64;
    for p in &traj.points {
        if p.pt.distance(&first) < 1e-6 * d || p.pt.distance(&last) < 1e-6 * d {
            continue;
        }
        let r = rhs(c, visc, p.pt)?;
        if r[0] != 0.0 {
            m = m.max((r[1] / r[0]).abs());
        }
    }
    Ok(m)
}

/// Integrates the profile for each `eta / xi` in `ratios` with `xi = base_xi`
/// and measures how closely it hugs `V2`. Ratios are evaluated concurrently;
/// results keep the input order.
pub fn viscosity_ratio_sweep(
    c: &UpstreamConstants,
    ratios: &[f64],
    base_xi: f64,
    from: PhasePoint,
    to: PhasePoint,
    regime: ShockRegime,
    opts: &ShootOptions,
) -> Result<Vec<SweepEntry>> {
    if ratios.is_empty() {
        return Ok(Vec::new());
    }
    let v2 = phaseplane::trace_locus(c, LocusKind::V2, from, to.v, 1024)?;
    let v_end = fold_of(&v2);
    let results: Vec<Result<(f64, ProfileTrajectory, (f64, f64), f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ratios
            .iter()
            .map(|&ratio| {
                let v2 = &v2;
                scope.spawn(move || {
                    let visc = ViscosityPair::new(base_xi, ratio * base_xi)?;
                    let traj = shoot_profile(c, &visc, from, to, regime, opts)?;
                    let track = tracking(c, &traj, v2, v_end)?;
                    let slope = max_slope(c, &visc, &traj)?;
                    Ok((ratio, traj, track, slope))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let reference = results
        .iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|r| r.3)
        .unwrap_or(0.0);
    Ok(results
        .into_iter()
        .map(|(ratio, trajectory, (mean, max), slope)| SweepEntry {
            ratio,
            trajectory,
            tracking_distance: mean,
            max_tracking_distance: max,
            max_slope: slope,
            jump_detected: slope >= 10.0 * reference && reference > 0.0,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::{FluidState, Thermo};
    use crate::eos::EosSpec;
    use crate::shock::{polish_rest_point, upstream_constants};

    fn consts(u1: f64, h1: f64, h2: f64, p: f64) -> UpstreamConstants {
        let eos = EosSpec::linear(1.0 / 3.0).unwrap();
        let s = FluidState::with_eos(&eos, u1, 0.0, h1, h2, 1.0, Thermo::Pressure(p), 1.0).unwrap();
        upstream_constants(&s, &eos).unwrap()
    }

    #[test]
    fn viscosities_must_be_positive() {
        assert!(ViscosityPair::new(0.0, 1.0).is_err());
        assert!(ViscosityPair::new(1.0, -1.0).is_err());
        assert_eq!(ViscosityPair::new(2.0, 1.0).unwrap().ratio(), 0.5);
    }

    #[test]
    fn rhs_scales_inversely() {
        let c = consts(1.04, 0.5, 0.7, 1.0);
        let pt = PhasePoint::new(0.9, 0.01);
        let a = rhs(&c, &ViscosityPair::new(1.0, 0.5).unwrap(), pt).unwrap();
        let b = rhs(&c, &ViscosityPair::new(2.0, 1.0).unwrap(), pt).unwrap();
        assert!((a[0] - 2.0 * b[0]).abs() < 1e-15 * a[0].abs().max(1.0));
        assert!((a[1] - 2.0 * b[1]).abs() < 1e-15 * a[1].abs().max(1.0));
        let r = rhs(&c, &ViscosityPair::new(1.0, 1.0).unwrap(), c.origin()).unwrap();
        assert!(r[0].abs() < 1e-14 && r[1].abs() < 1e-14);
    }

    #[test]
    fn fast_profile_connects() {
        let c = consts(1.04, 0.5, 0.7, 1.0);
        let one = polish_rest_point(&c, PhasePoint::new(0.71, 0.015)).unwrap();
        let visc = ViscosityPair::new(1.0, 1.0).unwrap();
        let t = shoot_profile(
            &c,
            &visc,
            c.origin(),
            one,
            ShockRegime::Fast,
            &ShootOptions::default(),
        )
        .unwrap();
        assert!(t.connected);
        assert!(t.endpoint_distance < 1e-5);
        assert_eq!(t.direction, ShootDirection::BackwardFrom1);
        assert!(t.points.windows(2).all(|w| w[1].x > w[0].x));
        assert!(t.points.last().unwrap().s > t.points[0].s);
    }

    #[test]
    fn slow_profile_connects() {
        let c = consts(0.22, 0.5, 0.7, 1.0);
        let one = polish_rest_point(&c, PhasePoint::new(0.1933, -0.16)).unwrap();
        let visc = ViscosityPair::new(1.0, 1.0).unwrap();
        let t = shoot_profile(
            &c,
            &visc,
            c.origin(),
            one,
            ShockRegime::Slow,
            &ShootOptions::default(),
        )
        .unwrap();
        assert!(t.endpoint_distance < 1e-5);
        assert_eq!(t.direction, ShootDirection::ForwardFrom0);
    }
}
