//! The planar shock-structure system `(xi + 4 eta / 3) dy/dx = F1`,
//! `eta dv/dx = F2`: its right-hand sides, the zero loci `V1 = {F1 = 0}` and
//! `V2 = {F2 = 0}`, Jacobians at rest points and the first-order expansions
//! around the upstream point.

use crate::characteristics::{d_polynomial, q_polynomial, r_star, LocalParams};
use crate::covariant::minkowski_dot;
use crate::error::{Error, Result};
use crate::roots::{det2, Mat2};
use crate::shock::{kinematics, reconstruct_state, upstream_constants, PhasePoint, UpstreamConstants};

/// `F1` exactly as the reduced momentum balance prints it.
pub fn f1(c: &UpstreamConstants, pt: PhasePoint) -> Result<f64> {
    let s = reconstruct_state(c, pt)?;
    Ok(f1_with_pressure(c, pt, s.p))
}

fn f1_with_pressure(c: &UpstreamConstants, pt: PhasePoint, p: f64) -> f64 {
    let y = pt.y;
    let k = kinematics(c, pt);
    let m = c.mu_over_4pi;
    let hh = minkowski_dot(&c.h, &c.h);
    p - (c.t1[1] + m * k.hu * k.hu - k.tu * y) / (1.0 + y * y) + m / (2.0 * y * y) * (k.hu * k.hu - hh)
}

/// `F2`; contains no pressure, so it is the same for every equation of state.
pub fn f2(c: &UpstreamConstants, pt: PhasePoint) -> Result<f64> {
    let PhasePoint { y, v } = pt;
    if !(y > 0.0) || !v.is_finite() {
        return Err(Error::UnphysicalPoint {
            y,
            v,
            reason: "y must be positive",
        });
    }
    let k = kinematics(c, pt);
    let (u0, u2) = (k.u[0], k.u[2]);
    let m = c.mu_over_4pi;
    let a = 1.0 + y * y;
    let first = ((c.t1[0] * u0 - c.t1[2] * u2) * u2 * y - m * u2 * k.hu * k.hu) / (y * a.powf(2.5));
    let second = (m * c.h[2] * k.hu - c.t1[2] * y) / (a.powf(1.5) * y);
    Ok(first + second)
}

/// `(F1, F2)` at `pt`.
pub fn field(c: &UpstreamConstants, pt: PhasePoint) -> Result<[f64; 2]> {
    let s = reconstruct_state(c, pt)?;
    Ok([f1_with_pressure(c, pt, s.p), f2(c, pt)?])
}

/// Central-difference Jacobian; rows are `F1, F2`, columns `d/dy, d/dv`.
pub fn fd_jacobian(c: &UpstreamConstants, pt: PhasePoint, step: f64) -> Result<Mat2> {
    let PhasePoint { y, v } = pt;
    let fyp = field(c, PhasePoint::new(y + step, v))?;
    let fym = field(c, PhasePoint::new(y - step, v))?;
    let fvp = field(c, PhasePoint::new(y, v + step))?;
    let fvm = field(c, PhasePoint::new(y, v - step))?;
    let d = 2.0 * step;
    Ok([
        [(fyp[0] - fym[0]) / d, (fvp[0] - fvm[0]) / d],
        [(fyp[1] - fym[1]) / d, (fvp[1] - fvm[1]) / d],
    ])
}

pub(crate) fn default_fd_step(c: &UpstreamConstants) -> f64 {
    1e-7 * c.y0().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusKind {
    V1,
    V2,
}

impl LocusKind {
    // V1 is a graph over y, V2 over v.
    fn axis(self) -> usize {
        match self {
            LocusKind::V1 => 0,
            LocusKind::V2 => 1,
        }
    }

    fn eval(self, c: &UpstreamConstants, pt: PhasePoint) -> Result<f64> {
        match self {
            LocusKind::V1 => f1(c, pt),
            LocusKind::V2 => f2(c, pt),
        }
    }
}

impl std::fmt::Display for LocusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LocusKind::V1 => "V1",
            LocusKind::V2 => "V2",
        })
    }
}

/// A traced branch of `V1` or `V2`, ordered from its start point to its end
/// point and strictly monotone in the parameter (`y` for V1, `v` for V2).
#[derive(Debug, Clone, PartialEq)]
pub struct Locus {
    pub which: LocusKind,
    pub samples: Vec<PhasePoint>,
}

fn coord(p: PhasePoint, axis: usize) -> f64 {
    if axis == 0 {
        p.y
    } else {
        p.v
    }
}

fn with_coords(axis: usize, param: f64, other: f64) -> PhasePoint {
    if axis == 0 {
        PhasePoint::new(param, other)
    } else {
        PhasePoint::new(other, param)
    }
}

impl Locus {
    pub fn param(&self, p: PhasePoint) -> f64 {
        coord(p, self.which.axis())
    }

    /// Linear interpolation of the dependent coordinate at `param`.
    pub fn interpolate(&self, param: f64) -> Option<f64> {
        let axis = self.which.axis();
        let other = 1 - axis;
        self.samples.windows(2).find_map(|w| {
            let (a, b) = (coord(w[0], axis), coord(w[1], axis));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if param < lo || param > hi {
                return None;
            }
            let t = if b == a { 0.0 } else { (param - a) / (b - a) };
            Some(coord(w[0], other) + t * (coord(w[1], other) - coord(w[0], other)))
        })
    }

    pub fn end(&self) -> PhasePoint {
        *self.samples.last().expect("locus has at least one sample")
    }
}

/// Solves the defining equation of `which` with the parameter held at
/// `param`, starting from `guess` for the dependent coordinate.
pub fn solve_on_locus(c: &UpstreamConstants, which: LocusKind, param: f64, guess: f64) -> Result<PhasePoint> {
    let axis = which.axis();
    let g = |x: f64| which.eval(c, with_coords(axis, param, x));
    let h = default_fd_step(c);
    let scale = c.scale();
    let mut x = guess;
    for _ in 0..40 {
        let gx = g(x)?;
        if gx.abs() < 1e-14 * scale {
            return Ok(with_coords(axis, param, x));
        }
        let d = (g(x + h)? - g(x - h)?) / (2.0 * h);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let dx = -gx / d;
        x += dx;
        if dx.abs() < 1e-15 * (1.0 + x.abs()) {
            return Ok(with_coords(axis, param, x));
        }
        if (x - guess).abs() > 1e3 * (1.0 + guess.abs()) {
            break;
        }
    }
    // Newton wandered; fall back to an expanding bracket around the guess.
    let mut w = 1e-6 * (1.0 + guess.abs());
    let g0 = g(guess)?;
    for _ in 0..40 {
        for side in [-1.0, 1.0] {
            let b = guess + side * w;
            if let Ok(gb) = g(b) {
                if gb.signum() != g0.signum() {
                    let (lo, hi) = if side < 0.0 { (b, guess) } else { (guess, b) };
                    let r = crate::roots::brent(
                        |t| g(t).unwrap_or(f64::NAN),
                        lo,
                        hi,
                        1e-15 * (1.0 + hi.abs()),
                        200,
                    )?;
                    return Ok(with_coords(axis, param, r));
                }
            }
        }
        w *= 2.0;
    }
    Err(Error::BracketNotFound { at: param })
}

fn gradient(c: &UpstreamConstants, which: LocusKind, p: PhasePoint, h: f64) -> Result<[f64; 2]> {
    let g = |q: PhasePoint| which.eval(c, q);
    Ok([
        (g(PhasePoint::new(p.y + h, p.v))? - g(PhasePoint::new(p.y - h, p.v))?) / (2.0 * h),
        (g(PhasePoint::new(p.y, p.v + h))? - g(PhasePoint::new(p.y, p.v - h))?) / (2.0 * h),
    ])
}

fn unit_tangent(grad: [f64; 2]) -> [f64; 2] {
    let n = grad[0].hypot(grad[1]);
    [-grad[1] / n, grad[0] / n]
}

/// Follows the branch of `which` through `start` until its parameter reaches
/// `end`, by pseudo-arclength continuation with at most `(end - start) / grid_n`
/// of arclength per step.
///
/// A turning point of the parameter before `end` means the branch is not a
/// graph over the parameter range and yields [`Error::MultiValued`].
pub fn trace_locus(
    c: &UpstreamConstants,
    which: LocusKind,
    start: PhasePoint,
    end: f64,
    grid_n: usize,
) -> Result<Locus> {
    let axis = which.axis();
    let scale = c.scale();
    let h = default_fd_step(c);
    let begin = coord(start, axis);
    let mut samples = vec![start];
    if begin == end {
        return Ok(Locus { which, samples });
    }
    let dir = (end - begin).signum();
    let ds_nom = (end - begin).abs() / grid_n.max(1) as f64;
    let mut ds = ds_nom;
    let mut z = start;
    let mut t = unit_tangent(gradient(c, which, z, h)?);
    if t[axis] * dir < 0.0 {
        t = [-t[0], -t[1]];
    }
    if t[axis].abs() < 1e-12 {
        return Err(Error::MultiValued { at: begin });
    }
    let max_steps = 200 * grid_n.max(16);
    for _ in 0..max_steps {
        let zp = PhasePoint::new(z.y + ds * t[0], z.v + ds * t[1]);
        if (coord(zp, axis) - end) * dir >= 0.0 {
            let frac = (end - coord(z, axis)) / t[axis];
            let guess = coord(z, 1 - axis) + frac * t[1 - axis];
            let last = solve_on_locus(c, which, end, guess)?;
            samples.push(last);
            return Ok(Locus { which, samples });
        }
        match correct(c, which, zp, t, h, scale) {
            Ok(zn) if zn.distance(&zp) < 0.5 * ds => {
                let mut tn = unit_tangent(gradient(c, which, zn, h)?);
                if tn[0] * t[0] + tn[1] * t[1] < 0.0 {
                    tn = [-tn[0], -tn[1]];
                }
                let advanced = (coord(zn, axis) - coord(z, axis)) * dir;
                if tn[axis] * dir <= 0.0 || advanced <= 0.0 {
                    return Err(Error::MultiValued { at: coord(zn, axis) });
                }
                samples.push(zn);
                z = zn;
                t = tn;
                ds = (1.5 * ds).min(ds_nom);
            }
            Ok(_) | Err(Error::SolverFailure(_)) | Err(Error::UnphysicalPoint { .. }) => {
                ds *= 0.5;
                if ds < 1e-12 * ds_nom {
                    return Err(match which {
                        LocusKind::V1 => Error::MultiValued { at: coord(z, axis) },
                        LocusKind::V2 => Error::BracketNotFound { at: coord(z, axis) },
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::SolverFailure(format!(
        "{which} tracing exceeded {max_steps} steps"
    )))
}

// Newton corrector on {g = 0, t . (z - zp) = 0}.
fn correct(
    c: &UpstreamConstants,
    which: LocusKind,
    zp: PhasePoint,
    t: [f64; 2],
    h: f64,
    scale: f64,
) -> Result<PhasePoint> {
    let mut z = zp;
    for _ in 0..12 {
        let g = which.eval(c, z)?;
        let gr = gradient(c, which, z, h)?;
        let r2 = t[0] * (z.y - zp.y) + t[1] * (z.v - zp.v);
        let m = [[gr[0], gr[1]], [t[0], t[1]]];
        let det = det2(&m);
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SolverFailure("singular corrector".into()));
        }
        let dy = -(m[1][1] * g - m[0][1] * r2) / det;
        let dv = -(-m[1][0] * g + m[0][0] * r2) / det;
        z = PhasePoint::new(z.y + dy, z.v + dv);
        if dy.hypot(dv) < 1e-15 * (1.0 + z.y.abs() + z.v.abs()) {
            break;
        }
    }
    let g = which.eval(c, z)?;
    if g.abs() < 1e-11 * scale {
        Ok(z)
    } else {
        Err(Error::SolverFailure(format!("corrector residual {g:e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestPointKind {
    Saddle,
    Node,
    Focus,
    Degenerate,
}

impl std::fmt::Display for RestPointKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RestPointKind::Saddle => "saddle",
            RestPointKind::Node => "node",
            RestPointKind::Focus => "focus",
            RestPointKind::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestPointClassification {
    pub point: PhasePoint,
    /// Analytic Jacobian, in the frame where the point has no transverse velocity.
    pub jacobian: Mat2,
    pub det: f64,
    pub kind: RestPointKind,
    /// Finite-difference Jacobian in the caller's coordinates.
    pub fd_jacobian: Mat2,
}

fn kind_of(m: &Mat2) -> RestPointKind {
    let det = det2(m);
    let tr = m[0][0] + m[1][1];
    if det < 0.0 {
        RestPointKind::Saddle
    } else if tr * tr - 4.0 * det < 0.0 {
        RestPointKind::Focus
    } else {
        RestPointKind::Node
    }
}

/// Analytic Jacobian at the upstream point.
pub fn jacobian_at_zero(c: &UpstreamConstants) -> Result<RestPointClassification> {
    let y = c.y0();
    let l = LocalParams::from_state(&c.upstream, &c.eos)?;
    let w = l.p + l.eps;
    let u0 = (1.0 + y * y).sqrt();
    let b = l.mu_over_4pi * l.h1 * l.h2;
    let q = q_polynomial(y, &l);
    let q_scale = (1.0 - l.cs2) * y.powi(4)
        + y * y * (l.cs2 + l.mu_over_4pi * l.h_sq / w)
        + l.mu_over_4pi * l.cs2 * l.h1 * l.h1 / w;
    if q.abs() < 1e-10 * q_scale {
        return Err(Error::DegeneratePoint(format!(
            "Q(u1) = {q:e} vanishes at u1 = {y}"
        )));
    }
    let u04 = u0.powi(4);
    let jac = [
        [w * d_polynomial(y, &l) / (y * u04), b / (u0 * y)],
        [b / (u04 * u0 * y), r_star(y, &l) / (u04 * y)],
    ];
    Ok(RestPointClassification {
        point: c.origin(),
        jacobian: jac,
        det: det2(&jac),
        kind: kind_of(&jac),
        fd_jacobian: fd_jacobian(c, c.origin(), default_fd_step(c))?,
    })
}

/// Closed form of the Jacobian determinant at the upstream point,
/// `(p + eps)^2 Q(u1) / ((u1)^2 (u0)^4)`.
pub fn determinant_closed_form(c: &UpstreamConstants) -> Result<f64> {
    let y = c.y0();
    let l = LocalParams::from_state(&c.upstream, &c.eos)?;
    let w = l.p + l.eps;
    Ok(w * w * q_polynomial(y, &l) / (y * y * (1.0 + y * y).powi(2)))
}

/// Jacobian at any rest point, via a boost to its zero-transverse frame.
pub fn jacobian_at_point(c: &UpstreamConstants, pt: PhasePoint) -> Result<RestPointClassification> {
    let state = reconstruct_state(c, pt)?;
    let local = upstream_constants(&state, &c.eos)?;
    let mut r = jacobian_at_zero(&local)?;
    let fd = fd_jacobian(c, pt, default_fd_step(c))?;
    let fd_det = det2(&fd);
    let norm = fd.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if fd_det.signum() != r.det.signum() && fd_det.abs() > 1e-6 * norm * norm {
        return Err(Error::SolverFailure(format!(
            "determinant sign differs between frames ({:e} vs {fd_det:e})",
            r.det
        )));
    }
    r.point = pt;
    r.fd_jacobian = fd;
    Ok(r)
}

/// Like [`jacobian_at_point`] but reports a degenerate point as a kind.
pub fn classify_rest_point(c: &UpstreamConstants, pt: PhasePoint) -> Result<RestPointClassification> {
    match jacobian_at_point(c, pt) {
        Err(Error::DegeneratePoint(_)) => {
            let fd = fd_jacobian(c, pt, default_fd_step(c))?;
            Ok(RestPointClassification {
                point: pt,
                jacobian: fd,
                det: det2(&fd),
                kind: RestPointKind::Degenerate,
                fd_jacobian: fd,
            })
        }
        other => other,
    }
}

/// One analytic-versus-measured comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCheck {
    pub name: &'static str,
    pub analytic: f64,
    pub measured: f64,
}

impl ExpansionCheck {
    pub fn rel_err(&self) -> f64 {
        (self.measured - self.analytic).abs() / self.analytic.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansionReport {
    pub checks: Vec<ExpansionCheck>,
    /// Tangent ratio `tan a1 / tan a2` of V1 and V2 at `"0"` from its two closed forms.
    pub ratio_from_q: f64,
    pub ratio_from_d: f64,
}

impl LocalExpansionReport {
    pub fn all_within(&self, tol: f64) -> bool {
        self.checks.iter().all(|c| c.rel_err() <= tol)
    }

    /// `V1` lies above `V2` next to `"0"`.
    pub fn v1_above_v2(&self) -> bool {
        self.ratio_from_q > 1.0
    }
}

/// Verifies the first-order behaviour of `F1` on `V2`, `F2` on `V1` and the
/// locus slopes at `"0"` against central differences at relative offsets
/// `1e-3` and `1e-4`, Richardson-extrapolated.
pub fn local_expansion_checks(c: &UpstreamConstants) -> Result<LocalExpansionReport> {
    let y0 = c.y0();
    let l = LocalParams::from_state(&c.upstream, &c.eos)?;
    let w = l.p + l.eps;
    let u0 = (1.0 + y0 * y0).sqrt();
    let b = l.mu_over_4pi * l.h1 * l.h2;
    if b == 0.0 {
        return Err(Error::DegenerateConfiguration("h1 h2 = 0 at \"0\"".into()));
    }
    let q = q_polynomial(y0, &l);
    let rs = r_star(y0, &l);
    let d = d_polynomial(y0, &l);

    let slope_v2 = -b / (u0 * rs);
    let slope_v1 = -w * d / (b * u0.powi(3));
    let k23 = w * w * q / (y0 * rs);
    let k25 = -w * w * q / (b * y0 * u0.powi(3));
    let ratio_from_q = w * w * u0 * u0 * q / (b * b) + 1.0;
    let ratio_from_d = w * d * rs / (b * u0).powi(2);

    // Central differences along each locus at y0 +- delta.
    let measure = |delta: f64| -> Result<[f64; 4]> {
        let dy = delta * y0;
        let on =
            |which: LocusKind, s: f64, sign: f64| solve_on_locus(c, which, y0 + sign * dy, sign * dy * s);
        let (a1, b1) = (
            on(LocusKind::V1, slope_v1, 1.0)?,
            on(LocusKind::V1, slope_v1, -1.0)?,
        );
        let (a2, b2) = (
            solve_on_locus_by_y(c, LocusKind::V2, y0 + dy, dy * slope_v2)?,
            solve_on_locus_by_y(c, LocusKind::V2, y0 - dy, -dy * slope_v2)?,
        );
        let s1 = (a1.v - b1.v) / (2.0 * dy);
        let s2 = (a2.v - b2.v) / (2.0 * dy);
        let e23 = (f1(c, a2)? - f1(c, b2)?) / (a2.y - b2.y);
        let e25 = (f2(c, a1)? - f2(c, b1)?) / (2.0 * dy);
        Ok([s2, e23, e25, s1 / s2])
    };
    let coarse = measure(1e-3)?;
    let fine = measure(1e-4)?;
    let rich = |i: usize| (100.0 * fine[i] - coarse[i]) / 99.0;
    let checks = vec![
        ExpansionCheck {
            name: "V2 slope at 0",
            analytic: slope_v2,
            measured: rich(0),
        },
        ExpansionCheck {
            name: "F1 along V2",
            analytic: k23,
            measured: rich(1),
        },
        ExpansionCheck {
            name: "F2 along V1",
            analytic: k25,
            measured: rich(2),
        },
        ExpansionCheck {
            name: "tangent ratio (Q form)",
            analytic: ratio_from_q,
            measured: rich(3),
        },
        ExpansionCheck {
            name: "tangent ratio (D form)",
            analytic: ratio_from_d,
            measured: rich(3),
        },
    ];
    Ok(LocalExpansionReport {
        checks,
        ratio_from_q,
        ratio_from_d,
    })
}

// V2 is parameterised by v in general, but near "0" it is also a graph over
// y; solve F2(y, .) = 0 for v at fixed y.
fn solve_on_locus_by_y(c: &UpstreamConstants, which: LocusKind, y: f64, guess_v: f64) -> Result<PhasePoint> {
    match which {
        LocusKind::V1 => solve_on_locus(c, which, y, guess_v),
        LocusKind::V2 => {
            let h = default_fd_step(c);
            let mut v = guess_v;
            for _ in 0..40 {
                let g = f2(c, PhasePoint::new(y, v))?;
                let dg = (f2(c, PhasePoint::new(y, v + h))? - f2(c, PhasePoint::new(y, v - h))?) / (2.0 * h);
                let dv = -g / dg;
                v += dv;
                if dv.abs() < 1e-15 * (1.0 + v.abs()) {
                    break;
                }
            }
            Ok(PhasePoint::new(y, v))
        }
    }
}
