//! Conserved fluxes fixed by the upstream state, reconstruction of the full
//! state from the reduced coordinates `(y, v)`, and the jump-condition solver.

use crate::covariant::{
    boost_to_zero_transverse, minkowski_dot, stress_energy_unchecked, Boost, FluidState, FourVector,
};
use crate::eos::EosSpec;
use crate::error::{Error, Result};
use crate::phaseplane;
use crate::roots::{newton2, Mat2};

/// Reduced coordinates: `y = u^1`, `v = u^2 / sqrt(1 + (u^1)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub y: f64,
    pub v: f64,
}

impl PhasePoint {
    pub const fn new(y: f64, v: f64) -> Self {
        PhasePoint { y, v }
    }

    pub fn from_state(s: &FluidState) -> Self {
        let y = s.u[1];
        PhasePoint {
            y,
            v: s.u[2] / (1.0 + y * y).sqrt(),
        }
    }

    pub fn distance(&self, other: &PhasePoint) -> f64 {
        (self.y - other.y).hypot(self.v - other.v)
    }
}

/// Fluxes that are constant across the whole shock layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpstreamConstants {
    /// `T^{1 nu}` for `nu = 0, 1, 2`.
    pub t1: [f64; 3],
    /// `H^nu = u^1 h^nu - h^1 u^nu`; `H^1` vanishes identically.
    pub h: FourVector,
    /// Baryon flux `n u^1`.
    pub j: f64,
    pub mu_over_4pi: f64,
    pub eos: EosSpec,
    /// The upstream state in the frame where its transverse velocity is zero.
    pub upstream: FluidState,
    /// Boost that took the caller's upstream state into that frame.
    pub boost: Boost,
}

impl UpstreamConstants {
    pub fn y0(&self) -> f64 {
        self.upstream.u[1]
    }

    /// The upstream rest point `"0"`.
    pub fn origin(&self) -> PhasePoint {
        PhasePoint::new(self.y0(), 0.0)
    }

    /// Typical magnitude of the flux residuals, used to make tolerances relative.
    pub fn scale(&self) -> f64 {
        let s = &self.upstream;
        self.t1.iter().fold(s.p + s.eps, |m, t| m.max(t.abs()))
    }
}

/// Computes the conserved fluxes. The state is boosted along axis 2 first
/// when its transverse velocity is non-zero.
pub fn upstream_constants(upstream: &FluidState, eos: &EosSpec) -> Result<UpstreamConstants> {
    upstream.validate()?;
    eos.validate()?;
    let (s, boost) = boost_to_zero_transverse(upstream);
    let t = stress_energy_unchecked(&s);
    let y0 = s.u[1];
    let h = y0 * s.h - s.h[1] * s.u;
    let h = FourVector::new(h[0], 0.0, h[2], h[3]);
    Ok(UpstreamConstants {
        t1: [t[1][0], t[1][1], t[1][2]],
        h,
        j: s.n * y0,
        mu_over_4pi: s.mu_over_4pi,
        eos: *eos,
        upstream: s,
        boost,
    })
}

/// Pieces of the reconstruction shared with the flux functions.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kinematics {
    pub u: FourVector,
    /// `H . u`
    pub hu: f64,
    /// `T^{1 mu} u_mu`
    pub tu: f64,
}

pub(crate) fn kinematics(c: &UpstreamConstants, pt: PhasePoint) -> Kinematics {
    let PhasePoint { y, v } = pt;
    let s = (1.0 + y * y).sqrt();
    let u2 = v * s;
    let u0 = s * (1.0 + v * v).sqrt();
    let u = FourVector::new(u0, y, u2, 0.0);
    Kinematics {
        u,
        hu: minkowski_dot(&c.h, &u),
        tu: c.t1[0] * u0 - c.t1[1] * y - c.t1[2] * u2,
    }
}

/// Full state at `(y, v)` from the conserved fluxes.
pub fn reconstruct_state(c: &UpstreamConstants, pt: PhasePoint) -> Result<FluidState> {
    let PhasePoint { y, v } = pt;
    if !(y > 0.0) || !v.is_finite() {
        return Err(Error::UnphysicalPoint {
            y,
            v,
            reason: "y must be positive",
        });
    }
    let k = kinematics(c, pt);
    let h = (1.0 / y) * (c.h - k.hu * k.u);
    let m = c.mu_over_4pi;
    let h_sq = (k.hu * k.hu - minkowski_dot(&c.h, &c.h)) / (y * y);
    let eps_star = k.tu / y;
    let eps = eps_star - 0.5 * m * h_sq;
    let n = c.j / y;
    if !(eps > 0.0) {
        return Err(Error::UnphysicalPoint {
            y,
            v,
            reason: "non-positive energy density",
        });
    }
    let p = c.eos.pressure(eps, n).map_err(|_| Error::UnphysicalPoint {
        y,
        v,
        reason: "pressure undefined",
    })?;
    Ok(FluidState {
        u: k.u,
        h,
        n,
        p,
        eps,
        mu_over_4pi: m,
    })
}

/// Residuals of the jump conditions at `pt`: the three momentum-energy
/// fluxes `T^{1 nu}`, the baryon flux and the two non-trivial components of
/// the induction flux, each relative to `max(1, |reference|)`.
pub fn jump_residuals(c: &UpstreamConstants, pt: PhasePoint) -> Result<[f64; 6]> {
    let s = reconstruct_state(c, pt)?;
    let t = stress_energy_unchecked(&s);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let y = s.u[1];
    let h_flux = y * s.h - s.h[1] * s.u;
    Ok([
        rel(t[1][0], c.t1[0]),
        rel(t[1][1], c.t1[1]),
        rel(t[1][2], c.t1[2]),
        rel(s.n * y, c.j),
        rel(h_flux[0], c.h[0]),
        rel(h_flux[2], c.h[2]),
    ])
}

/// Search region for rest points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub y_min: f64,
    pub y_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl SearchBox {
    pub fn around(c: &UpstreamConstants) -> Self {
        let y0 = c.y0();
        SearchBox {
            y_min: 0.05 * y0,
            y_max: 2.0 * y0,
            v_min: -2.0,
            v_max: 2.0,
        }
    }

    pub fn contains(&self, p: PhasePoint) -> bool {
        p.y >= self.y_min && p.y <= self.y_max && p.v >= self.v_min && p.v <= self.v_max
    }

    fn diameter(&self) -> f64 {
        (self.y_max - self.y_min).hypot(self.v_max - self.v_min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestPoints {
    /// Sorted lexicographically by `(y, v)`; always includes `"0"`.
    pub points: Vec<PhasePoint>,
    /// Centres of flagged cells from which the polish did not converge.
    pub failed_cells: Vec<PhasePoint>,
}

impl RestPoints {
    /// Rest points other than `"0"`, nearest to it first.
    pub fn nontrivial(&self, c: &UpstreamConstants) -> Vec<PhasePoint> {
        let o = c.origin();
        let mut out: Vec<PhasePoint> = self.points.iter().copied().filter(|p| *p != o).collect();
        out.sort_by(|a, b| a.distance(&o).total_cmp(&b.distance(&o)));
        out
    }
}

/// Polishes a rest-point estimate with damped Newton on `(F1, F2)`.
pub fn polish_rest_point(c: &UpstreamConstants, guess: PhasePoint) -> Result<PhasePoint> {
    let scale = c.scale();
    let f = |x: [f64; 2]| phaseplane::field(c, PhasePoint::new(x[0], x[1]));
    let jac = |x: [f64; 2]| -> Result<Mat2> {
        phaseplane::fd_jacobian(c, PhasePoint::new(x[0], x[1]), 1e-7 * c.y0().max(1.0))
    };
    let r = newton2(f, jac, [guess.y, guess.v], 1e-11 * scale, 60)?;
    Ok(PhasePoint::new(r[0], r[1]))
}

/// All simultaneous zeros of `F1` and `F2` in `bx`.
///
/// Cells of a `grid_n x grid_n` lattice where both components change sign
/// are polished with Newton; cells with any unphysical corner are skipped.
pub fn find_rest_points(c: &UpstreamConstants, bx: SearchBox, grid_n: usize) -> Result<RestPoints> {
    if grid_n < 32 {
        return Err(Error::Validation {
            field: "grid_n".into(),
            constraint: "must be at least 32".into(),
        });
    }
    if !bx.contains(c.origin()) || !(bx.y_min > 0.0) {
        return Err(Error::Validation {
            field: "search box".into(),
            constraint: "must contain the upstream point and lie in y > 0".into(),
        });
    }
    let nodes = grid_n + 1;
    let dy = (bx.y_max - bx.y_min) / grid_n as f64;
    let dv = (bx.v_max - bx.v_min) / grid_n as f64;
    let node = |i: usize, k: usize| PhasePoint::new(bx.y_min + i as f64 * dy, bx.v_min + k as f64 * dv);
    let values: Vec<Option<[f64; 2]>> = (0..nodes * nodes)
        .map(|idx| phaseplane::field(c, node(idx / nodes, idx % nodes)).ok())
        .collect();

    let origin = c.origin();
    let mut points = vec![origin];
    let mut failed_cells = Vec::new();
    let merge_tol = 1e-7 * bx.diameter();
    let changes = |a: &[f64]| {
        let pos = a.iter().any(|x| *x >= 0.0);
        let neg = a.iter().any(|x| *x <= 0.0);
        pos && neg
    };
    for i in 0..grid_n {
        for k in 0..grid_n {
            let corners = [
                values[i * nodes + k],
                values[(i + 1) * nodes + k],
                values[i * nodes + k + 1],
                values[(i + 1) * nodes + k + 1],
            ];
            if corners.iter().any(|c| c.is_none()) {
                continue;
            }
            let f1: Vec<f64> = corners.iter().map(|c| c.unwrap()[0]).collect();
            let f2: Vec<f64> = corners.iter().map(|c| c.unwrap()[1]).collect();
            if !(changes(&f1) && changes(&f2)) {
                continue;
            }
            let centre = PhasePoint::new(node(i, k).y + 0.5 * dy, node(i, k).v + 0.5 * dv);
            match polish_rest_point(c, centre) {
                Ok(p) if bx.contains(p) => {
                    if points.iter().all(|q| q.distance(&p) > merge_tol) {
                        points.push(p);
                    }
                }
                Ok(_) => {}
                Err(_) => failed_cells.push(centre),
            }
        }
    }
    points.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.v.total_cmp(&b.v)));
    Ok(RestPoints { points, failed_cells })
}

/// Central differences of the entropy per baryon at `at` along `y` and `v`.
pub fn entropy_stationarity_check(c: &UpstreamConstants, at: PhasePoint, step: f64) -> Result<(f64, f64)> {
    if !(step > 0.0) {
        return Err(Error::NonPositiveInput("step"));
    }
    let s = |y: f64, v: f64| -> Result<f64> {
        let st = reconstruct_state(c, PhasePoint::new(y, v))?;
        c.eos.entropy_per_baryon(st.eps, st.n)
    };
    let d_y = (s(at.y + step, at.v)? - s(at.y - step, at.v)?) / (2.0 * step);
    let d_v = (s(at.y, at.v + step)? - s(at.y, at.v - step)?) / (2.0 * step);
    Ok((d_y, d_v))
}

/// Entropy per baryon of the reconstructed state at `pt`.
pub fn entropy_at(c: &UpstreamConstants, pt: PhasePoint) -> Result<f64> {
    let s = reconstruct_state(c, pt)?;
    c.eos.entropy_per_baryon(s.eps, s.n)
}
