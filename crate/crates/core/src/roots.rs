//! Scalar and planar root finders shared by the locus tracer and the rest-point search.

use crate::error::{Error, Result};

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::SolverFailure(format!(
            "brent: [{a}, {b}] is not a bracket ({fa}, {fb})"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() <= xtol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        if outside
            || (bisected && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!bisected && (s - b).abs() >= (c - d).abs() / 2.0)
            || (bisected && (b - c).abs() < xtol)
            || (!bisected && (c - d).abs() < xtol)
        {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        if !fs.is_finite() {
            return Err(Error::SolverFailure(format!("brent: non-finite value at {s}")));
        }
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::SolverFailure("brent: iteration limit".into()))
}

pub type Mat2 = [[f64; 2]; 2];

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Damped Newton iteration for a planar system with a caller-supplied Jacobian.
pub fn newton2<F, J>(f: F, jac: J, start: [f64; 2], tol: f64, max_iter: usize) -> Result<[f64; 2]>
where
    F: Fn([f64; 2]) -> Result<[f64; 2]>,
    J: Fn([f64; 2]) -> Result<Mat2>,
{
    let mut x = start;
    let mut fx = f(x)?;
    let norm = |v: [f64; 2]| v[0].hypot(v[1]);
    for _ in 0..max_iter {
        if norm(fx) < tol {
            return Ok(x);
        }
        let m = jac(x)?;
        let det = det2(&m);
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SolverFailure("newton: singular jacobian".into()));
        }
        let dx = [
            -(m[1][1] * fx[0] - m[0][1] * fx[1]) / det,
            -(-m[1][0] * fx[0] + m[0][0] * fx[1]) / det,
        ];
        let mut lambda = 1.0;
        let current = norm(fx);
        loop {
            let trial = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            if let Ok(ft) = f(trial) {
                if norm(ft) < current || lambda < 1e-3 {
                    x = trial;
                    fx = ft;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::SolverFailure("newton: line search failed".into()));
            }
        }
    }
    if norm(fx) < tol {
        Ok(x)
    } else {
        Err(Error::SolverFailure(format!(
            "newton: residual {:e} after {max_iter} iterations",
            norm(fx)
        )))
    }
}
