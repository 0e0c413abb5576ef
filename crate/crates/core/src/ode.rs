//! Adaptive Dormand-Prince 5(4) integrator for small autonomous systems.
//! The nodes `c_i` never appear since the right-hand side has no `x`.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth minus fourth order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    /// Steps below this raise [`Error::StiffnessLimit`].
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

/// Integrates `dy/dx = f(y)` from `(x0, y0)` and hands every accepted step
/// to `observe`, which decides whether to go on.
pub fn integrate<const N: usize, F, O>(
    f: F,
    x0: f64,
    y0: [f64; N],
    ctl: &StepControl,
    mut observe: O,
) -> Result<Stats>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
    O: FnMut(f64, &[f64; N]) -> Result<Flow>,
{
    let mut stats = Stats::default();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(&y)?;
    stats.evaluations += 1;
    let mut h = ctl.h_init.clamp(ctl.h_min, ctl.h_max);
    let mut err_prev: f64 = 1e-4;
    while stats.accepted < ctl.max_steps {
        let stages = (|| -> Result<_> {
            let k2 = f(&axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = f(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
            let k6 = f(&axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ))?;
            let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(&y_new)?;
            Ok((k3, k4, k5, k6, k7, y_new))
        })();
        stats.evaluations += 6;
        let (k3, k4, k5, k6, k7, y_new) = match stages {
            Ok(v) => v,
            // A trial stage strayed outside the domain of f; retry shorter.
            Err(Error::UnphysicalPoint { .. }) => {
                stats.rejected += 1;
                h *= 0.25;
                if h < ctl.h_min {
                    return Err(Error::StiffnessLimit { x });
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        let mut acc = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctl.atol + ctl.rtol * y[i].abs().max(y_new[i].abs());
            acc += (e / sc).powi(2);
        }
        let err = (acc / N as f64).sqrt();
        if !err.is_finite() {
            h *= 0.25;
        } else if err <= 1.0 {
            // PI controller (Hairer & Wanner, beta = 0.04).
            let fac = (0.9 * err.max(1e-10).powf(-0.17) * err_prev.powf(0.04)).clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
            x += h;
            y = y_new;
            k1 = k7;
            stats.accepted += 1;
            if observe(x, &y)? == Flow::Stop {
                return Ok(stats);
            }
            h = (h * fac).min(ctl.h_max);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < ctl.h_min {
            return Err(Error::StiffnessLimit { x });
        }
    }
    Err(Error::SolverFailure(format!(
        "integration exceeded {} steps",
        ctl.max_steps
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl(tol: f64) -> StepControl {
        StepControl {
            rtol: tol,
            atol: tol * 1e-3,
            h_init: 1e-3,
            h_min: 1e-14,
            h_max: 1.0,
            max_steps: 100_000,
        }
    }

    #[test]
    fn exponential_decay() {
        let mut last = (0.0, [1.0]);
        integrate(
            |y: &[f64; 1]| Ok([-y[0]]),
            0.0,
            [1.0],
            &ctl(1e-10),
            |x, y| {
                last = (x, *y);
                Ok(if x >= 5.0 { Flow::Stop } else { Flow::Continue })
            },
        )
        .unwrap();
        assert!((last.1[0] - (-last.0).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let mut e_max: f64 = 0.0;
        integrate(
            |y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [1.0, 0.0],
            &ctl(1e-10),
            |x, y| {
                e_max = e_max.max((y[0] * y[0] + y[1] * y[1] - 1.0).abs());
                Ok(if x > 20.0 { Flow::Stop } else { Flow::Continue })
            },
        )
        .unwrap();
        assert!(e_max < 1e-8);
    }

    #[test]
    fn step_floor_reports_stiffness() {
        let mut c = ctl(1e-12);
        c.h_min = 1e-3;
        c.h_init = 1e-3;
        let r = integrate(
            |y: &[f64; 1]| Ok([-1e6 * y[0]]),
            0.0,
            [1.0],
            &c,
            |_, _| Ok(Flow::Continue),
        );
        assert!(matches!(r, Err(Error::StiffnessLimit { .. })));
    }
}
