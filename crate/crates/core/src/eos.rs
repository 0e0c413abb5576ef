//! Equations of state `p = p(eps, n)`.
//!
//! Two families are provided. `Linear` is the ultra-relativistic style
//! `p = kappa * eps`. `AnomalousWindow` softens the sound speed inside an
//! energy-density window, which makes the Poisson adiabats non-convex there.
//! Its sound speed is `kappa_out` outside `[eps_lo, eps_hi]` and blends to
//! `kappa_in` over `smoothing_width` at both edges with a cubic smoothstep,
//! so the pressure (its integral) is C² and causal everywhere.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EosSpec {
    Linear {
        kappa: f64,
    },
    AnomalousWindow {
        kappa_out: f64,
        kappa_in: f64,
        eps_lo: f64,
        eps_hi: f64,
        smoothing_width: f64,
    },
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

fn smoothstep_derivative(t: f64) -> f64 {
    if (0.0..=1.0).contains(&t) {
        6.0 * t * (1.0 - t)
    } else {
        0.0
    }
}

// Integral of smoothstep over [0, t], t clamped to [0, 1].
fn smoothstep_integral(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t - 0.5 * t * t * t * t
}

impl EosSpec {
    pub fn linear(kappa: f64) -> Result<Self> {
        let eos = EosSpec::Linear { kappa };
        eos.validate()?;
        Ok(eos)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EosSpec::Linear { kappa } => {
                if !(kappa > 0.0 && kappa < 1.0) {
                    return Err(Error::InvalidEos(format!("kappa = {kappa} must lie in (0, 1)")));
                }
            }
            EosSpec::AnomalousWindow {
                kappa_out,
                kappa_in,
                eps_lo,
                eps_hi,
                smoothing_width,
            } => {
                if !(kappa_in > 0.0 && kappa_in < kappa_out && kappa_out < 1.0) {
                    return Err(Error::InvalidEos(format!(
                        "need 0 < kappa_in ({kappa_in}) < kappa_out ({kappa_out}) < 1"
                    )));
                }
                if !(eps_lo > 0.0 && eps_lo < eps_hi) {
                    return Err(Error::InvalidEos(format!(
                        "need 0 < eps_lo ({eps_lo}) < eps_hi ({eps_hi})"
                    )));
                }
                if !(smoothing_width > 0.0 && 2.0 * smoothing_width <= eps_hi - eps_lo) {
                    return Err(Error::InvalidEos(format!(
                        "smoothing_width = {smoothing_width} must be positive and at most half the window"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Blend weight of the soft region: 0 outside the window, 1 on the plateau.
    fn window_weight(&self, eps: f64) -> (f64, f64) {
        match *self {
            EosSpec::Linear { .. } => (0.0, 0.0),
            EosSpec::AnomalousWindow {
                eps_lo,
                eps_hi,
                smoothing_width: w,
                ..
            } => {
                let rise = (eps - eps_lo) / w;
                let fall = (eps - (eps_hi - w)) / w;
                let weight = smoothstep(rise) - smoothstep(fall);
                let slope = (smoothstep_derivative(rise) - smoothstep_derivative(fall)) / w;
                (weight, slope)
            }
        }
    }

    fn window_weight_integral(&self, eps: f64) -> f64 {
        match *self {
            EosSpec::Linear { .. } => 0.0,
            EosSpec::AnomalousWindow {
                eps_lo,
                eps_hi,
                smoothing_width: w,
                ..
            } => {
                let rise = w * smoothstep_integral((eps - eps_lo) / w);
                let plateau = (eps.min(eps_hi - w) - (eps_lo + w)).max(0.0);
                let fall_t = ((eps - (eps_hi - w)) / w).clamp(0.0, 1.0);
                let fall = w * (fall_t - smoothstep_integral(fall_t));
                rise + plateau + fall
            }
        }
    }

    fn check_inputs(eps: f64, n: f64) -> Result<()> {
        if !(eps > 0.0) {
            return Err(Error::NonPositiveInput("energy density"));
        }
        if !(n > 0.0) {
            return Err(Error::NonPositiveInput("baryon density"));
        }
        Ok(())
    }

    /// `p(eps, n)`.
    pub fn pressure(&self, eps: f64, n: f64) -> Result<f64> {
        Self::check_inputs(eps, n)?;
        Ok(self.pressure_unchecked(eps))
    }

    fn pressure_unchecked(&self, eps: f64) -> f64 {
        match *self {
            EosSpec::Linear { kappa } => kappa * eps,
            EosSpec::AnomalousWindow {
                kappa_out, kappa_in, ..
            } => kappa_out * eps + (kappa_in - kappa_out) * self.window_weight_integral(eps),
        }
    }

    /// `(dp/deps)` at fixed `n`.
    pub fn dp_deps(&self, eps: f64, _n: f64) -> f64 {
        match *self {
            EosSpec::Linear { kappa } => kappa,
            EosSpec::AnomalousWindow {
                kappa_out, kappa_in, ..
            } => kappa_out + (kappa_in - kappa_out) * self.window_weight(eps).0,
        }
    }

    /// `(dp/dn)` at fixed `eps`. Both families are barotropic.
    pub fn dp_dn(&self, _eps: f64, _n: f64) -> f64 {
        0.0
    }

    /// Isentropic sound speed squared,
    /// `c_s^2 = (dp/deps)_n + n / (p + eps) * (dp/dn)_eps`.
    pub fn sound_speed_sq(&self, eps: f64, n: f64) -> Result<f64> {
        let p = self.pressure(eps, n)?;
        if !(p + eps > 0.0) {
            return Err(Error::NonPositiveInput("enthalpy density"));
        }
        let cs2 = self.dp_deps(eps, n) + n / (p + eps) * self.dp_dn(eps, n);
        if !(cs2 > 0.0 && cs2 < 1.0) {
            return Err(Error::CausalityViolation(cs2));
        }
        Ok(cs2)
    }

    /// Entropy per baryon, normalised so that `S(1, 1) = 0`.
    ///
    /// From `T dS = p d(1/n) + d(eps/n)` an isentrope obeys
    /// `d eps / (eps + p) = dn / n`, so for a barotropic law
    /// `S = G(eps) - ln n` with `G(eps) = int_1^eps de / (e + p(e))`.
    pub fn entropy_per_baryon(&self, eps: f64, n: f64) -> Result<f64> {
        Self::check_inputs(eps, n)?;
        let g = match *self {
            EosSpec::Linear { kappa } => eps.ln() / (1.0 + kappa),
            EosSpec::AnomalousWindow { .. } => self.isentrope_integral(eps),
        };
        Ok(g - n.ln())
    }

    // int_1^eps de / (e + p(e)), integrated in t = ln e where the integrand
    // 1 / (1 + p/e) is bounded and smooth between the window breakpoints.
    fn isentrope_integral(&self, eps: f64) -> f64 {
        let mut breaks = vec![0.0, eps.ln()];
        if let EosSpec::AnomalousWindow {
            eps_lo,
            eps_hi,
            smoothing_width: w,
            ..
        } = *self
        {
            for e in [eps_lo, eps_lo + w, eps_hi - w, eps_hi] {
                let t = e.ln();
                if t > breaks[0].min(breaks[1]) && t < breaks[0].max(breaks[1]) {
                    breaks.push(t);
                }
            }
        }
        let sign = if breaks[1] >= breaks[0] { 1.0 } else { -1.0 };
        let mut knots: Vec<f64> = breaks;
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let integrand = |t: f64| {
            let e = t.exp();
            1.0 / (1.0 + self.pressure_unchecked(e) / e)
        };
        let mut total = 0.0;
        for pair in knots.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let pieces = ((b - a) / 0.25).ceil().max(1.0) as usize;
            let h = (b - a) / pieces as f64;
            for k in 0..pieces {
                total += gauss_legendre(&integrand, a + k as f64 * h, a + (k + 1) as f64 * h);
            }
        }
        sign * total
    }

    /// Inverts `p(eps)` at fixed `n`; pressure is strictly increasing in `eps`.
    pub fn energy_density(&self, p: f64, n: f64) -> Result<f64> {
        if !(p > 0.0) {
            return Err(Error::NonPositiveInput("pressure"));
        }
        if !(n > 0.0) {
            return Err(Error::NonPositiveInput("baryon density"));
        }
        match *self {
            EosSpec::Linear { kappa } => Ok(p / kappa),
            EosSpec::AnomalousWindow { kappa_in, .. } => {
                let mut lo = 0.0;
                let mut hi = p / kappa_in;
                let f = |e: f64| self.pressure_unchecked(e) - p;
                crate::roots::brent(f, lo, hi, 1e-15 * hi, 200).or_else(|_| {
                    // Bisection fallback keeps the contract even if Brent stalls.
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if f(mid) > 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    Ok(0.5 * (lo + hi))
                })
            }
        }
    }
}

const GL_NODES: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_WEIGHTS: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

// 16-point Gauss-Legendre on [a, b].
fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(x, w)| w * (f(mid + half * x) + f(mid - half * x)))
        .sum::<f64>()
        * half
}
