//! Four-vectors in the metric `diag(1, -1, -1, -1)`, fluid states and the
//! stress-energy tensor of an ideal, infinitely conducting magnetised fluid.

use std::ops::{Add, Index, Mul, Sub};

use crate::eos::EosSpec;
use crate::error::{Error, Result};

const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Contravariant components `a^mu`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector([t, x, y, z])
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    /// Covariant components `a_mu`.
    pub fn lower(&self) -> [f64; 4] {
        let mut out = self.0;
        for (c, g) in out.iter_mut().zip(METRIC) {
            *c *= g;
        }
        out
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, rhs: FourVector) -> FourVector {
        FourVector(rhs.0.map(|c| self * c))
    }
}

pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

pub type Tensor = [[f64; 4]; 4];

/// Local fluid state. `mu_over_4pi` is the magnetic coupling `mu / 4 pi`;
/// the combination `mu / 8 pi` is always half of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    pub u: FourVector,
    pub h: FourVector,
    pub n: f64,
    pub p: f64,
    pub eps: f64,
    pub mu_over_4pi: f64,
}

const NORM_TOL: f64 = 1e-12;

impl FluidState {
    /// Completes `u^0 = sqrt(1 + u1^2 + u2^2)` and `h^0` from `h . u = 0`.
    pub fn from_components(
        u1: f64,
        u2: f64,
        h1: f64,
        h2: f64,
        n: f64,
        p: f64,
        eps: f64,
        mu_over_4pi: f64,
    ) -> Result<Self> {
        let u0 = (1.0 + u1 * u1 + u2 * u2).sqrt();
        let h0 = (h1 * u1 + h2 * u2) / u0;
        let state = FluidState {
            u: FourVector::new(u0, u1, u2, 0.0),
            h: FourVector::new(h0, h1, h2, 0.0),
            n,
            p,
            eps,
            mu_over_4pi,
        };
        state.validate()?;
        Ok(state)
    }

    /// As [`FluidState::from_components`], closing the thermodynamics with an
    /// equation of state from exactly one of `p` or `eps`.
    pub fn with_eos(
        eos: &EosSpec,
        u1: f64,
        u2: f64,
        h1: f64,
        h2: f64,
        n: f64,
        thermo: Thermo,
        mu_over_4pi: f64,
    ) -> Result<Self> {
        let (p, eps) = match thermo {
            Thermo::Pressure(p) => (p, eos.energy_density(p, n)?),
            Thermo::EnergyDensity(eps) => (eos.pressure(eps, n)?, eps),
        };
        Self::from_components(u1, u2, h1, h2, n, p, eps, mu_over_4pi)
    }

    pub fn validate(&self) -> Result<()> {
        let uu = self.u.dot(&self.u);
        if (uu - 1.0).abs() > NORM_TOL * self.u[0] * self.u[0] {
            return Err(Error::InvalidState(format!("u.u = {uu}, expected 1")));
        }
        let hu = self.h.dot(&self.u);
        let hscale = self.h.0.iter().fold(1.0f64, |m, c| m.max(c.abs())) * self.u[0];
        if hu.abs() > NORM_TOL * hscale {
            return Err(Error::InvalidState(format!("h.u = {hu}, expected 0")));
        }
        if self.u[3] != 0.0 || self.h[3] != 0.0 {
            return Err(Error::InvalidState("out-of-plane components must vanish".into()));
        }
        if !(self.u[1] > 0.0) {
            return Err(Error::InvalidState(format!(
                "normal velocity u1 = {} must be positive",
                self.u[1]
            )));
        }
        if !(self.n > 0.0 && self.eps > 0.0 && self.p + self.eps > 0.0) {
            return Err(Error::InvalidState("n, eps and p + eps must be positive".into()));
        }
        if !(self.mu_over_4pi >= 0.0) {
            return Err(Error::InvalidState("mu / 4 pi must be non-negative".into()));
        }
        Ok(())
    }

    /// `|h|^2 = -h . h`.
    pub fn h_sq(&self) -> f64 {
        -self.h.dot(&self.h)
    }

    pub fn total_pressure(&self) -> f64 {
        self.p + 0.5 * self.mu_over_4pi * self.h_sq()
    }

    pub fn total_energy(&self) -> f64 {
        self.eps + 0.5 * self.mu_over_4pi * self.h_sq()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermo {
    Pressure(f64),
    EnergyDensity(f64),
}

/// `T^{mu nu} = (p* + eps*) u u - p* g - (mu/4pi) h h`.
pub fn stress_energy(state: &FluidState) -> Result<Tensor> {
    state.validate()?;
    Ok(stress_energy_unchecked(state))
}

pub(crate) fn stress_energy_unchecked(state: &FluidState) -> Tensor {
    let ps = state.total_pressure();
    let w = ps + state.total_energy();
    let m = state.mu_over_4pi;
    let (u, h) = (state.u.0, state.h.0);
    let mut t = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let g = if a == b { METRIC[a] } else { 0.0 };
            t[a][b] = w * u[a] * u[b] - ps * g - m * h[a] * h[b];
        }
    }
    t
}

/// Pure boost along the tangential axis 2 with velocity `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    pub beta: f64,
    pub gamma: f64,
}

impl Boost {
    pub fn new(beta: f64) -> Self {
        Boost {
            beta,
            gamma: 1.0 / (1.0 - beta * beta).sqrt(),
        }
    }

    pub fn apply(&self, a: &FourVector) -> FourVector {
        let [t, x, y, z] = a.0;
        FourVector([
            self.gamma * (t - self.beta * y),
            x,
            self.gamma * (y - self.beta * t),
            z,
        ])
    }

    pub fn inverse(&self) -> Boost {
        Boost::new(-self.beta)
    }
}

/// Boosts along axis 2 into the frame where `u^2 = 0`; `u^1` is untouched.
pub fn boost_to_zero_transverse(state: &FluidState) -> (FluidState, Boost) {
    let boost = Boost::new(state.u[2] / state.u[0]);
    let mut u = boost.apply(&state.u);
    u.0[2] = 0.0;
    let out = FluidState {
        u,
        h: boost.apply(&state.h),
        ..*state
    };
    (out, boost)
}
