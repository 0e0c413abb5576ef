//! Slow, Alfvén and fast characteristic speeds, expressed as the normal
//! component of the four-velocity, and the polynomials `Q`, `R*` and `D`
//! that govern the linearisation of the shock-structure system.

use crate::covariant::{boost_to_zero_transverse, FluidState};
use crate::eos::EosSpec;
use crate::error::{Error, Result};

/// Thermodynamic and field data at one point, in a frame with `u^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalParams {
    pub p: f64,
    pub eps: f64,
    pub cs2: f64,
    pub h_sq: f64,
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub mu_over_4pi: f64,
}

impl LocalParams {
    /// Boosts `state` to zero transverse velocity before reading off `h`.
    pub fn from_state(state: &FluidState, eos: &EosSpec) -> Result<Self> {
        let (s, _) = boost_to_zero_transverse(state);
        Ok(LocalParams {
            p: s.p,
            eps: s.eps,
            cs2: eos.sound_speed_sq(s.eps, s.n)?,
            h_sq: s.h_sq(),
            h0: s.h[0],
            h1: s.h[1],
            h2: s.h[2],
            mu_over_4pi: s.mu_over_4pi,
        })
    }

    fn enthalpy(&self) -> f64 {
        self.p + self.eps
    }
}

/// `Q(y) = (1 - cs2) y^4 - y^2 (cs2 + m|h|^2/w) + m cs2 (h^1)^2 / w`, `w = p + eps`.
pub fn q_polynomial(y: f64, l: &LocalParams) -> f64 {
    let w = l.enthalpy();
    let m = l.mu_over_4pi;
    let y2 = y * y;
    (1.0 - l.cs2) * y2 * y2 - y2 * (l.cs2 + m * l.h_sq / w) + m * l.cs2 * l.h1 * l.h1 / w
}

/// `R*(y) = (p + eps) y^2 (1 + y^2) - m (h^1)^2`.
pub fn r_star(y: f64, l: &LocalParams) -> f64 {
    let y2 = y * y;
    l.enthalpy() * y2 * (1.0 + y2) - l.mu_over_4pi * l.h1 * l.h1
}

/// `D(y)`, the numerator of `dF1/du1` at a rest point. Only meaningful in
/// the frame where the transverse velocity vanishes.
pub fn d_polynomial(y: f64, l: &LocalParams) -> f64 {
    let w = l.enthalpy();
    let m = l.mu_over_4pi;
    let y2 = y * y;
    (1.0 - l.cs2) * y2 * y2 - y2 * (2.0 * l.cs2 + m * l.h_sq / w - 1.0) + m * (l.h0 * l.h0 - l.h2 * l.h2) / w
        - l.cs2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSpeeds {
    pub u_sl: f64,
    pub u_a: f64,
    pub u_a_star: f64,
    pub u_f: f64,
}

impl CharacteristicSpeeds {
    pub fn is_ordered(&self) -> bool {
        self.u_sl < self.u_a && self.u_a < self.u_a_star && self.u_a_star < self.u_f
    }
}

/// Alfvén speed and `u_A*`; these exist whenever `p + eps > 0`.
pub fn alfven_speeds(l: &LocalParams) -> Result<(f64, f64)> {
    let w = l.enthalpy();
    if !(w > 0.0) {
        return Err(Error::DegenerateField(format!("p + eps = {w}")));
    }
    let m = l.mu_over_4pi;
    let b1 = m * l.h1 * l.h1;
    let u_a = (b1 / (w + m * l.h_sq)).sqrt();
    // w Y (1 + Y) = b1 in Y = y^2; rationalised to avoid cancellation.
    let a = 4.0 * b1 / w;
    let y2 = a / (1.0 + (1.0 + a).sqrt()) / 2.0;
    Ok((u_a, y2.sqrt()))
}

/// Closed-form roots of `Q` and `R*` viewed as quadratics in `y^2`.
pub fn characteristic_speeds(l: &LocalParams) -> Result<CharacteristicSpeeds> {
    let (u_a, u_a_star) = alfven_speeds(l)?;
    let w = l.enthalpy();
    let m = l.mu_over_4pi;
    let a = 1.0 - l.cs2;
    let b = l.cs2 + m * l.h_sq / w;
    let c = m * l.cs2 * l.h1 * l.h1 / w;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::ComplexMagnetosonicRoots(disc));
    }
    let root = disc.sqrt();
    let fast = (b + root) / (2.0 * a);
    // Product of roots is c / a; dividing avoids cancellation for the slow root.
    let slow = if fast > 0.0 { c / (a * fast) } else { 0.0 };
    Ok(CharacteristicSpeeds {
        u_sl: slow.max(0.0).sqrt(),
        u_a,
        u_a_star,
        u_f: fast.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockRegime {
    Fast,
    Slow,
    NotEvolutionary,
}

impl std::fmt::Display for ShockRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShockRegime::Fast => "fast",
            ShockRegime::Slow => "slow",
            ShockRegime::NotEvolutionary => "not-evolutionary",
        })
    }
}

/// Evolutionarity of the state ahead of the shock.
///
/// With real magnetosonic roots: fast iff `u1 > u_f`, slow iff
/// `u_sl < u1 < u_A`. When the roots of `Q` are complex, `Q > 0` for every
/// `y`, there is no magnetosonic speed to cross, and the state counts as
/// fast iff it also exceeds both `u_A` and `u_A*`.
pub fn classify_regime(upstream: &FluidState, eos: &EosSpec) -> Result<ShockRegime> {
    let l = LocalParams::from_state(upstream, eos)?;
    Ok(classify_local(upstream.u[1], &l))
}

pub fn classify_local(y: f64, l: &LocalParams) -> ShockRegime {
    match characteristic_speeds(l) {
        Ok(s) if y > s.u_f => ShockRegime::Fast,
        Ok(s) if s.u_sl < y && y < s.u_a => ShockRegime::Slow,
        Ok(_) => ShockRegime::NotEvolutionary,
        Err(_) => match alfven_speeds(l) {
            Ok((u_a, u_a_star)) if y > u_a.max(u_a_star) => ShockRegime::Fast,
            _ => ShockRegime::NotEvolutionary,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ex1() -> LocalParams {
        LocalParams {
            p: 1.0,
            eps: 3.0,
            cs2: 1.0 / 3.0,
            h_sq: 1.0,
            h0: 0.0,
            h1: 1.0,
            h2: 0.0,
            mu_over_4pi: 1.0,
        }
    }

    #[test]
    fn ex1_speeds() {
        let s = characteristic_speeds(&ex1()).unwrap();
        assert!((s.u_sl - 0.424036).abs() < 1e-6);
        assert!((s.u_a - 0.447214).abs() < 1e-6);
        assert!((s.u_a_star - 0.455090).abs() < 1e-6);
        assert!((s.u_f - 0.833783).abs() < 1e-6);
        assert!(s.is_ordered());
        // Closed forms: u_A^2 = 1/5, u_A*^2 = (sqrt 2 - 1)/2, Q roots (7 +- sqrt 17)/16.
        assert_relative_eq!(s.u_a * s.u_a, 0.2, epsilon = 1e-15);
        assert_relative_eq!(
            s.u_a_star * s.u_a_star,
            (2f64.sqrt() - 1.0) / 2.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(s.u_f * s.u_f, (7.0 + 17f64.sqrt()) / 16.0, epsilon = 1e-15);
        assert_relative_eq!(s.u_sl * s.u_sl, (7.0 - 17f64.sqrt()) / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn q_values() {
        let l = ex1();
        let c0 = l.mu_over_4pi * l.cs2 * l.h1 * l.h1 / (l.p + l.eps);
        assert_relative_eq!(q_polynomial(0.0, &l), c0);
        assert!(q_polynomial(0.695194f64.sqrt(), &l).abs() < 1e-6);
        let hydro = LocalParams {
            h_sq: 0.0,
            h1: 0.0,
            ..l
        };
        assert!(q_polynomial(0.5f64.sqrt(), &hydro).abs() < 1e-15);
    }

    #[test]
    fn degenerate_fields() {
        // h^1 = 0: slow and Alfven speeds collapse to zero.
        let l = LocalParams { h1: 0.0, ..ex1() };
        let s = characteristic_speeds(&l).unwrap();
        assert_eq!(s.u_sl, 0.0);
        assert_eq!(s.u_a, 0.0);
        assert_eq!(s.u_a_star, 0.0);
        assert_relative_eq!(s.u_f * s.u_f, (1.0 / 3.0 + 0.25) / (2.0 / 3.0), epsilon = 1e-15);

        // No field: fast speed is the proper sound speed.
        let l = LocalParams {
            h1: 0.0,
            h_sq: 0.0,
            ..ex1()
        };
        let s = characteristic_speeds(&l).unwrap();
        assert_relative_eq!(s.u_f, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s.u_sl, 0.0);

        let l = LocalParams { p: -3.0, ..ex1() };
        assert!(matches!(
            characteristic_speeds(&l),
            Err(Error::DegenerateField(_))
        ));
    }

    #[test]
    fn d_values() {
        let l = LocalParams {
            h_sq: 0.0,
            h1: 0.0,
            ..ex1()
        };
        assert_relative_eq!(d_polynomial(1.0, &l), 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(d_polynomial(0.0, &l), -1.0 / 3.0);
    }

    #[test]
    fn regimes() {
        let l = ex1();
        let s = characteristic_speeds(&l).unwrap();
        assert_eq!(classify_local(1.2 * s.u_f, &l), ShockRegime::Fast);
        assert_eq!(classify_local(0.5 * (s.u_sl + s.u_a), &l), ShockRegime::Slow);
        assert_eq!(
            classify_local(0.5 * (s.u_a_star + s.u_f), &l),
            ShockRegime::NotEvolutionary
        );
        assert_eq!(classify_local(0.5 * s.u_sl, &l), ShockRegime::NotEvolutionary);
    }

    #[test]
    fn complex_roots_fall_back_to_alfven_bounds() {
        // Quasi-parallel: |h|^2 well below (h^1)^2.
        let l = LocalParams {
            h_sq: 0.2,
            h1: 2.0,
            ..ex1()
        };
        assert!(matches!(
            characteristic_speeds(&l),
            Err(Error::ComplexMagnetosonicRoots(_))
        ));
        let (ua, uas) = alfven_speeds(&l).unwrap();
        assert_eq!(classify_local(1.01 * ua.max(uas), &l), ShockRegime::Fast);
        assert_eq!(
            classify_local(0.99 * ua.min(uas), &l),
            ShockRegime::NotEvolutionary
        );
    }
}
