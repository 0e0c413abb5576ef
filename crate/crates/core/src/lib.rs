//! Viscous-profile admissibility of relativistic MHD shock transitions.
//!
//! The state ahead of the shock fixes a set of conserved fluxes; the shock
//! layer is then a planar dynamical system in `(y, v) = (u^1, u^2 / u^0_perp)`
//! whose rest points are the states allowed by the jump conditions. A
//! transition admits a viscous profile when the two rest points are joined by
//! a separatrix of this system for the given bulk and shear viscosities.

pub mod admissibility;
pub mod characteristics;
pub mod cli;
pub mod covariant;
pub mod eos;
pub mod error;
pub mod ode;
pub mod phaseplane;
pub mod profile;
pub mod roots;
pub mod shock;

pub use admissibility::{full_verdict, AdmissibilityReport, Verdict};
pub use characteristics::{characteristic_speeds, classify_regime, CharacteristicSpeeds, ShockRegime};
pub use covariant::{FluidState, FourVector, Thermo};
pub use eos::EosSpec;
pub use error::{Error, Result};
pub use profile::{shoot_profile, ProfileTrajectory, ViscosityPair};
pub use shock::{upstream_constants, PhasePoint, UpstreamConstants};
