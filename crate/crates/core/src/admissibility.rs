//! Conditions A-D for the existence of a unique viscous profile, and the
//! resulting verdict.

use crate::characteristics::{classify_local, LocalParams, ShockRegime};
use crate::covariant::FluidState;
use crate::eos::EosSpec;
use crate::error::{Error, Result};
use crate::phaseplane::{
    classify_rest_point, f1, solve_on_locus, trace_locus, Locus, LocusKind, RestPointClassification,
};
use crate::shock::{upstream_constants, PhasePoint, UpstreamConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    A,
    B,
    C,
    D,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Condition::A => "A",
            Condition::B => "B",
            Condition::C => "C",
            Condition::D => "D",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    AdmissibleUniqueProfile,
    NotAdmissible(Vec<Condition>),
    Degenerate(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::AdmissibleUniqueProfile => "admissible",
            Verdict::NotAdmissible(_) => "not-admissible",
            Verdict::Degenerate(_) => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionA {
    pub pass: bool,
    pub evidence: String,
}

/// Sampled sign of `(y0 - y1) F1` along `V2`. The margin is its negative,
/// so the condition holds when the margin stays positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionB {
    pub pass: bool,
    pub samples: usize,
    pub min_margin: f64,
    pub argmin: PhasePoint,
    /// Points of `V2` where the margin changes sign, i.e. where `V1` crosses it.
    pub sign_changes: Vec<PhasePoint>,
    /// An interior maximum of `(y0 - y1) F1` that touches zero from below.
    pub cj_contact: Option<PhasePoint>,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub constants: UpstreamConstants,
    pub target: PhasePoint,
    pub condition_a: Option<ConditionA>,
    pub condition_b: Option<ConditionB>,
    pub condition_c: bool,
    pub condition_d: ShockRegime,
    pub cj_contact: Option<PhasePoint>,
    pub origin_kind: Option<RestPointClassification>,
    pub target_kind: Option<RestPointClassification>,
    pub v1: Option<Locus>,
    pub v2: Option<Locus>,
    pub verdict: Verdict,
}

impl AdmissibilityReport {
    pub fn condition_d_pass(&self) -> bool {
        self.condition_d != ShockRegime::NotEvolutionary
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictOptions {
    pub grid_n: usize,
    pub samples_n: usize,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            grid_n: 256,
            samples_n: 256,
        }
    }
}

/// Relative threshold under which an interior maximum of the condition-B
/// quantity counts as touching zero.
pub const CJ_TOLERANCE: f64 = 1e-8;

/// Evaluates `(y0 - y1) F1(Y2(v), v)` at `samples_n` equally spaced interior
/// values of `v` strictly between `v0` and `v1`.
pub fn check_condition_b(
    c: &UpstreamConstants,
    v2: &Locus,
    y0: f64,
    y1: f64,
    samples_n: usize,
) -> Result<ConditionB> {
    if samples_n < 256 {
        return Err(Error::Validation {
            field: "samples_n".into(),
            constraint: "must be at least 256".into(),
        });
    }
    let v0 = v2.samples[0].v;
    let v1 = v2.end().v;
    let sign = y0 - y1;
    let mut pts = Vec::with_capacity(samples_n);
    let mut q = Vec::with_capacity(samples_n);
    for k in 1..=samples_n {
        let v = v0 + (v1 - v0) * k as f64 / (samples_n + 1) as f64;
        let guess = v2.interpolate(v).ok_or(Error::BracketNotFound { at: v })?;
        let p = solve_on_locus(c, LocusKind::V2, v, guess)?;
        q.push(sign * f1(c, p)?);
        pts.push(p);
    }
    let tol = CJ_TOLERANCE * c.scale();
    let mut cj_contact = None;
    for k in 1..q.len() - 1 {
        if q[k] >= q[k - 1] && q[k] >= q[k + 1] && q[k] > -tol && q[k] <= 0.0 {
            cj_contact = Some(pts[k]);
            break;
        }
    }
    let (kmin, qmax) = q
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (k, *v))
        .unwrap();
    let mut sign_changes = Vec::new();
    for k in 0..q.len() - 1 {
        if (q[k] < 0.0) != (q[k + 1] < 0.0) {
            let t = q[k] / (q[k] - q[k + 1]);
            sign_changes.push(PhasePoint::new(
                pts[k].y + t * (pts[k + 1].y - pts[k].y),
                pts[k].v + t * (pts[k + 1].v - pts[k].v),
            ));
        }
    }
    let evidence = if sign_changes.is_empty() {
        format!("sign of (y0 - y1) F1 checked at {samples_n} points of V2")
    } else {
        format!(
            "V1 crosses V2 {} time(s) between \"0\" and \"1\"",
            sign_changes.len()
        )
    };
    Ok(ConditionB {
        evidence,
        pass: qmax < 0.0 && cj_contact.is_none(),
        samples: samples_n,
        min_margin: -qmax,
        argmin: pts[kmin],
        sign_changes,
        cj_contact,
    })
}

/// Condition C: the upstream field is neither parallel nor perpendicular to
/// the shock normal.
pub fn condition_c(l: &LocalParams) -> bool {
    let b = l.h1 * l.h2;
    b != 0.0 && b.abs() > 1e-12 * (l.h1 * l.h1 + l.h2 * l.h2)
}

/// Runs C, D, A and B in that order and assembles the verdict for the
/// transition from `upstream` to the rest point `target`.
pub fn full_verdict(
    upstream: &FluidState,
    eos: &EosSpec,
    target: PhasePoint,
    opts: &VerdictOptions,
) -> Result<AdmissibilityReport> {
    let c = upstream_constants(upstream, eos)?;
    verdict_for(&c, target, opts)
}

/// As [`full_verdict`], from precomputed constants.
pub fn verdict_for(
    c: &UpstreamConstants,
    target: PhasePoint,
    opts: &VerdictOptions,
) -> Result<AdmissibilityReport> {
    let origin = c.origin();
    let l = LocalParams::from_state(&c.upstream, &c.eos)?;
    let regime = classify_local(c.y0(), &l);
    let mut report = AdmissibilityReport {
        constants: *c,
        target,
        condition_a: None,
        condition_b: None,
        condition_c: condition_c(&l),
        condition_d: regime,
        cj_contact: None,
        origin_kind: None,
        target_kind: None,
        v1: None,
        v2: None,
        verdict: Verdict::AdmissibleUniqueProfile,
    };
    if !report.condition_c {
        report.verdict = Verdict::Degenerate(format!(
            "condition C: h1 h2 = {} at the upstream point",
            l.h1 * l.h2
        ));
        return Ok(report);
    }
    if target.distance(&origin) < 1e-9 * (1.0 + c.y0()) {
        return Err(Error::DegenerateConfiguration(
            "target coincides with the upstream point".into(),
        ));
    }
    report.origin_kind = classify_rest_point(c, origin).ok();
    report.target_kind = classify_rest_point(c, target).ok();

    let d = origin.distance(&target);
    let a = match trace_locus(c, LocusKind::V1, origin, target.y, opts.grid_n) {
        Ok(v1) => {
            let miss = v1.end().distance(&target);
            let a = if miss < 1e-6 * d {
                ConditionA {
                    pass: true,
                    evidence: format!(
                        "V1 is single-valued on ({}, {}) and joins \"0\" to \"1\"",
                        target.y.min(c.y0()),
                        target.y.max(c.y0())
                    ),
                }
            } else {
                ConditionA {
                    pass: false,
                    evidence: format!(
                        "the branch of V1 through \"0\" reaches y1 at v = {} instead of {}",
                        v1.end().v,
                        target.v
                    ),
                }
            };
            report.v1 = Some(v1);
            a
        }
        Err(Error::MultiValued { at }) => ConditionA {
            pass: false,
            evidence: format!("V1 turns back at y = {at}; it is not a graph over (y1, y0)"),
        },
        Err(e) => ConditionA {
            pass: false,
            evidence: format!("V1 could not be traced: {e}"),
        },
    };
    report.condition_a = Some(a);

    match trace_locus(
        c,
        LocusKind::V2,
        origin,
        target.v,
        opts.grid_n.max(opts.samples_n),
    ) {
        Ok(v2) if v2.end().distance(&target) < 1e-6 * d => {
            let b = check_condition_b(c, &v2, c.y0(), target.y, opts.samples_n)?;
            report.cj_contact = b.cj_contact;
            report.condition_b = Some(b);
            report.v2 = Some(v2);
        }
        Ok(v2) => {
            report.condition_b = Some(ConditionB {
                pass: false,
                samples: 0,
                min_margin: f64::NAN,
                argmin: v2.end(),
                sign_changes: Vec::new(),
                cj_contact: None,
                evidence: format!(
                    "V2 through \"0\" reaches v1 at y = {} instead of {}",
                    v2.end().y,
                    target.y
                ),
            });
            report.v2 = Some(v2);
        }
        // Y2 is undefined somewhere between v0 and v1.
        Err(Error::BracketNotFound { at }) | Err(Error::MultiValued { at }) => {
            report.condition_b = Some(ConditionB {
                pass: false,
                samples: 0,
                min_margin: f64::NAN,
                argmin: target,
                sign_changes: Vec::new(),
                cj_contact: None,
                evidence: format!("V2 through \"0\" ends near v = {at} before reaching \"1\""),
            });
        }
        Err(e) => return Err(e),
    }

    let mut failed = Vec::new();
    if !report.condition_a.as_ref().map_or(false, |a| a.pass) {
        failed.push(Condition::A);
    }
    if !report.condition_b.as_ref().map_or(false, |b| b.pass) && report.cj_contact.is_none() {
        failed.push(Condition::B);
    }
    if regime == ShockRegime::NotEvolutionary {
        failed.push(Condition::D);
    }
    report.verdict = if !failed.is_empty() {
        Verdict::NotAdmissible(failed)
    } else if let Some(p) = report.cj_contact {
        Verdict::Degenerate(format!(
            "Chapman-Jouguet contact on V2 at (y = {}, v = {})",
            p.y, p.v
        ))
    } else if report
        .target_kind
        .map_or(false, |k| k.kind == crate::phaseplane::RestPointKind::Degenerate)
    {
        Verdict::Degenerate("the downstream rest point is degenerate".into())
    } else {
        Verdict::AdmissibleUniqueProfile
    };
    Ok(report)
}
