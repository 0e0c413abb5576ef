//! Scenario files.
//!
//! ```text
//! # comment
//! [section]
//! key = value
//! ```
//!
//! Numbers may be written as fractions (`1/3`). Lists are comma separated.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::covariant::{FluidState, Thermo};
use crate::eos::EosSpec;
use crate::error::{Error, Result};
use crate::profile::{ShootOptions, ViscosityPair};
use crate::shock::{PhasePoint, SearchBox, UpstreamConstants};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpstreamSpec {
    pub u1: f64,
    pub h1: f64,
    pub h2: f64,
    pub n: f64,
    pub thermo: Thermo,
}

/// Overrides for the rest-point search box; unset edges come from
/// [`SearchBox::around`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocusRange {
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub grid_n: usize,
    pub ode_tol: f64,
    pub shoot_delta: f64,
    pub locus_range: LocusRange,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            grid_n: 256,
            ode_tol: 1e-9,
            shoot_delta: 1e-6,
            locus_range: LocusRange::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outputs {
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub eos: EosSpec,
    pub upstream: UpstreamSpec,
    pub mu_over_4pi: f64,
    pub viscosity: ViscosityPair,
    pub numerics: Numerics,
    /// Estimate of `"1"`; polished before use.
    pub target: Option<PhasePoint>,
    pub sweep_ratios: Vec<f64>,
    pub outputs: Outputs,
}

impl Scenario {
    pub fn fluid_state(&self) -> Result<FluidState> {
        let u = &self.upstream;
        FluidState::with_eos(&self.eos, u.u1, 0.0, u.h1, u.h2, u.n, u.thermo, self.mu_over_4pi)
    }

    pub fn search_box(&self, c: &UpstreamConstants) -> SearchBox {
        let d = SearchBox::around(c);
        let r = &self.numerics.locus_range;
        SearchBox {
            y_min: r.y_min.unwrap_or(d.y_min),
            y_max: r.y_max.unwrap_or(d.y_max),
            v_min: r.v_min.unwrap_or(d.v_min),
            v_max: r.v_max.unwrap_or(d.v_max),
        }
    }

    pub fn shoot_options(&self) -> ShootOptions {
        ShootOptions {
            tol: self.numerics.ode_tol,
            delta: self.numerics.shoot_delta,
            ..ShootOptions::default()
        }
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("scenario", &["name"]),
    (
        "eos",
        &[
            "kind",
            "kappa",
            "kappa_out",
            "kappa_in",
            "eps_lo",
            "eps_hi",
            "smoothing_width",
        ],
    ),
    ("upstream", &["u1", "h1", "h2", "n", "p", "eps"]),
    ("physics", &["mu_over_4pi"]),
    ("viscosity", &["xi", "eta"]),
    (
        "numerics",
        &[
            "grid_n",
            "ode_tol",
            "shoot_delta",
            "y_min",
            "y_max",
            "v_min",
            "v_max",
        ],
    ),
    ("target", &["y", "v"]),
    ("sweep", &["ratios"]),
    ("outputs", &["csv", "svg", "report"]),
];

struct Entry {
    line: usize,
    value: String,
}

struct Raw {
    entries: BTreeMap<(String, String), Entry>,
    headers: BTreeMap<String, usize>,
    last_line: usize,
}

impl Raw {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    // Where to point at when a key is missing: its section header, or the end.
    fn anchor(&self, section: &str) -> usize {
        self.headers.get(section).copied().unwrap_or(self.last_line)
    }

    fn required(&self, section: &str, key: &str) -> Result<&Entry> {
        self.get(section, key).ok_or_else(|| Error::Parse {
            line: self.anchor(section),
            message: format!("missing required key `{key}` in [{section}]"),
        })
    }

    fn number(&self, section: &str, key: &str) -> Result<f64> {
        let e = self.required(section, key)?;
        parse_number(&e.value, e.line)
    }

    fn optional_number(&self, section: &str, key: &str) -> Result<Option<f64>> {
        self.get(section, key)
            .map(|e| parse_number(&e.value, e.line))
            .transpose()
    }
}

fn parse_number(text: &str, line: usize) -> Result<f64> {
    let bad = || Error::Parse {
        line,
        message: format!("`{text}` is not a number"),
    };
    let x = match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

fn lex(text: &str) -> Result<Raw> {
    let mut raw = Raw {
        entries: BTreeMap::new(),
        headers: BTreeMap::new(),
        last_line: 1,
    };
    let mut section: Option<String> = None;
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        raw.last_line = line;
        let body = full.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                line,
                message: format!("malformed section header `{body}`"),
            })?;
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown section [{name}]"),
                });
            }
            if raw.headers.insert(name.to_string(), line).is_some() {
                return Err(Error::Parse {
                    line,
                    message: format!("section [{name}] appears twice"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, found `{body}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(sec) = section.as_deref() else {
            return Err(Error::Parse {
                line,
                message: format!("key `{key}` appears before any section header"),
            });
        };
        let allowed = SECTIONS.iter().find(|(s, _)| *s == sec).unwrap().1;
        if !allowed.contains(&key) {
            return Err(Error::Parse {
                line,
                message: format!("unknown key `{key}` in [{sec}]"),
            });
        }
        if value.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("key `{key}` has no value"),
            });
        }
        let entry = Entry {
            line,
            value: value.to_string(),
        };
        if raw
            .entries
            .insert((sec.to_string(), key.to_string()), entry)
            .is_some()
        {
            return Err(Error::Parse {
                line,
                message: format!("key `{key}` repeated in [{sec}]"),
            });
        }
    }
    Ok(raw)
}

fn invalid(field: &str, constraint: impl Into<String>) -> Error {
    Error::Validation {
        field: field.to_string(),
        constraint: constraint.into(),
    }
}

fn parse_eos(raw: &Raw) -> Result<EosSpec> {
    let kind = raw.required("eos", "kind")?;
    let (eos, keys): (EosSpec, &[&str]) = match kind.value.as_str() {
        "linear" => (
            EosSpec::Linear {
                kappa: raw.number("eos", "kappa")?,
            },
            &["kind", "kappa"],
        ),
        "anomalous_window" => (
            EosSpec::AnomalousWindow {
                kappa_out: raw.number("eos", "kappa_out")?,
                kappa_in: raw.number("eos", "kappa_in")?,
                eps_lo: raw.number("eos", "eps_lo")?,
                eps_hi: raw.number("eos", "eps_hi")?,
                smoothing_width: raw.number("eos", "smoothing_width")?,
            },
            &[
                "kind",
                "kappa_out",
                "kappa_in",
                "eps_lo",
                "eps_hi",
                "smoothing_width",
            ],
        ),
        other => {
            return Err(Error::Parse {
                line: kind.line,
                message: format!("unknown eos kind `{other}` (expected linear or anomalous_window)"),
            })
        }
    };
    for ((sec, key), e) in &raw.entries {
        if sec == "eos" && !keys.contains(&key.as_str()) {
            return Err(Error::Parse {
                line: e.line,
                message: format!("key `{key}` does not apply to eos kind {}", kind.value),
            });
        }
    }
    eos.validate().map_err(|e| invalid("eos", e.to_string()))?;
    Ok(eos)
}

fn positive(field: &str, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(field, format!("must be positive, got {x}")))
    }
}

/// Parses and validates a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw = lex(text)?;
    let name = raw
        .get("scenario", "name")
        .map_or_else(|| "scenario".to_string(), |e| e.value.clone());
    if !name
        .chars()
        .all(|ch| ch.is_ascii_alphanumeric() || ch == '-' || ch == '_')
    {
        return Err(invalid("scenario.name", "letters, digits, `-` and `_` only"));
    }
    let eos = parse_eos(&raw)?;

    let p = raw.optional_number("upstream", "p")?;
    let eps = raw.optional_number("upstream", "eps")?;
    let thermo = match (p, eps) {
        (Some(p), None) => Thermo::Pressure(p),
        (None, Some(e)) => Thermo::EnergyDensity(e),
        (Some(_), Some(_)) => return Err(invalid("upstream", "exactly one of p or eps, not both")),
        (None, None) => return Err(invalid("upstream", "exactly one of p or eps is required")),
    };
    let upstream = UpstreamSpec {
        u1: raw.number("upstream", "u1")?,
        h1: raw.number("upstream", "h1")?,
        h2: raw.number("upstream", "h2")?,
        n: positive("upstream.n", raw.number("upstream", "n")?)?,
        thermo,
    };
    let mu_over_4pi = positive("physics.mu_over_4pi", raw.number("physics", "mu_over_4pi")?)?;
    let viscosity = ViscosityPair::new(raw.number("viscosity", "xi")?, raw.number("viscosity", "eta")?)
        .map_err(|e| invalid("viscosity", e.to_string()))?;

    let mut numerics = Numerics::default();
    if let Some(e) = raw.get("numerics", "grid_n") {
        numerics.grid_n = e.value.parse().map_err(|_| Error::Parse {
            line: e.line,
            message: format!("grid_n must be a positive integer, got `{}`", e.value),
        })?;
        if numerics.grid_n < 32 {
            return Err(invalid("numerics.grid_n", "must be at least 32"));
        }
    }
    if let Some(x) = raw.optional_number("numerics", "ode_tol")? {
        numerics.ode_tol = positive("numerics.ode_tol", x)?;
    }
    if let Some(x) = raw.optional_number("numerics", "shoot_delta")? {
        numerics.shoot_delta = positive("numerics.shoot_delta", x)?;
    }
    numerics.locus_range = LocusRange {
        y_min: raw.optional_number("numerics", "y_min")?,
        y_max: raw.optional_number("numerics", "y_max")?,
        v_min: raw.optional_number("numerics", "v_min")?,
        v_max: raw.optional_number("numerics", "v_max")?,
    };

    let target = match (
        raw.optional_number("target", "y")?,
        raw.optional_number("target", "v")?,
    ) {
        (Some(y), Some(v)) => Some(PhasePoint::new(positive("target.y", y)?, v)),
        (None, None) => None,
        _ => return Err(invalid("target", "give both y and v, or neither")),
    };

    let sweep_ratios = match raw.get("sweep", "ratios") {
        Some(e) => e
            .value
            .split(',')
            .map(|t| parse_number(t.trim(), e.line).and_then(|r| positive("sweep.ratios", r)))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };

    let path = |key: &str| raw.get("outputs", key).map(|e| PathBuf::from(&e.value));
    let outputs = Outputs {
        csv_path: path("csv"),
        svg_path: path("svg"),
        report_path: path("report"),
    };

    let scenario = Scenario {
        name,
        eos,
        upstream,
        mu_over_4pi,
        viscosity,
        numerics,
        target,
        sweep_ratios,
        outputs,
    };
    scenario
        .fluid_state()
        .map_err(|e| invalid("upstream", e.to_string()))?;
    Ok(scenario)
}
