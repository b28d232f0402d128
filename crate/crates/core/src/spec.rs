//! Problem instance: geometry, model parameters, initial data and the free
//! proof parameters, validated against the blow-up regime.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::simpson;

/// Nodes used by [`mean_mass`]'s composite Simpson rule.
pub const MEAN_MASS_NODES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `[-R, R]`, only for `n = 1`.
    Interval,
    /// Radius-`R` ball, treated radially.
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainGeom {
    pub dim: usize,
    pub shape: Shape,
    pub radius: f64,
}

/// Surface measure of the unit sphere `S^{n-1}`.
pub fn sphere_measure(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("unsupported dimension {dim}"),
    }
}

impl DomainGeom {
    pub fn new(dim: usize, shape: Shape, radius: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidSpec(format!("dimension {dim} not in {{1,2,3}}")));
        }
        if shape == Shape::Interval && dim != 1 {
            return Err(Error::InvalidSpec("interval geometry requires n = 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidSpec(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { dim, shape, radius })
    }

    /// `|Ω|`: `2R` for the interval, `ω_n R^n` for the ball.
    pub fn measure(&self) -> f64 {
        sphere_measure(self.dim) * self.radius.powi(self.dim as i32) / self.dim as f64
    }

    /// Radial weight `|S^{n-1}| r^{n-1}`.
    pub fn radial_weight(&self, r: f64) -> f64 {
        sphere_measure(self.dim) * r.powi(self.dim as i32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitialData {
    Constant { value: f64 },
    /// `amplitude * exp(-((r - center) / width)^2)`.
    Gaussian { amplitude: f64, width: f64, center: f64 },
    /// Samples on a uniform radial grid over `[0, R]`, linearly interpolated.
    Table { values: Vec<f64> },
}

impl InitialData {
    pub fn eval(&self, r: f64, radius: f64) -> f64 {
        match self {
            InitialData::Constant { value } => *value,
            InitialData::Gaussian { amplitude, width, center } => {
                let z = (r - center) / width;
                amplitude * (-z * z).exp()
            }
            InitialData::Table { values } => {
                let last = values.len() - 1;
                let s = (r / radius).clamp(0.0, 1.0) * last as f64;
                let i = (s.floor() as usize).min(last.saturating_sub(1));
                let frac = s - i as f64;
                if last == 0 {
                    values[0]
                } else {
                    values[i] * (1.0 - frac) + values[i + 1] * frac
                }
            }
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match self {
            InitialData::Constant { value } if !(*value >= 0.0 && value.is_finite()) => {
                bad("constant initial value must be nonnegative")
            }
            InitialData::Gaussian { amplitude, width, center } => {
                if !(*amplitude >= 0.0 && amplitude.is_finite()) {
                    bad("gaussian amplitude must be nonnegative")
                } else if !(*width > 0.0 && width.is_finite()) {
                    bad("gaussian width must be positive")
                } else if !center.is_finite() {
                    bad("gaussian center must be finite")
                } else {
                    Ok(())
                }
            }
            InitialData::Table { values } => {
                if values.len() < 2 {
                    bad("table initial data needs at least two samples")
                } else if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                    bad("table initial data must be nonnegative and finite")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of checking the blow-up restrictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupCheck {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// `m2 > m1 + 2/n`, `m1 ≤ 1`, `m2 > 1`.
pub fn validate_blowup_restrictions(m1: f64, m2: f64, dim: usize) -> BlowupCheck {
    let mut violations = Vec::new();
    if !(m2 > m1 + 2.0 / dim as f64) {
        violations.push("m2>m1+2/n".to_string());
    }
    if !(m1 <= 1.0) {
        violations.push("m1≤1".to_string());
    }
    if !(m2 > 1.0) {
        violations.push("m2>1".to_string());
    }
    BlowupCheck { ok: violations.is_empty(), violations }
}

/// Domain average of `u0` under the radial measure.
pub fn mean_mass(u0: &InitialData, geom: &DomainGeom) -> Result<f64> {
    let radius = geom.radius;
    let total = match u0 {
        InitialData::Constant { value } => value * geom.measure(),
        _ => simpson(
            |r| u0.eval(r, radius) * geom.radial_weight(r),
            0.0,
            radius,
            MEAN_MASS_NODES,
        ),
    };
    let mean = total / geom.measure();
    if mean <= 0.0 {
        return Err(Error::TrivialInitialData);
    }
    Ok(mean)
}

/// Interior defaults `(p0, q1, q2)` for the open ranges of the free proof
/// parameters.
pub fn default_free_parameters(m1: f64, m2: f64, dim: usize) -> (f64, f64, f64) {
    let n = dim as f64;
    (n / 2.0 * (m2 - m1) + 1.0, n + 3.0, (n + 2.0) / 2.0 + 1.0)
}

/// Unvalidated problem description, as read from a config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemInput {
    pub geom: DomainGeom,
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub chi: f64,
    pub u0: InitialData,
    pub p0: Option<f64>,
    pub q1: Option<f64>,
    pub q2: Option<f64>,
    pub cgn: Option<f64>,
    /// Regularity index of `u0`; informational only.
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub geom: DomainGeom,
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub chi: f64,
    pub u0: InitialData,
    pub p0: f64,
    pub q1: f64,
    pub q2: f64,
    /// User-supplied Gagliardo–Nirenberg constant, if any.
    pub cgn: Option<f64>,
    pub kappa: Option<f64>,
    /// Mean mass `M`.
    pub mean_mass: f64,
}

impl ProblemSpec {
    pub fn validate(input: ProblemInput) -> Result<Self> {
        let ProblemInput { geom, m1, m2, alpha, chi, u0, p0, q1, q2, cgn, kappa } = input;
        let geom = DomainGeom::new(geom.dim, geom.shape, geom.radius)?;
        for (name, v) in [("m1", m1), ("m2", m2), ("alpha", alpha), ("chi", chi)] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite")));
            }
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidSpec("alpha must be positive".into()));
        }
        if !(chi > 0.0) {
            return Err(Error::InvalidSpec("chi must be positive".into()));
        }
        let bu = validate_blowup_restrictions(m1, m2, geom.dim);
        if !bu.ok {
            return Err(Error::BlowupRestrictions(bu.violations));
        }
        let (dp0, dq1, dq2) = default_free_parameters(m1, m2, geom.dim);
        let spec = Self {
            geom,
            m1,
            m2,
            alpha,
            chi,
            p0: p0.unwrap_or(dp0),
            q1: q1.unwrap_or(dq1),
            q2: q2.unwrap_or(dq2),
            cgn,
            kappa,
            mean_mass: 0.0,
            u0,
        };
        let violations = spec.range_violations();
        if !violations.is_empty() {
            return Err(Error::InvalidSpec(violations.join(", ")));
        }
        if let Some(c) = cgn {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidSpec("Cgn must be positive".into()));
            }
        }
        spec.u0.check()?;
        let mean_mass = mean_mass(&spec.u0, &spec.geom)?;
        Ok(Self { mean_mass, ..spec })
    }

    /// Free-parameter range constraints that fail for this spec.
    pub fn range_violations(&self) -> Vec<String> {
        let n = self.geom.dim as f64;
        let mut v = Vec::new();
        if !(self.p0 > n / 2.0 * (self.m2 - self.m1)) {
            v.push(format!("p0 > (n/2)(m2-m1) fails for p0 = {}", self.p0));
        }
        if !(self.q1 > n + 2.0) {
            v.push(format!("q1 > n+2 fails for q1 = {}", self.q1));
        }
        if !(self.q2 > (n + 2.0) / 2.0) {
            v.push(format!("q2 > (n+2)/2 fails for q2 = {}", self.q2));
        }
        v
    }

    /// Re-checks every invariant of an accepted spec.
    pub fn revalidate(&self) -> bool {
        self.alpha > 0.0
            && self.chi > 0.0
            && validate_blowup_restrictions(self.m1, self.m2, self.geom.dim).ok
            && self.range_violations().is_empty()
            && self.mean_mass > 0.0
    }

    pub fn measure(&self) -> f64 {
        self.geom.measure()
    }
}
