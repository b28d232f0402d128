//! Flat key–value run configuration.
//!
//! Files are TOML; keys may be written dotted (`model.m1 = 1.0`) or grouped
//! under `[model]` tables, and are flattened to dotted names before lookup.
//! Every key must be known, and `init.*` keys must belong to `init.kind`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use toml::Value;

use crate::error::{Error, Result};
use crate::gn;
use crate::sim::{Recording, StopCriteria};
use crate::spec::{DomainGeom, InitialData, ProblemInput, Shape};

const KNOWN_KEYS: &[&str] = &[
    "geometry.n",
    "geometry.shape",
    "geometry.R",
    "model.m1",
    "model.m2",
    "model.alpha",
    "model.chi",
    "proof.p0",
    "proof.q1",
    "proof.q2",
    "proof.Cgn",
    "init.kind",
    "init.value",
    "init.amplitude",
    "init.width",
    "init.center",
    "init.values",
    "init.kappa",
    "run.N",
    "run.cfl",
    "run.t_end",
    "run.thresholds",
    "run.dt_floor",
    "run.dt_max",
    "run.max_steps",
    "run.record_dt",
    "run.record_every",
    "run.checkpoints",
    "run.output_dir",
    "gn.seed",
    "gn.samples",
    "verify.growth_factor",
    "verify.residual_tol",
    "verify.smooth_fraction",
    "verify.refine",
    "verify.apriori_factor",
    "verify.inject_e8_zero",
];

/// Knobs of the verification pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Required `lp0` growth across the ladder.
    pub growth_factor: f64,
    /// Bound on the relative identity residual over smooth segments.
    pub residual_tol: f64,
    /// Smooth segments end at this fraction of the first ladder crossing.
    pub smooth_fraction: f64,
    /// Repeat the run at half resolution to check residual convergence.
    pub refine: bool,
    /// `L = apriori_factor · max lp0` for the a priori replay.
    pub apriori_factor: f64,
    /// Zero out `E8` before the margin check (harness sensitivity test).
    pub inject_e8_zero: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            growth_factor: crate::diagnostics::DEFAULT_GROWTH_FACTOR,
            residual_tol: 0.05,
            smooth_fraction: 0.5,
            refine: true,
            apriori_factor: 1.01,
            inject_e8_zero: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub problem: ProblemInput,
    pub cells: usize,
    pub stop: StopCriteria,
    pub recording: Recording,
    pub output_dir: PathBuf,
    pub gn_seed: u64,
    pub gn_samples: usize,
    pub verify: VerifyOptions,
}

fn flatten(prefix: &str, value: &Value, out: &mut BTreeMap<String, Value>) {
    match value {
        Value::Table(t) => {
            for (k, v) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

struct Keys(BTreeMap<String, Value>);

impl Keys {
    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => Err(Error::Config(format!("{key}: expected a number, got {v}"))),
        }
    }

    fn req_float(&self, key: &str) -> Result<f64> {
        self.float(key)?.ok_or_else(|| Error::Config(format!("missing required key {key}")))
    }

    fn uint(&self, key: &str) -> Result<Option<u64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(v) => Err(Error::Config(format!("{key}: expected a nonnegative integer, got {v}"))),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(Error::Config(format!("{key}: expected a string, got {v}"))),
        }
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(v) => Err(Error::Config(format!("{key}: expected a boolean, got {v}"))),
        }
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    v => Err(Error::Config(format!("{key}: expected numbers, got {v}"))),
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(v) => Err(Error::Config(format!("{key}: expected an array, got {v}"))),
        }
    }
}

fn parse_init(keys: &Keys) -> Result<InitialData> {
    let kind = keys.string("init.kind")?.ok_or_else(|| Error::Config("missing required key init.kind".into()))?;
    let allowed: &[&str] = match kind.as_str() {
        "constant" => &["init.value"],
        "gaussian" => &["init.amplitude", "init.width", "init.center"],
        "table" => &["init.values"],
        other => return Err(Error::Config(format!("init.kind: unknown kind {other:?}"))),
    };
    for key in keys.0.keys().filter(|k| k.starts_with("init.")) {
        if !matches!(key.as_str(), "init.kind" | "init.kappa") && !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!("{key} does not apply to init.kind = {kind:?}")));
        }
    }
    Ok(match kind.as_str() {
        "constant" => InitialData::Constant { value: keys.req_float("init.value")? },
        "gaussian" => InitialData::Gaussian {
            amplitude: keys.req_float("init.amplitude")?,
            width: keys.req_float("init.width")?,
            center: keys.float("init.center")?.unwrap_or(0.0),
        },
        _ => InitialData::Table {
            values: keys.floats("init.values")?.ok_or_else(|| Error::Config("missing required key init.values".into()))?,
        },
    })
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let root: Value = text.parse::<toml::Table>().map(Value::Table).map_err(|e| Error::Config(e.to_string()))?;
        let mut flat = BTreeMap::new();
        flatten("", &root, &mut flat);
        if let Some(unknown) = flat.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key {unknown}")));
        }
        let keys = Keys(flat);

        let dim = keys.uint("geometry.n")?.ok_or_else(|| Error::Config("missing required key geometry.n".into()))? as usize;
        let shape = match keys.string("geometry.shape")?.as_deref() {
            Some("interval") => Shape::Interval,
            Some("ball") => Shape::Ball,
            None if dim == 1 => Shape::Interval,
            None => Shape::Ball,
            Some(other) => return Err(Error::Config(format!("geometry.shape: unknown shape {other:?}"))),
        };
        let geom = DomainGeom::new(dim, shape, keys.req_float("geometry.R")?)?;
        let problem = ProblemInput {
            geom,
            m1: keys.req_float("model.m1")?,
            m2: keys.req_float("model.m2")?,
            alpha: keys.req_float("model.alpha")?,
            chi: keys.req_float("model.chi")?,
            u0: parse_init(&keys)?,
            p0: keys.float("proof.p0")?,
            q1: keys.float("proof.q1")?,
            q2: keys.float("proof.q2")?,
            cgn: keys.float("proof.Cgn")?,
            kappa: keys.float("init.kappa")?,
        };

        let cells = keys.uint("run.N")?.unwrap_or(512) as usize;
        if cells < 8 {
            return Err(Error::Config(format!("run.N must be at least 8, got {cells}")));
        }
        let defaults = StopCriteria::default();
        let stop = StopCriteria {
            t_end: keys.float("run.t_end")?.unwrap_or(defaults.t_end),
            thresholds: keys.floats("run.thresholds")?.unwrap_or(defaults.thresholds),
            dt_floor: keys.float("run.dt_floor")?.unwrap_or(defaults.dt_floor),
            dt_max: keys.float("run.dt_max")?.unwrap_or(defaults.dt_max),
            max_steps: keys.uint("run.max_steps")?.map(|x| x as usize).unwrap_or(defaults.max_steps),
            cfl: keys.float("run.cfl")?.unwrap_or(defaults.cfl),
        };
        if !(stop.cfl > 0.0 && stop.cfl < 1.0) {
            return Err(Error::Config(format!("run.cfl must lie in (0, 1), got {}", stop.cfl)));
        }
        if !(stop.t_end > 0.0 && stop.dt_floor > 0.0 && stop.dt_max > 0.0) {
            return Err(Error::Config("run.t_end, run.dt_floor and run.dt_max must be positive".into()));
        }
        if stop.thresholds.iter().any(|x| !(*x > 0.0)) || stop.thresholds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("run.thresholds must be positive and strictly increasing".into()));
        }
        let record_dt = keys.float("run.record_dt")?;
        let record_every = keys.uint("run.record_every")?.map(|x| x as usize);
        if record_dt.is_some_and(|d| !(d > 0.0)) || record_every == Some(0) {
            return Err(Error::Config("record stride must be positive".into()));
        }
        let recording = Recording {
            record_every: if record_dt.is_none() { Some(record_every.unwrap_or(50)) } else { record_every },
            record_dt,
            checkpoints: keys.floats("run.checkpoints")?.unwrap_or_default(),
        };

        let dv = VerifyOptions::default();
        let verify = VerifyOptions {
            growth_factor: keys.float("verify.growth_factor")?.unwrap_or(dv.growth_factor),
            residual_tol: keys.float("verify.residual_tol")?.unwrap_or(dv.residual_tol),
            smooth_fraction: keys.float("verify.smooth_fraction")?.unwrap_or(dv.smooth_fraction),
            refine: keys.boolean("verify.refine")?.unwrap_or(dv.refine),
            apriori_factor: keys.float("verify.apriori_factor")?.unwrap_or(dv.apriori_factor),
            inject_e8_zero: keys.boolean("verify.inject_e8_zero")?.unwrap_or(dv.inject_e8_zero),
        };

        Ok(Self {
            problem,
            cells,
            stop,
            recording,
            output_dir: PathBuf::from(keys.string("run.output_dir")?.unwrap_or_else(|| "out".into())),
            gn_seed: keys.uint("gn.seed")?.unwrap_or(gn::DEFAULT_SEED),
            gn_samples: keys.uint("gn.samples")?.map(|x| x as usize).unwrap_or(gn::DEFAULT_SAMPLES),
            verify,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}
