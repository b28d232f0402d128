//! The working power `pbar` and the interpolation exponents derived from it.

use serde::Serialize;

use crate::error::{Error, Result};

/// The nine candidate lower limits for `pbar` (before the `+1` margin), in
/// their fixed order.
pub fn pbar_branches(m1: f64, m2: f64, dim: usize, p0: f64, q1: f64, q2: f64) -> Result<[f64; 9]> {
    let n = dim as f64;
    if q1 == n + 2.0 {
        return Err(Error::Exponent("q1 = n+2 makes a branch singular".into()));
    }
    if q2 == 1.0 {
        return Err(Error::Exponent("q2 = 1 makes a branch singular".into()));
    }
    let q2_den = 1.0 - (n / (n + 2.0)) * q2 / (q2 - 1.0);
    if q2_den == 0.0 {
        return Err(Error::Exponent("q2 branch denominator vanishes".into()));
    }
    Ok([
        p0,
        1.0 - m1,
        3.0 - m2,
        2.0 - m1 - 2.0 / n,
        p0 - m2 + 1.0,
        q1,
        q1 * (m2 - 1.0),
        1.0 - m1 * ((n + 1.0) * q1 - (n + 2.0)) / (q1 - (n + 2.0)),
        1.0 - m1 / q2_den,
    ])
}

/// `pbar = max(branches) + 1`.
pub fn compute_pbar(m1: f64, m2: f64, dim: usize, p0: f64, q1: f64, q2: f64) -> Result<f64> {
    let branches = pbar_branches(m1, m2, dim, p0, q1, q2)?;
    Ok(branches.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentSet {
    pub pbar: f64,
    pub k: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub beta: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub delta: f64,
    pub lambda: f64,
}

fn positive_den(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Exponent(format!("{name} denominator is {v}")))
    }
}

/// Direct quotient form of `beta` (equal to `k a2 / 2`).
pub fn beta_direct(m1: f64, m2: f64, dim: usize, p0: f64, p: f64) -> f64 {
    let n = dim as f64;
    ((p + m2 - 1.0) / (2.0 * p0) - 0.5) / ((p + m1 - 1.0) / (2.0 * p0) + 1.0 / n - 0.5)
}

/// `(sigma, delta, gamma)` from `k`, `a3` and `p`.
pub fn sigma_delta_gamma(k: f64, a3: f64, p: f64, m2: f64) -> (f64, f64, f64) {
    let sigma = k * a3 / 2.0;
    let delta = (p + m2 - 1.0) / p;
    let gamma = delta * (1.0 - a3) / (1.0 - sigma);
    (sigma, delta, gamma)
}

pub fn compute_exponents(m1: f64, m2: f64, dim: usize, p0: f64, pbar: f64) -> Result<ExponentSet> {
    let n = dim as f64;
    let p = pbar;
    let half = (p + m1 - 1.0) / 2.0;
    let k = 2.0 * (p + m2 - 1.0) / (2.0 * positive_den("k", half)?);
    let a1 = half * (1.0 - 1.0 / p) / positive_den("a1", half + 1.0 / n - 0.5)?;
    let over_p0 = (p + m1 - 1.0) / (2.0 * p0);
    let a2 = (over_p0 - 1.0 / k) / positive_den("a2", over_p0 + 1.0 / n - 0.5)?;
    let over_p = (p + m1 - 1.0) / (2.0 * p);
    let a3 = (over_p - 1.0 / k) / positive_den("a3", over_p + 1.0 / n - 0.5)?;
    let beta = k * a2 / 2.0;
    let (sigma, delta, gamma) = sigma_delta_gamma(k, a3, p, m2);
    positive_den("gamma", 1.0 - sigma)?;
    let lambda = (p + m1 - 1.0) / (p * positive_den("lambda", a1)?);
    Ok(ExponentSet { pbar, k, a1, a2, a3, beta, sigma, gamma, delta, lambda })
}

/// The relations every valid exponent set must satisfy.
pub const RELATIONS: [&str; 8] = [
    "p_gt_half_n_one_minus_m1",
    "a1_in_unit_interval",
    "beta_in_unit_interval",
    "inv_k_gt_half_minus_inv_n",
    "a2_in_unit_interval",
    "a3_in_unit_interval",
    "sigma_in_unit_interval",
    "gamma_gt_delta_gt_one",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationCheck {
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub checks: Vec<RelationCheck>,
    pub all_pass: bool,
}

impl InequalityReport {
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect()
    }
}

/// Evaluates each relation as a strict predicate with no tolerance.
pub fn check_exponent_inequalities(e: &ExponentSet, m1: f64, dim: usize) -> InequalityReport {
    let n = dim as f64;
    let unit = |x: f64| 0.0 < x && x < 1.0;
    let verdicts = [
        e.pbar > n / 2.0 * (1.0 - m1),
        unit(e.a1),
        unit(e.beta),
        1.0 / e.k > 0.5 - 1.0 / n,
        unit(e.a2),
        unit(e.a3),
        unit(e.sigma),
        e.gamma > e.delta && e.delta > 1.0,
    ];
    let checks: Vec<_> = RELATIONS
        .iter()
        .zip(verdicts)
        .map(|(&name, pass)| RelationCheck { name, pass })
        .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    InequalityReport { checks, all_pass }
}
