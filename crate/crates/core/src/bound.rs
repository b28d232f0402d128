//! Lower bounds for the blow-up time from the ODI `Φ' ≤ Ψ(Φ)`,
//! `Ψ(τ) = E8 τ^γ + E9 τ^δ + E5`.
//!
//! The Osgood integral `∫_{Φ(0)}^∞ dτ / Ψ(τ)` is split at a cut well beyond
//! the point where `E8 τ^γ` dominates. The head is integrated adaptively in
//! `ln τ`; the tail is integrated in `t = (τ/cut)^{1-γ}`, which turns the
//! pure-power part into a constant integrand, and is bracketed analytically by
//! `E8 τ^γ ≤ Ψ(τ) ≤ (E8 + ε') τ^γ` on `[cut, ∞)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::quadrature::integrate;

/// Relative tolerance of both adaptive pieces.
pub const QUAD_REL_TOL: f64 = 1e-12;
const MAX_SEGMENTS: usize = 4000;
/// Tail cut as a multiple of the dominance threshold.
pub const TAIL_FACTOR: f64 = 1e3;

/// `Φ(0) = (1/p) Σ μ_i (u_i + α)^p`.
pub fn phi0(grid: &RadialGrid, u0: &[f64], p: f64, alpha: f64) -> f64 {
    grid.integrate_map(u0, |u| (u + alpha).powf(p)) / p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdiCoefficients {
    pub e8: f64,
    pub e9: f64,
    pub e5: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl OdiCoefficients {
    pub fn psi(&self, tau: f64) -> f64 {
        self.e8 * tau.powf(self.gamma) + self.e9 * tau.powf(self.delta) + self.e5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OsgoodBound {
    pub value: f64,
    pub error_estimate: f64,
    pub tail_cut: f64,
    pub tail_value: f64,
    pub tail_lower: f64,
    pub tail_upper: f64,
}

impl OsgoodBound {
    /// `value - error_estimate`, the side safe to quote as a lower bound.
    pub fn conservative(&self) -> f64 {
        self.value - self.error_estimate
    }
}

pub fn osgood_lower_bound(c: &OdiCoefficients, phi0: f64) -> Result<OsgoodBound> {
    let OdiCoefficients { e8, e9, e5, gamma, delta } = *c;
    if !(gamma > 1.0) {
        return Err(Error::NotOsgood(gamma));
    }
    if !(e8 > 0.0 && phi0 > 0.0 && e9 >= 0.0 && e5 >= 0.0 && delta < gamma) {
        return Err(Error::InvalidSpec(format!(
            "Osgood bound needs E8 > 0, Φ(0) > 0, E9, E5 ≥ 0, δ < γ; got {c:?}, Φ(0) = {phi0}"
        )));
    }
    let dominance = phi0
        .max((e9 / e8).powf(1.0 / (gamma - delta)))
        .max((e5 / e8).powf(1.0 / gamma));
    let cut = dominance * TAIL_FACTOR;

    let head = integrate(
        |s| {
            let tau = s.exp();
            tau / c.psi(tau)
        },
        phi0.ln(),
        cut.ln(),
        QUAD_REL_TOL,
        0.0,
        MAX_SEGMENTS,
    );

    let scale = cut.powf(1.0 - gamma) / (gamma - 1.0);
    let tail = integrate(
        |t| {
            let tau = cut * t.powf(-1.0 / (gamma - 1.0));
            1.0 / (e8 + e9 * tau.powf(delta - gamma) + e5 * tau.powf(-gamma))
        },
        0.0,
        1.0,
        QUAD_REL_TOL,
        0.0,
        MAX_SEGMENTS,
    );
    let eps_prime = e9 * cut.powf(delta - gamma) + e5 * cut.powf(-gamma);
    let tail_lower = scale / (e8 + eps_prime);
    let tail_upper = scale / e8;
    let tail_value = (scale * tail.value).clamp(tail_lower, tail_upper);
    let tail_err = (scale * tail.abs_error).min(tail_upper - tail_lower);

    Ok(OsgoodBound {
        value: head.value + tail_value,
        error_estimate: head.abs_error + tail_err,
        tail_cut: cut,
        tail_value,
        tail_lower,
        tail_upper,
    })
}

/// `Φ(0)^{1-γ} / (H (γ-1))` with `H = E8 + E9 Φ(0)^{δ-γ} + E10 Φ(0)^{1/p-γ}`.
pub fn explicit_lower_bound(e8: f64, e9: f64, e10: f64, gamma: f64, delta: f64, pbar: f64, phi0: f64) -> f64 {
    let h = e8 + e9 * phi0.powf(delta - gamma) + e10 * phi0.powf(1.0 / pbar - gamma);
    phi0.powf(1.0 - gamma) / (h * (gamma - 1.0))
}

/// Time at which the comparison solution of `Φ' = Ψ(Φ)`, started from
/// `Φ(0)`, reaches `phi`.
pub fn comparison_time(c: &OdiCoefficients, phi0: f64, phi: f64) -> f64 {
    if phi <= phi0 {
        return 0.0;
    }
    integrate(|s| s.exp() / c.psi(s.exp()), phi0.ln(), phi.ln(), 1e-10, 0.0, MAX_SEGMENTS).value
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub phi0: f64,
    pub t_osgood: f64,
    pub t_osgood_error: f64,
    /// `t_osgood - t_osgood_error`.
    pub t_osgood_conservative: f64,
    pub t_explicit: f64,
    pub tail_cut: f64,
    pub tail_lower: f64,
    pub tail_upper: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{DomainGeom, Shape};
    use std::f64::consts::PI;

    #[test]
    fn phi0_constant_fields() {
        let g = RadialGrid::new(&DomainGeom::new(2, Shape::Ball, 1.0).unwrap(), 64);
        let zero = vec![0.0; g.cells()];
        assert!((phi0(&g, &zero, 8.5, 1.0) - PI / 8.5).abs() < 1e-13);
        let m = vec![0.7; g.cells()];
        let exact = PI * 1.7f64.powf(8.5) / 8.5;
        assert!((phi0(&g, &m, 8.5, 1.0) - exact).abs() <= 1e-13 * exact);
    }

    #[test]
    fn pure_power_closed_form() {
        let c = OdiCoefficients { e8: 1.0, e9: 0.0, e5: 0.0, gamma: 2.0, delta: 1.5 };
        let b = osgood_lower_bound(&c, 1.0).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12);
        assert_eq!(b.tail_lower, b.tail_upper);
    }

    #[test]
    fn rejects_non_osgood() {
        let c = OdiCoefficients { e8: 1.0, e9: 0.0, e5: 0.0, gamma: 1.0, delta: 0.5 };
        assert!(matches!(osgood_lower_bound(&c, 1.0), Err(Error::NotOsgood(_))));
    }

    #[test]
    fn homogeneous_scaling() {
        let c = OdiCoefficients { e8: 1.3, e9: 0.4, e5: 2.0, gamma: 1.7, delta: 1.2 };
        let b1 = osgood_lower_bound(&c, 0.5).unwrap().value;
        let c3 = OdiCoefficients { e8: 3.0 * c.e8, e9: 3.0 * c.e9, e5: 3.0 * c.e5, ..c };
        let b3 = osgood_lower_bound(&c3, 0.5).unwrap().value;
        assert!((b1 / b3 - 3.0).abs() < 1e-10);
    }

    #[test]
    fn explicit_reduces_to_pure_power() {
        let t = explicit_lower_bound(1.0, 0.0, 0.0, 2.0, 1.5, 8.5, 1.0);
        assert_eq!(t, 1.0);
    }

    #[test]
    fn tail_lies_in_sandwich() {
        let c = OdiCoefficients { e8: 1.0, e9: 1.0, e5: 1.0, gamma: 2.0, delta: 1.5 };
        let b = osgood_lower_bound(&c, 1.0).unwrap();
        assert!(b.tail_lower <= b.tail_value && b.tail_value <= b.tail_upper);
        assert_eq!(b.tail_cut, 1e3);
    }

    #[test]
    fn comparison_time_approaches_bound() {
        let c = OdiCoefficients { e8: 1.0, e9: 0.0, e5: 0.0, gamma: 2.0, delta: 1.5 };
        // Φ' = Φ², Φ(0) = 1: t(Φ) = 1 - 1/Φ.
        assert!((comparison_time(&c, 1.0, 4.0) - 0.75).abs() < 1e-9);
        assert_eq!(comparison_time(&c, 1.0, 0.5), 0.0);
    }
}
