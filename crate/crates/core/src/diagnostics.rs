//! Energy functional and integral terms along a trace, and the numerical
//! checks built on them: the energy identity residual, the two differential
//! inequality margins, `L^{p0}` growth across the blow-up ladder, and the a
//! priori `Φ` bound on bounded runs.

use serde::{Deserialize, Serialize};

use crate::bound::OdiCoefficients;
use crate::cascade::{EnergyConstants, LpPathConstants};
use crate::grid::RadialGrid;
use crate::sim::RadialState;

/// One trace row. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub t: f64,
    pub dt: f64,
    pub linf: f64,
    pub lp0: f64,
    pub phi: f64,
    pub grad_term: f64,
    pub pw1: f64,
    pub pw2: f64,
    pub pw3: f64,
    pub mass: f64,
    pub vmean: f64,
    pub crossdiff_q1: f64,
    pub clamped_mass_cum: f64,
}

pub const TRACE_COLUMNS: [&str; 13] = [
    "t",
    "dt",
    "linf",
    "lp0",
    "phi",
    "grad_term",
    "pw1",
    "pw2",
    "pw3",
    "mass",
    "vmean",
    "crossdiff_q1",
    "clamped_mass_cum",
];

/// Exponents and model parameters the row integrals depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowParams {
    pub pbar: f64,
    pub p0: f64,
    pub q1: f64,
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
}

pub fn energy_row(state: &RadialState, grid: &RadialGrid, rp: &RowParams) -> EnergyRow {
    let RowParams { pbar: p, p0, q1, m1, m2, alpha } = *rp;
    let u = &state.u;
    let shifted = |e: f64| grid.integrate_map(u, |x| (x + alpha).powf(e));
    let w: Vec<f64> = u.iter().map(|x| (x + alpha).powf(0.5 * (p + m1 - 1.0))).collect();
    let vr = &state.potential.vr;
    let cross = (1..grid.cells())
        .map(|j| {
            let uf = 0.5 * (u[j - 1] + u[j]);
            let flux = uf * (uf + alpha).powf(m2 - 2.0) * vr[j];
            grid.face_areas[j] * grid.h * flux.abs().powf(q1)
        })
        .sum::<f64>()
        .powf(1.0 / q1);
    EnergyRow {
        t: state.t,
        dt: state.dt_last,
        linf: state.linf(),
        lp0: grid.integrate_map(u, |x| x.abs().powf(p0)).powf(1.0 / p0),
        phi: shifted(p) / p,
        grad_term: grid.gradient_energy(&w),
        pw1: shifted(p + m2 - 1.0),
        pw2: shifted(p + m2 - 2.0),
        pw3: shifted(p + m2 - 3.0),
        mass: state.mass(grid),
        vmean: grid.mean(&state.potential.v),
        crossdiff_q1: cross,
        clamped_mass_cum: state.clamped_mass_cum,
    }
}

pub fn energy_series<'a>(
    states: impl IntoIterator<Item = &'a RadialState>,
    grid: &RadialGrid,
    rp: &RowParams,
) -> Vec<EnergyRow> {
    states.into_iter().map(|s| energy_row(s, grid, rp)).collect()
}

/// Right-hand side of the energy identity at one row, and the sum of the
/// magnitudes of its terms.
pub fn identity_rhs(row: &EnergyRow, en: &EnergyConstants) -> (f64, f64) {
    let terms = [-en.e0 * row.grad_term, en.e1 * row.pw1, -en.e2 * row.pw2, en.e3 * row.pw3, en.e4];
    (terms.iter().sum(), terms.iter().map(|x| x.abs()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub t0: f64,
    pub t1: f64,
    /// `ΔΦ / Δt`.
    pub rate: f64,
    /// Endpoint average of the identity's right-hand side.
    pub rhs: f64,
    pub raw: f64,
    /// Endpoint average of the summed term magnitudes.
    pub scale: f64,
    pub relative: f64,
}

/// Per-interval residual of the energy identity between consecutive rows.
pub fn identity_residual(rows: &[EnergyRow], en: &EnergyConstants) -> Vec<ResidualPoint> {
    rows.windows(2)
        .filter(|w| w[1].t > w[0].t)
        .map(|w| {
            let rate = (w[1].phi - w[0].phi) / (w[1].t - w[0].t);
            let (r0, s0) = identity_rhs(&w[0], en);
            let (r1, s1) = identity_rhs(&w[1], en);
            let rhs = 0.5 * (r0 + r1);
            let scale = 0.5 * (s0 + s1);
            let raw = rate - rhs;
            let relative = if scale > 0.0 { raw.abs() / scale } else { raw.abs() };
            ResidualPoint { t0: w[0].t, t1: w[1].t, rate, rhs, raw, scale, relative }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginPoint {
    pub t0: f64,
    pub t1: f64,
    /// `−E0 ∇-term + E1 pw1 + E5 − ΔΦ/Δt`, endpoint-averaged.
    pub ph: f64,
    /// `E8 Φ^γ + E9 Φ^δ + E5 − ΔΦ/Δt`, endpoint-averaged.
    pub odi: f64,
    pub tol: f64,
}

impl MarginPoint {
    pub fn pass(&self) -> bool {
        self.ph >= -self.tol && self.odi >= -self.tol
    }
}

/// Residual multiple used as the margin tolerance.
pub const MARGIN_TOL_FACTOR: f64 = 3.0;

pub fn odi_margin(rows: &[EnergyRow], en: &EnergyConstants, odi: &OdiCoefficients) -> Vec<MarginPoint> {
    let residuals = identity_residual(rows, en);
    rows.windows(2)
        .filter(|w| w[1].t > w[0].t)
        .zip(residuals)
        .map(|(w, res)| {
            let ph_rhs = |r: &EnergyRow| -en.e0 * r.grad_term + en.e1 * r.pw1 + en.e5;
            let ph = 0.5 * (ph_rhs(&w[0]) + ph_rhs(&w[1])) - res.rate;
            let odi_m = 0.5 * (odi.psi(w[0].phi) + odi.psi(w[1].phi)) - res.rate;
            MarginPoint { t0: res.t0, t1: res.t1, ph, odi: odi_m, tol: MARGIN_TOL_FACTOR * res.raw.abs() }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpBlowupReport {
    pub applicable: bool,
    pub thresholds: Vec<f64>,
    pub lp0_at_crossings: Vec<f64>,
    pub strictly_increasing: bool,
    pub growth_ratio: f64,
    pub growth_factor: f64,
    pub pass: bool,
}

pub const DEFAULT_GROWTH_FACTOR: f64 = 2.0;

/// `crossing_rows[k]` is the row recorded when the `k`-th `‖u‖_∞` rung was
/// crossed.
pub fn lp_blowup_check(crossing_rows: &[EnergyRow], thresholds: &[f64], blew_up: bool, growth_factor: f64) -> LpBlowupReport {
    let lp: Vec<f64> = crossing_rows.iter().map(|r| r.lp0).collect();
    let applicable = blew_up && lp.len() >= 2 && lp.len() == thresholds.len();
    let strictly_increasing = lp.windows(2).all(|w| w[1] > w[0]);
    let growth_ratio = match (lp.first(), lp.last()) {
        (Some(a), Some(b)) if *a > 0.0 => b / a,
        _ => f64::NAN,
    };
    LpBlowupReport {
        applicable,
        thresholds: thresholds.to_vec(),
        lp0_at_crossings: lp,
        strictly_increasing,
        growth_ratio,
        growth_factor,
        pass: applicable && strictly_increasing && growth_ratio > growth_factor,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpAprioriReport {
    pub applicable: bool,
    pub l: f64,
    pub max_lp0: f64,
    pub l1: f64,
    pub max_phi: f64,
    pub pass: bool,
}

/// Checks `Φ ≤ L1` over the trace, provided `‖u‖_{p0} ≤ L` held throughout.
pub fn lp_apriori_replay(rows: &[EnergyRow], lp: &LpPathConstants) -> LpAprioriReport {
    let max_lp0 = rows.iter().map(|r| r.lp0).fold(0.0, f64::max);
    let max_phi = rows.iter().map(|r| r.phi).fold(0.0, f64::max);
    let applicable = !rows.is_empty() && max_lp0 <= lp.l;
    LpAprioriReport { applicable, l: lp.l, max_lp0, l1: lp.l1, max_phi, pass: applicable && max_phi <= lp.l1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{DomainGeom, Shape};
    use std::f64::consts::PI;

    fn disk(n: usize) -> RadialGrid {
        RadialGrid::new(&DomainGeom::new(2, Shape::Ball, 1.0).unwrap(), n)
    }

    const RP: RowParams = RowParams { pbar: 8.5, p0: 2.5, q1: 5.0, m1: 1.0, m2: 2.5, alpha: 1.0 };

    #[test]
    fn constant_state_row() {
        let g = disk(128);
        let s = RadialState::new(vec![0.5; 128], &g).unwrap();
        let row = energy_row(&s, &g, &RP);
        assert_eq!(row.grad_term, 0.0);
        let exact = PI * 1.5f64.powf(8.5) / 8.5;
        assert!((row.phi - exact).abs() <= 1e-13 * exact);
        assert!((row.phi - crate::bound::phi0(&g, &s.u, 8.5, 1.0)).abs() == 0.0);
        assert!(row.crossdiff_q1.abs() < 1e-12);
        assert!(row.pw1 >= RP.alpha * row.pw2 && row.pw2 >= RP.alpha * row.pw3);
    }

    #[test]
    fn gradient_term_matches_symbolic() {
        // u + α = 1 + r² with p + m1 - 1 = 2: w = 1 + r², ∫|∇w|² = 2π ∫ 4r³ dr = 2π.
        let g = disk(4096);
        let u: Vec<f64> = g.centers.iter().map(|r| r * r).collect();
        let s = RadialState::new(u, &g).unwrap();
        let rp = RowParams { pbar: 2.0, ..RP };
        let row = energy_row(&s, &g, &rp);
        assert!((row.grad_term - 2.0 * PI).abs() <= 1e-6 * 2.0 * PI);
    }

    #[test]
    fn lp_check_guards() {
        let r = |lp0| EnergyRow { lp0, ..zero_row() };
        let rep = lp_blowup_check(&[r(1.0), r(3.0), r(9.0)], &[1e3, 1e4, 1e5], true, 2.0);
        assert!(rep.pass);
        let rep = lp_blowup_check(&[r(1.0), r(1.0), r(9.0)], &[1e3, 1e4, 1e5], true, 2.0);
        assert!(!rep.pass);
        let rep = lp_blowup_check(&[], &[1e3, 1e4, 1e5], false, 2.0);
        assert!(!rep.applicable);
    }

    fn zero_row() -> EnergyRow {
        EnergyRow {
            t: 0.0,
            dt: 0.0,
            linf: 0.0,
            lp0: 0.0,
            phi: 0.0,
            grad_term: 0.0,
            pw1: 0.0,
            pw2: 0.0,
            pw3: 0.0,
            mass: 0.0,
            vmean: 0.0,
            crossdiff_q1: 0.0,
            clamped_mass_cum: 0.0,
        }
    }
}
