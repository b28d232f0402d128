//! Explicit finite-volume integration of
//! `u_t = ∇·[(u+α)^{m1-1}∇u − χ u(u+α)^{m2-2}∇v]`, `0 = Δv − M + u`
//! on a radial grid with zero-flux boundaries and zero-mean `v`.
//!
//! Face fluxes use an arithmetic-mean diffusivity and an upwinded chemotactic
//! flux; the Poisson problem is solved in closed form from the enclosed mass,
//! so the discrete Laplacian of `v` reproduces `M − u` exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::spec::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub chi: f64,
}

impl From<&ProblemSpec> for ModelParams {
    fn from(s: &ProblemSpec) -> Self {
        Self { m1: s.m1, m2: s.m2, alpha: s.alpha, chi: s.chi }
    }
}

impl ModelParams {
    fn diffusivity(&self, u: f64) -> f64 {
        (u + self.alpha).powf(self.m1 - 1.0)
    }

    /// `u (u+α)^{m2-2}`.
    fn sensitivity(&self, u: f64) -> f64 {
        u * (u + self.alpha).powf(self.m2 - 2.0)
    }
}

/// Potential `v` at cell centers and its radial derivative at faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub v: Vec<f64>,
    pub vr: Vec<f64>,
}

/// Solves `Δv = M − u` with `v_r(0) = v_r(R) = 0` and `Σ μ_i v_i = 0`.
///
/// Rejects sources whose discrete mean differs from `mean_mass` by more than
/// `1e-10` relative.
pub fn solve_poisson(u: &[f64], mean_mass: f64, grid: &RadialGrid) -> Result<Potential> {
    let mean = grid.mean(u);
    if (mean - mean_mass).abs() > 1e-10 * mean_mass.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::IncompatibleSource { mean, expected: mean_mass });
    }
    let n = grid.cells();
    let h = grid.h;
    let mut vr = vec![0.0; n + 1];
    let mut enclosed = 0.0;
    for j in 1..=n {
        enclosed += grid.measures[j - 1] * (mean_mass - u[j - 1]);
        vr[j] = enclosed / grid.face_areas[j];
    }
    // Center-to-center increments: midpoint value plus curvature correction.
    let mut v = vec![0.0; n];
    for i in 0..n - 1 {
        let curvature = if i + 2 <= n { vr[i + 2] - 2.0 * vr[i + 1] + vr[i] } else { 0.0 };
        v[i + 1] = v[i] + h * vr[i + 1] + h * curvature / 24.0;
    }
    let shift = grid.mean(&v);
    v.iter_mut().for_each(|x| *x -= shift);
    Ok(Potential { v, vr })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub u: Vec<f64>,
    pub potential: Potential,
    pub dt_last: f64,
    /// Mean mass the Poisson problem is solved with.
    pub mean_mass: f64,
    /// Mass added by clamping negative undershoots, summed over the run.
    pub clamped_mass_cum: f64,
}

impl RadialState {
    pub fn new(u: Vec<f64>, grid: &RadialGrid) -> Result<Self> {
        let mean_mass = grid.mean(&u);
        let potential = solve_poisson(&u, mean_mass, grid)?;
        Ok(Self { t: 0.0, u, potential, dt_last: 0.0, mean_mass, clamped_mass_cum: 0.0 })
    }

    pub fn from_spec(spec: &ProblemSpec, grid: &RadialGrid) -> Result<Self> {
        Self::new(grid.cell_averages(&spec.u0), grid)
    }

    pub fn linf(&self) -> f64 {
        self.u.iter().copied().fold(0.0, f64::max)
    }

    pub fn mass(&self, grid: &RadialGrid) -> f64 {
        grid.integrate(&self.u)
    }
}

/// Face fluxes `A_j J_j`, `J = D u_r − χ u(u+α)^{m2-2} v_r`; zero at both
/// boundary faces.
fn face_fluxes(u: &[f64], vr: &[f64], params: &ModelParams, grid: &RadialGrid) -> Vec<f64> {
    let n = grid.cells();
    let h = grid.h;
    let mut flux = vec![0.0; n + 1];
    for j in 1..n {
        let (ul, ur) = (u[j - 1], u[j]);
        let d = params.diffusivity(0.5 * (ul + ur));
        let upwind = if vr[j] > 0.0 { ul } else { ur };
        let j_face = d * (ur - ul) / h - params.chi * params.sensitivity(upwind) * vr[j];
        flux[j] = grid.face_areas[j] * j_face;
    }
    flux
}

/// One explicit Euler step followed by the Poisson re-solve.
pub fn step(state: &RadialState, dt: f64, params: &ModelParams, grid: &RadialGrid) -> Result<RadialState> {
    let flux = face_fluxes(&state.u, &state.potential.vr, params, grid);
    let mut clamped = 0.0;
    let mut u: Vec<f64> = state
        .u
        .iter()
        .enumerate()
        .map(|(i, &ui)| ui + dt * (flux[i + 1] - flux[i]) / grid.measures[i])
        .collect();
    for (i, x) in u.iter_mut().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite(state.t + dt));
        }
        if *x < 0.0 {
            clamped -= *x * grid.measures[i];
            *x = 0.0;
        }
    }
    let mean_mass = if clamped > 0.0 { grid.mean(&u) } else { state.mean_mass };
    let potential = solve_poisson(&u, mean_mass, grid)?;
    if potential.vr.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(state.t + dt));
    }
    Ok(RadialState {
        t: state.t + dt,
        u,
        potential,
        dt_last: dt,
        mean_mass,
        clamped_mass_cum: state.clamped_mass_cum + clamped,
    })
}

/// Diffusive and advective stability limits `(h²/(c_n D_max), h/w_max)`,
/// `c_n = max(2, n)`.
pub fn stability_limits(state: &RadialState, params: &ModelParams, grid: &RadialGrid) -> (f64, f64) {
    let h = grid.h;
    let d_max = state.u.iter().map(|&u| params.diffusivity(u)).fold(0.0, f64::max);
    let geometric = (grid.dim as f64).max(2.0);
    let diffusive = h * h / (geometric * d_max);
    let vr = &state.potential.vr;
    let speed = (1..grid.cells())
        .map(|j| {
            let upwind = if vr[j] > 0.0 { state.u[j - 1] } else { state.u[j] };
            params.chi * (upwind + params.alpha).powf(params.m2 - 2.0) * vr[j].abs()
        })
        .fold(0.0, f64::max);
    let advective = if speed > 0.0 { h / speed } else { f64::INFINITY };
    (diffusive, advective)
}

/// `cfl · min(diffusive, advective)`, capped at `dt_max`.
pub fn adaptive_dt(state: &RadialState, params: &ModelParams, grid: &RadialGrid, cfl: f64, dt_max: f64) -> f64 {
    let (d, a) = stability_limits(state, params, grid);
    (cfl * d.min(a)).min(dt_max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StopCriteria {
    pub t_end: f64,
    /// Ascending `‖u‖_∞` ladder; the run stops once the last rung is crossed.
    pub thresholds: Vec<f64>,
    pub dt_floor: f64,
    pub dt_max: f64,
    pub max_steps: usize,
    pub cfl: f64,
}

impl Default for StopCriteria {
    fn default() -> Self {
        Self { t_end: 1.0, thresholds: vec![1e3, 1e4, 1e5], dt_floor: 1e-14, dt_max: 1e-2, max_steps: 50_000_000, cfl: 0.3 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Recording {
    /// Record a row every `record_dt` of simulated time.
    pub record_dt: Option<f64>,
    /// Record a row every this many steps.
    pub record_every: Option<usize>,
    /// Times at which field snapshots are requested.
    pub checkpoints: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    ReachedTEnd { t: f64 },
    BlowupThreshold { t_cross: f64 },
    DtFloor { t_stall: f64 },
    StepBudget { t: f64 },
}

impl Verdict {
    pub fn is_blowup(&self) -> bool {
        matches!(self, Verdict::BlowupThreshold { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    Initial,
    Record,
    /// Crossing of ladder rung `k`.
    Crossing(usize),
    Checkpoint(usize),
    Final,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub threshold: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub crossings: Vec<Crossing>,
    pub steps: usize,
    pub clamped_mass_cum: f64,
    /// Cumulative clamped mass exceeded `1e-8 M|Ω|`.
    pub unreliable: bool,
}

const LANDING_TOL: f64 = 1e-12;

/// Marches `state` until a stop criterion fires; `observe` sees the state at
/// every recorded event.
pub fn run(
    mut state: RadialState,
    params: &ModelParams,
    grid: &RadialGrid,
    stop: &StopCriteria,
    rec: &Recording,
    mut observe: impl FnMut(&RadialState, Event),
) -> RunOutcome {
    let initial_mass = state.mass(grid);
    observe(&state, Event::Initial);
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut next_record = rec.record_dt.map(|d| d);
    let mut checkpoints: Vec<(usize, f64)> = rec.checkpoints.iter().copied().enumerate().collect();
    checkpoints.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut pending_checks = checkpoints.into_iter().peekable();
    while let Some(&(k, tc)) = pending_checks.peek() {
        if tc > 0.0 {
            break;
        }
        observe(&state, Event::Checkpoint(k));
        pending_checks.next();
    }
    let top = stop.thresholds.len();
    let mut steps = 0usize;

    let verdict = loop {
        if crossings.len() == top && top > 0 {
            break Verdict::BlowupThreshold { t_cross: crossings[top - 1].t };
        }
        if state.t >= stop.t_end * (1.0 - LANDING_TOL) {
            break Verdict::ReachedTEnd { t: state.t };
        }
        if steps >= stop.max_steps {
            break Verdict::StepBudget { t: state.t };
        }
        let dt_stable = adaptive_dt(&state, params, grid, stop.cfl, stop.dt_max);
        if !(dt_stable >= stop.dt_floor) {
            break Verdict::DtFloor { t_stall: state.t };
        }
        let mut landing = stop.t_end;
        if let Some(tr) = next_record {
            landing = landing.min(tr);
        }
        if let Some(&(_, tc)) = pending_checks.peek() {
            landing = landing.min(tc);
        }
        let mut dt = dt_stable;
        let lands = state.t + dt >= landing * (1.0 - LANDING_TOL);
        if lands {
            dt = landing - state.t;
        }
        let mut next = match step(&state, dt, params, grid) {
            Ok(s) => s,
            Err(_) => break Verdict::BlowupThreshold { t_cross: state.t },
        };
        steps += 1;
        if lands {
            next.t = landing;
        }
        state = next;

        let linf = state.linf();
        while crossings.len() < top && linf >= stop.thresholds[crossings.len()] {
            let k = crossings.len();
            crossings.push(Crossing { threshold: stop.thresholds[k], t: state.t });
            observe(&state, Event::Crossing(k));
        }
        if let Some(tr) = next_record {
            if state.t >= tr * (1.0 - LANDING_TOL) {
                observe(&state, Event::Record);
                let d = rec.record_dt.unwrap();
                next_record = Some(tr + d);
            }
        } else if let Some(every) = rec.record_every {
            if every > 0 && steps % every == 0 {
                observe(&state, Event::Record);
            }
        }
        while let Some(&(k, tc)) = pending_checks.peek() {
            if state.t < tc * (1.0 - LANDING_TOL) {
                break;
            }
            observe(&state, Event::Checkpoint(k));
            pending_checks.next();
        }
    };
    observe(&state, Event::Final);
    let unreliable = state.clamped_mass_cum > 1e-8 * initial_mass;
    RunOutcome { verdict, crossings, steps, clamped_mass_cum: state.clamped_mass_cum, unreliable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{DomainGeom, Shape};

    fn disk(n: usize) -> RadialGrid {
        RadialGrid::new(&DomainGeom::new(2, Shape::Ball, 1.0).unwrap(), n)
    }

    fn bump(grid: &RadialGrid, amp: f64, w: f64) -> Vec<f64> {
        grid.centers.iter().map(|r| 0.5 + amp * (-(r / w).powi(2)).exp()).collect()
    }

    const PARAMS: ModelParams = ModelParams { m1: 1.0, m2: 2.5, alpha: 0.1, chi: 1.0 };

    #[test]
    fn constant_source_gives_zero_potential() {
        let g = disk(64);
        let p = solve_poisson(&vec![2.0; 64], 2.0, &g).unwrap();
        assert!(p.v.iter().all(|x| x.abs() < 1e-13));
        assert!(p.vr.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn incompatible_source_rejected() {
        let g = disk(64);
        assert!(matches!(solve_poisson(&vec![2.0; 64], 1.0, &g), Err(Error::IncompatibleSource { .. })));
    }

    #[test]
    fn boundary_flux_and_zero_mean() {
        let g = disk(300);
        let u = bump(&g, 40.0, 0.1);
        let m = g.mean(&u);
        let p = solve_poisson(&u, m, &g).unwrap();
        let vr_max = p.vr.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(p.vr[300].abs() <= 1e-12 * vr_max);
        let v_max = p.v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(g.integrate(&p.v).abs() <= g.measure() * 1e-12 * v_max);
        // Discrete Laplacian reproduces the source exactly.
        for i in 0..300 {
            let lap = (g.face_areas[i + 1] * p.vr[i + 1] - g.face_areas[i] * p.vr[i]) / g.measures[i];
            assert!((lap - (m - u[i])).abs() < 1e-9 * (1.0 + u[i]));
        }
    }

    #[test]
    fn constant_state_is_fixed_point() {
        let g = disk(64);
        let s = RadialState::new(vec![1.3; 64], &g).unwrap();
        let next = step(&s, 1e-3, &PARAMS, &g).unwrap();
        assert!(next.u.iter().all(|&x| (x - 1.3).abs() <= 1e-12 * 1.3));
        assert!(next.potential.v.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn step_conserves_mass() {
        let g = disk(256);
        let mut s = RadialState::new(bump(&g, 20.0, 0.1), &g).unwrap();
        let m0 = s.mass(&g);
        for _ in 0..50 {
            let dt = adaptive_dt(&s, &PARAMS, &g, 0.3, 1.0);
            s = step(&s, dt, &PARAMS, &g).unwrap();
        }
        assert!((s.mass(&g) - m0).abs() <= 1e-13 * m0 * 50.0);
        assert_eq!(s.clamped_mass_cum, 0.0);
    }

    #[test]
    fn dt_for_constant_state_is_diffusive() {
        let g = disk(64);
        let s = RadialState::new(vec![1.5; 64], &g).unwrap();
        let p = ModelParams { m1: 0.5, ..PARAMS };
        let dt = adaptive_dt(&s, &p, &g, 0.4, 1.0);
        let expected = 0.4 * g.h * g.h / (2.0 * (1.5f64 + 0.1).powf(-0.5));
        assert!((dt - expected).abs() <= 1e-14 * expected);
        let g2 = disk(128);
        let s2 = RadialState::new(vec![1.5; 128], &g2).unwrap();
        let dt2 = adaptive_dt(&s2, &p, &g2, 0.4, 1.0);
        assert!((dt / dt2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn near_blowup_dt_is_advective() {
        let g = disk(256);
        let mut u = vec![1.0; 256];
        u[0] = 1e6;
        let s = RadialState::new(u, &g).unwrap();
        let (diff, adv) = stability_limits(&s, &PARAMS, &g);
        assert!((diff - g.h * g.h / 2.0).abs() < 1e-18);
        assert!(adv < diff);
    }

    #[test]
    fn constant_run_reaches_end() {
        let g = disk(32);
        let s = RadialState::new(vec![1.0; 32], &g).unwrap();
        let stop = StopCriteria { t_end: 0.05, ..Default::default() };
        let rec = Recording { record_dt: Some(0.01), ..Default::default() };
        let mut rows = Vec::new();
        let out = run(s, &PARAMS, &g, &stop, &rec, |st, ev| rows.push((st.t, ev)));
        assert!(matches!(out.verdict, Verdict::ReachedTEnd { .. }));
        let records = rows.iter().filter(|r| r.1 == Event::Record).count();
        assert_eq!(records, 5);
        assert_eq!(rows.last().unwrap().0, 0.05);
    }

    #[test]
    fn heat_decay_is_monotone_on_interval() {
        let geom = DomainGeom::new(1, Shape::Interval, 1.0).unwrap();
        let g = RadialGrid::new(&geom, 128);
        let u: Vec<f64> = g.centers.iter().map(|r| 1.0 + (std::f64::consts::PI * r).cos()).collect();
        let m = g.mean(&u);
        let s = RadialState::new(u, &g).unwrap();
        let p = ModelParams { m1: 1.0, m2: 2.5, alpha: 0.1, chi: 0.0 };
        let stop = StopCriteria { t_end: 0.2, ..Default::default() };
        let rec = Recording { record_dt: Some(0.005), ..Default::default() };
        let mut dev = Vec::new();
        run(s, &p, &g, &stop, &rec, |st, _| dev.push(st.u.iter().map(|x| (x - m).abs()).fold(0.0, f64::max)));
        assert!(dev.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        assert!(dev.last().unwrap() < &(0.5 * dev[0]));
    }
}
