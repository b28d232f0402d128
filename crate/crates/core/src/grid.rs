//! Uniform radial finite-volume grid on `[0, R]`.
//!
//! For `n = 1` the interval `[-R, R]` is folded onto `[0, R]` by even
//! symmetry, so the same machinery applies with sphere measure 2.

use crate::quadrature::gauss_legendre5;
use crate::spec::{sphere_measure, DomainGeom, InitialData};

#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub dim: usize,
    pub radius: f64,
    pub h: f64,
    /// Cell centers `r_i`, `i = 0..N`.
    pub centers: Vec<f64>,
    /// Faces `r_{i-1/2}`, `N + 1` entries from 0 to `R`.
    pub faces: Vec<f64>,
    /// Cell measures `μ_i`.
    pub measures: Vec<f64>,
    /// Face areas `|S^{n-1}| r^{n-1}` at each face.
    pub face_areas: Vec<f64>,
}

impl RadialGrid {
    /// # Panics
    /// If `cells == 0`. Run configs additionally require at least 8 cells.
    pub fn new(geom: &DomainGeom, cells: usize) -> Self {
        assert!(cells > 0, "grid needs at least one cell");
        let dim = geom.dim;
        let radius = geom.radius;
        let h = radius / cells as f64;
        let s = sphere_measure(dim);
        let faces: Vec<f64> = (0..=cells)
            .map(|j| if j == cells { radius } else { j as f64 * h })
            .collect();
        let centers = faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let d = dim as i32;
        let measures = faces
            .windows(2)
            .map(|w| s * (w[1].powi(d) - w[0].powi(d)) / dim as f64)
            .collect();
        let face_areas = faces.iter().map(|&r| s * r.powi(d - 1)).collect();
        Self { dim, radius, h, centers, faces, measures, face_areas }
    }

    pub fn cells(&self) -> usize {
        self.centers.len()
    }

    /// `Σ μ_i`.
    pub fn measure(&self) -> f64 {
        self.measures.iter().sum()
    }

    /// Midpoint-rule integral `Σ μ_i f_i`.
    pub fn integrate(&self, field: &[f64]) -> f64 {
        self.measures.iter().zip(field).map(|(m, f)| m * f).sum()
    }

    /// `Σ μ_i g(f_i)`.
    pub fn integrate_map(&self, field: &[f64], g: impl Fn(f64) -> f64) -> f64 {
        self.measures.iter().zip(field).map(|(m, &f)| m * g(f)).sum()
    }

    pub fn mean(&self, field: &[f64]) -> f64 {
        self.integrate(field) / self.measure()
    }

    /// Measure of the shell `[r0, r1]`.
    fn shell(&self, r0: f64, r1: f64) -> f64 {
        let d = self.dim as i32;
        sphere_measure(self.dim) * (r1.powi(d) - r0.powi(d)) / self.dim as f64
    }

    /// Discrete `∫|∇w|²` from face differences of `w` at interior faces.
    ///
    /// Each face carries the shell between its neighbouring centers; the two
    /// outermost faces also carry the boundary half-cells.
    pub fn gradient_energy(&self, w: &[f64]) -> f64 {
        let n = self.cells();
        if n < 2 {
            return 0.0;
        }
        (1..n)
            .map(|j| {
                let lo = if j == 1 { 0.0 } else { self.centers[j - 1] };
                let hi = if j == n - 1 { self.radius } else { self.centers[j] };
                let g = (w[j] - w[j - 1]) / self.h;
                self.shell(lo, hi) * g * g
            })
            .sum()
    }

    /// Cell averages of `u0` under the radial weight (5-point Gauss rule per
    /// cell).
    pub fn cell_averages(&self, u0: &InitialData) -> Vec<f64> {
        let s = sphere_measure(self.dim);
        let d = self.dim as i32;
        self.faces
            .windows(2)
            .zip(&self.measures)
            .map(|(w, mu)| {
                gauss_legendre5(|r| u0.eval(r, self.radius) * s * r.powi(d - 1), w[0], w[1]) / mu
            })
            .collect()
    }
}
