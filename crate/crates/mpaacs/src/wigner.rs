//! Phase-space representation: closed-form Wigner evaluation, grid fields,
//! quadrature marginals, and axis sections.
//!
//! Conventions: the phase-space point is `beta = (x + i y) / sqrt(2)`, so the
//! area element is `d^2 beta = dx dy / 2` and a normalized Wigner function
//! satisfies `(1/2) integral W dx dy = 1`. The position marginal is
//! `p(x) = (1/2) integral W(x, y) dy`, which makes `integral p(x) dx = 1`;
//! for the vacuum `p(0) = 1/sqrt(pi)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::displacement::wigner_parity_points;
use crate::error::Error;
use crate::exec::{map_indexed, Execution};
use crate::special::laguerre;
use crate::state::{DensityMatrix, MpaacsParams};

pub use crate::displacement::{wigner_parity, wigner_parity_with_basis};

/// Closed-form Wigner function of the state:
/// `W(beta) = 2 (-1)^m L_m(|2 beta - g alpha|^2) e^{-2 |beta - g alpha|^2}
///            / (pi L_m(-g^2 |alpha|^2))`.
pub fn wigner_analytic(params: &MpaacsParams, beta: Complex64) -> f64 {
    let m = params.added_photons();
    let amplified = params.amplified_alpha();
    let argument = (2.0 * beta - amplified).norm_sqr();
    let envelope = (-2.0 * (beta - amplified).norm_sqr()).exp();
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 * sign * laguerre(m, argument) * envelope
        / (PI * laguerre(m, -params.amplified_intensity()))
}

/// Wigner value via the generating-representation route (independent of
/// [`wigner_analytic`]; see [`crate::generating`]).
pub fn wigner_generating(params: &MpaacsParams, beta: Complex64) -> Result<f64, Error> {
    crate::generating::wigner_amplification_first(params, beta)
}

/// A rectangular grid in the quadrature plane, `nx x ny` samples placed at
/// the closed endpoints of `[x_min, x_max] x [y_min, y_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl PhaseSpaceGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self, Error> {
        if !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".to_string()));
        }
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::InvalidGrid(format!(
                "bounds must be increasing (got x [{x_min}, {x_max}], y [{y_min}, {y_max}])"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples per axis (got {nx} x {ny})"
            )));
        }
        Ok(PhaseSpaceGrid {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// Default window for a parameter set: a square of half-width
    /// `sqrt(2) g |alpha| + 4`, which keeps four quadrature units of padding
    /// around the displaced peak. At least 101 points per axis, more when
    /// the window grows, so the spacing never exceeds 0.14.
    pub fn default_for(params: &MpaacsParams) -> Self {
        let reach = params.amplified_alpha().norm();
        let half = 2.0f64.sqrt() * reach + 4.0;
        let points = (2 * (half / 0.14).ceil() as usize + 1).max(101);
        PhaseSpaceGrid::new(-half, half, -half, half, points, points).expect("static bounds")
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy()
    }

    /// The phase-space point of sample `(i, j)`: `beta = (x + i y)/sqrt(2)`.
    pub fn beta(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j)) / 2.0f64.sqrt()
    }

    /// All sample points in row-major order (`i` outer, `j` inner).
    pub fn points(&self) -> Vec<Complex64> {
        let mut points = Vec::with_capacity(self.nx * self.ny);
        for i in 0..self.nx {
            for j in 0..self.ny {
                points.push(self.beta(i, j));
            }
        }
        points
    }
}

/// Wigner samples over a grid, with the trapezoid integral (under
/// `d^2 beta = dx dy / 2`) and the location of the most negative sample.
#[derive(Debug, Clone)]
pub struct WignerField {
    grid: PhaseSpaceGrid,
    values: Vec<f64>,
    integral: f64,
    min_value: f64,
    min_location: (f64, f64),
}

impl WignerField {
    /// Assembles a field from row-major samples, computing the integral and
    /// minimum in a fixed deterministic order.
    pub fn from_values(grid: PhaseSpaceGrid, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != grid.nx * grid.ny {
            return Err(Error::InvalidGrid(format!(
                "value buffer has {} samples for a {} x {} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        let weight = |index: usize, count: usize| -> f64 {
            if index == 0 || index + 1 == count {
                0.5
            } else {
                1.0
            }
        };
        let mut integral = 0.0;
        for i in 0..grid.nx {
            let wx = weight(i, grid.nx);
            let mut row = 0.0;
            for j in 0..grid.ny {
                row += weight(j, grid.ny) * values[i * grid.ny + j];
            }
            integral += wx * row;
        }
        integral *= grid.dx() * grid.dy() / 2.0;

        let mut min_value = f64::INFINITY;
        let mut min_index = 0;
        for (index, &value) in values.iter().enumerate() {
            if value < min_value {
                min_value = value;
                min_index = index;
            }
        }
        let min_location = (grid.x(min_index / grid.ny), grid.y(min_index % grid.ny));

        Ok(WignerField {
            grid,
            values,
            integral,
            min_value,
            min_location,
        })
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    /// Row-major samples (`i` over x outer, `j` over y inner).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.ny + j]
    }

    /// Trapezoid approximation of `(1/2) integral W dx dy`.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// `(x, y)` of the most negative sample (first hit in row-major order).
    pub fn min_location(&self) -> (f64, f64) {
        self.min_location
    }
}

/// Evaluates the closed-form Wigner function over a grid.
pub fn wigner_grid(params: &MpaacsParams, grid: &PhaseSpaceGrid) -> Result<WignerField, Error> {
    wigner_grid_with(params, grid, Execution::default())
}

/// [`wigner_grid`] with an explicit execution strategy. Values are identical
/// for both strategies; rows are distributed across threads in the parallel
/// case.
pub fn wigner_grid_with(
    params: &MpaacsParams,
    grid: &PhaseSpaceGrid,
    exec: Execution,
) -> Result<WignerField, Error> {
    let rows: Vec<Vec<f64>> = map_indexed(exec, grid.nx, |i| {
        (0..grid.ny)
            .map(|j| wigner_analytic(params, grid.beta(i, j)))
            .collect()
    });
    let mut values = Vec::with_capacity(grid.nx * grid.ny);
    for row in rows {
        values.extend(row);
    }
    WignerField::from_values(grid.clone(), values)
}

/// Evaluates the displaced-parity Wigner sum over a grid (see
/// [`wigner_parity`]); the slow cross-check for [`wigner_grid`].
pub fn wigner_parity_grid(
    rho: &DensityMatrix,
    grid: &PhaseSpaceGrid,
    exec: Execution,
) -> Result<WignerField, Error> {
    let values = wigner_parity_points(rho, &grid.points(), exec)?;
    WignerField::from_values(grid.clone(), values)
}

/// Integration window for the marginal's inner `y` integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YWindow {
    pub y_min: f64,
    pub y_max: f64,
    /// Number of trapezoid panels (samples minus one).
    pub panels: usize,
}

impl Default for YWindow {
    fn default() -> Self {
        YWindow {
            y_min: -8.0,
            y_max: 8.0,
            panels: 400,
        }
    }
}

/// Fraction of integrand weight allowed outside the `y` window before the
/// marginal reports a clipped-window error.
const CLIP_LIMIT: f64 = 1e-6;

/// Position marginal `p(x) = (1/2) integral W(x, y) dy` at the given sample
/// abscissas.
///
/// The inner integral is a trapezoid rule over `window`. The routine probes
/// an extension zone beyond both window edges and reports
/// [`Error::MarginalWindowClips`] if the integrand carries more than 1e-6 of
/// absolute weight there, rather than silently returning a clipped value.
pub fn marginal_x(
    params: &MpaacsParams,
    xs: &[f64],
    window: YWindow,
) -> Result<Vec<(f64, f64)>, Error> {
    if window.panels < 2
        || !window.y_min.is_finite()
        || !window.y_max.is_finite()
        || window.y_min >= window.y_max
    {
        return Err(Error::InvalidGrid(format!(
            "bad y window [{}, {}] with {} panels",
            window.y_min, window.y_max, window.panels
        )));
    }
    let dy = (window.y_max - window.y_min) / window.panels as f64;
    let sqrt2 = 2.0f64.sqrt();

    let mut worst_clip = 0.0f64;
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut sum = 0.0;
        for j in 0..=window.panels {
            let y = window.y_min + j as f64 * dy;
            let weight = if j == 0 || j == window.panels { 0.5 } else { 1.0 };
            let beta = Complex64::new(x, y) / sqrt2;
            sum += weight * wigner_analytic(params, beta);
        }
        rows.push((x, 0.5 * sum * dy));

        // Probe 4 quadrature units past each edge at the same spacing.
        let extension_panels = (4.0 / dy).ceil() as usize;
        let mut clip = 0.0;
        for j in 1..=extension_panels {
            let below = window.y_min - j as f64 * dy;
            let above = window.y_max + j as f64 * dy;
            clip += wigner_analytic(params, Complex64::new(x, below) / sqrt2).abs();
            clip += wigner_analytic(params, Complex64::new(x, above) / sqrt2).abs();
        }
        worst_clip = worst_clip.max(0.5 * clip * dy);
    }

    if worst_clip > CLIP_LIMIT {
        return Err(Error::MarginalWindowClips {
            y_min: window.y_min,
            y_max: window.y_max,
            clipped: worst_clip,
        });
    }
    Ok(rows)
}

/// The section `W(x, 0)` of the Wigner function along the position axis.
pub fn section_y0(params: &MpaacsParams, xs: &[f64]) -> Vec<(f64, f64)> {
    let sqrt2 = 2.0f64.sqrt();
    xs.iter()
        .map(|&x| (x, wigner_analytic(params, Complex64::new(x, 0.0) / sqrt2)))
        .collect()
}

/// Uniformly spaced samples over `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{density_matrix, fock_coefficients};

    fn params(alpha: f64, gain: f64, m: u32) -> MpaacsParams {
        MpaacsParams::new(Complex64::new(alpha, 0.0), gain, m).unwrap()
    }

    #[test]
    fn analytic_values_at_known_points() {
        // Vacuum at the origin: 2/pi.
        let vac = wigner_analytic(&params(0.0, 1.0, 0), Complex64::new(0.0, 0.0));
        assert!((vac - 2.0 / PI).abs() < 1e-15);

        // Single photon at the origin: -2/pi.
        let one = wigner_analytic(&params(0.0, 1.0, 1), Complex64::new(0.0, 0.0));
        assert!((one + 2.0 / PI).abs() < 1e-15);

        // alpha = 2, g = 1, m = 1 at beta = 1: -2 e^{-2} / (5 pi).
        let w = wigner_analytic(&params(2.0, 1.0, 1), Complex64::new(1.0, 0.0));
        let expected = -2.0 * (-2.0f64).exp() / (5.0 * PI);
        assert!((w - expected).abs() < 1e-15);
    }

    #[test]
    fn generating_route_agrees_pointwise() {
        let sets = [params(0.0, 1.0, 0), params(1.0, 2.0, 2), params(0.7, 1.4, 3)];
        for p in sets {
            for &(x, y) in &[(0.0, 0.0), (1.3, -0.4), (-2.0, 2.0), (3.5, 0.1)] {
                let beta = Complex64::new(x, y) / 2.0f64.sqrt();
                let closed = wigner_analytic(&p, beta);
                let generating = wigner_generating(&p, beta).unwrap();
                let scale = closed.abs().max(1e-3);
                assert!(
                    (closed - generating).abs() <= 1e-12 + 1e-9 * scale,
                    "{closed} vs {generating}"
                );
            }
        }
    }

    #[test]
    fn grid_integral_and_minimum_for_the_vacuum() {
        let grid = PhaseSpaceGrid::new(-4.0, 4.0, -4.0, 4.0, 101, 101).unwrap();
        let field = wigner_grid(&params(0.0, 1.0, 0), &grid).unwrap();
        assert!((field.integral() - 1.0).abs() < 1e-6);
        assert!(field.min_value() >= 0.0);
        let center = field.value(50, 50);
        assert!((center - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn grid_minimum_location_for_a_single_photon() {
        let grid = PhaseSpaceGrid::new(-4.0, 4.0, -4.0, 4.0, 101, 101).unwrap();
        let field = wigner_grid(&params(0.0, 1.0, 1), &grid).unwrap();
        assert!((field.min_value() + 2.0 / PI).abs() < 1e-12);
        assert_eq!(field.min_location(), (0.0, 0.0));
    }

    #[test]
    fn sequential_and_parallel_grids_are_identical() {
        let grid = PhaseSpaceGrid::new(-3.0, 3.0, -2.0, 2.0, 41, 31).unwrap();
        let p = params(1.0, 2.0, 2);
        let seq = wigner_grid_with(&p, &grid, Execution::Sequential).unwrap();
        let par = wigner_grid_with(&p, &grid, Execution::Parallel).unwrap();
        assert_eq!(seq.values(), par.values());
        assert_eq!(seq.integral(), par.integral());
    }

    #[test]
    fn amplified_peak_sits_at_the_displaced_center() {
        // g alpha = 2 sits at x = 2 sqrt(2) on the quadrature axis.
        let p = params(1.0, 2.0, 0);
        let xs = linspace(-6.0, 6.0, 241);
        let section = section_y0(&p, &xs);
        let (peak_x, peak_w) = section
            .iter()
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |acc, s| if s.1 > acc.1 { s } else { acc });
        assert!((peak_x - 2.0 * 2.0f64.sqrt()).abs() < 0.05 + 1e-12);
        assert!((peak_w - 2.0 / PI).abs() < 1e-3);
    }

    #[test]
    fn vacuum_marginal_is_the_unit_gaussian_density() {
        let p = params(0.0, 1.0, 0);
        let xs = linspace(-5.0, 5.0, 11);
        let rows = marginal_x(&p, &xs, YWindow::default()).unwrap();
        for &(x, value) in &rows {
            let expected = (-x * x).exp() / PI.sqrt();
            assert!((value - expected).abs() < 1e-9, "x = {x}: {value} vs {expected}");
        }
    }

    #[test]
    fn marginal_window_clipping_is_reported() {
        // Push the state far along the momentum axis so the default window
        // clips it: alpha = 5i with g = 2 puts the peak at y = 10 sqrt(2).
        let p = MpaacsParams::new(Complex64::new(0.0, 5.0), 2.0, 0).unwrap();
        let err = marginal_x(&p, &[0.0], YWindow::default()).unwrap_err();
        assert!(matches!(err, Error::MarginalWindowClips { .. }));
    }

    #[test]
    fn parity_grid_matches_the_closed_form_on_a_coarse_grid() {
        let p = params(1.0, 2.0, 2);
        let rho = density_matrix(&fock_coefficients(&p, 1e-14).unwrap());
        let grid = PhaseSpaceGrid::new(-2.0, 2.0, -2.0, 2.0, 5, 5).unwrap();
        let direct = wigner_grid(&p, &grid).unwrap();
        let parity = wigner_parity_grid(&rho, &grid, Execution::Sequential).unwrap();
        for (a, b) in direct.values().iter().zip(parity.values().iter()) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }
}
