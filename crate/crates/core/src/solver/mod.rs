//! Grid diagonalization of the cut Hamiltonian with Richardson-extrapolated
//! refinement.
//!
//! The 1D operator −(ℏ²/2m)d²/dx² + V_eff is discretized with the
//! three-point stencil on a uniform grid with Dirichlet walls. The resulting
//! symmetric tridiagonal matrix is solved by Sturm bisection. Successive
//! doublings of the grid are combined as (4E(h/2) − E(h))/3, which cancels
//! the O(h²) stencil error.

mod separability;
mod tridiag;

pub use separability::{ddim_levels_by_separability, DdimLevel};
pub use tridiag::{discretize, inverse_iteration, lowest_eigenvalues, TridiagonalSymmetric};

use serde::Serialize;

use crate::analytic::{oscillator_level, DeltaParameter};
use crate::cutting::CuttingFunction;
use crate::error::{positive, Error, Result};
use crate::potential::{effective_potential, OscillatorParams, Potential1D, PotentialSpec};

/// Default number of nodes for automatically chosen domains.
pub const DEFAULT_POINTS: usize = 2001;
/// Default domain margin beyond the outermost turning point, in units of
/// √(ℏ/mω̄).
pub const DEFAULT_MARGIN: f64 = 6.0;
/// Default cap on grid doublings.
pub const DEFAULT_MAX_DOUBLINGS: u32 = 6;

const PROBE_POINTS: usize = 401;

/// Uniform grid including both boundary nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    spacing: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParameter {
                name: "x_min",
                reason: format!("need finite x_min < x_max, got [{x_min}, {x_max}]"),
            });
        }
        if n_points < 3 {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: format!("a grid needs at least 3 points, got {n_points}"),
            });
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            spacing: (x_max - x_min) / (n_points - 1) as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing
        }
    }

    /// Same interval with half the spacing; every old node is kept.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * (self.n_points - 1) + 1,
            spacing: (self.x_max - self.x_min) / (2 * (self.n_points - 1)) as f64,
            ..*self
        }
    }

    /// Order of the Dirichlet matrix on this grid.
    pub fn interior(&self) -> usize {
        self.n_points - 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPolicy {
    Explicit(Grid1D),
    /// Symmetric domain reaching `margin` characteristic lengths beyond the
    /// outermost classical turning point.
    Automatic { margin: f64, n_points: usize },
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy::Automatic {
            margin: DEFAULT_MARGIN,
            n_points: DEFAULT_POINTS,
        }
    }
}

/// A 1D eigenvalue problem for the cut Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProblem {
    pub potential: PotentialSpec,
    pub cutting: CuttingFunction,
    /// Supplies the mass; ω sets the length scale when the potential is not
    /// harmonic.
    pub params: OscillatorParams,
    pub hbar: f64,
    pub grid: GridPolicy,
    pub levels: usize,
    pub max_doublings: u32,
    pub eigenvectors: bool,
}

impl SpectralProblem {
    pub fn new(
        potential: PotentialSpec,
        cutting: CuttingFunction,
        params: OscillatorParams,
        levels: usize,
    ) -> Result<Self> {
        let problem = Self {
            potential,
            cutting,
            params,
            hbar: 1.0,
            grid: GridPolicy::default(),
            levels,
            max_doublings: DEFAULT_MAX_DOUBLINGS,
            eigenvectors: false,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Harmonic potential with the Gaussian cutting named by `params`.
    pub fn oscillator(params: OscillatorParams, levels: usize) -> Result<Self> {
        Self::new(params.potential(), params.cutting(), params, levels)
    }

    pub fn with_grid(mut self, grid: Grid1D) -> Self {
        self.grid = GridPolicy::Explicit(grid);
        self
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn validate(&self) -> Result<()> {
        OscillatorParams::new(self.params.mass, self.params.omega, self.params.cutting_length)?;
        positive("hbar", self.hbar)?;
        if self.levels == 0 {
            return Err(Error::InvalidParameter {
                name: "levels",
                reason: "at least one level must be requested".into(),
            });
        }
        if let PotentialSpec::Harmonic { mass, .. } = self.potential {
            if mass != self.params.mass {
                return Err(Error::InvalidParameter {
                    name: "mass",
                    reason: format!(
                        "harmonic potential mass {mass} differs from the particle mass {}",
                        self.params.mass
                    ),
                });
            }
        }
        match self.grid {
            GridPolicy::Explicit(g) if self.levels > g.interior() => {
                return Err(Error::TooManyLevels {
                    requested: self.levels,
                    order: g.interior(),
                })
            }
            GridPolicy::Automatic { margin, n_points } => {
                positive("margin", margin)?;
                if n_points < 3 || self.levels > n_points - 2 {
                    return Err(Error::TooManyLevels {
                        requested: self.levels,
                        order: n_points.saturating_sub(2),
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Frequency of the oscillator the effective potential reduces to, when
    /// it is one.
    fn effective_frequency(&self) -> Option<f64> {
        let PotentialSpec::Harmonic { mass, omega } = self.potential else {
            return None;
        };
        let a = self.cutting.length()?;
        let delta = DeltaParameter::from_oscillator(self.hbar, mass, omega, a).ok()?;
        Some(crate::analytic::omega_bar(omega, delta))
    }

    /// Exact levels when the problem is a harmonic potential with identity
    /// or Gaussian cutting.
    pub fn analytic_levels(&self) -> Option<Vec<f64>> {
        let PotentialSpec::Harmonic { mass, omega } = self.potential else {
            return None;
        };
        let a = self.cutting.length()?;
        let params = OscillatorParams { mass, omega, cutting_length: a };
        Some(
            (0..self.levels as u32)
                .map(|n| oscillator_level(n, &params, self.hbar))
                .collect(),
        )
    }

    /// The lowest `levels` eigenvalues on a single grid.
    pub fn eigenvalues_on(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        let matrix = self.matrix_on(grid)?;
        lowest_eigenvalues(&matrix, self.levels)
    }

    pub fn matrix_on(&self, grid: &Grid1D) -> Result<TridiagonalSymmetric> {
        let veff = effective_potential(&self.potential, &self.cutting, self.params.mass, self.hbar)?;
        discretize(&veff, grid, self.params.mass, self.hbar)
    }
}

/// Picks the grid for an [`GridPolicy::Automatic`] problem and checks that
/// the effective potential rises above the highest requested level at both
/// ends.
pub fn auto_domain(problem: &SpectralProblem) -> Result<Grid1D> {
    let (margin, n_points) = match problem.grid {
        GridPolicy::Explicit(g) => return Ok(g),
        GridPolicy::Automatic { margin, n_points } => (margin, n_points),
    };
    let hbar = problem.hbar;
    let mass = problem.params.mass;
    let veff = effective_potential(&problem.potential, &problem.cutting, mass, hbar)?;
    let (dom_lo, dom_hi) = veff.domain();

    let (lo, hi) = match problem.potential {
        PotentialSpec::FreeBox => {
            return Err(Error::Unconfined(
                "a free box has no walls of its own; give an explicit grid".into(),
            ))
        }
        PotentialSpec::Harmonic { omega, .. } => {
            let freq = problem.effective_frequency().unwrap_or(omega);
            let length = (hbar / (mass * freq)).sqrt();
            let turning = ((2 * problem.levels - 1) as f64 * hbar / (mass * freq)).sqrt();
            let half = turning + margin * length;
            let half = half.min(-dom_lo).min(dom_hi);
            if !(half > 0.0) {
                return Err(Error::Unconfined(format!(
                    "the cutting table [{dom_lo}, {dom_hi}] does not straddle the origin"
                )));
            }
            (-half, half)
        }
        PotentialSpec::Tabulated(_) => (dom_lo, dom_hi),
    };
    let grid = Grid1D::new(lo, hi, n_points)?;

    let estimate = match (problem.effective_frequency(), problem.analytic_levels()) {
        (Some(_), Some(levels)) => levels[problem.levels - 1],
        _ => {
            let probe = Grid1D::new(lo, hi, PROBE_POINTS.max(problem.levels + 3))?;
            let levels = problem.eigenvalues_on(&probe)?;
            levels[problem.levels - 1]
        }
    };
    for x in [lo, hi] {
        let v = veff.eval(x)?;
        if !(v > estimate) {
            return Err(Error::Unconfined(format!(
                "V_eff({x}) = {v} does not exceed the estimated level {estimate}; \
                 supply an explicit grid"
            )));
        }
    }
    Ok(grid)
}

/// Eigenvalues with convergence metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    #[serde(rename = "grid")]
    pub grid_used: Grid1D,
    pub converged: bool,
    pub refinement_levels: u32,
    pub convergence_estimate: Vec<f64>,
    pub analytic_reference: Option<Vec<f64>>,
    pub residuals: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl SpectrumResult {
    /// Stores `reference` and the per-level relative residuals against it.
    pub fn attach_reference(&mut self, reference: Vec<f64>) -> Result<()> {
        let residuals = crate::analytic::relative_residuals(&reference, &self.eigenvalues)?;
        self.analytic_reference = Some(reference);
        self.residuals = Some(residuals);
        Ok(())
    }
}

/// Solves on successively doubled grids until the Richardson-extrapolated
/// levels change by at most `rel_tol` (relative), or the doubling cap is
/// reached, in which case the result is flagged as not converged.
pub fn solve_converged(problem: &SpectralProblem, rel_tol: f64) -> Result<SpectrumResult> {
    positive("rel_tol", rel_tol)?;
    problem.validate()?;
    let mut grid = auto_domain(problem)?;
    let floor = problem.hbar * problem.hbar
        / (problem.params.mass * (grid.x_max() - grid.x_min()).powi(2));

    let mut coarse = problem.eigenvalues_on(&grid)?;
    let mut previous: Option<Vec<f64>> = None;
    let mut result: Option<SpectrumResult> = None;
    let mut last_change = f64::INFINITY;
    for doubling in 1..=problem.max_doublings.max(1) {
        let fine_grid = grid.refined();
        let fine = problem.eigenvalues_on(&fine_grid)?;
        let extrapolated: Vec<f64> = coarse
            .iter()
            .zip(&fine)
            .map(|(c, f)| (4.0 * f - c) / 3.0)
            .collect();
        let estimate: Vec<f64> = coarse
            .iter()
            .zip(&fine)
            .map(|(c, f)| (f - c).abs() / 3.0)
            .collect();
        let change: Vec<f64> = match &previous {
            None => estimate.clone(),
            Some(p) => extrapolated.iter().zip(p).map(|(e, p)| (e - p).abs()).collect(),
        };
        let relative_change = change
            .iter()
            .zip(&extrapolated)
            .map(|(d, e)| d / e.abs().max(floor))
            .fold(0.0f64, f64::max);
        // Once rounding in the O(1/h²) matrix entries dominates, further
        // doublings only add noise; keep the coarser answer.
        if previous.is_some() && result.is_some() && relative_change > last_change {
            break;
        }
        let converged = relative_change <= rel_tol;
        result = Some(SpectrumResult {
            eigenvalues: extrapolated.clone(),
            grid_used: fine_grid,
            converged,
            refinement_levels: doubling,
            convergence_estimate: estimate,
            analytic_reference: None,
            residuals: None,
            eigenvectors: None,
        });
        if converged {
            break;
        }
        if previous.is_some() {
            last_change = relative_change;
        }
        previous = Some(extrapolated);
        coarse = fine;
        grid = fine_grid;
    }
    let mut result = result.expect("at least one doubling runs");
    if problem.eigenvectors {
        let matrix = problem.matrix_on(&result.grid_used)?;
        let finest = lowest_eigenvalues(&matrix, problem.levels)?;
        result.eigenvectors = Some(
            finest
                .iter()
                .map(|&l| inverse_iteration(&matrix, l))
                .collect::<Result<_>>()?,
        );
    }
    Ok(result)
}
