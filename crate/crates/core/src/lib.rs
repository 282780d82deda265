//! Spectra of classical Hamiltonians quantized with a cutting function.
//!
//! Writing p² as f⁻¹ p f² p f⁻¹ before quantization adds (ℏ²/2m)·Δf/f to the
//! Hamiltonian. For the Gaussian f = exp(−x²/2a²) and a harmonic potential the
//! result is again an oscillator, with a stiffer frequency and a constant
//! shift. This crate solves such problems on a grid, evaluates the closed
//! forms, and carries the correction over to hydrogen levels, the Lamb shift
//! and large coherent systems.
//!
//! ```
//! use fquant::{solve_converged, OscillatorParams, SpectralProblem};
//!
//! let params = OscillatorParams::dimensionless(2.0).unwrap();
//! let problem = SpectralProblem::oscillator(params, 3).unwrap();
//! let spectrum = solve_converged(&problem, 1e-8).unwrap();
//! let exact = fquant::analytic::oscillator_level(0, &params, 1.0);
//! assert!((spectrum.eigenvalues[0] - exact).abs() < 1e-6 * exact);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod coherence;
pub mod cutting;
pub mod error;
pub mod potential;
pub mod solver;
pub mod table;
pub mod units;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use analytic::{DeltaParameter, LambInputs};
pub use coherence::{EstimateReport, StarParameters, SweepParameter};
pub use cutting::CuttingFunction;
pub use error::{Error, Result};
pub use potential::{OscillatorParams, Potential1D, PotentialSpec};
pub use solver::{
    auto_domain, solve_converged, Grid1D, GridPolicy, SpectralProblem, SpectrumResult,
    TridiagonalSymmetric,
};
pub use table::Table;
pub use units::{PhysicalConstants, UnitSystem};
