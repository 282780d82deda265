//! Closed-form spectra of the Gaussian-cut oscillator and the corrections
//! they imply for hydrogen.
//!
//! With δ = ℏ/(ωma²) the cut oscillator is again a harmonic oscillator, with
//! frequency ω̄ = ω√(1+δ²) and a constant shift −ℏ²/2ma². These formulas are
//! exact and serve as the reference for the grid solver.

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::potential::OscillatorParams;
use crate::solver::SpectrumResult;
use crate::units::PhysicalConstants;

/// Dimensionless deviation from ordinary quantization.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaParameter(f64);

impl DeltaParameter {
    pub const ZERO: DeltaParameter = DeltaParameter(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("must be finite and non-negative, got {value}"),
            })
        }
    }

    /// ℏ/(ωma²); zero when `a` is infinite.
    pub fn from_oscillator(hbar: f64, mass: f64, omega: f64, a: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("mass", mass)?;
        positive("omega", omega)?;
        if a == f64::INFINITY {
            return Ok(Self::ZERO);
        }
        positive("a", a)?;
        Self::new(hbar / (omega * mass * a * a))
    }

    pub fn from_params(params: &OscillatorParams, hbar: f64) -> Result<Self> {
        Self::from_oscillator(hbar, params.mass, params.omega, params.cutting_length)
    }

    /// (ℓ/a)² for a microscopic length ℓ and a macroscopic cutting length a.
    pub fn from_lengths(micro: f64, macro_length: f64) -> Result<Self> {
        positive("micro_length", micro)?;
        positive("radius", macro_length)?;
        if micro >= macro_length {
            return Err(Error::InvalidParameter {
                name: "micro_length",
                reason: format!(
                    "microscopic length {micro} must be smaller than the macroscopic length {macro_length}"
                ),
            });
        }
        let ratio = micro / macro_length;
        Self::new(ratio * ratio)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> f64 {
        self.0 * self.0
    }
}

impl From<DeltaParameter> for f64 {
    fn from(d: DeltaParameter) -> f64 {
        d.0
    }
}

pub fn delta_parameter(hbar: f64, mass: f64, omega: f64, a: f64) -> Result<DeltaParameter> {
    DeltaParameter::from_oscillator(hbar, mass, omega, a)
}

/// ω̄ = ω√(1+δ²).
pub fn omega_bar(omega: f64, delta: DeltaParameter) -> f64 {
    omega * (1.0 + delta.squared()).sqrt()
}

/// Eₙ = (n + ½)ℏω̄ − ℏ²/2ma².
pub fn oscillator_level(n: u32, params: &OscillatorParams, hbar: f64) -> f64 {
    ddim_level(n, 1, params, hbar)
}

/// Leading-order relative widening of the level spacing, δ²/2. The
/// neglected remainder is O(δ⁴); see [`exact_spacing_shift`].
pub fn relative_spacing_shift(delta: DeltaParameter) -> f64 {
    0.5 * delta.squared()
}

/// ω̄/ω − 1 = √(1+δ²) − 1, evaluated without cancellation.
pub fn exact_spacing_shift(delta: DeltaParameter) -> f64 {
    let d2 = delta.squared();
    d2 / ((1.0 + d2).sqrt() + 1.0)
}

/// Level with `quanta` total quanta of the D-dimensional isotropic cut
/// oscillator: (N + D/2)ℏω̄ − Dℏ²/2ma².
pub fn ddim_level(quanta: u32, dims: u32, params: &OscillatorParams, hbar: f64) -> f64 {
    let d = dims as f64;
    let zero_point = (quanta as f64 + 0.5 * d) * hbar;
    let a = params.cutting_length;
    if a.is_infinite() {
        return zero_point * params.omega;
    }
    let delta = DeltaParameter::from_oscillator(hbar, params.mass, params.omega, a)
        .unwrap_or(DeltaParameter::ZERO);
    zero_point * omega_bar(params.omega, delta) - d * hbar * hbar / (2.0 * params.mass * a * a)
}

/// Number of ways to spread N quanta over D axes, C(N+D−1, D−1).
pub fn ddim_degeneracy(quanta: u32, dims: u32) -> u64 {
    if dims == 0 {
        return 0;
    }
    let k = (dims - 1) as u64;
    let n = quanta as u64 + k;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// n → n√(1+δ²).
pub fn principal_number_substitution(n: u32, delta: DeltaParameter) -> Result<f64> {
    principal(n)?;
    Ok(n as f64 * (1.0 + delta.squared()).sqrt())
}

fn principal(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "principal quantum number starts at 1".into(),
        });
    }
    Ok(n as f64)
}

/// −R∞/(n²(1+δ²)), in the energy unit of `constants.rydberg_infinity`.
pub fn hydrogen_level(n: u32, delta: DeltaParameter, constants: &PhysicalConstants) -> Result<f64> {
    let n = principal(n)?;
    Ok(-constants.rydberg_infinity / (n * n * (1.0 + delta.squared())))
}

/// Relative change of the Rydberg constant, 1/(1+δ²) − 1 = −δ²/(1+δ²).
pub fn rydberg_relative_correction(delta: DeltaParameter) -> f64 {
    let d2 = delta.squared();
    -d2 / (1.0 + d2)
}

/// (a_B/a)².
pub fn hydrogen_delta(a: f64, constants: &PhysicalConstants) -> Result<DeltaParameter> {
    positive("a", a)?;
    let ratio = constants.bohr_radius / a;
    DeltaParameter::new(ratio * ratio)
}

/// Inputs of the Lamb-shift estimate for an s level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambInputs {
    pub n: u32,
    pub z: u32,
    pub alpha: f64,
    /// m_el c²/ΔE; must exceed 1.
    pub bethe_log_argument: f64,
    /// e²/a₀ in the output energy unit.
    pub hartree_energy: f64,
    pub delta: DeltaParameter,
}

impl LambInputs {
    pub fn validate(&self) -> Result<()> {
        principal(self.n)?;
        if self.z == 0 {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: "nuclear charge must be at least 1".into(),
            });
        }
        positive("alpha", self.alpha)?;
        positive("hartree_energy", self.hartree_energy)?;
        if !(self.bethe_log_argument > 1.0) || !self.bethe_log_argument.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bethe_log_argument",
                reason: format!(
                    "m_el c²/ΔE must exceed 1 so the logarithm is positive, got {}",
                    self.bethe_log_argument
                ),
            });
        }
        Ok(())
    }
}

/// (1+δ²)^(−3/2).
pub fn lamb_correction_factor(delta: DeltaParameter) -> f64 {
    (1.0 + delta.squared()).powf(-1.5)
}

/// (1+δ²)^(−3/2) − 1, accurate even when δ² is below machine epsilon.
pub fn lamb_relative_deviation(delta: DeltaParameter) -> f64 {
    (-1.5 * delta.squared().ln_1p()).exp_m1()
}

/// (4/3π)(α³Z⁴/n³) log(m_el c²/ΔE) (e²/a₀) (1+δ²)^(−3/2).
pub fn lamb_shift(inputs: &LambInputs) -> Result<f64> {
    inputs.validate()?;
    let n = inputs.n as f64;
    let z2 = (inputs.z as f64).powi(2);
    let prefactor = 4.0 / (3.0 * std::f64::consts::PI);
    Ok(prefactor * inputs.alpha.powi(3) * z2 * z2 / (n * n * n)
        * inputs.bethe_log_argument.ln()
        * inputs.hartree_energy
        * lamb_correction_factor(inputs.delta))
}

const RESIDUAL_FLOOR: f64 = 1e-300;

/// |numeric − analytic| / max(|analytic|, 1e-300) per entry.
pub fn relative_residuals(analytic: &[f64], numeric: &[f64]) -> Result<Vec<f64>> {
    if analytic.len() != numeric.len() {
        return Err(Error::LengthMismatch {
            expected: analytic.len(),
            found: numeric.len(),
        });
    }
    Ok(analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (n - a).abs() / a.abs().max(RESIDUAL_FLOOR))
        .collect())
}

pub fn residuals_vs_numeric(analytic: &[f64], numeric: &SpectrumResult) -> Result<Vec<f64>> {
    relative_residuals(analytic, &numeric.eigenvalues)
}
