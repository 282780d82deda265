//! Classical potentials and the effective potential V + (ℏ²/2m)·Δf/f of the
//! cut quantization.

use serde::{Deserialize, Serialize};

use crate::cutting::CuttingFunction;
use crate::error::{positive, Error, Result};
use crate::table::Table;

/// Anything that can be sampled as a one-dimensional potential.
pub trait Potential1D {
    fn eval(&self, x: f64) -> Result<f64>;

    /// Interval on which `eval` is defined.
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

impl<F> Potential1D for F
where
    F: Fn(f64) -> f64,
{
    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self(x))
    }
}

/// Mass, frequency and cutting length of a harmonic oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    /// `f64::INFINITY` means no cutting.
    pub cutting_length: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, cutting_length: f64) -> Result<Self> {
        positive("mass", mass)?;
        positive("omega", omega)?;
        if !(cutting_length > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("cutting length must be positive, got {cutting_length}"),
            });
        }
        Ok(Self {
            mass,
            omega,
            cutting_length,
        })
    }

    /// ℏ = m = ω = 1 with cutting length `a`.
    pub fn dimensionless(a: f64) -> Result<Self> {
        Self::new(1.0, 1.0, a)
    }

    pub fn cutting(&self) -> CuttingFunction {
        if self.cutting_length.is_infinite() {
            CuttingFunction::Identity
        } else {
            CuttingFunction::Gaussian {
                a: self.cutting_length,
            }
        }
    }

    pub fn potential(&self) -> PotentialSpec {
        PotentialSpec::Harmonic {
            mass: self.mass,
            omega: self.omega,
        }
    }
}

/// The classical potential V(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialSpec {
    /// (m/2)ω²x².
    Harmonic { mass: f64, omega: f64 },
    /// V ≡ 0; confinement comes from Dirichlet walls at the grid ends.
    #[serde(rename = "box")]
    FreeBox,
    /// Piecewise-linear interpolation of samples.
    Tabulated(Table),
}

impl PotentialSpec {
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        Ok(PotentialSpec::Harmonic {
            mass: positive("mass", mass)?,
            omega: positive("omega", omega)?,
        })
    }
}

impl Potential1D for PotentialSpec {
    fn eval(&self, x: f64) -> Result<f64> {
        match self {
            PotentialSpec::Harmonic { mass, omega } => Ok(0.5 * mass * omega * omega * x * x),
            PotentialSpec::FreeBox => Ok(0.0),
            PotentialSpec::Tabulated(t) => t.interpolate(x),
        }
    }

    fn domain(&self) -> (f64, f64) {
        match self {
            PotentialSpec::Tabulated(t) => (t.first(), t.last()),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// x ↦ V(x) + (ℏ²/2m)·Δf(x)/f(x) in one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePotential<'a> {
    potential: &'a PotentialSpec,
    cutting: &'a CuttingFunction,
    mass: f64,
    hbar: f64,
}

impl<'a> EffectivePotential<'a> {
    pub fn curvature_term(&self, x: f64) -> Result<f64> {
        if self.cutting.is_identity() {
            return Ok(0.0);
        }
        Ok(self.hbar * self.hbar / (2.0 * self.mass) * self.cutting.laplacian_ratio(x, 1)?)
    }
}

impl Potential1D for EffectivePotential<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        let v = self.potential.eval(x)?;
        if self.cutting.is_identity() {
            // leaves the unmodified problem untouched bit for bit
            return Ok(v);
        }
        Ok(v + self.curvature_term(x)?)
    }

    fn domain(&self) -> (f64, f64) {
        let (p0, p1) = self.potential.domain();
        let (c0, c1) = self.cutting.domain();
        (p0.max(c0), p1.min(c1))
    }
}

pub fn effective_potential<'a>(
    potential: &'a PotentialSpec,
    cutting: &'a CuttingFunction,
    mass: f64,
    hbar: f64,
) -> Result<EffectivePotential<'a>> {
    positive("mass", mass)?;
    positive("hbar", hbar)?;
    Ok(EffectivePotential {
        potential,
        cutting,
        mass,
        hbar,
    })
}

/// (ℏ²/2ma²)(x²/a² − 1): the wall a Gaussian cutting of length `a` adds to
/// any potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumWall {
    a: f64,
    mass: f64,
    hbar: f64,
}

impl Potential1D for QuantumWall {
    fn eval(&self, x: f64) -> Result<f64> {
        let a2 = self.a * self.a;
        Ok(self.hbar * self.hbar / (2.0 * self.mass * a2) * (x * x / a2 - 1.0))
    }
}

pub fn quantum_wall(a: f64, mass: f64, hbar: f64) -> Result<QuantumWall> {
    Ok(QuantumWall {
        a: positive("a", a)?,
        mass: positive("mass", mass)?,
        hbar: positive("hbar", hbar)?,
    })
}
