//! Order-of-magnitude estimates for many coherent degrees of freedom.
//!
//! Each of D degrees of freedom picks up a relative correction of order δ²;
//! in a coherent state the figure of merit is D·δ².

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::DeltaParameter;
use crate::error::{Error, Result};
use crate::units::{neutron_star, BOHR_RADIUS_CM};

/// Inputs for one estimate. Lengths in cm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarParameters {
    pub label: String,
    /// Macroscopic cutting length a, taken as the star radius.
    pub radius: f64,
    /// Number of coherent degrees of freedom D; only its magnitude matters.
    pub particle_count: f64,
    /// Microscopic length ℓ entering δ = (ℓ/a)².
    pub micro_length: f64,
    /// Use this δ instead of (ℓ/a)².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_override: Option<f64>,
}

impl Default for StarParameters {
    fn default() -> Self {
        Self {
            label: "neutron star".into(),
            radius: neutron_star::RADIUS_CM,
            particle_count: neutron_star::NEUTRON_COUNT,
            micro_length: BOHR_RADIUS_CM,
            delta_override: None,
        }
    }
}

impl StarParameters {
    pub fn validate(&self) -> Result<()> {
        if !(self.particle_count >= 1.0) || !self.particle_count.is_finite() {
            return Err(Error::InvalidParameter {
                name: "particle_count",
                reason: format!("must be a finite count of at least 1, got {}", self.particle_count),
            });
        }
        DeltaParameter::from_lengths(self.micro_length, self.radius)?;
        if let Some(d) = self.delta_override {
            DeltaParameter::new(d)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaSource {
    /// δ = (ℓ/a)².
    Derived,
    /// δ supplied directly.
    Override,
}

/// Result of one estimate, with base-10 magnitudes next to exact values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub inputs: StarParameters,
    pub delta: DeltaParameter,
    pub delta_source: DeltaSource,
    /// (ℓ/a)², reported even when overridden.
    pub derived_delta: DeltaParameter,
    pub delta_squared: f64,
    pub amplification: f64,
    pub log10_delta: f64,
    pub log10_delta_squared: f64,
    pub log10_amplification: f64,
    pub order_delta: i32,
    pub order_delta_squared: i32,
    pub order_amplification: i32,
}

/// Nearest integer power of ten, round(log₁₀|x|).
pub fn order_of_magnitude(x: f64) -> i32 {
    if x == 0.0 || !x.is_finite() {
        return i32::MIN;
    }
    x.abs().log10().round() as i32
}

/// (ℓ/a)² for 0 < ℓ < a.
pub fn delta_from_lengths(micro: f64, macro_length: f64) -> Result<DeltaParameter> {
    DeltaParameter::from_lengths(micro, macro_length)
}

/// D·δ².
pub fn amplification(particle_count: f64, delta: DeltaParameter) -> Result<f64> {
    if !(particle_count >= 1.0) || !particle_count.is_finite() {
        return Err(Error::InvalidParameter {
            name: "particle_count",
            reason: format!("must be a finite count of at least 1, got {particle_count}"),
        });
    }
    Ok(particle_count * delta.squared())
}

pub fn estimate(params: &StarParameters) -> Result<EstimateReport> {
    params.validate()?;
    let derived = delta_from_lengths(params.micro_length, params.radius)?;
    let (delta, source) = match params.delta_override {
        Some(d) => (DeltaParameter::new(d)?, DeltaSource::Override),
        None => (derived, DeltaSource::Derived),
    };
    let delta_squared = delta.squared();
    let amp = amplification(params.particle_count, delta)?;
    Ok(EstimateReport {
        inputs: params.clone(),
        delta,
        delta_source: source,
        derived_delta: derived,
        delta_squared,
        amplification: amp,
        log10_delta: delta.value().log10(),
        log10_delta_squared: delta_squared.log10(),
        log10_amplification: amp.log10(),
        order_delta: order_of_magnitude(delta.value()),
        order_delta_squared: order_of_magnitude(delta_squared),
        order_amplification: order_of_magnitude(amp),
    })
}

/// Which input a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    Radius,
    ParticleCount,
    MicroLength,
    Delta,
}

impl SweepParameter {
    fn apply(self, base: &StarParameters, value: f64) -> StarParameters {
        let mut p = base.clone();
        match self {
            SweepParameter::Radius => p.radius = value,
            SweepParameter::ParticleCount => p.particle_count = value,
            SweepParameter::MicroLength => p.micro_length = value,
            SweepParameter::Delta => p.delta_override = Some(value),
        }
        p
    }
}

/// One estimate per value, in input order. Invalid entries are reported in
/// place without stopping the sweep.
pub fn sweep(
    base: &StarParameters,
    vary: SweepParameter,
    values: &[f64],
) -> Vec<Result<EstimateReport>> {
    values
        .par_iter()
        .map(|&v| {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "values",
                    reason: format!("sweep values must be positive, got {v}"),
                });
            }
            estimate(&vary.apply(base, v))
        })
        .collect()
}
