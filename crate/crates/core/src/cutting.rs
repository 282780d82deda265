//! Cutting functions f(r) and the curvature term Δf/f they add to the
//! Hamiltonian.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::Table;

/// A strictly positive classical function f used to rewrite p² as
/// f⁻¹ p f² p f⁻¹ before quantization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CuttingFunction {
    /// f ≡ 1: ordinary quantization.
    Identity,
    /// f = exp(−r²/2a²).
    Gaussian { a: f64 },
    /// Positive samples; one-dimensional only.
    Tabulated(Table),
}

impl CuttingFunction {
    /// Gaussian cutting of length `a`. An infinite `a` is the identity.
    pub fn gaussian(a: f64) -> Result<Self> {
        if a == f64::INFINITY {
            return Ok(CuttingFunction::Identity);
        }
        if !(a > 0.0) || a.is_nan() {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("cutting length must be positive, got {a}"),
            });
        }
        Ok(CuttingFunction::Gaussian { a })
    }

    pub fn tabulated(table: Table) -> Result<Self> {
        if let Some((x, v)) = table
            .abscissae()
            .iter()
            .zip(table.values())
            .find(|(_, v)| !(**v > 0.0))
        {
            return Err(Error::NonPositiveCutting { x: *x, value: *v });
        }
        if table.len() < 3 {
            return Err(Error::InvalidTable(
                "a tabulated cutting function needs at least three rows".into(),
            ));
        }
        Ok(CuttingFunction::Tabulated(table))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CuttingFunction::Identity)
    }

    /// Cutting length, infinite for the identity; `None` for tables.
    pub fn length(&self) -> Option<f64> {
        match self {
            CuttingFunction::Identity => Some(f64::INFINITY),
            CuttingFunction::Gaussian { a } => Some(*a),
            CuttingFunction::Tabulated(_) => None,
        }
    }

    /// f at radius `r`.
    pub fn value(&self, r: f64) -> Result<f64> {
        let v = match self {
            CuttingFunction::Identity => 1.0,
            CuttingFunction::Gaussian { a } => (-r * r / (2.0 * a * a)).exp(),
            CuttingFunction::Tabulated(t) => t.interpolate(r)?,
        };
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonPositiveCutting { x: r, value: v })
        }
    }

    /// Δf/f at radius `r` in `dims` dimensions.
    pub fn laplacian_ratio(&self, r: f64, dims: usize) -> Result<f64> {
        if dims == 0 {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: "dimension must be at least 1".into(),
            });
        }
        match self {
            CuttingFunction::Identity => Ok(0.0),
            CuttingFunction::Gaussian { a } => {
                let a2 = a * a;
                Ok(r * r / (a2 * a2) - dims as f64 / a2)
            }
            CuttingFunction::Tabulated(t) => {
                if dims != 1 {
                    return Err(Error::TableDimension(dims));
                }
                t.curvature_ratio(r)
            }
        }
    }

    /// Interval on which Δf/f can be evaluated.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            CuttingFunction::Tabulated(t) => t.curvature_range(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// Free-function form of [`CuttingFunction::laplacian_ratio`].
pub fn laplacian_ratio(f: &CuttingFunction, x: f64, dims: usize) -> Result<f64> {
    f.laplacian_ratio(x, dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_examples() {
        let f = CuttingFunction::gaussian(2.0).unwrap();
        assert_eq!(f.laplacian_ratio(0.0, 1).unwrap(), -0.25);
        assert_eq!(f.laplacian_ratio(2.0, 1).unwrap(), 0.0);
        assert_eq!(f.value(2.0).unwrap(), (-0.5f64).exp());
        assert_eq!(f.laplacian_ratio(0.0, 3).unwrap(), -0.75);
    }

    #[test]
    fn identity_is_flat() {
        let f = CuttingFunction::Identity;
        for x in [-10.0, 0.0, 3.5, 1e9] {
            assert_eq!(f.laplacian_ratio(x, 1).unwrap(), 0.0);
            assert_eq!(f.value(x).unwrap(), 1.0);
        }
        assert_eq!(CuttingFunction::gaussian(f64::INFINITY).unwrap(), f);
    }

    #[test]
    fn rejects_bad_lengths() {
        for a in [0.0, -1.0, f64::NAN] {
            assert!(CuttingFunction::gaussian(a).is_err());
        }
        assert!(CuttingFunction::Identity.laplacian_ratio(0.0, 0).is_err());
    }

    #[test]
    fn tabulated_gaussian_matches_closed_form_at_second_order() {
        let a = 1.5;
        let exact = CuttingFunction::gaussian(a).unwrap();
        let x = 0.6;
        let mut errors = Vec::new();
        for n in [101, 201, 401, 801] {
            let t = Table::sample(-6.0, 6.0, n, |x| (-x * x / (2.0 * a * a)).exp()).unwrap();
            let f = CuttingFunction::tabulated(t).unwrap();
            let got = f.laplacian_ratio(x, 1).unwrap();
            errors.push((got - exact.laplacian_ratio(x, 1).unwrap()).abs());
        }
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}, errors {errors:?}");
        }
    }

    #[test]
    fn tabulated_rules() {
        let t = Table::sample(-1.0, 1.0, 11, |_| 1.0).unwrap();
        let f = CuttingFunction::tabulated(t).unwrap();
        assert!(matches!(
            f.laplacian_ratio(0.0, 2),
            Err(Error::TableDimension(2))
        ));
        assert!(matches!(
            f.laplacian_ratio(1.0, 1),
            Err(Error::OutsideTable { .. })
        ));
        let bad = Table::new(vec![0.0, 1.0, 2.0], vec![1.0, -1.0, 1.0]).unwrap();
        assert!(CuttingFunction::tabulated(bad).is_err());
    }
}
