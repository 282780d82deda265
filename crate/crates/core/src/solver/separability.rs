//! Isotropic D-dimensional levels assembled from 1D levels.

use serde::Serialize;

use crate::error::{Error, Result};

/// Sums closer than this (relative) are one level.
const MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DdimLevel {
    pub energy: f64,
    /// Number of ordered index tuples (n₁, …, n_D) with this energy.
    pub degeneracy: u64,
}

/// The lowest `count` distinct energies E = Σᵢ ε(nᵢ) of a separable
/// D-dimensional Hamiltonian, given the ascending 1D levels ε.
///
/// With `relative_to_ground` the energies are reported relative to the
/// D-dimensional ground level. Only levels that cannot involve a 1D level
/// beyond the supplied list are returned; asking for more is an error.
pub fn ddim_levels_by_separability(
    levels_1d: &[f64],
    relative_to_ground: bool,
    dims: usize,
    count: usize,
) -> Result<Vec<DdimLevel>> {
    if levels_1d.is_empty() {
        return Err(Error::EmptyLevels);
    }
    if dims == 0 || count == 0 {
        return Err(Error::InvalidParameter {
            name: if dims == 0 { "dims" } else { "count" },
            reason: "must be at least 1".into(),
        });
    }
    if levels_1d.iter().any(|l| !l.is_finite()) || levels_1d.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter {
            name: "levels_1d",
            reason: "1D levels must be finite and ascending".into(),
        });
    }

    let ground = levels_1d[0];
    let highest = levels_1d[levels_1d.len() - 1];
    let resolvable = (dims - 1) as f64 * ground + highest;

    let mut partial = vec![DdimLevel {
        energy: 0.0,
        degeneracy: 1,
    }];
    for _ in 0..dims {
        let mut sums: Vec<DdimLevel> = partial
            .iter()
            .flat_map(|p| {
                levels_1d.iter().map(move |l| DdimLevel {
                    energy: p.energy + l,
                    degeneracy: p.degeneracy,
                })
            })
            .collect();
        sums.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        partial = merge(&sums);
        // a partial sum outside the lowest `count` can only feed levels above them
        partial.truncate(count);
    }

    let cutoff = resolvable + MERGE_TOLERANCE * resolvable.abs();
    let available: Vec<DdimLevel> = partial.into_iter().filter(|l| l.energy <= cutoff).collect();
    if available.len() < count {
        return Err(Error::InsufficientLevels {
            requested: count,
            available: available.len(),
        });
    }
    let origin = if relative_to_ground {
        available[0].energy
    } else {
        0.0
    };
    Ok(available
        .into_iter()
        .map(|l| DdimLevel {
            energy: l.energy - origin,
            ..l
        })
        .collect())
}

fn merge(sorted: &[DdimLevel]) -> Vec<DdimLevel> {
    let mut out: Vec<DdimLevel> = Vec::new();
    let mut anchor = f64::NAN;
    let mut weighted = 0.0;
    for s in sorted {
        let same = out.last().is_some()
            && (s.energy - anchor).abs() <= MERGE_TOLERANCE * s.energy.abs().max(anchor.abs());
        if same {
            let last = out.last_mut().expect("checked above");
            weighted += s.energy * s.degeneracy as f64;
            last.degeneracy += s.degeneracy;
            last.energy = weighted / last.degeneracy as f64;
        } else {
            anchor = s.energy;
            weighted = s.energy * s.degeneracy as f64;
            out.push(*s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ddim_degeneracy;

    fn exact_1d(k: usize, spacing: f64, shift: f64) -> Vec<f64> {
        (0..k).map(|n| (n as f64 + 0.5) * spacing - shift).collect()
    }

    #[test]
    fn one_dimension_is_identity() {
        let l = [0.3, 1.1, 2.9, 4.0];
        let out = ddim_levels_by_separability(&l, false, 1, 4).unwrap();
        assert_eq!(out.iter().map(|l| l.energy).collect::<Vec<_>>(), l);
        assert!(out.iter().all(|l| l.degeneracy == 1));
    }

    #[test]
    fn two_dimensional_oscillator_degeneracy() {
        let wb = 1.0625f64.sqrt();
        let levels = exact_1d(8, wb, 0.125);
        let out = ddim_levels_by_separability(&levels, false, 2, 8).unwrap();
        for (n, l) in out.iter().enumerate() {
            assert_eq!(l.degeneracy, n as u64 + 1);
            let expected = (n as f64 + 1.0) * wb - 0.25;
            assert!((l.energy - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn three_dimensional_ground_level() {
        let levels = exact_1d(3, 1.0625f64.sqrt(), 0.125);
        let out = ddim_levels_by_separability(&levels, false, 3, 3).unwrap();
        assert!((out[0].energy - 1.1711646096).abs() < 1e-9);
        for (n, l) in out.iter().enumerate() {
            assert_eq!(l.degeneracy, ddim_degeneracy(n as u32, 3));
        }
    }

    #[test]
    fn relative_to_ground() {
        let levels = exact_1d(4, 1.0, 0.0);
        let out = ddim_levels_by_separability(&levels, true, 3, 4).unwrap();
        assert_eq!(out[0].energy, 0.0);
        assert!((out[3].energy - 3.0).abs() < 1e-12);
    }

    #[test]
    fn asking_beyond_the_list_fails() {
        let levels = exact_1d(3, 1.0, 0.0);
        assert_eq!(
            ddim_levels_by_separability(&levels, false, 2, 4),
            Err(Error::InsufficientLevels { requested: 4, available: 3 })
        );
        assert_eq!(
            ddim_levels_by_separability(&[], false, 2, 1),
            Err(Error::EmptyLevels)
        );
        assert!(ddim_levels_by_separability(&[1.0, 0.5], false, 2, 1).is_err());
    }

    #[test]
    fn near_equal_sums_merge() {
        let levels = [0.5, 1.5 * (1.0 + 1e-12), 2.5];
        let out = ddim_levels_by_separability(&levels, false, 2, 3).unwrap();
        assert_eq!(out[2].degeneracy, 3);
    }

    #[test]
    fn non_equispaced_levels() {
        // box-like 1D spectrum: no accidental degeneracy among the lowest sums
        let levels: Vec<f64> = (1..=6).map(|k| (k * k) as f64).collect();
        let out = ddim_levels_by_separability(&levels, false, 2, 4).unwrap();
        let pairs: Vec<(f64, u64)> = out.iter().map(|l| (l.energy, l.degeneracy)).collect();
        assert_eq!(pairs, vec![(2.0, 1), (5.0, 2), (8.0, 1), (10.0, 2)]);
    }
}
