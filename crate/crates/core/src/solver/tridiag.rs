//! Symmetric tridiagonal matrices: finite-difference assembly, Sturm-sequence
//! bisection for the lowest eigenvalues, and inverse iteration.

use serde::Serialize;

use super::Grid1D;
use crate::error::{positive, Error, Result};
use crate::potential::Potential1D;

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagonalSymmetric {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalSymmetric {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::InvalidParameter {
                name: "diagonal",
                reason: "matrix must have order at least 1".into(),
            });
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::LengthMismatch {
                expected: diagonal.len() - 1,
                found: off_diagonal.len(),
            });
        }
        if diagonal.iter().chain(&off_diagonal).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "diagonal",
                reason: "all entries must be finite".into(),
            });
        }
        Ok(Self {
            diagonal,
            off_diagonal,
        })
    }

    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// Leading principal submatrix of order `m`.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.order() {
            return Err(Error::TooManyLevels {
                requested: m,
                order: self.order(),
            });
        }
        Self::new(self.diagonal[..m].to_vec(), self.off_diagonal[..m - 1].to_vec())
    }

    /// Union of the Gershgorin discs, `(lo, hi)`.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// max(|lo|, |hi|) of the Gershgorin interval; bounds the spectral norm.
    pub fn gershgorin_radius(&self) -> f64 {
        let (lo, hi) = self.gershgorin_bounds();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the LDLᵀ
    /// pivots of T − xI.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diagonal[0] - x;
        for i in 0..self.order() {
            if i > 0 {
                let e = self.off_diagonal[i - 1];
                q = (self.diagonal[i] - x) - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self
            .off_diagonal
            .iter()
            .fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }
}

/// Assembles −(ℏ²/2m) d²/dx² + V_eff on the interior nodes of `grid`, with
/// Dirichlet walls at both ends.
pub fn discretize<P: Potential1D + ?Sized>(
    potential: &P,
    grid: &Grid1D,
    mass: f64,
    hbar: f64,
) -> Result<TridiagonalSymmetric> {
    positive("mass", mass)?;
    positive("hbar", hbar)?;
    let h = grid.spacing();
    let kinetic = hbar * hbar / (2.0 * mass * h * h);
    let order = grid.n_points() - 2;
    let mut diagonal = Vec::with_capacity(order);
    for i in 1..=order {
        let x = grid.node(i);
        let v = potential.eval(x)?;
        if !v.is_finite() {
            return Err(Error::NonFinitePotential { x });
        }
        diagonal.push(2.0 * kinetic + v);
    }
    TridiagonalSymmetric::new(diagonal, vec![-kinetic; order - 1])
}

/// The `k` smallest eigenvalues in ascending order, by Sturm bisection. Each
/// is bracketed until the interval cannot be halved in floating point, which
/// is well inside 1e-12 of the Gershgorin radius.
pub fn lowest_eigenvalues(matrix: &TridiagonalSymmetric, k: usize) -> Result<Vec<f64>> {
    let n = matrix.order();
    if k > n {
        return Err(Error::TooManyLevels {
            requested: k,
            order: n,
        });
    }
    let (lo, hi) = matrix.gershgorin_bounds();
    let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) * n as f64;
    let (lo, hi) = (lo - pad, hi + pad);

    let mut eigenvalues = Vec::with_capacity(k);
    let mut floor = lo;
    for j in 0..k {
        let (mut a, mut b) = (floor, hi);
        loop {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
                break;
            }
            if matrix.count_below(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lambda = 0.5 * (a + b);
        eigenvalues.push(lambda);
        floor = a;
    }
    Ok(eigenvalues)
}

/// Normalized eigenvector for the eigenvalue `lambda` by inverse iteration.
pub fn inverse_iteration(matrix: &TridiagonalSymmetric, lambda: f64) -> Result<Vec<f64>> {
    let n = matrix.order();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let scale = matrix.gershgorin_radius().max(f64::MIN_POSITIVE);
    let shift = lambda + 64.0 * f64::EPSILON * scale;
    let lu = BandLu::factor(matrix, shift);
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.1 * ((i as f64) * 0.754_877_666).sin())
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        lu.solve(&mut v);
        normalize(&mut v);
    }
    // fix the sign so the largest component is positive
    let largest = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if largest < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(v)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// LU with partial pivoting of T − σI, kept in banded form (one sub-, two
/// super-diagonals).
struct BandLu {
    multipliers: Vec<f64>,
    swapped: Vec<bool>,
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl BandLu {
    fn factor(matrix: &TridiagonalSymmetric, shift: f64) -> Self {
        let n = matrix.order();
        let e = matrix.off_diagonal();
        let tiny = f64::EPSILON * matrix.gershgorin_radius().max(f64::MIN_POSITIVE);
        let mut u0: Vec<f64> = matrix.diagonal().iter().map(|d| d - shift).collect();
        let mut u1 = e.to_vec();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut sub = e.to_vec();
        let mut multipliers = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if sub[i].abs() > u0[i].abs() {
                // swap rows i and i+1
                swapped[i] = true;
                let (a0, a1, a2) = (u0[i], u1[i], u2[i]);
                let (b0, b1) = (sub[i], u0[i + 1]);
                let b2 = if i + 1 < n - 1 { u1[i + 1] } else { 0.0 };
                u0[i] = b0;
                u1[i] = b1;
                u2[i] = b2;
                let m = a0 / b0;
                multipliers[i] = m;
                u0[i + 1] = a1 - m * b1;
                if i + 1 < n - 1 {
                    u1[i + 1] = a2 - m * b2;
                }
            } else {
                if u0[i] == 0.0 {
                    u0[i] = tiny;
                }
                let m = sub[i] / u0[i];
                multipliers[i] = m;
                u0[i + 1] -= m * u1[i];
            }
            sub[i] = 0.0;
        }
        if u0[n - 1] == 0.0 {
            u0[n - 1] = tiny;
        }
        Self {
            multipliers,
            swapped,
            u0,
            u1,
            u2,
        }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                rhs.swap(i, i + 1);
            }
            rhs[i + 1] -= self.multipliers[i] * rhs[i];
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= self.u1[i] * rhs[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * rhs[i + 2];
            }
            rhs[i] = s / self.u0[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::SQRT_2;

    fn toeplitz(n: usize, d: f64, e: f64) -> TridiagonalSymmetric {
        TridiagonalSymmetric::new(vec![d; n], vec![e; n - 1]).unwrap()
    }

    #[test]
    fn free_stencil_on_five_points() {
        let grid = Grid1D::new(0.0, 4.0, 5).unwrap();
        let t = discretize(&|_x: f64| 0.0, &grid, 1.0, 1.0).unwrap();
        assert_eq!(t.diagonal(), &[1.0, 1.0, 1.0]);
        assert_eq!(t.off_diagonal(), &[-0.5, -0.5]);
    }

    #[test]
    fn toeplitz_spectrum() {
        let ev = lowest_eigenvalues(&toeplitz(3, 2.0, -1.0), 3).unwrap();
        let expected = [2.0 - SQRT_2, 2.0, 2.0 + SQRT_2];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{ev:?}");
        }
        let n = 40;
        let ev = lowest_eigenvalues(&toeplitz(n, 2.0, -1.0), n).unwrap();
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn diagonal_matrix() {
        let t = TridiagonalSymmetric::new(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let ev = lowest_eigenvalues(&t, 2).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] - 2.0).abs() < 1e-15, "{ev:?}");
    }

    #[test]
    fn too_many_levels() {
        let t = toeplitz(3, 2.0, -1.0);
        assert_eq!(
            lowest_eigenvalues(&t, 4),
            Err(Error::TooManyLevels { requested: 4, order: 3 })
        );
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(TridiagonalSymmetric::new(vec![], vec![]).is_err());
        assert!(TridiagonalSymmetric::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalSymmetric::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn non_finite_potential_is_reported() {
        let grid = Grid1D::new(-1.0, 1.0, 5).unwrap();
        let err = discretize(&|x: f64| 1.0 / x, &grid, 1.0, 1.0).unwrap_err();
        assert_eq!(err, Error::NonFinitePotential { x: 0.0 });
    }

    #[test]
    fn count_below_matches_eigenvalues() {
        let t = toeplitz(10, 2.0, -1.0);
        let ev = lowest_eigenvalues(&t, 10).unwrap();
        for (j, e) in ev.iter().enumerate() {
            assert_eq!(t.count_below(e - 1e-9), j);
            assert_eq!(t.count_below(e + 1e-9), j + 1);
        }
    }

    #[test]
    fn single_element() {
        let t = TridiagonalSymmetric::new(vec![-4.5], vec![]).unwrap();
        assert_eq!(lowest_eigenvalues(&t, 1).unwrap(), vec![-4.5]);
        assert_eq!(inverse_iteration(&t, -4.5).unwrap(), vec![1.0]);
    }

    #[test]
    fn inverse_iteration_residual() {
        let t = TridiagonalSymmetric::new(
            vec![4.0, -1.0, 2.5, 0.3, 7.0, 1.0],
            vec![1.0, -2.0, 0.5, 0.0, 3.0],
        )
        .unwrap();
        for lambda in lowest_eigenvalues(&t, 6).unwrap() {
            let v = inverse_iteration(&t, lambda).unwrap();
            let n = v.len();
            let mut residual = 0.0f64;
            for i in 0..n {
                let mut tv = t.diagonal()[i] * v[i];
                if i > 0 {
                    tv += t.off_diagonal()[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += t.off_diagonal()[i] * v[i + 1];
                }
                residual = residual.max((tv - lambda * v[i]).abs());
            }
            assert!(residual < 1e-10, "λ={lambda} residual {residual}");
            assert_relative_eq!(v.iter().map(|x| x * x).sum::<f64>(), 1.0, max_relative = 1e-12);
        }
    }
}
