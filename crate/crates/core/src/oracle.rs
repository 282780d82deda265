//! Independent reference computations for test suites. Nothing here is used
//! by the solver.

use crate::solver::TridiagonalSymmetric;

/// Dense copy of a tridiagonal matrix.
pub fn dense(matrix: &TridiagonalSymmetric) -> Vec<Vec<f64>> {
    let n = matrix.order();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = matrix.diagonal()[i];
        if i + 1 < n {
            a[i][i + 1] = matrix.off_diagonal()[i];
            a[i + 1][i] = matrix.off_diagonal()[i];
        }
    }
    a
}

/// All eigenvalues of a dense symmetric matrix, ascending, by cyclic Jacobi
/// rotations.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Every ordered index tuple in `[0, max_index]^dims`, visited exhaustively.
pub fn index_tuples(dims: usize, max_index: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=max_index).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Degeneracy of each total quantum number N ≤ `max_quanta` in `dims`
/// dimensions, by counting tuples.
pub fn degeneracies_by_enumeration(dims: usize, max_quanta: usize) -> Vec<u64> {
    let mut counts = vec![0u64; max_quanta + 1];
    for t in index_tuples(dims, max_quanta) {
        let n: usize = t.iter().sum();
        if n <= max_quanta {
            counts[n] += 1;
        }
    }
    counts
}
