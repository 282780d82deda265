use fquant::oracle::{dense, jacobi_eigenvalues};
use fquant::solver::{inverse_iteration, lowest_eigenvalues};
use fquant::TridiagonalSymmetric;
use proptest::prelude::*;

fn tridiagonal() -> impl Strategy<Value = TridiagonalSymmetric> {
    (1usize..=40, -4.0f64..4.0).prop_flat_map(|(n, log_scale)| {
        let scale = 10f64.powf(log_scale);
        (
            prop::collection::vec(-1.0f64..1.0, n),
            prop::collection::vec(-1.0f64..1.0, n - 1),
        )
            .prop_map(move |(d, e)| {
                TridiagonalSymmetric::new(
                    d.into_iter().map(|x| x * scale).collect(),
                    e.into_iter().map(|x| x * scale).collect(),
                )
                .unwrap()
            })
    })
}

fn matvec(t: &TridiagonalSymmetric, v: &[f64]) -> Vec<f64> {
    let (d, e) = (t.diagonal(), t.off_diagonal());
    (0..v.len())
        .map(|i| {
            let mut s = d[i] * v[i];
            if i > 0 {
                s += e[i - 1] * v[i - 1];
            }
            if i + 1 < v.len() {
                s += e[i] * v[i + 1];
            }
            s
        })
        .collect()
}

proptest! {
    #[test]
    fn bisection_agrees_with_jacobi(t in tridiagonal()) {
        let norm = t.gershgorin_radius().max(f64::MIN_POSITIVE);
        let ours = lowest_eigenvalues(&t, t.order()).unwrap();
        let oracle = jacobi_eigenvalues(dense(&t));
        for (x, y) in ours.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-10 * norm, "{x} vs {y}");
        }
    }

    #[test]
    fn sturm_count_matches_oracle(t in tridiagonal(), probe in -1.0f64..1.0) {
        let x = probe * t.gershgorin_radius();
        let oracle = jacobi_eigenvalues(dense(&t));
        let gap = oracle.iter().map(|l| (l - x).abs()).fold(f64::INFINITY, f64::min);
        // counts are only well defined away from an eigenvalue
        prop_assume!(gap > 1e-9 * t.gershgorin_radius().max(f64::MIN_POSITIVE));
        let expected = oracle.iter().filter(|&&l| l < x).count();
        prop_assert_eq!(t.count_below(x), expected);
    }

    #[test]
    fn leading_blocks_interlace(t in tridiagonal()) {
        let n = t.order();
        prop_assume!(n >= 2);
        let slack = 1e-12 * t.gershgorin_radius();
        let full = lowest_eigenvalues(&t, n).unwrap();
        let block = lowest_eigenvalues(&t.leading(n - 1).unwrap(), n - 1).unwrap();
        for j in 0..n - 1 {
            prop_assert!(full[j] <= block[j] + slack);
            prop_assert!(block[j] <= full[j + 1] + slack);
        }
    }

    #[test]
    fn eigenvectors_have_small_residuals(t in tridiagonal()) {
        let norm = t.gershgorin_radius();
        prop_assume!(norm > 0.0);
        let values = lowest_eigenvalues(&t, t.order().min(3)).unwrap();
        for &l in &values {
            let v = inverse_iteration(&t, l).unwrap();
            let len: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((len - 1.0).abs() < 1e-10);
            let av = matvec(&t, &v);
            let residual = av
                .iter()
                .zip(&v)
                .map(|(a, x)| (a - l * x).powi(2))
                .sum::<f64>()
                .sqrt();
            // clustered eigenvalues only pin down the invariant subspace
            prop_assert!(residual <= 1e-8 * norm, "residual {residual:e}");
        }
    }
}

#[test]
fn second_difference_matrix() {
    // eigenvalues 2 - 2cos(kπ/(n+1))
    let n = 30;
    let t = TridiagonalSymmetric::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
    let ev = lowest_eigenvalues(&t, n).unwrap();
    for (k, l) in ev.iter().enumerate() {
        let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
        assert!((l - exact).abs() < 1e-13, "{l} vs {exact}");
    }
}
