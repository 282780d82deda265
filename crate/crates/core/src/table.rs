//! Two-column tabulated functions.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples (xᵢ, yᵢ) with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    abscissae: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    pub fn new(abscissae: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(Error::InvalidTable(format!(
                "{} abscissae but {} values",
                abscissae.len(),
                values.len()
            )));
        }
        if abscissae.len() < 2 {
            return Err(Error::InvalidTable("need at least two rows".into()));
        }
        if let Some((x, y)) = abscissae
            .iter()
            .zip(&values)
            .find(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::InvalidTable(format!("non-finite row ({x}, {y})")));
        }
        if let Some(w) = abscissae.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTable(format!(
                "abscissae must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { abscissae, values })
    }

    /// Samples `func` at `n` equispaced points on `[lo, hi]`.
    pub fn sample(lo: f64, hi: f64, n: usize, func: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::InvalidTable(format!(
                "cannot sample {n} points on [{lo}, {hi}]"
            )));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
        let ys = xs.iter().map(|&x| func(x)).collect();
        Self::new(xs, ys)
    }

    /// Reads a two-column CSV (abscissa, value). A first row whose leading
    /// field is not a number is treated as a header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidTable(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::InvalidTable(format!(
                    "row {} has {} columns, expected 2",
                    line + 1,
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(x), Ok(y)) => {
                    xs.push(x);
                    ys.push(y);
                }
                _ if line == 0 => continue,
                _ => {
                    return Err(Error::InvalidTable(format!(
                        "row {} is not numeric: {:?}",
                        line + 1,
                        record.iter().collect::<Vec<_>>()
                    )))
                }
            }
        }
        Self::new(xs, ys)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.abscissae[0]
    }

    pub fn last(&self) -> f64 {
        self.abscissae[self.abscissae.len() - 1]
    }

    /// Index `i` such that `x` lies in `[xᵢ, xᵢ₊₁]`, restricted to nodes
    /// `lo..=hi`.
    fn bracket(&self, x: f64, lo: usize, hi: usize) -> Result<usize> {
        let (min, max) = (self.abscissae[lo], self.abscissae[hi]);
        if !(x >= min && x <= max) {
            return Err(Error::OutsideTable { x, min, max });
        }
        let k = self.abscissae[lo..=hi].partition_point(|&a| a <= x);
        Ok((lo + k).saturating_sub(1).min(hi - 1).max(lo))
    }

    /// Piecewise-linear interpolation.
    pub fn interpolate(&self, x: f64) -> Result<f64> {
        let i = self.bracket(x, 0, self.len() - 1)?;
        Ok(lerp(
            self.abscissae[i],
            self.abscissae[i + 1],
            self.values[i],
            self.values[i + 1],
            x,
        ))
    }

    /// f″/f at interior node `i` from the three-point central difference.
    fn node_curvature_ratio(&self, i: usize) -> Result<f64> {
        let (x0, x1, x2) = (self.abscissae[i - 1], self.abscissae[i], self.abscissae[i + 1]);
        let (f0, f1, f2) = (self.values[i - 1], self.values[i], self.values[i + 1]);
        for (x, f) in [(x0, f0), (x1, f1), (x2, f2)] {
            if !(f > 0.0) {
                return Err(Error::NonPositiveCutting { x, value: f });
            }
        }
        let (hl, hr) = (x1 - x0, x2 - x1);
        let second = 2.0 * ((f2 - f1) / hr - (f1 - f0) / hl) / (hl + hr);
        Ok(second / f1)
    }

    /// f″/f at `x` for positive tabulated `f`: central differences at the
    /// interior nodes, linearly interpolated. The first and last node have no
    /// central stencil, so `x` must lie within `[x₁, x_{n−2}]`.
    pub fn curvature_ratio(&self, x: f64) -> Result<f64> {
        let n = self.len();
        if n < 3 {
            return Err(Error::InvalidTable(
                "a second derivative needs at least three rows".into(),
            ));
        }
        if n == 3 {
            let (min, max) = (self.abscissae[1], self.abscissae[1]);
            if x != min {
                return Err(Error::OutsideTable { x, min, max });
            }
            return self.node_curvature_ratio(1);
        }
        let i = self.bracket(x, 1, n - 2)?;
        let r0 = self.node_curvature_ratio(i)?;
        let r1 = self.node_curvature_ratio(i + 1)?;
        Ok(lerp(self.abscissae[i], self.abscissae[i + 1], r0, r1, x))
    }

    /// Range on which [`Table::curvature_ratio`] is defined.
    pub fn curvature_range(&self) -> (f64, f64) {
        let n = self.len();
        if n < 3 {
            return (f64::NAN, f64::NAN);
        }
        (self.abscissae[1], self.abscissae[n - 2])
    }
}

fn lerp(x0: f64, x1: f64, y0: f64, y1: f64, x: f64) -> f64 {
    let t = (x - x0) / (x1 - x0);
    y0 + t * (y1 - y0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_and_without_header() {
        let with = "x,value\n0,1\n1,2\n2,5\n";
        let without = "0, 1\n1, 2\n2, 5\n";
        let a = Table::from_csv_reader(with.as_bytes()).unwrap();
        let b = Table::from_csv_reader(without.as_bytes()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values(), &[1.0, 2.0, 5.0]);
    }

    #[test]
    fn rejects_non_monotone() {
        let err = Table::from_csv_reader("0,1\n2,1\n1,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidTable(_)));
        assert!(Table::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn rejects_garbage_rows() {
        assert!(Table::from_csv_reader("0,1\nfoo,1\n".as_bytes()).is_err());
        assert!(Table::from_csv_reader("0,1,3\n".as_bytes()).is_err());
    }

    #[test]
    fn interpolation_and_range() {
        let t = Table::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 4.0]).unwrap();
        assert_eq!(t.interpolate(0.5).unwrap(), 1.0);
        assert_eq!(t.interpolate(2.0).unwrap(), 3.0);
        assert_eq!(t.interpolate(3.0).unwrap(), 4.0);
        assert!(matches!(
            t.interpolate(3.5),
            Err(Error::OutsideTable { .. })
        ));
    }

    #[test]
    fn curvature_of_quadratic_is_exact_at_nodes() {
        // f = 1 + x², f'' = 2
        let t = Table::sample(-1.0, 1.0, 21, |x| 1.0 + x * x).unwrap();
        for &x in &t.abscissae()[1..20] {
            let r = t.curvature_ratio(x).unwrap();
            assert!((r - 2.0 / (1.0 + x * x)).abs() < 1e-10, "x={x}");
        }
        // no one-sided stencils at the edges
        assert!(t.curvature_ratio(-1.0).is_err());
        assert!(t.curvature_ratio(1.0).is_err());
    }

    #[test]
    fn curvature_rejects_non_positive_values() {
        let t = Table::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            t.curvature_ratio(1.5),
            Err(Error::NonPositiveCutting { .. })
        ));
    }
}
