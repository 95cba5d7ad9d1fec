//! Nodal <-> modal transforms for a symmetric spatial operator A = P D P^T.

use crate::error::{Error, Result};

/// Orthonormal eigenvector matrix of a symmetric operator, stored
/// column-major (column j is the eigenvector for the j-th eigenvalue).
#[derive(Debug, Clone)]
pub struct EigenBasis {
    n: usize,
    columns: Vec<f64>,
}

impl EigenBasis {
    /// Wrap a caller-supplied basis, checking P^T P = I to `tol`.
    pub fn new(n: usize, columns: Vec<f64>, tol: f64) -> Result<Self> {
        if columns.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: columns.len(),
            });
        }
        let basis = Self { n, columns };
        for i in 0..n {
            for j in i..n {
                let mut dot = 0.0;
                for k in 0..n {
                    dot += basis.columns[i * n + k] * basis.columns[j * n + k];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > tol {
                    return Err(Error::InvalidParameter(format!(
                        "eigenvector matrix is not orthonormal: |<v{i},v{j}> - {target}| = {:.3e}",
                        (dot - target).abs()
                    )));
                }
            }
        }
        Ok(basis)
    }

    /// Analytic eigenbasis of the 1D Dirichlet Laplacian on n interior points:
    /// v_j(i) = sqrt(2h) sin(i j pi h), h = 1/(n+1). Columns are ordered to
    /// match [`crate::problem::Spectrum::laplacian_1d`].
    pub fn laplacian_1d(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "grid size must be at least 1".into(),
            ));
        }
        let h = 1.0 / (n as f64 + 1.0);
        let scale = (2.0 * h).sqrt();
        let mut columns = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let arg = (i as f64 + 1.0) * (j as f64 + 1.0) * std::f64::consts::PI * h;
                columns[j * n + i] = scale * arg.sin();
            }
        }
        Ok(Self { n, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Column j as a slice.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j * self.n..(j + 1) * self.n]
    }

    /// Nodal -> modal: returns P^T x.
    pub fn to_modal(&self, nodal: &[f64]) -> Result<Vec<f64>> {
        self.check_len(nodal)?;
        Ok((0..self.n)
            .map(|j| {
                self.column(j)
                    .iter()
                    .zip(nodal)
                    .map(|(v, x)| v * x)
                    .sum()
            })
            .collect())
    }

    /// Modal -> nodal: returns P x.
    pub fn to_nodal(&self, modal: &[f64]) -> Result<Vec<f64>> {
        self.check_len(modal)?;
        let mut out = vec![0.0; self.n];
        for (j, &c) in modal.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.column(j)) {
                *o += c * v;
            }
        }
        Ok(out)
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let basis = EigenBasis::laplacian_1d(17).unwrap();
        let x: Vec<f64> = (0..17).map(|i| ((i * 37 + 11) % 19) as f64 - 9.0).collect();
        let back = basis.to_nodal(&basis.to_modal(&x).unwrap()).unwrap();
        let scale = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (orig, rec) in x.iter().zip(&back) {
            assert!((orig - rec).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let basis = EigenBasis::laplacian_1d(5).unwrap();
        let z = basis.to_modal(&[0.0; 5]).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let basis = EigenBasis::laplacian_1d(5).unwrap();
        assert!(basis.to_modal(&[0.0; 4]).is_err());
        assert!(basis.to_nodal(&[0.0; 6]).is_err());
    }

    #[test]
    fn non_orthogonal_matrix_rejected() {
        let cols = vec![1.0, 1.0, 0.0, 1.0];
        assert!(EigenBasis::new(2, cols, 1e-10).is_err());
        let id = vec![1.0, 0.0, 0.0, 1.0];
        assert!(EigenBasis::new(2, id, 1e-10).is_ok());
    }
}
