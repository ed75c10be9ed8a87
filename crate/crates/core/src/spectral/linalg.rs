//! Dense square matrices and the cyclic Jacobi eigensolver.

use serde::{Deserialize, Serialize};

use super::{Result, SpectralError};

pub const MAX_SWEEPS: usize = 50;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(SpectralError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SpectralError::NotSquare { row: i, len: row.len(), n });
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(SpectralError::NonFinite { row: i, col: j });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `selfᵀ · v`
    pub fn tmul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)] * v[i]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// A matrix whose stored entries are exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        for i in 0..m.n {
            for j in i + 1..m.n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(SpectralError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymmetricMatrix(m))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..values.len())
            .map(|i| {
                let mut r = vec![0.0; values.len()];
                r[i] = values[i];
                r
            })
            .collect();
        SymmetricMatrix::new(&rows)
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }
}

impl TryFrom<Vec<Vec<f64>>> for SymmetricMatrix {
    type Error = SpectralError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        SymmetricMatrix::new(&rows)
    }
}

impl From<SymmetricMatrix> for Vec<Vec<f64>> {
    fn from(m: SymmetricMatrix) -> Self {
        m.0.rows()
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub lambdas: Vec<f64>,
    pub basis: Matrix,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.lambdas.last().unwrap()
    }

    /// Smallest `|λ_i|`.
    pub fn min_abs(&self) -> f64 {
        self.lambdas.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min)
    }

    /// `U · diag(d) · Uᵀ`
    pub fn compose(&self, d: &[f64]) -> Matrix {
        let n = self.n();
        let u = &self.basis;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| u[(i, k)] * d[k] * u[(j, k)]).sum();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.compose(&self.lambdas)
    }

    /// Coordinates of `v` in the eigenbasis.
    pub fn to_modes(&self, v: &[f64]) -> Vec<f64> {
        self.basis.tmul_vec(v)
    }

    pub fn from_modes(&self, z: &[f64]) -> Vec<f64> {
        self.basis.mul_vec(z)
    }
}

fn off_diagonal(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.n {
        for j in 0..a.n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi: sweeps of plane rotations over `(p, q)` in row-major order
/// until the off-diagonal Frobenius norm drops below `tol · ‖B‖_F`.
pub fn eigendecompose(b: &SymmetricMatrix, tol: f64) -> Result<EigenSystem> {
    let n = b.n();
    let mut a = b.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius();
    let target = tol * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&a);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SpectralError::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let lambdas = order.iter().map(|&i| a[(i, i)]).collect();
    let mut basis = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            basis[(k, col)] = v[(k, src)];
        }
    }
    Ok(EigenSystem { lambdas, basis })
}
