//! Dense real-symmetric eigendecomposition and eigenvalue degeneracy groups.
//!
//! The solver is the classic two-stage scheme: Householder reduction to
//! tridiagonal form followed by the implicit QL algorithm with Wilkinson-style
//! shifts (the EISPACK `tred2`/`tql2` pair). It is deterministic and accurate
//! to a few ulps of `‖H‖` for the residual and orthogonality.

use std::ops::Range;

use crate::linalg::Matrix;
use crate::{Error, Result};

/// Relative factor of the degeneracy tolerance.
pub const DEGENERACY_RTOL: f64 = 1e-8;

const MAX_QL_SWEEPS: usize = 64;

/// Dense symmetric matrix. Symmetrized as `(H + Hᵀ)/2` on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    /// Accepts `h` if it is square, finite and symmetric to within
    /// `1e-12·(1 + max|H|)`.
    pub fn new(h: Matrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, not square",
                h.rows(),
                h.cols()
            )));
        }
        if h.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("matrix has non-finite entries".into()));
        }
        let n = h.rows();
        let tol = 1e-12 * (1.0 + h.max_abs());
        let mut sym = h;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (sym[(i, j)], sym[(j, i)]);
                if (a - b).abs() > tol {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({}, {}): {a} vs {b}",
                        i + 1,
                        j + 1
                    )));
                }
                let mean = 0.5 * (a + b);
                sym[(i, j)] = mean;
                sym[(j, i)] = mean;
            }
        }
        Ok(Self(sym))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `H + cI`.
    pub fn shifted(&self, c: f64) -> SymmetricMatrix {
        let mut m = self.0.clone();
        m.add_diagonal(c);
        SymmetricMatrix(m)
    }
}

/// Eigenvalues in ascending order, orthonormal eigenvectors as columns, and
/// the partition of indices into groups of (numerically) equal eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
    groups: Vec<Range<usize>>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from ascending eigenvalues and matching
    /// eigenvector columns; groups are recomputed with the default tolerance.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Matrix) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.rows() != n || eigenvectors.cols() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: eigenvectors.cols(),
            });
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "eigenvalues must be ascending".into(),
            ));
        }
        let groups = group_degenerate(&eigenvalues, degeneracy_tolerance(&eigenvalues));
        Ok(Self {
            eigenvalues,
            eigenvectors,
            groups,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors stored as columns.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }

    pub fn groups(&self) -> &[Range<usize>] {
        &self.groups
    }

    /// `max_j ‖Hφ_j − θ_jφ_j‖₂`.
    pub fn max_residual(&self, h: &SymmetricMatrix) -> f64 {
        let hv = h.matrix().matmul(&self.eigenvectors);
        (0..self.dim())
            .map(|j| {
                (0..self.dim())
                    .map(|i| (hv[(i, j)] - self.eigenvalues[j] * self.eigenvectors[(i, j)]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `‖ΦᵀΦ − I‖_max`.
    pub fn orthogonality_error(&self) -> f64 {
        let gram = self.eigenvectors.transpose_matmul(&self.eigenvectors);
        gram.max_abs_diff(&Matrix::identity(self.dim()))
    }

    /// `Φ diag(θ) Φᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let scaled = Matrix::from_fn(n, n, |i, j| self.eigenvectors[(i, j)] * self.eigenvalues[j]);
        scaled.matmul_transpose(&self.eigenvectors)
    }
}

/// `τ_deg = 1e-8 · max(1, max|θ|)`.
pub fn degeneracy_tolerance(eigenvalues: &[f64]) -> f64 {
    DEGENERACY_RTOL * eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// Splits ascending eigenvalues into maximal runs whose consecutive gaps are
/// at most `tol`.
pub fn group_degenerate(eigenvalues: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..eigenvalues.len() {
        if eigenvalues[i] - eigenvalues[i - 1] > tol {
            groups.push(start..i);
            start = i;
        }
    }
    if !eigenvalues.is_empty() {
        groups.push(start..eigenvalues.len());
    }
    groups
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn eigh(h: &SymmetricMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let mut v = h.matrix().clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    tridiagonal_ql(&mut v, &mut d, &mut e)?;
    SpectralDecomposition::from_parts(d, v)
}

/// Householder reduction; on exit `d`/`e` hold the diagonal/subdiagonal and
/// `v` the accumulated orthogonal transform.
fn tridiagonalize(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let g: f64 = (0..=i).map(|k| v[(k, i + 1)] * v[(k, j)]).sum();
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal matrix, accumulating rotations into `v`,
/// then sorts eigenpairs ascending.
fn tridiagonal_ql(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::Numeric(format!(
                        "QL iteration failed to converge for eigenvalue {l}"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[(l + 2)..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let vk1 = v[(k, i + 1)];
                        let vk = v[(k, i)];
                        v[(k, i + 1)] = s * vk + c * vk1;
                        v[(k, i)] = c * vk - s * vk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps the column swaps deterministic
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in 0..n {
                let tmp = v[(row, i)];
                v[(row, i)] = v[(row, k)];
                v[(row, k)] = tmp;
            }
        }
    }
    Ok(())
}
