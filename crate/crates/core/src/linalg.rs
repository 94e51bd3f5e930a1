//! Banded LU with partial pivoting and generalized eigensolvers for the
//! radial matrices.

use nalgebra::{Cholesky, DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Lower/upper bandwidth of a square matrix (largest |i − j| with a nonzero).
pub fn bandwidth<T: PartialEq + Copy + num_traits::Zero>(m: &DMatrix<T>) -> usize {
    let n = m.nrows();
    let mut bw = 0;
    for j in 0..n {
        for i in 0..n {
            if !m[(i, j)].is_zero() {
                bw = bw.max(i.abs_diff(j));
            }
        }
    }
    bw
}

/// LU factorization `P A = L U` of a banded matrix with partial pivoting.
///
/// Work is O(N·b²) for bandwidth b; fill-in extends the upper band to 2b.
#[derive(Debug, Clone)]
pub struct BandedLu {
    lu: DMatrix<Complex64>,
    pivots: Vec<usize>,
    band: usize,
}

impl BandedLu {
    pub fn factor(mut a: DMatrix<Complex64>, band: usize) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::SolveFailure("matrix is not square".into()));
        }
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::SolveFailure("matrix is zero or non-finite".into()));
        }
        let mut pivots = vec![0; n];
        for k in 0..n {
            let row_end = (k + band + 1).min(n);
            let col_end = (k + 2 * band + 1).min(n);
            let mut piv = k;
            let mut best = a[(k, k)].norm();
            for i in k + 1..row_end {
                let v = a[(i, k)].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best <= scale * 1e-300 || !best.is_finite() {
                return Err(Error::SolveFailure(format!("zero pivot at column {k}")));
            }
            pivots[k] = piv;
            if piv != k {
                for j in k..col_end {
                    a.swap((k, j), (piv, j));
                }
            }
            let inv = a[(k, k)].inv();
            for i in k + 1..row_end {
                let l = a[(i, k)] * inv;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                a[(i, k)] = l;
                for j in k + 1..col_end {
                    let u = a[(k, j)];
                    a[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu: a, pivots, band })
    }

    pub fn solve(&self, b: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let n = self.lu.nrows();
        let mut x = b.clone();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap_rows(k, p);
            }
            let xk = x[k];
            for i in k + 1..(k + self.band + 1).min(n) {
                x[i] -= self.lu[(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..(k + 2 * self.band + 1).min(n) {
                s -= self.lu[(k, j)] * x[j];
            }
            x[k] = s / self.lu[(k, k)];
        }
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::SolveFailure("non-finite solution".into()));
        }
        Ok(x)
    }
}

/// Real generalized eigenpairs `H c = E S c`, ascending, with `cᵀ S c = 1`.
#[derive(Debug, Clone)]
pub struct RealSpectrum {
    pub energies: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn generalized_symmetric_eigen(h: &DMatrix<f64>, s: &DMatrix<f64>) -> Result<RealSpectrum> {
    let chol =
        Cholesky::new(s.clone()).ok_or_else(|| Error::Eigen("overlap matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Eigen("singular Cholesky factor".into()))?;
    let mut c = &linv * h * linv.transpose();
    c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = order.len();
    let back = linv.transpose();
    let mut energies = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        energies[dst] = eig.eigenvalues[src];
        let v = &back * eig.eigenvectors.column(src);
        vectors.set_column(dst, &v);
    }
    Ok(RealSpectrum { energies, vectors })
}

/// Eigenpairs of a complex-symmetric pencil `H c = E S c` with real SPD `S`,
/// normalized in the bilinear (c-product) sense `cᵀ S c = 1`.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    pub energies: DVector<Complex64>,
    pub vectors: DMatrix<Complex64>,
}

pub fn generalized_complex_symmetric_eigen(h: &DMatrix<Complex64>, s: &DMatrix<f64>) -> Result<ComplexSpectrum> {
    let chol =
        Cholesky::new(s.clone()).ok_or_else(|| Error::Eigen("overlap matrix is not positive definite".into()))?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Eigen("singular Cholesky factor".into()))?
        .map(|x| Complex64::new(x, 0.0));
    let a = &linv * h * linv.transpose();
    let n = a.nrows();
    let schur = Schur::try_new(a, 1e-15, 100_000)
        .ok_or_else(|| Error::Eigen("complex Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    // eigenvectors of the triangular factor by back substitution
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    let tiny = t.iter().map(|z| z.norm()).fold(0.0, f64::max) * 1e-14;
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < tiny {
                d = Complex64::new(tiny, 0.0);
            }
            y[(i, k)] = -s / d;
        }
    }
    let v = &q * y;
    let back = linv.transpose();
    let mut energies = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for k in 0..n {
        let col = v.column(k);
        let norm2: Complex64 = col.iter().map(|z| z * z).sum();
        if norm2.norm() < 1e-300 {
            return Err(Error::Eigen("self-orthogonal eigenvector".into()));
        }
        let scaled = col / norm2.sqrt();
        vectors.set_column(k, &(&back * scaled));
        energies[k] = t[(k, k)];
    }
    Ok(ComplexSpectrum { energies, vectors })
}
