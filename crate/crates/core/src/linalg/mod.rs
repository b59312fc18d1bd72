//! Scalars over R, C and H, dense matrices, the ambient inner product and a
//! Jacobi eigensolver.

mod eigen;
mod matrix;
mod scalar;

pub use eigen::{
    hermitian_spectrum, jacobi_eigh, orthonormalize, HermitianSpectrum, SymEigen,
    ORTHONORMALIZE_DROP, SYMMETRY_TOL,
};
pub use matrix::{inner, Matrix};
pub(crate) use matrix::inner_unchecked;
pub use scalar::{Field, Scalar};

use rand::Rng;
use rand_distr::StandardNormal;

/// Matrix with independent standard Gaussian real components in `field`.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, field: Field, rng: &mut R) -> Matrix {
    let d = field.real_dim();
    let v: Vec<f64> = (0..rows * cols * d).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_real_vec(rows, cols, field, &v)
}

/// Orthonormalise the columns of a square matrix over `field`
/// (right scalar multiplication, so this is also correct over H).
pub fn orthonormal_columns(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(m.cols());
    for c in 0..m.cols() {
        let mut v: Vec<Scalar> = (0..n).map(|r| m[(r, c)]).collect();
        for _ in 0..2 {
            for q in &cols {
                // coefficient <q, v> = Σ conj(q_i) v_i, applied on the right of q
                let coeff = q
                    .iter()
                    .zip(&v)
                    .fold(Scalar::ZERO, |acc, (a, b)| acc + a.conj() * *b);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= *qi * coeff;
                }
            }
        }
        let nrm = v.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-10 {
            return None;
        }
        cols.push(v.into_iter().map(|s| s.scale(1.0 / nrm)).collect());
    }
    Some(Matrix::from_fn(n, m.cols(), m.field(), |r, c| cols[c][r]))
}

/// Random element of O(n;F) from Gaussian columns.
pub fn random_orthonormal<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> Matrix {
    loop {
        if let Some(q) = orthonormal_columns(&gaussian_matrix(n, n, field, rng)) {
            return q;
        }
    }
}
