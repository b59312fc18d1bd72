use super::matrix::{inner_unchecked, Matrix};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`jacobi_eigh`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Vectors whose residual norm falls below this are dropped by [`orthonormalize`].
pub const ORTHONORMALIZE_DROP: f64 = 1e-9;
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthogonal matrix whose columns are the matching eigenvectors.
    pub vectors: Matrix,
}

impl SymEigen {
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, j)].re).collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Cyclic Jacobi rotations on a real symmetric matrix.
pub fn jacobi_eigh(s: &Matrix) -> Result<SymEigen> {
    if !s.is_square() {
        return Err(Error::NotSquare(s.rows(), s.cols()));
    }
    if s.field() != Field::Real {
        return Err(Error::FieldMismatch {
            expected: Field::Real,
            found: s.field(),
        });
    }
    let n = s.rows();
    let norm = s.norm();
    let asym = (s - &s.transpose()).norm();
    if asym > SYMMETRY_TOL * norm.max(f64::MIN_POSITIVE) && asym > 0.0 {
        return Err(Error::NotSymmetric(asym / norm.max(f64::MIN_POSITIVE)));
    }

    let mut a: Vec<f64> = s.entries().iter().map(|x| x.re).collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off.sqrt() <= 1e-15 * norm || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "jacobi_eigh",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].total_cmp(&a[x * n + x]));
    let values = order.iter().map(|&j| a[j * n + j]).collect();
    let vectors = Matrix::from_fn(n, n, Field::Real, |r, c| Scalar::real(v[r * n + order[c]]));
    Ok(SymEigen { values, vectors })
}

/// Gram-Schmidt under `inner`, run twice per vector for stability. Vectors
/// whose residual drops below [`ORTHONORMALIZE_DROP`] are discarded.
pub fn orthonormalize(vs: &[Matrix]) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = inner_unchecked(q, &w);
                w = w.axpy(-c, q);
            }
        }
        let nrm = w.norm();
        if nrm > ORTHONORMALIZE_DROP {
            out.push(w.scale(1.0 / nrm));
        }
    }
    out
}

/// Spectrum of a complex Hermitian matrix read off its real embedding.
///
/// Each eigenvalue of `h` appears twice in the embedding; the pairs are
/// returned in ascending order together with the two real eigenvectors
/// spanning the realified eigenline.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub n: usize,
    pub values: Vec<f64>,
    pairs: Vec<[Vec<f64>; 2]>,
}

impl HermitianSpectrum {
    /// Orthogonal projector (complex) onto the span of the eigenlines `idx`.
    pub fn projector(&self, idx: impl IntoIterator<Item = usize>) -> Matrix {
        let m = 2 * self.n;
        let mut p = vec![0.0; m * m];
        for j in idx {
            for v in &self.pairs[j] {
                for r in 0..m {
                    for c in 0..m {
                        p[r * m + c] += v[r] * v[c];
                    }
                }
            }
        }
        Matrix::from_real(m, m, &p).real_embedding_to_complex()
    }
}

pub fn hermitian_spectrum(h: &Matrix) -> Result<HermitianSpectrum> {
    if h.field() != Field::Complex {
        return Err(Error::FieldMismatch {
            expected: Field::Complex,
            found: h.field(),
        });
    }
    let n = h.rows();
    // exact Hermitian symmetrisation keeps the embedding symmetric to roundoff
    let herm = (h + &h.adjoint()).scale(0.5);
    let eig = jacobi_eigh(&herm.complex_to_real_embedding())?;
    let mut values = Vec::with_capacity(n);
    let mut pairs = Vec::with_capacity(n);
    // descending order from jacobi; walk from the end for ascending pairs
    for j in (0..n).rev() {
        let (a, b) = (2 * j + 1, 2 * j);
        values.push(0.5 * (eig.values[a] + eig.values[b]));
        pairs.push([eig.column(a), eig.column(b)]);
    }
    Ok(HermitianSpectrum { n, values, pairs })
}
