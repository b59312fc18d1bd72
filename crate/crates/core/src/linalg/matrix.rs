use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over R, C or H.
///
/// Entries are stored as quaternions regardless of field; every constructor
/// and operation keeps the components outside `field` at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols, "value count does not match shape");
        Matrix {
            rows,
            cols,
            field: Field::Real,
            data: values.iter().map(|&v| Scalar::real(v)).collect(),
        }
    }

    /// Builds a matrix from scalars, restricting every entry to `field`.
    pub fn from_scalars(rows: usize, cols: usize, field: Field, values: Vec<Scalar>) -> Self {
        assert_eq!(values.len(), rows * cols, "value count does not match shape");
        Matrix {
            rows,
            cols,
            field,
            data: values.into_iter().map(|s| s.restrict(field)).collect(),
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: Field,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c).restrict(field));
            }
        }
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn diag_real(values: &[f64], field: Field) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n, field);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Scalar::real(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// Reinterpret the entries over a larger field (e.g. a real matrix as complex).
    pub fn promote(&self, field: Field) -> Matrix {
        assert!(field.real_dim() >= self.field.real_dim(), "promote cannot shrink the field");
        Matrix {
            field,
            ..self.clone()
        }
    }

    /// Real dimension of the ambient matrix space this matrix lives in.
    pub fn real_len(&self) -> usize {
        self.rows * self.cols * self.field.real_dim()
    }

    /// Flatten into real coordinates: row-major, each entry contributing
    /// `field.real_dim()` components.
    pub fn to_real_vec(&self) -> Vec<f64> {
        let d = self.field.real_dim();
        let mut out = Vec::with_capacity(self.real_len());
        for s in &self.data {
            out.extend_from_slice(&s.components()[..d]);
        }
        out
    }

    pub fn from_real_vec(rows: usize, cols: usize, field: Field, v: &[f64]) -> Self {
        let d = field.real_dim();
        assert_eq!(v.len(), rows * cols * d, "coordinate count does not match shape");
        let data = v
            .chunks(d)
            .map(|c| {
                let mut comp = [0.0; 4];
                comp[..d].copy_from_slice(c);
                Scalar::from_components(comp)
            })
            .collect();
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    /// The standard real basis of the ambient space: a unit of the field at
    /// one entry, zero elsewhere.
    pub fn real_basis(rows: usize, cols: usize, field: Field) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(rows * cols * field.real_dim());
        for r in 0..rows {
            for c in 0..cols {
                for &u in field.units() {
                    let mut m = Matrix::zeros(rows, cols, field);
                    m[(r, c)] = u;
                    out.push(m);
                }
            }
        }
        out
    }

    pub fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |r, c| self[(c, r)])
    }

    /// Entrywise conjugation.
    pub fn conj(&self) -> Matrix {
        Matrix {
            data: self.data.iter().map(|s| s.conj()).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// `self + s·other` without shape checks beyond debug assertions.
    pub fn axpy(&self, s: f64, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.shape(), other.shape());
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a + b.scale(s))
                .collect(),
            ..self.clone()
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::ZERO, |acc, i| acc + self[(i, i)])
    }

    /// Squared Frobenius norm, counting every real component.
    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|s| s.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|s| s.abs()).fold(0.0, f64::max)
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let field = if self.field >= other.field {
            self.field
        } else {
            other.field
        };
        let mut out = Matrix::zeros(self.rows, other.cols, field);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Scalar::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other[(k, c)];
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting. Row
    /// operations are left multiplications, so this is valid over H too.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.field);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .unwrap();
            if a[(pivot_row, col)].abs() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            let p = a[(col, col)].inv().ok_or(Error::Singular)?;
            for c in 0..n {
                a[(col, c)] = p * a[(col, c)];
                inv[(col, c)] = p * inv[(col, c)];
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor == Scalar::ZERO {
                    continue;
                }
                for c in 0..n {
                    let ac = a[(col, c)];
                    let ic = inv[(col, c)];
                    a[(r, c)] -= factor * ac;
                    inv[(r, c)] -= factor * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant of a real square matrix by LU with partial pivoting.
    pub fn det_real(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        if self.field != Field::Real {
            return Err(Error::FieldMismatch {
                expected: Field::Real,
                found: self.field,
            });
        }
        let n = self.rows;
        let mut a: Vec<f64> = self.data.iter().map(|s| s.re).collect();
        let mut det = 1.0;
        for col in 0..n {
            let p = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap();
            if a[p * n + col] == 0.0 {
                return Ok(0.0);
            }
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for r in col + 1..n {
                let f = a[r * n + col] / pivot;
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Real 2n×2n embedding `[[A, -B], [B, A]]` of a complex matrix `A + iB`.
    pub fn complex_to_real_embedding(&self) -> Matrix {
        assert!(self.field != Field::Quaternion, "embedding is for complex matrices");
        let (r, c) = self.shape();
        Matrix::from_fn(2 * r, 2 * c, Field::Real, |i, j| {
            let z = self[(i % r, j % c)];
            let v = match (i < r, j < c) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.i,
                (false, true) => z.i,
            };
            Scalar::real(v)
        })
    }

    /// Inverse of [`Matrix::complex_to_real_embedding`]: read `A` and `B` off
    /// the left block column.
    pub fn real_embedding_to_complex(&self) -> Matrix {
        assert!(self.rows % 2 == 0 && self.cols % 2 == 0);
        let (r, c) = (self.rows / 2, self.cols / 2);
        Matrix::from_fn(r, c, Field::Complex, |i, j| {
            Scalar::complex(self[(i, j)].re, self[(i + r, j)].re)
        })
    }

    /// Complex 2n×2n image of a quaternion matrix, using `q = z + w·j`
    /// mapped to `[[z, w], [-w̄, z̄]]`.
    pub fn quaternion_to_complex_embedding(&self) -> Matrix {
        let (r, c) = self.shape();
        let mut out = Matrix::zeros(2 * r, 2 * c, Field::Complex);
        for i in 0..r {
            for j in 0..c {
                let q = self[(i, j)];
                let z = Scalar::complex(q.re, q.i);
                let w = Scalar::complex(q.j, q.k);
                out[(2 * i, 2 * j)] = z;
                out[(2 * i, 2 * j + 1)] = w;
                out[(2 * i + 1, 2 * j)] = -w.conj();
                out[(2 * i + 1, 2 * j + 1)] = z.conj();
            }
        }
        out
    }

    /// Real symmetric part check helper: `‖self - selfᵀ‖ / max(‖self‖, 1)`.
    pub fn relative_asymmetry(&self) -> f64 {
        let d = self - &self.adjoint();
        d.norm() / self.norm().max(1.0)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "shape mismatch in add");
        let field = self.field.max(o.field);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "shape mismatch in sub");
        let field = self.field.max(o.field);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.matmul(o)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// `Re Tr(x* y)`, the Euclidean inner product on every ambient matrix space.
pub fn inner(x: &Matrix, y: &Matrix) -> Result<f64> {
    x.check_same(y)?;
    Ok(inner_unchecked(x, y))
}

/// Same as [`inner`] for callers that already guarantee matching shapes.
/// `Re Tr(x* y) = Σ Re(conj(x_ij) y_ij)`, which is the componentwise dot product.
pub(crate) fn inner_unchecked(x: &Matrix, y: &Matrix) -> f64 {
    x.data
        .iter()
        .zip(&y.data)
        .map(|(a, b)| a.re * b.re + a.i * b.i + a.j * b.j + a.k * b.k)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, s: usize, t: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n, Field::Complex);
        m[(s, t)] = Scalar::ONE;
        m[(t, s)] = Scalar::ONE;
        m
    }

    fn c(n: usize, s: usize, t: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n, Field::Complex);
        m[(s, t)] = Scalar::I;
        m[(t, s)] = -Scalar::I;
        m
    }

    #[test]
    fn inner_examples() {
        let i2 = Matrix::identity(2, Field::Real);
        assert_eq!(inner(&i2, &i2).unwrap(), 2.0);
        assert_eq!(inner(&b(3, 0, 1), &c(3, 0, 1)).unwrap(), 0.0);
        assert_eq!(inner(&b(3, 0, 1), &b(3, 0, 1)).unwrap(), 2.0);
        let q = Matrix::from_scalars(1, 2, Field::Quaternion, vec![Scalar::new(1.0, 1.0, 1.0, 1.0), Scalar::K]);
        assert_eq!(inner(&q, &q).unwrap(), 5.0);
    }

    #[test]
    fn inner_rejects_mismatch() {
        let a = Matrix::zeros(2, 2, Field::Real);
        let b = Matrix::zeros(2, 3, Field::Real);
        assert!(matches!(inner(&a, &b), Err(Error::ShapeMismatch { .. })));
        let c = Matrix::zeros(2, 2, Field::Complex);
        assert!(matches!(inner(&a, &c), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn inverse_over_quaternions() {
        let m = Matrix::from_scalars(
            2,
            2,
            Field::Quaternion,
            vec![
                Scalar::new(1.0, 2.0, 0.0, -1.0),
                Scalar::new(0.0, 0.5, 1.0, 0.0),
                Scalar::new(0.3, 0.0, 0.0, 2.0),
                Scalar::new(-1.0, 1.0, 1.0, 1.0),
            ],
        );
        let inv = m.inverse().unwrap();
        let id = Matrix::identity(2, Field::Quaternion);
        assert!((&(&m * &inv) - &id).norm() < 1e-12);
        assert!((&(&inv * &m) - &id).norm() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let m = Matrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(m.inverse(), Err(Error::Singular));
        assert_eq!(m.det_real().unwrap(), 0.0);
    }

    #[test]
    fn det_of_permutation() {
        let m = Matrix::from_real(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        assert!((m.det_real().unwrap() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn real_embedding_round_trip() {
        let m = Matrix::from_scalars(
            2,
            2,
            Field::Complex,
            vec![Scalar::complex(1.0, 0.0), Scalar::complex(2.0, -1.0), Scalar::complex(2.0, 1.0), Scalar::complex(-3.0, 0.0)],
        );
        let e = m.complex_to_real_embedding();
        assert_eq!(e.relative_asymmetry(), 0.0);
        assert_eq!(e.real_embedding_to_complex(), m);
    }
}
