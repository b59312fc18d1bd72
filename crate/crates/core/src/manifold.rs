//! Homogeneous spaces embedded as submanifolds of matrix spaces.
//!
//! | kind          | ambient space                 | defining equations          |
//! |---------------|-------------------------------|-----------------------------|
//! | `Orth(n, F)`  | M(n; F)                       | x*x = I                     |
//! | `SpecialOrth` | M(n; R)                       | xᵗx = I, det x = 1          |
//! | `Grass(n, k)` | Hermitian n×n                 | x² = I, k negative eigenvalues |
//! | `Lagrangian`  | complex symmetric n×n         | x̄x = I                      |
//! | `CplxStr(n)`  | real skew 2n×2n               | x² = -I                     |
//! | `FlagU(λ)`    | Hermitian n×n                 | spectrum(x) = λ             |
//!
//! Tangent spaces are the `-1` eigenspaces of an isometric involution of the
//! ambient space (`u ↦ xux`, `u ↦ xu*x`, `u ↦ xūx`, `u ↦ -xux`); for the
//! flag manifold the normal space is the real span of `I, x, …, x^{n-1}`.

use std::fmt;

use crate::config::{MEMBERSHIP_TOL, RETRACT_BASIN, TANGENT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{
    gaussian_matrix, hermitian_spectrum, inner_unchecked, orthonormalize, random_orthonormal,
    Field, Matrix, Scalar,
};
use crate::rng::stream_rng;

const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum ManifoldKind {
    Orth { n: usize, field: Field },
    SpecialOrth { n: usize },
    Grass { n: usize, k: usize },
    Lagrangian { n: usize },
    CplxStr { n: usize },
    FlagU { spectrum: Vec<f64> },
}

/// A validated manifold descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifold {
    kind: ManifoldKind,
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ManifoldKind::Orth { n, field } => match field {
                Field::Real => write!(f, "O({n})"),
                Field::Complex => write!(f, "U({n})"),
                Field::Quaternion => write!(f, "Sp({n})"),
            },
            ManifoldKind::SpecialOrth { n } => write!(f, "SO({n})"),
            ManifoldKind::Grass { n, k } => write!(f, "G({n},{k})"),
            ManifoldKind::Lagrangian { n } => write!(f, "LG({n})"),
            ManifoldKind::CplxStr { n } => write!(f, "CS({n})"),
            ManifoldKind::FlagU { spectrum } => write!(f, "Flag({})", spectrum.len()),
        }
    }
}

impl Manifold {
    pub fn new(kind: ManifoldKind) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        match &kind {
            ManifoldKind::Orth { n, .. }
            | ManifoldKind::SpecialOrth { n }
            | ManifoldKind::Lagrangian { n }
            | ManifoldKind::CplxStr { n } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
            }
            ManifoldKind::Grass { n, k } => {
                if *k == 0 || k >= n {
                    return bad(format!("Grassmannian needs 1 <= k <= n-1, got n={n}, k={k}"));
                }
            }
            ManifoldKind::FlagU { spectrum } => {
                if spectrum.is_empty() {
                    return bad("flag spectrum is empty".into());
                }
                if spectrum.iter().any(|v| !v.is_finite()) {
                    return bad("flag spectrum must be finite".into());
                }
                if spectrum.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("flag spectrum must be strictly increasing".into());
                }
            }
        }
        Ok(Manifold { kind })
    }

    pub fn orth(n: usize, field: Field) -> Result<Self> {
        Manifold::new(ManifoldKind::Orth { n, field })
    }
    pub fn unitary(n: usize) -> Result<Self> {
        Manifold::orth(n, Field::Complex)
    }
    pub fn symplectic(n: usize) -> Result<Self> {
        Manifold::orth(n, Field::Quaternion)
    }
    pub fn special_orth(n: usize) -> Result<Self> {
        Manifold::new(ManifoldKind::SpecialOrth { n })
    }
    pub fn grass(n: usize, k: usize) -> Result<Self> {
        Manifold::new(ManifoldKind::Grass { n, k })
    }
    pub fn lagrangian(n: usize) -> Result<Self> {
        Manifold::new(ManifoldKind::Lagrangian { n })
    }
    pub fn cplx_str(n: usize) -> Result<Self> {
        Manifold::new(ManifoldKind::CplxStr { n })
    }
    pub fn flag(spectrum: Vec<f64>) -> Result<Self> {
        Manifold::new(ManifoldKind::FlagU { spectrum })
    }
    /// Flag manifold U(n)/Tⁿ with spectrum (1, 2, …, n).
    pub fn flag_default(n: usize) -> Result<Self> {
        Manifold::flag((1..=n).map(|i| i as f64).collect())
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.kind
    }

    /// The size parameter `n` (number of diagonal slots of the focal point).
    pub fn n(&self) -> usize {
        match &self.kind {
            ManifoldKind::Orth { n, .. }
            | ManifoldKind::SpecialOrth { n }
            | ManifoldKind::Grass { n, .. }
            | ManifoldKind::Lagrangian { n }
            | ManifoldKind::CplxStr { n } => *n,
            ManifoldKind::FlagU { spectrum } => spectrum.len(),
        }
    }

    /// `2⌊n/2⌋`, the number of reflections in the SO(n) resolution.
    pub fn n_prime(&self) -> usize {
        2 * (self.n() / 2)
    }

    pub fn field(&self) -> Field {
        match &self.kind {
            ManifoldKind::Orth { field, .. } => *field,
            ManifoldKind::SpecialOrth { .. } | ManifoldKind::CplxStr { .. } => Field::Real,
            ManifoldKind::Grass { .. } | ManifoldKind::Lagrangian { .. } | ManifoldKind::FlagU { .. } => {
                Field::Complex
            }
        }
    }

    /// Matrix shape of the ambient space.
    pub fn ambient_shape(&self) -> (usize, usize) {
        match &self.kind {
            ManifoldKind::CplxStr { n } => (2 * n, 2 * n),
            _ => (self.n(), self.n()),
        }
    }

    /// Real dimension of the ambient Euclidean space.
    pub fn ambient_dim(&self) -> usize {
        let n = self.n();
        match &self.kind {
            ManifoldKind::Orth { field, .. } => field.real_dim() * n * n,
            ManifoldKind::SpecialOrth { .. } => n * n,
            ManifoldKind::Grass { .. } | ManifoldKind::FlagU { .. } => n * n,
            ManifoldKind::Lagrangian { .. } => n * (n + 1),
            ManifoldKind::CplxStr { .. } => n * (2 * n - 1),
        }
    }

    /// Real dimension of the manifold.
    pub fn dim(&self) -> usize {
        let n = self.n();
        match &self.kind {
            ManifoldKind::Orth { field, .. } => {
                let d = field.real_dim();
                d * n * (n - 1) / 2 + (d - 1) * n
            }
            ManifoldKind::SpecialOrth { .. } => n * (n - 1) / 2,
            ManifoldKind::Grass { k, .. } => 2 * k * (n - k),
            ManifoldKind::Lagrangian { .. } => n * (n + 1) / 2,
            ManifoldKind::CplxStr { .. } | ManifoldKind::FlagU { .. } => n * (n - 1),
        }
    }

    /// `‖x‖²`, constant along the manifold.
    pub fn norm_sqr_on_manifold(&self) -> f64 {
        match &self.kind {
            ManifoldKind::CplxStr { n } => (2 * n) as f64,
            ManifoldKind::FlagU { spectrum } => spectrum.iter().map(|v| v * v).sum(),
            _ => self.n() as f64,
        }
    }

    pub fn zero(&self) -> Matrix {
        let (r, c) = self.ambient_shape();
        Matrix::zeros(r, c, self.field())
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.ambient_shape().0, self.field())
    }

    /// Bring `u` into the ambient field, checking the shape.
    pub fn coerce(&self, u: &Matrix) -> Result<Matrix> {
        if u.shape() != self.ambient_shape() {
            return Err(Error::ShapeMismatch {
                expected: self.ambient_shape(),
                found: u.shape(),
            });
        }
        if u.field() == self.field() {
            Ok(u.clone())
        } else if u.field().real_dim() < self.field().real_dim() {
            Ok(u.promote(self.field()))
        } else {
            Err(Error::FieldMismatch {
                expected: self.field(),
                found: u.field(),
            })
        }
    }

    /// Orthogonal projection from M(rows×cols; F) onto the ambient space.
    pub fn ambient_project(&self, u: &Matrix) -> Matrix {
        match &self.kind {
            ManifoldKind::Orth { .. } | ManifoldKind::SpecialOrth { .. } => u.clone(),
            ManifoldKind::Grass { .. } | ManifoldKind::FlagU { .. } => (u + &u.adjoint()).scale(0.5),
            ManifoldKind::Lagrangian { .. } => (u + &u.transpose()).scale(0.5),
            ManifoldKind::CplxStr { .. } => (u - &u.transpose()).scale(0.5),
        }
    }

    /// Real basis of the ambient space, orthonormal under the inner product.
    pub fn ambient_basis(&self) -> Vec<Matrix> {
        let (r, c) = self.ambient_shape();
        let raw: Vec<Matrix> = Matrix::real_basis(r, c, self.field())
            .iter()
            .map(|b| self.ambient_project(b))
            .collect();
        orthonormalize(&raw)
    }

    /// Distance-like defect from the defining equations; zero on the manifold.
    pub fn membership_residual(&self, x: &Matrix) -> Result<f64> {
        let x = self.coerce(x)?;
        let id = self.identity();
        let r = match &self.kind {
            ManifoldKind::Orth { .. } => (&(&x.adjoint() * &x) - &id).norm(),
            ManifoldKind::SpecialOrth { .. } => {
                let orth = (&(&x.transpose() * &x) - &id).norm();
                let det = x.det_real()?;
                orth + if det < 0.0 { (det - 1.0).abs() } else { 0.0 }
            }
            ManifoldKind::Grass { n, k } => {
                let herm = (&x - &x.adjoint()).norm();
                let inv = (&(&x * &x) - &id).norm();
                // on involutions tr x = n - 2·(number of negative eigenvalues)
                let count = (x.trace().re - (*n as f64 - 2.0 * *k as f64)).abs();
                herm + inv + count
            }
            ManifoldKind::Lagrangian { .. } => {
                (&x - &x.transpose()).norm() + (&(&x.conj() * &x) - &id).norm()
            }
            ManifoldKind::CplxStr { .. } => (&x + &x.transpose()).norm() + (&(&x * &x) + &id).norm(),
            ManifoldKind::FlagU { spectrum } => {
                let herm = (&x - &x.adjoint()).norm();
                let spec = hermitian_spectrum(&x)?;
                herm + spec
                    .values
                    .iter()
                    .zip(spectrum)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
            }
        };
        Ok(r)
    }

    /// Wrap `x` as a point, rejecting it if the residual exceeds the default tolerance.
    pub fn point(&self, x: Matrix) -> Result<ManifoldPoint> {
        self.point_with_tol(x, MEMBERSHIP_TOL)
    }

    pub fn point_with_tol(&self, x: Matrix, tol: f64) -> Result<ManifoldPoint> {
        let x = self.coerce(&x)?;
        let residual = self.membership_residual(&x)?;
        if residual.is_nan() || residual > tol {
            return Err(Error::NotMember {
                residual,
                tolerance: tol,
            });
        }
        Ok(ManifoldPoint {
            manifold: self.clone(),
            matrix: x,
        })
    }

    fn check_point(&self, p: &ManifoldPoint) -> Result<()> {
        if &p.manifold != self {
            return Err(Error::InvalidArgument(format!(
                "point belongs to {} but was used with {}",
                p.manifold, self
            )));
        }
        Ok(())
    }

    /// Tangent projection without membership checks. `u` must already lie in
    /// the ambient space. Also used as the ambient extension of the flow field
    /// at off-manifold Runge-Kutta stages.
    pub(crate) fn tangent_project_raw(&self, x: &Matrix, u: &Matrix) -> Matrix {
        match &self.kind {
            ManifoldKind::Orth { .. } | ManifoldKind::SpecialOrth { .. } => {
                u.axpy(-1.0, &(&(x * &u.adjoint()) * x)).scale(0.5)
            }
            ManifoldKind::Grass { .. } => u.axpy(-1.0, &(&(x * u) * x)).scale(0.5),
            ManifoldKind::Lagrangian { .. } => u.axpy(-1.0, &(&(x * &u.conj()) * x)).scale(0.5),
            ManifoldKind::CplxStr { .. } => u.axpy(1.0, &(&(x * u) * x)).scale(0.5),
            ManifoldKind::FlagU { .. } => {
                let mut out = u.clone();
                for q in self.flag_normal_basis(x) {
                    out = out.axpy(-inner_unchecked(&q, u), &q);
                }
                out
            }
        }
    }

    /// Orthonormal basis of span_R{I, x, …, x^{n-1}}, the normal space of the
    /// flag manifold at `x`.
    fn flag_normal_basis(&self, x: &Matrix) -> Vec<Matrix> {
        let n = self.n();
        let mut powers = Vec::with_capacity(n);
        let mut p = self.identity();
        for _ in 0..n {
            powers.push(p.clone());
            p = &p * x;
        }
        orthonormalize(&powers)
    }

    pub fn tangent_project(&self, p: &ManifoldPoint, u: &Matrix) -> Result<Matrix> {
        self.check_point(p)?;
        let u = self.ambient_project(&self.coerce(u)?);
        Ok(self.tangent_project_raw(&p.matrix, &u))
    }

    /// Complement of [`Manifold::tangent_project`]: `u − tangent_project(u)`.
    pub fn normal_project(&self, p: &ManifoldPoint, u: &Matrix) -> Result<Matrix> {
        let u = self.coerce(u)?;
        let t = self.tangent_project(p, &u)?;
        Ok(&u - &t)
    }

    /// Residual of the tangent-space equation at `x`
    /// (`xu + ux`, `x*u + u*x`, `x̄u + ūx`, or the commutant pairing for flags).
    pub fn tangent_equation_residual(&self, x: &Matrix, u: &Matrix) -> Result<f64> {
        let u = self.coerce(u)?;
        let r = match &self.kind {
            ManifoldKind::Orth { .. } | ManifoldKind::SpecialOrth { .. } => {
                (&(&x.adjoint() * &u) + &(&u.adjoint() * x)).norm()
            }
            ManifoldKind::Grass { .. } | ManifoldKind::CplxStr { .. } => (&(x * &u) + &(&u * x)).norm(),
            ManifoldKind::Lagrangian { .. } => (&(&x.conj() * &u) + &(&u.conj() * x)).norm(),
            ManifoldKind::FlagU { .. } => self
                .flag_normal_basis(x)
                .iter()
                .map(|q| inner_unchecked(q, &u).abs())
                .sum(),
        };
        // the ambient-space constraint itself
        let off_ambient = (&self.ambient_project(&u) - &u).norm();
        Ok(r + off_ambient)
    }

    /// Orthonormal basis of the tangent space at `p`.
    pub fn tangent_frame(&self, p: &ManifoldPoint) -> Result<Vec<Matrix>> {
        self.check_point(p)?;
        let projected: Vec<Matrix> = self
            .ambient_basis()
            .iter()
            .map(|b| self.tangent_project_raw(&p.matrix, b))
            .collect();
        let frame = orthonormalize(&projected);
        if frame.len() != self.dim() {
            return Err(Error::FrameDeficiency {
                expected: self.dim(),
                found: frame.len(),
            });
        }
        Ok(frame)
    }

    pub fn retract(&self, y: &Matrix) -> Result<ManifoldPoint> {
        self.retract_with(y, RETRACT_BASIN)
    }

    /// Project a nearby ambient matrix back onto the manifold.
    pub fn retract_with(&self, y: &Matrix, basin: f64) -> Result<ManifoldPoint> {
        let y = self.ambient_project(&self.coerce(y)?);
        let residual = self.basin_residual(&y)?;
        if residual.is_nan() || residual > basin {
            return Err(Error::BasinEscape { residual, basin });
        }
        let id = self.identity();
        let x = match &self.kind {
            ManifoldKind::Orth { .. } | ManifoldKind::SpecialOrth { .. } => {
                let x = newton_polar(&y)?;
                if matches!(self.kind, ManifoldKind::SpecialOrth { .. }) && x.det_real()? < 0.0 {
                    return Err(Error::BasinEscape {
                        residual: f64::INFINITY,
                        basin,
                    });
                }
                x
            }
            ManifoldKind::Grass { k, .. } => {
                let spec = hermitian_spectrum(&y)?;
                let p = spec.projector(0..*k);
                self.ambient_project(&id.axpy(-2.0, &p))
            }
            ManifoldKind::Lagrangian { .. } => newton_schulz(y, |x| &x.conj() * x, |x| &(&x.conj() * x) - &id)?,
            ManifoldKind::CplxStr { .. } => newton_schulz(y, |x| -&(x * x), |x| &(x * x) + &id)?,
            ManifoldKind::FlagU { spectrum } => {
                let spec = hermitian_spectrum(&y)?;
                let mut x = self.zero();
                for (j, &lam) in spectrum.iter().enumerate() {
                    x = x.axpy(lam, &spec.projector([j]));
                }
                self.ambient_project(&x)
            }
        };
        Ok(ManifoldPoint {
            manifold: self.clone(),
            matrix: x,
        })
    }

    /// Residual used for the basin test: the algebraic part only (spectral
    /// kinds need the spectrum to be separable, which the count term checks).
    fn basin_residual(&self, y: &Matrix) -> Result<f64> {
        self.membership_residual(y)
    }

    /// Seeded random point; identical seeds give bitwise identical matrices.
    pub fn random_point(&self, seed: u64) -> ManifoldPoint {
        let mut rng = stream_rng(seed, 0);
        let n = self.n();
        let x = match &self.kind {
            ManifoldKind::Orth { field, .. } => random_orthonormal(n, *field, &mut rng),
            ManifoldKind::SpecialOrth { .. } => loop {
                let q = random_orthonormal(n, Field::Real, &mut rng);
                if q.det_real().map(|d| d > 0.0).unwrap_or(false) {
                    break q;
                }
            },
            ManifoldKind::Grass { k, .. } => {
                let u = random_orthonormal(n, Field::Complex, &mut rng);
                let sigma = Matrix::diag_real(
                    &(0..n).map(|i| if i < *k { -1.0 } else { 1.0 }).collect::<Vec<_>>(),
                    Field::Complex,
                );
                self.ambient_project(&(&(&u * &sigma) * &u.adjoint()))
            }
            ManifoldKind::Lagrangian { .. } => {
                let u = random_orthonormal(n, Field::Complex, &mut rng);
                self.ambient_project(&(&u * &u.transpose()))
            }
            ManifoldKind::CplxStr { .. } => {
                let o = random_orthonormal(2 * n, Field::Real, &mut rng);
                let j = block_j(&vec![1.0; n]);
                self.ambient_project(&(&(&o * &j) * &o.transpose()))
            }
            ManifoldKind::FlagU { spectrum } => {
                let u = random_orthonormal(n, Field::Complex, &mut rng);
                let d = Matrix::diag_real(spectrum, Field::Complex);
                self.ambient_project(&(&(&u * &d) * &u.adjoint()))
            }
        };
        ManifoldPoint {
            manifold: self.clone(),
            matrix: x,
        }
    }

    /// Seeded Gaussian ambient vector projected to the tangent space at `p`.
    pub fn random_tangent(&self, p: &ManifoldPoint, seed: u64) -> Result<Matrix> {
        let mut rng = stream_rng(seed, 1);
        let (r, c) = self.ambient_shape();
        let g = gaussian_matrix(r, c, self.field(), &mut rng);
        self.tangent_project(p, &g)
    }

    /// Connected-component tag: sign of det for O(n;R), sign of the Pfaffian
    /// for CS_n, and `+1` for the connected kinds.
    pub fn component_sign(&self, x: &Matrix) -> Result<i8> {
        match &self.kind {
            ManifoldKind::Orth { field: Field::Real, .. } => {
                Ok(if x.det_real()? >= 0.0 { 1 } else { -1 })
            }
            ManifoldKind::CplxStr { .. } => Ok(if pfaffian(x)? >= 0.0 { 1 } else { -1 }),
            _ => Ok(1),
        }
    }
}

/// A matrix certified to lie on its manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    manifold: Manifold,
    matrix: Matrix,
}

impl ManifoldPoint {
    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }
    pub fn residual(&self) -> f64 {
        self.manifold
            .membership_residual(&self.matrix)
            .unwrap_or(f64::INFINITY)
    }
}

/// `ε_1 J ⊕ ⋯ ⊕ ε_n J` with `J = [[0, -1], [1, 0]]`.
pub fn block_j(eps: &[f64]) -> Matrix {
    let n = eps.len();
    let mut m = Matrix::zeros(2 * n, 2 * n, Field::Real);
    for (i, &e) in eps.iter().enumerate() {
        m[(2 * i, 2 * i + 1)] = Scalar::real(-e);
        m[(2 * i + 1, 2 * i)] = Scalar::real(e);
    }
    m
}

/// Newton polar iteration `x ← (x + (x*)⁻¹)/2`.
fn newton_polar(y: &Matrix) -> Result<Matrix> {
    let id = Matrix::identity(y.rows(), y.field());
    let mut x = y.clone();
    for _ in 0..NEWTON_MAX_ITER {
        let next = (&x + &x.adjoint().inverse()?).scale(0.5);
        let step = (&next - &x).norm();
        x = next;
        if step < 1e-15 || (&(&x.adjoint() * &x) - &id).norm() < 1e-15 {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "newton polar retraction",
        iterations: NEWTON_MAX_ITER,
    })
}

/// Newton-Schulz normalisation `x ← x(3I − g(x))/2`, where `g(x)` plays the
/// role of `x*x` for the structured ambient space.
fn newton_schulz(
    y: Matrix,
    gram: impl Fn(&Matrix) -> Matrix,
    residual: impl Fn(&Matrix) -> Matrix,
) -> Result<Matrix> {
    let id = Matrix::identity(y.rows(), y.field());
    let three = id.scale(3.0);
    let mut x = y;
    for _ in 0..NEWTON_MAX_ITER {
        if residual(&x).norm() < 1e-15 {
            return Ok(x);
        }
        let g = gram(&x);
        let next = (&x * &(&three - &g)).scale(0.5);
        let step = (&next - &x).norm();
        x = next;
        if step < 1e-16 {
            return Ok(x);
        }
    }
    if residual(&x).norm() < 1e-12 {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        what: "newton-schulz retraction",
        iterations: NEWTON_MAX_ITER,
    })
}

/// Pfaffian of a real skew-symmetric matrix by expansion along the first row.
pub fn pfaffian(x: &Matrix) -> Result<f64> {
    if !x.is_square() {
        return Err(Error::NotSquare(x.rows(), x.cols()));
    }
    let n = x.rows();
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let a: Vec<f64> = x.entries().iter().map(|s| s.re).collect();
    let idx: Vec<usize> = (0..n).collect();
    Ok(pfaffian_rec(&a, n, &idx))
}

fn pfaffian_rec(a: &[f64], n: usize, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let v = a[first * n + j];
        if v == 0.0 {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&t| t != j).collect();
        let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * v * pfaffian_rec(a, n, &rest);
    }
    total
}

/// Default tangent tolerance re-exported for callers that check tangency.
pub const DEFAULT_TANGENT_TOL: f64 = TANGENT_TOL;

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(n: usize, set: &[usize], field: Field) -> Matrix {
        let eps: Vec<f64> = (1..=n).map(|i| if set.contains(&i) { -1.0 } else { 1.0 }).collect();
        Matrix::diag_real(&eps, field)
    }

    fn b(n: usize, s: usize, t: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n, Field::Real);
        m[(s - 1, t - 1)] = Scalar::ONE;
        m[(t - 1, s - 1)] = Scalar::ONE;
        m
    }

    fn all_kinds() -> Vec<Manifold> {
        vec![
            Manifold::orth(3, Field::Real).unwrap(),
            Manifold::unitary(3).unwrap(),
            Manifold::symplectic(2).unwrap(),
            Manifold::special_orth(4).unwrap(),
            Manifold::grass(4, 2).unwrap(),
            Manifold::grass(5, 2).unwrap(),
            Manifold::lagrangian(3).unwrap(),
            Manifold::cplx_str(3).unwrap(),
            Manifold::flag_default(3).unwrap(),
        ]
    }

    #[test]
    fn descriptor_validation() {
        assert!(Manifold::grass(4, 0).is_err());
        assert!(Manifold::grass(4, 4).is_err());
        assert!(Manifold::flag(vec![1.0, 1.0]).is_err());
        assert!(Manifold::flag(vec![2.0, 1.0]).is_err());
        assert!(Manifold::unitary(0).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(Manifold::grass(4, 2).unwrap().dim(), 8);
        assert_eq!(Manifold::lagrangian(3).unwrap().dim(), 6);
        assert_eq!(Manifold::orth(4, Field::Real).unwrap().dim(), 6);
        assert_eq!(Manifold::unitary(3).unwrap().dim(), 9);
        assert_eq!(Manifold::symplectic(2).unwrap().dim(), 10);
        assert_eq!(Manifold::cplx_str(3).unwrap().dim(), 6);
        assert_eq!(Manifold::flag_default(3).unwrap().dim(), 6);
        assert_eq!(Manifold::special_orth(5).unwrap().n_prime(), 4);
        for m in all_kinds() {
            assert_eq!(m.ambient_basis().len(), m.ambient_dim(), "{m}");
        }
    }

    #[test]
    fn membership_examples() {
        let g = Manifold::grass(4, 2).unwrap();
        assert_eq!(g.membership_residual(&sigma(4, &[1, 2], Field::Complex)).unwrap(), 0.0);
        assert!(g.membership_residual(&Matrix::identity(4, Field::Complex)).unwrap() > 0.0);
        let cs = Manifold::cplx_str(2).unwrap();
        assert_eq!(cs.membership_residual(&block_j(&[1.0, 1.0])).unwrap(), 0.0);
        let bad = Matrix::zeros(3, 3, Field::Complex);
        assert!(matches!(g.membership_residual(&bad), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn grass_tangent_examples() {
        let g = Manifold::grass(4, 2).unwrap();
        let p = g.point(sigma(4, &[1, 2], Field::Complex)).unwrap();
        let b13 = b(4, 1, 3);
        let t = g.tangent_project(&p, &b13).unwrap();
        assert!((&t - &b13.promote(Field::Complex)).norm() < 1e-15);
        assert!(g.normal_project(&p, &b13).unwrap().norm() < 1e-15);
        let id = Matrix::identity(4, Field::Complex);
        assert!(g.tangent_project(&p, &id).unwrap().norm() < 1e-15);
        assert!((&g.normal_project(&p, &id).unwrap() - &id).norm() < 1e-15);
    }

    #[test]
    fn projections_at_random_points() {
        for m in all_kinds() {
            for seed in 0..100u64 {
                let p = m.random_point(seed);
                assert!(p.residual() < 1e-10, "{m} seed {seed}: {}", p.residual());
                let (r, c) = m.ambient_shape();
                let mut rng = stream_rng(seed, 7);
                let u = m.ambient_project(&gaussian_matrix(r, c, m.field(), &mut rng));
                let v = m.ambient_project(&gaussian_matrix(r, c, m.field(), &mut rng));
                let tu = m.tangent_project(&p, &u).unwrap();
                let nu = m.normal_project(&p, &u).unwrap();
                let nv = m.normal_project(&p, &v).unwrap();
                assert!((&(&tu + &nu) - &u).norm() < 1e-9);
                assert!((&m.tangent_project(&p, &tu).unwrap() - &tu).norm() < 1e-9, "{m} idempotent");
                assert!((&m.normal_project(&p, &nu).unwrap() - &nu).norm() < 1e-9);
                assert!(inner_unchecked(&tu, &nv).abs() < 1e-9, "{m} orthogonal");
                assert!(m.tangent_equation_residual(p.matrix(), &tu).unwrap() < 1e-9, "{m} tangent eq");
            }
        }
    }

    #[test]
    fn frame_sizes() {
        let g = Manifold::grass(4, 2).unwrap();
        let p = g.point(sigma(4, &[1, 2], Field::Complex)).unwrap();
        assert_eq!(g.tangent_frame(&p).unwrap().len(), 8);
        let lg = Manifold::lagrangian(3).unwrap();
        let p = lg.point(Matrix::identity(3, Field::Complex)).unwrap();
        assert_eq!(lg.tangent_frame(&p).unwrap().len(), 6);
        let fl = Manifold::flag_default(3).unwrap();
        let p = fl.point(Matrix::diag_real(&[1.0, 2.0, 3.0], Field::Complex)).unwrap();
        assert_eq!(fl.tangent_frame(&p).unwrap().len(), 6);
        for m in all_kinds() {
            for seed in 0..5 {
                let p = m.random_point(seed);
                let frame = m.tangent_frame(&p).unwrap();
                assert_eq!(frame.len(), m.dim());
                for f in &frame {
                    assert!(m.tangent_equation_residual(p.matrix(), f).unwrap() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn random_point_properties() {
        let o3 = Manifold::orth(3, Field::Real).unwrap();
        let d = o3.random_point(1).matrix().det_real().unwrap();
        assert!((d.abs() - 1.0).abs() < 1e-9);
        let g = Manifold::grass(4, 2).unwrap();
        let spec = hermitian_spectrum(g.random_point(7).matrix()).unwrap();
        let expected = [-1.0, -1.0, 1.0, 1.0];
        for (a, b) in spec.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(g.random_point(3), g.random_point(3));
        let so = Manifold::special_orth(4).unwrap();
        assert!(so.random_point(2).matrix().det_real().unwrap() > 0.0);
    }

    #[test]
    fn retract_examples() {
        for m in all_kinds() {
            let p = m.random_point(11);
            let back = m.retract(p.matrix()).unwrap();
            assert!((back.matrix() - p.matrix()).norm() < 1e-12, "{m} fixed point");
            let t = m.random_tangent(&p, 5).unwrap();
            let y = p.matrix().axpy(1e-3 / t.norm(), &t);
            let r = m.retract(&y).unwrap();
            assert!(r.residual() < 1e-10, "{m} residual {}", r.residual());
            let again = m.retract(r.matrix()).unwrap();
            assert!((again.matrix() - r.matrix()).norm() < 1e-12, "{m} idempotent");
        }
        let g = Manifold::grass(4, 2).unwrap();
        let s = sigma(4, &[1, 2], Field::Complex);
        assert_eq!(g.retract(&s).unwrap().matrix(), &s);
    }

    #[test]
    fn newton_polar_quadratic() {
        let o = Manifold::orth(3, Field::Real).unwrap();
        let p = o.random_point(4);
        let mut rng = stream_rng(4, 9);
        let e = gaussian_matrix(3, 3, Field::Real, &mut rng);
        let mut y = p.matrix().axpy(1.0, &e.scale(0.001));
        // scale the perturbation so that ‖y*y − I‖ = 1e-2
        for _ in 0..60 {
            let r = (&(&y.transpose() * &y) - &Matrix::identity(3, Field::Real)).norm();
            if (r - 1e-2).abs() < 1e-4 {
                break;
            }
            y = p.matrix().axpy(1e-2 / r, &(&y - p.matrix()));
        }
        let x = o.retract(&y).unwrap();
        assert!(x.residual() < 1e-12);
    }

    #[test]
    fn basin_escape() {
        let o = Manifold::orth(3, Field::Real).unwrap();
        let y = Matrix::identity(3, Field::Real).scale(3.0);
        assert!(matches!(o.retract(&y), Err(Error::BasinEscape { .. })));
    }

    #[test]
    fn pfaffian_of_blocks() {
        assert_eq!(pfaffian(&block_j(&[1.0])).unwrap(), -1.0);
        assert_eq!(pfaffian(&block_j(&[1.0, -1.0, 1.0])).unwrap(), -1.0 * 1.0 * -1.0);
    }
}
