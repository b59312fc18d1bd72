//! Bott-Samelson resolutions of SO(n), G_{n,k} and CS_n and the cycles
//! through the critical points of `f_a`.
//!
//! Cycle convention: for a label `I = (i_1 < … < i_r)` the `s`-th line is
//! drawn from the coordinate subspace spanned by `e_1, …, e_{i_s}` (a
//! projective space of dimension `i_s − 1`). Coordinate lines `e_{i_s}`
//! then resolve to `σ_I`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, Field, Matrix, Scalar};
use crate::manifold::{Manifold, ManifoldKind, ManifoldPoint};
use crate::morse::{Label, MorseSetup};
use crate::rng::stream_rng;

const ORTHO_TOL: f64 = 1e-9;
const SAMPLER_RETRIES: usize = 64;

/// A unit vector in Rⁿ or Cⁿ standing for the line it spans.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    coords: Vec<Scalar>,
    field: Field,
}

impl Line {
    /// Normalise `coords`; fails on the zero vector.
    pub fn new(coords: Vec<Scalar>, field: Field) -> Result<Line> {
        if field == Field::Quaternion {
            return Err(Error::Unsupported("quaternionic lines".into()));
        }
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::InvalidArgument("a line needs a nonzero spanning vector".into()));
        }
        Ok(Line {
            coords: coords.into_iter().map(|z| z.restrict(field).scale(1.0 / norm)).collect(),
            field,
        })
    }

    pub fn real(v: &[f64]) -> Result<Line> {
        Line::new(v.iter().map(|&x| Scalar::real(x)).collect(), Field::Real)
    }

    /// The coordinate line `e_i` (1-based) in `F^n`.
    pub fn coordinate(n: usize, i: usize, field: Field) -> Line {
        let mut coords = vec![Scalar::ZERO; n];
        coords[i - 1] = Scalar::ONE;
        Line { coords, field }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Hermitian inner product `⟨self, other⟩ = Σ conj(self_i)·other_i`.
    pub fn dot(&self, other: &Line) -> Scalar {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(Scalar::ZERO, |acc, (a, b)| acc + a.conj() * *b)
    }

    /// Orthogonal projector `l l*`.
    pub fn projector(&self) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, self.field, |r, c| self.coords[r] * self.coords[c].conj())
    }
}

/// An ordered orthonormal pair `(u, v)` in R^{2n}.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPlane {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl OrientedPlane {
    /// Accepts an orthonormal pair (within 1e-12).
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<OrientedPlane> {
        if u.len() != v.len() {
            return Err(Error::InvalidArgument("plane vectors differ in length".into()));
        }
        let uu: f64 = u.iter().map(|x| x * x).sum();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        if (uu - 1.0).abs() > 1e-12 || (vv - 1.0).abs() > 1e-12 || uv.abs() > 1e-12 {
            return Err(Error::NonOrthogonal(uv.abs().max((uu - 1.0).abs()).max((vv - 1.0).abs())));
        }
        Ok(OrientedPlane { u, v })
    }

    /// Gram-Schmidt on an arbitrary independent pair, keeping the orientation.
    pub fn spanned_by(u: &[f64], v: &[f64]) -> Result<OrientedPlane> {
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nu < 1e-12 {
            return Err(Error::InvalidArgument("degenerate plane".into()));
        }
        let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let c: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        let w: Vec<f64> = v.iter().zip(&u).map(|(b, a)| b - c * a).collect();
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nw < 1e-12 {
            return Err(Error::InvalidArgument("degenerate plane".into()));
        }
        OrientedPlane::new(u, w.into_iter().map(|x| x / nw).collect())
    }

    pub fn reversed(&self) -> OrientedPlane {
        OrientedPlane {
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }
    pub fn v(&self) -> &[f64] {
        &self.v
    }
}

/// `R(l) = I − 2 l lᵗ`.
pub fn reflection(l: &Line) -> Result<Matrix> {
    if l.field != Field::Real {
        return Err(Error::FieldMismatch {
            expected: Field::Real,
            found: l.field,
        });
    }
    Ok(Matrix::identity(l.dim(), Field::Real).axpy(-2.0, &l.projector()))
}

/// `R(l_1) ⋯ R(l_{n′})` with `n′ = 2⌊n/2⌋`.
pub fn resolve_so(lines: &[Line], n: usize) -> Result<ManifoldPoint> {
    let m = Manifold::special_orth(n)?;
    if lines.len() != m.n_prime() {
        return Err(Error::InvalidArgument(format!(
            "SO({n}) is resolved by {} lines, got {}",
            m.n_prime(),
            lines.len()
        )));
    }
    let mut x = Matrix::identity(n, Field::Real);
    for l in lines {
        if l.dim() != n {
            return Err(Error::ShapeMismatch {
                expected: (n, 1),
                found: (l.dim(), 1),
            });
        }
        x = &x * &reflection(l)?;
    }
    m.point_with_tol(x, 1e-9)
}

fn check_orthogonal(lines: &[Line]) -> Result<()> {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let overlap = lines[i].dot(&lines[j]).abs();
            if overlap > ORTHO_TOL {
                return Err(Error::NonOrthogonal(overlap));
            }
        }
    }
    Ok(())
}

/// `I − 2P` with `P` the orthogonal projector onto the span of `k`
/// mutually orthogonal lines in Cⁿ; `k = n` gives `−I`.
pub fn resolve_grass_matrix(lines: &[Line], n: usize) -> Result<Matrix> {
    check_orthogonal(lines)?;
    let mut p = Matrix::zeros(n, n, Field::Complex);
    for l in lines {
        if l.dim() != n {
            return Err(Error::ShapeMismatch {
                expected: (n, 1),
                found: (l.dim(), 1),
            });
        }
        p = &p + &l.projector().promote(Field::Complex);
    }
    Ok(Matrix::identity(n, Field::Complex).axpy(-2.0, &p))
}

/// The point of `G(n, k)` spanned by `k = lines.len()` orthogonal lines.
pub fn resolve_grass(lines: &[Line], n: usize) -> Result<ManifoldPoint> {
    let m = Manifold::grass(n, lines.len())?;
    let x = resolve_grass_matrix(lines, n)?;
    m.point_with_tol(x, 1e-9)
}

/// `τ(L) = I − uuᵗ − vvᵗ + vuᵗ − uvᵗ`: rotation by π/2 on `L` taking `u` to
/// `v`, identity on `L^⊥`.
pub fn tau(plane: &OrientedPlane) -> Matrix {
    let dim = plane.u.len();
    let (u, v) = (&plane.u, &plane.v);
    Matrix::from_fn(dim, dim, Field::Real, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        Scalar::real(id - u[r] * u[c] - v[r] * v[c] + v[r] * u[c] - u[r] * v[c])
    })
}

/// `Π τ(L_i)` over `n` mutually orthogonal oriented planes in R^{2n}.
pub fn resolve_cs(planes: &[OrientedPlane]) -> Result<ManifoldPoint> {
    let n = planes.len();
    let m = Manifold::cplx_str(n)?;
    for p in planes {
        if p.u.len() != 2 * n {
            return Err(Error::ShapeMismatch {
                expected: (2 * n, 1),
                found: (p.u.len(), 1),
            });
        }
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (&planes[i], &planes[j]);
            let overlap = [dot(&p.u, &q.u), dot(&p.u, &q.v), dot(&p.v, &q.u), dot(&p.v, &q.v)]
                .iter()
                .fold(0.0f64, |acc, x| acc.max(x.abs()));
            if overlap > ORTHO_TOL {
                return Err(Error::NonOrthogonal(overlap));
            }
        }
    }
    let mut x = Matrix::identity(2 * n, Field::Real);
    for p in planes {
        x = &x * &tau(p);
    }
    m.point_with_tol(x, 1e-9)
}

fn label_subset(setup: &MorseSetup, label: &Label) -> Result<Vec<usize>> {
    setup.index_closed(label)?;
    match label {
        Label::Subset(s) => Ok(s.clone()),
        Label::Perm(_) => Err(Error::Unsupported("Bott-Samelson cycles of the flag manifold".into())),
    }
}

/// Gaussian parameters of a cycle sample: one vector in `F^{i_s}` per line.
#[derive(Debug, Clone)]
struct CycleParams {
    n: usize,
    field: Field,
    fixed: usize,
    blocks: Vec<Vec<Scalar>>,
}

impl CycleParams {
    fn draw<R: Rng + ?Sized>(n: usize, field: Field, fixed: usize, set: &[usize], rng: &mut R) -> Self {
        let blocks = set
            .iter()
            .map(|&i| {
                (0..i)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        if field == Field::Complex {
                            Scalar::complex(re, rng.sample(StandardNormal))
                        } else {
                            Scalar::real(re)
                        }
                    })
                    .collect()
            })
            .collect();
        CycleParams { n, field, fixed, blocks }
    }

    fn real_len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum::<usize>() * self.field.real_dim()
    }

    fn nudge(&self, j: usize, eps: f64) -> Self {
        let mut out = self.clone();
        let d = self.field.real_dim();
        let mut idx = j / d;
        for b in out.blocks.iter_mut() {
            if idx < b.len() {
                let mut c = b[idx].components();
                c[j % d] += eps;
                b[idx] = Scalar::from_components(c);
                break;
            }
            idx -= b.len();
        }
        out
    }

    /// Lines `l_s ∈ span(e_1..e_{i_s})`, orthogonalised against the previous
    /// lines when `orthogonal` is set. `None` if a block collapses.
    fn lines(&self, orthogonal: bool) -> Option<Vec<Line>> {
        let mut out: Vec<Line> = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let mut v = vec![Scalar::ZERO; self.n];
            v[..b.len()].copy_from_slice(b);
            if orthogonal {
                for _ in 0..2 {
                    for l in &out {
                        let c = l.dot(&Line {
                            coords: v.clone(),
                            field: self.field,
                        });
                        for (vi, li) in v.iter_mut().zip(&l.coords) {
                            *vi -= *li * c;
                        }
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                return None;
            }
            out.push(Line::new(v, self.field).ok()?);
        }
        Some(out)
    }

    fn resolve(&self, m: &Manifold) -> Result<Option<Matrix>> {
        match m.kind() {
            ManifoldKind::SpecialOrth { n } => {
                let Some(lines) = self.lines(false) else { return Ok(None) };
                let mut all = vec![Line::coordinate(*n, 1, Field::Real); self.fixed];
                all.extend(lines);
                Ok(Some(resolve_so(&all, *n)?.into_matrix()))
            }
            ManifoldKind::Grass { n, .. } => {
                let Some(lines) = self.lines(true) else { return Ok(None) };
                Ok(Some(resolve_grass_matrix(&lines, *n)?))
            }
            _ => Err(Error::Unsupported(format!("Bott-Samelson cycles of {m}"))),
        }
    }
}

fn cycle_params<R: Rng + ?Sized>(setup: &MorseSetup, label: &Label, rng: &mut R) -> Result<CycleParams> {
    let set = label_subset(setup, label)?;
    let m = setup.manifold();
    match m.kind() {
        ManifoldKind::SpecialOrth { n } => {
            let fixed = m.n_prime() - set.len();
            Ok(CycleParams::draw(*n, Field::Real, fixed, &set, rng))
        }
        ManifoldKind::Grass { n, .. } => Ok(CycleParams::draw(*n, Field::Complex, 0, &set, rng)),
        _ => Err(Error::Unsupported(format!("Bott-Samelson cycles of {m}"))),
    }
}

/// One seeded point of the Bott-Samelson cycle through `σ_I`, for SO(n)
/// (RP⁰ factors on the line `e_1`, then `l_s ∈ RP^{i_s − 1}`) and `G(n, k)`
/// (`l_s ∈ CP^{i_s − 1}` orthogonal to `l_1, …, l_{s−1}`).
pub fn sample_bs_cycle(setup: &MorseSetup, label: &Label, seed: u64) -> Result<ManifoldPoint> {
    let mut rng = stream_rng(seed, 0);
    for _ in 0..SAMPLER_RETRIES {
        let params = cycle_params(setup, label, &mut rng)?;
        if let Some(x) = params.resolve(setup.manifold())? {
            return setup.manifold().point_with_tol(x, 1e-9);
        }
    }
    Err(Error::SamplerExhausted(SAMPLER_RETRIES))
}

/// Numerical dimension of the cycle through `σ_I`: rank of the differential
/// of the Gaussian parametrisation at a seeded generic point.
pub fn cycle_dimension(setup: &MorseSetup, label: &Label, seed: u64) -> Result<usize> {
    let m = setup.manifold();
    let mut rng = stream_rng(seed, 0);
    let eps = 1e-6;
    for _ in 0..SAMPLER_RETRIES {
        let params = cycle_params(setup, label, &mut rng)?;
        let len = params.real_len();
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(len);
        let mut ok = true;
        for j in 0..len {
            let (Some(p), Some(q)) = (params.nudge(j, eps).resolve(m)?, params.nudge(j, -eps).resolve(m)?) else {
                ok = false;
                break;
            };
            cols.push((&p - &q).scale(0.5 / eps).to_real_vec());
        }
        if !ok {
            continue;
        }
        if len == 0 {
            return Ok(0);
        }
        let mut gram = vec![0.0; len * len];
        for i in 0..len {
            for j in 0..len {
                gram[i * len + j] = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
            }
        }
        for i in 0..len {
            for j in i + 1..len {
                let s = 0.5 * (gram[i * len + j] + gram[j * len + i]);
                gram[i * len + j] = s;
                gram[j * len + i] = s;
            }
        }
        let eig = jacobi_eigh(&Matrix::from_real(len, len, &gram))?;
        let top = eig.spectral_radius();
        return Ok(eig.values.iter().filter(|&&v| v > (1e-8 * top).max(1e-14)).count());
    }
    Err(Error::SamplerExhausted(SAMPLER_RETRIES))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsMaxReport {
    pub max_f: f64,
    pub f_sigma: f64,
    /// Fraction of samples with `f ≥ f(σ_I) − 1e-6`.
    pub near_max_fraction: f64,
    pub samples: usize,
    /// `max_f ≤ f(σ_I) + 1e-9`.
    pub holds: bool,
}

/// Sampled test that `f_a` restricted to the cycle through `σ_I` peaks at `σ_I`.
pub fn bs_max_check(setup: &MorseSetup, label: &Label, samples: usize, seed: u64) -> Result<BsMaxReport> {
    let f_sigma = setup.f_value(&setup.critical_point(label)?.point)?;
    let mut max_f = f64::NEG_INFINITY;
    let mut near = 0usize;
    for i in 0..samples {
        let sub = stream_rng(seed, i as u64).random::<u64>();
        let p = sample_bs_cycle(setup, label, sub)?;
        let f = setup.f_value(&p)?;
        max_f = max_f.max(f);
        if f >= f_sigma - 1e-6 {
            near += 1;
        }
    }
    Ok(BsMaxReport {
        max_f,
        f_sigma,
        near_max_fraction: if samples == 0 { 0.0 } else { near as f64 / samples as f64 },
        samples,
        holds: samples == 0 || max_f <= f_sigma + 1e-9,
    })
}
