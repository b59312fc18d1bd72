//! The distance-squared function `f_a(x) = ‖x − a‖²` and its critical data.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::config::{CRITICAL_GRAD_TOL, DEGENERACY_REL, TANGENT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{inner_unchecked, jacobi_eigh, Field, Matrix, Scalar};
use crate::manifold::{block_j, Manifold, ManifoldKind, ManifoldPoint};

/// Label of a critical point: a subset `I ⊆ [1..n]` (1-based, increasing)
/// or, for the flag manifold, a permutation `w` in one-line notation with
/// `w(a) = diag(λ_{w(1)}, …, λ_{w(n)})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Subset(Vec<usize>),
    Perm(Vec<usize>),
}

impl Label {
    pub fn subset(mut items: Vec<usize>) -> Label {
        items.sort_unstable();
        items.dedup();
        Label::Subset(items)
    }

    /// Parse `"2,4"`, `"{2,4}"`, `"[2,1,3]"` (permutation) or `""` / `"{}"` (empty set).
    pub fn parse(s: &str) -> Result<Label> {
        let t = s.trim();
        let (perm, body) = if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            (true, inner)
        } else if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            (false, inner)
        } else {
            (false, t)
        };
        let mut items = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: usize = part
                .parse()
                .map_err(|_| Error::MalformedLabel(format!("not a positive integer: {part:?}")))?;
            if v == 0 {
                return Err(Error::MalformedLabel("labels are 1-based".into()));
            }
            items.push(v);
        }
        if perm {
            Ok(Label::Perm(items))
        } else {
            let mut sorted = items.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != items.len() {
                return Err(Error::MalformedLabel(format!("repeated element in {s:?}")));
            }
            Ok(Label::Subset(sorted))
        }
    }

    pub fn items(&self) -> &[usize] {
        match self {
            Label::Subset(v) | Label::Perm(v) => v,
        }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Subset(a), Label::Subset(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Label::Perm(a), Label::Perm(b)) => a.cmp(b),
            (Label::Subset(_), Label::Perm(_)) => Ordering::Less,
            (Label::Perm(_), Label::Subset(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self {
            Label::Subset(_) => ('{', '}'),
            Label::Perm(_) => ('[', ']'),
        };
        let body: Vec<String> = self.items().iter().map(|v| v.to_string()).collect();
        write!(f, "{open}{}{close}", body.join(","))
    }
}

/// Manifold together with the focal point `a`.
#[derive(Debug, Clone)]
pub struct MorseSetup {
    manifold: Manifold,
    lambda: Vec<f64>,
    a: Matrix,
}

impl MorseSetup {
    /// Default focal point with `λ_i = i` (or the fixed spectrum for flags).
    pub fn new(manifold: Manifold) -> Result<Self> {
        let lambda = match manifold.kind() {
            ManifoldKind::FlagU { spectrum } => spectrum.clone(),
            _ => (1..=manifold.n()).map(|i| i as f64).collect(),
        };
        MorseSetup::with_lambda(manifold, lambda)
    }

    pub fn with_lambda(manifold: Manifold, lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() != manifold.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} lambda values, got {}",
                manifold.n(),
                lambda.len()
            )));
        }
        if lambda.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidArgument("lambda values must be positive and finite".into()));
        }
        if lambda.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("lambda must be strictly increasing".into()));
        }
        let a = match manifold.kind() {
            ManifoldKind::CplxStr { .. } => block_j(&lambda),
            ManifoldKind::FlagU { spectrum } => {
                if spectrum != &lambda {
                    return Err(Error::InvalidArgument(
                        "the flag focal point is fixed by its spectrum".into(),
                    ));
                }
                Matrix::diag_real(&lambda, manifold.field())
            }
            _ => Matrix::diag_real(&lambda, manifold.field()),
        };
        Ok(MorseSetup { manifold, lambda, a })
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }
    pub fn focal(&self) -> &Matrix {
        &self.a
    }

    /// `‖x − a‖²`.
    pub fn f_value(&self, p: &ManifoldPoint) -> Result<f64> {
        self.check(p)?;
        Ok(self.f_raw(p.matrix()))
    }

    pub(crate) fn f_raw(&self, x: &Matrix) -> f64 {
        (x - &self.a).norm_sqr()
    }

    /// `‖x‖² + ‖a‖² − 2⟨a, x⟩` with `⟨a, x⟩` read off the entries of `x`.
    pub fn f_value_expanded(&self, p: &ManifoldPoint) -> Result<f64> {
        self.check(p)?;
        let x = p.matrix();
        let lam = &self.lambda;
        let a_dot_x: f64 = match self.manifold.kind() {
            ManifoldKind::CplxStr { .. } => (0..lam.len())
                .map(|i| lam[i] * (x[(2 * i + 1, 2 * i)].re - x[(2 * i, 2 * i + 1)].re))
                .sum(),
            _ => (0..lam.len()).map(|i| lam[i] * x[(i, i)].re).sum(),
        };
        let a_sq: f64 = match self.manifold.kind() {
            ManifoldKind::CplxStr { .. } => 2.0 * lam.iter().map(|v| v * v).sum::<f64>(),
            _ => lam.iter().map(|v| v * v).sum(),
        };
        Ok(self.manifold.norm_sqr_on_manifold() + a_sq - 2.0 * a_dot_x)
    }

    fn check(&self, p: &ManifoldPoint) -> Result<()> {
        if p.manifold() != &self.manifold {
            return Err(Error::InvalidArgument(format!(
                "point on {} used with a setup on {}",
                p.manifold(),
                self.manifold
            )));
        }
        Ok(())
    }

    /// Gradient of `f_a` along the manifold.
    pub fn gradient_closed(&self, p: &ManifoldPoint) -> Result<Matrix> {
        self.check(p)?;
        Ok(self.gradient_raw(p.matrix()))
    }

    /// Closed-form gradient evaluated at an arbitrary ambient matrix; this is
    /// the ambient vector field the flow integrator steps along.
    pub(crate) fn gradient_raw(&self, x: &Matrix) -> Matrix {
        let a = &self.a;
        match self.manifold.kind() {
            ManifoldKind::Orth { .. }
            | ManifoldKind::SpecialOrth { .. }
            | ManifoldKind::Grass { .. }
            | ManifoldKind::Lagrangian { .. } => &(&(x * a) * x) - a,
            ManifoldKind::CplxStr { .. } => -&(a + &(&(x * a) * x)),
            ManifoldKind::FlagU { .. } => {
                let u = (x - a).scale(2.0);
                self.manifold.tangent_project_raw(x, &u)
            }
        }
    }

    /// `tangent_project(x, 2(x − a))`, the definition the closed forms must match.
    pub fn gradient_projected(&self, p: &ManifoldPoint) -> Result<Matrix> {
        let u = (p.matrix() - &self.a).scale(2.0);
        self.manifold.tangent_project(p, &u)
    }

    /// The critical point `σ_I` (or `w(a)`) as a matrix.
    pub fn critical_matrix(&self, label: &Label) -> Result<Matrix> {
        self.validate_label(label)?;
        let n = self.manifold.n();
        Ok(match label {
            Label::Subset(set) => {
                let eps: Vec<f64> = (1..=n).map(|i| if set.contains(&i) { -1.0 } else { 1.0 }).collect();
                match self.manifold.kind() {
                    ManifoldKind::CplxStr { .. } => block_j(&eps),
                    _ => Matrix::diag_real(&eps, self.manifold.field()),
                }
            }
            Label::Perm(w) => {
                let vals: Vec<f64> = w.iter().map(|&j| self.lambda[j - 1]).collect();
                Matrix::diag_real(&vals, Field::Complex)
            }
        })
    }

    pub fn critical_point(&self, label: &Label) -> Result<CriticalPoint> {
        let x = self.critical_matrix(label)?;
        let point = self.manifold.point(x)?;
        let grad_norm = self.gradient_raw(point.matrix()).norm();
        if grad_norm > CRITICAL_GRAD_TOL {
            return Err(Error::InvalidArgument(format!(
                "{label} is not critical (gradient norm {grad_norm:.3e})"
            )));
        }
        let index = self.index_closed(label)?;
        Ok(CriticalPoint {
            label: label.clone(),
            point,
            index,
            grad_norm,
        })
    }

    fn validate_label(&self, label: &Label) -> Result<()> {
        let n = self.manifold.n();
        let is_flag = matches!(self.manifold.kind(), ManifoldKind::FlagU { .. });
        match label {
            Label::Perm(w) => {
                if !is_flag {
                    return Err(Error::MalformedLabel(format!(
                        "{} critical points are labelled by subsets",
                        self.manifold
                    )));
                }
                let mut seen = vec![false; n];
                if w.len() != n || w.iter().any(|&j| j == 0 || j > n || std::mem::replace(&mut seen[j - 1], true)) {
                    return Err(Error::MalformedLabel(format!("{label} is not a permutation of 1..{n}")));
                }
            }
            Label::Subset(set) => {
                if is_flag {
                    return Err(Error::MalformedLabel("flag critical points are labelled by permutations".into()));
                }
                if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i == 0 || i > n) {
                    return Err(Error::MalformedLabel(format!("{label} is not an increasing subset of 1..{n}")));
                }
                match self.manifold.kind() {
                    ManifoldKind::Grass { k, .. } if set.len() != *k => {
                        return Err(Error::MalformedLabel(format!("Grassmannian labels have size {k}")));
                    }
                    ManifoldKind::SpecialOrth { .. } if set.len() % 2 == 1 => {
                        return Err(Error::MalformedLabel("SO(n) labels have even size".into()));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Closed-form Morse index.
    pub fn index_closed(&self, label: &Label) -> Result<usize> {
        self.validate_label(label)?;
        let items = label.items();
        let sum: usize = items.iter().sum();
        let r = items.len();
        Ok(match self.manifold.kind() {
            ManifoldKind::Orth { field, .. } => field.real_dim() * sum - r,
            ManifoldKind::SpecialOrth { .. } => sum - r,
            ManifoldKind::CplxStr { .. } => 2 * (sum - r),
            ManifoldKind::Lagrangian { .. } => sum,
            ManifoldKind::Grass { .. } => 2 * items.iter().enumerate().map(|(s, &i)| i - (s + 1)).sum::<usize>(),
            ManifoldKind::FlagU { .. } => {
                let lam = &self.lambda;
                let w = items;
                let mut crossings = 0;
                for i in 0..w.len() {
                    for j in i + 1..w.len() {
                        let before = lam[i] - lam[j];
                        let after = lam[w[i] - 1] - lam[w[j] - 1];
                        if before * after < 0.0 {
                            crossings += 1;
                        }
                    }
                }
                2 * crossings
            }
        })
    }

    /// All critical points, sorted by label.
    pub fn enumerate_critical(&self) -> Result<Vec<CriticalPoint>> {
        let n = self.manifold.n();
        let labels: Vec<Label> = match self.manifold.kind() {
            ManifoldKind::FlagU { .. } => permutations(n).into_iter().map(Label::Perm).collect(),
            ManifoldKind::Grass { k, .. } => subsets(n).into_iter().filter(|s| s.len() == *k).map(Label::Subset).collect(),
            ManifoldKind::SpecialOrth { .. } => {
                subsets(n).into_iter().filter(|s| s.len() % 2 == 0).map(Label::Subset).collect()
            }
            _ => subsets(n).into_iter().map(Label::Subset).collect(),
        };
        let mut out = labels
            .iter()
            .map(|l| self.critical_point(l))
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(out)
    }

    /// Hessian operator at a critical point applied to a tangent vector.
    pub fn hessian_apply(&self, c: &CriticalPoint, u: &Matrix) -> Result<Matrix> {
        let m = &self.manifold;
        let u = m.coerce(u)?;
        let x0 = c.point.matrix();
        let defect = m.tangent_equation_residual(x0, &u)?;
        if defect > TANGENT_TOL * u.norm().max(1.0) {
            return Err(Error::NotTangent(defect));
        }
        let a = &self.a;
        Ok(match m.kind() {
            ManifoldKind::Grass { .. } => &(&(&u * a) - &(a * &u)) * x0,
            ManifoldKind::Orth { .. } | ManifoldKind::SpecialOrth { .. } => {
                &(&(&u * a) - &(a * &u.adjoint())) * x0
            }
            ManifoldKind::Lagrangian { .. } => &(&(&u * a) - &(a * &u.conj())) * x0,
            ManifoldKind::CplxStr { .. } => &(&(a * &u) - &(&u * a)) * x0,
            ManifoldKind::FlagU { .. } => self.hessian_fd(c, &u, 1e-5)?,
        })
    }

    /// Central difference of the gradient field along `u`, re-projected to
    /// the tangent space at the critical point.
    pub fn hessian_fd(&self, c: &CriticalPoint, u: &Matrix, h: f64) -> Result<Matrix> {
        let x0 = c.point.matrix();
        let plus = self.manifold.retract(&x0.axpy(h, u))?;
        let minus = self.manifold.retract(&x0.axpy(-h, u))?;
        let diff = (&self.gradient_raw(plus.matrix()) - &self.gradient_raw(minus.matrix())).scale(0.5 / h);
        self.manifold.tangent_project(&c.point, &diff)
    }

    /// One-sided difference quotient `[grad(retract(x0 + h u)) − grad(x0)] / h`.
    pub fn gradient_difference_quotient(&self, c: &CriticalPoint, u: &Matrix, h: f64) -> Result<Matrix> {
        let x0 = c.point.matrix();
        let moved = self.manifold.retract(&x0.axpy(h, u))?;
        Ok((&self.gradient_raw(moved.matrix()) - &self.gradient_raw(x0)).scale(1.0 / h))
    }

    /// Tangent basis diagonalising the Hessian, with predicted eigenvalues.
    pub fn canonical_tangent_basis(&self, c: &CriticalPoint) -> Result<CanonicalBasis> {
        let n = self.manifold.n();
        let lam = &self.lambda;
        let set: Vec<usize> = match &c.label {
            Label::Subset(s) => s.clone(),
            Label::Perm(_) => Vec::new(),
        };
        let in_i = |s: usize| set.contains(&s);
        let mut vectors = Vec::new();
        let mut push = |label: String, m: Matrix, ev: f64| {
            let nrm = m.norm();
            vectors.push(LabeledTangent {
                label,
                vector: m.scale(1.0 / nrm),
                eigenvalue: Some(ev),
            });
        };
        match self.manifold.kind() {
            ManifoldKind::Grass { .. } => {
                for &s in &set {
                    for t in (1..=n).filter(|&t| !in_i(t)) {
                        let ev = lam[t - 1] - lam[s - 1];
                        push(format!("b_{s},{t}"), sym_unit(n, s, t, Scalar::ONE, Field::Complex, true), ev);
                        push(format!("c_{s},{t}"), sym_unit(n, s, t, Scalar::I, Field::Complex, true), ev);
                    }
                }
            }
            ManifoldKind::Orth { field: Field::Real, .. } | ManifoldKind::SpecialOrth { .. } => {
                for s in 1..=n {
                    for t in s + 1..=n {
                        match (in_i(s), in_i(t)) {
                            (true, true) => push(format!("beta_{s},{t}"), skew_unit(n, s, t), -(lam[s - 1] + lam[t - 1])),
                            (false, false) => push(format!("beta_{s},{t}"), skew_unit(n, s, t), lam[s - 1] + lam[t - 1]),
                            _ => {}
                        }
                    }
                }
                for &s in &set {
                    for t in (1..=n).filter(|&t| !in_i(t)) {
                        push(
                            format!("b_{s},{t}"),
                            sym_unit(n, s, t, Scalar::ONE, Field::Real, true),
                            lam[t - 1] - lam[s - 1],
                        );
                    }
                }
            }
            ManifoldKind::Lagrangian { .. } => {
                for &s in &set {
                    for t in (1..=n).filter(|&t| !in_i(t)) {
                        push(
                            format!("b_{s},{t}"),
                            sym_unit(n, s, t, Scalar::ONE, Field::Complex, true),
                            lam[t - 1] - lam[s - 1],
                        );
                    }
                }
                for s in 1..=n {
                    for t in s..=n {
                        let ev = match (in_i(s), in_i(t)) {
                            (true, true) => -(lam[s - 1] + lam[t - 1]),
                            (false, false) => lam[s - 1] + lam[t - 1],
                            _ => continue,
                        };
                        push(format!("ib_{s},{t}"), sym_unit(n, s, t, Scalar::I, Field::Complex, false), ev);
                    }
                }
            }
            _ => {
                let frame = self.manifold.tangent_frame(&c.point)?;
                return Ok(CanonicalBasis {
                    vectors: frame
                        .into_iter()
                        .enumerate()
                        .map(|(i, v)| LabeledTangent {
                            label: format!("e_{}", i + 1),
                            vector: v,
                            eigenvalue: None,
                        })
                        .collect(),
                    fallback: true,
                });
            }
        }
        Ok(CanonicalBasis {
            vectors,
            fallback: false,
        })
    }

    /// Morse index from the signature of the Hessian form on a tangent frame.
    pub fn index_numeric(&self, c: &CriticalPoint) -> Result<NumericIndex> {
        self.index_numeric_with(c, DEGENERACY_REL)
    }

    pub fn index_numeric_with(&self, c: &CriticalPoint, degeneracy_rel: f64) -> Result<NumericIndex> {
        let frame = self.manifold.tangent_frame(&c.point)?;
        let images = frame
            .iter()
            .map(|e| self.hessian_apply(c, e))
            .collect::<Result<Vec<_>>>()?;
        let d = frame.len();
        let mut g = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                g[i * d + j] = inner_unchecked(&images[i], &frame[j]);
            }
        }
        // the closed forms are symmetric to roundoff; finite differences are not
        let mut asymmetry: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                let (x, y) = (g[i * d + j], g[j * d + i]);
                asymmetry = asymmetry.max((x - y).abs());
                let m = 0.5 * (x + y);
                g[i * d + j] = m;
                g[j * d + i] = m;
            }
        }
        let eig = if d == 0 {
            Vec::new()
        } else {
            jacobi_eigh(&Matrix::from_real(d, d, &g))?.values
        };
        let radius = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tau = degeneracy_rel * radius;
        if let Some(&bad) = eig.iter().find(|v| v.abs() <= tau) {
            return Err(Error::Degenerate {
                eigenvalue: bad,
                threshold: tau,
            });
        }
        let index = eig.iter().filter(|&&v| v < -tau).count();
        Ok(NumericIndex {
            index,
            eigenvalues: eig,
            threshold: tau,
            asymmetry,
        })
    }

    /// Poincaré polynomial from the index census. Z₂ coefficients are
    /// required for O(n), SO(n) and LG_n.
    pub fn poincare(&self, ring: Ring) -> Result<PoincarePolynomial> {
        let by = self.poincare_by_component(ring)?;
        let mut coeffs = vec![0u64; self.manifold.dim() + 1];
        for p in by.values() {
            for (d, c) in p.coeffs.iter().enumerate() {
                coeffs[d] += c;
            }
        }
        Ok(PoincarePolynomial::new(coeffs, ring))
    }

    /// Poincaré polynomial of each connected component, keyed by the
    /// component sign (determinant for O(n;R), Pfaffian for CS_n).
    pub fn poincare_by_component(&self, ring: Ring) -> Result<BTreeMap<i8, PoincarePolynomial>> {
        self.check_ring(ring)?;
        let mut out: BTreeMap<i8, Vec<u64>> = BTreeMap::new();
        for c in self.enumerate_critical()? {
            let sign = self.manifold.component_sign(c.point.matrix())?;
            let coeffs = out.entry(sign).or_insert_with(|| vec![0; self.manifold.dim() + 1]);
            coeffs[c.index] += 1;
        }
        Ok(out
            .into_iter()
            .map(|(k, v)| (k, PoincarePolynomial::new(v, ring)))
            .collect())
    }

    fn check_ring(&self, ring: Ring) -> Result<()> {
        let needs_z2 = match self.manifold.kind() {
            ManifoldKind::Orth { field, .. } => *field == Field::Real,
            ManifoldKind::SpecialOrth { .. } | ManifoldKind::Lagrangian { .. } => true,
            _ => false,
        };
        if needs_z2 && ring == Ring::Z {
            return Err(Error::Unsupported(format!(
                "the index census of {} computes Betti numbers only over Z2",
                self.manifold
            )));
        }
        Ok(())
    }

    /// `Σ (−1)^index` over the critical points.
    pub fn euler_characteristic(&self) -> Result<i64> {
        Ok(self
            .enumerate_critical()?
            .iter()
            .map(|c| if c.index % 2 == 0 { 1 } else { -1 })
            .sum())
    }
}

/// A critical point with its closed-form index.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub label: Label,
    pub point: ManifoldPoint,
    pub index: usize,
    pub grad_norm: f64,
}

#[derive(Debug, Clone)]
pub struct LabeledTangent {
    pub label: String,
    pub vector: Matrix,
    /// Predicted Hessian eigenvalue; `None` for the generic frame fallback.
    pub eigenvalue: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CanonicalBasis {
    pub vectors: Vec<LabeledTangent>,
    /// Set when no explicit basis is known for the kind and a generic
    /// orthonormal tangent frame was returned instead.
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct NumericIndex {
    pub index: usize,
    /// Eigenvalues of the Hessian Gram matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub threshold: f64,
    /// Largest asymmetry of the Gram matrix before symmetrisation.
    pub asymmetry: f64,
}

impl NumericIndex {
    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Z,
    Z2,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::Z2 => "Z2",
        })
    }
}

/// `Σ c_d t^d` with nonnegative integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePolynomial {
    pub coeffs: Vec<u64>,
    pub ring: Ring,
}

impl PoincarePolynomial {
    /// Trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<u64>, ring: Ring) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        PoincarePolynomial { coeffs, ring }
    }

    pub fn coefficient(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self, dim: usize) -> bool {
        (0..=dim).all(|d| self.coefficient(d) == self.coefficient(dim - d))
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && d > 0 { String::new() } else { c.to_string() };
            terms.push(match d {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{d}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `z` at `(s, t)` (1-based) mirrored to `(t, s)`: conjugated for a
/// Hermitian matrix, verbatim for a complex symmetric one.
fn sym_unit(n: usize, s: usize, t: usize, z: Scalar, field: Field, hermitian: bool) -> Matrix {
    let mut m = Matrix::zeros(n, n, field);
    m[(s - 1, t - 1)] = z;
    if s != t {
        m[(t - 1, s - 1)] = if hermitian { z.conj() } else { z };
    }
    m
}

/// Real skew matrix with `1` at `(s, t)` and `−1` at `(t, s)`.
fn skew_unit(n: usize, s: usize, t: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n, Field::Real);
    m[(s - 1, t - 1)] = Scalar::ONE;
    m[(t - 1, s - 1)] = -Scalar::ONE;
    m
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    heap_permute(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(m: Manifold) -> MorseSetup {
        MorseSetup::new(m).unwrap()
    }

    #[test]
    fn label_parsing() {
        assert_eq!(Label::parse("4,2").unwrap(), Label::Subset(vec![2, 4]));
        assert_eq!(Label::parse("{}").unwrap(), Label::Subset(vec![]));
        assert_eq!(Label::parse("[2,1,3]").unwrap(), Label::Perm(vec![2, 1, 3]));
        assert!(Label::parse("1,1").is_err());
        assert!(Label::parse("0").is_err());
        assert!(Label::parse("x").is_err());
        assert_eq!(Label::Subset(vec![1, 3]).to_string(), "{1,3}");
    }

    #[test]
    fn f_value_examples() {
        let s = setup(Manifold::orth(2, Field::Real).unwrap());
        let id = s.manifold().point(Matrix::identity(2, Field::Real)).unwrap();
        assert_eq!(s.f_value(&id).unwrap(), 1.0);
        let c = s.critical_point(&Label::Subset(vec![1])).unwrap();
        assert_eq!(s.f_value(&c.point).unwrap(), 5.0);
        assert_eq!(s.f_value_expanded(&c.point).unwrap(), 5.0);
    }

    #[test]
    fn sp2_index_seven() {
        let s = setup(Manifold::symplectic(2).unwrap());
        let c = s.critical_point(&Label::Subset(vec![2])).unwrap();
        assert_eq!(c.index, 7);
        assert_eq!(s.index_numeric(&c).unwrap().index, 7);
    }

    #[test]
    fn closed_index_examples() {
        let o3 = setup(Manifold::orth(3, Field::Real).unwrap());
        assert_eq!(o3.index_closed(&Label::Subset(vec![1, 2])).unwrap(), 1);
        let g = setup(Manifold::grass(4, 2).unwrap());
        assert_eq!(g.index_closed(&Label::Subset(vec![2, 4])).unwrap(), 6);
        assert!(g.index_closed(&Label::Subset(vec![2])).is_err());
        let lg = setup(Manifold::lagrangian(3).unwrap());
        assert_eq!(lg.index_closed(&Label::Subset(vec![1, 3])).unwrap(), 4);
        let fl = setup(Manifold::flag_default(3).unwrap());
        assert_eq!(fl.index_closed(&Label::Perm(vec![2, 1, 3])).unwrap(), 2);
        assert!(fl.index_closed(&Label::Perm(vec![1, 1, 3])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(setup(Manifold::grass(4, 2).unwrap()).enumerate_critical().unwrap().len(), 6);
        let u2 = setup(Manifold::unitary(2).unwrap()).enumerate_critical().unwrap();
        let labels: Vec<String> = u2.iter().map(|c| c.label.to_string()).collect();
        assert_eq!(labels, ["{}", "{1}", "{2}", "{1,2}"]);
        assert_eq!(setup(Manifold::flag_default(3).unwrap()).enumerate_critical().unwrap().len(), 6);
        assert_eq!(setup(Manifold::special_orth(4).unwrap()).enumerate_critical().unwrap().len(), 8);
    }

    #[test]
    fn hessian_eigen_examples() {
        let g = setup(Manifold::grass(4, 2).unwrap());
        let c = g.critical_point(&Label::Subset(vec![1, 2])).unwrap();
        let basis = g.canonical_tangent_basis(&c).unwrap();
        assert_eq!(basis.vectors.len(), 8);
        assert!(!basis.fallback);
        for v in &basis.vectors {
            let hv = g.hessian_apply(&c, &v.vector).unwrap();
            let ev = v.eigenvalue.unwrap();
            assert!((&hv - &v.vector.scale(ev)).norm() < 1e-12, "{}", v.label);
        }
        let zero = g.hessian_apply(&c, &g.manifold().zero()).unwrap();
        assert_eq!(zero.norm(), 0.0);

        let o3 = setup(Manifold::orth(3, Field::Real).unwrap());
        let c = o3.critical_point(&Label::Subset(vec![1, 2])).unwrap();
        assert_eq!(o3.canonical_tangent_basis(&c).unwrap().vectors.len(), 3);
        let lg = setup(Manifold::lagrangian(2).unwrap());
        let c = lg.critical_point(&Label::Subset(vec![1])).unwrap();
        assert_eq!(lg.canonical_tangent_basis(&c).unwrap().vectors.len(), 3);
        let cs = setup(Manifold::cplx_str(2).unwrap());
        let c = cs.critical_point(&Label::Subset(vec![])).unwrap();
        assert!(cs.canonical_tangent_basis(&c).unwrap().fallback);
    }

    #[test]
    fn hessian_rejects_normal_vectors() {
        let g = setup(Manifold::grass(4, 2).unwrap());
        let c = g.critical_point(&Label::Subset(vec![1, 2])).unwrap();
        let id = Matrix::identity(4, Field::Complex);
        assert!(matches!(g.hessian_apply(&c, &id), Err(Error::NotTangent(_))));
    }

    #[test]
    fn poincare_examples() {
        let u2 = setup(Manifold::unitary(2).unwrap());
        assert_eq!(u2.poincare(Ring::Z).unwrap().coeffs, vec![1, 1, 0, 1, 1]);
        assert_eq!(u2.poincare(Ring::Z).unwrap().to_string(), "1 + t + t^3 + t^4");
        let g = setup(Manifold::grass(4, 2).unwrap());
        assert_eq!(g.poincare(Ring::Z).unwrap().coeffs, vec![1, 0, 1, 0, 2, 0, 1, 0, 1]);
        let so3 = setup(Manifold::special_orth(3).unwrap());
        assert_eq!(so3.poincare(Ring::Z2).unwrap().coeffs, vec![1, 1, 1, 1]);
        assert!(matches!(so3.poincare(Ring::Z), Err(Error::Unsupported(_))));
        let cs = setup(Manifold::cplx_str(3).unwrap());
        let comps = cs.poincare_by_component(Ring::Z).unwrap();
        assert_eq!(comps.len(), 2);
        for p in comps.values() {
            assert!(p.is_palindromic(6));
            assert_eq!(p.total(), 4);
        }
    }

    #[test]
    fn euler_examples() {
        assert_eq!(setup(Manifold::grass(4, 2).unwrap()).euler_characteristic().unwrap(), 6);
        assert_eq!(setup(Manifold::unitary(2).unwrap()).euler_characteristic().unwrap(), 0);
        assert_eq!(setup(Manifold::flag_default(3).unwrap()).euler_characteristic().unwrap(), 6);
    }

    #[test]
    fn focal_validation() {
        let m = Manifold::grass(4, 2).unwrap();
        assert!(MorseSetup::with_lambda(m.clone(), vec![1.0, 2.0, 2.0, 3.0]).is_err());
        assert!(MorseSetup::with_lambda(m.clone(), vec![1.0, 2.0]).is_err());
        assert!(MorseSetup::with_lambda(m, vec![-1.0, 2.0, 3.0, 4.0]).is_err());
    }
}
