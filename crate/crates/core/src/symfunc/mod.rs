//! Symmetric functions and the cohomology rings of SO(n), G_{n,k} and CS_n.
//!
//! Schubert classes map to monomial symmetric functions `m_λ(t)` (SO(n),
//! over Z₂), Schur functions `s_λ(x_1..x_k)` (G_{n,k}) and Schur
//! P-functions `P_λ(y_1..y_n)` (CS_n).

mod bases;
mod lr;
mod partition;
mod poly;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use bases::{complete_h, elementary_e, monomial_sym, q_pair, q_single, schur, schur_p, schur_q};
pub use lr::lr_oracle;
pub use partition::{distinct_permutations, partitions, strict_partitions, Partition};
pub use poly::SymPoly;

use crate::error::{Error, Result};
use crate::manifold::{Manifold, ManifoldKind};
use crate::morse::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    Schur,
    SchurP,
}

impl Basis {
    /// The basis element labelled `λ` in `v` variables.
    pub fn element(self, lambda: &Partition, v: usize) -> Result<SymPoly> {
        match self {
            Basis::Monomial => monomial_sym(lambda, v),
            Basis::Schur => Ok(schur(lambda, v)),
            Basis::SchurP => schur_p(lambda, v),
        }
    }

    /// Whether `λ` labels a nonzero, leading-term-normalised element in `v` variables.
    fn admits(self, lambda: &Partition, v: usize) -> bool {
        lambda.len() <= v && (self != Basis::SchurP || lambda.is_strict())
    }
}

/// Coefficients of `f` in `basis`, by repeated subtraction of the basis
/// element whose leading monomial matches the leading monomial of the
/// remainder (each element is `m_λ` plus dominance-lower terms).
pub fn expand_in_basis(f: &SymPoly, basis: Basis) -> Result<BTreeMap<Partition, BigInt>> {
    let v = f.nvars();
    let mut cache: HashMap<Partition, SymPoly> = HashMap::new();
    let mut rest = f.clone();
    let mut out: BTreeMap<Partition, BigInt> = BTreeMap::new();
    while let Some((lead, c)) = rest.leading().map(|(k, c)| (k.clone(), c.clone())) {
        if !basis.admits(&lead, v) {
            return Err(Error::NotInSpan(format!("leading term m{lead} has no {basis:?} partner")));
        }
        let b = match cache.get(&lead) {
            Some(b) => b.clone(),
            None => {
                let b = basis.element(&lead, v)?;
                cache.insert(lead.clone(), b.clone());
                b
            }
        };
        if b.coeff(&lead) != BigInt::one() {
            return Err(Error::NotInSpan(format!("{basis:?} element {lead} is not monic")));
        }
        rest = rest.sub(&b.scale(&c))?;
        let e = out.entry(lead).or_insert_with(BigInt::zero);
        *e += c;
        if f.is_mod2() {
            *e = ((&*e % 2) + 2) % 2;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Rebuild `Σ c_λ b_λ`.
pub fn combine(coeffs: &BTreeMap<Partition, BigInt>, basis: Basis, v: usize) -> Result<SymPoly> {
    let mut out = SymPoly::zero(v);
    for (k, c) in coeffs {
        out = out.add(&basis.element(k, v)?.scale(c))?;
    }
    Ok(out)
}

/// Presentation of a cohomology ring as a quotient of symmetric functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingSpec {
    /// `H*(G_{n,k}; Z)`: Schur functions in `k` variables modulo `λ_1 > n − k`.
    GrassQuotient { n: usize, k: usize },
    /// `Z₂[t_1..t_vars]/⟨t_i^n⟩`, symmetric part, for SO(n) with `vars = n′`.
    TruncatedZ2 { n: usize, vars: usize },
    /// Schur P-functions in `n` variables modulo `ν_1 ≥ n`, for CS_n.
    SchurPRing { n: usize },
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::GrassQuotient { n, k } => write!(f, "H*(G({n},{k}); Z)"),
            RingSpec::TruncatedZ2 { n, vars } => write!(f, "Z2[t_1..t_{vars}]/<t_i^{n}>"),
            RingSpec::SchurPRing { n } => write!(f, "H*(CS({n}); Z)"),
        }
    }
}

impl RingSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RingSpec::GrassQuotient { n, k } if k == 0 || k >= n => {
                Err(Error::InvalidArgument(format!("Grassmannian ring needs 1 <= k < n, got n={n}, k={k}")))
            }
            RingSpec::TruncatedZ2 { n, vars } if n == 0 || vars == 0 => {
                Err(Error::InvalidArgument("truncated ring needs n, vars >= 1".into()))
            }
            RingSpec::SchurPRing { n } if n == 0 => Err(Error::InvalidArgument("CS ring needs n >= 1".into())),
            _ => Ok(()),
        }
    }

    /// The ring attached to a manifold by the Schubert-class correspondence.
    pub fn for_manifold(m: &Manifold) -> Result<RingSpec> {
        match m.kind() {
            ManifoldKind::Grass { n, k } => Ok(RingSpec::GrassQuotient { n: *n, k: *k }),
            ManifoldKind::SpecialOrth { n } => Ok(RingSpec::TruncatedZ2 { n: *n, vars: m.n_prime() }),
            ManifoldKind::CplxStr { n } => Ok(RingSpec::SchurPRing { n: *n }),
            _ => Err(Error::Unsupported(format!("no symmetric-function presentation for {m}"))),
        }
    }

    pub fn nvars(&self) -> usize {
        match *self {
            RingSpec::GrassQuotient { k, .. } => k,
            RingSpec::TruncatedZ2 { vars, .. } => vars,
            RingSpec::SchurPRing { n } => n,
        }
    }

    pub fn basis(&self) -> Basis {
        match self {
            RingSpec::GrassQuotient { .. } => Basis::Schur,
            RingSpec::TruncatedZ2 { .. } => Basis::Monomial,
            RingSpec::SchurPRing { .. } => Basis::SchurP,
        }
    }

    /// Whether `λ` labels a nonzero class of the ring.
    pub fn is_class(&self, lambda: &Partition) -> bool {
        match *self {
            RingSpec::GrassQuotient { n, k } => lambda.fits_box(k, n - k),
            RingSpec::TruncatedZ2 { n, vars } => lambda.len() <= vars && lambda.first() < n,
            RingSpec::SchurPRing { n } => lambda.is_strict() && lambda.len() <= n && lambda.first() < n,
        }
    }

    /// All class labels, by degree.
    pub fn classes(&self) -> Vec<Partition> {
        let (max_len, max_part) = match *self {
            RingSpec::GrassQuotient { n, k } => (k, n - k),
            RingSpec::TruncatedZ2 { n, vars } => (vars, n - 1),
            RingSpec::SchurPRing { n } => (n, n - 1),
        };
        let top = max_len * max_part;
        let mut out = Vec::new();
        for w in 0..=top {
            let ps = match self {
                RingSpec::SchurPRing { .. } => strict_partitions(w, max_len, max_part),
                _ => partitions(w, max_len, max_part),
            };
            out.extend(ps);
        }
        out
    }

    pub fn class(&self, lambda: &Partition) -> Result<SymPoly> {
        if !self.is_class(lambda) {
            return Err(Error::InvalidPartition(format!("{lambda} does not label a class of {self}")));
        }
        self.basis().element(lambda, self.nvars())
    }
}

/// Image of `f` in the quotient ring, as a symmetric polynomial.
pub fn reduce(f: &SymPoly, spec: &RingSpec) -> Result<SymPoly> {
    spec.validate()?;
    if f.nvars() != spec.nvars() {
        return Err(Error::InvalidArgument(format!(
            "{spec} lives in {} variables, got {}",
            spec.nvars(),
            f.nvars()
        )));
    }
    match *spec {
        RingSpec::TruncatedZ2 { n, .. } => {
            let mut out = SymPoly::zero(f.nvars());
            for (k, c) in f.terms() {
                if k.first() < n {
                    out.add_term(k.clone(), c.clone());
                }
            }
            Ok(out.to_mod2())
        }
        _ => {
            let coeffs = reduce_coefficients(f, spec)?;
            combine(&coeffs, spec.basis(), spec.nvars())
        }
    }
}

/// Coefficients of the image of `f` in the class basis of the ring.
pub fn reduce_coefficients(f: &SymPoly, spec: &RingSpec) -> Result<BTreeMap<Partition, BigInt>> {
    spec.validate()?;
    match spec {
        RingSpec::TruncatedZ2 { .. } => expand_in_basis(&reduce(f, spec)?, Basis::Monomial),
        _ => {
            let mut coeffs = expand_in_basis(f, spec.basis())?;
            coeffs.retain(|k, _| spec.is_class(k));
            Ok(coeffs)
        }
    }
}

/// Structure constants of a product of classes: `Π class(λ_i) = Σ a^ν ν`.
pub fn product_constants(spec: &RingSpec, factors: &[Partition]) -> Result<BTreeMap<Partition, BigInt>> {
    spec.validate()?;
    let mut prod = SymPoly::one(spec.nvars());
    for lam in factors {
        prod = prod.mul(&spec.class(lam)?)?;
    }
    reduce_coefficients(&prod, spec)
}

/// The constants `a_{λμ}^ν` with `class(λ)·class(μ) = Σ_ν a_{λμ}^ν class(ν)`.
pub fn structure_constants(spec: &RingSpec, lambda: &Partition, mu: &Partition) -> Result<BTreeMap<Partition, BigInt>> {
    product_constants(spec, &[lambda.clone(), mu.clone()])
}

/// Littlewood-Richardson product truncated to the `k × (n − k)` box.
pub fn lr_in_box(lambda: &Partition, mu: &Partition, n: usize, k: usize) -> BTreeMap<Partition, BigInt> {
    let mut out = lr_oracle(lambda, mu);
    out.retain(|nu, _| nu.fits_box(k, n - k));
    out
}

/// Partition attached to a critical label: `(i_s − 1)` for SO(n) and CS_n,
/// `(i_k − k, …, i_1 − 1)` for G_{n,k}; zero parts dropped.
pub fn label_partition(m: &Manifold, label: &Label) -> Result<Partition> {
    let Label::Subset(set) = label else {
        return Err(Error::MalformedLabel("expected a subset label".into()));
    };
    let n = m.n();
    if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::MalformedLabel(format!("{label} is not an increasing subset of 1..{n}")));
    }
    match m.kind() {
        ManifoldKind::SpecialOrth { .. } => {
            if set.len() % 2 == 1 {
                return Err(Error::MalformedLabel("SO(n) labels have even size".into()));
            }
            Ok(Partition::from_unsorted(set.iter().map(|i| i - 1).collect()))
        }
        ManifoldKind::CplxStr { .. } => Ok(Partition::from_unsorted(set.iter().map(|i| i - 1).collect())),
        ManifoldKind::Grass { k, .. } => {
            if set.len() != *k {
                return Err(Error::MalformedLabel(format!("Grassmannian labels have size {k}")));
            }
            Ok(Partition::from_unsorted(set.iter().enumerate().map(|(s, i)| i - (s + 1)).collect()))
        }
        _ => Err(Error::Unsupported(format!("no symmetric-function presentation for {m}"))),
    }
}

/// The symmetric function representing the Schubert class of `label`.
pub fn schubert_class_polynomial(m: &Manifold, label: &Label) -> Result<SymPoly> {
    let lambda = label_partition(m, label)?;
    let spec = RingSpec::for_manifold(m)?;
    spec.basis().element(&lambda, spec.nvars())
}

/// Cohomological degree of the class of `label` (variables of SO(n) have
/// degree 1, those of G_{n,k} and CS_n degree 2).
pub fn cohomological_degree(m: &Manifold, label: &Label) -> Result<usize> {
    let w = label_partition(m, label)?.weight();
    Ok(match m.kind() {
        ManifoldKind::SpecialOrth { .. } => w,
        _ => 2 * w,
    })
}

/// The relations `p_i` (i = 1..k): the degree `n − i + 1` components of
/// `Π_s (1 + x_s)^{−1}` in `k` variables, i.e. `(−1)^{n−i+1} h_{n−i+1}`.
pub fn grass_relations(n: usize, k: usize) -> Vec<SymPoly> {
    (1..=k)
        .map(|i| {
            let d = n - i + 1;
            let h = complete_h(d as isize, k);
            if d % 2 == 1 {
                h.scale(&-BigInt::one())
            } else {
                h
            }
        })
        .collect()
}

/// Render coefficients as `{"(2)":1,"(1,1)":1}`.
pub fn format_constants(c: &BTreeMap<Partition, BigInt>) -> String {
    let body: Vec<String> = c.iter().map(|(k, v)| format!("\"{k}\":{v}")).collect();
    format!("{{{}}}", body.join(","))
}

/// True when every coefficient is nonnegative.
pub fn is_nonnegative(c: &BTreeMap<Partition, BigInt>) -> bool {
    c.values().all(|v| !v.is_negative())
}
