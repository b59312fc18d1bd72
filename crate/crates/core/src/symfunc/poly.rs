use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::partition::{distinct_permutations, Partition};
use crate::error::{Error, Result};

/// Symmetric polynomial in `nvars` variables, stored in the monomial basis:
/// the key `λ` stands for the whole orbit `m_λ` of the monomial `x^λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    nvars: usize,
    terms: BTreeMap<Partition, BigInt>,
    mod2: bool,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> SymPoly {
        SymPoly {
            nvars,
            terms: BTreeMap::new(),
            mod2: false,
        }
    }

    pub fn one(nvars: usize) -> SymPoly {
        SymPoly::zero(nvars).with_term(Partition::empty(), BigInt::one())
    }

    /// `c · m_λ`; zero when `λ` has more parts than variables.
    pub fn term(nvars: usize, lambda: Partition, c: BigInt) -> SymPoly {
        SymPoly::zero(nvars).with_term(lambda, c)
    }

    fn with_term(mut self, lambda: Partition, c: BigInt) -> SymPoly {
        self.add_term(lambda, c);
        self
    }

    pub(crate) fn add_term(&mut self, lambda: Partition, c: BigInt) {
        if lambda.len() > self.nvars || c.is_zero() {
            return;
        }
        let e = self.terms.entry(lambda.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if self.mod2 {
            *e = e.mod_floor(&BigInt::from(2));
        }
        if e.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    /// Build from a full expansion `exponent vector → coefficient`, checking
    /// that it is symmetric.
    pub fn from_monomials(nvars: usize, monomials: &BTreeMap<Vec<usize>, BigInt>) -> Result<SymPoly> {
        let mut out = SymPoly::zero(nvars);
        for (exp, c) in monomials {
            if exp.len() != nvars {
                return Err(Error::InvalidArgument(format!("exponent {exp:?} has wrong length")));
            }
            if exp.windows(2).all(|w| w[0] >= w[1]) && !c.is_zero() {
                out.add_term(Partition::from_unsorted(exp.clone()), c.clone());
            }
        }
        let back = out.to_monomials();
        let nonzero: BTreeMap<Vec<usize>, BigInt> = monomials
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        if back != nonzero {
            return Err(Error::InvalidArgument("polynomial is not symmetric".into()));
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_mod2(&self) -> bool {
        self.mod2
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &Partition) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest weight among the stored terms (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|p| p.weight()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut w = self.terms.keys().map(|p| p.weight());
        match w.next() {
            None => true,
            Some(first) => w.all(|x| x == first),
        }
    }

    /// Leading term: highest weight, then lexicographically largest.
    pub fn leading(&self) -> Option<(&Partition, &BigInt)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.weight().cmp(&b.0.weight()).then_with(|| a.0.parts().cmp(b.0.parts())))
    }

    fn check_compatible(&self, other: &SymPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidArgument(format!(
                "symmetric polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.mod2 |= other.mod2;
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        if out.mod2 {
            out = out.to_mod2();
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> SymPoly {
        let mut out = SymPoly::zero(self.nvars);
        out.mod2 = self.mod2;
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Exact division of every coefficient; fails if any is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Result<SymPoly> {
        let mut out = SymPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            let (q, r) = v.div_rem(d);
            if !r.is_zero() {
                return Err(Error::NotIntegral(format!("coefficient {v} of m{k} is not divisible by {d}")));
            }
            out.add_term(k.clone(), q);
        }
        Ok(out)
    }

    /// Coefficients reduced mod 2 and the mod-2 tag set.
    pub fn to_mod2(&self) -> SymPoly {
        let two = BigInt::from(2);
        SymPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.mod_floor(&two)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            mod2: true,
        }
    }

    /// Product of symmetric polynomials, computed orbit by orbit: the
    /// coefficient of `m_ν` in `m_λ·m_μ` counts the ways to write `ν` as
    /// `α + β` with `α` a rearrangement of `λ` and `β` one of `μ`.
    pub fn mul(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let v = self.nvars;
        let mut out = SymPoly::zero(v);
        out.mod2 = self.mod2 || other.mod2;
        let orbits: BTreeMap<&Partition, Vec<Vec<usize>>> = self
            .terms
            .keys()
            .map(|k| (k, distinct_permutations(&k.padded(v))))
            .collect();
        for (lam, a) in &self.terms {
            for (mu, b) in &other.terms {
                let mu_pad = mu.padded(v);
                let candidates: BTreeSet<Vec<usize>> = orbits[lam]
                    .iter()
                    .map(|alpha| {
                        let mut s: Vec<usize> = alpha.iter().zip(&mu_pad).map(|(x, y)| x + y).collect();
                        s.sort_unstable_by(|x, y| y.cmp(x));
                        s
                    })
                    .collect();
                for nu in candidates {
                    let mut count = 0u64;
                    for alpha in &orbits[lam] {
                        if alpha.iter().zip(&nu).any(|(x, y)| x > y) {
                            continue;
                        }
                        let mut beta: Vec<usize> = nu.iter().zip(alpha).map(|(y, x)| y - x).collect();
                        beta.sort_unstable_by(|x, y| y.cmp(x));
                        if beta == mu_pad {
                            count += 1;
                        }
                    }
                    if count > 0 {
                        out.add_term(Partition::from_unsorted(nu), a * b * BigInt::from(count));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<SymPoly> {
        let mut out = SymPoly::one(self.nvars);
        out.mod2 = self.mod2;
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Full expansion into monomials `x^α`.
    pub fn to_monomials(&self) -> BTreeMap<Vec<usize>, BigInt> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            for alpha in distinct_permutations(&k.padded(self.nvars)) {
                out.insert(alpha, c.clone());
            }
        }
        out
    }

    /// Value at an integer point.
    pub fn evaluate(&self, point: &[i64]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.nvars,
                point.len()
            )));
        }
        let mut total = BigInt::zero();
        for (alpha, c) in self.to_monomials() {
            let mut term = c;
            for (x, e) in point.iter().zip(alpha) {
                term *= BigInt::from(*x).pow(e as u32);
            }
            total += term;
        }
        Ok(total)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "m{k}")?;
            } else {
                write!(f, "{mag}m{k}")?;
            }
        }
        Ok(())
    }
}
