//! Monomial, complete, elementary, Schur and Schur-P symmetric functions.

use num_bigint::BigInt;
use num_traits::One;

use super::partition::{partitions, Partition};
use super::poly::SymPoly;
use crate::error::{Error, Result};

/// The orbit sum `m_λ(x_1, …, x_v)`.
pub fn monomial_sym(lambda: &Partition, v: usize) -> Result<SymPoly> {
    if lambda.len() > v {
        return Err(Error::InvalidPartition(format!("{lambda} has more than {v} parts")));
    }
    Ok(SymPoly::term(v, lambda.clone(), BigInt::one()))
}

/// Complete homogeneous `h_r`; zero for negative `r`.
pub fn complete_h(r: isize, v: usize) -> SymPoly {
    if r < 0 {
        return SymPoly::zero(v);
    }
    let r = r as usize;
    let mut out = SymPoly::zero(v);
    for p in partitions(r, v, r) {
        out.add_term(p, BigInt::one());
    }
    out
}

/// Elementary `e_r = m_{(1^r)}`.
pub fn elementary_e(r: usize, v: usize) -> SymPoly {
    SymPoly::term(v, Partition::from_unsorted(vec![1; r]), BigInt::one())
}

/// `s_λ = det[h_{λ_i − i + j}]` (Jacobi-Trudi); zero when `ℓ(λ) > v`.
pub fn schur(lambda: &Partition, v: usize) -> SymPoly {
    if lambda.len() > v {
        return SymPoly::zero(v);
    }
    let l = lambda.len();
    let parts = lambda.parts();
    let entry = |i: usize, j: usize| complete_h(parts[i] as isize - i as isize + j as isize, v);
    let rows: Vec<usize> = (0..l).collect();
    let cols: Vec<usize> = (0..l).collect();
    laplace(&rows, &cols, &entry, v)
}

fn laplace(rows: &[usize], cols: &[usize], entry: &dyn Fn(usize, usize) -> SymPoly, v: usize) -> SymPoly {
    if rows.is_empty() {
        return SymPoly::one(v);
    }
    let r = rows[0];
    let mut total = SymPoly::zero(v);
    for (pos, &c) in cols.iter().enumerate() {
        let e = entry(r, c);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(&rows[1..], &rest, entry, v);
        let term = e.mul(&minor).expect("same variable count");
        total = if pos % 2 == 0 {
            total.add(&term)
        } else {
            total.sub(&term)
        }
        .expect("same variable count");
    }
    total
}

/// `Q_r = Σ_a e_a h_{r−a}`, the coefficient of `z^r` in `Π (1 + x_i z)/(1 − x_i z)`.
pub fn q_single(r: usize, v: usize) -> SymPoly {
    let mut out = SymPoly::zero(v);
    for a in 0..=r.min(v) {
        let t = elementary_e(a, v)
            .mul(&complete_h((r - a) as isize, v))
            .expect("same variable count");
        out = out.add(&t).expect("same variable count");
    }
    out
}

/// `Q_{(r,s)} = Q_r Q_s + 2 Σ_{i=1}^{s} (−1)^i Q_{r+i} Q_{s−i}` for `r > s ≥ 0`.
pub fn q_pair(r: usize, s: usize, v: usize) -> SymPoly {
    let mut out = q_single(r, v).mul(&q_single(s, v)).expect("same variable count");
    for i in 1..=s {
        let t = q_single(r + i, v)
            .mul(&q_single(s - i, v))
            .expect("same variable count")
            .scale(&BigInt::from(if i % 2 == 0 { 2 } else { -2 }));
        out = out.add(&t).expect("same variable count");
    }
    out
}

/// Schur Q-function of a strict partition, as the Pfaffian of the matrix
/// `[Q_{(λ_i, λ_j)}]` (padded with a zero part to even length).
pub fn schur_q(lambda: &Partition, v: usize) -> Result<SymPoly> {
    if !lambda.is_strict() {
        return Err(Error::InvalidPartition(format!("{lambda} is not strict")));
    }
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    let idx: Vec<usize> = (0..parts.len()).collect();
    Ok(pfaffian(&idx, &parts, v))
}

fn pfaffian(idx: &[usize], parts: &[usize], v: usize) -> SymPoly {
    if idx.is_empty() {
        return SymPoly::one(v);
    }
    let first = idx[0];
    let mut total = SymPoly::zero(v);
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&t| t != j).collect();
        let term = q_pair(parts[first], parts[j], v)
            .mul(&pfaffian(&rest, parts, v))
            .expect("same variable count");
        total = if pos % 2 == 1 { total.add(&term) } else { total.sub(&term) }.expect("same variable count");
    }
    total
}

/// Schur P-function `P_λ = 2^{−ℓ(λ)} Q_λ`; the division must be exact.
pub fn schur_p(lambda: &Partition, v: usize) -> Result<SymPoly> {
    let q = schur_q(lambda, v)?;
    q.div_exact(&(BigInt::one() << lambda.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur(&p("1"), 3), monomial_sym(&p("1"), 3).unwrap());
        let s2 = schur(&p("2"), 2);
        let expected = monomial_sym(&p("2"), 2).unwrap().add(&monomial_sym(&p("1,1"), 2).unwrap()).unwrap();
        assert_eq!(s2, expected);
        assert!(schur(&p("1,1,1"), 2).is_zero());
        assert_eq!(schur(&Partition::empty(), 3), SymPoly::one(3));
        assert_eq!(schur(&p("1,1,1"), 3), elementary_e(3, 3));
    }

    #[test]
    fn schur_p_examples() {
        assert_eq!(schur_p(&p("1"), 3).unwrap(), monomial_sym(&p("1"), 3).unwrap());
        assert_eq!(schur_p(&Partition::empty(), 3).unwrap(), SymPoly::one(3));
        assert!(schur_p(&p("1,1"), 3).is_err());
        // Q_2 = h_2 + e_1 h_1 + e_2 = 2m(2) + 4m(1,1)
        let p2 = schur_p(&p("2"), 3).unwrap();
        assert_eq!(p2.coeff(&p("2")), BigInt::from(1));
        assert_eq!(p2.coeff(&p("1,1")), BigInt::from(2));
    }

    #[test]
    fn monomial_needs_room() {
        assert!(monomial_sym(&p("1,1,1"), 2).is_err());
    }
}
