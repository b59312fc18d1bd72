use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Which division algebra a matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// Real dimension of the algebra (1, 2 or 4).
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }

    /// The real unit scalars spanning the algebra over R.
    pub fn units(self) -> &'static [Scalar] {
        const UNITS: [Scalar; 4] = [Scalar::ONE, Scalar::I, Scalar::J, Scalar::K];
        &UNITS[..self.real_dim()]
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
            Field::Quaternion => "H",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A quaternion `re + i·i + j·j + k·k`. Reals and complex numbers are the
/// sub-algebras with vanishing trailing components, so one type covers all
/// three fields; the field tag lives on the enclosing matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Scalar {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Scalar = Scalar::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Scalar = Scalar::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Scalar = Scalar::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Scalar = Scalar::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Scalar { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Scalar::new(re, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Scalar::new(re, im, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Scalar::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Scalar::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            None
        } else {
            Some(self.conj().scale(1.0 / n))
        }
    }

    pub fn components(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }

    pub fn from_components(c: [f64; 4]) -> Self {
        Scalar::new(c[0], c[1], c[2], c[3])
    }

    /// True when no component outside `field` is set.
    pub fn lies_in(self, field: Field) -> bool {
        match field {
            Field::Real => self.i == 0.0 && self.j == 0.0 && self.k == 0.0,
            Field::Complex => self.j == 0.0 && self.k == 0.0,
            Field::Quaternion => true,
        }
    }

    /// Drop the components that do not belong to `field`.
    pub fn restrict(self, field: Field) -> Self {
        match field {
            Field::Real => Scalar::real(self.re),
            Field::Complex => Scalar::complex(self.re, self.i),
            Field::Quaternion => self,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = *self + o;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self = *self - o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.i, -self.j, -self.k)
    }
}

/// Hamilton product (non-commutative once `j`/`k` components appear).
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar::new(
            self.re * o.re - self.i * o.i - self.j * o.j - self.k * o.k,
            self.re * o.i + self.i * o.re + self.j * o.k - self.k * o.j,
            self.re * o.j - self.i * o.k + self.j * o.re + self.k * o.i,
            self.re * o.k + self.i * o.j - self.j * o.i + self.k * o.re,
        )
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;
    fn mul(self, s: f64) -> Scalar {
        self.scale(s)
    }
}

impl Div<f64> for Scalar {
    type Output = Scalar;
    fn div(self, s: f64) -> Scalar {
        self.scale(1.0 / s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.re)?;
        for (v, unit) in [(self.i, "i"), (self.j, "j"), (self.k, "k")] {
            if v != 0.0 {
                write!(f, "{:+}{}", v, unit)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_quaternion_table() {
        let (i, j, k) = (Scalar::I, Scalar::J, Scalar::K);
        assert_eq!(i * i, -Scalar::ONE);
        assert_eq!(j * j, -Scalar::ONE);
        assert_eq!(k * k, -Scalar::ONE);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * j * k, -Scalar::ONE);
    }

    #[test]
    fn associativity_on_basis() {
        let units = Field::Quaternion.units();
        for &a in units {
            for &b in units {
                for &c in units {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn conj_and_norm() {
        let q = Scalar::new(1.0, -2.0, 3.0, 0.5);
        assert_eq!(q.conj().conj(), q);
        assert_eq!(q.norm_sqr(), 1.0 + 4.0 + 9.0 + 0.25);
        let p = q * q.inv().unwrap();
        assert!((p - Scalar::ONE).abs() < 1e-15);
        // conj reverses products
        let r = Scalar::new(0.3, 0.1, -0.7, 2.0);
        assert!(((q * r).conj() - r.conj() * q.conj()).abs() < 1e-14);
        assert!(Scalar::ZERO.inv().is_none());
    }
}
