use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A Gaussian integer `re + im·i`.
///
/// Every scalar in this crate is one of these; tensor entries and matrix
/// entries stay inside `{0, ±1, ±i}` times powers of two, so `i64`
/// components are far more than enough headroom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GInt {
    pub re: i64,
    pub im: i64,
}

impl GInt {
    pub const ZERO: GInt = GInt { re: 0, im: 0 };
    pub const ONE: GInt = GInt { re: 1, im: 0 };
    pub const I: GInt = GInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        GInt { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// Complex conjugate.
    pub fn conj(self) -> Self {
        GInt::new(self.re, -self.im)
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(self, k: u8) -> Self {
        match k % 4 {
            0 => self,
            1 => GInt::new(-self.im, self.re),
            2 => -self,
            _ => GInt::new(self.im, -self.re),
        }
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sq(self) -> i64 {
        self.re * self.re + self.im * self.im
    }
}

impl From<i64> for GInt {
    fn from(v: i64) -> Self {
        GInt::new(v, 0)
    }
}

impl Add for GInt {
    type Output = GInt;
    fn add(self, rhs: GInt) -> GInt {
        GInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GInt {
    fn add_assign(&mut self, rhs: GInt) {
        *self = *self + rhs;
    }
}

impl Sub for GInt {
    type Output = GInt;
    fn sub(self, rhs: GInt) -> GInt {
        GInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl SubAssign for GInt {
    fn sub_assign(&mut self, rhs: GInt) {
        *self = *self - rhs;
    }
}

impl Mul for GInt {
    type Output = GInt;
    fn mul(self, rhs: GInt) -> GInt {
        GInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl MulAssign for GInt {
    fn mul_assign(&mut self, rhs: GInt) {
        *self = *self * rhs;
    }
}

impl Neg for GInt {
    type Output = GInt;
    fn neg(self) -> GInt {
        GInt::new(-self.re, -self.im)
    }
}

impl fmt::Display for GInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im > 0 => write!(f, "{re}+{im}i"),
            (re, im) => write!(f, "{re}{im}i"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = GInt::new(1, 2);
        let b = GInt::new(3, -1);
        assert_eq!(a * b, GInt::new(5, 5));
        assert_eq!(a + b, GInt::new(4, 1));
        assert_eq!(a.conj() * a, GInt::from(a.norm_sq()));
    }

    #[test]
    fn i_powers() {
        let one = GInt::ONE;
        assert_eq!(one.mul_i_pow(1), GInt::I);
        assert_eq!(one.mul_i_pow(2), -GInt::ONE);
        assert_eq!(one.mul_i_pow(3), GInt::new(0, -1));
        assert_eq!(one.mul_i_pow(4), GInt::ONE);
    }
}
