use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::group::CoefficientField;

/// An exact field. Elements are plain values; the field object carries the
/// parameters (the modulus for prime fields).
pub trait Field: Clone + Debug + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;

    /// `a -= b * c`
    fn sub_mul_assign(&self, a: &mut Self::E, b: &Self::E, c: &Self::E) {
        *a = self.sub(a, &self.mul(b, c));
    }

    /// `a += b * c`
    fn add_mul_assign(&self, a: &mut Self::E, b: &Self::E, c: &Self::E) {
        *a = self.add(a, &self.mul(b, c));
    }

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }

    fn display(&self, a: &Self::E) -> String {
        format!("{a:?}")
    }

    /// The representative in `0..p` for prime fields.
    fn residue(&self, _a: &Self::E) -> Option<u64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(crate::group::is_prime(p) && p < (1 << 31), "modulus must be a prime below 2^31");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type E = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // Fermat
        let mut base = *a;
        let mut e = self.p - 2;
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        r
    }
    #[inline]
    fn sub_mul_assign(&self, a: &mut u64, b: &u64, c: &u64) {
        let t = b * c % self.p;
        *a = self.sub(a, &t);
    }
    fn display(&self, a: &u64) -> String {
        a.to_string()
    }
    fn residue(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }
}

/// The rationals with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalField;

impl Field for RationalField {
    type E = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn sub_mul_assign(&self, a: &mut BigRational, b: &BigRational, c: &BigRational) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        if c.is_one() {
            *a -= b;
        } else if b.is_one() {
            *a -= c;
        } else {
            *a -= b * c;
        }
    }
    fn add_mul_assign(&self, a: &mut BigRational, b: &BigRational, c: &BigRational) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        *a += b * c;
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn display(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Runs `$body` with `$f` bound to the exact field of the given
/// characteristic.
#[macro_export]
macro_rules! with_field {
    ($k:expr, $f:ident => $body:expr) => {{
        let k: $crate::group::CoefficientField = $k;
        if k.characteristic() == 0 {
            let $f = $crate::linalg::RationalField;
            $body
        } else {
            let $f = $crate::linalg::PrimeField::new(k.characteristic());
            $body
        }
    }};
}

impl From<PrimeField> for CoefficientField {
    fn from(f: PrimeField) -> Self {
        CoefficientField::new(f.p).expect("prime")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), 5);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.sub(&2, &5), 4);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn rational_arithmetic() {
        let q = RationalField;
        let half = q.inv(&q.from_i64(2));
        assert_eq!(q.add(&half, &half), q.one());
        assert_eq!(q.display(&q.neg(&half)), "-1/2");
        let mut a = q.one();
        q.sub_mul_assign(&mut a, &half, &q.from_i64(2));
        assert!(q.is_zero(&a));
    }
}
