use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::polyarith::PolyError;

/// Largest `k` accepted for the modular coefficient ring `Z/p^k`.
pub const MAX_MODULAR_PRECISION: u32 = 8;

/// Coefficient precision: `Z/p^k` or the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Mod(u32),
    Exact,
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Precision::Mod(k) => write!(f, "Z/p^{k}"),
            Precision::Exact => write!(f, "Z"),
        }
    }
}

/// A coefficient ring descriptor. Elements are plain values; the descriptor
/// carries whatever is needed to reduce them.
pub trait CoeffRing: Clone + Debug + PartialEq + Eq {
    type Elem: Clone + Debug + PartialEq + Eq + Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `acc += a * b`.
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }
    #[allow(clippy::wrong_self_convention)]
    fn from_bigint(&self, a: &BigInt) -> Self::Elem;
    /// Canonical integer representative (residue in `0..p^k` or the integer itself).
    fn to_bigint(&self, a: &Self::Elem) -> BigInt;
    fn precision(&self) -> Precision;
    /// The prime the ring is attached to.
    fn prime(&self) -> u32;
}

/// `Z/p^k` with canonical residues in a machine word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zmod {
    p: u32,
    k: u32,
    modulus: u64,
}

impl Zmod {
    pub fn new(p: u32, k: u32) -> Result<Self, PolyError> {
        if k == 0 || k > MAX_MODULAR_PRECISION {
            return Err(PolyError::InvalidPrecision(k));
        }
        let modulus = (p as u64)
            .checked_pow(k)
            .filter(|&m| m < (1u64 << 63))
            .ok_or(PolyError::InvalidPrecision(k))?;
        Ok(Self { p, k, modulus })
    }

    /// The prime field `F_p`.
    pub fn field(p: u32) -> Self {
        Self {
            p,
            k: 1,
            modulus: p as u64,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.modulus as i64) as u64
    }

    /// Multiplicative inverse; only meaningful for units.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (g, x) = ext_gcd(a as i128, self.modulus as i128);
        if g != 1 {
            return None;
        }
        Some(x.rem_euclid(self.modulus as i128) as u64)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

impl CoeffRing for Zmod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn from_bigint(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits")
    }
    fn to_bigint(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
    fn precision(&self) -> Precision {
        Precision::Mod(self.k)
    }
    fn prime(&self) -> u32 {
        self.p
    }
}

/// The integers, for computations that must not lose p-adic precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Integers {
    p: u32,
}

impl Integers {
    pub fn new(p: u32) -> Self {
        Self { p }
    }
}

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc += a * b;
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn to_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn precision(&self) -> Precision {
        Precision::Exact
    }
    fn prime(&self) -> u32 {
        self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_arithmetic() {
        let r = Zmod::new(2, 2).unwrap();
        assert_eq!(r.modulus(), 4);
        assert_eq!(r.add(&3, &3), 2);
        assert_eq!(r.sub(&1, &3), 2);
        assert_eq!(r.neg(&1), 3);
        assert_eq!(r.mul(&3, &3), 1);
        assert_eq!(r.from_bigint(&BigInt::from(-3)), 1);
        assert_eq!(r.inv(3), Some(3));
        assert_eq!(r.inv(2), None);
    }

    #[test]
    fn precision_bounds() {
        assert!(Zmod::new(97, 8).is_ok());
        assert!(Zmod::new(2, 9).is_err());
        assert!(Zmod::new(2, 0).is_err());
    }

    #[test]
    fn field_inverses() {
        let f = Zmod::field(97);
        for a in 1..97 {
            assert_eq!(f.mul(&a, &f.inv(a).unwrap()), 1);
        }
    }
}
