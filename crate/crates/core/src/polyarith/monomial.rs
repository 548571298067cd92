use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::polyarith::PolyError;

/// Exponent vector of a monomial. Ordered by degrevlex with the variables
/// in declaration order (`x_1 > x_2 > ... > x_N`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The monomial `x_i^e` in `nvars` variables.
    pub fn var_power(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut out = self.0.clone();
        for (a, &b) in out.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(b).ok_or(PolyError::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn scale(&self, factor: u64) -> Result<Monomial, PolyError> {
        let mut out = self.0.clone();
        for a in out.iter_mut() {
            let v = (*a as u64)
                .checked_mul(factor)
                .ok_or(PolyError::ExponentOverflow)?;
            *a = u32::try_from(v).map_err(|_| PolyError::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| b - a)
                .collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Reverse lexicographic from the last variable: smaller exponent wins.
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
