use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyarith::{CoeffRing, Integers, Monomial, PolyError, Precision, Zmod};

/// Sparse multivariate polynomial with terms kept in strictly decreasing
/// degrevlex order and no zero coefficients. Two polynomials over the same
/// ring are equal iff their term lists are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<R: CoeffRing> {
    ring: R,
    nvars: usize,
    terms: Vec<(Monomial, R::Elem)>,
}

/// Polynomial with coefficients in `Z/p^k`.
pub type ModPoly = Poly<Zmod>;
/// Polynomial with integer coefficients.
pub type IntPoly = Poly<Integers>;

impl<R: CoeffRing> Poly<R> {
    pub fn zero(ring: R, nvars: usize) -> Self {
        Self {
            ring,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(ring: R, nvars: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::one(nvars), c)
    }

    pub fn constant(ring: R, nvars: usize, c: R::Elem) -> Self {
        Self::monomial(ring, Monomial::one(nvars), c)
    }

    pub fn monomial(ring: R, m: Monomial, c: R::Elem) -> Self {
        let nvars = m.nvars();
        let terms = if ring.is_zero(&c) {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Self { ring, nvars, terms }
    }

    /// The variable `x_i`.
    pub fn var(ring: R, nvars: usize, i: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::var_power(nvars, i, 1), c)
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(ring: R, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, R::Elem)>,
    {
        let mut acc: HashMap<Monomial, R::Elem> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v = ring.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, nvars, acc)
    }

    fn from_map(ring: R, nvars: usize, acc: HashMap<Monomial, R::Elem>) -> Self {
        let mut terms: Vec<(Monomial, R::Elem)> =
            acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self { ring, nvars, terms }
    }

    /// Assumes `terms` is already sorted decreasingly with distinct monomials.
    pub(crate) fn from_sorted_terms(
        ring: R,
        nvars: usize,
        terms: Vec<(Monomial, R::Elem)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        let terms = terms
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        Self { ring, nvars, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> Precision {
        self.ring.precision()
    }

    pub fn prime(&self) -> u32 {
        self.ring.prime()
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, R::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == self.ring.one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, R::Elem)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> R::Elem {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.ring.zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring != other.ring || self.nvars != other.nvars {
            return Err(PolyError::Mismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let r = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Less,
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { r.neg(c) } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let c = if negate { r.sub(a, b) } else { r.add(a, b) };
                    if !r.is_zero(&c) {
                        out.push((m.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Self {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ring.clone(), self.nvars));
        }
        if let Some(layout) = DenseLayout::for_product(self, other)? {
            return Ok(self.mul_dense(other, &layout));
        }
        self.mul_sparse(other)
    }

    fn mul_sparse(&self, other: &Self) -> Result<Self, PolyError> {
        let r = &self.ring;
        let mut acc: HashMap<Monomial, R::Elem> =
            HashMap::with_capacity(self.terms.len() + other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb)?;
                match acc.get_mut(&m) {
                    Some(v) => r.mul_add_assign(v, ca, cb),
                    None => {
                        acc.insert(m, r.mul(ca, cb));
                    }
                }
            }
        }
        Ok(Self::from_map(self.ring.clone(), self.nvars, acc))
    }

    /// Product accumulated in a dense array indexed by mixed-radix exponent
    /// vectors; squaring only visits unordered pairs.
    fn mul_dense(&self, other: &Self, layout: &DenseLayout) -> Self {
        let r = &self.ring;
        let ia: Vec<usize> = self.terms.iter().map(|(m, _)| layout.index(m)).collect();
        let ib: Vec<usize> = other.terms.iter().map(|(m, _)| layout.index(m)).collect();
        let mut acc: Vec<R::Elem> = vec![r.zero(); layout.size];
        if std::ptr::eq(self, other) {
            let two = r.add(&r.one(), &r.one());
            for (i, (_, ci)) in self.terms.iter().enumerate() {
                r.mul_add_assign(&mut acc[2 * ia[i]], ci, ci);
                let twice = r.mul(&two, ci);
                for (j, (_, cj)) in self.terms.iter().enumerate().skip(i + 1) {
                    r.mul_add_assign(&mut acc[ia[i] + ia[j]], &twice, cj);
                }
            }
        } else {
            for (&a, (_, ca)) in ia.iter().zip(&self.terms) {
                for (&b, (_, cb)) in ib.iter().zip(&other.terms) {
                    r.mul_add_assign(&mut acc[a + b], ca, cb);
                }
            }
        }
        let mut terms: Vec<(Monomial, R::Elem)> = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !r.is_zero(c))
            .map(|(i, c)| (layout.monomial(i), c))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn square(&self) -> Result<Self, PolyError> {
        self.try_mul(self)
    }

    /// `f^e` by binary exponentiation; `f^0 = 1`.
    pub fn pow(&self, mut e: u64) -> Result<Self, PolyError> {
        let mut result = Self::one(self.ring.clone(), self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square()?;
            }
        }
        Ok(result)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let r = &self.ring;
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), r.mul(a, c)))
            .collect();
        Self::from_sorted_terms(self.ring.clone(), self.nvars, terms)
    }

    /// `c * x^m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &R::Elem) -> Result<Self, PolyError> {
        let r = &self.ring;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (a, b) in &self.terms {
            terms.push((a.mul(m)?, r.mul(b, c)));
        }
        // Multiplying by a monomial preserves the monomial order.
        Ok(Self::from_sorted_terms(
            self.ring.clone(),
            self.nvars,
            terms,
        ))
    }

    /// The Frobenius lift `x_i -> x_i^{p^e}`, identity on coefficients.
    pub fn frobenius_substitute(&self, e: u32) -> Result<Self, PolyError> {
        let factor = (self.ring.prime() as u64)
            .checked_pow(e)
            .ok_or(PolyError::ExponentOverflow)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.scale(factor)?, c.clone()));
        }
        // Scaling all exponents by a positive constant preserves degrevlex.
        Ok(Self::from_sorted_terms(
            self.ring.clone(),
            self.nvars,
            terms,
        ))
    }

    /// Reinterprets the coefficients in another ring through their canonical
    /// integer representatives.
    pub fn map_ring<S: CoeffRing>(&self, target: S) -> Poly<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), target.from_bigint(&self.ring.to_bigint(c))))
            .collect();
        Poly::from_sorted_terms(target, self.nvars, terms)
    }

    /// Renders with the given variable names, e.g. `x^3*z^2 + 2*x*y - 1`.
    /// The output parses back to the same polynomial.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let c = self.ring.to_bigint(c);
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].as_ref().to_string()),
                    _ => factors.push(format!("{}^{}", names[i].as_ref(), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl ModPoly {
    /// Divides every coefficient by `p`, dropping to precision `k - 1`.
    pub fn divide_by_p(&self) -> Result<ModPoly, PolyError> {
        let k = self.ring.k();
        if k < 2 {
            return Err(PolyError::InsufficientPrecision { needed: 2, got: k });
        }
        let p = self.ring.prime() as u64;
        let target = Zmod::new(self.ring.prime(), k - 1)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if c % p != 0 {
                return Err(PolyError::NonDivisible);
            }
            terms.push((m.clone(), c / p));
        }
        Ok(Poly::from_sorted_terms(target, self.nvars, terms))
    }

    /// Reduces to a lower precision `k' <= k`.
    pub fn reduce_precision(&self, k: u32) -> Result<ModPoly, PolyError> {
        if k > self.ring.k() {
            return Err(PolyError::InsufficientPrecision {
                needed: k,
                got: self.ring.k(),
            });
        }
        Ok(self.map_ring(Zmod::new(self.ring.prime(), k)?))
    }

    /// Reduction mod `p`.
    pub fn mod_p(&self) -> ModPoly {
        self.map_ring(Zmod::field(self.ring.prime()))
    }

    /// Canonical integer lift (residues `0..p^k`).
    pub fn lift(&self) -> IntPoly {
        self.map_ring(Integers::new(self.ring.prime()))
    }

    /// Makes the leading coefficient 1; requires a unit leading coefficient.
    pub fn make_monic(&self) -> Option<ModPoly> {
        let (_, lc) = self.leading_term()?;
        let inv = self.ring.inv(*lc)?;
        Some(self.scale(&inv))
    }
}

impl IntPoly {
    pub fn from_i64_terms(p: u32, nvars: usize, terms: &[(&[u32], i64)]) -> IntPoly {
        let ring = Integers::new(p);
        Poly::from_terms(
            ring,
            nvars,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exponents(e), BigInt::from(*c))),
        )
    }

    /// Exact division of every coefficient by `d`.
    pub fn exact_div(&self, d: &BigInt) -> Result<IntPoly, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(PolyError::NonDivisible);
            }
            terms.push((m.clone(), q));
        }
        Ok(Poly::from_sorted_terms(self.ring, self.nvars, terms))
    }

    pub fn scale_int(&self, c: i64) -> IntPoly {
        self.scale(&BigInt::from(c))
    }

    pub fn reduce_mod(&self, k: u32) -> Result<ModPoly, PolyError> {
        Ok(self.map_ring(Zmod::new(self.ring.prime(), k)?))
    }
}

/// Exponent box `Π [0, bound_i]` flattened in mixed radix; products of
/// monomials inside the box never carry, so indices simply add.
struct DenseLayout {
    radices: Vec<u64>,
    strides: Vec<u64>,
    size: usize,
}

impl DenseLayout {
    const MAX_SIZE: u64 = 1 << 22;

    fn for_product<R: CoeffRing>(a: &Poly<R>, b: &Poly<R>) -> Result<Option<Self>, PolyError> {
        let n = a.nvars;
        let max_exps = |f: &Poly<R>| {
            let mut out = vec![0u64; n];
            for (m, _) in &f.terms {
                for (o, &e) in out.iter_mut().zip(m.exponents()) {
                    *o = (*o).max(e as u64);
                }
            }
            out
        };
        let (ea, eb) = (max_exps(a), max_exps(b));
        let budget = Self::MAX_SIZE.min(4 * (a.terms.len() * b.terms.len()) as u64 + 1024);
        let mut radices = Vec::with_capacity(n);
        let mut strides = Vec::with_capacity(n);
        let mut size: u64 = 1;
        for i in 0..n {
            let bound = ea[i] + eb[i];
            if bound > u32::MAX as u64 {
                return Err(PolyError::ExponentOverflow);
            }
            strides.push(size);
            radices.push(bound + 1);
            size = match size.checked_mul(bound + 1) {
                Some(s) if s <= budget => s,
                _ => return Ok(None),
            };
        }
        Ok(Some(Self {
            radices,
            strides,
            size: size as usize,
        }))
    }

    fn index(&self, m: &Monomial) -> usize {
        m.exponents()
            .iter()
            .zip(&self.strides)
            .map(|(&e, &s)| e as u64 * s)
            .sum::<u64>() as usize
    }

    fn monomial(&self, mut i: usize) -> Monomial {
        let exps: Vec<u32> = self
            .radices
            .iter()
            .map(|&r| {
                let e = (i as u64 % r) as u32;
                i = (i as u64 / r) as usize;
                e
            })
            .collect();
        Monomial::from_exponents(&exps)
    }
}

impl<R: CoeffRing> Add for &Poly<R> {
    type Output = Poly<R>;

    /// Panics when the operands live in different rings; use `try_add` to
    /// get an error instead.
    fn add(self, rhs: Self) -> Poly<R> {
        self.try_add(rhs).expect("polynomial ring mismatch")
    }
}

impl<R: CoeffRing> Sub for &Poly<R> {
    type Output = Poly<R>;

    fn sub(self, rhs: Self) -> Poly<R> {
        self.try_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl<R: CoeffRing> Mul for &Poly<R> {
    type Output = Poly<R>;

    fn mul(self, rhs: Self) -> Poly<R> {
        self.try_mul(rhs)
            .expect("polynomial ring mismatch or exponent overflow")
    }
}

impl<R: CoeffRing> Neg for &Poly<R> {
    type Output = Poly<R>;

    fn neg(self) -> Poly<R> {
        let r = &self.ring;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), r.neg(c)))
            .collect();
        Poly::from_sorted_terms(self.ring.clone(), self.nvars, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Zmod {
        Zmod::field(2)
    }

    #[test]
    fn dense_and_sparse_products_agree() {
        let f = IntPoly::from_i64_terms(
            3,
            3,
            &[
                (&[2, 0, 1], 5),
                (&[0, 3, 0], -2),
                (&[1, 1, 1], 7),
                (&[0, 0, 0], 1),
            ],
        );
        let g =
            IntPoly::from_i64_terms(3, 3, &[(&[1, 0, 0], -1), (&[0, 2, 2], 3), (&[0, 0, 0], 4)]);
        assert_eq!(f.try_mul(&g).unwrap(), f.mul_sparse(&g).unwrap());
        assert_eq!(f.square().unwrap(), f.mul_sparse(&f).unwrap());
        let h = Poly::from_terms(
            Zmod::new(5, 3).unwrap(),
            2,
            f.map_ring(Zmod::new(5, 3).unwrap())
                .into_terms()
                .into_iter()
                .map(|(m, c)| (Monomial::from_exponents(&m.exponents()[..2]), c)),
        );
        assert_eq!(h.square().unwrap(), h.mul_sparse(&h).unwrap());
    }

    #[test]
    fn char_two_square_is_frobenius() {
        let x = ModPoly::var(f2(), 2, 0);
        let y = ModPoly::var(f2(), 2, 1);
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq, &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn pow_identities() {
        let r = Zmod::new(3, 2).unwrap();
        let x = ModPoly::var(r, 2, 0);
        let f = &x + &ModPoly::constant(r, 2, 5);
        assert_eq!(f.pow(1).unwrap(), f);
        assert!(f.pow(0).unwrap().is_one());
        assert_eq!(f.pow(3).unwrap(), &(&f * &f) * &f);
    }

    #[test]
    fn additive_inverse() {
        let r = Zmod::new(5, 3).unwrap();
        let f = ModPoly::from_terms(
            r,
            2,
            vec![
                (Monomial::from_exponents(&[1, 2]), 7),
                (Monomial::from_exponents(&[0, 0]), 124),
            ],
        );
        assert!((&f + &(-&f)).is_zero());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = ModPoly::var(f2(), 2, 0);
        let b = ModPoly::var(Zmod::field(3), 2, 0);
        assert_eq!(a.try_add(&b), Err(PolyError::Mismatch));
        let c = ModPoly::var(f2(), 3, 0);
        assert_eq!(a.try_mul(&c), Err(PolyError::Mismatch));
    }

    #[test]
    fn frobenius_keeps_term_count() {
        let f = IntPoly::from_i64_terms(2, 3, &[(&[0, 0, 2], 1), (&[3, 0, 0], 1), (&[0, 5, 0], 1)]);
        let g = f.frobenius_substitute(1).unwrap();
        let expected =
            IntPoly::from_i64_terms(2, 3, &[(&[0, 0, 4], 1), (&[6, 0, 0], 1), (&[0, 10, 0], 1)]);
        assert_eq!(g, expected);
        let c = IntPoly::from_i64_terms(2, 3, &[(&[0, 0, 0], 7)]);
        assert_eq!(c.frobenius_substitute(3).unwrap(), c);
    }

    #[test]
    fn render_signs() {
        let f = IntPoly::from_i64_terms(2, 2, &[(&[1, 0], -1), (&[0, 1], 2), (&[0, 0], -3)]);
        assert_eq!(f.render(&["x", "y"]), "-x + 2*y - 3");
        assert_eq!(IntPoly::zero(Integers::new(2), 2).render(&["x", "y"]), "0");
    }

    #[test]
    fn divide_by_p_checks_divisibility() {
        let r = Zmod::new(2, 2).unwrap();
        let f = ModPoly::constant(r, 1, 2);
        assert_eq!(
            f.divide_by_p().unwrap(),
            ModPoly::constant(Zmod::field(2), 1, 1)
        );
        assert_eq!(
            ModPoly::constant(r, 1, 3).divide_by_p(),
            Err(PolyError::NonDivisible)
        );
    }
}
