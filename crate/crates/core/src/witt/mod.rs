//! Truncated Witt vectors `W_n(A)` over `A = Z[x_1..x_N]` with the Frobenius
//! lift `φ(x_i) = x_i^p`.
//!
//! `A` is p-torsion free, so the ghost map is injective and every operation is
//! computed by combining ghost components and solving back coordinate by
//! coordinate with exact division by `p^r`. Coefficients are exact integers
//! throughout; reduction mod p only happens at the boundary.

mod selftest;

pub use selftest::{selftest, within_limits, CheckOutcome, SelftestReport, WITT_LIMITS};

use num_bigint::BigInt;

use crate::polyarith::{IntPoly, Integers, ModPoly, PolyError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error("Witt vectors have length at least 1")]
    Empty,
    #[error("operation needs length at least {needed}, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("operands have different primes, variable counts or lengths")]
    Mismatch,
    #[error("ghost components not solvable at coordinate {0}")]
    NonDivisible(usize),
    #[error("first coordinate of w - s_phi(w_0) is nonzero")]
    NonzeroHead,
    #[error("s_phi(phi(a)) - [a^p] is not divisible by p")]
    NotCongruent,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A length-n Witt vector `(a_0, .., a_{n-1})` with integer polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    p: u32,
    nvars: usize,
    coords: Vec<IntPoly>,
}

/// Ghost components `(w_0, .., w_{n-1})` with `w_r = Σ_{i≤r} p^i a_i^{p^{r-i}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVector {
    p: u32,
    nvars: usize,
    comps: Vec<IntPoly>,
}

impl GhostVector {
    pub fn components(&self) -> &[IntPoly] {
        &self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    fn zip(&self, other: &Self, f: impl Fn(&IntPoly, &IntPoly) -> IntPoly) -> Self {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| f(a, b))
            .collect();
        GhostVector {
            p: self.p,
            nvars: self.nvars,
            comps,
        }
    }
}

impl WittVector {
    pub fn new(coords: Vec<IntPoly>) -> Result<Self, WittError> {
        let first = coords.first().ok_or(WittError::Empty)?;
        let (p, nvars) = (first.prime(), first.nvars());
        if coords.iter().any(|c| c.prime() != p || c.nvars() != nvars) {
            return Err(WittError::Mismatch);
        }
        Ok(WittVector { p, nvars, coords })
    }

    pub fn zero(p: u32, nvars: usize, n: usize) -> Result<Self, WittError> {
        if n == 0 {
            return Err(WittError::Empty);
        }
        let z = IntPoly::zero(ring(p), nvars);
        Ok(WittVector {
            p,
            nvars,
            coords: vec![z; n],
        })
    }

    pub fn one(p: u32, nvars: usize, n: usize) -> Result<Self, WittError> {
        teichmuller(&IntPoly::one(ring(p), nvars), n)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[IntPoly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<IntPoly> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Coordinates reduced mod p (the image in `W_n(A/p)`).
    pub fn reduce_mod_p(&self) -> Vec<ModPoly> {
        self.coords
            .iter()
            .map(|c| c.reduce_mod(1).expect("k = 1 is valid"))
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<(), WittError> {
        if self.p != other.p || self.nvars != other.nvars || self.len() != other.len() {
            return Err(WittError::Mismatch);
        }
        Ok(())
    }
}

fn ring(p: u32) -> Integers {
    Integers::new(p)
}

fn p_power(p: u32, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(p), e)
}

/// `[a^{p^0}, a^{p^1}, .., a^{p^m}]`.
fn p_power_tower(a: &IntPoly, m: usize) -> Result<Vec<IntPoly>, PolyError> {
    let p = a.prime() as u64;
    let mut out = Vec::with_capacity(m + 1);
    out.push(a.clone());
    for i in 0..m {
        let next = out[i].pow(p)?;
        out.push(next);
    }
    Ok(out)
}

pub fn ghost(w: &WittVector) -> Result<GhostVector, WittError> {
    let n = w.len();
    let towers = w
        .coords
        .iter()
        .enumerate()
        .map(|(i, a)| p_power_tower(a, n - 1 - i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut comps = Vec::with_capacity(n);
    for r in 0..n {
        let mut acc = IntPoly::zero(ring(w.p), w.nvars);
        for (i, tower) in towers.iter().enumerate().take(r + 1) {
            acc = acc.try_add(&tower[r - i].scale(&p_power(w.p, i)))?;
        }
        comps.push(acc);
    }
    Ok(GhostVector {
        p: w.p,
        nvars: w.nvars,
        comps,
    })
}

/// Inverse of [`ghost`] on its image; `NonDivisible(r)` if the components are
/// not the ghost of an integral Witt vector.
pub fn from_ghost(g: &GhostVector) -> Result<WittVector, WittError> {
    if g.comps.is_empty() {
        return Err(WittError::Empty);
    }
    let n = g.comps.len();
    let mut towers: Vec<Vec<IntPoly>> = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    for r in 0..n {
        let mut rest = g.comps[r].clone();
        for (i, tower) in towers.iter().enumerate() {
            rest = rest.try_sub(&tower[r - i].scale(&p_power(g.p, i)))?;
        }
        let a_r = rest
            .exact_div(&p_power(g.p, r))
            .map_err(|_| WittError::NonDivisible(r))?;
        towers.push(p_power_tower(&a_r, n - 1 - r)?);
        coords.push(a_r);
    }
    Ok(WittVector {
        p: g.p,
        nvars: g.nvars,
        coords,
    })
}

pub fn witt_add(u: &WittVector, v: &WittVector) -> Result<WittVector, WittError> {
    u.check_same(v)?;
    from_ghost(&ghost(u)?.zip(&ghost(v)?, |a, b| a + b))
}

pub fn witt_sub(u: &WittVector, v: &WittVector) -> Result<WittVector, WittError> {
    u.check_same(v)?;
    from_ghost(&ghost(u)?.zip(&ghost(v)?, |a, b| a - b))
}

pub fn witt_mul(u: &WittVector, v: &WittVector) -> Result<WittVector, WittError> {
    u.check_same(v)?;
    from_ghost(&ghost(u)?.zip(&ghost(v)?, |a, b| a * b))
}

pub fn negate(w: &WittVector) -> Result<WittVector, WittError> {
    let g = ghost(w)?;
    let comps = g.comps.iter().map(|c| -c).collect();
    from_ghost(&GhostVector { comps, ..g })
}

/// The Witt vector `c·w` for an integer `c`.
pub fn scalar_mul(c: i64, w: &WittVector) -> Result<WittVector, WittError> {
    let g = ghost(w)?;
    let comps = g.comps.iter().map(|x| x.scale_int(c)).collect();
    from_ghost(&GhostVector { comps, ..g })
}

/// `Some(v)` with `p·v = w` when `w ∈ p·W_n(A)`, `None` otherwise.
pub fn divide_by_p(w: &WittVector) -> Result<Option<WittVector>, WittError> {
    let g = ghost(w)?;
    let p = BigInt::from(w.p);
    let mut comps = Vec::with_capacity(g.comps.len());
    for c in &g.comps {
        match c.exact_div(&p) {
            Ok(q) => comps.push(q),
            Err(_) => return Ok(None),
        }
    }
    match from_ghost(&GhostVector { comps, ..g }) {
        Ok(v) => Ok(Some(v)),
        Err(WittError::NonDivisible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `[a] = (a, 0, .., 0)` of length `n`.
pub fn teichmuller(a: &IntPoly, n: usize) -> Result<WittVector, WittError> {
    if n == 0 {
        return Err(WittError::Empty);
    }
    let mut coords = vec![IntPoly::zero(ring(a.prime()), a.nvars()); n];
    coords[0] = a.clone();
    Ok(WittVector {
        p: a.prime(),
        nvars: a.nvars(),
        coords,
    })
}

/// `V(a_0, .., a_{n-1}) = (0, a_0, .., a_{n-1})`, one longer than the input.
pub fn verschiebung(w: &WittVector) -> WittVector {
    let mut coords = Vec::with_capacity(w.len() + 1);
    coords.push(IntPoly::zero(ring(w.p), w.nvars));
    coords.extend(w.coords.iter().cloned());
    WittVector {
        coords,
        ..w.clone()
    }
}

/// `V^m(w)`.
pub fn verschiebung_pow(w: &WittVector, m: usize) -> WittVector {
    (0..m).fold(w.clone(), |acc, _| verschiebung(&acc))
}

/// Drops the last coordinate.
pub fn restriction(w: &WittVector) -> Result<WittVector, WittError> {
    if w.len() < 2 {
        return Err(WittError::TooShort {
            needed: 2,
            got: w.len(),
        });
    }
    let coords = w.coords[..w.len() - 1].to_vec();
    Ok(WittVector {
        coords,
        ..w.clone()
    })
}

/// The ring map `s_φ : A -> W_n(A)` with ghost components `φ^r(a)`.
pub fn s_phi(a: &IntPoly, n: usize) -> Result<WittVector, WittError> {
    if n == 0 {
        return Err(WittError::Empty);
    }
    let mut comps = Vec::with_capacity(n);
    for r in 0..n {
        comps.push(a.frobenius_substitute(r as u32)?);
    }
    from_ghost(&GhostVector {
        p: a.prime(),
        nvars: a.nvars(),
        comps,
    })
}

/// `Δ_{W_n}`: the unique `α ∈ W_{n-1}(A)` with `V α = w - s_φ(w_0)`.
pub fn delta_w(w: &WittVector) -> Result<WittVector, WittError> {
    if w.len() < 2 {
        return Err(WittError::TooShort {
            needed: 2,
            got: w.len(),
        });
    }
    let d = witt_sub(w, &s_phi(&w.coords[0], w.len())?)?;
    if !d.coords[0].is_zero() {
        return Err(WittError::NonzeroHead);
    }
    let coords = d.coords[1..].to_vec();
    Ok(WittVector { coords, ..d })
}

/// `[a, Δ_1(a), .., Δ_{m}(a)]`, read off the heads of the iterated `Δ_W`
/// applied to `[a]` of length `m + 1`.
pub fn delta_sequence(a: &IntPoly, m: usize) -> Result<Vec<IntPoly>, WittError> {
    let mut w = teichmuller(a, m + 1)?;
    let mut out = vec![a.clone()];
    for _ in 0..m {
        w = delta_w(&w)?;
        out.push(w.coords[0].clone());
    }
    Ok(out)
}

/// `Δ_s(a) = Δ_{W_2} ∘ .. ∘ Δ_{W_{s+1}}([a])`, exact.
pub fn delta_s_witt(a: &IntPoly, s: usize) -> Result<IntPoly, WittError> {
    if s == 0 {
        return Ok(a.clone());
    }
    Ok(delta_sequence(a, s)?.pop().expect("nonempty"))
}

/// `Δ_1(a) = (a^p - φ(a)) / p` over the integers.
pub fn delta1_exact(a: &IntPoly) -> Result<IntPoly, WittError> {
    let diff = a
        .pow(a.prime() as u64)?
        .try_sub(&a.frobenius_substitute(1)?)?;
    Ok(diff.exact_div(&BigInt::from(a.prime()))?)
}

/// `Ψ_n(w)_r = a_r + Σ_{j<r} Δ_{r-j}(a_j)`.
pub fn psi_decompose(w: &WittVector) -> Result<Vec<IntPoly>, WittError> {
    let n = w.len();
    let mut out: Vec<IntPoly> = w.coords.clone();
    for (j, a) in w.coords.iter().enumerate() {
        if j + 1 >= n || a.is_zero() {
            continue;
        }
        let deltas = delta_sequence(a, n - 1 - j)?;
        for (k, d) in deltas.iter().enumerate().skip(1) {
            out[j + k] = out[j + k].try_add(d)?;
        }
    }
    Ok(out)
}

/// The class of `s_φ(φ(a))` in `W_n(A)/pW_n(A)`, which equals `[a^p]`; the
/// congruence is checked and the coordinates of `[a^p]` are returned mod p.
pub fn sphi_phi_mod_p(a: &IntPoly, n: usize) -> Result<Vec<ModPoly>, WittError> {
    let lhs = s_phi(&a.frobenius_substitute(1)?, n)?;
    let rhs = teichmuller(&a.pow(a.prime() as u64)?, n)?;
    match divide_by_p(&witt_sub(&lhs, &rhs)?)? {
        Some(_) => Ok(rhs.reduce_mod_p()),
        None => Err(WittError::NotCongruent),
    }
}

/// Integer polynomial `c` as a constant.
pub fn int_constant(p: u32, nvars: usize, c: i64) -> IntPoly {
    if c == 0 {
        return IntPoly::zero(ring(p), nvars);
    }
    IntPoly::constant(ring(p), nvars, BigInt::from(c))
}
