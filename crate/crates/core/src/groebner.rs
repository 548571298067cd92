//! Buchberger's algorithm over `F_p` with degrevlex, used to decide ideal
//! membership, containment and equality.
//!
//! Pairs are selected by the normal strategy (smallest lcm first, ties by
//! creation order). Buchberger's coprime and chain criteria prune pairs. All
//! reduction work is charged to a [`StepBudget`]; running out surfaces as
//! [`GroebnerError::BudgetExceeded`] and never as a wrong answer.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use crate::polyarith::{CoeffRing, IdealGens, ModPoly, Monomial, Poly, Zmod};

/// Default number of reduction steps a job may spend.
pub const DEFAULT_GB_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("Gröbner step budget of {limit} reduction steps exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("ideals live in different polynomial rings")]
    Mismatch,
}

/// Counter of reduction steps shared across the computations of one job.
#[derive(Clone, Debug)]
pub struct StepBudget {
    limit: u64,
    used: u64,
}

impl StepBudget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn charge(&mut self) -> Result<(), GroebnerError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(GroebnerError::BudgetExceeded { limit: self.limit });
        }
        Ok(())
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        Self::new(DEFAULT_GB_BUDGET)
    }
}

/// A reduced, monic Gröbner basis, sorted by decreasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    p: u32,
    nvars: usize,
    basis: Vec<ModPoly>,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[ModPoly] {
        &self.basis
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn to_ideal(&self) -> IdealGens {
        IdealGens::new(self.p, self.nvars, self.basis.iter().cloned())
    }

    /// Remainder of `f` on division by the basis; zero iff `f` is in the ideal.
    pub fn normal_form(&self, f: &ModPoly) -> ModPoly {
        let mut unlimited = StepBudget::new(u64::MAX);
        reduce(f, &self.basis, &mut unlimited).expect("unlimited budget")
    }

    pub fn contains(&self, f: &ModPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_all(&self, ideal: &IdealGens) -> bool {
        ideal.generators().iter().all(|g| self.contains(g))
    }
}

/// Full reduction of `f` by a list of monic polynomials.
fn reduce(
    f: &ModPoly,
    divisors: &[ModPoly],
    budget: &mut StepBudget,
) -> Result<ModPoly, GroebnerError> {
    let ring = *f.ring();
    let mut work: BTreeMap<Monomial, u64> = f.terms().iter().cloned().collect();
    let mut remainder: Vec<(Monomial, u64)> = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        let divisor = divisors
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match divisor {
            None => remainder.push((m, c)),
            Some(g) => {
                budget.charge()?;
                let q = g
                    .leading_monomial()
                    .expect("nonzero")
                    .quotient_of(&m)
                    .expect("divides");
                for (gm, gc) in &g.terms()[1..] {
                    let key = gm.mul(&q).expect("exponents stay below the dividend's");
                    let delta = ring.mul(&c, gc);
                    let entry = work.entry(key).or_insert(0);
                    *entry = ring.sub(entry, &delta);
                    if *entry == 0 {
                        let key = gm.mul(&q).expect("checked above");
                        work.remove(&key);
                    }
                }
            }
        }
    }
    Ok(Poly::from_sorted_terms(ring, f.nvars(), remainder))
}

fn monic(f: &ModPoly) -> ModPoly {
    f.make_monic()
        .expect("leading coefficient is a unit over F_p")
}

fn s_polynomial(f: &ModPoly, g: &ModPoly, lcm: &Monomial) -> ModPoly {
    let ring = *f.ring();
    let one = ring.one();
    let qf = f.leading_monomial().unwrap().quotient_of(lcm).unwrap();
    let qg = g.leading_monomial().unwrap().quotient_of(lcm).unwrap();
    let a = f.mul_term(&qf, &one).expect("within lcm");
    let b = g.mul_term(&qg, &one).expect("within lcm");
    &a - &b
}

/// Critical pair; the derived order puts the smallest lcm (then the oldest
/// pair) first when wrapped in `Reverse`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    lcm: Monomial,
    serial: u64,
    i: usize,
    j: usize,
}

/// Computes the reduced Gröbner basis of the ideal generated by `ideal`.
pub fn buchberger(
    ideal: &IdealGens,
    budget: &mut StepBudget,
) -> Result<GroebnerBasis, GroebnerError> {
    let (p, nvars) = (ideal.p(), ideal.nvars());
    let mut basis: Vec<ModPoly> = Vec::new();
    let mut pending: BinaryHeap<Reverse<Pair>> = BinaryHeap::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let mut serial = 0u64;

    let mut add_to_basis = |h: ModPoly,
                            basis: &mut Vec<ModPoly>,
                            pending: &mut BinaryHeap<Reverse<Pair>>,
                            pending_set: &mut HashSet<(usize, usize)>| {
        let h = monic(&h);
        let new = basis.len();
        let lm = h.leading_monomial().unwrap().clone();
        for (i, g) in basis.iter().enumerate() {
            let lcm = g.leading_monomial().unwrap().lcm(&lm);
            pending.push(Reverse(Pair {
                lcm,
                serial,
                i,
                j: new,
            }));
            pending_set.insert((i, new));
            serial += 1;
        }
        basis.push(h);
    };

    for g in ideal.generators() {
        let h = reduce(g, &basis, budget)?;
        if !h.is_zero() {
            add_to_basis(h, &mut basis, &mut pending, &mut pending_set);
        }
    }

    while let Some(Reverse(pair)) = pending.pop() {
        pending_set.remove(&(pair.i, pair.j));

        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        let (li, lj) = (
            fi.leading_monomial().unwrap(),
            fj.leading_monomial().unwrap(),
        );
        if li.is_coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && basis[k].leading_monomial().unwrap().divides(&pair.lcm)
                && !pending_set.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending_set.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }
        budget.charge()?;
        let s = s_polynomial(fi, fj, &pair.lcm);
        let h = reduce(&s, &basis, budget)?;
        if !h.is_zero() {
            add_to_basis(h, &mut basis, &mut pending, &mut pending_set);
        }
    }

    Ok(GroebnerBasis {
        p,
        nvars,
        basis: reduce_basis(basis, budget)?,
    })
}

/// Minimalizes and interreduces a Gröbner basis.
fn reduce_basis(
    basis: Vec<ModPoly>,
    budget: &mut StepBudget,
) -> Result<Vec<ModPoly>, GroebnerError> {
    let mut minimal: Vec<ModPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = h.leading_monomial().unwrap();
            j != i && lh.divides(lm) && (lh != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<ModPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = Poly::monomial(
            Zmod::field(minimal[i].prime()),
            minimal[i].leading_monomial().unwrap().clone(),
            1,
        );
        let tail = &minimal[i] - &lead;
        let tail = reduce(&tail, &others, budget)?;
        reduced.push(&lead + &tail);
    }
    reduced.sort_by(|a, b| b.leading_monomial().cmp(&a.leading_monomial()));
    Ok(reduced)
}

/// `small ⊆ big`.
pub fn ideal_contains(big: &GroebnerBasis, small: &IdealGens) -> Result<bool, GroebnerError> {
    if big.p != small.p() || big.nvars != small.nvars() {
        return Err(GroebnerError::Mismatch);
    }
    Ok(big.contains_all(small))
}

/// Equality of ideals, by comparing reduced Gröbner bases.
pub fn ideal_equal(
    a: &IdealGens,
    b: &IdealGens,
    budget: &mut StepBudget,
) -> Result<bool, GroebnerError> {
    if a.p() != b.p() || a.nvars() != b.nvars() {
        return Err(GroebnerError::Mismatch);
    }
    Ok(buchberger(a, budget)? == buchberger(b, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::{parse_poly, PrimeContext};

    fn ideal(ctx: &PrimeContext, gens: &[&str]) -> IdealGens {
        IdealGens::new(
            ctx.p(),
            ctx.nvars(),
            gens.iter().map(|s| parse_poly(s, ctx, 1).unwrap()),
        )
    }

    fn gb(ctx: &PrimeContext, gens: &[&str]) -> GroebnerBasis {
        buchberger(&ideal(ctx, gens), &mut StepBudget::default()).unwrap()
    }

    fn rendered(ctx: &PrimeContext, g: &GroebnerBasis) -> Vec<String> {
        g.basis().iter().map(|f| f.render(ctx.names())).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let ctx = PrimeContext::new(2, &["x", "y"]).unwrap();
        assert_eq!(
            rendered(&ctx, &gb(&ctx, &["x^2", "y^2"])),
            vec!["x^2", "y^2"]
        );
    }

    #[test]
    fn linear_reduction() {
        let ctx = PrimeContext::new(2, &["x", "y"]).unwrap();
        assert_eq!(rendered(&ctx, &gb(&ctx, &["x+y", "y"])), vec!["x", "y"]);
    }

    #[test]
    fn zero_ideal() {
        let ctx = PrimeContext::new(2, &["x", "y"]).unwrap();
        let g = gb(&ctx, &["0"]);
        assert!(g.is_zero_ideal());
        assert!(!g.contains(&parse_poly("1", &ctx, 1).unwrap()));
    }

    #[test]
    fn normal_forms() {
        let ctx = PrimeContext::new(3, &["x", "y", "z"]).unwrap();
        let g = gb(&ctx, &["x^2 - y*z", "x*y - z^2"]);
        assert!(g
            .normal_form(&parse_poly("x^2 - y*z", &ctx, 1).unwrap())
            .is_zero());
        assert!(g.normal_form(&parse_poly("1", &ctx, 1).unwrap()).is_one());
        let m = PrimeContext::new(2, &["x", "y"]).unwrap();
        let h = gb(&m, &["x^2", "y^2"]);
        let xy = parse_poly("x*y", &m, 1).unwrap();
        assert_eq!(h.normal_form(&xy), xy);
    }

    #[test]
    fn known_basis() {
        // Twisted cubic over F_5.
        let ctx = PrimeContext::new(5, &["x", "y", "z", "w"]).unwrap();
        let g = gb(&ctx, &["x*z - y^2", "y*w - z^2", "x*w - y*z"]);
        assert_eq!(g.basis().len(), 3);
        assert!(g.contains(&parse_poly("(x*z - y^2)*w^3 + (y*w-z^2)*x", &ctx, 1).unwrap()));
    }

    #[test]
    fn unit_ideal() {
        let ctx = PrimeContext::new(3, &["x", "y"]).unwrap();
        let g = gb(&ctx, &["x*y - 1", "x"]);
        assert!(g.is_unit_ideal());
    }

    #[test]
    fn containment_and_equality() {
        let ctx = PrimeContext::new(2, &["x", "y"]).unwrap();
        let mut b = StepBudget::default();
        assert!(ideal_equal(&ideal(&ctx, &["x"]), &ideal(&ctx, &["x", "x^2"]), &mut b).unwrap());
        assert!(!ideal_contains(&gb(&ctx, &["x^2", "y^2"]), &ideal(&ctx, &["x*y"])).unwrap());
        let other = PrimeContext::new(3, &["x", "y"]).unwrap();
        assert_eq!(
            ideal_equal(&ideal(&ctx, &["x"]), &ideal(&other, &["x"]), &mut b),
            Err(GroebnerError::Mismatch)
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let ctx = PrimeContext::new(5, &["x", "y", "z"]).unwrap();
        let mut b = StepBudget::new(3);
        let r = buchberger(
            &ideal(&ctx, &["x^2*y + z", "y^2 - x*z", "x*y*z + 1"]),
            &mut b,
        );
        assert_eq!(r, Err(GroebnerError::BudgetExceeded { limit: 3 }));
    }

    #[test]
    fn permuted_generators_give_identical_basis() {
        let ctx = PrimeContext::new(3, &["x", "y", "z"]).unwrap();
        let gens = ["x^2*y + z", "y^2 - x*z", "x*y*z + 1"];
        let a = gb(&ctx, &gens);
        let b = gb(&ctx, &[gens[2], gens[0], gens[1]]);
        assert_eq!(a, b);
    }
}
