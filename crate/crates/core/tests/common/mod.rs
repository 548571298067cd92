#![allow(dead_code)]

use std::collections::HashMap;

use proptest::prelude::*;
use qfs_core::fedder::trace_ideal;
use qfs_core::groebner::{buchberger, ideal_equal, GroebnerBasis, StepBudget};
use qfs_core::polyarith::{cartier_u, IdealGens, ModPoly, Monomial, Poly, Zmod};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sparse polynomial over `Z/p^k` from raw `(exponents, coefficient)` pairs.
pub fn poly(p: u32, k: u32, nvars: usize, terms: &[(Vec<u32>, u64)]) -> ModPoly {
    let ring = Zmod::new(p, k).unwrap();
    Poly::from_terms(
        ring,
        nvars,
        terms.iter().map(|(e, c)| (Monomial::from_exponents(e), *c)),
    )
}

/// Strategy for polynomials with at most `max_terms` terms of total degree at most `max_deg`.
pub fn poly_strategy(
    p: u32,
    k: u32,
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> impl Strategy<Value = ModPoly> {
    let modulus = (p as u64).pow(k);
    let term =
        (prop::collection::vec(0..=max_deg, nvars), 0..modulus).prop_map(move |(mut e, c)| {
            // Clamp to the degree bound by trimming the last exponents.
            let mut excess = e.iter().sum::<u32>().saturating_sub(max_deg);
            for a in e.iter_mut().rev() {
                let cut = excess.min(*a);
                *a -= cut;
                excess -= cut;
            }
            (e, c)
        });
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| poly(p, k, nvars, &terms))
}

pub fn all_monomials(nvars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            go(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, max_deg, &mut vec![0; nvars], &mut out);
    out
}

/// Brute-force membership over F_p: is `f` in the F_p-span of
/// `{ m·g : g in gens, m a monomial, deg(m·g) <= degree }`?
/// A `true` answer is a proof of ideal membership.
pub fn span_contains(gens: &[ModPoly], f: &ModPoly, degree: u32) -> bool {
    let p = f.prime() as u64;
    let nvars = f.nvars();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let col = |e: &[u32], index: &mut HashMap<Vec<u32>, usize>| {
        let n = index.len();
        *index.entry(e.to_vec()).or_insert(n)
    };
    let to_row = |g: &ModPoly, index: &mut HashMap<Vec<u32>, usize>| -> Vec<(usize, u64)> {
        g.terms()
            .iter()
            .map(|(m, c)| (col(m.exponents(), index), *c % p))
            .collect()
    };
    let mut rows: Vec<Vec<(usize, u64)>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = g.total_degree().unwrap() as u32;
        if dg > degree {
            continue;
        }
        for m in all_monomials(nvars, degree - dg) {
            let shifted = g.mul_term(&Monomial::from_exponents(&m), &1).unwrap();
            rows.push(to_row(&shifted, &mut index));
        }
    }
    let target = to_row(f, &mut index);
    let width = index.len();
    let dense = |r: &[(usize, u64)]| {
        let mut v = vec![0u64; width];
        for &(c, x) in r {
            v[c] = x;
        }
        v
    };
    // Row-reduce the generators, then reduce the target against the echelon form.
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    let reduce = |mut v: Vec<u64>, pivots: &[(usize, Vec<u64>)]| {
        for (c, row) in pivots {
            let a = v[*c];
            if a != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + (p - a) * y) % p;
                }
            }
        }
        v
    };
    for r in &rows {
        let v = reduce(dense(r), &pivots);
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let s = inv(v[c]);
            let v: Vec<u64> = v.iter().map(|x| x * s % p).collect();
            for (_, row) in pivots.iter_mut() {
                let a = row[c];
                if a != 0 {
                    for (x, y) in row.iter_mut().zip(&v) {
                        *x = (*x + (p - a) * y) % p;
                    }
                }
            }
            pivots.push((c, v));
        }
    }
    reduce(dense(&target), &pivots).iter().all(|&x| x == 0)
}

pub fn random_poly(
    rng: &mut ChaCha8Rng,
    p: u32,
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> ModPoly {
    let monos = all_monomials(nvars, max_deg);
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<(Vec<u32>, u64)> = (0..n)
        .map(|_| {
            (
                monos.choose(rng).unwrap().clone(),
                rng.gen_range(1..p as u64),
            )
        })
        .collect();
    poly(p, 1, nvars, &terms)
}

fn gb(ideal: &IdealGens) -> GroebnerBasis {
    buchberger(ideal, &mut StepBudget::new(10_000_000)).unwrap()
}

fn same_ideal(a: &IdealGens, b: &IdealGens) -> bool {
    ideal_equal(a, b, &mut StepBudget::new(10_000_000)).unwrap()
}

fn check_reduced(b: &GroebnerBasis) -> Result<(), String> {
    let lms: Vec<Monomial> = b
        .basis()
        .iter()
        .map(|g| g.leading_monomial().unwrap().clone())
        .collect();
    for (i, g) in b.basis().iter().enumerate() {
        if g.leading_term().unwrap().1 != 1 {
            return Err(format!("basis element {i} is not monic"));
        }
        for (j, m) in lms.iter().enumerate() {
            if i != j && g.terms().iter().any(|(t, _)| m.divides(t)) {
                return Err(format!("basis element {i} is not reduced by {j}"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Default)]
pub struct OracleStats {
    pub instances: usize,
    pub members: usize,
    pub non_members: usize,
    pub skipped: usize,
}

/// Random ideals with ≤ 3 generators of degree ≤ 3 in ≤ 3 variables over F_2, F_3.
/// Gröbner membership must agree with the linear-algebra oracle [`span_contains`].
pub fn membership_oracle_run(seed: u64, instances: usize) -> Result<OracleStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = OracleStats::default();
    while stats.instances < instances {
        let p = *[2u32, 3].choose(&mut rng).unwrap();
        let nvars = rng.gen_range(1..=3);
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<ModPoly> = (0..ngens)
            .map(|_| random_poly(&mut rng, p, nvars, 3, 3))
            .collect();
        let i = IdealGens::new(p, nvars, gens.clone());
        let b = gb(&i);
        check_reduced(&b)?;
        if !b.contains_all(&i) {
            return Err(format!("generators not in their own basis: {gens:?}"));
        }
        // Smallest degree at which every basis element is provably in the ideal.
        let Some(d0) = (1..=9).find(|&d| b.basis().iter().all(|g| span_contains(&gens, g, d)))
        else {
            stats.skipped += 1;
            continue;
        };
        stats.instances += 1;

        let mut tests: Vec<ModPoly> = (0..3)
            .map(|_| random_poly(&mut rng, p, nvars, 3, 4))
            .collect();
        // Known members: random combinations with low-degree cofactors.
        for _ in 0..2 {
            let mut f = ModPoly::zero(*gens[0].ring(), nvars);
            for g in &gens {
                f = &f + &(&random_poly(&mut rng, p, nvars, 1, 2) * g);
            }
            tests.push(f);
        }
        for f in &tests {
            // Division by the basis has cofactor degrees ≤ deg f, so this bound is exact.
            let d = f.total_degree().unwrap_or(0) as u32 + d0;
            let oracle = span_contains(&gens, f, d);
            if b.contains(f) != oracle {
                return Err(format!(
                    "p={p} gens={gens:?} f={f:?}: basis says {}, oracle {oracle}",
                    !oracle
                ));
            }
            if oracle {
                stats.members += 1;
            } else {
                stats.non_members += 1;
            }
        }
    }
    if stats.skipped * 10 >= stats.instances {
        return Err(format!("{} instances needed degree > 9", stats.skipped));
    }
    Ok(stats)
}

/// Brute-force image of the trace: `u(F_*(m·g·h))` over every monomial `h` of
/// degree ≤ `bound`.
pub fn trace_brute(j: &IdealGens, m: &ModPoly, bound: u32) -> IdealGens {
    let mut gens = Vec::new();
    for g in j.generators() {
        let mg = m * g;
        for e in all_monomials(j.nvars(), bound) {
            gens.push(cartier_u(&mg.mul_term(&Monomial::from_exponents(&e), &1).unwrap()).unwrap());
        }
    }
    IdealGens::new(j.p(), j.nvars(), gens)
}

/// `trace_ideal` against [`trace_brute`] on random ideals with ≤ 2 generators
/// of degree ≤ 3 and multipliers of degree ≤ 3, N ≤ 3, p ∈ {2, 3}.
pub fn trace_oracle_run(seed: u64, instances: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..instances {
        let p = *[2u32, 3].choose(&mut rng).unwrap();
        let nvars = rng.gen_range(1..=3);
        let ngens = rng.gen_range(1..=2);
        let j = IdealGens::new(
            p,
            nvars,
            (0..ngens).map(|_| random_poly(&mut rng, p, nvars, 3, 3)),
        );
        let m = random_poly(&mut rng, p, nvars, 3, 3);
        let fast = trace_ideal(&j, &m).map_err(|e| e.to_string())?;
        // Monomials of degree ≤ N(p-1) ≤ 6 include every x^b with b ∈ [0, p)^N.
        let slow = trace_brute(&j, &m, 6);
        if !same_ideal(&fast, &slow) {
            return Err(format!("p={p} J={j:?} m={m:?}"));
        }
    }
    Ok(instances)
}
