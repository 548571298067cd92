//! Randomized property suite for the Witt kernel, shared by the CLI
//! `witt-selftest` command and the tests.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::*;
use crate::polyarith::{delta1, Monomial};

/// Largest supported length per prime; coefficient and degree growth is
/// exponential in the length.
pub const WITT_LIMITS: [(u32, usize); 3] = [(2, 4), (3, 3), (5, 3)];

const NVARS: usize = 2;
const MAX_DEGREE: u32 = 2;
const MAX_COEFF: i64 = 3;

pub fn within_limits(p: u32, n: usize) -> bool {
    n >= 2 && WITT_LIMITS.iter().any(|&(q, max)| q == p && n <= max)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: u32,
    pub failed: u32,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub p: u32,
    pub n: usize,
    pub trials: u32,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub elapsed_ms: u128,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn failures(&self) -> u32 {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

type Check = fn(&mut Trial) -> Result<(), String>;

const CHECKS: [(&str, Check); 15] = [
    ("ghost_additive", ghost_additive),
    ("ghost_multiplicative", ghost_multiplicative),
    ("ring_axioms", ring_axioms),
    ("teichmuller_times_shift", teichmuller_times_shift),
    ("shift_times_shift", shift_times_shift),
    ("delta_w_kills_s_phi", delta_w_kills_s_phi),
    ("delta_w_inverts_shift", delta_w_inverts_shift),
    ("delta_w_product_rule", delta_w_product_rule),
    ("delta_power_sum", delta_power_sum),
    ("delta_ratio", delta_ratio),
    ("delta_congruence", delta_congruence),
    ("teichmuller_decomposition", teichmuller_decomposition),
    ("delta1_matches_polyarith", delta1_matches_polyarith),
    ("psi_additive", psi_additive),
    ("sphi_phi_congruence", sphi_phi_congruence),
];

/// Runs every property `trials` times at `(p, n)` with a deterministic seed.
/// General Witt vectors have length `n`; the `Δ_s` checks expand a single
/// Teichmüller lift at length `n + 1` and cover `1 ≤ s ≤ n`. Panics if `(p, n)` is outside [`WITT_LIMITS`].
pub fn selftest(p: u32, n: usize, trials: u32, seed: u64) -> SelftestReport {
    assert!(
        within_limits(p, n),
        "witt selftest limits exceeded at p = {p}, n = {n}"
    );
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .map(|(name, _)| CheckOutcome {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            first_failure: None,
        })
        .collect();
    for t in 0..trials {
        let mut trial = Trial {
            p,
            n,
            rng: &mut rng,
        };
        for (outcome, (_, check)) in checks.iter_mut().zip(CHECKS.iter()) {
            match check(&mut trial) {
                Ok(()) => outcome.passed += 1,
                Err(msg) => {
                    outcome.failed += 1;
                    outcome
                        .first_failure
                        .get_or_insert(format!("trial {t}: {msg}"));
                }
            }
        }
    }
    SelftestReport {
        p,
        n,
        trials,
        seed,
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

struct Trial<'a> {
    p: u32,
    n: usize,
    rng: &'a mut ChaCha8Rng,
}

impl Trial<'_> {
    fn poly(&mut self) -> IntPoly {
        let mut terms = Vec::new();
        for d in 0..=MAX_DEGREE {
            for i in 0..=d {
                if self.rng.gen_bool(0.5) {
                    let c = self.rng.gen_range(-MAX_COEFF..=MAX_COEFF);
                    terms.push((Monomial::from_exponents(&[i, d - i]), BigInt::from(c)));
                }
            }
        }
        IntPoly::from_terms(Integers::new(self.p), NVARS, terms)
    }

    fn vector(&mut self, len: usize) -> WittVector {
        WittVector::new((0..len).map(|_| self.poly()).collect()).expect("nonempty")
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn ghost_additive(t: &mut Trial) -> Result<(), String> {
    let (u, v) = (t.vector(t.n), t.vector(t.n));
    let lhs = ghost(&witt_add(&u, &v).map_err(err)?).map_err(err)?;
    let (gu, gv) = (ghost(&u).map_err(err)?, ghost(&v).map_err(err)?);
    let rhs: Vec<IntPoly> = gu
        .components()
        .iter()
        .zip(gv.components())
        .map(|(a, b)| a + b)
        .collect();
    ensure(
        lhs.components() == rhs.as_slice(),
        "ghost(u + v) != ghost(u) + ghost(v)",
    )
}

fn ghost_multiplicative(t: &mut Trial) -> Result<(), String> {
    let (u, v) = (t.vector(t.n), t.vector(t.n));
    let lhs = ghost(&witt_mul(&u, &v).map_err(err)?).map_err(err)?;
    let (gu, gv) = (ghost(&u).map_err(err)?, ghost(&v).map_err(err)?);
    let rhs: Vec<IntPoly> = gu
        .components()
        .iter()
        .zip(gv.components())
        .map(|(a, b)| a * b)
        .collect();
    ensure(
        lhs.components() == rhs.as_slice(),
        "ghost(u * v) != ghost(u) * ghost(v)",
    )
}

fn ring_axioms(t: &mut Trial) -> Result<(), String> {
    let (u, v, w) = (t.vector(t.n), t.vector(t.n), t.vector(t.n));
    let add = |a: &WittVector, b: &WittVector| witt_add(a, b).map_err(err);
    let mul = |a: &WittVector, b: &WittVector| witt_mul(a, b).map_err(err);
    ensure(
        add(&add(&u, &v)?, &w)? == add(&u, &add(&v, &w)?)?,
        "addition not associative",
    )?;
    ensure(add(&u, &v)? == add(&v, &u)?, "addition not commutative")?;
    ensure(
        mul(&mul(&u, &v)?, &w)? == mul(&u, &mul(&v, &w)?)?,
        "multiplication not associative",
    )?;
    ensure(
        mul(&u, &v)? == mul(&v, &u)?,
        "multiplication not commutative",
    )?;
    ensure(
        mul(&u, &add(&v, &w)?)? == add(&mul(&u, &v)?, &mul(&u, &w)?)?,
        "multiplication does not distribute",
    )?;
    let zero = WittVector::zero(t.p, NVARS, t.n).map_err(err)?;
    ensure(add(&u, &negate(&u).map_err(err)?)? == zero, "u + (-u) != 0")
}

fn teichmuller_times_shift(t: &mut Trial) -> Result<(), String> {
    let (a, b) = (t.poly(), t.poly());
    for m in 1..t.n {
        let shifted_b = verschiebung_pow(&teichmuller(&b, t.n - m).map_err(err)?, m);
        let lhs = witt_mul(&teichmuller(&a, t.n).map_err(err)?, &shifted_b).map_err(err)?;
        let apm = a.pow((t.p as u64).pow(m as u32)).map_err(err)?;
        let rhs = verschiebung_pow(&teichmuller(&(&apm * &b), t.n - m).map_err(err)?, m);
        ensure(
            lhs == rhs,
            &format!("[a]V^{m}([b]) != V^{m}([a^(p^{m}) b])"),
        )?;
    }
    Ok(())
}

fn shift_times_shift(t: &mut Trial) -> Result<(), String> {
    let (alpha, beta) = (t.vector(t.n - 1), t.vector(t.n - 1));
    let lhs = witt_mul(&verschiebung(&alpha), &verschiebung(&beta)).map_err(err)?;
    let prod = witt_mul(&alpha, &beta).map_err(err)?;
    let rhs = scalar_mul(t.p as i64, &verschiebung(&prod)).map_err(err)?;
    ensure(lhs == rhs, "V(α)V(β) != pV(αβ)")
}

fn delta_w_kills_s_phi(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let d = delta_w(&s_phi(&a, t.n).map_err(err)?).map_err(err)?;
    ensure(d.is_zero(), "Δ_W(s_φ(a)) != 0")
}

fn delta_w_inverts_shift(t: &mut Trial) -> Result<(), String> {
    let alpha = t.vector(t.n - 1);
    let d = delta_w(&verschiebung(&alpha)).map_err(err)?;
    ensure(d == alpha, "Δ_W(Vα) != α")
}

fn delta_w_product_rule(t: &mut Trial) -> Result<(), String> {
    let (alpha, beta) = (t.vector(t.n), t.vector(t.n));
    let (a, b) = (&alpha.coords()[0], &beta.coords()[0]);
    let da = delta_w(&alpha).map_err(err)?;
    let db = delta_w(&beta).map_err(err)?;
    let lhs = delta_w(&witt_mul(&alpha, &beta).map_err(err)?).map_err(err)?;
    let sb = s_phi(&b.frobenius_substitute(1).map_err(err)?, t.n - 1).map_err(err)?;
    let sa = s_phi(&a.frobenius_substitute(1).map_err(err)?, t.n - 1).map_err(err)?;
    let linear = witt_add(
        &witt_mul(&sb, &da).map_err(err)?,
        &witt_mul(&sa, &db).map_err(err)?,
    )
    .map_err(err)?;
    let cross = scalar_mul(t.p as i64, &witt_mul(&da, &db).map_err(err)?).map_err(err)?;
    ensure(
        lhs == witt_add(&linear, &cross).map_err(err)?,
        "product rule fails exactly",
    )?;
    let diff = witt_sub(&lhs, &linear).map_err(err)?;
    ensure(
        divide_by_p(&diff).map_err(err)?.is_some(),
        "product rule fails mod pW",
    )
}

fn delta_power_sum(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let n = t.n;
    let deltas = delta_sequence(&a, n).map_err(err)?;
    let lhs = a.pow((t.p as u64).pow(n as u32)).map_err(err)?;
    let mut rhs = IntPoly::zero(Integers::new(t.p), NVARS);
    for (s, d) in deltas.iter().enumerate() {
        let term = d
            .frobenius_substitute((n - s) as u32)
            .map_err(err)?
            .scale(&num_traits::pow(BigInt::from(t.p), s));
        rhs = &rhs + &term;
    }
    ensure(lhs == rhs, "a^(p^n) != Σ p^s φ^(n-s) Δ_s(a)")
}

fn delta_ratio(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let deltas = delta_sequence(&a, t.n).map_err(err)?;
    for (s, delta) in deltas.iter().enumerate().skip(1) {
        let power = a.pow((t.p as u64).pow(s as u32 - 1)).map_err(err)?;
        let expected = delta1_exact(&power)
            .map_err(err)?
            .exact_div(&num_traits::pow(BigInt::from(t.p), s - 1))
            .map_err(err)?;
        ensure(
            *delta == expected,
            &format!("Δ_{s}(a) != Δ_1(a^(p^{}))/p^{}", s - 1, s - 1),
        )?;
    }
    Ok(())
}

fn delta_congruence(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let deltas = delta_sequence(&a, t.n).map_err(err)?;
    let p = t.p as u64;
    let abar = a.reduce_mod(1).map_err(err)?;
    let d1 = deltas[1].reduce_mod(1).map_err(err)?;
    for (s, delta) in deltas.iter().enumerate().skip(2) {
        let ps = p.pow(s as u32);
        let mut expected = &abar.pow(ps - p).map_err(err)? * &d1;
        if t.p == 2 {
            expected =
                &expected + &(&abar.pow(ps - 2 * p).map_err(err)? * &d1.pow(p).map_err(err)?);
        }
        let got = delta.reduce_mod(1).map_err(err)?;
        ensure(got == expected, &format!("Δ_{s}(a) congruence mod p fails"))?;
    }
    Ok(())
}

fn teichmuller_decomposition(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let n = t.n;
    let deltas = delta_sequence(&a, n).map_err(err)?;
    let mut sum = verschiebung_pow(&teichmuller(&deltas[n], 1).map_err(err)?, n);
    for (s, d) in deltas.iter().enumerate().take(n) {
        let piece = verschiebung_pow(&s_phi(d, n + 1 - s).map_err(err)?, s);
        sum = witt_add(&sum, &piece).map_err(err)?;
    }
    ensure(
        sum == teichmuller(&a, n + 1).map_err(err)?,
        "[a] != Σ V^s s_φ(Δ_s(a)) + V^n Δ_n(a)",
    )
}

fn delta1_matches_polyarith(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let via_witt = delta_s_witt(&a, 1)
        .map_err(err)?
        .reduce_mod(1)
        .map_err(err)?;
    let via_poly = delta1(&a.reduce_mod(2).map_err(err)?).map_err(err)?;
    ensure(
        via_witt == via_poly,
        "Witt Δ_1 disagrees with the polynomial Δ_1",
    )
}

fn psi_additive(t: &mut Trial) -> Result<(), String> {
    let (u, v) = (t.vector(t.n), t.vector(t.n));
    let lhs = psi_decompose(&witt_add(&u, &v).map_err(err)?).map_err(err)?;
    let (pu, pv) = (
        psi_decompose(&u).map_err(err)?,
        psi_decompose(&v).map_err(err)?,
    );
    let rhs: Vec<IntPoly> = pu.iter().zip(&pv).map(|(a, b)| a + b).collect();
    ensure(lhs == rhs, "Ψ(u + v) != Ψ(u) + Ψ(v)")?;
    let a = t.poly();
    let psi = psi_decompose(&s_phi(&a, t.n).map_err(err)?).map_err(err)?;
    ensure(
        psi[0] == a && psi[1..].iter().all(|c| c.is_zero()),
        "Ψ(s_φ(a)) != (a, 0, .., 0)",
    )
}

fn sphi_phi_congruence(t: &mut Trial) -> Result<(), String> {
    let a = t.poly();
    let class = sphi_phi_mod_p(&a, t.n).map_err(err)?;
    let expected = a.pow(t.p as u64).map_err(err)?.reduce_mod(1).map_err(err)?;
    ensure(
        class[0] == expected && class[1..].iter().all(|c| c.is_zero()),
        "s_φ(φ(a)) mod p != [a^p]",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!(within_limits(2, 4));
        assert!(!within_limits(2, 5));
        assert!(within_limits(5, 3));
        assert!(!within_limits(7, 2));
        assert!(!within_limits(3, 1));
    }

    #[test]
    fn small_run_passes() {
        let report = selftest(3, 2, 3, 7);
        assert!(report.all_passed(), "{:?}", report.checks);
        assert_eq!(report.checks.len(), CHECKS.len());
    }
}
