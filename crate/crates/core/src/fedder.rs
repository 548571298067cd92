//! Ideal chains of the Fedder-type criterion for quasi-F-splitting.
//!
//! With `f = f_1⋯f_r`, `I = (f̄_1..f̄_r)` and `δ = Δ_1(f^{p-1}) mod p` computed
//! from the given integer lifts:
//!
//! * `I_1 = (f̄^{p-1}) + I^{[p]}`, `I_n = u(F_*(δ·I_{n-1})) + I_1`; the height
//!   is the first `n` with `I_n ⊄ m^{[p]}`.
//! * `I' = ⋂_e u^e(F^e_*(f̄^{p^e-1}))`, reached as the stable value of
//!   `J_0 = (1)`, `J_{e+1} = u(F_*(f̄^{p-1}·J_e))`.
//! * `I'_1 = f̄^{p-1}·I' + I^{[p]}`, `I'_n = u(F_*(δ·I'_{n-1})) + (f̄^{p-1}) + I^{[p]}`;
//!   the ring is quasi-(F,F^∞)-split iff the height `h` is finite and `I'_h ⊄ m^{[p]}`.
//!
//! All ideals are polynomial ideals of `F_p[x_1..x_N]`. Non-containment in
//! the `m`-primary ideal `m^{[p]}` and equality of ideals both survive passing
//! to the local ring at the origin, so a `Finite` or `Infinite` answer is
//! exact; only the number of steps can differ.

use crate::groebner::{buchberger, GroebnerBasis, GroebnerError, StepBudget, DEFAULT_GB_BUDGET};
use crate::polyarith::{
    delta1, frobenius_components, frobenius_power_of_maximal, monomial_ideal_member, IdealGens,
    ModPoly, PolyError, Precision, PrimeContext,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FedderError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainOptions {
    pub max_height: u32,
    pub sigma_budget: u32,
    pub gb_budget: u64,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            max_height: 12,
            sigma_budget: 64,
            gb_budget: DEFAULT_GB_BUDGET,
        }
    }
}

/// Integer lifts `f_1..f_r` (known at least mod `p^2`) of a complete intersection.
///
/// That the lifts form a regular sequence with p-torsion-free quotient is
/// taken on trust; only `f̄_i ≠ 0` and `r ≤ N` are checked.
#[derive(Clone, Debug)]
pub struct CIInput {
    ctx: PrimeContext,
    lifts: Vec<ModPoly>,
    options: ChainOptions,
}

impl CIInput {
    pub fn new(
        ctx: PrimeContext,
        lifts: Vec<ModPoly>,
        options: ChainOptions,
    ) -> Result<Self, FedderError> {
        if lifts.is_empty() {
            return Err(FedderError::Input("at least one lift is required".into()));
        }
        if lifts.len() > ctx.nvars() {
            return Err(FedderError::Input(format!(
                "{} lifts exceed the {} variables",
                lifts.len(),
                ctx.nvars()
            )));
        }
        for (i, f) in lifts.iter().enumerate() {
            if f.prime() != ctx.p() || f.nvars() != ctx.nvars() {
                return Err(FedderError::Input(format!(
                    "lift {} does not match the context",
                    i + 1
                )));
            }
            match f.precision() {
                Precision::Mod(k) if k >= 2 => {}
                other => {
                    return Err(FedderError::Input(format!(
                        "lift {} has precision {other}; at least Z/p^2 is needed",
                        i + 1
                    )))
                }
            }
            if f.mod_p().is_zero() {
                return Err(FedderError::Input(format!("lift {} vanishes mod p", i + 1)));
            }
        }
        let lifts = lifts
            .iter()
            .map(|f| f.reduce_precision(2))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            ctx,
            lifts,
            options,
        })
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    /// The lifts, reduced mod `p^2`.
    pub fn lifts(&self) -> &[ModPoly] {
        &self.lifts
    }

    pub fn options(&self) -> &ChainOptions {
        &self.options
    }

    fn budget(&self) -> StepBudget {
        StepBudget::new(self.options.gb_budget)
    }

    /// `f = f_1⋯f_r` mod `p^2`.
    pub fn product(&self) -> ModPoly {
        self.lifts[1..]
            .iter()
            .fold(self.lifts[0].clone(), |acc, f| &acc * f)
    }

    /// `f̄^{p-1}`.
    pub fn f_bar_power(&self) -> ModPoly {
        self.product()
            .mod_p()
            .pow(self.p() as u64 - 1)
            .expect("degree fits")
    }

    /// `I^{[p]} = (f̄_1^p, …, f̄_r^p)`.
    pub fn frobenius_power_gens(&self) -> Vec<ModPoly> {
        self.lifts
            .iter()
            .map(|f| f.mod_p().pow(self.p() as u64).expect("degree fits"))
            .collect()
    }

    fn ideal(&self, gens: impl IntoIterator<Item = ModPoly>) -> IdealGens {
        IdealGens::new(self.p(), self.ctx.nvars(), gens)
    }

    fn m_frobenius(&self) -> Vec<crate::polyarith::Monomial> {
        frobenius_power_of_maximal(self.ctx.nvars(), self.p())
    }

    /// A generator of the ideal outside `m^{[p]}`, if any.
    fn outside_mp(&self, gb: &GroebnerBasis) -> Option<ModPoly> {
        let mp = self.m_frobenius();
        gb.basis()
            .iter()
            .find(|g| !monomial_ideal_member(*g, &mp))
            .cloned()
    }
}

/// `Δ_1((f_1⋯f_r)^{p-1}) mod p`, computed from the given lifts.
pub fn delta_term(input: &CIInput) -> Result<ModPoly, FedderError> {
    let f = input.product();
    let power = f.pow(input.p() as u64 - 1)?;
    Ok(delta1(&power)?.mod_p())
}

/// Generators of `u(F_*(multiplier·J))`: the values `u(multiplier·g·x^b)` for
/// every generator `g` of `J` and every `b ∈ {0..p-1}^N`.
pub fn trace_ideal(j: &IdealGens, multiplier: &ModPoly) -> Result<IdealGens, FedderError> {
    let mut gens = Vec::new();
    for g in j.generators() {
        let h = multiplier.try_mul(g)?;
        gens.extend(frobenius_components(&h)?);
    }
    Ok(IdealGens::new(j.p(), j.nvars(), gens))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    IChain,
    JDescent,
    IprimeChain,
}

/// A computed chain of ideals, each stored as its reduced Gröbner basis.
/// `ideals[0]` is level 1 for I-chains and I'-chains and `J_0` for J-descents.
#[derive(Clone, Debug)]
pub struct IdealChain {
    pub kind: ChainKind,
    pub ideals: Vec<GroebnerBasis>,
    pub stabilized_at: Option<usize>,
    pub inconclusive: bool,
}

impl IdealChain {
    fn new(kind: ChainKind) -> Self {
        Self {
            kind,
            ideals: Vec::new(),
            stabilized_at: None,
            inconclusive: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightValue {
    Finite(u32),
    Infinite,
    Inconclusive { max_reached: u32, reason: String },
}

/// Certificate for infinite height: `I_index = I_{index+1} ⊆ m^{[p]}`.
#[derive(Clone, Debug)]
pub struct StabilizationCertificate {
    pub index: u32,
    pub stable: GroebnerBasis,
}

#[derive(Clone, Debug)]
pub struct HeightResult {
    pub value: HeightValue,
    /// For `Finite(n)`: a generator of `I_n` outside `m^{[p]}`.
    pub witness: Option<ModPoly>,
    pub certificate: Option<StabilizationCertificate>,
    pub chain: IdealChain,
    pub gb_steps: u64,
}

fn budget_to_inconclusive(e: GroebnerError, level: u32) -> HeightValue {
    HeightValue::Inconclusive {
        max_reached: level,
        reason: e.to_string(),
    }
}

fn gb_or_internal(
    r: Result<GroebnerBasis, GroebnerError>,
) -> Result<Result<GroebnerBasis, GroebnerError>, FedderError> {
    match r {
        Err(GroebnerError::Mismatch) => {
            Err(FedderError::Internal("ring mismatch inside a chain".into()))
        }
        other => Ok(other),
    }
}

/// The I-chain, stopped at the first level outside `m^{[p]}`, at
/// stabilization inside `m^{[p]}`, or at `max_height`.
pub fn chain_i(input: &CIInput) -> Result<HeightResult, FedderError> {
    let mut budget = input.budget();
    chain_i_with(input, &mut budget)
}

/// Quasi-F-splitting height.
pub fn height(input: &CIInput) -> Result<HeightResult, FedderError> {
    chain_i(input)
}

fn chain_i_with(input: &CIInput, budget: &mut StepBudget) -> Result<HeightResult, FedderError> {
    let delta = delta_term(input)?;
    let mut i1 = vec![input.f_bar_power()];
    i1.extend(input.frobenius_power_gens());
    let mut chain = IdealChain::new(ChainKind::IChain);

    let finish = |value, witness, certificate, chain, budget: &StepBudget| HeightResult {
        value,
        witness,
        certificate,
        chain,
        gb_steps: budget.used(),
    };

    let first = match gb_or_internal(buchberger(&input.ideal(i1.clone()), budget))? {
        Ok(gb) => gb,
        Err(e) => {
            chain.inconclusive = true;
            return Ok(finish(
                budget_to_inconclusive(e, 0),
                None,
                None,
                chain,
                budget,
            ));
        }
    };
    chain.ideals.push(first);
    let mut level = 1u32;
    loop {
        let current = chain.ideals.last().expect("nonempty").clone();
        if let Some(w) = input.outside_mp(&current) {
            return Ok(finish(
                HeightValue::Finite(level),
                Some(w),
                None,
                chain,
                budget,
            ));
        }
        if level >= input.options.max_height {
            chain.inconclusive = true;
            let value = HeightValue::Inconclusive {
                max_reached: level,
                reason: format!("I_n ⊆ m^[p] up to max_height {}", input.options.max_height),
            };
            return Ok(finish(value, None, None, chain, budget));
        }
        let mut gens = trace_ideal(&current.to_ideal(), &delta)?;
        gens.extend(i1.iter().cloned());
        let next = match gb_or_internal(buchberger(&gens, budget))? {
            Ok(gb) => gb,
            Err(e) => {
                chain.inconclusive = true;
                return Ok(finish(
                    budget_to_inconclusive(e, level),
                    None,
                    None,
                    chain,
                    budget,
                ));
            }
        };
        if !next.contains_all(&current.to_ideal()) {
            return Err(FedderError::Internal(format!(
                "I_{level} ⊄ I_{}",
                level + 1
            )));
        }
        let stable = next == current;
        chain.ideals.push(next);
        if stable {
            chain.stabilized_at = Some(level as usize);
            let certificate = StabilizationCertificate {
                index: level,
                stable: current,
            };
            return Ok(finish(
                HeightValue::Infinite,
                None,
                Some(certificate),
                chain,
                budget,
            ));
        }
        level += 1;
    }
}

/// The stable ideal `I'` with the J-descent that produced it.
#[derive(Clone, Debug)]
pub struct StableIdeal {
    pub ideal: GroebnerBasis,
    /// First `e` with `J_e = J_{e+1}`.
    pub stabilized_at: u32,
    pub chain: IdealChain,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StableIdealError {
    #[error("J-descent did not stabilize within {0} iterations")]
    SigmaBudget(u32),
    #[error(transparent)]
    Groebner(GroebnerError),
    #[error(transparent)]
    Fedder(#[from] FedderError),
}

pub fn stable_ideal(input: &CIInput) -> Result<StableIdeal, StableIdealError> {
    stable_ideal_with(input, &mut input.budget())
}

fn stable_ideal_with(
    input: &CIInput,
    budget: &mut StepBudget,
) -> Result<StableIdeal, StableIdealError> {
    let fp = input.f_bar_power();
    let nvars = input.ctx.nvars();
    let one = ModPoly::one(crate::polyarith::Zmod::field(input.p()), nvars);
    let mut chain = IdealChain::new(ChainKind::JDescent);
    let j0 = buchberger(&input.ideal([one]), budget).map_err(StableIdealError::Groebner)?;
    chain.ideals.push(j0);
    for e in 0..input.options.sigma_budget {
        let current = chain.ideals.last().expect("nonempty").clone();
        let gens = trace_ideal(&current.to_ideal(), &fp)?;
        let next = buchberger(&gens, budget).map_err(StableIdealError::Groebner)?;
        if !current.contains_all(&next.to_ideal()) {
            return Err(FedderError::Internal(format!("J_{} ⊄ J_{e}", e + 1)).into());
        }
        let stable = next == current;
        chain.ideals.push(next);
        if stable {
            chain.stabilized_at = Some(e as usize);
            return Ok(StableIdeal {
                ideal: current,
                stabilized_at: e,
                chain,
            });
        }
    }
    chain.inconclusive = true;
    Err(StableIdealError::SigmaBudget(input.options.sigma_budget))
}

/// Outcome of the quasi-(F,F^∞)-splitting test.
#[derive(Clone, Debug)]
pub struct FfInfinity {
    pub split: bool,
    pub chain: IdealChain,
}

/// Builds `I'_1..I'_height` and decides `I'_height ⊄ m^{[p]}`.
///
/// When the I-chain is supplied, `I'_n ⊆ I_n` is checked level by level.
pub fn iprime_chain(
    input: &CIInput,
    stable: &GroebnerBasis,
    height: u32,
    i_chain: Option<&IdealChain>,
) -> Result<Result<FfInfinity, GroebnerError>, FedderError> {
    iprime_chain_with(input, stable, height, i_chain, &mut input.budget())
}

fn iprime_chain_with(
    input: &CIInput,
    stable: &GroebnerBasis,
    height: u32,
    i_chain: Option<&IdealChain>,
    budget: &mut StepBudget,
) -> Result<Result<FfInfinity, GroebnerError>, FedderError> {
    assert!(height >= 1);
    let delta = delta_term(input)?;
    let fp = input.f_bar_power();
    let frob = input.frobenius_power_gens();
    let mut chain = IdealChain::new(ChainKind::IprimeChain);

    let mut first: Vec<ModPoly> = stable.basis().iter().map(|g| &fp * g).collect();
    first.extend(frob.iter().cloned());
    let mut current = match gb_or_internal(buchberger(&input.ideal(first), budget))? {
        Ok(gb) => gb,
        Err(e) => return Ok(Err(e)),
    };
    for level in 1..=height {
        if level > 1 {
            let mut gens = trace_ideal(&current.to_ideal(), &delta)?;
            gens.extend([fp.clone()]);
            gens.extend(frob.iter().cloned());
            current = match gb_or_internal(buchberger(&gens, budget))? {
                Ok(gb) => gb,
                Err(e) => return Ok(Err(e)),
            };
        }
        if let Some(i_level) = i_chain.and_then(|c| c.ideals.get(level as usize - 1)) {
            if !i_level.contains_all(&current.to_ideal()) {
                return Err(FedderError::Internal(format!("I'_{level} ⊄ I_{level}")));
            }
        }
        chain.ideals.push(current.clone());
    }
    let split = input.outside_mp(&current).is_some();
    Ok(Ok(FfInfinity { split, chain }))
}

/// Quasi-(F,F^∞)-splitting. `None` when the height is not finite (the ring
/// is then not quasi-F-split, or the answer is unknown).
pub fn is_qf_finfty(input: &CIInput) -> Result<Option<FfInfinity>, FedderError> {
    Ok(analyze(input)?.ffinfty)
}

/// Everything the criterion yields for one input.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub height: HeightResult,
    pub stable: Result<StableIdeal, StableIdealError>,
    /// Present iff the height is finite and `I'` was computed.
    pub ffinfty: Option<FfInfinity>,
    /// Set when the I'-chain ran out of Gröbner budget.
    pub ffinfty_inconclusive: Option<String>,
}

/// Height, stable ideal and quasi-(F,F^∞) decision, sharing one step budget.
pub fn analyze(input: &CIInput) -> Result<Analysis, FedderError> {
    let mut budget = input.budget();
    let height = chain_i_with(input, &mut budget)?;
    let stable = match stable_ideal_with(input, &mut budget) {
        Err(StableIdealError::Fedder(e)) => return Err(e),
        other => other,
    };
    let mut ffinfty = None;
    let mut ffinfty_inconclusive = None;
    if let (HeightValue::Finite(n), Ok(s)) = (&height.value, &stable) {
        match iprime_chain_with(input, &s.ideal, *n, Some(&height.chain), &mut budget)? {
            Ok(r) => ffinfty = Some(r),
            Err(e) => ffinfty_inconclusive = Some(e.to_string()),
        }
    }
    Ok(Analysis {
        height,
        stable,
        ffinfty,
        ffinfty_inconclusive,
    })
}
