//! Sparse multivariate polynomials over `Z/p^k` and `Z`, with the Frobenius
//! lift `x_i -> x_i^p`, the operators `Δ_1`, `Δ_n`, the trace `u` and an
//! expression parser.

mod coeff;
mod context;
mod ideal;
mod monomial;
mod ops;
mod parse;
mod poly;

pub use coeff::{CoeffRing, Integers, Precision, Zmod, MAX_MODULAR_PRECISION};
pub use context::{is_prime, PrimeContext, MAX_PRIME};
pub use ideal::IdealGens;
pub use monomial::Monomial;
pub use ops::{
    cartier_u, cartier_ue, delta1, delta_n, frobenius_components, frobenius_power_of_maximal,
    monomial_ideal_member, monomial_poly, residue_mod_frobenius_power,
};
pub use parse::{parse_in, parse_int_poly, parse_poly, ParseError};
pub use poly::{IntPoly, ModPoly, Poly};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("{0} is not a prime in 2..=97")]
    InvalidPrime(u32),
    #[error("invalid variables: {0}")]
    InvalidVariables(String),
    #[error("precision k = {0} is outside 1..=8")]
    InvalidPrecision(u32),
    #[error("operands live in different polynomial rings")]
    Mismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("precision Z/p^{needed} required, got Z/p^{got}")]
    InsufficientPrecision { needed: u32, got: u32 },
    #[error("expected precision Z/p^{expected}, got Z/p^{got}")]
    WrongPrecision { expected: u32, got: u32 },
    #[error("coefficient not divisible by p where exact division was required")]
    NonDivisible,
}
