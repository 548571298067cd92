use crate::polyarith::{CoeffRing, ModPoly, Monomial, Poly, PolyError, Precision, Zmod};

fn require_field(f: &ModPoly) -> Result<(), PolyError> {
    match f.precision() {
        Precision::Mod(1) => Ok(()),
        Precision::Mod(k) => Err(PolyError::WrongPrecision {
            expected: 1,
            got: k,
        }),
        Precision::Exact => unreachable!("ModPoly is always modular"),
    }
}

/// `Δ_1(f) = (f^p - φ(f)) / p` for `f` over `Z/p^k`, returned over `Z/p^{k-1}`.
///
/// A non-divisible coefficient cannot happen for a genuine Frobenius lift and
/// is reported as [`PolyError::NonDivisible`].
pub fn delta1(f: &ModPoly) -> Result<ModPoly, PolyError> {
    let k = f.ring().k();
    if k < 2 {
        return Err(PolyError::InsufficientPrecision { needed: 2, got: k });
    }
    let p = f.prime() as u64;
    let diff = f.pow(p)?.try_sub(&f.frobenius_substitute(1)?)?;
    diff.divide_by_p()
}

/// `Δ_n(f) mod p`, computed as `Δ_1(f^{p^{n-1}}) / p^{n-1}`. Needs `f` known
/// modulo `p^{n+1}`.
pub fn delta_n(f: &ModPoly, n: u32) -> Result<ModPoly, PolyError> {
    assert!(n >= 1, "delta_n is defined for n >= 1");
    let k = f.ring().k();
    if k < n + 1 {
        return Err(PolyError::InsufficientPrecision {
            needed: n + 1,
            got: k,
        });
    }
    let f = f.reduce_precision(n + 1)?;
    let p = f.prime() as u64;
    let power = f.pow(p.checked_pow(n - 1).ok_or(PolyError::ExponentOverflow)?)?;
    let mut d = delta1(&power)?;
    for _ in 1..n {
        d = d.divide_by_p()?;
    }
    Ok(d)
}

/// The trace `u` dual to `x_1^{p-1}...x_N^{p-1}`: keeps the monomials whose
/// exponents are all `≡ p-1 (mod p)` and takes their p-th roots.
pub fn cartier_u(f: &ModPoly) -> Result<ModPoly, PolyError> {
    require_field(f)?;
    let p = f.prime();
    let terms = f.terms().iter().filter_map(|(m, c)| {
        let exps = m.exponents();
        if exps.iter().all(|&a| a % p == p - 1) {
            let root: Vec<u32> = exps.iter().map(|&a| (a - (p - 1)) / p).collect();
            Some((Monomial::from_exponents(&root), *c))
        } else {
            None
        }
    });
    Ok(Poly::from_terms(*f.ring(), f.nvars(), terms))
}

/// The e-fold iterate `u^e`.
pub fn cartier_ue(f: &ModPoly, e: u32) -> Result<ModPoly, PolyError> {
    let mut g = f.clone();
    for _ in 0..e {
        g = cartier_u(&g)?;
    }
    if e == 0 {
        require_field(f)?;
    }
    Ok(g)
}

/// Splits `f = Σ_c x^c · (f_c)^p` over residue classes `c ∈ {0..p-1}^N` and
/// returns the nonzero `f_c` (in residue-class order).
///
/// `f_c = u(f · x^{(p-1) - c})`, so these are exactly the values of `u` on
/// `f · x^b` for `b ∈ {0..p-1}^N`.
pub fn frobenius_components(f: &ModPoly) -> Result<Vec<ModPoly>, PolyError> {
    require_field(f)?;
    let p = f.prime();
    let mut classes: std::collections::BTreeMap<Vec<u32>, Vec<(Monomial, u64)>> =
        std::collections::BTreeMap::new();
    for (m, c) in f.terms() {
        let residue: Vec<u32> = m.exponents().iter().map(|&a| a % p).collect();
        let root: Vec<u32> = m.exponents().iter().map(|&a| a / p).collect();
        classes
            .entry(residue)
            .or_default()
            .push((Monomial::from_exponents(&root), *c));
    }
    Ok(classes
        .into_values()
        .map(|terms| Poly::from_terms(*f.ring(), f.nvars(), terms))
        .filter(|g| !g.is_zero())
        .collect())
}

/// Membership of `f` in the monomial ideal generated by `gens`: every term of
/// `f` must be divisible by some generator. The zero polynomial is a member.
pub fn monomial_ideal_member<R: CoeffRing>(f: &Poly<R>, gens: &[Monomial]) -> bool {
    f.terms()
        .iter()
        .all(|(m, _)| gens.iter().any(|g| g.divides(m)))
}

/// Generators `x_1^q, ..., x_N^q` of the Frobenius power `m^{[q]}`.
pub fn frobenius_power_of_maximal(nvars: usize, q: u32) -> Vec<Monomial> {
    (0..nvars)
        .map(|i| Monomial::var_power(nvars, i, q))
        .collect()
}

/// The part of `f` outside `m^{[q]}`: drops every term with some exponent `>= q`.
pub fn residue_mod_frobenius_power(f: &ModPoly, q: u32) -> ModPoly {
    let terms = f
        .terms()
        .iter()
        .filter(|(m, _)| m.exponents().iter().all(|&a| a < q))
        .cloned()
        .collect();
    Poly::from_sorted_terms(*f.ring(), f.nvars(), terms)
}

/// The monomial `x_1^b_1 ... x_N^b_N` as a polynomial over `F_p`.
pub fn monomial_poly(p: u32, exps: &[u32]) -> ModPoly {
    Poly::monomial(Zmod::field(p), Monomial::from_exponents(exps), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::{parse_poly, PrimeContext};

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn delta1_of_rdp() {
        let c = ctx(2);
        let f = parse_poly("z^2+x^3+y^5", &c, 2).unwrap();
        let expected = parse_poly("x^3*z^2 + y^5*z^2 + x^3*y^5", &c, 1).unwrap();
        assert_eq!(delta1(&f).unwrap(), expected);
    }

    #[test]
    fn delta1_of_monomial_vanishes() {
        let c = ctx(3);
        let f = parse_poly("x^2*y*z^4", &c, 4).unwrap();
        assert!(delta1(&f).unwrap().is_zero());
        for n in 1..=3 {
            assert!(delta_n(&f, n).unwrap().is_zero());
        }
    }

    #[test]
    fn delta1_of_scalar() {
        let c = ctx(2);
        let f = parse_poly("3*x", &c, 2).unwrap();
        assert_eq!(delta1(&f).unwrap(), parse_poly("x^2", &c, 1).unwrap());
    }

    #[test]
    fn delta_requires_precision() {
        let c = ctx(2);
        let f = parse_poly("x+y", &c, 1).unwrap();
        assert_eq!(
            delta1(&f),
            Err(PolyError::InsufficientPrecision { needed: 2, got: 1 })
        );
        let g = parse_poly("x+y", &c, 2).unwrap();
        assert!(matches!(
            delta_n(&g, 2),
            Err(PolyError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn delta_n_one_is_delta1_mod_p() {
        let c = ctx(3);
        let f = parse_poly("x^2 + 4*y*z + 2", &c, 3).unwrap();
        assert_eq!(delta_n(&f, 1).unwrap(), delta1(&f).unwrap().mod_p());
    }

    #[test]
    fn cartier_examples() {
        let c = ctx(2);
        let u = |s: &str| cartier_u(&parse_poly(s, &c, 1).unwrap()).unwrap();
        assert!(u("x*y*z").is_one());
        assert_eq!(u("x^3*y^5*z^3"), parse_poly("x*y^2*z", &c, 1).unwrap());
        assert!(u("x^2").is_zero());
        let f = parse_poly("x^3*y^3*z^3", &c, 1).unwrap();
        assert!(cartier_ue(&f, 2).unwrap().is_one());
        assert_eq!(cartier_ue(&f, 1).unwrap(), cartier_u(&f).unwrap());
    }

    #[test]
    fn cartier_requires_field() {
        let f = parse_poly("x", &ctx(2), 2).unwrap();
        assert_eq!(
            cartier_u(&f),
            Err(PolyError::WrongPrecision {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn frobenius_components_match_literal_expansion() {
        let c = ctx(3);
        let f = parse_poly("x^5*y + 2*x*y^2*z^8 + z^2 + y^7 + x^2*y^2*z^2", &c, 1).unwrap();
        let mut literal = Vec::new();
        for b0 in 0..3 {
            for b1 in 0..3 {
                for b2 in 0..3 {
                    let g = cartier_u(&(&f * &monomial_poly(3, &[b0, b1, b2]))).unwrap();
                    if !g.is_zero() {
                        literal.push(g);
                    }
                }
            }
        }
        let mut comps = frobenius_components(&f).unwrap();
        literal.sort_by_key(|g| g.render(c.names()));
        comps.sort_by_key(|g| g.render(c.names()));
        assert_eq!(comps, literal);
    }

    #[test]
    fn monomial_membership() {
        let c = ctx(2);
        let m2 = frobenius_power_of_maximal(3, 2);
        assert!(monomial_ideal_member(
            &parse_poly("x^3*z^2", &c, 1).unwrap(),
            &m2
        ));
        assert!(!monomial_ideal_member(
            &parse_poly("x*y*z", &c, 1).unwrap(),
            &m2
        ));
        assert!(monomial_ideal_member(&parse_poly("0", &c, 1).unwrap(), &m2));
        let r = residue_mod_frobenius_power(&parse_poly("x^2*y + x*y*z + z", &c, 1).unwrap(), 2);
        assert_eq!(r, parse_poly("x*y*z + z", &c, 1).unwrap());
    }
}
