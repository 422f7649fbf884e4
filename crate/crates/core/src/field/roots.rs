//! Roots in K = F_{q^s}(t) of a polynomial over K.
//!
//! After clearing denominators and content, a root u/w in lowest terms has
//! u dividing the constant coefficient and w dividing the leading one (up to
//! a constant of F_{q^s}). The candidates are enumerated from the
//! factorizations of those two coefficients and checked exactly.

use super::factor::factor_univariate;
use super::fq::FqElem;
use super::param::ParamPoly;
use super::poly::FqPoly;
use super::ratfunc::RatFunc;

/// Default cap on the number of candidate roots examined.
pub const DEFAULT_DIVISOR_BUDGET: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("cannot search for roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("root search needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSearch {
    /// Distinct roots in K, sorted by (numerator, denominator).
    pub roots: Vec<RatFunc>,
    /// Number of candidates that were evaluated.
    pub candidates: u64,
}

/// All monic divisors of a nonzero polynomial.
pub fn monic_divisors(f: &FqPoly) -> Vec<FqPoly> {
    let field = f.field();
    let mut divs = vec![FqPoly::one(field)];
    if f.is_constant() {
        return divs;
    }
    let fac = factor_univariate(f).expect("nonzero");
    for (p, k) in &fac.factors {
        let mut next = Vec::with_capacity(divs.len() * (*k as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*k {
                cur = &cur * p;
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    divs
}

fn divisor_count(f: &FqPoly) -> u64 {
    if f.is_constant() {
        return 1;
    }
    factor_univariate(f)
        .expect("nonzero")
        .factors
        .iter()
        .map(|(_, k)| *k as u64 + 1)
        .product()
}

/// Primitive coefficient list in F_{q^s}[t] of a nonzero polynomial over K.
pub fn primitive_coeffs(p: &ParamPoly) -> Vec<FqPoly> {
    let (_, polys) = p.cleared();
    let content = polys.iter().fold(FqPoly::zero(p.field()), |g, c| g.gcd(c));
    polys.iter().map(|c| c.exact_div(&content)).collect()
}

pub fn rational_roots(p: &ParamPoly, budget: u64) -> Result<RootSearch, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let field = p.field().clone();
    let mut coeffs = primitive_coeffs(p);
    let mut roots = Vec::new();
    let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(RatFunc::zero(&field));
        coeffs.drain(..lead_zeros);
    }
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(RootSearch { roots, candidates: 0 });
    }
    let units = field.order() as u64 - 1;
    let needed = divisor_count(&coeffs[0])
        .saturating_mul(divisor_count(&coeffs[d]))
        .saturating_mul(units);
    if needed > budget {
        return Err(RootError::BudgetExceeded { needed, budget });
    }
    let mut candidates = 0;
    let consts: Vec<FqElem> = field.elements().skip(1).collect();
    for u in monic_divisors(&coeffs[0]) {
        for w in monic_divisors(&coeffs[d]) {
            candidates += units;
            if !u.gcd(&w).is_one() {
                continue;
            }
            // B_i = A_i u^i w^{d-i}; a root c·u/w satisfies Σ c^i B_i = 0
            let mut upow = FqPoly::one(&field);
            let mut wpow = vec![FqPoly::one(&field)];
            for i in 1..=d {
                let next = &wpow[i - 1] * &w;
                wpow.push(next);
            }
            let mut terms = Vec::with_capacity(d + 1);
            for (i, a) in coeffs.iter().enumerate() {
                terms.push(&(a * &upow) * &wpow[d - i]);
                upow = &upow * &u;
            }
            for &c in &consts {
                let mut cpow = FqElem::ONE;
                let mut acc = FqPoly::zero(&field);
                for term in &terms {
                    if !term.is_zero() {
                        acc = &acc + &term.scale(cpow);
                    }
                    cpow = field.mul(cpow, c);
                }
                if acc.is_zero() {
                    roots.push(RatFunc::new(u.scale(c), w.clone()));
                }
            }
        }
    }
    roots.sort_by(|a, b| (a.num(), a.den()).cmp(&(b.num(), b.den())));
    roots.dedup();
    Ok(RootSearch { roots, candidates })
}
