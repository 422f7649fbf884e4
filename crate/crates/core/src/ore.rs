//! The twisted polynomial ring R{τ} with τ·a = a^q·τ, and Drinfeld
//! F_q[t]-modules Φ: F_q[t] → K{τ} in the normal form
//! Φ_t = t + a_1τ + … + a_{r−1}τ^{r−1} + τ^r.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{
    rational_roots, Field, FqElem, FqPoly, ParamPoly, RatFunc, RootError, SparsePoly,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("rank must be at least 1")]
    RankZero,
    #[error("the constant coefficient of phi_t must be t")]
    BadConstantTerm,
    #[error("phi_t must be monic in tau; conjugate it first")]
    NotMonic,
    #[error("coefficient {0} of the operator polynomial is not in F_q")]
    NotInBaseField(usize),
    #[error("the zero polynomial has no torsion kernel")]
    ZeroAnnihilator,
    #[error("cannot conjugate by zero")]
    ZeroConjugator,
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// Coefficient rings carrying the q-power Frobenius, over a shared constant
/// field.
pub trait FrobeniusRing:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn field_of(&self) -> &Field;
    fn zero_in(field: &Field) -> Self;
    fn constant_in(field: &Field, c: FqElem) -> Self;
    /// The transcendental t.
    fn t_in(field: &Field) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// x ↦ x^q.
    fn frob(&self) -> Self;
}

impl FrobeniusRing for RatFunc {
    fn field_of(&self) -> &Field {
        self.field()
    }
    fn zero_in(field: &Field) -> Self {
        RatFunc::zero(field)
    }
    fn constant_in(field: &Field, c: FqElem) -> Self {
        RatFunc::constant(field, c)
    }
    fn t_in(field: &Field) -> Self {
        RatFunc::t(field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn frob(&self) -> Self {
        self.frobenius_q()
    }
}

impl FrobeniusRing for ParamPoly {
    fn field_of(&self) -> &Field {
        self.field()
    }
    fn zero_in(field: &Field) -> Self {
        ParamPoly::zero(field)
    }
    fn constant_in(field: &Field, c: FqElem) -> Self {
        ParamPoly::from(RatFunc::constant(field, c))
    }
    fn t_in(field: &Field) -> Self {
        ParamPoly::from(RatFunc::t(field))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn frob(&self) -> Self {
        self.frobenius_q()
    }
}

impl FrobeniusRing for SparsePoly {
    fn field_of(&self) -> &Field {
        self.field()
    }
    fn zero_in(field: &Field) -> Self {
        SparsePoly::zero(field)
    }
    fn constant_in(field: &Field, c: FqElem) -> Self {
        SparsePoly::constant(field, c)
    }
    fn t_in(field: &Field) -> Self {
        SparsePoly::monomial(field, FqElem::ONE, 1)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn frob(&self) -> Self {
        self.frobenius_q()
    }
}

/// Σ c_i τ^i, lowest power first, no trailing zero coefficients.
#[derive(Clone, PartialEq)]
pub struct OrePoly<R: FrobeniusRing> {
    field: Field,
    coeffs: Vec<R>,
}

impl<R: FrobeniusRing> fmt::Debug for OrePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// `t+z*tau+tau^2`; coefficients with a sum or quotient are parenthesized.
impl<R: FrobeniusRing + fmt::Display> fmt::Display for OrePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            let s = c.to_string();
            let tau = match i {
                0 => String::new(),
                1 => "tau".into(),
                _ => format!("tau^{i}"),
            };
            terms.push(match (i, s.as_str()) {
                (0, _) => s,
                (_, "1") => tau,
                _ if s.contains(['+', '/']) => format!("({s})*{tau}"),
                _ => format!("{s}*{tau}"),
            });
        }
        f.write_str(&terms.join("+"))
    }
}

impl<R: FrobeniusRing> OrePoly<R> {
    pub fn new(field: &Field, mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        OrePoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        OrePoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        OrePoly::constant(R::constant_in(field, FqElem::ONE))
    }

    /// The degree-0 element c.
    pub fn constant(c: R) -> Self {
        let field = c.field_of().clone();
        OrePoly::new(&field, vec![c])
    }

    /// c·τ^k.
    pub fn monomial(c: R, k: usize) -> Self {
        let field = c.field_of().clone();
        let mut coeffs = vec![R::zero_in(&field); k];
        coeffs.push(c);
        OrePoly::new(&field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| R::zero_in(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in τ; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(|| R::zero_in(&self.field))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(R, R) -> R) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        OrePoly::new(&self.field, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        OrePoly::new(&self.field, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    /// The Ore product: (Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i b_j^{q^i} τ^{i+j}.
    pub fn mul(&self, other: &Self) -> Self {
        ore_mul(self, other)
    }

    /// Evaluate the additive polynomial Σ c_i x^{q^i} at x.
    pub fn act(&self, x: &R) -> R {
        let mut acc = R::zero_in(&self.field);
        let mut power = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.frob();
            }
            if !c.is_zero_elem() {
                acc = acc + c.clone() * power.clone();
            }
        }
        acc
    }
}

/// Multiplication in the twisted polynomial ring.
pub fn ore_mul<R: FrobeniusRing>(a: &OrePoly<R>, b: &OrePoly<R>) -> OrePoly<R> {
    let field = a.field();
    if a.is_zero() || b.is_zero() {
        return OrePoly::zero(field);
    }
    let mut out = vec![R::zero_in(field); a.coeffs.len() + b.coeffs.len() - 1];
    // twisted[j] holds b_j^{q^i} for the current row i
    let mut twisted = b.coeffs.clone();
    for (i, ai) in a.coeffs.iter().enumerate() {
        if i > 0 {
            for c in twisted.iter_mut() {
                *c = c.frob();
            }
        }
        if ai.is_zero_elem() {
            continue;
        }
        for (j, bj) in twisted.iter().enumerate() {
            if !bj.is_zero_elem() {
                let prev = std::mem::replace(&mut out[i + j], R::zero_in(field));
                out[i + j] = prev + ai.clone() * bj.clone();
            }
        }
    }
    OrePoly::new(field, out)
}

/// A Drinfeld module of rank r in normal form, given by
/// Φ_t = t + a_1τ + … + a_{r−1}τ^{r−1} + τ^r.
#[derive(Clone, PartialEq, Debug)]
pub struct DrinfeldModule<R: FrobeniusRing = RatFunc> {
    phi_t: OrePoly<R>,
}

impl<R: FrobeniusRing> DrinfeldModule<R> {
    /// Build from the intermediate coefficients a_1..a_{r−1}; the rank is
    /// `intermediate.len() + 1`.
    pub fn new(field: &Field, intermediate: Vec<R>) -> Self {
        let mut coeffs = Vec::with_capacity(intermediate.len() + 2);
        coeffs.push(R::t_in(field));
        coeffs.extend(intermediate);
        coeffs.push(R::constant_in(field, FqElem::ONE));
        DrinfeldModule { phi_t: OrePoly::new(field, coeffs) }
    }

    /// Validate an explicit Φ_t.
    pub fn from_phi_t(phi_t: OrePoly<R>) -> Result<Self, OreError> {
        let field = phi_t.field().clone();
        let r = phi_t.degree().ok_or(OreError::RankZero)?;
        if r == 0 {
            return Err(OreError::RankZero);
        }
        if phi_t.coeff(0) != R::t_in(&field) {
            return Err(OreError::BadConstantTerm);
        }
        if phi_t.leading_coeff() != R::constant_in(&field, FqElem::ONE) {
            return Err(OreError::NotMonic);
        }
        Ok(DrinfeldModule { phi_t })
    }

    pub fn field(&self) -> &Field {
        self.phi_t.field()
    }

    pub fn rank(&self) -> usize {
        self.phi_t.degree().unwrap_or(0)
    }

    pub fn phi_t(&self) -> &OrePoly<R> {
        &self.phi_t
    }

    /// All Ore coefficients t, a_1, …, a_{r−1}, 1.
    pub fn coefficients(&self) -> &[R] {
        self.phi_t.coeffs()
    }

    /// Φ_f for f ∈ F_q[t], by Horner's rule in K{τ}.
    pub fn phi_image(&self, f: &FqPoly) -> Result<OrePoly<R>, OreError> {
        let field = self.field();
        let bad = f.coeffs().iter().position(|&c| !field.in_base_field(c));
        if let Some(i) = bad {
            return Err(OreError::NotInBaseField(i));
        }
        let mut acc = OrePoly::zero(field);
        for &c in f.coeffs().iter().rev() {
            acc = ore_mul(&acc, &self.phi_t);
            if !c.is_zero() {
                acc = acc.add(&OrePoly::constant(R::constant_in(field, c)));
            }
        }
        Ok(acc)
    }

    /// Φ_t(x).
    pub fn act_t(&self, x: &R) -> R {
        self.phi_t.act(x)
    }

    /// Φ_{t^n}(x) by n applications of Φ_t.
    pub fn act_t_pow(&self, x: &R, n: usize) -> R {
        (0..n).fold(x.clone(), |y, _| self.phi_t.act(&y))
    }
}

impl DrinfeldModule<RatFunc> {
    /// The kernel of Φ_f as an ordinary polynomial Σ c_i x^{q^i} ∈ K[x].
    pub fn kernel_polynomial(&self, f: &FqPoly) -> Result<ParamPoly, OreError> {
        if f.is_zero() {
            return Err(OreError::ZeroAnnihilator);
        }
        let image = self.phi_image(f)?;
        let field = self.field();
        let q = field.q() as usize;
        let top = q.pow(image.degree().unwrap_or(0) as u32);
        let mut coeffs = vec![RatFunc::zero(field); top + 1];
        let mut k = 1;
        for c in image.coeffs() {
            coeffs[k] = c.clone();
            k *= q;
        }
        Ok(ParamPoly::new(field, coeffs))
    }

    /// The points of Φ[f] lying in K.
    pub fn torsion_roots_in_k(&self, f: &FqPoly, budget: u64) -> Result<Vec<RatFunc>, OreError> {
        let kernel = self.kernel_polynomial(f)?;
        Ok(rational_roots(&kernel, budget)?.roots)
    }
}

/// Ψ_t = γ^{−1}Φ_t(γx): coefficient c_i becomes γ^{q^i − 1}·c_i.
pub fn conjugate(phi_t: &OrePoly<RatFunc>, gamma: &RatFunc) -> Result<OrePoly<RatFunc>, OreError> {
    if gamma.is_zero() {
        return Err(OreError::ZeroConjugator);
    }
    let field = phi_t.field();
    let inv = gamma.inv();
    let mut twist = gamma.clone();
    let mut coeffs = Vec::with_capacity(phi_t.coeffs().len());
    for (i, c) in phi_t.coeffs().iter().enumerate() {
        if i > 0 {
            twist = twist.frobenius_q();
        }
        coeffs.push(&(c * &twist) * &inv);
    }
    Ok(OrePoly::new(field, coeffs))
}

/// Find γ ∈ K with γ^{q^r − 1} = 1/c_r and return the conjugated monic
/// module, if such γ exists in K.
pub fn normalize(
    phi_t: &OrePoly<RatFunc>,
    budget: u64,
) -> Result<Option<(DrinfeldModule, RatFunc)>, OreError> {
    let field = phi_t.field();
    let r = phi_t.degree().ok_or(OreError::RankZero)?;
    if r == 0 {
        return Err(OreError::RankZero);
    }
    let lead = phi_t.leading_coeff();
    let exp = (field.q() as usize).pow(r as u32) - 1;
    let mut coeffs = vec![RatFunc::zero(field); exp + 1];
    coeffs[0] = -&lead.inv();
    coeffs[exp] = RatFunc::one(field);
    let roots = rational_roots(&ParamPoly::new(field, coeffs), budget)?.roots;
    let Some(gamma) = roots.into_iter().next() else { return Ok(None) };
    let psi = conjugate(phi_t, &gamma)?;
    Ok(Some((DrinfeldModule::from_phi_t(psi)?, gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn commutation_rule() {
        let f = f2();
        let t = RatFunc::t(&f);
        let a = &t + &RatFunc::one(&f);
        let b = t.pow(2);
        let prod = ore_mul(&OrePoly::monomial(a.clone(), 1), &OrePoly::monomial(b.clone(), 1));
        assert_eq!(prod, OrePoly::monomial(&a * &b.pow(2), 2));
        let x = OrePoly::new(&f, vec![t.clone(), a.clone(), b.clone()]);
        assert_eq!(ore_mul(&x, &OrePoly::one(&f)), x);
        assert_eq!(ore_mul(&OrePoly::one(&f), &x), x);
    }

    #[test]
    fn square_of_family_operator() {
        // (t + zτ + τ²)² over F_2(t)[z]
        let f = f2();
        let t = ParamPoly::from(RatFunc::t(&f));
        let z = ParamPoly::z(&f);
        let one = ParamPoly::one(&f);
        let phi = OrePoly::new(&f, vec![t.clone(), z.clone(), one.clone()]);
        let sq = ore_mul(&phi, &phi);
        let t2 = &t * &t;
        let t4 = &t2 * &t2;
        let z3 = &(&z * &z) * &z;
        let z4 = &z3 * &z;
        let expected = vec![
            t2.clone(),
            &(&t * &z) + &(&t2 * &z),
            &(&t + &z3) + &t4,
            &z + &z4,
            one,
        ];
        assert_eq!(sq.coeffs(), expected.as_slice());
        assert_eq!(phi.to_string(), "t+z*tau+tau^2");
        assert_eq!(sq.to_string(), "t^2+((t^2+t)*z)*tau+(z^3+t^4+t)*tau^2+(z^4+z)*tau^3+tau^4");
    }

    #[test]
    fn phi_image_basics() {
        let f = f2();
        let phi = DrinfeldModule::new(&f, vec![RatFunc::t(&f) + RatFunc::one(&f)]);
        let tpoly = FqPoly::t(&f);
        assert_eq!(phi.phi_image(&tpoly).unwrap(), *phi.phi_t());
        assert_eq!(
            phi.phi_image(&FqPoly::one(&f)).unwrap(),
            OrePoly::one(&f)
        );
        let t2 = &tpoly * &tpoly;
        assert_eq!(phi.phi_image(&t2).unwrap(), ore_mul(phi.phi_t(), phi.phi_t()));
        let f4 = Field::new(2, 1, 2, None).unwrap();
        let phi4 = DrinfeldModule::<RatFunc>::new(&f4, vec![RatFunc::zero(&f4)]);
        let bad = FqPoly::constant(&f4, f4.generator_u());
        assert_eq!(phi4.phi_image(&bad), Err(OreError::NotInBaseField(0)));
    }

    #[test]
    fn action_and_kernel() {
        let f = f2();
        let t = RatFunc::t(&f);
        let phi = DrinfeldModule::new(&f, vec![RatFunc::zero(&f)]);
        assert!(phi.act_t(&RatFunc::zero(&f)).is_zero());
        assert_eq!(phi.act_t(&t), &t.pow(2) + &t.pow(4));
        let ker = phi.kernel_polynomial(&FqPoly::t(&f)).unwrap();
        assert_eq!(ker.degree(), Some(4));
        assert_eq!(ker.coeff(1), t);
        assert!(ker.coeff(4).is_one());
        let t2 = &FqPoly::t(&f) * &FqPoly::t(&f);
        assert_eq!(phi.kernel_polynomial(&t2).unwrap().degree(), Some(16));
        assert_eq!(
            phi.torsion_roots_in_k(&FqPoly::t(&f), 10_000).unwrap(),
            vec![RatFunc::zero(&f)]
        );
        assert_eq!(phi.kernel_polynomial(&FqPoly::zero(&f)), Err(OreError::ZeroAnnihilator));
    }

    #[test]
    fn conjugation() {
        let f = f2();
        let t = RatFunc::t(&f);
        let phi = OrePoly::new(&f, vec![t.clone(), RatFunc::one(&f)]);
        assert_eq!(conjugate(&phi, &RatFunc::one(&f)).unwrap(), phi);
        let psi = conjugate(&phi, &t).unwrap();
        assert_eq!(psi.coeffs(), &[t.clone(), t.clone()]);
        assert_eq!(conjugate(&phi, &RatFunc::zero(&f)), Err(OreError::ZeroConjugator));
        // psi = t + t·τ has leading coefficient t; γ with γ^{q-1} = 1/t is 1/t
        let (monic, gamma) = normalize(&psi, 10_000).unwrap().unwrap();
        assert_eq!(gamma, t.inv());
        assert_eq!(*monic.phi_t(), phi);
    }
}
