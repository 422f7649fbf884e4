//! Torsion-parameter polynomials Φ^z_f(a(z)) ∈ K[z], comparison of their
//! root loci, F_q-dependence, and the λ₀ case analysis for the family
//! Φ_t = t + zτ + τ^r.
//!
//! Resultants and gcds in K[z] are computed on cleared, primitive
//! representatives in F_{q^s}[t][z] with the subresultant remainder
//! sequence, so every division along the way is exact in F_{q^s}[t].

use std::fmt;

use num_traits::Zero;

use crate::family::FamilyModule;
use crate::field::{
    factor_univariate, int, log_abs, log_abs_int, Field, FqElem, FqPoly, ParamPoly, Place,
    RatFunc, Rational,
};
use crate::ore::DrinfeldModule;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("the zero polynomial is not allowed here")]
    ZeroInput,
    #[error("annihilator coefficient {0} is not in F_q")]
    NotInBaseField(usize),
    #[error("gamma lies in F_q, which is the dependent case")]
    GammaInBaseField,
    #[error("the point a must be nonzero")]
    ZeroPoint,
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
}

/// Polynomials in z with coefficients in F_{q^s}[t], lowest degree first.
type RPoly = Vec<FqPoly>;

fn trim(p: &mut RPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn deg(p: &RPoly) -> usize {
    p.len() - 1
}

fn content(p: &RPoly) -> FqPoly {
    let field = p[0].field();
    p.iter().fold(FqPoly::zero(field), |g, c| g.gcd(c))
}

fn div_exact(p: &RPoly, d: &FqPoly) -> RPoly {
    p.iter().map(|c| c.exact_div(d)).collect()
}

/// Pseudo-remainder: ℓ(B)^{deg A − deg B + 1}·A mod B.
fn prem(a: &RPoly, b: &RPoly) -> RPoly {
    let db = deg(b);
    let lb = &b[db];
    let mut r = a.clone();
    let mut e = a.len() - b.len() + 1;
    while !r.is_empty() && r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    let scale = lb.pow(e as u64);
    r.iter().map(|c| c * &scale).collect()
}

/// Res_z(A, B) over F_{q^s}[t].
fn resultant_r(a: &RPoly, b: &RPoly) -> FqPoly {
    let field = a[0].field().clone();
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = FqElem::ONE;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = field.neg(sign);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        return b[0].pow(deg(&a) as u64).scale(sign);
    }
    let (ca, cb) = (content(&a), content(&b));
    let tfac = &ca.pow(deg(&b) as u64) * &cb.pow(deg(&a) as u64);
    a = div_exact(&a, &ca);
    b = div_exact(&b, &cb);
    let mut g = FqPoly::one(&field);
    let mut h = FqPoly::one(&field);
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = field.neg(sign);
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return FqPoly::zero(&field);
        }
        let d = &g * &h.pow(delta as u64);
        b = div_exact(&r, &d);
        g = a.last().unwrap().clone();
        // h ← g^δ / h^{δ−1}
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u64).exact_div(&h.pow(delta as u64 - 1))
        };
        if deg(&b) == 0 {
            let da = deg(&a) as u64;
            let hh = b[0].pow(da).exact_div(&h.pow(da - 1));
            return (&tfac * &hh).scale(sign);
        }
    }
}

/// Primitive gcd over F_{q^s}[t], up to a unit.
fn gcd_r(a: &RPoly, b: &RPoly) -> RPoly {
    let field = a[0].field().clone();
    let (mut a, mut b) = (a.clone(), b.clone());
    if deg(&b) > deg(&a) {
        std::mem::swap(&mut a, &mut b);
    }
    let (ca, cb) = (content(&a), content(&b));
    let d = ca.gcd(&cb);
    a = div_exact(&a, &ca);
    b = div_exact(&b, &cb);
    let mut g = FqPoly::one(&field);
    let mut h = FqPoly::one(&field);
    loop {
        let delta = deg(&a) - deg(&b);
        let r = prem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            b = vec![FqPoly::one(&field)];
            break;
        }
        a = b;
        b = div_exact(&r, &(&g * &h.pow(delta as u64)));
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u64).exact_div(&h.pow(delta as u64 - 1))
        };
    }
    let cb = content(&b);
    b.iter().map(|c| &c.exact_div(&cb) * &d).collect()
}

fn cleared_nonzero(p: &ParamPoly) -> Result<(FqPoly, RPoly), ParamError> {
    if p.is_zero() {
        return Err(ParamError::ZeroInput);
    }
    Ok(p.cleared())
}

/// Res_z(P, Q) ∈ K; zero iff P and Q share a root in an algebraic closure.
pub fn common_param_resultant(p: &ParamPoly, q: &ParamPoly) -> Result<RatFunc, ParamError> {
    let (lp, pr) = cleared_nonzero(p)?;
    let (lq, qr) = cleared_nonzero(q)?;
    let res = resultant_r(&pr, &qr);
    // Res(L_P·P, L_Q·Q) = L_P^{deg Q}·L_Q^{deg P}·Res(P, Q)
    let den = &lp.pow(deg(&qr) as u64) * &lq.pow(deg(&pr) as u64);
    Ok(RatFunc::new(res, den))
}

/// Monic gcd in K[z].
pub fn common_param_gcd(p: &ParamPoly, q: &ParamPoly) -> Result<ParamPoly, ParamError> {
    let (_, pr) = cleared_nonzero(p)?;
    let (_, qr) = cleared_nonzero(q)?;
    let g = gcd_r(&pr, &qr);
    let coeffs = g.into_iter().map(RatFunc::from).collect();
    Ok(ParamPoly::new(p.field(), coeffs).monic())
}

/// Φ^z_f(a(z)) = Σ f_j f_{a,j}(z).
pub fn torsion_param_poly(
    family: &FamilyModule,
    a: &ParamPoly,
    f: &FqPoly,
) -> Result<ParamPoly, ParamError> {
    let field = family.field();
    if f.is_zero() {
        return Err(ParamError::ZeroInput);
    }
    if let Some(i) = f.coeffs().iter().position(|&c| !field.in_base_field(c)) {
        return Err(ParamError::NotInBaseField(i));
    }
    let orbit = family.orbit(a, f.degree().unwrap_or(0));
    let mut acc = ParamPoly::zero(field);
    for (y, &c) in orbit.iter().zip(f.coeffs()) {
        if !c.is_zero() {
            acc = &acc + &y.scale_const(c);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dependence {
    /// γ ∈ F_q with b = γ·a, if one exists.
    pub gamma: Option<FqElem>,
    /// C_a^{deg b}/C_b^{deg a} when both points are nonzero.
    pub unit: Option<RatFunc>,
    /// Whether the unit is a constant of F_{q^s}.
    pub unit_is_constant: bool,
}

pub fn dependence_check(a: &ParamPoly, b: &ParamPoly) -> Dependence {
    let field = a.field();
    let gamma = match a.coeffs().iter().position(|c| !c.is_zero()) {
        None => b.is_zero().then_some(FqElem::ONE),
        Some(i) => (&b.coeff(i) / &a.coeff(i))
            .as_constant()
            .filter(|&g| field.in_base_field(g) && a.scale_const(g) == *b),
    };
    let unit = match (a.degree(), b.degree()) {
        (Some(da), Some(db)) => {
            let num = a.leading_coeff().pow(db as i64);
            let den = b.leading_coeff().pow(da as i64);
            Some(&num / &den)
        }
        _ => None,
    };
    let unit_is_constant = unit.as_ref().is_some_and(|u| u.as_constant().is_some());
    Dependence { gamma, unit, unit_is_constant }
}

/// λ₀ = (−t·a − a^{q^r})/a^q, the parameter making a a t-torsion point of
/// t + λτ + τ^r.
pub fn lambda0(a: &RatFunc, r: usize) -> Result<RatFunc, ParamError> {
    if a.is_zero() {
        return Err(ParamError::ZeroPoint);
    }
    let t = RatFunc::t(a.field());
    let top = a.frobenius_q_iter(r as u32);
    let num = -&(&(&t * a) + &top);
    Ok(&num / &a.frobenius_q())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// a is a constant.
    Case1,
    /// |a|_v > 1 and γ^{q^r} ≠ γ^q.
    Case2a,
    /// |a|_v > 1 and γ^{q^r} = γ^q.
    Case2b,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::Case1 => "Case1",
            Case::Case2a => "Case2a",
            Case::Case2b => "Case2b",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseReport {
    pub case: Case,
    pub place: Place,
    pub lambda0: RatFunc,
    pub b: RatFunc,
    /// 1 for Φ^{λ₀}_t(b), 2 for Φ^{λ₀}_{t²}(b).
    pub step: usize,
    /// log_q|Φ^{λ₀}_{t^step}(b)|_v.
    pub log_value: Rational,
    /// max(0, log|t|_v/(q^r − 1), log|λ₀|_v/(q^r − q)).
    pub threshold: Rational,
    /// (q^r − q)·log|a|_v, the lower bound expected in the two-step case.
    pub lower_bound: Option<Rational>,
    pub non_torsion: bool,
}

/// The place with |a|_v > 1 that comes first in place order.
fn first_pole(a: &RatFunc) -> Place {
    let num_deg = a.num().degree().unwrap_or(0);
    let den_deg = a.den().degree().unwrap_or(0);
    if num_deg > den_deg {
        return Place::Infinity;
    }
    let fac = factor_univariate(a.den()).expect("nonzero denominator");
    let p = fac.factors.into_iter().map(|(p, _)| p).min().expect("a is not a polynomial");
    Place::finite(p)
}

/// Run the case analysis for b = γ·a under Φ^{λ₀} with Φ_t = t + λτ + τ^r.
pub fn case_analysis_verify(
    field: &Field,
    r: usize,
    a: &RatFunc,
    gamma: FqElem,
) -> Result<CaseReport, ParamError> {
    if r < 2 {
        return Err(ParamError::RankTooSmall(r));
    }
    if a.is_zero() {
        return Err(ParamError::ZeroPoint);
    }
    if field.in_base_field(gamma) {
        return Err(ParamError::GammaInBaseField);
    }
    let q = field.q() as i64;
    let qr = q.pow(r as u32);
    let lam = lambda0(a, r)?;
    let mut coeffs = vec![RatFunc::zero(field); r - 1];
    coeffs[0] = lam.clone();
    let phi = DrinfeldModule::new(field, coeffs);
    let b = a.scale(gamma);

    let mut gq = gamma;
    for _ in 0..r {
        gq = field.frob_q(gq);
    }
    let (case, place) = if a.as_constant().is_some() {
        (Case::Case1, Place::Infinity)
    } else if gq != field.frob_q(gamma) {
        (Case::Case2a, first_pole(a))
    } else {
        (Case::Case2b, first_pole(a))
    };
    let two_step = case == Case::Case2b && !place.is_infinite();
    let step = if two_step { 2 } else { 1 };
    let value = phi.act_t_pow(&b, step);
    let log_value = log_abs(&value, &place).finite().cloned().expect("escaping value is nonzero");

    let t = RatFunc::t(field);
    let mut threshold = Rational::zero();
    let log_t = int(log_abs_int(&t, &place).expect("t is nonzero"));
    threshold = threshold.max(log_t / int(qr - 1));
    if let Some(l) = log_abs_int(&lam, &place) {
        threshold = threshold.max(int(l) / int(qr - q));
    }
    let lower_bound = two_step.then(|| int(qr - q) * int(log_abs_int(a, &place).unwrap()));
    let non_torsion = log_value > threshold
        && lower_bound.as_ref().is_none_or(|lb| log_value >= *lb);
    Ok(CaseReport { case, place, lambda0: lam, b, step, log_value, threshold, lower_bound, non_torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    /// Determinant of the Sylvester matrix by elimination over K.
    fn sylvester(p: &ParamPoly, q: &ParamPoly) -> RatFunc {
        let f = p.field();
        let (m, n) = (p.degree().unwrap(), q.degree().unwrap());
        let size = m + n;
        let mut rows: Vec<Vec<RatFunc>> = Vec::new();
        for i in 0..n {
            let mut row = vec![RatFunc::zero(f); size];
            for j in 0..=m {
                row[i + j] = p.coeff(m - j);
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![RatFunc::zero(f); size];
            for j in 0..=n {
                row[i + j] = q.coeff(n - j);
            }
            rows.push(row);
        }
        let mut det = RatFunc::one(f);
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
                return RatFunc::zero(f);
            };
            if piv != col {
                rows.swap(piv, col);
                det = -&det;
            }
            let pv = rows[col][col].clone();
            det = &det * &pv;
            for r in col + 1..size {
                if rows[r][col].is_zero() {
                    continue;
                }
                let k = &rows[r][col] / &pv;
                for c in col..size {
                    let sub = &k * &rows[col][c];
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
        det
    }

    fn pp(f: &Field, cs: Vec<RatFunc>) -> ParamPoly {
        ParamPoly::new(f, cs)
    }

    fn rf(f: &Field, n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(FqPoly::from_ints(f, n), FqPoly::from_ints(f, d))
    }

    #[test]
    fn resultant_matches_sylvester() {
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            let a = pp(&f, vec![rf(&f, &[1, 1], &[1]), rf(&f, &[0, 1], &[1, 1]), rf(&f, &[2], &[1]), rf(&f, &[1, 0, 1], &[0, 1])]);
            let b = pp(&f, vec![rf(&f, &[0, 0, 1], &[1]), rf(&f, &[1], &[1, 1]), rf(&f, &[1, 1, 1], &[1])]);
            let c = pp(&f, vec![rf(&f, &[1], &[0, 1]), rf(&f, &[1], &[1])]);
            for (x, y) in [(&a, &b), (&b, &a), (&a, &c), (&c, &b), (&a, &a)] {
                assert_eq!(common_param_resultant(x, y).unwrap(), sylvester(x, y), "p={p}");
            }
            let ab = &a * &b;
            let ac = &a * &c;
            assert!(common_param_resultant(&ab, &ac).unwrap().is_zero());
            assert_eq!(common_param_gcd(&ab, &ac).unwrap(), a.monic());
        }
    }

    #[test]
    fn spec_instances() {
        let f = Field::prime(2).unwrap();
        let fam = FamilyModule::standard(&f, 2).unwrap();
        let t = FqPoly::t(&f);
        let one = ParamPoly::one(&f);
        let pa = torsion_param_poly(&fam, &one, &t).unwrap();
        assert_eq!(pa.to_string(), "z+t+1");
        let tz = ParamPoly::from(RatFunc::t(&f));
        let pb = torsion_param_poly(&fam, &tz, &t).unwrap();
        assert_eq!(pb.to_string(), "t^2*z+t^4+t^2");
        let res = common_param_resultant(&pa, &pb).unwrap();
        assert_eq!(res.to_string(), "t^4+t^3");
        assert!(common_param_gcd(&pa, &pb).unwrap().as_constant().is_some());
        assert!(common_param_resultant(&pa, &pa).unwrap().is_zero());
        assert!(torsion_param_poly(&fam, &ParamPoly::zero(&f), &t).unwrap().is_zero());
        assert_eq!(common_param_resultant(&pa, &ParamPoly::zero(&f)), Err(ParamError::ZeroInput));
    }

    #[test]
    fn scaled_points_over_f3() {
        let f = Field::prime(3).unwrap();
        let fam = FamilyModule::standard(&f, 2).unwrap();
        let t = FqPoly::t(&f);
        let p = torsion_param_poly(&fam, &ParamPoly::one(&f), &t).unwrap();
        let two = ParamPoly::from(RatFunc::constant(&f, f.from_int(2)));
        let q = torsion_param_poly(&fam, &two, &t).unwrap();
        assert_eq!(q, p.scale_const(f.from_int(2)));
        assert_eq!(common_param_gcd(&p, &q).unwrap(), p.monic());
        let d = dependence_check(&ParamPoly::one(&f), &two);
        assert_eq!(d.gamma, Some(f.from_int(2)));
    }

    #[test]
    fn dependence_reports() {
        let f = Field::prime(2).unwrap();
        let one = ParamPoly::one(&f);
        let t = ParamPoly::from(RatFunc::t(&f));
        assert_eq!(dependence_check(&t, &t).gamma, Some(FqElem::ONE));
        let d = dependence_check(&one, &t);
        assert_eq!(d.gamma, None);
        assert_eq!(d.unit, Some(RatFunc::one(&f)));
        let zero = ParamPoly::zero(&f);
        assert!(dependence_check(&zero, &zero).gamma.is_some());
        assert!(dependence_check(&zero, &one).gamma.is_none());
    }

    #[test]
    fn lambda0_examples() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        let one = RatFunc::one(&f);
        assert_eq!(lambda0(&t, 2).unwrap(), &one + &t.pow(2));
        assert_eq!(lambda0(&one, 2).unwrap(), &t + &one);
        for a in [t.clone(), one.clone(), t.inv()] {
            let lam = lambda0(&a, 2).unwrap();
            let phi = DrinfeldModule::new(&f, vec![lam]);
            assert!(phi.act_t(&a).is_zero());
        }
        assert_eq!(lambda0(&RatFunc::zero(&f), 2), Err(ParamError::ZeroPoint));
    }

    #[test]
    fn case_reports() {
        let f = Field::new(2, 1, 2, None).unwrap();
        let u = f.generator_u();
        let t = RatFunc::t(&f);
        let rep = case_analysis_verify(&f, 2, &t, u).unwrap();
        assert_eq!((rep.case, rep.place.clone()), (Case::Case2a, Place::Infinity));
        assert_eq!((rep.log_value.clone(), rep.threshold.clone()), (int(4), int(1)));
        assert!(rep.non_torsion);
        let rep = case_analysis_verify(&f, 2, &RatFunc::one(&f), u).unwrap();
        assert_eq!(rep.case, Case::Case1);
        assert_eq!((rep.log_value.clone(), rep.threshold.clone()), (int(1), rat(1, 2)));
        assert!(rep.non_torsion);
        let rep = case_analysis_verify(&f, 3, &t.inv(), u).unwrap();
        assert_eq!(rep.case, Case::Case2b);
        assert_eq!(rep.place, Place::finite(FqPoly::t(&f)));
        assert_eq!(rep.step, 2);
        assert_eq!(rep.lambda0, &t.pow(2) + &t.pow(-6));
        assert_eq!(rep.threshold, int(1));
        assert_eq!(rep.lower_bound, Some(int(6)));
        assert!(rep.log_value >= int(6) && rep.non_torsion);
        assert_eq!(
            case_analysis_verify(&f, 2, &t, FqElem::ONE),
            Err(ParamError::GammaInBaseField)
        );
    }
}
