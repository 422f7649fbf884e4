//! Green's functions of the v-adic Mandelbrot sets M_{c,v} at classical
//! parameters, the escape bound M, capacities and the parameter height.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::family::FamilyModule;
use crate::field::{
    int, log_abs_int, pole_places, render_rational, support_places, FqElem, FqPoly, ParamPoly,
    Place, RatFunc, Rational,
};
use crate::heights::{canonical_height, growth_factor, local_orbit, HeightReport, HeightValue, LocalOutcome};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CapacityError {
    #[error("the marked point fails the degree hypothesis")]
    Hypothesis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenValue {
    pub value: Rational,
    /// The estimates at n and n + 1 agree.
    pub stabilized: bool,
}

fn degree_of(family: &FamilyModule, c: &ParamPoly) -> Result<usize, CapacityError> {
    if !family.hypothesis_check(c).holds {
        return Err(CapacityError::Hypothesis);
    }
    Ok(c.degree().expect("hypothesis implies c != 0"))
}

/// max(0, log|f_{c,k}(λ)|_v)/(m·q^{rk}) for k = 0..=n.
pub fn green_values(
    family: &FamilyModule,
    c: &ParamPoly,
    v: &Place,
    lambda: &RatFunc,
    n: usize,
) -> Result<Vec<Rational>, CapacityError> {
    let m = degree_of(family, c)?;
    let q = family.field().q();
    let r = family.rank();
    let orbit = family.orbit(c, n);
    Ok(orbit
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let l = log_abs_int(&f.evaluate(lambda), v).unwrap_or(0).max(0);
            int(l) / (int(m as i64) * growth_factor(q, r, k))
        })
        .collect())
}

pub fn green_estimate(
    family: &FamilyModule,
    c: &ParamPoly,
    v: &Place,
    lambda: &RatFunc,
    n: usize,
) -> Result<GreenValue, CapacityError> {
    let vals = green_values(family, c, v, lambda, n + 1)?;
    Ok(GreenValue { stabilized: vals[n] == vals[n + 1], value: vals[n].clone() })
}

/// Least log_q M such that every λ with log|λ|_v > log M escapes at n = 0.
pub fn escape_bound_m(family: &FamilyModule, c: &ParamPoly, v: &Place) -> Result<Rational, CapacityError> {
    let m = degree_of(family, c)? as i64;
    let q = family.field().q() as i64;
    let r = family.rank() as u32;
    let qr = q.pow(r);
    let lg = |x: &RatFunc| int(log_abs_int(x, v).expect("nonzero"));
    let log_cm = lg(&c.leading_coeff());
    let mut best = Rational::zero();
    let mut raise = |x: Rational| {
        if x > best {
            best = x;
        }
    };
    // leading terms dominate: |P(λ)| = |lc P|·|λ|^{deg P}
    for p in family.g().iter().chain(std::iter::once(c)) {
        let Some(d) = p.degree() else { continue };
        let ld = lg(&p.leading_coeff());
        for (j, pj) in p.coeffs()[..d].iter().enumerate() {
            if !pj.is_zero() {
                raise((lg(pj) - &ld) / int((d - j) as i64));
            }
        }
    }
    // |c(λ)| > 1
    raise(-log_cm.clone() / int(m));
    // |c(λ)|^{q^r} > |g_i(λ)|·|c(λ)|^{q^i}, with g_0 = t
    for (i, g) in family.module().coefficients()[..r as usize].iter().enumerate() {
        let Some(d) = g.degree() else { continue };
        let gap = qr - q.pow(i as u32);
        let num = lg(&g.leading_coeff()) - int(gap) * &log_cm;
        raise(num / int(m * gap - d as i64));
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out(usize),
    /// Still bounded after the budget; G_{c,v}(λ) ≤ bound.
    Unknown(Rational),
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::In => f.write_str("in"),
            Membership::Out(n) => write!(f, "out({n})"),
            Membership::Unknown(b) => write!(f, "unknown(<={})", render_rational(b)),
        }
    }
}

pub fn membership(
    family: &FamilyModule,
    c: &ParamPoly,
    v: &Place,
    lambda: &RatFunc,
    budget: usize,
) -> Result<Membership, CapacityError> {
    let m = degree_of(family, c)?;
    let phi = family.specialize(lambda);
    let orbit = local_orbit(&phi, v, &c.evaluate(lambda), budget);
    Ok(match orbit.outcome {
        LocalOutcome::Escaped { step, .. } => Membership::Out(step),
        LocalOutcome::Integral { .. } | LocalOutcome::Cycle { .. } | LocalOutcome::Torsion => {
            Membership::In
        }
        LocalOutcome::Exhausted { bound, .. } => Membership::Unknown(bound / int(m as i64)),
    })
}

/// A parameter with log|λ|_v just above `bound`: t^k at ∞, P^{−j} at P.
pub fn sample_beyond(v: &Place, bound: &Rational, field: &crate::field::Field) -> RatFunc {
    let need: i64 = (bound.floor().to_integer() + 1i32).try_into().expect("bound fits in i64");
    let need = need.max(1);
    match v {
        Place::Infinity => RatFunc::from(FqPoly::monomial(field, FqElem::ONE, need as usize)),
        Place::Finite(p) => {
            let d = p.degree().unwrap() as i64;
            let j = (need + d - 1) / d;
            RatFunc::new(FqPoly::one(field), p.pow(j as u64))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityReport {
    /// log_q γ(M_{c,v}) = −log|C_m|_v/m.
    pub capacity_log: Rational,
    pub log_m: Rational,
    pub sample: RatFunc,
    pub green: GreenValue,
    /// log|λ|_v + log|C_m|_v/m.
    pub expected: Rational,
}

impl CapacityReport {
    pub fn confirmed(&self) -> bool {
        self.green.stabilized && self.green.value == self.expected
    }
}

pub fn capacity_log(family: &FamilyModule, c: &ParamPoly, v: &Place) -> Result<CapacityReport, CapacityError> {
    let m = int(degree_of(family, c)? as i64);
    let log_cm = int(log_abs_int(&c.leading_coeff(), v).expect("nonzero"));
    let log_m = escape_bound_m(family, c, v)?;
    let sample = sample_beyond(v, &log_m, family.field());
    let green = green_estimate(family, c, v, &sample, 1)?;
    let expected = int(log_abs_int(&sample, v).unwrap()) + &log_cm / &m;
    Ok(CapacityReport { capacity_log: -log_cm / m, log_m, sample, green, expected })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdelicReport {
    pub total: Rational,
    pub per_place: Vec<(Place, Rational)>,
    /// Places where M_{c,v} may differ from the closed unit disk.
    pub exceptional: Vec<Place>,
}

pub fn adelic_capacity_log(family: &FamilyModule, c: &ParamPoly) -> Result<AdelicReport, CapacityError> {
    let m = int(degree_of(family, c)? as i64);
    let cm = c.leading_coeff();
    let per_place: Vec<(Place, Rational)> = support_places([&cm])
        .into_iter()
        .map(|v| {
            let l = int(log_abs_int(&cm, &v).unwrap());
            (v, -l / &m)
        })
        .collect();
    let total = per_place.iter().map(|(_, x)| x.clone()).sum();
    let mut exceptional: BTreeSet<Place> = per_place.iter().map(|(v, _)| v.clone()).collect();
    for p in family.g().iter().chain(std::iter::once(c)) {
        for coeff in p.coeffs() {
            exceptional.extend(pole_places(coeff));
        }
    }
    Ok(AdelicReport { total, per_place, exceptional: exceptional.into_iter().collect() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamHeight {
    /// ĥ_{Φ^λ}(c(λ))/deg c.
    pub value: HeightValue,
    pub report: HeightReport,
}

pub fn param_height(
    family: &FamilyModule,
    c: &ParamPoly,
    lambda: &RatFunc,
    budget: usize,
) -> Result<ParamHeight, CapacityError> {
    let m = degree_of(family, c)?;
    let phi = family.specialize(lambda);
    let report = canonical_height(&phi, &c.evaluate(lambda), budget);
    let value = report.value.scale(&Rational::new(1.into(), (m as i64).into()));
    Ok(ParamHeight { value, report })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenSum {
    pub total: Rational,
    pub stabilized: bool,
    pub per_place: Vec<(Place, GreenValue)>,
}

/// Σ_v G_{c,v}(λ) over the places where Φ^λ or c(λ) is not integral or
/// not a unit, computed from f_{c,n} in K[z] without any height machinery.
pub fn green_sum(
    family: &FamilyModule,
    c: &ParamPoly,
    lambda: &RatFunc,
    n: usize,
) -> Result<GreenSum, CapacityError> {
    let m = degree_of(family, c)?;
    let q = family.field().q();
    let r = family.rank();
    let orbit = family.orbit(c, n + 1);
    let values: Vec<RatFunc> = orbit.iter().map(|f| f.evaluate(lambda)).collect();
    let phi = family.specialize(lambda);
    let mut elems: Vec<&RatFunc> = phi.coefficients().iter().collect();
    elems.push(&values[0]);
    let mut per_place = Vec::new();
    let mut total = Rational::zero();
    let mut stabilized = true;
    for v in support_places(elems) {
        let g = |k: usize| {
            let l = log_abs_int(&values[k], &v).unwrap_or(0).max(0);
            int(l) / (int(m as i64) * growth_factor(q, r, k))
        };
        let gv = GreenValue { value: g(n), stabilized: g(n) == g(n + 1) };
        stabilized &= gv.stabilized;
        total += &gv.value;
        per_place.push((v, gv));
    }
    Ok(GreenSum { total, stabilized, per_place })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Field};
    use crate::heights::local_height;

    fn setup() -> (Field, FamilyModule, ParamPoly, RatFunc) {
        let f = Field::prime(2).unwrap();
        let fam = FamilyModule::standard(&f, 2).unwrap();
        (f.clone(), fam, ParamPoly::z(&f), RatFunc::t(&f))
    }

    #[test]
    fn green_examples() {
        let (f, fam, z, t) = setup();
        let lam = t.pow(2);
        let g = green_estimate(&fam, &z, &Place::Infinity, &lam, 1).unwrap();
        assert_eq!(g, GreenValue { value: int(2), stabilized: true });
        let g0 = green_estimate(&fam, &z, &Place::Infinity, &RatFunc::zero(&f), 1).unwrap();
        assert_eq!(g0.value, int(0));
        let phi = fam.specialize(&lam);
        assert_eq!(local_height(&phi, &Place::Infinity, &lam, 8), HeightValue::Exact(int(2)));
    }

    #[test]
    fn escape_bounds() {
        let (f, fam, z, t) = setup();
        assert_eq!(escape_bound_m(&fam, &z, &Place::Infinity).unwrap(), rat(1, 3));
        let tz = ParamPoly::monomial(t.clone(), 1);
        let p = Place::finite(FqPoly::t(&f));
        assert_eq!(escape_bound_m(&fam, &tz, &p).unwrap(), int(2));
        let z3 = ParamPoly::monomial(RatFunc::one(&f), 3);
        let wide = FamilyModule::new(&f, 2, vec![&z3 + &z]).unwrap();
        let zz = ParamPoly::monomial(RatFunc::one(&f), 2);
        assert!(escape_bound_m(&wide, &zz, &Place::Infinity).unwrap() >= escape_bound_m(&fam, &zz, &Place::Infinity).unwrap());
    }

    #[test]
    fn membership_examples() {
        let (f, fam, z, t) = setup();
        let one = RatFunc::one(&f);
        assert_eq!(membership(&fam, &z, &Place::Infinity, &RatFunc::zero(&f), 8).unwrap(), Membership::In);
        assert_eq!(membership(&fam, &z, &Place::Infinity, &t.pow(2), 8).unwrap(), Membership::Out(0));
        let p = Place::finite(FqPoly::t(&f));
        assert_eq!(membership(&fam, &z, &p, &(&t + &one), 8).unwrap(), Membership::In);
    }

    #[test]
    fn capacities() {
        let (f, fam, z, t) = setup();
        let tz = ParamPoly::monomial(t.clone(), 1);
        let p = Place::finite(FqPoly::t(&f));
        let rep = capacity_log(&fam, &z, &Place::Infinity).unwrap();
        assert_eq!(rep.capacity_log, int(0));
        assert!(rep.confirmed());
        let rep = capacity_log(&fam, &tz, &Place::Infinity).unwrap();
        assert_eq!(rep.capacity_log, int(-1));
        assert!(rep.confirmed());
        let rep = capacity_log(&fam, &tz, &p).unwrap();
        assert_eq!(rep.capacity_log, int(1));
        assert!(rep.confirmed(), "{rep:?}");
        let ad = adelic_capacity_log(&fam, &z).unwrap();
        assert_eq!((ad.total.clone(), ad.exceptional.clone()), (int(0), vec![Place::Infinity]));
        let ad = adelic_capacity_log(&fam, &tz).unwrap();
        assert_eq!(ad.total, int(0));
        assert_eq!(ad.per_place, vec![(Place::Infinity, int(-1)), (p.clone(), int(1))]);
    }

    #[test]
    fn param_heights() {
        let (f, fam, z, t) = setup();
        let lam = &t + &RatFunc::one(&f);
        let ph = param_height(&fam, &z, &lam, 16).unwrap();
        assert_eq!(ph.value, HeightValue::Exact(int(1)));
        let gs = green_sum(&fam, &z, &lam, 1).unwrap();
        assert!(gs.stabilized);
        assert_eq!(gs.total, int(1));
        // λ = t + 1 is also a root of t + z + 1 for c = 1, but c must satisfy
        // the hypothesis; c = z at λ = 0 is torsion
        let ph = param_height(&fam, &z, &RatFunc::zero(&f), 16).unwrap();
        assert_eq!(ph.value, HeightValue::Exact(int(0)));
    }
}
