//! Escape radii, local and global canonical heights, and a terminating
//! torsion test for points of K under a Drinfeld module.
//!
//! Beyond the escape radius r_v the orbit satisfies |Φ_t(y)|_v = |y|_v^{q^r}
//! exactly, so a local height is exact as soon as one iterate escapes. Long
//! bounded orbits are followed v-adically: iterates are truncated to a fixed
//! precision and the propagated error is tracked, which keeps their size
//! bounded no matter how the global height grows.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::field::{
    int, log_abs, log_abs_int, pole_places, render_rational, support_places, FqElem, FqPoly, Place,
    RatFunc, Rational,
};
use crate::ore::DrinfeldModule;

/// Default number of iterations for local height computations.
pub const DEFAULT_BUDGET: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeRadius {
    /// log_q r_v, always ≥ 0.
    pub log_rv: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightValue {
    Exact(Rational),
    /// The height lies in [0, bound].
    UpperBound(Rational),
}

impl HeightValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, HeightValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            HeightValue::Exact(r) => Some(r),
            HeightValue::UpperBound(_) => None,
        }
    }

    /// The exact value, or the upper end of the interval.
    pub fn value(&self) -> &Rational {
        match self {
            HeightValue::Exact(r) | HeightValue::UpperBound(r) => r,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, HeightValue::Exact(r) if r.is_zero())
    }

    pub fn scale(&self, k: &Rational) -> HeightValue {
        match self {
            HeightValue::Exact(r) => HeightValue::Exact(r * k),
            HeightValue::UpperBound(r) => HeightValue::UpperBound(r * k),
        }
    }

    /// Sum of heights; exact only if both are.
    pub fn add(&self, other: &HeightValue) -> HeightValue {
        let s = self.value() + other.value();
        if self.is_exact() && other.is_exact() {
            HeightValue::Exact(s)
        } else {
            HeightValue::UpperBound(s)
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::Exact(r) => write!(f, "{}", render_rational(r)),
            HeightValue::UpperBound(r) => write!(f, "<={}", render_rational(r)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionCertificate {
    /// Φ_f(x) = 0.
    Torsion { annihilator: FqPoly },
    /// The iterate at `step` has log_q|·|_v = `log_abs`, beyond r_v.
    NonTorsion { place: Place, step: usize, log_abs: Rational },
}

impl TorsionCertificate {
    pub fn is_torsion(&self) -> bool {
        matches!(self, TorsionCertificate::Torsion { .. })
    }

    /// Re-check the certificate from scratch.
    pub fn verify(&self, phi: &DrinfeldModule, x: &RatFunc) -> bool {
        match self {
            TorsionCertificate::Torsion { annihilator } => {
                if annihilator.is_zero() {
                    return false;
                }
                // Φ_f(x) = Σ f_i Φ_{t^i}(x)
                let field = phi.field();
                let mut acc = RatFunc::zero(field);
                let mut y = x.clone();
                for (i, &c) in annihilator.coeffs().iter().enumerate() {
                    if i > 0 {
                        y = phi.act_t(&y);
                    }
                    if !c.is_zero() {
                        acc = &acc + &y.scale(c);
                    }
                }
                acc.is_zero()
            }
            TorsionCertificate::NonTorsion { place, step, log_abs: l } => {
                let y = phi.act_t_pow(x, *step);
                let radius = escape_radius(phi, place);
                log_abs(&y, place).finite() == Some(l) && *l > radius.log_rv
            }
        }
    }
}

/// How a v-adic orbit computation ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalOutcome {
    /// The iterate at `step` lies beyond r_v with the given exact log.
    Escaped { step: usize, log_abs: i64 },
    /// r_v = 1 and the iterate at `step` is v-integral, so the whole orbit is.
    Integral { step: usize },
    /// The exact orbit revisited a value.
    Cycle { start: usize, period: usize },
    /// No escape within the budget, but the point is globally torsion.
    Torsion,
    /// No escape within `steps` iterations; ĥ_v ≤ bound.
    Exhausted { steps: usize, bound: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalOrbit {
    pub log_rv: Rational,
    pub outcome: LocalOutcome,
}

impl LocalOrbit {
    pub fn height(&self, q: u32, r: usize) -> HeightValue {
        match &self.outcome {
            LocalOutcome::Escaped { step, log_abs } => {
                HeightValue::Exact(int(*log_abs) / growth_factor(q, r, *step))
            }
            LocalOutcome::Integral { .. } | LocalOutcome::Cycle { .. } | LocalOutcome::Torsion => {
                HeightValue::Exact(Rational::zero())
            }
            LocalOutcome::Exhausted { bound, .. } => HeightValue::UpperBound(bound.clone()),
        }
    }
}

/// log_q|c_i|_v for each Ore coefficient; `None` for zero coefficients.
fn coeff_logs(phi: &DrinfeldModule, v: &Place) -> Vec<Option<i64>> {
    phi.coefficients().iter().map(|c| log_abs_int(c, v)).collect()
}

fn q_pow(q: u32, k: usize) -> i64 {
    (q as i64).pow(k as u32)
}

pub fn escape_radius(phi: &DrinfeldModule, v: &Place) -> EscapeRadius {
    let q = phi.field().q();
    let r = phi.rank();
    let logs = coeff_logs(phi, v);
    let top = logs[r].expect("leading coefficient is nonzero");
    let qr = q_pow(q, r);
    let mut log_rv = Rational::zero();
    for (i, l) in logs[..r].iter().enumerate() {
        if let Some(l) = l {
            let cand = Rational::new((l - top).into(), (qr - q_pow(q, i)).into());
            if cand > log_rv {
                log_rv = cand;
            }
        }
    }
    EscapeRadius { log_rv }
}

/// max_i(log|c_i|_v + q^i·log r_v): a bound for log|Φ_t(y)|_v on |y|_v ≤ r_v.
fn disk_image_bound(phi: &DrinfeldModule, v: &Place, log_rv: &Rational) -> Rational {
    let q = phi.field().q();
    let mut best: Option<Rational> = None;
    for (i, l) in coeff_logs(phi, v).into_iter().enumerate() {
        if let Some(l) = l {
            let cand = int(l) + log_rv * int(q_pow(q, i));
            if best.as_ref().is_none_or(|b| cand > *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("phi_t has nonzero coefficients")
}

/// A value ỹ with log_q|y − ỹ|_v ≤ level.
fn truncate(y: &RatFunc, v: &Place, level: i64) -> RatFunc {
    let field = y.field();
    match v {
        Place::Infinity => {
            let n = (-level).max(0) as usize;
            let shifted = y.num().shift(n);
            let (quot, _) = shifted.div_rem(y.den());
            RatFunc::new(quot, FqPoly::monomial(field, FqElem::ONE, n))
        }
        Place::Finite(p) => {
            let d = p.degree().expect("place polynomial") as i64;
            // ord_P(y − ỹ) ≥ m guarantees the level
            let m = (-level + d - 1).div_euclid(d);
            let (k, b1) = y.den().split_power(p);
            let prec = m + k as i64;
            if prec <= 0 {
                return RatFunc::zero(field);
            }
            let modulus = p.pow(prec as u64);
            let inv = b1.inv_mod(&modulus).expect("cofactor is prime to P");
            let a = y.num().mul_mod(&inv, &modulus);
            RatFunc::new(a, p.pow(k as u64))
        }
    }
}

fn size(y: &RatFunc) -> usize {
    y.num().degree().unwrap_or(0) + y.den().degree().unwrap_or(0)
}

/// Follow the orbit of x at v for up to `budget` iterations.
pub fn local_orbit(phi: &DrinfeldModule, v: &Place, x: &RatFunc, budget: usize) -> LocalOrbit {
    let log_rv = escape_radius(phi, v).log_rv;
    let q = phi.field().q();
    let logs = coeff_logs(phi, v);
    let growth = logs.iter().flatten().copied().max().unwrap_or(0).max(1);
    let level = -((budget as i64 + 2) * growth) - 1;
    let threshold = 4 * level.unsigned_abs() as usize + 64;

    let mut y = x.clone();
    let mut err: Option<i64> = None;
    let mut seen: HashMap<RatFunc, usize> = HashMap::new();
    let done = |outcome| LocalOrbit { log_rv: log_rv.clone(), outcome };
    for n in 0..=budget {
        if let Some(l) = log_abs_int(&y, v) {
            debug_assert!(err.is_none_or(|e| e < 0));
            if int(l) > log_rv {
                return done(LocalOutcome::Escaped { step: n, log_abs: l });
            }
            if log_rv.is_zero() && l <= 0 {
                return done(LocalOutcome::Integral { step: n });
            }
        } else if err.is_none() {
            return done(LocalOutcome::Cycle { start: n, period: 1 });
        } else if log_rv.is_zero() {
            return done(LocalOutcome::Integral { step: n });
        }
        if err.is_none() {
            if let Some(&j) = seen.get(&y) {
                return done(LocalOutcome::Cycle { start: j, period: n - j });
            }
            seen.insert(y.clone(), n);
        }
        if n == budget {
            break;
        }
        if size(&y) > threshold {
            y = truncate(&y, v, level);
            err = Some(err.map_or(level, |e| e.max(level)));
        }
        y = phi.act_t(&y);
        if let Some(e) = err {
            let spread = logs
                .iter()
                .enumerate()
                .filter_map(|(i, l)| l.map(|l| l.saturating_add(q_pow(q, i).saturating_mul(e))))
                .max()
                .expect("nonzero coefficients");
            err = Some(spread);
        }
    }
    if is_torsion(phi, x).is_torsion() {
        return done(LocalOutcome::Torsion);
    }
    let e = disk_image_bound(phi, v, &log_rv);
    let bound = e / growth_factor(q, phi.rank(), budget + 1);
    done(LocalOutcome::Exhausted { steps: budget, bound })
}

/// ĥ_{Φ,v}(x), exact or with a certified upper bound.
pub fn local_height(phi: &DrinfeldModule, v: &Place, x: &RatFunc, budget: usize) -> HeightValue {
    local_orbit(phi, v, x, budget).height(phi.field().q(), phi.rank())
}

/// Decide whether x is a torsion point. Before any escape every iterate has
/// bounded Weil height, so the exact orbit stays small and either revisits a
/// value or escapes at one of finitely many places.
pub fn is_torsion(phi: &DrinfeldModule, x: &RatFunc) -> TorsionCertificate {
    let field = phi.field();
    if x.is_zero() {
        return TorsionCertificate::Torsion { annihilator: FqPoly::t(field) };
    }
    let mut places: BTreeSet<Place> = pole_places(x);
    for c in phi.coefficients() {
        places.extend(pole_places(c));
    }
    let radii: Vec<(Place, Rational)> =
        places.into_iter().map(|v| { let r = escape_radius(phi, &v).log_rv; (v, r) }).collect();
    let mut seen: HashMap<RatFunc, usize> = HashMap::new();
    let mut y = x.clone();
    for n in 0.. {
        for (v, rv) in &radii {
            if let Some(l) = log_abs_int(&y, v) {
                if int(l) > *rv {
                    return TorsionCertificate::NonTorsion { place: v.clone(), step: n, log_abs: int(l) };
                }
            }
        }
        if y.is_zero() {
            return TorsionCertificate::Torsion { annihilator: t_power(field, n) };
        }
        if let Some(&j) = seen.get(&y) {
            // Φ_{t^n}(x) = Φ_{t^j}(x), so t^j(t^{n−j} − 1) annihilates x
            let k = n - j;
            let cycle = &t_power(field, k) - &FqPoly::one(field);
            return TorsionCertificate::Torsion { annihilator: &t_power(field, j) * &cycle };
        }
        seen.insert(y.clone(), n);
        y = phi.act_t(&y);
    }
    unreachable!()
}

fn t_power(field: &crate::field::Field, k: usize) -> FqPoly {
    FqPoly::monomial(field, FqElem::ONE, k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub value: HeightValue,
    /// Local contributions over the support of x and the coefficients.
    pub local: Vec<(Place, HeightValue)>,
    pub certificate: TorsionCertificate,
}

/// ĥ_Φ(x) as the sum of local heights.
pub fn canonical_height(phi: &DrinfeldModule, x: &RatFunc, budget: usize) -> HeightReport {
    let certificate = is_torsion(phi, x);
    let mut elems: Vec<&RatFunc> = phi.coefficients().iter().collect();
    elems.push(x);
    let places = support_places(elems);
    let local: Vec<(Place, HeightValue)> = places
        .into_iter()
        .map(|v| {
            let h = local_height(phi, &v, x, budget);
            (v, h)
        })
        .collect();
    let value = local
        .iter()
        .fold(HeightValue::Exact(Rational::zero()), |acc, (_, h)| acc.add(h));
    HeightReport { value, local, certificate }
}

/// q^{r·n} as a rational.
pub fn growth_factor(q: u32, r: usize, n: usize) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(q).pow((r * n) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Field};

    fn plain(f: &Field) -> DrinfeldModule {
        DrinfeldModule::new(f, vec![RatFunc::zero(f)])
    }

    #[test]
    fn radii() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        assert_eq!(escape_radius(&plain(&f), &Place::Infinity).log_rv, rat(1, 3));
        let phi = DrinfeldModule::new(&f, vec![&RatFunc::one(&f) + &t.pow(2)]);
        assert_eq!(escape_radius(&phi, &Place::Infinity).log_rv, int(1));
        let p = Place::finite(FqPoly::t(&f));
        assert_eq!(escape_radius(&phi, &p).log_rv, int(0));
    }

    #[test]
    fn local_examples() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        let phi = plain(&f);
        assert_eq!(local_height(&phi, &Place::Infinity, &t, 8), HeightValue::Exact(int(1)));
        assert_eq!(
            local_height(&phi, &Place::Infinity, &RatFunc::zero(&f), 8),
            HeightValue::Exact(int(0))
        );
        let p = Place::finite(FqPoly::t(&f));
        assert_eq!(local_height(&phi, &p, &t, 8), HeightValue::Exact(int(0)));
        // 1/t escapes at ∞ after two steps: log|y_2| = 1
        let x = t.inv();
        assert_eq!(local_height(&phi, &Place::Infinity, &x, 8), HeightValue::Exact(rat(1, 16)));
        assert_eq!(local_height(&phi, &p, &x, 8), HeightValue::Exact(int(1)));
    }

    #[test]
    fn truncation_bounds_error() {
        let f = Field::prime(3).unwrap();
        let y = RatFunc::new(FqPoly::from_ints(&f, &[1, 2, 0, 1, 1]), FqPoly::from_ints(&f, &[2, 1, 1]));
        for v in [Place::Infinity, Place::finite(FqPoly::from_ints(&f, &[1, 0, 1])), Place::finite(FqPoly::from_ints(&f, &[2, 1]))] {
            for level in [-7, -3, 0, 2] {
                let diff = &y - &truncate(&y, &v, level);
                assert!(log_abs_int(&diff, &v).is_none_or(|l| l <= level), "{v} {level}");
            }
        }
    }

    #[test]
    fn torsion_examples() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        let phi = plain(&f);
        assert_eq!(
            is_torsion(&phi, &RatFunc::zero(&f)),
            TorsionCertificate::Torsion { annihilator: FqPoly::t(&f) }
        );
        let cert = is_torsion(&phi, &t);
        assert_eq!(
            cert,
            TorsionCertificate::NonTorsion { place: Place::Infinity, step: 0, log_abs: int(1) }
        );
        assert!(cert.verify(&phi, &t));
        let one = RatFunc::one(&f);
        let special = DrinfeldModule::new(&f, vec![&t + &one]);
        let cert = is_torsion(&special, &one);
        assert_eq!(cert, TorsionCertificate::Torsion { annihilator: FqPoly::t(&f) });
        assert!(cert.verify(&special, &one));
        // constants under t + τ²: 1 ↦ t + 1 escapes
        assert!(!is_torsion(&phi, &one).is_torsion());
    }

    #[test]
    fn canonical_examples() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        let phi = plain(&f);
        let h = canonical_height(&phi, &t, 16);
        assert_eq!(h.value, HeightValue::Exact(int(1)));
        let h1 = canonical_height(&phi, &phi.act_t(&t), 16);
        assert_eq!(h1.value, HeightValue::Exact(int(4)));
        let x = t.inv();
        let h = canonical_height(&phi, &x, 16);
        assert_eq!(h.value, HeightValue::Exact(rat(17, 16)));
        let hx = canonical_height(&phi, &phi.act_t(&x), 16);
        assert_eq!(hx.value, HeightValue::Exact(rat(17, 4)));
    }

    #[test]
    fn exhausted_bound_shrinks() {
        let f = Field::prime(2).unwrap();
        let phi = plain(&f);
        let x = RatFunc::t(&f).inv();
        // the ∞-orbit of 1/t only escapes at step 2
        let b0 = local_height(&phi, &Place::Infinity, &x, 0);
        let b1 = local_height(&phi, &Place::Infinity, &x, 1);
        assert_eq!(b0, HeightValue::UpperBound(rat(1, 3)));
        assert_eq!(b1, HeightValue::UpperBound(rat(1, 12)));
        assert!(rat(1, 16) <= *b1.value());
        let one = RatFunc::one(&f);
        let special = DrinfeldModule::new(&f, vec![&RatFunc::t(&f) + &one]);
        let o = local_orbit(&special, &Place::Infinity, &one, 0);
        assert_eq!(o.outcome, LocalOutcome::Torsion);
    }
}
