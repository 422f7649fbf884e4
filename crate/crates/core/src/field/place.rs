//! Places of F_{q^s}(t), valuations and absolute values in log-q form.
//!
//! The absolute value at a place v is normalized as
//! |α|_v = q^{−deg(v)·ord_v(α)}, so the product formula holds with all
//! weights equal to 1 and every logarithm below is an exact rational.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::factor::factor_univariate;
use super::poly::FqPoly;
use super::ratfunc::RatFunc;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render an exact rational as `p/q` (or `p` when integral).
pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// The place attached to a monic irreducible polynomial P.
    Finite(FqPoly),
    /// The degree valuation, where t has a pole.
    Infinity,
}

impl Place {
    pub fn finite(p: FqPoly) -> Place {
        debug_assert!(p.is_monic() && !p.is_constant());
        Place::Finite(p)
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

/// Smallest degree first; at equal degree ∞ precedes the finite places,
/// which are ordered by their defining polynomial.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Less,
            (_, Place::Infinity) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
        })
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "∞"),
        }
    }
}

/// log_q |α|_v, with a distinguished value for α = 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LogAbs {
    NegInfinity,
    Finite(Rational),
}

impl LogAbs {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LogAbs::Finite(r) => Some(r),
            LogAbs::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, LogAbs::NegInfinity)
    }

    /// max(0, self), i.e. log⁺.
    pub fn log_plus(&self) -> Rational {
        match self {
            LogAbs::Finite(r) if r.is_positive() => r.clone(),
            _ => Rational::zero(),
        }
    }

    /// Whether |α|_v > q^{bound}.
    pub fn exceeds(&self, bound: &Rational) -> bool {
        matches!(self, LogAbs::Finite(r) if r > bound)
    }
}

impl Ord for LogAbs {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogAbs::NegInfinity, LogAbs::NegInfinity) => Ordering::Equal,
            (LogAbs::NegInfinity, _) => Ordering::Less,
            (_, LogAbs::NegInfinity) => Ordering::Greater,
            (LogAbs::Finite(a), LogAbs::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for LogAbs {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LogAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogAbs::NegInfinity => write!(f, "-inf"),
            LogAbs::Finite(r) => write!(f, "{}", render_rational(r)),
        }
    }
}

/// Order of a nonzero polynomial at a place.
pub fn poly_ord(a: &FqPoly, v: &Place) -> i64 {
    debug_assert!(!a.is_zero());
    match v {
        Place::Infinity => -(a.degree().unwrap_or(0) as i64),
        Place::Finite(p) => {
            // cheap filter: a(t) mod P with P linear is an evaluation
            if p.degree() == Some(1) {
                let root = a.field().neg(p.coeff(0));
                if !a.eval(root).is_zero() {
                    return 0;
                }
            }
            a.split_power(p).0 as i64
        }
    }
}

/// The v-adic order of α; `None` encodes +∞ (α = 0).
pub fn ord_at(alpha: &RatFunc, v: &Place) -> Option<i64> {
    if alpha.is_zero() {
        return None;
    }
    Some(match v {
        Place::Infinity => {
            alpha.den().degree().unwrap_or(0) as i64 - alpha.num().degree().unwrap_or(0) as i64
        }
        Place::Finite(_) => poly_ord(alpha.num(), v) - poly_ord(alpha.den(), v),
    })
}

/// log_q |α|_v = −deg(v)·ord_v(α).
pub fn log_abs(alpha: &RatFunc, v: &Place) -> LogAbs {
    match ord_at(alpha, v) {
        None => LogAbs::NegInfinity,
        Some(o) => LogAbs::Finite(int(-(v.degree() as i64) * o)),
    }
}

/// Integer form of [`log_abs`]; `None` for zero.
pub fn log_abs_int(alpha: &RatFunc, v: &Place) -> Option<i64> {
    ord_at(alpha, v).map(|o| -(v.degree() as i64) * o)
}

/// Places where some input has nonzero order, always including ∞.
pub fn support_places<'a>(elems: impl IntoIterator<Item = &'a RatFunc>) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    out.insert(Place::Infinity);
    for a in elems {
        if a.is_zero() {
            continue;
        }
        for part in [a.num(), a.den()] {
            if part.is_constant() {
                continue;
            }
            for (p, _) in factor_univariate(part).expect("nonzero polynomial").factors {
                out.insert(Place::Finite(p));
            }
        }
    }
    out
}

/// Places where α has a pole, plus ∞.
pub fn pole_places(alpha: &RatFunc) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    out.insert(Place::Infinity);
    if !alpha.den().is_constant() {
        for (p, _) in factor_univariate(alpha.den()).expect("nonzero polynomial").factors {
            out.insert(Place::Finite(p));
        }
    }
    out
}

/// Weil height Σ_v max(0, log_q|α|_v), computed over the support.
pub fn weil_height(alpha: &RatFunc) -> Rational {
    if alpha.is_zero() {
        return Rational::zero();
    }
    support_places([alpha]).iter().map(|v| log_abs(alpha, v).log_plus()).sum()
}
