//! Elements of K = F_{q^s}(t) in lowest terms.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::fq::{Field, FqElem};
use super::poly::FqPoly;

/// `num/den` with `den` monic and coprime to `num`; zero is `0/1`.
#[derive(Clone)]
pub struct RatFunc {
    num: FqPoly,
    den: FqPoly,
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<FqPoly> for RatFunc {
    fn from(num: FqPoly) -> RatFunc {
        let den = FqPoly::one(num.field());
        RatFunc { num, den }
    }
}

impl RatFunc {
    /// Reduce `num/den` to canonical form. Panics if `den` is zero.
    pub fn new(num: FqPoly, den: FqPoly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero(num.field());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        if !den.is_monic() {
            let inv = num.field().inv(den.leading_coeff());
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RatFunc { num, den }
    }

    /// Trusted constructor: inputs must already be coprime with monic `den`.
    pub(crate) fn from_parts_unchecked(num: FqPoly, den: FqPoly) -> RatFunc {
        debug_assert!(den.is_monic());
        RatFunc { num, den }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc { num: FqPoly::zero(field), den: FqPoly::one(field) }
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &Field, c: FqElem) -> RatFunc {
        RatFunc::from(FqPoly::constant(field, c))
    }

    pub fn t(field: &Field) -> RatFunc {
        RatFunc::from(FqPoly::t(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The element as a constant of F_{q^s}, if it is one.
    pub fn as_constant(&self) -> Option<FqElem> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero in K");
        let lc = self.num.leading_coeff();
        let inv = self.field().inv(lc);
        RatFunc { num: self.den.scale(inv), den: self.num.scale(inv) }
    }

    pub fn scale(&self, c: FqElem) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// x ↦ x^p; numerator and denominator are raised separately, which
    /// preserves lowest terms and monicity.
    pub fn frobenius_p(&self) -> RatFunc {
        RatFunc { num: self.num.frobenius_p(), den: self.den.frobenius_p() }
    }

    /// x ↦ x^q.
    pub fn frobenius_q(&self) -> RatFunc {
        RatFunc { num: self.num.frobenius_q(), den: self.den.frobenius_q() }
    }

    /// x ↦ x^{q^i}.
    pub fn frobenius_q_iter(&self, i: u32) -> RatFunc {
        let mut out = self.clone();
        for _ in 0..i {
            out = out.frobenius_q();
        }
        out
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> RatFunc {
        if k < 0 {
            return self.inv().pow(-k);
        }
        let k = k as u64;
        RatFunc { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// max(deg num, deg den), the Weil height in log-q units.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_one() {
                return RatFunc { num, den: self.den.clone() };
            }
            return RatFunc::new(num, self.den.clone());
        }
        if self.den.is_one() {
            let num = &(&self.num * &other.den) + &other.num;
            return RatFunc { num, den: other.den.clone() };
        }
        if other.den.is_one() {
            let num = &(&other.num * &self.den) + &self.num;
            return RatFunc { num, den: self.den.clone() };
        }
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            return RatFunc::from_parts_unchecked(num, &self.den * &other.den);
        }
        let d1 = self.den.exact_div(&g);
        let d2 = other.den.exact_div(&g);
        let num = &(&self.num * &d2) + &(&other.num * &d1);
        let den = &self.den * &d2;
        RatFunc::new(num, den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &(-other)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: &self.num * &other.num, den: self.den.clone() };
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.exact_div(&g1), other.den.exact_div(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.exact_div(&g2), self.den.exact_div(&g2))
        };
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        // the gcd pieces above are monic, so only the denominator scaling can be off
        if den.is_monic() {
            RatFunc { num, den }
        } else {
            RatFunc::new(num, den)
        }
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;

    fn div(self, other: &RatFunc) -> RatFunc {
        self * &other.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, other: RatFunc) -> RatFunc {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

fn is_atom(s: &str) -> bool {
    !s.contains('+')
}

/// `num` alone when the denominator is 1, otherwise `num/den` with
/// parentheses around multi-term parts.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.to_string();
        if self.den.is_one() {
            return write!(f, "{n}");
        }
        let d = self.den.to_string();
        let n = if is_atom(&n) { n } else { format!("({n})") };
        let d = if is_atom(&d) && !d.contains('*') { d } else { format!("({d})") };
        write!(f, "{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> FqPoly {
        FqPoly::from_ints(f, c)
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let f = Field::prime(2).unwrap();
        // (t^2+1)/(t+1) = t+1 over F_2
        let r = RatFunc::new(poly(&f, &[1, 0, 1]), poly(&f, &[1, 1]));
        assert_eq!(r, RatFunc::from(poly(&f, &[1, 1])));
        assert_eq!(r.to_string(), "t+1");
    }

    #[test]
    fn field_operations() {
        let f = Field::prime(3).unwrap();
        let a = RatFunc::new(poly(&f, &[1, 1]), poly(&f, &[0, 2]));
        let b = RatFunc::new(poly(&f, &[2, 0, 1]), poly(&f, &[1, 1, 1]));
        assert!(a.den().is_monic());
        let s = &a + &b;
        assert_eq!(&s - &b, a);
        let p = &a * &b;
        assert_eq!(&p / &b, a);
        assert!((&a * &a.inv()).is_one());
        assert_eq!(a.frobenius_p(), a.pow(3));
        assert_eq!(a.frobenius_q_iter(2), a.pow(9));
    }

    #[test]
    fn display_fraction() {
        let f = Field::prime(2).unwrap();
        let r = RatFunc::new(poly(&f, &[0, 1]), poly(&f, &[1, 1]));
        assert_eq!(r.to_string(), "t/(t+1)");
        assert_eq!(RatFunc::new(poly(&f, &[1]), poly(&f, &[0, 1])).to_string(), "1/t");
    }
}
