//! Dense univariate polynomials over F_{q^s} in the variable t.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::fq::{Field, FqElem};

/// A polynomial in t over the constant field, lowest degree first, with no
/// trailing zero coefficients.
#[derive(Clone)]
pub struct FqPoly {
    field: Field,
    coeffs: Vec<FqElem>,
}

impl PartialEq for FqPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for FqPoly {}

impl Hash for FqPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for FqPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FqPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FqPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FqElem>) -> FqPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> FqPoly {
        FqPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> FqPoly {
        FqPoly::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &Field, c: FqElem) -> FqPoly {
        FqPoly::new(field, vec![c])
    }

    /// The monomial c·t^k.
    pub fn monomial(field: &Field, c: FqElem, k: usize) -> FqPoly {
        if c.is_zero() {
            return FqPoly::zero(field);
        }
        let mut coeffs = vec![FqElem::ZERO; k + 1];
        coeffs[k] = c;
        FqPoly { field: field.clone(), coeffs }
    }

    /// The variable t.
    pub fn t(field: &Field) -> FqPoly {
        FqPoly::monomial(field, FqElem::ONE, 1)
    }

    /// Build from small integers (reduced into F_p), lowest degree first.
    pub fn from_ints(field: &Field, ints: &[i64]) -> FqPoly {
        FqPoly::new(field, ints.iter().map(|&k| field.from_int(k)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` stands for the degree −∞ of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn scale(&self, c: FqElem) -> FqPoly {
        if c.is_zero() {
            return FqPoly::zero(&self.field);
        }
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> FqPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading_coeff()))
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: usize) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FqElem::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        FqPoly { field: self.field.clone(), coeffs }
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> FqPoly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        FqPoly::new(f, coeffs)
    }

    /// Apply a map to each coefficient while spreading exponents by `stride`.
    fn spread(&self, stride: usize, map: impl Fn(FqElem) -> FqElem) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FqElem::ZERO; (self.coeffs.len() - 1) * stride + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * stride] = map(c);
        }
        FqPoly { field: self.field.clone(), coeffs }
    }

    /// f ↦ f^p, which in characteristic p is coefficientwise.
    pub fn frobenius_p(&self) -> FqPoly {
        let f = self.field.clone();
        self.spread(f.characteristic() as usize, |c| f.frob_p(c))
    }

    /// f ↦ f^q.
    pub fn frobenius_q(&self) -> FqPoly {
        let f = self.field.clone();
        self.spread(f.q() as usize, |c| f.frob_q(c))
    }

    /// If every exponent is divisible by p, the p-th root.
    pub fn root_p(&self) -> Option<FqPoly> {
        let p = self.field.characteristic() as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        let f = &self.field;
        Some(FqPoly::new(f, self.coeffs.iter().step_by(p).map(|&c| f.root_p(c)).collect()))
    }

    pub fn pow(&self, mut k: u64) -> FqPoly {
        let mut base = self.clone();
        let mut acc = FqPoly::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn div_rem(&self, d: &FqPoly) -> (FqPoly, FqPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return (FqPoly::zero(f), self.clone());
        }
        let dn = d.coeffs.len() - 1;
        let inv_lc = f.inv(d.leading_coeff());
        let mut r = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; r.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = r[k + dn];
            if c.is_zero() {
                continue;
            }
            let m = f.mul(c, inv_lc);
            quot[k] = m;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + j] = f.sub(r[k + j], f.mul(m, dc));
                }
            }
        }
        r.truncate(dn);
        (FqPoly::new(f, quot), FqPoly::new(f, r))
    }

    pub fn rem(&self, d: &FqPoly) -> FqPoly {
        self.div_rem(d).1
    }

    /// Division that is known to be exact.
    pub fn exact_div(&self, d: &FqPoly) -> FqPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division {self:?} / {d:?}");
        q
    }

    pub fn divides(&self, other: &FqPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, x, y) with x·self + y·other = g, g monic.
    pub fn ext_gcd(&self, other: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FqPoly::one(f), FqPoly::zero(f));
        let (mut t0, mut t1) = (FqPoly::zero(f), FqPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.leading_coeff());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo m, if it exists.
    pub fn inv_mod(&self, m: &FqPoly) -> Option<FqPoly> {
        let (g, x, _) = self.rem(m).ext_gcd(m);
        g.is_one().then(|| x.rem(m))
    }

    pub fn mul_mod(&self, other: &FqPoly, m: &FqPoly) -> FqPoly {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut k: u64, m: &FqPoly) -> FqPoly {
        let mut base = self.rem(m);
        let mut acc = FqPoly::one(&self.field).rem(m);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Largest k with d^k | self, together with the cofactor.
    pub fn split_power(&self, d: &FqPoly) -> (u32, FqPoly) {
        debug_assert!(!self.is_zero() && !d.is_constant());
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(d);
            if !r.is_zero() {
                return (k, cur);
            }
            cur = q;
            k += 1;
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn zip_with(&self, other: &FqPoly, op: impl Fn(FqElem, FqElem) -> FqElem) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        FqPoly::new(&self.field, coeffs)
    }
}

impl Add for &FqPoly {
    type Output = FqPoly;

    fn add(self, other: &FqPoly) -> FqPoly {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }
}

impl Sub for &FqPoly {
    type Output = FqPoly;

    fn sub(self, other: &FqPoly) -> FqPoly {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }
}

impl Neg for &FqPoly {
    type Output = FqPoly;

    fn neg(self) -> FqPoly {
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }
}

impl Mul for &FqPoly {
    type Output = FqPoly;

    fn mul(self, other: &FqPoly) -> FqPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero(f);
        }
        if self.coeffs.len() == 1 {
            return other.scale(self.coeffs[0]);
        }
        if other.coeffs.len() == 1 {
            return self.scale(other.coeffs[0]);
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        // iterate over the sparser side in the outer loop
        let (a, b) = if self.weight() <= other.weight() { (self, other) } else { (other, self) };
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &mut out[i..];
            for (j, &y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    row[j] = f.add(row[j], f.mul(x, y));
                }
            }
        }
        FqPoly::new(f, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FqPoly {
            type Output = FqPoly;
            fn $m(self, other: FqPoly) -> FqPoly {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FqPoly {
    type Output = FqPoly;
    fn neg(self) -> FqPoly {
        -&self
    }
}

/// Renders in the element grammar, highest degree first, e.g. `t^2+u*t+1`.
impl fmt::Display for FqPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let cs = f.render(c);
            if i == 0 {
                write!(out, "{cs}")?;
            } else if c.is_one() {
                write!(out, "{mono}")?;
            } else if cs.contains('+') || cs.contains('*') {
                write!(out, "({cs})*{mono}")?;
            } else {
                write!(out, "{cs}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn arithmetic_and_division() {
        let f = Field::prime(3).unwrap();
        let a = FqPoly::from_ints(&f, &[1, 2, 0, 1]);
        let b = FqPoly::from_ints(&f, &[2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().is_none() || r.degree() < b.degree());
        assert_eq!(FqPoly::zero(&f).degree(), None);
    }

    #[test]
    fn gcd_and_inverse() {
        let f = f2();
        // (t+1)^2 and t(t+1)
        let a = FqPoly::from_ints(&f, &[1, 0, 1]);
        let b = FqPoly::from_ints(&f, &[0, 1, 1]);
        assert_eq!(a.gcd(&b), FqPoly::from_ints(&f, &[1, 1]));
        let m = FqPoly::from_ints(&f, &[1, 1, 1]);
        let t = FqPoly::t(&f);
        let inv = t.inv_mod(&m).unwrap();
        assert!(t.mul_mod(&inv, &m).is_one());
    }

    #[test]
    fn frobenius_is_pth_power() {
        let f = Field::new(3, 2, 1, None).unwrap();
        let u = f.generator_u();
        let a = FqPoly::new(&f, vec![u, FqElem::ONE, f.add(u, FqElem::ONE)]);
        assert_eq!(a.frobenius_p(), a.pow(3));
        assert_eq!(a.frobenius_q(), a.pow(9));
        assert_eq!(a.frobenius_p().root_p().unwrap(), a);
    }

    #[test]
    fn display_forms() {
        let f = Field::new(2, 2, 1, None).unwrap();
        let u = f.generator_u();
        let a = FqPoly::new(&f, vec![FqElem::ONE, f.add(u, FqElem::ONE), FqElem::ONE]);
        assert_eq!(a.to_string(), "t^2+(u+1)*t+1");
        let g = f2();
        assert_eq!(FqPoly::from_ints(&g, &[0, 0, 0, 1, 1]).to_string(), "t^4+t^3");
    }
}
