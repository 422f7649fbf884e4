//! Sparse polynomials in t over F_{q^s}.
//!
//! Iterated Frobenius twists produce monomials such as t^{q^15}; dense
//! storage is hopeless there, so Ore-algebra identities over F_{q^s}[t] are
//! checked in this representation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fq::{Field, FqElem};
use super::poly::FqPoly;

/// Terms (exponent, coefficient) sorted by exponent, coefficients nonzero.
#[derive(Clone)]
pub struct SparsePoly {
    field: Field,
    terms: Vec<(u64, FqElem)>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| format!("{}*t^{k}", self.field.render(*c)))
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl SparsePoly {
    fn from_map(field: &Field, map: BTreeMap<u64, FqElem>) -> SparsePoly {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SparsePoly { field: field.clone(), terms }
    }

    pub fn zero(field: &Field) -> SparsePoly {
        SparsePoly { field: field.clone(), terms: Vec::new() }
    }

    pub fn monomial(field: &Field, c: FqElem, k: u64) -> SparsePoly {
        let terms = if c.is_zero() { Vec::new() } else { vec![(k, c)] };
        SparsePoly { field: field.clone(), terms }
    }

    pub fn constant(field: &Field, c: FqElem) -> SparsePoly {
        SparsePoly::monomial(field, c, 0)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[(u64, FqElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(k, _)| *k)
    }

    /// x ↦ x^q.
    pub fn frobenius_q(&self) -> SparsePoly {
        let f = &self.field;
        let q = f.q() as u64;
        let terms = self.terms.iter().map(|&(k, c)| (k * q, f.frob_q(c))).collect();
        SparsePoly { field: f.clone(), terms }
    }

    pub fn to_dense(&self) -> FqPoly {
        let n = self.degree().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![FqElem::ZERO; n];
        for &(k, c) in &self.terms {
            coeffs[k as usize] = c;
        }
        FqPoly::new(&self.field, coeffs)
    }
}

impl From<&FqPoly> for SparsePoly {
    fn from(p: &FqPoly) -> SparsePoly {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| (k as u64, c))
            .collect();
        SparsePoly { field: p.field().clone(), terms }
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, other: &SparsePoly) -> SparsePoly {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            match (self.terms.get(i), other.terms.get(j)) {
                (Some(&(a, x)), Some(&(b, y))) if a == b => {
                    let s = f.add(x, y);
                    if !s.is_zero() {
                        out.push((a, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(a, x)), Some(&(b, _))) if a < b => {
                    out.push((a, x));
                    i += 1;
                }
                (Some(&(a, x)), None) => {
                    out.push((a, x));
                    i += 1;
                }
                (_, Some(&(b, y))) => {
                    out.push((b, y));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparsePoly { field: f.clone(), terms: out }
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        let f = &self.field;
        let terms = self.terms.iter().map(|&(k, c)| (k, f.neg(c))).collect();
        SparsePoly { field: f.clone(), terms }
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, other: &SparsePoly) -> SparsePoly {
        self + &(-other)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, other: &SparsePoly) -> SparsePoly {
        let f = &self.field;
        let mut acc: BTreeMap<u64, FqElem> = BTreeMap::new();
        for &(a, x) in &self.terms {
            for &(b, y) in &other.terms {
                let e = acc.entry(a + b).or_insert(FqElem::ZERO);
                *e = f.add(*e, f.mul(x, y));
            }
        }
        SparsePoly::from_map(f, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, other: SparsePoly) -> SparsePoly {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}
