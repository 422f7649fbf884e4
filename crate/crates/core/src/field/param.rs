//! Polynomials in the parameter z over K = F_{q^s}(t).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fq::{Field, FqElem};
use super::poly::FqPoly;
use super::ratfunc::RatFunc;

/// Σ c_i z^i with c_i ∈ K, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    field: Field,
    coeffs: Vec<RatFunc>,
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<RatFunc> for ParamPoly {
    fn from(c: RatFunc) -> ParamPoly {
        let field = c.field().clone();
        ParamPoly::new(&field, vec![c])
    }
}

impl ParamPoly {
    pub fn new(field: &Field, mut coeffs: Vec<RatFunc>) -> ParamPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ParamPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> ParamPoly {
        ParamPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> ParamPoly {
        ParamPoly::from(RatFunc::one(field))
    }

    /// The variable z.
    pub fn z(field: &Field) -> ParamPoly {
        ParamPoly::monomial(RatFunc::one(field), 1)
    }

    pub fn monomial(c: RatFunc, k: usize) -> ParamPoly {
        let field = c.field().clone();
        if c.is_zero() {
            return ParamPoly::zero(&field);
        }
        let mut coeffs = vec![RatFunc::zero(&field); k];
        coeffs.push(c);
        ParamPoly { field, coeffs }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient (the C_m of a marked point); zero for zero.
    pub fn leading_coeff(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    /// The constant term as an element of K when the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<RatFunc> {
        (self.coeffs.len() <= 1).then(|| self.coeff(0))
    }

    pub fn scale(&self, c: &RatFunc) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(&self.field);
        }
        ParamPoly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_const(&self, c: FqElem) -> ParamPoly {
        ParamPoly::new(&self.field, self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    pub fn monic(&self) -> ParamPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().inv())
    }

    /// x ↦ x^q: coefficients raised to the q-th power, exponents multiplied by q.
    pub fn frobenius_q(&self) -> ParamPoly {
        if self.is_zero() {
            return self.clone();
        }
        let q = self.field.q() as usize;
        let zero = RatFunc::zero(&self.field);
        let mut coeffs = vec![zero; (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * q] = c.frobenius_q();
            }
        }
        ParamPoly { field: self.field.clone(), coeffs }
    }

    pub fn derivative(&self) -> ParamPoly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(f.from_int(i as i64)))
            .collect();
        ParamPoly::new(f, coeffs)
    }

    /// Least common multiple of the coefficient denominators (monic).
    pub fn common_denominator(&self) -> FqPoly {
        let mut l = FqPoly::one(&self.field);
        for c in &self.coeffs {
            if !c.den().is_one() {
                let g = l.gcd(c.den());
                l = &l * &c.den().exact_div(&g);
            }
        }
        l
    }

    /// Coefficients of L·P as polynomials in t, where L is the common denominator.
    pub fn cleared(&self) -> (FqPoly, Vec<FqPoly>) {
        let l = self.common_denominator();
        let polys = self
            .coeffs
            .iter()
            .map(|c| &c.num().clone() * &l.exact_div(c.den()))
            .collect();
        (l, polys)
    }

    /// Value at λ ∈ K, evaluated homogeneously in F_{q^s}[t] by binary
    /// splitting, with a single reduction at the end.
    pub fn evaluate(&self, lambda: &RatFunc) -> RatFunc {
        let f = &self.field;
        let Some(d) = self.degree() else { return RatFunc::zero(f) };
        if d == 0 {
            return self.coeffs[0].clone();
        }
        let (l, polys) = self.cleared();
        let mut powers = Powers { n: lambda.num(), w: lambda.den(), cache: HashMap::new() };
        let acc = homogeneous(&polys, &mut powers);
        let den = if lambda.den().is_one() { l } else { &l * &lambda.den().pow(d as u64) };
        RatFunc::new(acc, den)
    }

    /// Division with remainder over K.
    pub fn div_rem(&self, d: &ParamPoly) -> (ParamPoly, ParamPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial in K[z]");
        let f = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return (ParamPoly::zero(f), self.clone());
        }
        let dn = d.coeffs.len() - 1;
        let inv_lc = d.leading_coeff().inv();
        let mut r = self.coeffs.clone();
        let mut quot = vec![RatFunc::zero(f); r.len() - dn];
        for k in (0..quot.len()).rev() {
            if r[k + dn].is_zero() {
                continue;
            }
            let m = &r[k + dn] * &inv_lc;
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + j] = &r[k + j] - &(&m * dc);
                }
            }
            quot[k] = m;
        }
        r.truncate(dn);
        (ParamPoly::new(f, quot), ParamPoly::new(f, r))
    }

    fn zip_with(&self, other: &ParamPoly, op: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> ParamPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = RatFunc::zero(&self.field);
        let coeffs = (0..n)
            .map(|i| op(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        ParamPoly::new(&self.field, coeffs)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;

    fn add(self, other: &ParamPoly) -> ParamPoly {
        self.zip_with(other, |a, b| a + b)
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;

    fn sub(self, other: &ParamPoly) -> ParamPoly {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;

    fn neg(self) -> ParamPoly {
        ParamPoly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;

    fn mul(self, other: &ParamPoly) -> ParamPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return ParamPoly::zero(f);
        }
        let mut out = vec![RatFunc::zero(f); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        ParamPoly::new(f, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, other: ParamPoly) -> ParamPoly {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

/// Highest power of z first, e.g. `z^3+t*z` or `(t+1)*z+1/t`.
impl fmt::Display for ParamPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let cs = c.to_string();
            if i == 0 {
                write!(out, "{cs}")?;
            } else if c.is_one() {
                write!(out, "{mono}")?;
            } else if cs.contains('+') || cs.contains('/') {
                write!(out, "({cs})*{mono}")?;
            } else {
                write!(out, "{cs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Cached powers of num(λ) and den(λ).
struct Powers<'a> {
    n: &'a FqPoly,
    w: &'a FqPoly,
    cache: HashMap<(bool, usize), FqPoly>,
}

impl Powers<'_> {
    fn get(&mut self, of_num: bool, k: usize) -> &FqPoly {
        let base = if of_num { self.n } else { self.w };
        self.cache.entry((of_num, k)).or_insert_with(|| base.pow(k as u64))
    }
}

/// Σ b_i n^i w^{len−1−i}.
fn homogeneous(b: &[FqPoly], pw: &mut Powers<'_>) -> FqPoly {
    let len = b.len();
    if len == 1 || b.iter().all(|x| x.is_zero()) {
        return b[0].clone();
    }
    let mid = len / 2;
    let lo = homogeneous(&b[..mid], pw);
    let hi = homogeneous(&b[mid..], pw);
    let mut acc = FqPoly::zero(lo.field());
    if !lo.is_zero() {
        acc = &lo * pw.get(false, len - mid);
    }
    if !hi.is_zero() {
        acc = &acc + &(pw.get(true, mid) * &hi);
    }
    acc
}
