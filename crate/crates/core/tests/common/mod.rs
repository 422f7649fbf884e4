//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use drinfeld::family::FamilyModule;
use drinfeld::field::{int, Field, FqElem, FqPoly, ParamPoly, Place, RatFunc, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn elem<R: Rng>(field: &Field, rng: &mut R) -> FqElem {
    let all: Vec<FqElem> = field.elements().collect();
    *all.choose(rng).unwrap()
}

pub fn nonzero_elem<R: Rng>(field: &Field, rng: &mut R) -> FqElem {
    let all: Vec<FqElem> = field.elements().filter(|c| !c.is_zero()).collect();
    *all.choose(rng).unwrap()
}

/// An element of F_q inside F_{q^s}.
pub fn base_elem<R: Rng>(field: &Field, rng: &mut R) -> FqElem {
    let all: Vec<FqElem> = field.elements().filter(|&c| field.in_base_field(c)).collect();
    *all.choose(rng).unwrap()
}

pub fn poly<R: Rng>(field: &Field, max_deg: usize, rng: &mut R) -> FqPoly {
    let d = rng.gen_range(0..=max_deg);
    FqPoly::new(field, (0..=d).map(|_| elem(field, rng)).collect())
}

/// A polynomial of exact degree `d`.
pub fn poly_of_degree<R: Rng>(field: &Field, d: usize, rng: &mut R) -> FqPoly {
    let mut c: Vec<FqElem> = (0..d).map(|_| elem(field, rng)).collect();
    c.push(nonzero_elem(field, rng));
    FqPoly::new(field, c)
}

pub fn base_poly<R: Rng>(field: &Field, max_deg: usize, rng: &mut R) -> FqPoly {
    let d = rng.gen_range(0..=max_deg);
    FqPoly::new(field, (0..=d).map(|_| base_elem(field, rng)).collect())
}

pub fn nonzero_ratfunc<R: Rng>(field: &Field, max_deg: usize, rng: &mut R) -> RatFunc {
    loop {
        let num = poly(field, max_deg, rng);
        let den = poly(field, max_deg, rng);
        if !num.is_zero() && !den.is_zero() {
            return RatFunc::new(num, den);
        }
    }
}

/// Every monic polynomial over F_q of degree exactly d.
pub fn monic_base_polys(field: &Field, d: usize) -> Vec<FqPoly> {
    let base: Vec<FqElem> = field.elements().filter(|&c| field.in_base_field(c)).collect();
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v: Vec<FqElem>| {
                base.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|mut c| {
            c.push(FqElem::ONE);
            FqPoly::new(field, c)
        })
        .collect()
}

/// A random family over F_q[t][z] with rank r and a marked point of
/// degree m satisfying the degree hypothesis.
pub fn admissible<R: Rng>(field: &Field, r: usize, rng: &mut R) -> (FamilyModule, ParamPoly) {
    loop {
        let g: Vec<ParamPoly> = (1..r)
            .map(|_| {
                let dz = rng.gen_range(0..=2usize);
                let coeffs = (0..=dz).map(|_| RatFunc::from(poly(field, 1, rng))).collect();
                ParamPoly::new(field, coeffs)
            })
            .collect();
        let fam = FamilyModule::new(field, r, g).unwrap();
        let bound = fam.hypothesis_check(&ParamPoly::one(field)).bound;
        let m_min = (bound.floor().to_integer() + 1i32).try_into().unwrap_or(1usize).max(1);
        let m = m_min + rng.gen_range(0..=1usize);
        let mut coeffs: Vec<RatFunc> = (0..m).map(|_| RatFunc::from(poly(field, 1, rng))).collect();
        coeffs.push(RatFunc::from(poly_of_degree(field, rng.gen_range(0..=1), rng)));
        let c = ParamPoly::new(field, coeffs);
        if fam.hypothesis_check(&c).holds {
            return (fam, c);
        }
    }
}

/// Order of a nonzero polynomial at a place, by repeated division.
pub fn ord_oracle(a: &FqPoly, v: &Place) -> i64 {
    match v {
        Place::Infinity => -(a.degree().unwrap() as i64),
        Place::Finite(p) => {
            let mut k = 0;
            let mut x = a.clone();
            loop {
                let (q, r) = x.div_rem(p);
                if !r.is_zero() {
                    return k;
                }
                x = q;
                k += 1;
            }
        }
    }
}

/// log_q |α|_v with |·|_P = q^{−deg P · ord_P} and |·|_∞ = q^{deg}.
pub fn log_abs_oracle(alpha: &RatFunc, v: &Place) -> Rational {
    let ord = ord_oracle(alpha.num(), v) - ord_oracle(alpha.den(), v);
    let weight = match v {
        Place::Infinity => 1,
        Place::Finite(p) => p.degree().unwrap() as i64,
    };
    int(-weight * ord)
}

/// Res(P, Q) as the determinant of the Sylvester matrix, by Gaussian
/// elimination over K.
pub fn sylvester_resultant(p: &ParamPoly, q: &ParamPoly) -> RatFunc {
    let field = p.field();
    let (m, n) = (p.degree().unwrap(), q.degree().unwrap());
    let size = m + n;
    if size == 0 {
        return RatFunc::one(field);
    }
    let mut rows: Vec<Vec<RatFunc>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![RatFunc::zero(field); size];
        for (j, c) in p.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![RatFunc::zero(field); size];
        for (j, c) in q.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    let mut det = RatFunc::one(field);
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
            return RatFunc::zero(field);
        };
        if piv != col {
            rows.swap(piv, col);
            det = -&det;
        }
        let pivot = rows[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.inv();
        for r in col + 1..size {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..size {
                let sub = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - &sub;
            }
        }
    }
    det
}

/// Small constant fields used across the property tests: F_2, F_3, F_4 as
/// q = 4, F_2 with s = 2, F_5.
pub const FIELDS: [(u32, u32, u32); 5] = [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2), (5, 1, 1)];

pub fn field(i: usize) -> Field {
    let (p, e, s) = FIELDS[i % FIELDS.len()];
    Field::new(p, e, s, None).unwrap()
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Irreducibility by trial division over all monic polynomials of degree
/// at most half.
pub fn irreducible_oracle(f: &FqPoly) -> bool {
    let field = f.field();
    let d = f.degree().unwrap();
    if d == 0 {
        return false;
    }
    let elems: Vec<FqElem> = field.elements().collect();
    for k in 1..=d / 2 {
        let mut idx = vec![0usize; k];
        loop {
            let mut c: Vec<FqElem> = idx.iter().map(|&i| elems[i]).collect();
            c.push(FqElem::ONE);
            if f.rem(&FqPoly::new(field, c)).is_zero() {
                return false;
            }
            let mut j = 0;
            while j < k {
                idx[j] += 1;
                if idx[j] < elems.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
    }
    true
}
