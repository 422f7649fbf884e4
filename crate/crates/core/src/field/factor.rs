//! Factorization over F_{q^s}: square-free split, distinct-degree split and
//! randomized equal-degree splitting (Cantor–Zassenhaus, with the trace map
//! in characteristic 2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fq::{Field, FqElem};
use super::poly::FqPoly;
use super::FieldError;

/// Seed used when the caller does not provide a generator.
pub const DEFAULT_SEED: u64 = 0x5eed_d21f;

/// `unit · Π factor^multiplicity`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: FqElem,
    pub factors: Vec<(FqPoly, u32)>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn expand(&self, field: &Field) -> FqPoly {
        self.factors
            .iter()
            .fold(FqPoly::constant(field, self.unit), |acc, (p, k)| &acc * &p.pow(*k as u64))
    }

    /// Render as `c*f1^k1*(f2)^k2`, omitting a unit of 1.
    pub fn render(&self, field: &Field) -> String {
        let mut parts = Vec::new();
        if !self.unit.is_one() || self.factors.is_empty() {
            let u = field.render(self.unit);
            parts.push(if u.contains('+') { format!("({u})") } else { u });
        }
        for (p, k) in &self.factors {
            let s = p.to_string();
            let s = if p.weight() > 1 || s.contains('*') { format!("({s})") } else { s };
            parts.push(if *k == 1 { s } else { format!("{s}^{k}") });
        }
        parts.join("*")
    }
}

pub fn factor_univariate(f: &FqPoly) -> Result<Factorization, FieldError> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    factor_univariate_with_rng(f, &mut rng)
}

pub fn factor_univariate_with_rng<R: Rng>(
    f: &FqPoly,
    rng: &mut R,
) -> Result<Factorization, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let unit = f.leading_coeff();
    let mut factors: Vec<(FqPoly, u32)> = Vec::new();
    for (sqf, mult) in squarefree(&f.monic()) {
        for (part, d) in distinct_degree(&sqf) {
            for irr in equal_degree(&part, d, rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort();
    let mut merged: Vec<(FqPoly, u32)> = Vec::new();
    for (p, k) in factors {
        match merged.last_mut() {
            Some((q, m)) if *q == p => *m += k,
            _ => merged.push((p, k)),
        }
    }
    Ok(Factorization { unit, factors: merged })
}

/// Square-free decomposition of a monic polynomial: pairs (g_i, i) with
/// f = Π g_i^i and each g_i square-free.
pub fn squarefree(f: &FqPoly) -> Vec<(FqPoly, u32)> {
    let field = f.field();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let p = field.characteristic();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w);
        i += 1;
    }
    if !c.is_one() {
        let root = c.root_p().expect("derivative-free remainder is a p-th power");
        for (g, k) in squarefree(&root) {
            out.push((g, k * p));
        }
    }
    out
}

/// Split a square-free monic polynomial into products of irreducibles of
/// equal degree d, returned as (product, d).
pub fn distinct_degree(f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let field = f.field();
    let big_q = field.order() as u64;
    let t = FqPoly::t(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(big_q, &rest);
        let g = (&h - &t).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&k| k > 0) {
        out.push((rest, deg));
    }
    out
}

fn random_poly<R: Rng>(field: &Field, below: usize, rng: &mut R) -> FqPoly {
    let coeffs = (0..below).map(|_| FqElem(rng.gen_range(0..field.order()))).collect();
    FqPoly::new(field, coeffs)
}

/// Split a monic square-free product of irreducibles of degree d.
pub fn equal_degree<R: Rng>(f: &FqPoly, d: usize, rng: &mut R) -> Vec<FqPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let big_q = field.order() as u64;
    loop {
        let a = random_poly(field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // trace from F_{Q^d} to F_2
            let k = field.degree() as usize * d;
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..k {
                term = term.mul_mod(&term, f);
                acc = &acc + &term;
            }
            acc
        } else {
            // a^{(Q^d-1)/2} as (a·a^Q···a^{Q^{d-1}})^{(Q-1)/2}
            let mut cur = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                cur = cur.pow_mod(big_q, f);
                norm = norm.mul_mod(&cur, f);
            }
            &norm.pow_mod((big_q - 1) / 2, f) - &FqPoly::one(field)
        };
        let g = b.gcd(f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g), d, rng));
            return out;
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &FqPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let field = f.field();
    let f = f.monic();
    let big_q = field.order() as u64;
    let t = FqPoly::t(field);
    let frob_iter = |k: usize| {
        let mut h = t.rem(&f);
        for _ in 0..k {
            h = h.pow_mod(big_q, &f);
        }
        h
    };
    if !(&frob_iter(n) - &t).rem(&f).is_zero() {
        return false;
    }
    prime_divisors(n).into_iter().all(|l| (&frob_iter(n / l) - &t).gcd(&f).is_one())
}

/// Irreducibility of a monic integer coefficient list over F_p.
pub(crate) fn is_irreducible_over_prime_field(p: u32, coeffs: &[u32]) -> bool {
    let field = Field::prime_unchecked(p);
    let f = FqPoly::new(&field, coeffs.iter().map(|&c| FqElem(c % p)).collect());
    is_irreducible(&f)
}
