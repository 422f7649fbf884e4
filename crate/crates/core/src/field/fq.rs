//! The constant field F_{q^s} = F_p[u]/(modulus), with q = p^e.
//!
//! Elements are stored as their coordinate vector in the basis 1, u, u², …
//! packed into a single base-p integer, so `FqElem(k)` has coordinates given
//! by the base-p digits of `k`. Multiplication goes through discrete log and
//! exponential tables, which caps the field size at [`MAX_FIELD_ORDER`].

use std::fmt;
use std::sync::Arc;

use super::FieldError;

/// Largest supported order p^{e·s} of the constant field.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 729;

/// An element of F_{q^s}. Only meaningful together with the [`Field`] it
/// was produced by.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }

    /// Packed base-p index of the element.
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Parameters and lookup tables of one constant field.
pub struct FieldConfig {
    p: u32,
    e: u32,
    s: u32,
    /// Coefficients of the monic modulus over F_p, lowest degree first.
    modulus: Vec<u32>,
    order: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// Shared handle to a [`FieldConfig`]. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldConfig>);

impl std::ops::Deref for Field {
    type Target = FieldConfig;

    fn deref(&self) -> &FieldConfig {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p
                && self.e == other.e
                && self.s == other.s
                && self.modulus == other.modulus)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.p, self.e, self.s).hash(state);
        self.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{} (p={}, e={}, s={}, modulus={:?})",
            self.p,
            self.e * self.s,
            self.p,
            self.e,
            self.s,
            self.modulus
        )
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two residues of F_p[u]/(modulus) given as digit vectors.
fn slow_mul(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..n {
            let sub = c * modulus[i] as u64 % p as u64;
            prod[k - n + i] = (prod[k - n + i] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(n);
    prod.into_iter().map(|x| x as u32).collect()
}

fn digits(mut k: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = k % p;
        k /= p;
    }
    out
}

fn pack(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl Field {
    /// Build F_{q^s} with q = p^e. When `modulus` is `None` the first monic
    /// irreducible polynomial of degree e·s in base-p counting order is used.
    pub fn new(p: u32, e: u32, s: u32, modulus: Option<Vec<u32>>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 || s == 0 {
            return Err(FieldError::BadDegree);
        }
        let n = e * s;
        let order = (p as u64).checked_pow(n).filter(|&o| o <= MAX_FIELD_ORDER);
        let Some(order) = order else {
            return Err(FieldError::TooLarge(p, n));
        };
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.into_iter().map(|c| c % p).collect();
                if m.len() != n as usize + 1 || m[n as usize] != 1 {
                    return Err(FieldError::BadModulus(
                        "modulus must be monic of degree e*s".into(),
                    ));
                }
                if !super::factor::is_irreducible_over_prime_field(p, &m) {
                    return Err(FieldError::BadModulus("modulus is reducible over F_p".into()));
                }
                m
            }
            None => default_modulus(p, n),
        };
        Ok(Field(Arc::new(FieldConfig::build(p, e, s, modulus, order as u32))))
    }

    /// The prime field F_p (e = s = 1).
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1, 1, None)
    }

    pub(crate) fn prime_unchecked(p: u32) -> Field {
        Field(Arc::new(FieldConfig::build(p, 1, 1, vec![0, 1], p)))
    }
}

pub(crate) fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1];
    }
    let total = p.pow(n);
    for k in 0..total {
        let mut m = digits(k, p, n as usize);
        m.push(1);
        if super::factor::is_irreducible_over_prime_field(p, &m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldConfig {
    fn build(p: u32, e: u32, s: u32, modulus: Vec<u32>, order: u32) -> FieldConfig {
        let n = (e * s) as usize;
        let q = p.pow(e);
        let one = digits(1, p, n);
        // search for a multiplicative generator
        let mut exp = Vec::new();
        for cand in 1..order {
            let g = digits(cand, p, n);
            let mut cur = one.clone();
            let mut seq = Vec::with_capacity(order as usize - 1);
            loop {
                seq.push(pack(&cur, p));
                cur = slow_mul(&cur, &g, &modulus, p);
                if cur == one {
                    break;
                }
            }
            if seq.len() == order as usize - 1 {
                exp = seq;
                break;
            }
        }
        let mut log = vec![0u32; order as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let m = exp.len();
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
        let neg = (0..order)
            .map(|k| pack(&digits(k, p, n).iter().map(|&d| (p - d) % p).collect::<Vec<_>>(), p))
            .collect();
        let add = if p != 2 && order <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                let da = digits(a, p, n);
                for b in 0..order {
                    let db = digits(b, p, n);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * order + b) as usize] = pack(&sum, p);
                }
            }
            Some(t)
        } else {
            None
        };
        debug_assert_eq!(m, order as usize - 1);
        FieldConfig { p, e, s, modulus, order, q, exp: doubled, log, neg, add }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// q = p^e, the size of the operator constants F_q.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// q^s, the number of elements of the working constant field.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree e·s of the modulus.
    pub fn degree(&self) -> u32 {
        self.e * self.s
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given F_p coordinates (lowest first, reduced mod p).
    pub fn from_coords(&self, coords: &[u32]) -> FqElem {
        let n = self.degree() as usize;
        let mut d = vec![0u32; n];
        for (i, &c) in coords.iter().enumerate().take(n) {
            d[i] = c % self.p;
        }
        FqElem(pack(&d, self.p))
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        digits(a.0, self.p, self.degree() as usize)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> FqElem {
        FqElem(k.rem_euclid(self.p as i64) as u32)
    }

    /// The class of u, the generator of F_p[u]/(modulus).
    pub fn generator_u(&self) -> FqElem {
        if self.degree() == 1 {
            // u is a root of the linear modulus u + m0
            self.neg(FqElem(self.modulus[0]))
        } else {
            FqElem(self.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.order).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if let Some(t) = &self.add {
            return FqElem(t[(a.0 * self.order + b.0) as usize]);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        FqElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero in F_q");
        let m = self.order - 1;
        FqElem(self.exp[((m - self.log[a.0 as usize]) % m) as usize])
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FqElem, k: u64) -> FqElem {
        if k == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let m = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (k % m)) % m;
        FqElem(self.exp[l as usize])
    }

    /// a ↦ a^p.
    pub fn frob_p(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// a ↦ a^q.
    pub fn frob_q(&self, a: FqElem) -> FqElem {
        self.pow(a, self.q as u64)
    }

    /// The unique b with b^p = a.
    pub fn root_p(&self, a: FqElem) -> FqElem {
        // a^{p^{n-1}} is the inverse Frobenius on F_{p^n}
        let mut b = a;
        for _ in 1..self.degree() {
            b = self.frob_p(b);
        }
        b
    }

    /// Membership in the subfield F_q = {a : a^q = a}.
    pub fn in_base_field(&self, a: FqElem) -> bool {
        self.frob_q(a) == a
    }

    pub fn in_prime_field(&self, a: FqElem) -> bool {
        self.frob_p(a) == a
    }

    /// Render in the element grammar: an integer when the element lies in
    /// F_p, otherwise a polynomial in `u`.
    pub fn render(&self, a: FqElem) -> String {
        if a.0 < self.p {
            return a.0.to_string();
        }
        let d = self.coords(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }
}
