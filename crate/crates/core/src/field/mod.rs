//! Exact arithmetic in F_{q^s}, F_{q^s}[t], K = F_{q^s}(t) and K[z], together
//! with places, valuations, Weil heights, factorization and root finding.

mod factor;
mod fq;
mod param;
mod place;
mod poly;
mod ratfunc;
mod roots;
mod sparse;

pub use factor::{
    distinct_degree, equal_degree, factor_univariate, factor_univariate_with_rng, is_irreducible,
    squarefree, Factorization, DEFAULT_SEED,
};
pub use fq::{Field, FieldConfig, FqElem, MAX_FIELD_ORDER};
pub use param::ParamPoly;
pub use place::{
    int, log_abs, log_abs_int, ord_at, pole_places, poly_ord, rat, render_rational,
    support_places, weil_height, LogAbs, Place, Rational,
};
pub use poly::FqPoly;
pub use ratfunc::RatFunc;
pub use roots::{
    monic_divisors, primitive_coeffs, rational_roots, RootError, RootSearch,
    DEFAULT_DIVISOR_BUDGET,
};
pub use sparse::SparsePoly;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degrees e and s must be at least 1")]
    BadDegree,
    #[error("field of order {0}^{1} exceeds the supported size")]
    TooLarge(u32, u32),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
}

impl FqPoly {
    /// Whether every coefficient lies in the subfield F_q.
    pub fn has_base_field_coeffs(&self) -> bool {
        let f = self.field();
        self.coeffs().iter().all(|&c| f.in_base_field(c))
    }
}
