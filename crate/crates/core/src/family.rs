//! The one-parameter family Φ_t(x) = tx + Σ g_i(z)x^{q^i} + x^{q^r} over
//! K[z], the iterates f_{c,n} = Φ_{t^n}(c) and specialization z ↦ λ.

use std::fmt;

use num_traits::Zero;

use crate::field::{int, Field, ParamPoly, RatFunc, Rational};
use crate::ore::DrinfeldModule;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("family rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("expected {expected} coefficients g_1..g_(r-1), got {got}")]
    WrongCoefficientCount { expected: usize, got: usize },
    #[error("the starting point fails the degree hypothesis (margin {margin})")]
    HypothesisFails { margin: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyModule {
    module: DrinfeldModule<ParamPoly>,
}

/// Outcome of comparing deg c against max_i d_i/(q^r − q^i).
#[derive(Clone, Debug, PartialEq)]
pub struct Hypothesis {
    pub holds: bool,
    /// max_i d_i/(q^r − q^i) over nonzero g_i, with g_0 = t.
    pub bound: Rational,
    /// deg c − bound; `None` when c = 0.
    pub margin: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeLaw {
    pub degree: usize,
    pub leading: RatFunc,
    pub expected_degree: usize,
    pub expected_leading: RatFunc,
}

impl DegreeLaw {
    pub fn holds(&self) -> bool {
        self.degree == self.expected_degree && self.leading == self.expected_leading
    }
}

impl FamilyModule {
    pub fn new(field: &Field, r: usize, g: Vec<ParamPoly>) -> Result<Self, FamilyError> {
        if r < 2 {
            return Err(FamilyError::RankTooSmall(r));
        }
        if g.len() != r - 1 {
            return Err(FamilyError::WrongCoefficientCount { expected: r - 1, got: g.len() });
        }
        Ok(FamilyModule { module: DrinfeldModule::new(field, g) })
    }

    /// The family Φ_t = t + zτ + τ^r.
    pub fn standard(field: &Field, r: usize) -> Result<Self, FamilyError> {
        let mut g = vec![ParamPoly::zero(field); r.saturating_sub(1)];
        if let Some(g1) = g.first_mut() {
            *g1 = ParamPoly::z(field);
        }
        FamilyModule::new(field, r, g)
    }

    pub fn field(&self) -> &Field {
        self.module.field()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    /// g_1..g_{r−1}.
    pub fn g(&self) -> &[ParamPoly] {
        let c = self.module.coefficients();
        &c[1..c.len() - 1]
    }

    pub fn module(&self) -> &DrinfeldModule<ParamPoly> {
        &self.module
    }

    /// f_{c,n} = Φ_{t^n}(c) in K[z].
    pub fn iterate_point(&self, c: &ParamPoly, n: usize) -> ParamPoly {
        self.module.act_t_pow(c, n)
    }

    /// f_{c,0}, …, f_{c,n}.
    pub fn orbit(&self, c: &ParamPoly, n: usize) -> Vec<ParamPoly> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(c.clone());
        for i in 0..n {
            let next = self.module.act_t(&out[i]);
            out.push(next);
        }
        out
    }

    pub fn hypothesis_check(&self, c: &ParamPoly) -> Hypothesis {
        let q = self.field().q() as i64;
        let r = self.rank() as u32;
        let qr = q.pow(r);
        let mut bound = Rational::zero();
        for (i, g) in self.module.coefficients()[..r as usize].iter().enumerate() {
            if let Some(d) = g.degree() {
                let b = Rational::new((d as i64).into(), (qr - q.pow(i as u32)).into());
                if b > bound {
                    bound = b;
                }
            }
        }
        let margin = c.degree().map(|m| int(m as i64) - &bound);
        let holds = margin.as_ref().is_some_and(|m| *m > Rational::zero());
        Hypothesis { holds, bound, margin }
    }

    /// Degree and leading coefficient of f_{c,n}, against m·q^{rn} and
    /// C_m^{q^{rn}}.
    pub fn degree_law_check(&self, c: &ParamPoly, n: usize) -> Result<DegreeLaw, FamilyError> {
        let hyp = self.hypothesis_check(c);
        if !hyp.holds {
            let margin = hyp.margin.map_or("-inf".into(), |m| crate::field::render_rational(&m));
            return Err(FamilyError::HypothesisFails { margin });
        }
        let f = self.iterate_point(c, n);
        let growth = (self.field().q() as usize).pow((self.rank() * n) as u32);
        let m = c.degree().expect("hypothesis implies c != 0");
        let mut expected_leading = c.leading_coeff();
        for _ in 0..self.rank() * n {
            expected_leading = expected_leading.frobenius_q();
        }
        Ok(DegreeLaw {
            degree: f.degree().unwrap_or(0),
            leading: f.leading_coeff(),
            expected_degree: m * growth,
            expected_leading,
        })
    }

    /// Φ^λ with a_i = g_i(λ).
    pub fn specialize(&self, lambda: &RatFunc) -> DrinfeldModule {
        let a = self.g().iter().map(|g| g.evaluate(lambda)).collect();
        DrinfeldModule::new(self.field(), a)
    }
}

impl fmt::Display for FamilyModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.rank())?;
        for (i, g) in self.g().iter().enumerate() {
            if !g.is_zero() {
                write!(f, ";g{}={}", i + 1, g)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqPoly;

    fn setup() -> (Field, FamilyModule, ParamPoly, RatFunc) {
        let f = Field::prime(2).unwrap();
        let fam = FamilyModule::standard(&f, 2).unwrap();
        (f.clone(), fam, ParamPoly::z(&f), RatFunc::t(&f))
    }

    fn zp(c: RatFunc, k: usize) -> ParamPoly {
        ParamPoly::monomial(c, k)
    }

    #[test]
    fn first_iterates() {
        let (f, fam, z, t) = setup();
        let one = RatFunc::one(&f);
        let f1 = fam.iterate_point(&z, 1);
        let expected = &(&zp(t.clone(), 1) + &zp(one.clone(), 3)) + &zp(one.clone(), 4);
        assert_eq!(f1, expected);
        let f1 = fam.iterate_point(&ParamPoly::one(&f), 1);
        assert_eq!(f1.to_string(), "z+t+1");
        assert_eq!(fam.iterate_point(&z, 0), z);
    }

    #[test]
    fn hypothesis_margins() {
        let (f, fam, z, _) = setup();
        let h = fam.hypothesis_check(&z);
        assert!(h.holds);
        assert_eq!(h.bound, crate::field::rat(1, 2));
        assert!(!fam.hypothesis_check(&ParamPoly::one(&f)).holds);
        let z3 = zp(RatFunc::one(&f), 3);
        let steep = FamilyModule::new(&f, 2, vec![z3]).unwrap();
        let h = steep.hypothesis_check(&z);
        assert!(!h.holds);
        assert_eq!(h.margin, Some(crate::field::rat(-1, 2)));
    }

    #[test]
    fn degree_law_instances() {
        let (f, fam, z, t) = setup();
        let law = fam.degree_law_check(&z, 1).unwrap();
        assert!(law.holds());
        assert_eq!((law.degree, law.leading.is_one()), (4, true));
        let law = fam.degree_law_check(&z, 2).unwrap();
        assert_eq!(law.degree, 16);
        assert!(law.holds());
        let tz = zp(t.clone(), 1);
        let law = fam.degree_law_check(&tz, 1).unwrap();
        assert_eq!((law.degree, law.leading.clone()), (4, t.pow(4)));
        assert!(law.holds());
        assert!(fam.degree_law_check(&ParamPoly::one(&f), 1).is_err());
    }

    #[test]
    fn specialization_and_square() {
        let (f, fam, z, t) = setup();
        let phi0 = fam.specialize(&RatFunc::zero(&f));
        assert_eq!(phi0.coefficients(), &[t.clone(), RatFunc::zero(&f), RatFunc::one(&f)]);
        let tp1 = &t + &RatFunc::one(&f);
        let phi = fam.specialize(&tp1);
        assert_eq!(phi.coefficients()[1], tp1);
        let lambda = t.pow(2);
        let lhs = fam.iterate_point(&z, 1).evaluate(&lambda);
        let rhs = fam
            .specialize(&lambda)
            .phi_image(&FqPoly::t(&f))
            .unwrap()
            .act(&z.evaluate(&lambda));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, &(&t.pow(3) + &t.pow(6)) + &t.pow(8));
    }

    #[test]
    fn rejects_bad_shapes() {
        let f = Field::prime(2).unwrap();
        assert_eq!(FamilyModule::new(&f, 1, vec![]), Err(FamilyError::RankTooSmall(1)));
        assert!(FamilyModule::new(&f, 3, vec![ParamPoly::z(&f)]).is_err());
    }
}
