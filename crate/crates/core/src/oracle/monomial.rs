use std::cmp::Ordering;

use num_rational::BigRational;

use super::{check_frame, ValueResult};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Ring};
use crate::scalars::Scalar;
use crate::valgroup::{GeneratorContext, Value};

/// Weight valuation: the value of a polynomial is the least weight of its monomials.
#[derive(Debug, Clone)]
pub struct MonomialValuation {
    ring: Ring,
    ctx: GeneratorContext,
    weights: Vec<Value>,
}

impl MonomialValuation {
    pub fn new(ring: Ring, weights: Vec<Value>) -> Result<Self> {
        if weights.len() != ring.m {
            return Err(Error::FrameMismatch(format!(
                "{} weights for {} variables",
                weights.len(),
                ring.m
            )));
        }
        let ctx = weights[0].context();
        for w in &weights {
            if w.context() != ctx {
                return Err(Error::ContextMismatch(format!("{} vs {ctx}", w.context())));
            }
            if !w.is_positive() {
                return Err(Error::Precondition(format!("weight {w} is not positive")));
            }
        }
        Ok(MonomialValuation { ring, ctx, weights })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn context(&self) -> GeneratorContext {
        self.ctx
    }

    pub fn weights(&self) -> &[Value] {
        &self.weights
    }

    pub fn monomial_value(&self, exps: &[u32]) -> Value {
        exps.iter()
            .zip(&self.weights)
            .fold(Value::zero(self.ctx), |acc, (&e, w)| {
                acc.add(&w.scale(&BigRational::from_integer(e.into())))
            })
    }

    pub fn value(&self, g: &Polynomial) -> Result<ValueResult> {
        check_frame(self.ring, g)?;
        Ok(g.terms()
            .map(|(m, _)| self.monomial_value(m.exponents()))
            .min()
            .map_or(ValueResult::Infinite, ValueResult::Value))
    }

    /// Sum of the terms of least weight.
    pub fn initial_form(&self, g: &Polynomial) -> Polynomial {
        let Some(ValueResult::Value(v)) = self.value(g).ok() else {
            return Polynomial::zero(self.ring);
        };
        Polynomial::from_terms(
            self.ring,
            g.terms()
                .filter(|(m, _)| self.monomial_value(m.exponents()).cmp(&v) == Ordering::Equal)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Class of `g / u` in the residue field: the ratio of initial forms, which must be a constant.
    pub fn residue(&self, g: &Polynomial, u: &Polynomial) -> Result<Scalar> {
        let vg = self.value(g)?.expect_finite("g")?;
        let vu = self.value(u)?.expect_finite("u")?;
        if vg != vu {
            return Err(Error::ValueMismatch(format!("{vg} vs {vu}")));
        }
        let (ig, iu) = (self.initial_form(g), self.initial_form(u));
        let (lead_g, cg) = ig.terms().next_back().expect("nonzero");
        let cu = iu.coefficient(lead_g);
        if cu.is_zero() {
            return Err(Error::Unsupported(
                "initial forms are not proportional".into(),
            ));
        }
        let ratio = cg.checked_div(&cu)?;
        if iu.scale(&ratio) != ig {
            return Err(Error::Unsupported(
                "initial forms are not proportional".into(),
            ));
        }
        Ok(ratio)
    }

    /// Leading monomial of least weight, when unique.
    pub(crate) fn minimal_monomial(&self, g: &Polynomial) -> Option<Monomial> {
        let init = self.initial_form(g);
        (init.num_terms() == 1).then(|| init.terms().next().map(|(m, _)| m.clone()))?
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    fn oracle(ctx: GeneratorContext, ws: &[&str]) -> MonomialValuation {
        let ring = Ring::new(ws.len(), FieldSpec::RATIONALS).unwrap();
        MonomialValuation::new(
            ring,
            ws.iter().map(|w| Value::parse(ctx, w).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn values_and_residues() {
        let ctx = GeneratorContext::Quadratic(2);
        let o = oracle(ctx, &["1", "sqrt(2)"]);
        let r = o.ring();
        let g = Polynomial::parse(r, "x1^2 + 3*x2 + x1*x2").unwrap();
        assert_eq!(
            o.value(&g).unwrap(),
            ValueResult::Value(Value::parse(ctx, "sqrt(2)").unwrap())
        );
        let res = o
            .residue(
                &Polynomial::parse(r, "3*x2 + x1^2").unwrap(),
                &Polynomial::parse(r, "x2").unwrap(),
            )
            .unwrap();
        assert_eq!(res, r.field.from_i64(3));
        assert!(matches!(
            o.residue(
                &Polynomial::parse(r, "x1").unwrap(),
                &Polynomial::parse(r, "x2").unwrap()
            ),
            Err(Error::ValueMismatch(_))
        ));
        assert_eq!(
            o.value(&Polynomial::zero(r)).unwrap(),
            ValueResult::Infinite
        );
    }

    #[test]
    fn rejects_nonpositive_weights() {
        let ring = Ring::new(1, FieldSpec::RATIONALS).unwrap();
        let w = Value::parse(GeneratorContext::Quadratic(2), "1 - sqrt(2)").unwrap();
        assert!(MonomialValuation::new(ring, vec![w]).is_err());
    }
}
