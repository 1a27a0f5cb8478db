use super::{check_frame, ValueResult};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};
use crate::valgroup::{GeneratorContext, Value};

/// Key polynomial `phi` (monic in `xm`) with its assigned value `gamma`.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub phi: Polynomial,
    pub gamma: Value,
}

/// Finite chain `mu_0 < mu_1 < ... < mu_k` of augmented valuations over a
/// Gauss valuation that weighs `x1..x_{m-1}` and gives `xm` the value 0.
#[derive(Debug, Clone)]
pub struct AugmentedChain {
    ring: Ring,
    ctx: GeneratorContext,
    base: Vec<Value>,
    steps: Vec<ChainStep>,
}

impl AugmentedChain {
    pub fn new(ring: Ring, base: Vec<Value>, steps: Vec<ChainStep>) -> Result<Self> {
        if base.len() + 1 != ring.m {
            return Err(Error::FrameMismatch(format!(
                "{} base weights for {} variables",
                base.len(),
                ring.m
            )));
        }
        let ctx = base
            .first()
            .map(Value::context)
            .ok_or_else(|| Error::Precondition("the chain needs at least two variables".into()))?;
        for w in &base {
            if w.context() != ctx || !w.is_positive() {
                return Err(Error::Precondition(format!("bad base weight {w}")));
            }
        }
        let mut chain = AugmentedChain {
            ring,
            ctx,
            base,
            steps: Vec::new(),
        };
        let mut last_deg = 0;
        for (l, step) in steps.into_iter().enumerate() {
            check_frame(ring, &step.phi)?;
            let exp = step.phi.expand_last();
            if !exp.monic || exp.degree() == 0 {
                return Err(Error::Precondition(format!(
                    "key polynomial {} is not monic in the last variable",
                    step.phi
                )));
            }
            if exp.degree() <= last_deg {
                return Err(Error::Precondition(format!(
                    "key polynomial degrees must increase (step {})",
                    l + 1
                )));
            }
            let prev = chain.mu(l, &step.phi)?;
            if step.gamma.context() != ctx || step.gamma <= prev {
                return Err(Error::Precondition(format!(
                    "gamma {} must exceed the previous value {prev} of {}",
                    step.gamma, step.phi
                )));
            }
            last_deg = exp.degree();
            chain.steps.push(step);
        }
        Ok(chain)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn context(&self) -> GeneratorContext {
        self.ctx
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    /// `mu_level(g)` for nonzero `g`.
    fn mu(&self, level: usize, g: &Polynomial) -> Result<Value> {
        if level == 0 {
            return g
                .terms()
                .map(|(m, _)| {
                    m.exponents()
                        .iter()
                        .zip(&self.base)
                        .fold(Value::zero(self.ctx), |acc, (&e, w)| {
                            acc.add(&w.scale_int(e as i64))
                        })
                })
                .min()
                .ok_or_else(|| Error::Internal("mu of zero".into()));
        }
        let step = &self.steps[level - 1];
        let mut best: Option<Value> = None;
        let mut rest = g.clone();
        let mut i = 0i64;
        while !rest.is_zero() {
            let (q, r) = rest
                .div_rem_last(&step.phi)
                .ok_or_else(|| Error::Internal("key polynomial is not monic".into()))?;
            if !r.is_zero() {
                let v = self.mu(level - 1, &r)?.add(&step.gamma.scale_int(i));
                best = Some(match best {
                    Some(b) if b <= v => b,
                    _ => v,
                });
            }
            rest = q;
            i += 1;
        }
        best.ok_or_else(|| Error::Internal("mu of zero".into()))
    }

    pub fn value(&self, g: &Polynomial) -> Result<ValueResult> {
        check_frame(self.ring, g)?;
        if g.is_zero() {
            return Ok(ValueResult::Infinite);
        }
        Ok(ValueResult::Value(self.mu(self.steps.len(), g)?))
    }
}
