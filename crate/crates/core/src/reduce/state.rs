use crate::error::{Error, Result};
use crate::oracle::{ArcValuation, ValueResult};
use crate::poly::{LastOrder, Polynomial, Ring, VariableFrame};
use crate::valgroup::Value;

/// A hypersurface `f`, monic in `xm`, together with the arc oracle centred at
/// the origin. States are immutable; every step returns a new one.
#[derive(Debug, Clone)]
pub struct ReductionState {
    oracle: ArcValuation,
    frame: VariableFrame,
}

impl ReductionState {
    /// Checks the entry conditions: `f` monic in `xm`, not divisible by a
    /// variable, `1 < r < oo`, and the arc lies on `f`.
    pub fn new(oracle: ArcValuation) -> Result<Self> {
        let f = oracle.f();
        let m = f.ring().m;
        if m < 2 {
            return Err(Error::Precondition("need at least two variables".into()));
        }
        if !f.expand_last().monic {
            return Err(Error::Precondition(format!("f = {f} is not monic in x{m}")));
        }
        if let Some(i) = f.min_exponents().iter().position(|&e| e > 0) {
            return Err(Error::Precondition(format!("f is divisible by x{}", i + 1)));
        }
        match f.ord_last() {
            LastOrder::Finite(r) if r > 1 => {}
            LastOrder::Finite(r) => {
                return Err(Error::Precondition(format!(
                    "ord f(0,...,0,x{m}) = {r}; nothing to reduce"
                )))
            }
            LastOrder::Infinite => {
                return Err(Error::Precondition(format!("f vanishes on the x{m}-axis")))
            }
        }
        if !oracle.is_consistent() {
            let res = oracle
                .residual()
                .map_or_else(|e| e.to_string(), |s| s.to_string());
            return Err(Error::InconsistentArc(format!("f(arc) = {res}")));
        }
        Ok(ReductionState {
            frame: VariableFrame::new(m, 1)?,
            oracle,
        })
    }

    pub(crate) fn advanced(&self, oracle: ArcValuation) -> Self {
        ReductionState {
            oracle,
            frame: self.frame.next_generation(),
        }
    }

    pub fn oracle(&self) -> &ArcValuation {
        &self.oracle
    }

    pub fn f(&self) -> &Polynomial {
        self.oracle.f()
    }

    pub fn ring(&self) -> Ring {
        self.oracle.ring()
    }

    pub fn frame(&self) -> VariableFrame {
        self.frame
    }

    pub fn r(&self) -> LastOrder {
        self.f().ord_last()
    }

    pub(crate) fn multiplicity(&self) -> Result<u32> {
        match self.r() {
            LastOrder::Finite(r) => Ok(r),
            LastOrder::Infinite => Err(Error::Internal("ord-last became infinite".into())),
        }
    }

    pub(crate) fn last(&self) -> Polynomial {
        Polynomial::var(self.ring(), self.ring().m - 1)
    }

    /// `nu*(xm)`, which must be finite and below truncation.
    pub fn z_value(&self) -> Result<Value> {
        match self.oracle.last_value()? {
            ValueResult::Value(v) => Ok(v),
            ValueResult::AboveTruncation(b) => Err(Error::TruncationExhausted(format!(
                "nu*(x_m) is at least {b}; raise the truncation"
            ))),
            ValueResult::Infinite => Err(Error::Precondition("x_m vanishes on the arc".into())),
        }
    }

    pub fn z_in_base_group(&self) -> Result<bool> {
        let z = self.z_value()?;
        self.oracle.base_lattice()?.contains(&z)
    }
}
