//! Valuation oracles: monomial weights, truncated arcs and augmented chains.

mod arc;
mod chain;
mod monomial;

use std::fmt;

pub use arc::{ApproxStatus, ArcValuation, BestApprox};
pub use chain::{AugmentedChain, ChainStep};
pub use monomial::MonomialValuation;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};
use crate::scalars::Scalar;
use crate::valgroup::{GeneratorContext, Value};

/// Outcome of evaluating a valuation oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueResult {
    Value(Value),
    /// The element is a multiple of the hypersurface equation.
    Infinite,
    /// Nothing survives below the truncation; the true value is at least the bound.
    AboveTruncation(Value),
}

impl ValueResult {
    pub fn value(&self) -> Option<&Value> {
        match self {
            ValueResult::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValueResult::Infinite)
    }

    pub(crate) fn expect_finite(&self, what: &str) -> Result<Value> {
        match self {
            ValueResult::Value(v) => Ok(v.clone()),
            ValueResult::Infinite => {
                Err(Error::ValueMismatch(format!("{what} has infinite value")))
            }
            ValueResult::AboveTruncation(b) => Err(Error::TruncationExhausted(format!(
                "value of {what} is beyond the truncation bound {b}"
            ))),
        }
    }
}

impl fmt::Display for ValueResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueResult::Value(v) => write!(f, "{v}"),
            ValueResult::Infinite => f.write_str("INFINITE"),
            ValueResult::AboveTruncation(b) => write!(f, "ABOVE-TRUNCATION({b})"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ValuationOracle {
    Monomial(MonomialValuation),
    Arc(ArcValuation),
    Chain(AugmentedChain),
}

impl ValuationOracle {
    pub fn ring(&self) -> Ring {
        match self {
            ValuationOracle::Monomial(o) => o.ring(),
            ValuationOracle::Arc(o) => o.ring(),
            ValuationOracle::Chain(o) => o.ring(),
        }
    }

    pub fn context(&self) -> GeneratorContext {
        match self {
            ValuationOracle::Monomial(o) => o.context(),
            ValuationOracle::Arc(o) => o.context(),
            ValuationOracle::Chain(o) => o.context(),
        }
    }

    pub fn value(&self, g: &Polynomial) -> Result<ValueResult> {
        match self {
            ValuationOracle::Monomial(o) => o.value(g),
            ValuationOracle::Arc(o) => o.value(g),
            ValuationOracle::Chain(o) => o.value(g),
        }
    }

    pub fn residue(&self, g: &Polynomial, u: &Polynomial) -> Result<Scalar> {
        match self {
            ValuationOracle::Monomial(o) => o.residue(g, u),
            ValuationOracle::Arc(o) => o.residue(g, u),
            ValuationOracle::Chain(_) => Err(Error::Unsupported(
                "residues are not available from an augmented chain".into(),
            )),
        }
    }
}

pub(crate) fn check_frame(ring: Ring, g: &Polynomial) -> Result<()> {
    if g.ring() != ring {
        return Err(Error::FrameMismatch(format!(
            "polynomial lives in `{}`, oracle in `{ring}`",
            g.ring()
        )));
    }
    Ok(())
}
