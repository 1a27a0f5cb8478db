//! Reduction of multiplicity: Perron steps when `nu*(xm)` leaves the base value
//! group, translations of `xm` otherwise, with a replayable trace.

mod driver;
mod sigma;
mod state;
mod step;
mod trace;
mod translate;

pub use driver::{reduce, Bounds, Reduction, ReductionStatus, DEFAULT_TRANSLATIONS};
pub use sigma::SigmaData;
pub use state::ReductionState;
pub use step::{attempt_lrm, lrm_step, LrmAttempt};
pub use trace::{Certificates, StepKind, Trace, TraceStep};
pub use translate::{
    case2_finish, char0_translate, defectless_translate, Case2Result, DefectlessOutcome,
    Translation,
};

use crate::document::ArcDocument;
use crate::error::Result;
use crate::scalars::Exponent;

/// Runs [`reduce`] on an arc document, optionally overriding its truncation,
/// and records the document in the trace.
pub fn reduce_document(
    doc: &ArcDocument,
    trunc: Option<Exponent>,
    bounds: &Bounds,
) -> Result<Reduction> {
    let mut oracle = doc.oracle()?;
    if let Some(t) = trunc {
        oracle = oracle.truncated(t);
    }
    let mut red = reduce(&ReductionState::new(oracle)?, bounds)?;
    red.trace.initial = Some(doc.clone());
    Ok(red)
}
