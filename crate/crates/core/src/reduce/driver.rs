use std::fmt;

use super::sigma::SigmaData;
use super::state::ReductionState;
use super::step::{attempt_lrm, lrm_step, LrmAttempt};
use super::trace::{StepKind, Trace, TraceStep};
use super::translate::{
    case2_finish, char0_translate, defectless_translate, Case2Result, DefectlessOutcome,
};
use crate::error::{Error, Result};
use crate::oracle::{BestApprox, ValueResult};
use crate::perron::DEFAULT_PERRON_STEPS;
use crate::poly::LastOrder;

pub const DEFAULT_TRANSLATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Translations allowed, also the step bound of each best approximation.
    pub max_translations: usize,
    pub max_perron_steps: usize,
    /// Try the case-2 substitution when the approximation ladder never leaves
    /// the base group, instead of stopping with `DEFECT-SUSPECTED`.
    pub case2_on_ladder: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_translations: DEFAULT_TRANSLATIONS,
            max_perron_steps: DEFAULT_PERRON_STEPS,
            case2_on_ladder: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStatus {
    ReducedToSmooth,
    MultiplicityDropped(u32),
    DefectSuspected,
    BoundExhausted,
}

impl fmt::Display for ReductionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionStatus::ReducedToSmooth => f.write_str("REDUCED-TO-SMOOTH"),
            ReductionStatus::MultiplicityDropped(r) => write!(f, "MULTIPLICITY-DROPPED({r})"),
            ReductionStatus::DefectSuspected => f.write_str("DEFECT-SUSPECTED"),
            ReductionStatus::BoundExhausted => f.write_str("BOUND-EXHAUSTED"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub status: ReductionStatus,
    pub trace: Trace,
    pub state: ReductionState,
    pub lrm_steps: usize,
    pub translations: usize,
    /// SigmaData of attempts whose multiplicity did not drop.
    pub rejected: Vec<SigmaData>,
}

fn runs_out(e: &Error) -> bool {
    matches!(
        e,
        Error::TruncationExhausted(_) | Error::StepBoundExceeded(_)
    )
}

struct Run {
    trace: Trace,
    state: ReductionState,
    lrm_steps: usize,
    translations: usize,
    rejected: Vec<SigmaData>,
}

impl Run {
    fn finish(mut self, status: ReductionStatus) -> Reduction {
        self.trace.status = status.to_string();
        self.trace.r = match self.state.r() {
            LastOrder::Finite(r) => Some(r),
            LastOrder::Infinite => None,
        };
        self.trace.certificates.final_arc_consistent = self.state.oracle().is_consistent();
        Reduction {
            status,
            trace: self.trace,
            state: self.state,
            lrm_steps: self.lrm_steps,
            translations: self.translations,
            rejected: self.rejected,
        }
    }

    fn exhausted(mut self, e: &Error) -> Reduction {
        self.trace.certificates.diagnostic = Some(e.to_string());
        self.finish(ReductionStatus::BoundExhausted)
    }

    fn dropped(mut self, from: &ReductionState, a: LrmAttempt) -> Reduction {
        self.trace.steps.extend(a.trace_steps(from.f()));
        self.lrm_steps += 1;
        self.state = a.state;
        self.finish(drop_status(a.r1))
    }

    fn case2(mut self, c: Case2Result) -> Reduction {
        self.trace.steps.extend(c.trace_steps());
        for t in &c.translations {
            self.trace
                .certificates
                .translation_values
                .push(t.after.to_string());
        }
        self.translations += c.translations.len();
        let r1 = c.strict.residual.ord_last();
        self.state = c.state;
        self.finish(drop_status(r1))
    }

    fn ladder(&mut self, best: &BestApprox) {
        self.trace.certificates.ladder = best.ladder.iter().map(ToString::to_string).collect();
        self.trace.certificates.diagnostic = best.diagnostic.clone();
    }
}

fn drop_status(r1: LastOrder) -> ReductionStatus {
    match r1 {
        LastOrder::Finite(1) => ReductionStatus::ReducedToSmooth,
        LastOrder::Finite(r) => ReductionStatus::MultiplicityDropped(r),
        LastOrder::Infinite => ReductionStatus::MultiplicityDropped(0),
    }
}

/// Alternates translations and Perron steps until the multiplicity drops.
///
/// In characteristic 0 a step is attempted first; if it does not lower the
/// multiplicity, `xm` is translated with the `xm^{r-1}` coefficient, falling
/// back to the best approximation on a binomial obstruction. In positive
/// characteristic the best approximation is used directly.
pub fn reduce(s0: &ReductionState, bounds: &Bounds) -> Result<Reduction> {
    let ring = s0.ring();
    let m = ring.m;
    let char0 = ring.field.is_zero_characteristic();
    let mut run = Run {
        trace: Trace::start(ring, s0.oracle().context().to_string(), s0.f()),
        state: s0.clone(),
        lrm_steps: 0,
        translations: 0,
        rejected: Vec::new(),
    };
    if char0 {
        let dv = s0.oracle().value(&s0.f().derivative(m - 1))?;
        run.trace.certificates.derivative_value = Some(dv.to_string());
    }
    loop {
        let cur = run.state.clone();
        let z = match cur.oracle().last_value()? {
            ValueResult::Value(v) => v,
            ValueResult::AboveTruncation(b) => {
                let e = Error::TruncationExhausted(format!("nu*(x_m) is at least {b}"));
                return Ok(run.exhausted(&e));
            }
            ValueResult::Infinite => {
                return Err(Error::Precondition("x_m vanishes on the arc".into()))
            }
        };
        if !cur.oracle().base_lattice()?.contains(&z)? {
            return match lrm_step(&cur, bounds.max_perron_steps) {
                Ok(a) => Ok(run.dropped(&cur, a)),
                Err(e) if runs_out(&e) => Ok(run.exhausted(&e)),
                Err(e) => Err(e),
            };
        }
        if run.translations >= bounds.max_translations {
            let e = Error::StepBoundExceeded(bounds.max_translations);
            return Ok(run.exhausted(&e));
        }
        if char0 {
            let rejected = match attempt_lrm(&cur, bounds.max_perron_steps) {
                Ok(a) if a.dropped() => return Ok(run.dropped(&cur, a)),
                Ok(a) => Some(a.sigma),
                Err(e) if runs_out(&e) => return Ok(run.exhausted(&e)),
                Err(Error::Unsupported(_)) => None,
                Err(e) => return Err(e),
            };
            match char0_translate(&cur) {
                Ok(t) => {
                    let mut step = t.trace_step(StepKind::TranslateChar0);
                    step.sigma = rejected.clone();
                    run.rejected.extend(rejected);
                    run.trace.steps.push(step);
                    run.trace
                        .certificates
                        .translation_values
                        .push(t.after.to_string());
                    run.translations += 1;
                    run.state = t.state;
                    continue;
                }
                Err(Error::BinomialObstruction(_)) => {}
                Err(e) if runs_out(&e) => return Ok(run.exhausted(&e)),
                Err(e) => return Err(e),
            }
        }
        match defectless_translate(&cur, bounds.max_translations)? {
            DefectlessOutcome::Translated(t, best) => {
                let mut step: TraceStep = t.trace_step(StepKind::TranslateDefectless);
                step.ladder = Some(best.ladder.iter().map(ToString::to_string).collect());
                run.trace.steps.push(step);
                run.trace
                    .certificates
                    .translation_values
                    .push(t.after.to_string());
                run.translations += 1;
                run.state = t.state;
            }
            DefectlessOutcome::DefectSuspected(best) => {
                run.ladder(&best);
                if bounds.case2_on_ladder {
                    match case2_finish(&cur, bounds.max_translations) {
                        Ok(c) => return Ok(run.case2(c)),
                        Err(Error::NotCase2(_)) => {}
                        Err(e) if runs_out(&e) => {}
                        Err(e) => return Err(e),
                    }
                }
                return Ok(run.finish(ReductionStatus::DefectSuspected));
            }
            DefectlessOutcome::Case2Signal(best) => {
                run.ladder(&best);
                return match case2_finish(&cur, bounds.max_translations) {
                    Ok(c) => Ok(run.case2(c)),
                    Err(e) if runs_out(&e) => Ok(run.exhausted(&e)),
                    Err(e) => Err(e),
                };
            }
        }
    }
}
