use super::state::ReductionState;
use super::trace::{StepKind, TraceStep};
use crate::error::{Error, Result};
use crate::oracle::{ApproxStatus, BestApprox, ValueResult};
use crate::poly::{LastOrder, Polynomial, Ring, StrictTransform};
use crate::scalars::{PuiseuxSeries, Scalar};
use crate::valgroup::Value;

/// The change of variables `xm' = xm - h` with `h` in `k[x1..x_{m-1}]`.
#[derive(Debug, Clone)]
pub struct Translation {
    pub state: ReductionState,
    pub h: Polynomial,
    pub omega: Option<Scalar>,
    pub before: Value,
    pub after: ValueResult,
}

impl Translation {
    pub(crate) fn trace_step(&self, kind: StepKind) -> TraceStep {
        let mut step = TraceStep::new(kind, self.state.f());
        step.h = Some(self.h.to_string());
        step.omega = self.omega.as_ref().map(ToString::to_string);
        step.gamma = Some(self.after.to_string());
        step
    }
}

fn translate(s: &ReductionState, h: &Polynomial) -> Result<ReductionState> {
    let m = s.ring().m;
    if h.depends_on(m - 1) {
        return Err(Error::Internal("translation must not involve x_m".into()));
    }
    let f = s.f().translate_last(h);
    let mut arc = s.oracle().arc().to_vec();
    arc[m - 1] = arc[m - 1].sub(&h.evaluate_at_arc(s.oracle().arc())?);
    Ok(s.advanced(s.oracle().replaced(f, arc)?))
}

fn improves(before: &Value, after: &ValueResult) -> bool {
    match after {
        ValueResult::Value(v) => v > before,
        ValueResult::AboveTruncation(_) | ValueResult::Infinite => true,
    }
}

fn require_in_group(s: &ReductionState) -> Result<Value> {
    let z = s.z_value()?;
    if !s.oracle().base_lattice()?.contains(&z)? {
        return Err(Error::PreconditionValueNotInGroup(z.to_string()));
    }
    Ok(z)
}

/// Removes the leading part of `xm` using the coefficient of `xm^{r-1}`:
/// `xm' = xm - omega a_{r-1}` with `omega` the residue of `xm / a_{r-1}`.
pub fn char0_translate(s: &ReductionState) -> Result<Translation> {
    let before = require_in_group(s)?;
    let r = s.multiplicity()?;
    let a = s
        .f()
        .expand_last()
        .coefficient(r as usize - 1)
        .cloned()
        .filter(|a| !a.is_zero())
        .ok_or_else(|| {
            Error::BinomialObstruction(format!("the coefficient of x_m^{} vanishes", r - 1))
        })?;
    match s.oracle().value(&a)? {
        ValueResult::Value(v) if v == before => {}
        other => {
            return Err(Error::BinomialObstruction(format!(
                "nu*(a_{}) = {other} differs from nu*(x_m) = {before}",
                r - 1
            )))
        }
    }
    let omega = s.oracle().residue(&s.last(), &a)?;
    let h = a.scale(&omega);
    let state = translate(s, &h)?;
    let after = state.oracle().last_value()?;
    if !improves(&before, &after) {
        return Err(Error::Internal(format!(
            "translation by {h} did not raise nu*(x_m)"
        )));
    }
    Ok(Translation {
        state,
        h,
        omega: Some(omega),
        before,
        after,
    })
}

#[derive(Debug, Clone)]
pub enum DefectlessOutcome {
    /// `nu*(xm')` now lies outside the base group.
    Translated(Box<Translation>, BestApprox),
    /// The approximation values kept rising inside the base group.
    DefectSuspected(BestApprox),
    /// `xm - h` vanishes on the arc: `z` lies in the base ring's completion.
    Case2Signal(BestApprox),
}

/// Translates by the best approximation of `xm` from `k[x1..x_{m-1}]`.
pub fn defectless_translate(s: &ReductionState, bound: usize) -> Result<DefectlessOutcome> {
    let before = require_in_group(s)?;
    let best = s.oracle().best_approx(bound)?;
    match best.status {
        ApproxStatus::NoMaxUpToBound => Ok(DefectlessOutcome::DefectSuspected(best)),
        ApproxStatus::Infinite => Ok(DefectlessOutcome::Case2Signal(best)),
        ApproxStatus::MaxOutside => {
            let state = translate(s, &best.h)?;
            let after = state.oracle().last_value()?;
            Ok(DefectlessOutcome::Translated(
                Box::new(Translation {
                    state,
                    h: best.h.clone(),
                    omega: None,
                    before,
                    after,
                }),
                best,
            ))
        }
    }
}

/// Images for `xm = x^b (xm + beta)`.
pub(crate) fn case2_images(ring: Ring, b: &[u32], beta: &Scalar) -> Result<Vec<Polynomial>> {
    let m = ring.m;
    if b.len() != m || b[m - 1] != 0 {
        return Err(Error::Parse(
            "`b` must have one entry per variable and none on x_m".into(),
        ));
    }
    let mut images: Vec<Polynomial> = (0..m).map(|i| Polynomial::var(ring, i)).collect();
    let xb = Polynomial::monomial(ring, b.to_vec(), ring.field.one());
    images[m - 1] = &xb * &Polynomial::last_plus(ring, beta.clone());
    Ok(images)
}

#[derive(Debug, Clone)]
pub struct Case2Result {
    pub state: ReductionState,
    /// Residue-step translations made before the final substitution.
    pub translations: Vec<Translation>,
    pub b: Vec<u32>,
    pub beta: Scalar,
    pub substituted: Polynomial,
    pub strict: StrictTransform,
}

impl Case2Result {
    pub(crate) fn trace_steps(&self) -> Vec<TraceStep> {
        let mut steps: Vec<TraceStep> = self
            .translations
            .iter()
            .map(|t| t.trace_step(StepKind::TranslateDefectless))
            .collect();
        let mut a9 = TraceStep::new(StepKind::Case2, &self.substituted);
        a9.b = Some(self.b.clone());
        a9.beta = Some(self.beta.to_string());
        let mut st = TraceStep::new(StepKind::StrictTransform, &self.strict.residual);
        st.monomial = Some(self.strict.monomial.clone());
        st.lambda = Some(self.strict.lambda);
        st.c = Some(self.strict.c.to_string());
        steps.extend([a9, st]);
        steps
    }
}

/// Substitutes `xm = x^b (xm + beta)` with `x^b` the monomial of value `nu*(xm)`
/// and `beta` its residue, after residue-step translations while `nu*(xm)`
/// stays below `nu*(df/dxm)`, until the strict transform is smooth in `xm`.
pub fn case2_finish(s: &ReductionState, bound: usize) -> Result<Case2Result> {
    let ring = s.ring();
    let m = ring.m;
    let ceiling = s.oracle().value(&s.f().derivative(m - 1))?;
    let mut cur = s.clone();
    let mut translations = Vec::new();
    for _ in 0..=bound {
        let z = match cur.oracle().last_value()? {
            ValueResult::Value(v) => v,
            ValueResult::Infinite => {
                return Err(Error::NotCase2(
                    "x_m vanishes identically on the arc".into(),
                ))
            }
            ValueResult::AboveTruncation(b) => {
                return Err(Error::TruncationExhausted(format!(
                    "nu*(x_m) is at least {b}"
                )))
            }
        };
        let b = cur
            .oracle()
            .witness_monomial(&z)
            .ok_or_else(|| Error::NotCase2(format!("no base monomial has value {z}")))?;
        let xb = Polynomial::monomial(ring, b.clone(), ring.field.one());
        let beta = cur.oracle().residue(&cur.last(), &xb)?;
        if beta.is_zero() {
            return Err(Error::NotCase2("residue beta is 0".into()));
        }
        let substituted = cur.f().compose(&case2_images(ring, &b, &beta)?);
        let strict = substituted.strict_transform(&beta);
        if strict.residual.ord_last() == LastOrder::Finite(1) {
            let o = cur.oracle();
            let mut arc = o.arc().to_vec();
            let xb_t = xb.evaluate_at_arc(o.arc())?;
            arc[m - 1] = arc[m - 1]
                .mul(&xb_t.inverse()?)
                .sub(&PuiseuxSeries::constant(beta.clone()));
            let state = cur.advanced(o.replaced(strict.residual.clone(), arc)?);
            return Ok(Case2Result {
                state,
                translations,
                b,
                beta,
                substituted,
                strict,
            });
        }
        let below = match &ceiling {
            ValueResult::Value(t) => z <= *t,
            _ => true,
        };
        if !below {
            return Err(Error::NotCase2(format!(
                "nu*(x_m) = {z} passed nu*(df/dx_m) = {ceiling} without a smooth strict transform"
            )));
        }
        let h = xb.scale(&beta);
        let state = translate(&cur, &h)?;
        let after = state.oracle().last_value()?;
        translations.push(Translation {
            state: state.clone(),
            h,
            omega: None,
            before: z,
            after,
        });
        cur = state;
    }
    Err(Error::StepBoundExceeded(bound))
}
