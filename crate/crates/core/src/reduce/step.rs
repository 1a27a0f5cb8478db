use super::sigma::SigmaData;
use super::state::ReductionState;
use super::trace::{StepKind, TraceStep};
use crate::document::TransformDoc;
use crate::error::{Error, Result};
use crate::oracle::ValueResult;
use crate::perron::{build_a1, PerronTransform};
use crate::poly::{LastOrder, Polynomial, StrictTransform};
use crate::scalars::PuiseuxSeries;
use crate::valgroup::Value;

/// Everything computed by one Perron-transform-and-strict-transform step.
#[derive(Debug, Clone)]
pub struct LrmAttempt {
    pub state: ReductionState,
    /// Power of `x1` in each `xm`-coefficient of `f`.
    pub elu: Vec<Option<u32>>,
    pub sigma: SigmaData,
    pub transform: PerronTransform,
    pub substituted: Polynomial,
    pub strict: StrictTransform,
    pub r: u32,
    pub r1: LastOrder,
    /// Whether the forced shape holds, evaluated only when `r1 = r`.
    pub trichotomy: Option<bool>,
}

impl LrmAttempt {
    pub fn dropped(&self) -> bool {
        matches!(self.r1, LastOrder::Finite(r1) if r1 < self.r)
    }

    pub(crate) fn trace_steps(&self, f: &Polynomial) -> Vec<TraceStep> {
        let mut elu = TraceStep::new(StepKind::Elu, f);
        elu.elu = Some(self.elu.clone());
        let mut a1 = TraceStep::new(StepKind::A1, &self.substituted);
        a1.transform = Some(TransformDoc::from(&self.transform));
        a1.sigma = Some(self.sigma.clone());
        if self.sigma.d < 0 {
            a1.note = Some("d < 0 branch: review by hand".into());
        }
        let mut st = TraceStep::new(StepKind::StrictTransform, &self.strict.residual);
        st.monomial = Some(self.strict.monomial.clone());
        st.lambda = Some(self.strict.lambda);
        st.c = Some(self.strict.c.to_string());
        vec![elu, a1, st]
    }
}

fn finite(v: ValueResult, what: &str) -> Result<Value> {
    match v {
        ValueResult::Value(v) => Ok(v),
        ValueResult::AboveTruncation(b) => Err(Error::TruncationExhausted(format!(
            "{what} is at least {b}; raise the truncation"
        ))),
        ValueResult::Infinite => Err(Error::Precondition(format!("{what} is infinite"))),
    }
}

/// Writes each nonzero `xm`-coefficient as `x1^k * unit`.
fn elu(f: &Polynomial) -> Result<Vec<Option<u32>>> {
    let ring = f.ring();
    f.expand_last()
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if a.is_zero() {
                return Ok(None);
            }
            let k = a.min_exponents()[0];
            let mut e = vec![0; ring.m];
            e[0] = k;
            let u = a.div_monomial(&e).expect("minimal power divides");
            if u.constant_term().is_zero() {
                return Err(Error::Unsupported(format!(
                    "coefficient of x{}^{i} is not a power of x1 times a unit",
                    ring.m
                )));
            }
            Ok(Some(k))
        })
        .collect()
}

/// `y = x^{M^{-1}}` on the slots, then `xm <- y_{n+1} - c`.
fn transport(arc: &[PuiseuxSeries], t: &PerronTransform) -> Result<Vec<PuiseuxSeries>> {
    let m = arc.len();
    let slots = t.slots(m)?;
    let field = arc[0].field();
    let mut new = arc.to_vec();
    for (j, row) in t.inverse().iter().enumerate() {
        let mut y = PuiseuxSeries::constant(field.one());
        for (i, &e) in row.iter().enumerate() {
            y = y.mul(&arc[slots[i]].powi(e)?);
        }
        new[slots[j]] = y;
    }
    if let Some(c) = t.c() {
        new[m - 1] = new[m - 1].sub(&PuiseuxSeries::constant(c.clone()));
    }
    Ok(new)
}

/// Runs the step without requiring `nu*(xm)` outside the base group; the
/// multiplicity may then fail to drop, which the caller inspects.
pub fn attempt_lrm(s: &ReductionState, max_perron_steps: usize) -> Result<LrmAttempt> {
    let r = s.multiplicity()?;
    if r <= 1 {
        return Err(Error::Precondition(format!(
            "ord-last is {r}; nothing to reduce"
        )));
    }
    let o = s.oracle();
    let ring = s.ring();
    let m = ring.m;
    let gamma = s.z_value()?;
    let w = finite(o.value(&Polynomial::var(ring, 0))?, "nu*(x1)")?;
    let elu = elu(s.f())?;
    let terms: Vec<(u32, Vec<i64>)> = elu
        .iter()
        .enumerate()
        .filter_map(|(i, k)| k.map(|k| (i as u32, vec![k as i64])))
        .collect();

    let residue = |e: &[i64]| {
        let (mut num, mut den) = (vec![0u32; m], vec![0u32; m]);
        for (slot, var) in [(0, 0), (1, m - 1)] {
            let x = e[slot];
            if x >= 0 {
                num[var] = x as u32;
            } else {
                den[var] = (-x) as u32;
            }
        }
        let one = ring.field.one();
        o.residue(
            &Polynomial::monomial(ring, num, one.clone()),
            &Polynomial::monomial(ring, den, one),
        )
    };
    let transform = build_a1(std::slice::from_ref(&w), &gamma, residue, max_perron_steps)?;
    let sigma = SigmaData::new(&terms, std::slice::from_ref(&w), &gamma, &transform)?;
    if !sigma.formulas_hold() {
        return Err(Error::Internal(
            "exponent bookkeeping of the transform is inconsistent".into(),
        ));
    }
    let substituted = transform.substitute(s.f())?;
    let c = transform.c().cloned().expect("A1 carries c");
    let strict = substituted.strict_transform(&c);
    let r1 = strict.residual.ord_last();
    let trichotomy = (r1 == LastOrder::Finite(r)).then(|| sigma.trichotomy(r));
    let arc = transport(o.arc(), &transform)?;
    let state = s.advanced(o.replaced(strict.residual.clone(), arc)?);
    Ok(LrmAttempt {
        state,
        elu,
        sigma,
        transform,
        substituted,
        strict,
        r,
        r1,
        trichotomy,
    })
}

/// One multiplicity-reducing step, valid when `nu*(xm)` lies outside the base group.
pub fn lrm_step(s: &ReductionState, max_perron_steps: usize) -> Result<LrmAttempt> {
    if s.z_in_base_group()? {
        return Err(Error::PreconditionValueInGroup(s.z_value()?.to_string()));
    }
    let a = attempt_lrm(s, max_perron_steps)?;
    if !a.dropped() {
        return Err(Error::Internal(format!(
            "ord-last stayed at {} with nu*(x_m) outside the base group (forced shape {})",
            a.r,
            if a.trichotomy == Some(true) {
                "holds"
            } else {
                "fails"
            }
        )));
    }
    Ok(a)
}
