use std::fmt;

use serde::{Deserialize, Serialize};

use super::sigma::SigmaData;
use crate::document::{ArcDocument, RingDoc, TransformDoc, VERSION};
use crate::error::{Error, Result};
use crate::poly::{LastOrder, Polynomial, Ring};
use crate::scalars::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    #[serde(rename = "ELU")]
    Elu,
    A6,
    A1,
    #[serde(rename = "TRANSLATE-CHAR0")]
    TranslateChar0,
    #[serde(rename = "TRANSLATE-DEFECTLESS")]
    TranslateDefectless,
    #[serde(rename = "CASE2")]
    Case2,
    #[serde(rename = "STRICT-TRANSFORM")]
    StrictTransform,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// One recorded step. `f` is the canonical equation after the step; the other
/// fields are the payload relevant to `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformDoc>,
    /// Power of `x1` in each `xm`-coefficient (`null` for zero coefficients).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elu: Option<Vec<Option<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    /// `nu*(xm)` after a translation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomial: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub f: String,
}

impl TraceStep {
    pub fn new(kind: StepKind, f: &Polynomial) -> Self {
        TraceStep {
            kind,
            transform: None,
            elu: None,
            sigma: None,
            h: None,
            omega: None,
            gamma: None,
            ladder: None,
            b: None,
            beta: None,
            monomial: None,
            lambda: None,
            c: None,
            note: None,
            r: match f.ord_last() {
                LastOrder::Finite(r) => Some(r),
                LastOrder::Infinite => None,
            },
            f: f.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    /// `nu*(df/dxm)`, the ceiling for characteristic-0 translation values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivative_value: Option<String>,
    #[serde(default)]
    pub translation_values: Vec<String>,
    /// Values of `xm - h` along the best-approximation ladder, when one ran out.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub final_arc_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub version: u32,
    pub kind: String,
    pub ring: RingDoc,
    pub generators: String,
    /// The input document, when the run started from one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<ArcDocument>,
    pub initial_f: String,
    pub steps: Vec<TraceStep>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub certificates: Certificates,
}

impl Trace {
    pub(crate) fn start(ring: Ring, generators: String, f: &Polynomial) -> Self {
        Trace {
            version: VERSION,
            kind: "trace".into(),
            ring: ring.into(),
            generators,
            initial: None,
            initial_f: f.to_string(),
            steps: Vec::new(),
            status: String::new(),
            r: None,
            certificates: Certificates::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Trace = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if t.version != VERSION || t.kind != "trace" {
            return Err(Error::Parse("not a version-1 trace document".into()));
        }
        Ok(t)
    }

    /// Steps of a given kind.
    pub fn steps_of(&self, kind: StepKind) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(move |s| s.kind == kind)
    }

    /// Reapplies every recorded polynomial operation to the initial equation,
    /// checking each intermediate canonical form. Returns the final equation.
    pub fn replay(&self) -> Result<Polynomial> {
        let ring = self.ring.ring()?;
        let field = ring.field;
        let mut f = Polynomial::parse(ring, &self.initial_f)?;
        let mismatch = |step: usize, detail: String| Error::ReplayMismatch { step, detail };
        if f.to_string() != self.initial_f {
            return Err(mismatch(0, "initial equation is not canonical".into()));
        }
        if let Some(doc) = &self.initial {
            let g = Polynomial::parse(doc.ring.ring()?, &doc.f)?;
            if g != f {
                return Err(mismatch(
                    0,
                    "initial equation differs from the document".into(),
                ));
            }
        }
        let scalar = |s: &Option<String>, what: &str, k: usize| -> Result<Scalar> {
            let s = s
                .as_ref()
                .ok_or_else(|| mismatch(k, format!("missing `{what}`")))?;
            Scalar::parse(field, s)
        };
        for (idx, step) in self.steps.iter().enumerate() {
            let k = idx + 1;
            f = match step.kind {
                StepKind::Elu => f,
                StepKind::A6 | StepKind::A1 => {
                    let doc = step
                        .transform
                        .as_ref()
                        .ok_or_else(|| mismatch(k, "missing transform".into()))?;
                    doc.transform(field)?.substitute(&f)?
                }
                StepKind::TranslateChar0 | StepKind::TranslateDefectless => {
                    let h = step
                        .h
                        .as_ref()
                        .ok_or_else(|| mismatch(k, "missing `h`".into()))?;
                    f.translate_last(&Polynomial::parse(ring, h)?)
                }
                StepKind::Case2 => {
                    let b = step
                        .b
                        .as_ref()
                        .ok_or_else(|| mismatch(k, "missing `b`".into()))?;
                    let beta = scalar(&step.beta, "beta", k)?;
                    f.compose(&super::translate::case2_images(ring, b, &beta)?)
                }
                StepKind::StrictTransform => {
                    let c = match &step.c {
                        Some(_) => scalar(&step.c, "c", k)?,
                        None => field.zero(),
                    };
                    let st = f.strict_transform(&c);
                    if step.monomial.as_ref() != Some(&st.monomial)
                        || step.lambda != Some(st.lambda)
                    {
                        return Err(mismatch(k, "extracted factors differ".into()));
                    }
                    if st.reconstruct() != f {
                        return Err(mismatch(k, "factors do not reconstruct".into()));
                    }
                    st.residual
                }
            };
            if f.to_string() != step.f {
                return Err(mismatch(k, format!("expected `{}`, got `{f}`", step.f)));
            }
        }
        Ok(f)
    }
}
