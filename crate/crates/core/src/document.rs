//! JSON documents: oracles, transforms, decompositions and traces all carry a
//! `"version"` field and a `"kind"` tag; polynomials and values are canonical text.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ArcValuation, AugmentedChain, ChainStep, MonomialValuation, ValuationOracle};
use crate::perron::{PerronTransform, TransformKind};
use crate::poly::{Polynomial, Ring};
use crate::scalars::{parse_rational, parse_series, to_exponent, Exponent, FieldSpec, Scalar};
use crate::valgroup::{GeneratorContext, Value};

pub const VERSION: u32 = 1;

fn version() -> u32 {
    VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v != VERSION {
        return Err(Error::Parse(format!("unsupported document version {v}")));
    }
    Ok(())
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDoc {
    pub m: usize,
    #[serde(rename = "char")]
    pub characteristic: u64,
}

impl RingDoc {
    pub fn ring(&self) -> Result<Ring> {
        Ring::new(self.m, FieldSpec::new(self.characteristic)?)
    }
}

impl From<Ring> for RingDoc {
    fn from(r: Ring) -> Self {
        RingDoc {
            m: r.m,
            characteristic: r.field.characteristic(),
        }
    }
}

/// A truncation order given as a JSON number or a rational string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TruncDoc {
    Integer(i64),
    Text(String),
}

impl TruncDoc {
    pub fn exponent(&self) -> Result<Exponent> {
        match self {
            TruncDoc::Integer(n) => Ok(Exponent::from_integer(*n)),
            TruncDoc::Text(s) => to_exponent(&parse_rational(s)?),
        }
    }
}

fn context_of(generators: &Option<String>) -> Result<GeneratorContext> {
    generators
        .as_deref()
        .map_or(Ok(GeneratorContext::Rational), GeneratorContext::parse)
}

/// Hypersurface `f` with an arc on it, components keyed `x1..xm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDocument {
    #[serde(default = "version")]
    pub version: u32,
    pub kind: String,
    pub ring: RingDoc,
    pub f: String,
    pub arc: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<TruncDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
}

impl ArcDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = parse_json(text)?;
        doc.check()?;
        Ok(doc)
    }

    fn check(&self) -> Result<()> {
        check_version(self.version)?;
        if self.kind != "arc" {
            return Err(Error::Parse(format!(
                "expected an arc document, got `{}`",
                self.kind
            )));
        }
        Ok(())
    }

    pub fn oracle(&self) -> Result<ArcValuation> {
        self.check()?;
        let ring = self.ring.ring()?;
        let ctx = context_of(&self.generators)?;
        let f = Polynomial::parse(ring, &self.f)?;
        let arc = (1..=ring.m)
            .map(|i| {
                let key = format!("x{i}");
                let s = self
                    .arc
                    .get(&key)
                    .ok_or_else(|| Error::Parse(format!("arc component `{key}` missing")))?;
                parse_series(ring.field, s)
            })
            .collect::<Result<Vec<_>>>()?;
        if self.arc.len() != ring.m {
            return Err(Error::Parse("arc has components outside x1..xm".into()));
        }
        let norm = match &self.normalization {
            Some(s) => Value::parse(ctx, s)?,
            None => Value::integer(ctx, 1),
        };
        let oracle = ArcValuation::new(f, arc, norm)?;
        Ok(match &self.trunc {
            Some(t) => oracle.truncated(t.exponent()?),
            None => oracle,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialDocument {
    #[serde(default = "version")]
    pub version: u32,
    pub kind: String,
    pub ring: RingDoc,
    pub weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
}

impl MonomialDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = parse_json(text)?;
        check_version(doc.version)?;
        Ok(doc)
    }

    pub fn context(&self) -> Result<GeneratorContext> {
        context_of(&self.generators)
    }

    pub fn values(&self) -> Result<Vec<Value>> {
        let ctx = self.context()?;
        self.weights.iter().map(|w| Value::parse(ctx, w)).collect()
    }

    pub fn oracle(&self) -> Result<MonomialValuation> {
        MonomialValuation::new(self.ring.ring()?, self.values()?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainStepDoc {
    pub phi: String,
    pub gamma: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainDocument {
    #[serde(default = "version")]
    pub version: u32,
    pub kind: String,
    pub ring: RingDoc,
    pub base: Vec<String>,
    pub steps: Vec<ChainStepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
}

impl ChainDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = parse_json(text)?;
        check_version(doc.version)?;
        Ok(doc)
    }

    pub fn oracle(&self) -> Result<AugmentedChain> {
        let ring = self.ring.ring()?;
        let ctx = context_of(&self.generators)?;
        let base = self
            .base
            .iter()
            .map(|b| Value::parse(ctx, b))
            .collect::<Result<_>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(ChainStep {
                    phi: Polynomial::parse(ring, &s.phi)?,
                    gamma: Value::parse(ctx, &s.gamma)?,
                })
            })
            .collect::<Result<_>>()?;
        AugmentedChain::new(ring, base, steps)
    }
}

/// Loads any oracle document, dispatching on `"kind"`.
pub fn load_oracle(text: &str) -> Result<ValuationOracle> {
    #[derive(Deserialize)]
    struct Head {
        #[serde(default = "version")]
        version: u32,
        kind: String,
    }
    let head: Head = parse_json(text)?;
    check_version(head.version)?;
    match head.kind.as_str() {
        "arc" => Ok(ValuationOracle::Arc(ArcDocument::parse(text)?.oracle()?)),
        "monomial" => Ok(ValuationOracle::Monomial(
            MonomialDocument::parse(text)?.oracle()?,
        )),
        "chain" => Ok(ValuationOracle::Chain(
            ChainDocument::parse(text)?.oracle()?,
        )),
        other => Err(Error::Parse(format!("`{other}` is not an oracle document"))),
    }
}

/// `{"kind":"A1","matrix":[[2,1],[3,2]],"c":"1"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformDoc {
    #[serde(default = "version")]
    pub version: u32,
    pub kind: TransformKind,
    pub matrix: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
}

impl TransformDoc {
    pub fn transform(&self, field: FieldSpec) -> Result<PerronTransform> {
        check_version(self.version)?;
        match (self.kind, &self.c) {
            (TransformKind::A6, None) => PerronTransform::a6(self.matrix.clone()),
            (TransformKind::A1, Some(c)) => {
                PerronTransform::a1(self.matrix.clone(), Scalar::parse(field, c)?)
            }
            (TransformKind::A6, Some(_)) => Err(Error::Parse("an A6 transform has no `c`".into())),
            (TransformKind::A1, None) => Err(Error::Parse("an A1 transform needs `c`".into())),
        }
    }
}

impl From<&PerronTransform> for TransformDoc {
    fn from(t: &PerronTransform) -> Self {
        TransformDoc {
            version: VERSION,
            kind: t.kind(),
            matrix: t.matrix().to_vec(),
            c: t.c().map(ToString::to_string),
        }
    }
}
