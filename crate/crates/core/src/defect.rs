//! Defect bookkeeping: `[K*:K] = e f p^delta`, and the degree jumps of an
//! admissible family decomposition that account for `p^delta`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::document::VERSION;
use crate::error::{Error, Result};
use crate::oracle::ArcValuation;
use crate::valgroup::LatticeIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionData {
    pub degree: u64,
    /// Ramification index.
    pub e: u64,
    /// Residue degree.
    pub fres: u64,
    /// Characteristic exponent: the residue characteristic, or 1 in characteristic 0.
    pub p: u64,
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl ExtensionData {
    pub fn new(degree: u64, e: u64, fres: u64, p: u64) -> Result<Self> {
        if degree == 0 || e == 0 || fres == 0 {
            return Err(Error::Precondition(
                "degree, e and f must be positive".into(),
            ));
        }
        if p != 1 && !is_prime(p) {
            return Err(Error::Precondition(format!(
                "p = {p} is neither 1 nor prime"
            )));
        }
        Ok(ExtensionData { degree, e, fres, p })
    }

    /// Takes `e` from the index of the realized base value group in the arc's
    /// realized value group; `fres = 1` (algebraically closed residue field).
    pub fn from_arc(oracle: &ArcValuation, degree: u64) -> Result<Self> {
        let e = match oracle
            .extension_lattice()?
            .index_of(&oracle.base_lattice()?)?
        {
            LatticeIndex::Finite(n) => n
                .to_u64()
                .ok_or_else(|| Error::Precondition(format!("index {n} is too large")))?,
            LatticeIndex::Infinite => {
                return Err(Error::Precondition(
                    "realized groups have different ranks".into(),
                ))
            }
        };
        let c = oracle.ring().field.characteristic();
        Self::new(degree, e, 1, if c == 0 { 1 } else { c })
    }
}

/// The unique `delta` with `degree = e f p^delta`.
pub fn ostrowski(x: &ExtensionData) -> Result<u32> {
    let ef = x.e * x.fres;
    if !x.degree.is_multiple_of(ef) {
        return Err(Error::NotOstrowski(format!(
            "e f = {ef} does not divide {}",
            x.degree
        )));
    }
    let mut q = x.degree / ef;
    if x.p == 1 {
        return match q {
            1 => Ok(0),
            _ => Err(Error::NotOstrowski(format!(
                "quotient {q} in residue characteristic 0"
            ))),
        };
    }
    let mut delta = 0;
    while q.is_multiple_of(x.p) {
        q /= x.p;
        delta += 1;
    }
    if q != 1 {
        return Err(Error::NotOstrowski(format!(
            "{} / {ef} is not a power of {}",
            x.degree, x.p
        )));
    }
    Ok(delta)
}

/// Order of the splitting group predicted by `e f p^delta`, for cross-checks.
pub fn splitting_group_order(x: &ExtensionData) -> Result<u64> {
    let delta = ostrowski(x)?;
    Ok(x.e * x.fres * x.p.pow(delta))
}

/// A simple family of key polynomials: their common degree and the degree of
/// the first key polynomial of the next family (absent for the last family).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub key_degree: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_key_degree: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDecomposition {
    #[serde(default = "version")]
    pub version: u32,
    #[serde(default = "kind")]
    pub kind: String,
    pub families: Vec<Family>,
}

fn version() -> u32 {
    VERSION
}

fn kind() -> String {
    "decomposition".into()
}

impl FamilyDecomposition {
    pub fn new(families: Vec<Family>) -> Self {
        FamilyDecomposition {
            version: VERSION,
            kind: kind(),
            families,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if d.version != VERSION || d.kind != "decomposition" {
            return Err(Error::Parse(
                "not a version-1 decomposition document".into(),
            ));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    /// Degrees positive; every family but the last declares its limit key
    /// degree, which is the next family's key degree.
    pub fn validate(&self) -> Result<()> {
        let n = self.families.len();
        if n == 0 {
            return Err(Error::Precondition("a decomposition needs a family".into()));
        }
        for (j, fam) in self.families.iter().enumerate() {
            if fam.key_degree == 0 || fam.limit_key_degree == Some(0) {
                return Err(Error::Precondition(format!(
                    "family {} has degree 0",
                    j + 1
                )));
            }
            match (fam.limit_key_degree, self.families.get(j + 1)) {
                (Some(l), Some(next)) if l != next.key_degree => {
                    return Err(Error::Precondition(format!(
                        "family {} ends at degree {l} but family {} has degree {}",
                        j + 1,
                        j + 2,
                        next.key_degree
                    )))
                }
                (None, Some(_)) => {
                    return Err(Error::Precondition(format!(
                        "family {} needs a limit key degree",
                        j + 1
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Product of the degree jumps between consecutive families.
pub fn jump_total(d: &FamilyDecomposition) -> Result<BigRational> {
    d.validate()?;
    let mut total = BigRational::one();
    let n = d.families.len();
    for (j, fam) in d.families[..n - 1].iter().enumerate() {
        let limit = fam.limit_key_degree.expect("validated");
        let s = BigRational::new(BigInt::from(limit), BigInt::from(fam.key_degree));
        if s <= BigRational::one() {
            return Err(Error::JumpNotGreaterThanOne(j + 1));
        }
        total *= s;
    }
    Ok(total)
}

/// Whether the defect predicted by the degree count equals the family jumps.
pub fn consistency(x: &ExtensionData, d: &FamilyDecomposition) -> Result<bool> {
    let delta = ostrowski(x)?;
    let lhs = BigRational::from_integer(BigInt::from(x.p).pow(delta));
    Ok(jump_total(d).is_ok_and(|t| t == lhs))
}

/// Decomposition suggested by an approximation ladder that never left the
/// base group: the degree-1 keys `xm - h_i` form one family without a
/// maximum, and the limit key is `f` itself.
pub fn decomposition_from_ladder(ladder_len: usize, degree: u64) -> FamilyDecomposition {
    if ladder_len == 0 || degree <= 1 {
        return FamilyDecomposition::new(vec![Family {
            key_degree: degree.max(1),
            limit_key_degree: None,
        }]);
    }
    FamilyDecomposition::new(vec![
        Family {
            key_degree: 1,
            limit_key_degree: Some(degree),
        },
        Family {
            key_degree: degree,
            limit_key_degree: None,
        },
    ])
}
