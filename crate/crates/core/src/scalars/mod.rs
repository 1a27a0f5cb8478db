//! Exact scalars and truncated Puiseux series.

mod field;
mod series;

pub(crate) use field::parse_rational;
pub use field::{FieldSpec, Scalar};
pub use series::{Exponent, PuiseuxSeries, SeriesOrder};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::parse::{eval, parse_expr, ExprTarget};

pub(crate) fn to_exponent(q: &BigRational) -> Result<Exponent> {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Exponent::new(n, d)),
        _ => Err(Error::Parse(format!("exponent {q} out of range"))),
    }
}

impl ExprTarget for PuiseuxSeries {
    fn number(&self, q: &BigRational) -> Result<Self> {
        Ok(PuiseuxSeries::constant(self.field().from_rational(q)?))
    }

    fn ident(&self, name: &str) -> Result<Self> {
        match name {
            "t" => Ok(PuiseuxSeries::t(self.field())),
            _ => Err(Error::Parse(format!("unknown series variable `{name}`"))),
        }
    }

    fn add(a: Self, b: Self) -> Result<Self> {
        Ok(PuiseuxSeries::add(&a, &b))
    }

    fn mul(a: Self, b: Self) -> Result<Self> {
        Ok(PuiseuxSeries::mul(&a, &b))
    }

    fn neg(a: Self) -> Result<Self> {
        Ok(PuiseuxSeries::neg(&a))
    }

    fn div(a: Self, b: Self) -> Result<Self> {
        Ok(a.mul(&b.inverse()?))
    }

    fn pow(a: Self, e: &BigRational) -> Result<Self> {
        if e.is_integer() {
            let k = e
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Parse("exponent out of range".into()))?;
            return a.powi(k);
        }
        // fractional powers only of a bare t^q
        let mut terms = a.terms();
        match (terms.next(), terms.next(), a.is_exact()) {
            (Some((q, c)), None, true) if c.is_one() => {
                Ok(PuiseuxSeries::monomial(c.clone(), *q * to_exponent(e)?))
            }
            _ => Err(Error::Parse(
                "fractional exponents apply only to t or a power of t".into(),
            )),
        }
    }
}

/// Parses a series literal such as `t^(3/2)*1 + t^2*-1 | trunc 5 | N 2`.
///
/// A missing `trunc` clause yields an exact series. A declared `N` must be a
/// multiple of every exponent denominator.
pub fn parse_series(field: FieldSpec, text: &str) -> Result<PuiseuxSeries> {
    let mut parts = text.split('|');
    let body = parts.next().unwrap_or_default();
    let proto = PuiseuxSeries::zero(field);
    let mut s = eval(&proto, &parse_expr(body)?)?;
    let mut declared_n = None;
    for clause in parts {
        let clause = clause.trim();
        if let Some(rest) = clause.strip_prefix("trunc") {
            let t = to_exponent(&parse_rational(rest)?)?;
            s = s.with_trunc(Some(t));
        } else if let Some(rest) = clause.strip_prefix('N') {
            let n: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid N clause `{clause}`")))?;
            declared_n = Some(n);
        } else {
            return Err(Error::Parse(format!("unknown series clause `{clause}`")));
        }
    }
    if let Some(n) = declared_n {
        s.check_ramification(n)?;
    }
    Ok(s)
}

pub(crate) fn bigint_to_u32(n: &BigInt) -> Result<u32> {
    n.to_u32()
        .ok_or_else(|| Error::Parse(format!("exponent {n} is not a small natural number")))
}
