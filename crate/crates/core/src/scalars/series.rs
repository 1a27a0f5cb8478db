//! Truncated Puiseux series in one parameter `t`.
//!
//! A series carries an optional truncation order `T`: every coefficient of an
//! exponent below `T` is exact, nothing is known at or above `T`. A series
//! without truncation is exact (a finite sum). Arithmetic propagates `T` so
//! that an order is only ever reported when it is provably below truncation.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Exponents of `t`.
pub type Exponent = Rational64;

/// `None` stands for `+inf` (no truncation).
fn add_ext(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    Some(a? + b?)
}

fn min_ext(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn below(q: &Exponent, trunc: &Option<Exponent>) -> bool {
    trunc.is_none_or(|t| *q < t)
}

/// Result of [`PuiseuxSeries::order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOrder {
    /// The smallest exponent with a nonzero coefficient.
    Finite(Exponent),
    /// No term survives below the truncation; `None` means the series is exactly zero.
    Above(Option<Exponent>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    field: FieldSpec,
    terms: BTreeMap<Exponent, Scalar>,
    trunc: Option<Exponent>,
}

impl PuiseuxSeries {
    /// Builds a series, dropping zero coefficients and any term at or beyond `trunc`.
    pub fn new(
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Exponent, Scalar)>,
        trunc: Option<Exponent>,
    ) -> Self {
        let mut map: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (q, c) in terms {
            assert_eq!(c.field(), field, "coefficient field");
            if !below(&q, &trunc) {
                continue;
            }
            let slot = map.entry(q).or_insert_with(|| field.zero());
            *slot += &c;
        }
        map.retain(|_, c| !c.is_zero());
        PuiseuxSeries {
            field,
            terms: map,
            trunc,
        }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::new(field, [], None)
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        Self::new(field, [(Exponent::zero(), c)], None)
    }

    /// The exact monomial `c * t^q`.
    pub fn monomial(c: Scalar, q: Exponent) -> Self {
        let field = c.field();
        Self::new(field, [(q, c)], None)
    }

    /// The parameter `t` itself.
    pub fn t(field: FieldSpec) -> Self {
        Self::monomial(field.one(), Exponent::one())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn trunc(&self) -> Option<Exponent> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, q: &Exponent) -> Option<&Scalar> {
        self.terms.get(q)
    }

    /// Lowers the truncation to `min(self.trunc, t)`, discarding terms beyond it.
    pub fn with_trunc(&self, t: Option<Exponent>) -> Self {
        let trunc = min_ext(self.trunc, t);
        Self::new(
            self.field,
            self.terms.iter().map(|(q, c)| (*q, c.clone())),
            trunc,
        )
    }

    /// Normalized ramification index: the least `N` with every exponent and the
    /// truncation in `(1/N)Z`.
    pub fn ramification(&self) -> u64 {
        let mut n: i64 = 1;
        for q in self.terms.keys().chain(self.trunc.iter()) {
            n = n.lcm(q.denom());
        }
        n as u64
    }

    pub fn order(&self) -> SeriesOrder {
        match self.terms.keys().next() {
            Some(q) => SeriesOrder::Finite(*q),
            None => SeriesOrder::Above(self.trunc),
        }
    }

    /// Leading exponent and coefficient, when a term survives below truncation.
    pub fn leading(&self) -> Option<(Exponent, &Scalar)> {
        self.terms.iter().next().map(|(q, c)| (*q, c))
    }

    /// The order used by the truncation rule: the truncation itself for a series
    /// with no surviving term.
    fn effective_order(&self) -> Option<Exponent> {
        match self.order() {
            SeriesOrder::Finite(q) => Some(q),
            SeriesOrder::Above(t) => t,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other);
        let trunc = min_ext(self.trunc, other.trunc);
        Self::new(
            self.field,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(q, c)| (*q, c.clone())),
            trunc,
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            terms: self.terms.iter().map(|(q, c)| (*q, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        Self::new(
            self.field,
            self.terms.iter().map(|(q, a)| (*q, a * c)),
            self.trunc,
        )
    }

    /// Multiplication by `t^q`.
    pub fn shift(&self, q: Exponent) -> Self {
        Self {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e + q, c.clone()))
                .collect(),
            trunc: self.trunc.map(|t| t + q),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.field);
        }
        let trunc = min_ext(
            add_ext(self.trunc, other.effective_order()),
            add_ext(other.trunc, self.effective_order()),
        );
        let mut acc: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (qa, ca) in &self.terms {
            for (qb, cb) in &other.terms {
                let q = *qa + *qb;
                if !below(&q, &trunc) {
                    // terms are sorted, later qb only grow
                    break;
                }
                let slot = acc.entry(q).or_insert_with(|| self.field.zero());
                *slot += &(ca * cb);
            }
        }
        Self::new(self.field, acc, trunc)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.field.one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse. Needs a leading term below truncation; an exact
    /// series with more than one term has an infinite inverse and is rejected.
    pub fn inverse(&self) -> Result<Self> {
        let (q, c) = match self.leading() {
            Some((q, c)) => (q, c.clone()),
            None => {
                return Err(match self.trunc {
                    None => Error::DivisionByZero,
                    Some(t) => Error::TruncationExhausted(format!(
                        "cannot invert a series with no term below t^{t}"
                    )),
                })
            }
        };
        let c_inv = c.inv()?;
        if self.terms.len() == 1 && self.trunc.is_none() {
            return Ok(Self::monomial(c_inv, -q));
        }
        let rel = match self.trunc {
            Some(t) => t - q,
            None => {
                return Err(Error::Unsupported(
                    "inverse of an exact multi-term series needs a truncation".into(),
                ))
            }
        };
        // self = c t^q (1 + u), ord(u) > 0, u known below rel
        let u = self
            .shift(-q)
            .scale(&c_inv)
            .sub(&Self::constant(self.field.one()));
        let minus_u = u.neg().with_trunc(Some(rel));
        let mut sum = Self::constant(self.field.one()).with_trunc(Some(rel));
        let mut power = sum.clone();
        loop {
            power = power.mul(&minus_u).with_trunc(Some(rel));
            if power.terms.is_empty() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.shift(-q).scale(&c_inv))
    }

    /// Integer power, negative exponents via [`Self::inverse`].
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.inverse()?.pow(k.unsigned_abs()))
        }
    }

    /// Checks the declared ramification index against the exponents present.
    pub fn check_ramification(&self, n: u64) -> Result<()> {
        if n == 0 || !n.is_multiple_of(self.ramification()) {
            return Err(Error::Parse(format!(
                "declared N={n} is not a multiple of the exponent denominators (need {})",
                self.ramification()
            )));
        }
        Ok(())
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.field, other.field, "series over different fields");
    }

    /// True when every exponent, and the truncation, is nonnegative.
    pub fn has_nonnegative_support(&self) -> bool {
        self.terms.keys().all(|q| !q.is_negative())
    }
}

fn format_exponent(q: &Exponent) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (q, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if q.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "t^{}*{c}", format_exponent(q))?;
            }
        }
        if let Some(t) = self.trunc {
            let t = if t.is_integer() {
                t.numer().to_string()
            } else {
                format!("{}/{}", t.numer(), t.denom())
            };
            write!(f, " | trunc {t}")?;
        }
        let n = self.ramification();
        if n > 1 {
            write!(f, " | N {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn series(terms: &[(i64, i64, i64)], trunc: Option<Exponent>) -> PuiseuxSeries {
        let f = FieldSpec::RATIONALS;
        PuiseuxSeries::new(
            f,
            terms.iter().map(|&(n, d, c)| (e(n, d), f.from_i64(c))),
            trunc,
        )
    }

    #[test]
    fn order_examples() {
        assert_eq!(
            series(&[(3, 1, 1), (5, 1, 2)], None).order(),
            SeriesOrder::Finite(e(3, 1))
        );
        assert_eq!(
            series(&[(3, 2, 1)], None).order(),
            SeriesOrder::Finite(e(3, 2))
        );
        assert_eq!(
            series(&[], Some(e(7, 1))).order(),
            SeriesOrder::Above(Some(e(7, 1)))
        );
    }

    #[test]
    fn product_and_ramification() {
        let a = series(&[(1, 1, 1), (2, 1, 1)], None);
        let b = series(&[(1, 1, 1)], None);
        assert_eq!(a.mul(&b), series(&[(2, 1, 1), (3, 1, 1)], None));

        let half = series(&[(1, 2, 1)], None);
        assert_eq!(half.ramification(), 2);
        let sq = half.pow(2);
        assert_eq!(sq, series(&[(1, 1, 1)], None));
        assert_eq!(sq.ramification(), 1);
    }

    #[test]
    fn truncation_propagates_through_sum() {
        let a = series(&[(3, 1, 1)], Some(e(5, 1)));
        let b = series(&[(4, 1, 1)], Some(e(4, 1)));
        assert_eq!(a.add(&b), series(&[(3, 1, 1)], Some(e(4, 1))));
    }

    #[test]
    fn truncation_propagates_through_product() {
        // (t + O(t^3)) * (t^2 + O(t^5)) = t^3 + O(t^5)
        let a = series(&[(1, 1, 1)], Some(e(3, 1)));
        let b = series(&[(2, 1, 1)], Some(e(5, 1)));
        let p = a.mul(&b);
        assert_eq!(p.trunc(), Some(e(5, 1)));
        assert_eq!(p.order(), SeriesOrder::Finite(e(3, 1)));
    }

    #[test]
    fn inverse_of_geometric() {
        // 1/(1 - t) = 1 + t + t^2 + ... to truncation
        let a = series(&[(0, 1, 1), (1, 1, -1)], Some(e(6, 1)));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.trunc(), Some(e(6, 1)));
        assert_eq!(inv.terms().count(), 6);
        let one = a.mul(&inv);
        assert_eq!(one.order(), SeriesOrder::Finite(e(0, 1)));
        assert_eq!(one.terms().count(), 1);
    }

    #[test]
    fn inverse_of_monomial_is_exact() {
        let a = series(&[(3, 2, 2)], None);
        let inv = a.inverse().unwrap();
        assert!(inv.is_exact());
        assert_eq!(a.mul(&inv), series(&[(0, 1, 1)], None));
    }

    #[test]
    fn display_matches_literal_grammar() {
        let s = series(&[(3, 2, 1), (2, 1, -1)], Some(e(5, 1)));
        assert_eq!(s.to_string(), "t^(3/2)*1 + t^2*-1 | trunc 5 | N 2");
    }

    fn arb_series() -> impl Strategy<Value = PuiseuxSeries> {
        (
            prop::collection::vec((0i64..12, 1i64..4, -3i64..4), 0..5),
            prop::option::of(4i64..20),
        )
            .prop_map(|(terms, t)| series(&terms, t.map(|t| e(t, 1))))
    }

    fn agree_below(a: &PuiseuxSeries, b: &PuiseuxSeries, limit: Option<Exponent>) -> bool {
        let keys: std::collections::BTreeSet<_> =
            a.terms().chain(b.terms()).map(|(q, _)| *q).collect();
        keys.into_iter()
            .filter(|q| below(q, &limit))
            .all(|q| a.coefficient(&q) == b.coefficient(&q))
    }

    proptest! {
        #[test]
        fn product_order_is_additive(a in arb_series(), b in arb_series()) {
            if let (SeriesOrder::Finite(x), SeriesOrder::Finite(y)) = (a.order(), b.order()) {
                let p = a.mul(&b);
                if below(&(x + y), &p.trunc()) {
                    prop_assert_eq!(p.order(), SeriesOrder::Finite(x + y));
                }
            }
        }

        #[test]
        fn truncate_then_evaluate(a in arb_series(), b in arb_series(), c in arb_series(), cut in 2i64..10) {
            // (a + b) * c computed exactly vs after cutting the inputs
            let exact = a.add(&b).mul(&c);
            let cut = Some(e(cut, 1));
            let truncated = a.with_trunc(cut).add(&b.with_trunc(cut)).mul(&c.with_trunc(cut));
            prop_assert!(agree_below(&exact, &truncated, truncated.trunc()));
        }

        #[test]
        fn distributive(a in arb_series(), b in arb_series(), c in arb_series()) {
            let lhs = a.mul(&b.add(&c));
            let rhs = a.mul(&b).add(&a.mul(&c));
            let limit = min_ext(lhs.trunc(), rhs.trunc());
            prop_assert!(agree_below(&lhs, &rhs, limit));
        }
    }
}
