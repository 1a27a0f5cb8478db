//! Sparse multivariate polynomials over an exact field, in variables
//! `x1..xm` with `xm` distinguished.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{eval, parse_expr, ExprTarget};
use crate::scalars::{FieldSpec, PuiseuxSeries, Scalar};

/// Number of variables and coefficient field of a polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub m: usize,
    #[serde(rename = "char")]
    pub field: FieldSpec,
}

impl Ring {
    pub fn new(m: usize, field: FieldSpec) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition(
                "a ring needs at least one variable".into(),
            ));
        }
        Ok(Ring { m, field })
    }

    /// Parses a header line `ring m=<m> char=<p>`.
    pub fn parse_header(line: &str) -> Result<Self> {
        let mut words = line.split_whitespace();
        if words.next() != Some("ring") {
            return Err(Error::Parse(format!(
                "expected `ring m=.. char=..`, got `{line}`"
            )));
        }
        let (mut m, mut ch) = (None, None);
        for w in words {
            match w.split_once('=') {
                Some(("m", v)) => m = v.parse::<usize>().ok(),
                Some(("char", v)) => ch = v.parse::<u64>().ok(),
                _ => return Err(Error::Parse(format!("bad ring field `{w}`"))),
            }
        }
        match (m, ch) {
            (Some(m), Some(ch)) => Ring::new(m, FieldSpec::new(ch)?),
            _ => Err(Error::Parse(format!("incomplete ring header `{line}`"))),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ring m={} char={}", self.m, self.field.characteristic())
    }
}

/// Variable bookkeeping for a reduction run: `m` variables, the first `n` of
/// which carry a rational basis of the value group, and a counter of how many
/// coordinate changes produced the current names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableFrame {
    pub m: usize,
    pub n: usize,
    pub generation: u32,
}

impl VariableFrame {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if n == 0 || n > m {
            return Err(Error::Precondition(format!("invalid frame m={m}, n={n}")));
        }
        Ok(VariableFrame {
            m,
            n,
            generation: 0,
        })
    }

    pub fn next_generation(self) -> Self {
        VariableFrame {
            generation: self.generation + 1,
            ..self
        }
    }
}

/// Exponent vector. Ordered graded-lexicographically, `x1` compared first and `xm` last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `ord f(0,...,0,xm)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LastOrder {
    Finite(u32),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

/// `f = sum a_i xm^i` with every `a_i` free of `xm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientExpansion {
    /// `a_0, ..., a_e`; trailing entry nonzero unless `f = 0`.
    pub coefficients: Vec<Polynomial>,
    pub monic: bool,
}

impl CoefficientExpansion {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, i: usize) -> Option<&Polynomial> {
        self.coefficients.get(i)
    }

    pub fn reconstruct(&self, ring: Ring) -> Polynomial {
        let xm = Polynomial::var(ring, ring.m - 1);
        let mut acc = Polynomial::zero(ring);
        for a in self.coefficients.iter().rev() {
            acc = &(&acc * &xm) + a;
        }
        acc
    }
}

/// `g = x^monomial * (xm + c)^lambda * residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictTransform {
    pub monomial: Vec<u32>,
    pub lambda: u32,
    pub c: Scalar,
    pub residual: Polynomial,
}

impl StrictTransform {
    pub fn reconstruct(&self) -> Polynomial {
        let ring = self.residual.ring();
        let mono = Polynomial::monomial(ring, self.monomial.clone(), ring.field.one());
        let unit = Polynomial::last_plus(ring, self.c.clone()).pow(self.lambda as u64);
        &(&mono * &unit) * &self.residual
    }
}

impl Polynomial {
    pub fn zero(ring: Ring) -> Self {
        Polynomial {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Ring, c: Scalar) -> Self {
        Self::monomial(ring, vec![0; ring.m], c)
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, ring.field.one())
    }

    /// The variable with 0-based index `i`.
    pub fn var(ring: Ring, i: usize) -> Self {
        assert!(i < ring.m, "variable index out of range");
        let mut e = vec![0; ring.m];
        e[i] = 1;
        Self::monomial(ring, e, ring.field.one())
    }

    /// `xm + c`.
    pub fn last_plus(ring: Ring, c: Scalar) -> Self {
        &Self::var(ring, ring.m - 1) + &Self::constant(ring, c)
    }

    pub fn monomial(ring: Ring, exps: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(exps.len(), ring.m, "exponent vector length");
        Self::from_terms(ring, [(Monomial(exps), c)])
    }

    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (mono, c) in terms {
            assert_eq!(mono.0.len(), ring.m, "exponent vector length");
            assert_eq!(c.field(), ring.field, "coefficient field");
            let slot = map.entry(mono).or_insert_with(|| ring.field.zero());
            *slot += &c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial { ring, terms: map }
    }

    pub fn parse(ring: Ring, text: &str) -> Result<Self> {
        eval(&Polynomial::zero(ring), &parse_expr(text)?)
    }

    /// Parses a document whose first line is a `ring` header and whose remaining
    /// lines hold one polynomial.
    pub fn parse_with_header(text: &str) -> Result<(Ring, Self)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing ring header".into()))?;
        let ring = Ring::parse_header(header.trim())?;
        let body: Vec<&str> = lines.collect();
        let p = Self::parse(ring, &body.join(" "))?;
        Ok((ring, p))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.ring.m))
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.ring.field.zero()),
            1 => {
                let (mono, c) = self.terms.iter().next()?;
                (mono.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Componentwise minimum of the exponent vectors (all zero for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<u32> {
        let mut it = self.terms.keys();
        match it.next() {
            None => vec![0; self.ring.m],
            Some(first) => it.fold(first.0.clone(), |mut acc, mono| {
                for (a, b) in acc.iter_mut().zip(&mono.0) {
                    *a = (*a).min(*b);
                }
                acc
            }),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(
            self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), a * c)),
        )
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let field = self.ring.field;
        Self::from_terms(
            self.ring,
            self.terms
                .iter()
                .filter(|(m, _)| m.0[var] > 0)
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    let k = e[var];
                    e[var] -= 1;
                    (Monomial(e), c * &field.from_i64(k as i64))
                }),
        )
    }

    pub fn ord_last(&self) -> LastOrder {
        let m = self.ring.m;
        self.terms
            .keys()
            .filter(|mono| mono.0[..m - 1].iter().all(|&e| e == 0))
            .map(|mono| mono.0[m - 1])
            .min()
            .map_or(LastOrder::Infinite, LastOrder::Finite)
    }

    pub fn expand_last(&self) -> CoefficientExpansion {
        let m = self.ring.m;
        let e = self.degree_in(m - 1).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); e + 1];
        for (mono, c) in &self.terms {
            let mut ex = mono.0.clone();
            let i = ex[m - 1] as usize;
            ex[m - 1] = 0;
            buckets[i].push((Monomial(ex), c.clone()));
        }
        let coefficients: Vec<Polynomial> = buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(self.ring, b))
            .collect();
        let monic = coefficients
            .last()
            .and_then(|a| a.as_constant())
            .is_some_and(|c| c.is_one());
        CoefficientExpansion {
            coefficients,
            monic,
        }
    }

    /// Leading coefficient in `xm` when it is a nonzero constant.
    fn constant_leading_last(&self) -> Option<(u32, Scalar)> {
        let exp = self.expand_last();
        let c = exp.coefficients.last()?.as_constant()?;
        (!c.is_zero()).then(|| (exp.degree() as u32, c))
    }

    /// Division with remainder in `xm` by a divisor whose leading `xm`-coefficient
    /// is a nonzero constant. Returns `None` for other divisors.
    pub fn div_rem_last(&self, divisor: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        self.check_ring(divisor);
        let (d, lc) = divisor.constant_leading_last()?;
        let lc_inv = lc.inv().ok()?;
        let m = self.ring.m;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.ring);
        loop {
            let deg = match rem.degree_in(m - 1) {
                Some(k) if k >= d && !rem.is_zero() => k,
                _ => break,
            };
            // every term of rem with xm-degree == deg
            let lead: Vec<(Monomial, Scalar)> = rem
                .terms
                .iter()
                .filter(|(mono, _)| mono.0[m - 1] == deg)
                .map(|(mono, c)| {
                    let mut e = mono.0.clone();
                    e[m - 1] -= d;
                    (Monomial(e), c * &lc_inv)
                })
                .collect();
            let q = Polynomial::from_terms(self.ring, lead);
            rem = &rem - &(&q * divisor);
            quot = &quot + &q;
        }
        Some((quot, rem))
    }

    /// `Some(true)` when `divisor` divides `self` exactly, `None` when the test is unavailable.
    pub fn divisible_by(&self, divisor: &Polynomial) -> Option<bool> {
        self.div_rem_last(divisor).map(|(_, r)| r.is_zero())
    }

    /// Exact quotient by a monomial, if it divides every term.
    pub fn div_monomial(&self, exps: &[u32]) -> Option<Polynomial> {
        let d = Monomial(exps.to_vec());
        if !self.terms.keys().all(|m| d.divides(m)) {
            return None;
        }
        Some(Polynomial::from_terms(
            self.ring,
            self.terms.iter().map(|(m, c)| {
                let e = m.0.iter().zip(exps).map(|(a, b)| a - b).collect();
                (Monomial(e), c.clone())
            }),
        ))
    }

    /// Exact quotient by `xm + c` (synthetic division in `xm`), if it divides.
    pub fn div_last_linear(&self, c: &Scalar) -> Option<Polynomial> {
        let exp = self.expand_last();
        let e = exp.degree();
        if self.is_zero() || e == 0 {
            return None;
        }
        // a = (xm + c) b:  b_{e-1} = a_e,  b_{i-1} = a_i - c b_i
        let mut b = vec![Polynomial::zero(self.ring); e];
        b[e - 1] = exp.coefficients[e].clone();
        for i in (1..e).rev() {
            b[i - 1] = &exp.coefficients[i] - &b[i].scale(c);
        }
        let remainder = &exp.coefficients[0] - &b[0].scale(c);
        if !remainder.is_zero() {
            return None;
        }
        Some(
            CoefficientExpansion {
                coefficients: b,
                monic: false,
            }
            .reconstruct(self.ring),
        )
    }

    /// Divides out the largest monomial and, for `c != 0`, the largest power of `xm + c`.
    ///
    /// With `c != 0` the last variable is the coordinate carrying the strict
    /// transform, not an exceptional one, so its power stays in the residual.
    pub fn strict_transform(&self, c: &Scalar) -> StrictTransform {
        assert!(!self.is_zero(), "strict transform of zero");
        let mut monomial = self.min_exponents();
        if !c.is_zero() {
            monomial[self.ring.m - 1] = 0;
        }
        let mut residual = self.div_monomial(&monomial).expect("min exponents divide");
        let mut lambda = 0;
        if !c.is_zero() {
            while let Some(q) = residual.div_last_linear(c) {
                residual = q;
                lambda += 1;
            }
        }
        StrictTransform {
            monomial,
            lambda,
            c: c.clone(),
            residual,
        }
    }

    /// Substitutes `images[i]` for the `i`-th variable.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.m, "one image per variable");
        let target = images.first().map(|p| p.ring).unwrap_or(self.ring);
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero(target);
        for (mono, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e as u64));
                term = &term * p;
            }
            acc = &acc + &term;
        }
        acc
    }

    /// `f(x1, ..., x_{m-1}, xm + h)`.
    pub fn translate_last(&self, h: &Polynomial) -> Polynomial {
        let m = self.ring.m;
        let mut images: Vec<Polynomial> = (0..m).map(|i| Polynomial::var(self.ring, i)).collect();
        images[m - 1] = &images[m - 1] + h;
        self.compose(&images)
    }

    pub fn evaluate_at_arc(&self, arc: &[PuiseuxSeries]) -> Result<PuiseuxSeries> {
        if arc.len() != self.ring.m {
            return Err(Error::FrameMismatch(format!(
                "arc has {} components, ring has {} variables",
                arc.len(),
                self.ring.m
            )));
        }
        let field = self.ring.field;
        let mut cache: HashMap<(usize, u32), PuiseuxSeries> = HashMap::new();
        let mut acc = PuiseuxSeries::zero(field);
        for (mono, c) in &self.terms {
            let mut term = PuiseuxSeries::constant(c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let s = cache.entry((i, e)).or_insert_with(|| arc[i].pow(e as u64));
                term = term.mul(s);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    fn check_ring(&self, other: &Polynomial) {
        assert_eq!(self.ring, other.ring, "polynomials from different rings");
    }
}

impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs);
        Polynomial::from_terms(
            self.ring,
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

impl std::ops::Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                let slot = acc
                    .entry(Monomial(e))
                    .or_insert_with(|| self.ring.field.zero());
                *slot += &(ca * cb);
            }
        }
        Polynomial::from_terms(self.ring, acc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms.iter().rev().enumerate() {
            let (neg, abs) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = mono
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{e}", v + 1)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl ExprTarget for Polynomial {
    fn number(&self, q: &BigRational) -> Result<Self> {
        Ok(Polynomial::constant(
            self.ring,
            self.ring.field.from_rational(q)?,
        ))
    }

    fn ident(&self, name: &str) -> Result<Self> {
        let idx = name
            .strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= self.ring.m)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown variable `{name}` (expected x1..x{})",
                    self.ring.m
                ))
            })?;
        Ok(Polynomial::var(self.ring, idx - 1))
    }

    fn add(a: Self, b: Self) -> Result<Self> {
        Ok(&a + &b)
    }

    fn mul(a: Self, b: Self) -> Result<Self> {
        Ok(&a * &b)
    }

    fn neg(a: Self) -> Result<Self> {
        Ok(-&a)
    }

    fn div(a: Self, b: Self) -> Result<Self> {
        let c = b
            .as_constant()
            .ok_or_else(|| Error::Parse("division by a non-constant polynomial".into()))?;
        Ok(a.scale(&c.inv()?))
    }

    fn pow(a: Self, e: &BigRational) -> Result<Self> {
        let k = if e.is_integer() && !e.is_zero() || e.is_zero() {
            e.to_integer().to_u64()
        } else {
            None
        };
        match k {
            Some(k) => Ok(a.pow(k)),
            None => Err(Error::Parse(format!(
                "polynomial exponents must be natural numbers, got {e}"
            ))),
        }
    }
}

/// Converts a parsed integer into an exponent.
#[allow(dead_code)]
pub(crate) fn exponent_from(n: &BigInt) -> Result<u32> {
    crate::scalars::bigint_to_u32(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_series;
    use proptest::prelude::*;

    fn q2() -> Ring {
        Ring::new(2, FieldSpec::RATIONALS).unwrap()
    }

    fn p(ring: Ring, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    #[test]
    fn ord_last_examples() {
        let r = q2();
        assert_eq!(p(r, "x2^2 - x1^3").ord_last(), LastOrder::Finite(2));
        assert_eq!(p(r, "x1*x2").ord_last(), LastOrder::Infinite);
        let f5 = Ring::new(2, FieldSpec::prime(5)).unwrap();
        assert_eq!(p(f5, "x2^5 - x2 - x1").ord_last(), LastOrder::Finite(1));
    }

    #[test]
    fn expand_last_examples() {
        let r = q2();
        let e = p(r, "x2^2 - x1^3").expand_last();
        assert_eq!(e.degree(), 2);
        assert!(e.monic);
        assert_eq!(e.coefficients[1], Polynomial::zero(r));
        assert_eq!(e.coefficients[0], p(r, "-x1^3"));

        let e = p(r, "x2").expand_last();
        assert_eq!(e.degree(), 1);
        assert!(e.coefficients[0].is_zero());

        let f = p(r, "(x2 - x1)^2 - x1^5");
        let e = f.expand_last();
        assert_eq!(e.coefficients[1], p(r, "-2*x1"));
        assert_eq!(e.coefficients[0], p(r, "x1^2 - x1^5"));
        assert_eq!(e.reconstruct(r), f);
    }

    #[test]
    fn canonical_printing() {
        let r = q2();
        assert_eq!(p(r, "x2^2 - x1^3").to_string(), "-x1^3 + x2^2");
        assert_eq!(p(r, "1/2*x1*x2^3").to_string(), "1/2*x1*x2^3");
        assert_eq!(p(r, "3 - x1").to_string(), "-x1 + 3");
        let f2 = Ring::new(2, FieldSpec::prime(2)).unwrap();
        assert_eq!(p(f2, "x2^2 - x1^3").to_string(), "x1^3 + x2^2");
        let s = p(r, "x1^6*x2^4 + 3*x1^6*x2^3 - 7/3*x2");
        assert_eq!(p(r, &s.to_string()), s);
    }

    #[test]
    fn header_parsing() {
        let (ring, f) = Polynomial::parse_with_header("ring m=2 char=3\nx2^3 - x1").unwrap();
        assert_eq!(ring.field, FieldSpec::prime(3));
        assert_eq!(f.to_string(), "x2^3 + 2*x1");
        assert!(Polynomial::parse_with_header("ring m=2 char=4\nx1").is_err());
        assert!(Polynomial::parse(q2(), "x3").is_err());
        assert!(Polynomial::parse(q2(), "x1^(1/2)").is_err());
        assert!(Polynomial::parse(q2(), "x1/x2").is_err());
    }

    #[test]
    fn strict_transform_examples() {
        let r = q2();
        let one = r.field.one();
        let g = p(r, "x1^6*(x2+1)^3*x2");
        let st = g.strict_transform(&one);
        assert_eq!(st.monomial, vec![6, 0]);
        assert_eq!(st.lambda, 3);
        assert_eq!(st.residual, p(r, "x2"));
        assert_eq!(st.reconstruct(), g);

        let g = p(r, "1 + x1 + x2^2");
        let st = g.strict_transform(&r.field.zero());
        assert_eq!(st.monomial, vec![0, 0]);
        assert_eq!(st.lambda, 0);
        assert_eq!(st.residual, g);

        let st = p(r, "x1*x2").strict_transform(&r.field.zero());
        assert_eq!(st.monomial, vec![1, 1]);
        assert_eq!(st.residual, Polynomial::one(r));
    }

    #[test]
    fn division_by_monic() {
        let r = q2();
        let f = p(r, "x2^2 - x1^3");
        let g = &f * &p(r, "x1 + x2^3 - 2");
        assert_eq!(g.divisible_by(&f), Some(true));
        assert_eq!(p(r, "x2").divisible_by(&f), Some(false));
        assert_eq!(p(r, "x2").divisible_by(&p(r, "x1*x2 + 1")), None);
    }

    #[test]
    fn arc_evaluation_examples() {
        let r = q2();
        let f = r.field;
        let arc = vec![
            parse_series(f, "t^2 | trunc 20").unwrap(),
            parse_series(f, "t^3 | trunc 20").unwrap(),
        ];
        let v = p(r, "x2^2 - x1^3").evaluate_at_arc(&arc).unwrap();
        assert!(v.terms().next().is_none());
        let v = p(r, "x2").evaluate_at_arc(&arc).unwrap();
        assert_eq!(v.to_string(), "t^3*1 | trunc 20");
        let arc = vec![
            parse_series(f, "t^2").unwrap(),
            parse_series(f, "t^2 + t^3").unwrap(),
        ];
        let v = p(r, "x2 - x1").evaluate_at_arc(&arc).unwrap();
        assert_eq!(v, parse_series(f, "t^3").unwrap());
    }

    #[test]
    fn derivative_in_characteristic_p() {
        let f2 = Ring::new(2, FieldSpec::prime(2)).unwrap();
        let f = p(f2, "x2^2 + x1*x2 + x1^3");
        assert_eq!(f.derivative(1), p(f2, "x1"));
    }

    pub(crate) fn arb_poly(
        ring: Ring,
        max_terms: usize,
        max_exp: u32,
    ) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_exp, ring.m), -4i64..5),
            0..=max_terms,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                ring,
                terms
                    .into_iter()
                    .map(|(e, c)| (Monomial(e), ring.field.from_i64(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn expansion_reconstructs(f in arb_poly(Ring::new(3, FieldSpec::RATIONALS).unwrap(), 6, 4)) {
            let ring = f.ring();
            prop_assert_eq!(f.expand_last().reconstruct(ring), f);
        }

        #[test]
        fn strict_transform_reconstructs(
            f in arb_poly(Ring::new(2, FieldSpec::prime(3)).unwrap(), 5, 4),
            k in 0u64..3,
            c in 1i64..3,
        ) {
            prop_assume!(!f.is_zero());
            let ring = f.ring();
            let cs = ring.field.from_i64(c);
            let g = &f * &Polynomial::last_plus(ring, cs.clone()).pow(k);
            let st = g.strict_transform(&cs);
            prop_assert!(st.lambda as u64 >= k);
            prop_assert_eq!(st.reconstruct(), g);
        }

        #[test]
        fn ord_last_matches_arc_order(f in arb_poly(Ring::new(3, FieldSpec::RATIONALS).unwrap(), 6, 3)) {
            let ring = f.ring();
            let fld = ring.field;
            let arc = vec![PuiseuxSeries::zero(fld), PuiseuxSeries::zero(fld), PuiseuxSeries::t(fld)];
            let s = f.evaluate_at_arc(&arc).unwrap();
            match f.ord_last() {
                LastOrder::Finite(r) => prop_assert_eq!(
                    s.order(),
                    crate::scalars::SeriesOrder::Finite(crate::scalars::Exponent::from_integer(r as i64))
                ),
                LastOrder::Infinite => prop_assert!(s.is_exact_zero()),
            }
        }

        #[test]
        fn compose_is_a_ring_homomorphism(
            f in arb_poly(Ring::new(2, FieldSpec::RATIONALS).unwrap(), 4, 3),
            g in arb_poly(Ring::new(2, FieldSpec::RATIONALS).unwrap(), 4, 3),
            h1 in arb_poly(Ring::new(2, FieldSpec::RATIONALS).unwrap(), 3, 2),
            h2 in arb_poly(Ring::new(2, FieldSpec::RATIONALS).unwrap(), 3, 2),
        ) {
            let images = [h1, h2];
            prop_assert_eq!((&f * &g).compose(&images), &f.compose(&images) * &g.compose(&images));
            prop_assert_eq!((&f + &g).compose(&images), &f.compose(&images) + &g.compose(&images));
        }
    }
}
