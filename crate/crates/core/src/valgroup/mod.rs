//! Exact ordered value groups inside `Q` or `Q(sqrt d)`, embedded in the reals.

mod hnf;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parse::{eval, parse_expr, ExprTarget};
use crate::scalars::Exponent;
pub(crate) use hnf::determinant;
use hnf::{column_hermite, IntMatrix};

/// Generator tuple of the ambient `Q`-vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorContext {
    /// Generator `1`.
    Rational,
    /// Generators `1, sqrt(d)`.
    Quadratic(u64),
}

impl GeneratorContext {
    pub fn quadratic(d: u64) -> Result<Self> {
        let r = (d as f64).sqrt().round() as u64;
        if d < 2 || (r.saturating_sub(1)..=r + 1).any(|s| s * s == d) {
            return Err(Error::Precondition(format!("sqrt({d}) is not irrational")));
        }
        Ok(GeneratorContext::Quadratic(d))
    }

    pub fn dim(self) -> usize {
        match self {
            GeneratorContext::Rational => 1,
            GeneratorContext::Quadratic(_) => 2,
        }
    }

    /// Parses `rational` or `sqrt(d)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("rational") || t == "1" {
            return Ok(GeneratorContext::Rational);
        }
        let d = t
            .strip_prefix("sqrt(")
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| s.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown generator context `{text}`")))?;
        Self::quadratic(d)
    }
}

impl fmt::Display for GeneratorContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorContext::Rational => f.write_str("rational"),
            GeneratorContext::Quadratic(d) => write!(f, "sqrt({d})"),
        }
    }
}

/// `a + b sqrt(d)` as the coordinate vector `(a)` or `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Value {
    ctx: GeneratorContext,
    coords: Vec<BigRational>,
}

impl Value {
    pub fn new(ctx: GeneratorContext, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != ctx.dim() {
            return Err(Error::ContextMismatch(format!(
                "{} coordinates for context {ctx}",
                coords.len()
            )));
        }
        Ok(Value { ctx, coords })
    }

    pub fn zero(ctx: GeneratorContext) -> Self {
        Value {
            ctx,
            coords: vec![BigRational::zero(); ctx.dim()],
        }
    }

    pub fn rational(ctx: GeneratorContext, q: BigRational) -> Self {
        let mut v = Self::zero(ctx);
        v.coords[0] = q;
        v
    }

    pub fn integer(ctx: GeneratorContext, n: i64) -> Self {
        Self::rational(ctx, BigRational::from_integer(n.into()))
    }

    pub fn from_exponent(ctx: GeneratorContext, q: Exponent) -> Self {
        Self::rational(
            ctx,
            BigRational::new((*q.numer()).into(), (*q.denom()).into()),
        )
    }

    /// `sqrt(d)` in a quadratic context.
    pub fn sqrt_generator(ctx: GeneratorContext) -> Result<Self> {
        match ctx {
            GeneratorContext::Quadratic(_) => {
                let mut v = Self::zero(ctx);
                v.coords[1] = BigRational::one();
                Ok(v)
            }
            GeneratorContext::Rational => Err(Error::ContextMismatch(
                "sqrt generator in a rational context".into(),
            )),
        }
    }

    pub fn parse(ctx: GeneratorContext, text: &str) -> Result<Self> {
        eval(&Value::zero(ctx), &parse_expr(text)?)
    }

    pub fn context(&self) -> GeneratorContext {
        self.ctx
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the value is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    /// Sign under the real embedding, decided exactly.
    pub fn signum(&self) -> Ordering {
        let a = &self.coords[0];
        let (b, d) = match self.ctx {
            GeneratorContext::Rational => return a.cmp(&BigRational::zero()),
            GeneratorContext::Quadratic(d) => {
                (&self.coords[1], BigRational::from_integer(d.into()))
            }
        };
        let zero = BigRational::zero();
        match (a.cmp(&zero), b.cmp(&zero)) {
            (sa, Ordering::Equal) => sa,
            (Ordering::Equal, sb) => sb,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // opposite signs: compare a^2 with d b^2
            (sa, _) => {
                let lhs = a * a;
                let rhs = &d * b * b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => unreachable!("d is not a square"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn try_cmp(&self, other: &Value) -> Result<Ordering> {
        self.check(other)?;
        Ok(self.sub(other).signum())
    }

    pub fn add(&self, other: &Value) -> Value {
        self.check(other).expect("value contexts");
        Value {
            ctx: self.ctx,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Value {
        Value {
            ctx: self.ctx,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Value {
        Value {
            ctx: self.ctx,
            coords: self.coords.iter().map(|a| a * q).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Value {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// `sum k_i v_i`.
    pub fn combination(ctx: GeneratorContext, ks: &[i64], vs: &[Value]) -> Value {
        ks.iter()
            .zip(vs)
            .fold(Value::zero(ctx), |acc, (&k, v)| acc.add(&v.scale_int(k)))
    }

    fn check(&self, other: &Value) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "{} vs {}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }
}

impl Ord for Value {
    /// Panics on a context mismatch; use [`Value::try_cmp`] to get an error instead.
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("value contexts")
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.coords[0];
        match self.ctx {
            GeneratorContext::Rational => write!(f, "{a}"),
            GeneratorContext::Quadratic(d) => {
                let b = &self.coords[1];
                let root = if b.is_one() {
                    format!("sqrt({d})")
                } else {
                    format!("{}*sqrt({d})", b.abs())
                };
                match (a.is_zero(), b.cmp(&BigRational::zero())) {
                    (_, Ordering::Equal) => write!(f, "{a}"),
                    (true, Ordering::Greater) => f.write_str(&root),
                    (true, Ordering::Less) if (-b).is_one() => write!(f, "-sqrt({d})"),
                    (true, Ordering::Less) => write!(f, "-{root}"),
                    (false, Ordering::Greater) => write!(f, "{a} + {root}"),
                    (false, Ordering::Less) if (-b).is_one() => write!(f, "{a} - sqrt({d})"),
                    (false, Ordering::Less) => write!(f, "{a} - {root}"),
                }
            }
        }
    }
}

impl ExprTarget for Value {
    fn number(&self, q: &BigRational) -> Result<Self> {
        Ok(Value::rational(self.ctx, q.clone()))
    }

    fn ident(&self, name: &str) -> Result<Self> {
        Err(Error::Parse(format!("unexpected name `{name}` in a value")))
    }

    fn call(&self, name: &str, arg: &BigInt) -> Result<Self> {
        match (name, self.ctx) {
            ("sqrt", GeneratorContext::Quadratic(d)) if arg.to_u64() == Some(d) => {
                Value::sqrt_generator(self.ctx)
            }
            _ => Err(Error::ContextMismatch(format!(
                "`{name}({arg})` is not a generator of context {}",
                self.ctx
            ))),
        }
    }

    fn add(a: Self, b: Self) -> Result<Self> {
        Ok(Value::add(&a, &b))
    }

    fn mul(a: Self, b: Self) -> Result<Self> {
        match (a.as_rational(), b.as_rational()) {
            (Some(q), _) => Ok(b.scale(q)),
            (_, Some(q)) => Ok(a.scale(q)),
            _ => Err(Error::Parse("product of two irrational values".into())),
        }
    }

    fn neg(a: Self) -> Result<Self> {
        Ok(Value::neg(&a))
    }

    fn div(a: Self, b: Self) -> Result<Self> {
        match b.as_rational() {
            Some(q) if q.is_zero() => Err(Error::DivisionByZero),
            Some(q) => Ok(a.scale(&q.recip())),
            None => Err(Error::Parse("division by an irrational value".into())),
        }
    }

    fn pow(_a: Self, _e: &BigRational) -> Result<Self> {
        Err(Error::Parse(
            "powers are not allowed in value literals".into(),
        ))
    }
}

/// Subgroup of the value space generated by finitely many values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueLattice {
    ctx: GeneratorContext,
    generators: Vec<Value>,
}

/// `[L_big : L_small]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// Common denominator and integer coordinate matrix (columns = values).
fn integer_columns(values: &[&Value], dim: usize) -> (BigInt, IntMatrix) {
    let mut den = BigInt::one();
    for v in values {
        for c in &v.coords {
            den = den.lcm(c.denom());
        }
    }
    let m = (0..dim)
        .map(|i| {
            values
                .iter()
                .map(|v| (&v.coords[i] * BigRational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    (den, m)
}

impl ValueLattice {
    pub fn new(generators: Vec<Value>) -> Result<Self> {
        let ctx = generators
            .first()
            .map(Value::context)
            .ok_or_else(|| Error::Precondition("a lattice needs at least one generator".into()))?;
        for g in &generators {
            if g.context() != ctx {
                return Err(Error::ContextMismatch(format!("{} vs {ctx}", g.context())));
            }
        }
        Ok(ValueLattice { ctx, generators })
    }

    pub fn context(&self) -> GeneratorContext {
        self.ctx
    }

    pub fn generators(&self) -> &[Value] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        let refs: Vec<&Value> = self.generators.iter().collect();
        let (_, m) = integer_columns(&refs, self.ctx.dim());
        column_hermite(&m, refs.len()).rank()
    }

    /// Integer coordinates of `v` over the generators, if `v` lies in the lattice.
    pub fn member(&self, v: &Value) -> Result<Option<Vec<BigInt>>> {
        if v.context() != self.ctx {
            return Err(Error::ContextMismatch(format!(
                "{} vs {}",
                v.context(),
                self.ctx
            )));
        }
        let mut refs: Vec<&Value> = self.generators.iter().collect();
        refs.push(v);
        let (_, mut m) = integer_columns(&refs, self.ctx.dim());
        let b: Vec<BigInt> = m.iter_mut().map(|row| row.pop().expect("column")).collect();
        Ok(column_hermite(&m, self.generators.len()).solve(&b))
    }

    pub fn contains(&self, v: &Value) -> Result<bool> {
        Ok(self.member(v)?.is_some())
    }

    /// `[self : small]`.
    pub fn index_of(&self, small: &ValueLattice) -> Result<LatticeIndex> {
        if small.ctx != self.ctx {
            return Err(Error::ContextMismatch(format!(
                "{} vs {}",
                small.ctx, self.ctx
            )));
        }
        let refs: Vec<&Value> = self.generators.iter().chain(&small.generators).collect();
        let (_, m) = integer_columns(&refs, self.ctx.dim());
        let big_cols: IntMatrix = m
            .iter()
            .map(|r| r[..self.generators.len()].to_vec())
            .collect();
        let big = column_hermite(&big_cols, self.generators.len());
        // coordinates of every small generator over the basis of the big lattice
        let basis_h: IntMatrix = big.h.iter().map(|r| r[..big.rank()].to_vec()).collect();
        let basis = column_hermite(&basis_h, big.rank());
        let mut coords: IntMatrix = vec![Vec::new(); big.rank()];
        for (k, g) in small.generators.iter().enumerate() {
            let col: Vec<BigInt> = m
                .iter()
                .map(|r| r[self.generators.len() + k].clone())
                .collect();
            let y = basis
                .solve(&col)
                .ok_or_else(|| Error::NotASubgroup(format!("{g} is not in the larger lattice")))?;
            for (row, yi) in coords.iter_mut().zip(y) {
                row.push(yi);
            }
        }
        let small_h = column_hermite(&coords, small.generators.len());
        if small_h.rank() != big.rank() {
            return Ok(LatticeIndex::Infinite);
        }
        let index = small_h
            .pivots
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (j, &p)| acc * &small_h.h[p][j]);
        Ok(LatticeIndex::Finite(index))
    }
}

/// Primitive integer relation `(q_1, ..., q_n, -q)` among `values`, with `q > 0`.
pub fn rational_relation(values: &[Value]) -> Result<Vec<BigInt>> {
    let ctx = values
        .first()
        .map(Value::context)
        .ok_or(Error::NoRelation)?;
    let refs: Vec<&Value> = values.iter().collect();
    for v in &refs {
        if v.context() != ctx {
            return Err(Error::ContextMismatch(format!("{} vs {ctx}", v.context())));
        }
    }
    let (_, m) = integer_columns(&refs, ctx.dim());
    let mut kernel = column_hermite(&m, refs.len()).kernel();
    match kernel.len() {
        0 => return Err(Error::NoRelation),
        1 => {}
        k => return Err(Error::Ambiguous(k)),
    }
    let mut rel = kernel.pop().expect("one kernel vector");
    let g = rel.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    for x in rel.iter_mut() {
        *x /= &g;
    }
    match rel.last().map(|x| x.signum()) {
        Some(s) if s.is_positive() => rel.iter_mut().for_each(|x| *x = -&*x),
        Some(s) if s.is_zero() => {
            return Err(Error::Precondition(
                "the leading values are already dependent".into(),
            ))
        }
        _ => {}
    }
    Ok(rel)
}
