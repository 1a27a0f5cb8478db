//! Perron transforms: unimodular monomial substitutions built by subtractive
//! (continued-fraction) steps on the variable weights.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::MonomialValuation;
use crate::poly::{Monomial, Polynomial, Ring};
use crate::scalars::Scalar;
use crate::valgroup::{determinant, rational_relation, Value};

pub const DEFAULT_PERRON_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransformKind {
    /// Monomial substitution in `x1..xn`.
    A6,
    /// Monomial substitution in `x1..xn, xm` whose last new coordinate is `xm + c`.
    A1,
}

/// `x_i = prod_j y_j^{a_ij}` over the slots the transform acts on. For `A1` the
/// slots are `x1..xn, xm` and the last new coordinate is `y_{n+1} = xm + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronTransform {
    kind: TransformKind,
    matrix: Vec<Vec<u64>>,
    c: Option<Scalar>,
}

fn to_int_matrix(m: &[Vec<u64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn minor(m: &[Vec<BigInt>], row: usize, col: usize) -> Vec<Vec<BigInt>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Internal(format!("matrix entry {x} overflows i64")))
}

impl PerronTransform {
    fn validate(kind: TransformKind, matrix: Vec<Vec<u64>>, c: Option<Scalar>) -> Result<Self> {
        let k = matrix.len();
        if k == 0 || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::Precondition(
                "transform matrix must be square".into(),
            ));
        }
        if kind == TransformKind::A1 && k < 2 {
            return Err(Error::Precondition(
                "an A1 transform acts on at least two slots".into(),
            ));
        }
        let det = determinant(&to_int_matrix(&matrix));
        if !det.is_one() {
            return Err(Error::Precondition(format!(
                "transform determinant is {det}, not 1"
            )));
        }
        if let Some(c) = &c {
            if c.is_zero() {
                return Err(Error::Precondition(
                    "translation constant must be nonzero".into(),
                ));
            }
        }
        Ok(PerronTransform { kind, matrix, c })
    }

    pub fn a6(matrix: Vec<Vec<u64>>) -> Result<Self> {
        Self::validate(TransformKind::A6, matrix, None)
    }

    pub fn a1(matrix: Vec<Vec<u64>>, c: Scalar) -> Result<Self> {
        Self::validate(TransformKind::A1, matrix, Some(c))
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        PerronTransform {
            kind: TransformKind::A6,
            matrix,
            c: None,
        }
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn c(&self) -> Option<&Scalar> {
        self.c.as_ref()
    }

    /// Number of slots in `x1..xn`.
    pub fn n(&self) -> usize {
        match self.kind {
            TransformKind::A6 => self.matrix.len(),
            TransformKind::A1 => self.matrix.len() - 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == TransformKind::A6 && *self == Self::identity(self.matrix.len())
    }

    /// Variable indices of the slots in a ring with `m` variables.
    pub fn slots(&self, m: usize) -> Result<Vec<usize>> {
        let n = self.n();
        match self.kind {
            TransformKind::A6 if n <= m => Ok((0..n).collect()),
            TransformKind::A1 if n < m => Ok((0..n).chain([m - 1]).collect()),
            _ => Err(Error::FrameMismatch(format!(
                "a {n}-slot transform does not fit {m} variables"
            ))),
        }
    }

    /// Inverse matrix (integral since the determinant is 1).
    pub fn inverse(&self) -> Vec<Vec<i64>> {
        let a = to_int_matrix(&self.matrix);
        let k = a.len();
        if k == 1 {
            return vec![vec![1]];
        }
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        // adj(A)_{ij} = (-1)^{i+j} det(A without row j, col i)
                        let d = determinant(&minor(&a, j, i));
                        let s = if (i + j) % 2 == 0 { d } else { -d };
                        to_i64(&s).expect("inverse entry")
                    })
                    .collect()
            })
            .collect()
    }

    /// Images of the old variables as polynomials in the new ones.
    pub fn images(&self, ring: Ring) -> Result<Vec<Polynomial>> {
        let slots = self.slots(ring.m)?;
        let mut images: Vec<Polynomial> = (0..ring.m).map(|i| Polynomial::var(ring, i)).collect();
        let unit = self
            .c
            .as_ref()
            .map(|c| Polynomial::last_plus(ring, c.clone()));
        for (row, &var) in slots.iter().enumerate() {
            let mut exps = vec![0u32; ring.m];
            let mut img = Polynomial::one(ring);
            for (col, &a) in self.matrix[row].iter().enumerate() {
                let a = u32::try_from(a)
                    .map_err(|_| Error::Internal("transform exponent overflow".into()))?;
                match (&unit, col == self.n()) {
                    (Some(u), true) => img = u.pow(a as u64),
                    _ => exps[slots[col]] += a,
                }
            }
            images[var] = &Polynomial::monomial(ring, exps, ring.field.one()) * &img;
        }
        Ok(images)
    }

    pub fn substitute(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(f.compose(&self.images(f.ring())?))
    }

    /// New slot values `v = M^{-1} w`; for `A1` the last entry (the value of
    /// `xm + c`) must be zero and is dropped.
    pub fn transformed_weights(&self, w: &[Value]) -> Result<Vec<Value>> {
        if w.len() != self.matrix.len() {
            return Err(Error::FrameMismatch(format!(
                "{} weights for a {}-slot transform",
                w.len(),
                self.matrix.len()
            )));
        }
        let ctx = w[0].context();
        let inv = self.inverse();
        let mut v: Vec<Value> = inv
            .iter()
            .map(|row| Value::combination(ctx, row, w))
            .collect();
        if self.kind == TransformKind::A1 {
            let last = v.pop().expect("nonempty");
            if !last.is_zero() {
                return Err(Error::ValueMismatch(format!(
                    "the translated coordinate gets value {last}, not 0"
                )));
            }
        }
        Ok(v)
    }

    /// Exponents of `x^e` (over the slots) in the new variables: `M^T e`.
    pub fn new_exponents(&self, e: &[i64]) -> Vec<i64> {
        let k = self.matrix.len();
        (0..k)
            .map(|j| (0..k).map(|i| self.matrix[i][j] as i64 * e[i]).sum())
            .collect()
    }

    /// `Det(A_{n+1,n+1})` for `A = M^T`: the leading `n x n` minor.
    pub fn leading_minor(&self) -> i64 {
        let a = to_int_matrix(&self.matrix);
        let k = a.len();
        to_i64(&determinant(&minor(&a, k - 1, k - 1))).expect("minor")
    }
}

impl fmt::Display for PerronTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        write!(f, "{:?} [{}]", self.kind, rows.join(","))?;
        if let Some(c) = &self.c {
            write!(f, " c={c}")?;
        }
        Ok(())
    }
}

/// Slot values with the matrix built so far; each step replaces `y_j` by `y_j y_i`.
struct Subtractive {
    values: Vec<Value>,
    matrix: Vec<Vec<u64>>,
    steps: usize,
    bound: usize,
}

impl Subtractive {
    fn new(values: Vec<Value>, bound: usize) -> Self {
        let k = values.len();
        Subtractive {
            values,
            matrix: PerronTransform::identity(k).matrix,
            steps: 0,
            bound,
        }
    }

    /// Subtracts slot `i` from slot `j` (`v_j >= v_i`): `col_i += col_j`.
    fn step(&mut self, i: usize, j: usize, tracked: &mut [i64]) -> Result<()> {
        if self.steps == self.bound {
            return Err(Error::StepBoundExceeded(self.bound));
        }
        self.steps += 1;
        self.values[j] = self.values[j].sub(&self.values[i]);
        for row in self.matrix.iter_mut() {
            row[i] = row[i]
                .checked_add(row[j])
                .ok_or_else(|| Error::Internal("transform entry overflow".into()))?;
        }
        tracked[i] = tracked[i]
            .checked_add(tracked[j])
            .ok_or_else(|| Error::Internal("exponent overflow".into()))?;
        Ok(())
    }

    fn argmin(&self) -> usize {
        (0..self.values.len())
            .min_by(|&a, &b| self.values[a].cmp(&self.values[b]).then(a.cmp(&b)))
            .expect("nonempty")
    }

    fn argmax_except(&self, skip: usize) -> usize {
        (0..self.values.len())
            .filter(|&j| j != skip)
            .max_by(|&a, &b| self.values[a].cmp(&self.values[b]).then(b.cmp(&a)))
            .expect("two slots")
    }
}

fn check_weights(w: &[Value]) -> Result<()> {
    for v in w {
        if !v.is_positive() {
            return Err(Error::Precondition(format!("weight {v} is not positive")));
        }
        if v.context() != w[0].context() {
            return Err(Error::ContextMismatch(
                "weights from different contexts".into(),
            ));
        }
    }
    Ok(())
}

/// An `A6` transform after which `M1` divides `M2`, for `nu(M1) < nu(M2)`.
pub fn build_a6_divide(
    m1: &[u32],
    m2: &[u32],
    weights: &[Value],
    bound: usize,
) -> Result<PerronTransform> {
    let n = weights.len();
    if m1.len() != n || m2.len() != n || n == 0 {
        return Err(Error::FrameMismatch(
            "monomials and weights differ in length".into(),
        ));
    }
    check_weights(weights)?;
    let ctx = weights[0].context();
    let val = |e: &[u32]| {
        let ks: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        Value::combination(ctx, &ks, weights)
    };
    if val(m1) >= val(m2) {
        return Err(Error::Precondition(format!(
            "value of the first monomial ({}) must be below the second ({})",
            val(m1),
            val(m2)
        )));
    }
    let mut eps: Vec<i64> = m2
        .iter()
        .zip(m1)
        .map(|(&b, &a)| b as i64 - a as i64)
        .collect();
    let mut s = Subtractive::new(weights.to_vec(), bound);
    while eps.iter().any(|&x| x < 0) {
        let i = s.argmin();
        let j = s.argmax_except(i);
        s.step(i, j, &mut eps)?;
    }
    PerronTransform::a6(s.matrix)
}

/// An `A1` transform for slot values `weights` (on `x1..xn`) and `gamma` (on `xm`),
/// with `gamma` rationally dependent on the weights. `residue` receives the
/// exponent vector (over `x1..xn, xm`) of the Laurent monomial that becomes
/// `xm + c`, and returns its residue `c`.
pub fn build_a1(
    weights: &[Value],
    gamma: &Value,
    residue: impl Fn(&[i64]) -> Result<Scalar>,
    bound: usize,
) -> Result<PerronTransform> {
    let n = weights.len();
    check_weights(weights)?;
    check_weights(std::slice::from_ref(gamma))?;
    let mut all = weights.to_vec();
    all.push(gamma.clone());
    let rel = rational_relation(&all)?;
    let mut q: Vec<i64> = rel.iter().map(to_i64).collect::<Result<_>>()?;
    let mut s = Subtractive::new(all, bound);
    let zero_slot = loop {
        if let Some(k) = (0..=n).find(|&k| s.values[k].is_zero()) {
            break k;
        }
        // equal values: zero the higher slot
        let tie = (0..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .find(|&(i, j)| s.values[i] == s.values[j]);
        if let Some((i, j)) = tie {
            s.step(i, j, &mut q)?;
            continue;
        }
        // the step that most reduces the relation's l1 norm
        let mut best: Option<(i64, usize, usize)> = None;
        for i in 0..=n {
            for j in 0..=n {
                if i == j || s.values[j] < s.values[i] {
                    continue;
                }
                let gain = q[i].abs() - (q[i] + q[j]).abs();
                if gain > 0 && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, i, j));
                }
            }
        }
        let (i, j) = match best {
            Some((_, i, j)) => (i, j),
            None => {
                let i = s.argmin();
                (i, s.argmax_except(i))
            }
        };
        s.step(i, j, &mut q)?;
    };
    let mut matrix = s.matrix;
    if zero_slot != n {
        if n < 2 {
            return Err(Error::Internal("zero value landed on the base slot".into()));
        }
        // move the unit to the last column, then restore det = 1
        for row in matrix.iter_mut() {
            row.swap(zero_slot, n);
            row.swap(0, 1);
        }
    }
    let probe = PerronTransform::a6(matrix.clone())?;
    let laurent = probe.inverse().pop().expect("last row");
    let c = residue(&laurent)?;
    let t = PerronTransform::a1(matrix, c)?;
    let new = t.transformed_weights(&[weights, std::slice::from_ref(gamma)].concat())?;
    if !new.iter().all(Value::is_positive) {
        return Err(Error::Internal("A1 produced a nonpositive weight".into()));
    }
    Ok(t)
}

/// Outcome of checking the Cramer identity on a pair of equal-value monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CramerCheck {
    pub gamma: i64,
    pub holds: bool,
}

/// Checks `d_i - e_i = (-1)^{n+1+i} gamma Det(A_{n+1,i})` with `A = M^T` and
/// `gamma = lambda(d) - lambda(e)`, the difference of the exponents on `xm + c`.
pub fn verify_cramer(t: &PerronTransform, d: &[i64], e: &[i64]) -> Result<CramerCheck> {
    let k = t.matrix.len();
    if d.len() != k || e.len() != k {
        return Err(Error::FrameMismatch(
            "exponent vectors do not match the transform".into(),
        ));
    }
    let (nd, ne) = (t.new_exponents(d), t.new_exponents(e));
    let n = k - 1;
    // equal value <=> equal exponents on the rationally independent new slots
    if t.kind == TransformKind::A1 && nd[..n] != ne[..n] {
        return Err(Error::ValueMismatch(
            "the monomials have different values".into(),
        ));
    }
    let gamma = nd[n] - ne[n];
    let a = to_int_matrix(&t.matrix);
    let holds = (0..k).all(|i| {
        // A = M^T with row n+1 and column i removed <-> M without row i, column n+1
        let minor_det = determinant(&minor(&a, i, n));
        let sign = if (n + 1 + i + 1).is_multiple_of(2) {
            1
        } else {
            -1
        };
        BigInt::from(d[i] - e[i]) == BigInt::from(sign * gamma) * minor_det
    });
    Ok(CramerCheck { gamma, holds })
}

/// Composite of `A6` transforms turning `g` into monomial times unit.
#[derive(Debug, Clone)]
pub struct Monomialization {
    pub transforms: Vec<PerronTransform>,
    pub exponents: Vec<u32>,
    pub unit: Polynomial,
    pub weights: Vec<Value>,
}

/// Repeatedly makes the least-valued monomial of `g` divide every other one.
/// `g` may only involve `x1..xn`, where the weights must be independent.
pub fn monomialize(
    g: &Polynomial,
    w: &MonomialValuation,
    n: usize,
    bound: usize,
) -> Result<Monomialization> {
    if g.is_zero() {
        return Err(Error::Precondition("cannot monomialize 0".into()));
    }
    let ring = g.ring();
    if w.ring() != ring {
        return Err(Error::FrameMismatch(
            "weights and polynomial frames differ".into(),
        ));
    }
    if n == 0 || n > ring.m || (n..ring.m).any(|i| g.depends_on(i)) {
        return Err(Error::Precondition(format!(
            "polynomial must only involve x1..x{n}"
        )));
    }
    let mut weights = w.weights()[..n].to_vec();
    let mut cur = g.clone();
    let mut transforms = Vec::new();
    let mut total = 0usize;
    loop {
        let current = MonomialValuation::new(
            ring,
            weights
                .iter()
                .cloned()
                .chain(w.weights()[n..].iter().cloned())
                .collect(),
        )?;
        let m1 = current
            .minimal_monomial(&cur)
            .ok_or_else(|| Error::Precondition("weights are not independent on x1..xn".into()))?;
        let blocker = cur
            .terms()
            .map(|(m2, _)| m2)
            .find(|m2| !m1.divides(m2))
            .cloned();
        if let Some(m2) = blocker {
            let t = build_a6_divide(
                &m1.exponents()[..n],
                &m2.exponents()[..n],
                &weights,
                bound.saturating_sub(total),
            )?;
            total += 1;
            cur = t.substitute(&cur)?;
            weights = t.transformed_weights(&weights)?;
            transforms.push(t);
            continue;
        }
        let exponents = m1.exponents()[..n].to_vec();
        let unit = cur
            .div_monomial(m1.exponents())
            .ok_or_else(|| Error::Internal("minimal monomial does not divide".into()))?;
        return Ok(Monomialization {
            transforms,
            exponents,
            unit,
            weights,
        });
    }
}

/// Exponent vector helper for callers holding `Monomial`s.
pub fn exponents_i64(m: &Monomial) -> Vec<i64> {
    m.exponents().iter().map(|&e| e as i64).collect()
}
