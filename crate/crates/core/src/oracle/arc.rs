use std::cmp::Ordering;

use super::{check_frame, ValueResult};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};
use crate::scalars::{Exponent, PuiseuxSeries, Scalar, SeriesOrder};
use crate::valgroup::{GeneratorContext, Value, ValueLattice};

/// The valuation `g -> ord_t g(arc(t))` on `k[x1..xm]`, scaled by `normalization`.
///
/// `f` is the hypersurface the arc lies on; its multiples get value `INFINITE`
/// when exact division certifies it.
#[derive(Debug, Clone)]
pub struct ArcValuation {
    ring: Ring,
    f: Polynomial,
    arc: Vec<PuiseuxSeries>,
    normalization: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxStatus {
    /// The final value lies outside the base value group.
    MaxOutside,
    /// The values kept rising inside the base value group up to the bound or truncation.
    NoMaxUpToBound,
    /// `xm - h` vanishes identically on the hypersurface.
    Infinite,
}

/// Result of the greedy approximation of `xm` by polynomials in `x1..x_{m-1}`.
#[derive(Debug, Clone)]
pub struct BestApprox {
    pub h: Polynomial,
    pub gamma: ValueResult,
    pub status: ApproxStatus,
    /// `nu(xm - h)` after each improvement, starting with `h = 0`.
    pub ladder: Vec<Value>,
    pub diagnostic: Option<String>,
}

impl ArcValuation {
    pub fn new(f: Polynomial, arc: Vec<PuiseuxSeries>, normalization: Value) -> Result<Self> {
        let ring = f.ring();
        if arc.len() != ring.m {
            return Err(Error::FrameMismatch(format!(
                "arc has {} components for {} variables",
                arc.len(),
                ring.m
            )));
        }
        for (i, s) in arc.iter().enumerate() {
            if s.field() != ring.field {
                return Err(Error::FieldMismatch(format!("arc component x{}", i + 1)));
            }
            if let SeriesOrder::Finite(q) = s.order() {
                if q <= Exponent::from_integer(0) {
                    return Err(Error::Precondition(format!(
                        "arc component x{} has order {q}; the center must be the origin",
                        i + 1
                    )));
                }
            }
        }
        if !normalization.is_positive() {
            return Err(Error::Precondition("normalization must be positive".into()));
        }
        Ok(ArcValuation {
            ring,
            f,
            arc,
            normalization,
        })
    }

    /// Cuts every component at `t^trunc`.
    pub fn truncated(&self, trunc: Exponent) -> Self {
        ArcValuation {
            arc: self.arc.iter().map(|s| s.with_trunc(Some(trunc))).collect(),
            ..self.clone()
        }
    }

    /// Same normalization, new equation and arc.
    pub fn replaced(&self, f: Polynomial, arc: Vec<PuiseuxSeries>) -> Result<Self> {
        Self::new(f, arc, self.normalization.clone())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn context(&self) -> GeneratorContext {
        self.normalization.context()
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn arc(&self) -> &[PuiseuxSeries] {
        &self.arc
    }

    pub fn normalization(&self) -> &Value {
        &self.normalization
    }

    /// Smallest truncation order among the components (`None` if all exact).
    pub fn truncation(&self) -> Option<Exponent> {
        self.arc.iter().filter_map(PuiseuxSeries::trunc).min()
    }

    /// `f(arc)`, which must vanish below its truncation.
    pub fn residual(&self) -> Result<PuiseuxSeries> {
        self.f.evaluate_at_arc(&self.arc)
    }

    pub fn is_consistent(&self) -> bool {
        self.residual()
            .map(|s| s.terms().next().is_none())
            .unwrap_or(false)
    }

    fn scale(&self, q: Exponent) -> Value {
        Value::from_exponent(self.context(), q)
            .coords()
            .first()
            .map(|c| self.normalization.scale(c))
            .expect("one coordinate")
    }

    pub fn series_value(&self, s: &PuiseuxSeries) -> ValueResult {
        match s.order() {
            SeriesOrder::Finite(q) => ValueResult::Value(self.scale(q)),
            SeriesOrder::Above(Some(t)) => ValueResult::AboveTruncation(self.scale(t)),
            SeriesOrder::Above(None) => ValueResult::Infinite,
        }
    }

    pub fn value(&self, g: &Polynomial) -> Result<ValueResult> {
        check_frame(self.ring, g)?;
        if g.is_zero() || g.divisible_by(&self.f) == Some(true) {
            return Ok(ValueResult::Infinite);
        }
        Ok(self.series_value(&g.evaluate_at_arc(&self.arc)?))
    }

    /// Ratio of the leading coefficients of `g(arc)` and `u(arc)`.
    pub fn residue(&self, g: &Polynomial, u: &Polynomial) -> Result<Scalar> {
        check_frame(self.ring, g)?;
        check_frame(self.ring, u)?;
        let sg = g.evaluate_at_arc(&self.arc)?;
        let su = u.evaluate_at_arc(&self.arc)?;
        match (sg.leading(), su.leading()) {
            (Some((qg, cg)), Some((qu, cu))) if qg == qu => cg.checked_div(cu),
            (Some((qg, _)), Some((qu, _))) => {
                Err(Error::ValueMismatch(format!("orders {qg} and {qu} differ")))
            }
            _ => Err(Error::ValueMismatch(
                "residue needs two finite values below truncation".into(),
            )),
        }
    }

    /// `nu*(xm)`.
    pub fn last_value(&self) -> Result<ValueResult> {
        self.value(&Polynomial::var(self.ring, self.ring.m - 1))
    }

    /// Finite values of `x1..x_{m-1}`, with their variable indices.
    fn base_values(&self) -> Vec<(usize, Value)> {
        (0..self.ring.m - 1)
            .filter_map(|i| match self.series_value(&self.arc[i]) {
                ValueResult::Value(v) => Some((i, v)),
                _ => None,
            })
            .collect()
    }

    /// Realized base group: generated by the values of `x1..x_{m-1}`.
    pub fn base_lattice(&self) -> Result<ValueLattice> {
        let vals: Vec<Value> = self.base_values().into_iter().map(|(_, v)| v).collect();
        if vals.is_empty() {
            return Err(Error::TruncationExhausted(
                "no base variable has a value below truncation".into(),
            ));
        }
        ValueLattice::new(vals)
    }

    /// Realized extension group: generated by every exponent occurring in the arc.
    pub fn extension_lattice(&self) -> Result<ValueLattice> {
        let mut exps: Vec<Exponent> = self
            .arc
            .iter()
            .flat_map(|s| s.terms().map(|(q, _)| *q).collect::<Vec<_>>())
            .collect();
        exps.sort();
        exps.dedup();
        if exps.is_empty() {
            return Err(Error::TruncationExhausted("the arc has no terms".into()));
        }
        ValueLattice::new(exps.into_iter().map(|q| self.scale(q)).collect())
    }

    /// Monomial in `x1..x_{m-1}` of value `gamma`, smallest exponents first.
    pub fn witness_monomial(&self, gamma: &Value) -> Option<Vec<u32>> {
        fn search(vals: &[(usize, Value)], k: usize, rest: &Value, exps: &mut Vec<u32>) -> bool {
            if k == vals.len() {
                return rest.is_zero();
            }
            let (var, w) = &vals[k];
            let mut rem = rest.clone();
            let mut e = 0;
            while rem.signum() != Ordering::Less {
                exps[*var] = e;
                if search(vals, k + 1, &rem, exps) {
                    return true;
                }
                rem = rem.sub(w);
                e += 1;
            }
            exps[*var] = 0;
            false
        }
        let vals = self.base_values();
        let mut exps = vec![0; self.ring.m];
        search(&vals, 0, gamma, &mut exps).then_some(exps)
    }

    /// Greedy residue-matching improvement of `h` in `nu*(xm - h)`, at most `bound` steps.
    pub fn best_approx(&self, bound: usize) -> Result<BestApprox> {
        let lattice = self.base_lattice()?;
        let xm = Polynomial::var(self.ring, self.ring.m - 1);
        let mut h = Polynomial::zero(self.ring);
        let mut ladder = Vec::new();
        let done = |h: Polynomial, gamma, status, ladder, diagnostic: Option<String>| BestApprox {
            h,
            gamma,
            status,
            ladder,
            diagnostic,
        };
        loop {
            let g = &xm - &h;
            let gamma = self.value(&g)?;
            let v = match &gamma {
                ValueResult::Infinite => {
                    return Ok(done(h, gamma, ApproxStatus::Infinite, ladder, None));
                }
                ValueResult::AboveTruncation(b) => {
                    let diag = format!("truncation reached: value at least {b}");
                    return Ok(done(
                        h,
                        gamma,
                        ApproxStatus::NoMaxUpToBound,
                        ladder,
                        Some(diag),
                    ));
                }
                ValueResult::Value(v) => v.clone(),
            };
            ladder.push(v.clone());
            if !lattice.contains(&v)? {
                return Ok(done(h, gamma, ApproxStatus::MaxOutside, ladder, None));
            }
            if ladder.len() > bound {
                let diag = format!("{bound} improvement steps without leaving the base group");
                return Ok(done(
                    h,
                    gamma,
                    ApproxStatus::NoMaxUpToBound,
                    ladder,
                    Some(diag),
                ));
            }
            let exps = self.witness_monomial(&v).ok_or_else(|| {
                Error::Unsupported(format!("no monomial in the base variables has value {v}"))
            })?;
            let m = Polynomial::monomial(self.ring, exps, self.ring.field.one());
            let c = self.residue(&g, &m)?;
            h = &h + &m.scale(&c);
        }
    }
}
