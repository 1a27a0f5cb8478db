use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perron::PerronTransform;
use crate::valgroup::Value;

/// The indices where `nu*(a_i xm^i)` attains its minimum `rho`, with the
/// exponents those terms get under the transform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaData {
    pub rho: String,
    pub sigma: Vec<u32>,
    pub t: usize,
    /// Exponent of `xm + c` in the image of `a_{sigma_l} xm^{sigma_l}`.
    pub lambda: Vec<i64>,
    /// Exponents of the new `x1..xn` in that image.
    pub tau: Vec<Vec<i64>>,
    /// `d_i(sigma_l)`: the monomial exponents of `a_{sigma_l}`.
    pub exponents: Vec<Vec<i64>>,
    pub d: i64,
}

impl SigmaData {
    /// `terms` lists `(i, d(i))` for every nonzero coefficient `a_i = x^{d(i)} * unit`.
    pub fn new(
        terms: &[(u32, Vec<i64>)],
        weights: &[Value],
        gamma: &Value,
        t: &PerronTransform,
    ) -> Result<Self> {
        let ctx = gamma.context();
        let value = |(i, d): &(u32, Vec<i64>)| {
            Value::combination(ctx, d, weights).add(&gamma.scale_int(*i as i64))
        };
        let rho = terms
            .iter()
            .map(value)
            .min()
            .ok_or_else(|| Error::Precondition("f has no terms".into()))?;
        let hits: Vec<&(u32, Vec<i64>)> = terms.iter().filter(|p| value(p) == rho).collect();
        if hits.len() < 2 {
            return Err(Error::Internal(format!(
                "minimum {rho} attained once; the arc cannot lie on f"
            )));
        }
        let n = weights.len();
        let mut lambda = Vec::new();
        let mut tau = Vec::new();
        for (i, d) in &hits {
            let mut e = d.clone();
            e.push(*i as i64);
            let new = t.new_exponents(&e);
            lambda.push(new[n]);
            tau.push(new[..n].to_vec());
        }
        Ok(SigmaData {
            rho: rho.to_string(),
            sigma: hits.iter().map(|(i, _)| *i).collect(),
            t: hits.len(),
            lambda,
            tau,
            exponents: hits.iter().map(|(_, d)| d.clone()).collect(),
            d: t.leading_minor(),
        })
    }

    /// The images share their `tau` part and `(lambda_i - lambda_1) d = sigma_i - sigma_1`.
    pub fn formulas_hold(&self) -> bool {
        let (s1, l1) = (self.sigma[0] as i64, self.lambda[0]);
        self.tau.iter().all(|t| *t == self.tau[0])
            && self
                .sigma
                .iter()
                .zip(&self.lambda)
                .all(|(&s, &l)| (l - l1) * self.d == s as i64 - s1)
    }

    /// The forced shape when the multiplicity fails to drop: `sigma_t = r`,
    /// `sigma_1 = 0`, `d = +-1`, and `r` divides the exponents of `a_{sigma_1}`
    /// (of `a_{sigma_t}` when `d < 0`).
    pub fn trichotomy(&self, r: u32) -> bool {
        let anchor = if self.d > 0 { 0 } else { self.t - 1 };
        self.sigma[self.t - 1] == r
            && self.sigma[0] == 0
            && self.d.abs() == 1
            && self.exponents[anchor].iter().all(|e| e % r as i64 == 0)
    }

    /// `sigma_{t-1} = r - 1`, the shape that makes a characteristic-0 translation work.
    pub fn second_to_last_is(&self, r: u32) -> bool {
        self.t >= 2 && self.sigma[self.t - 2] + 1 == r
    }
}
