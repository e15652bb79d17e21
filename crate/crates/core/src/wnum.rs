//! Highest-weight data of minimal W-algebra modules and the small-weight
//! enumeration for the family `t w_1`.

use std::fmt;

use thiserror::Error;

use crate::arith::Rational;
use crate::lie::{LieError, Weight, WeightLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WnumError {
    #[error("level {0} is critical")]
    CriticalLevel(Rational),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `<l, l + 2 rho> / (2 (k + n))` for sl_n.
pub fn sugawara_weight(n: usize, k: &Rational, lambda: &Weight) -> Result<Rational, WnumError> {
    sugawara_with(&WeightLattice::new(n)?, k, lambda)
}

fn sugawara_with(lat: &WeightLattice, k: &Rational, lambda: &Weight) -> Result<Rational, WnumError> {
    let shifted = k + &Rational::from_int(lat.rank() as i64 + 1);
    if shifted.is_zero() {
        return Err(WnumError::CriticalLevel(k.clone()));
    }
    let two_rho = lat.rho().scale(&Rational::from_int(2));
    let num = lat.inner(lambda, &lambda.add(&two_rho))?;
    Ok(num.checked_div(&(&shifted * &Rational::from_int(2))).expect("nonzero"))
}

/// Eigenvalues of J(0) and L(0) on the top of the module with highest weight `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WTopData {
    pub j_eigenvalue: Rational,
    pub conformal_weight: Rational,
}

/// `lambda` is a weight of sl_{m+2}.
pub fn minimal_w_top(m: usize, k: &Rational, lambda: &Weight) -> Result<WTopData, WnumError> {
    let lat = WeightLattice::new(m + 2)?;
    let omega = lat.fundamental(1).sub(&lat.fundamental(m + 1));
    let j_eigenvalue = lat.inner(lambda, &omega)?;
    let half = Rational::frac(1, 2);
    let conformal_weight = sugawara_with(&lat, k, lambda)? - &half * &lat.inner(lambda, &lat.theta())?;
    Ok(WTopData { j_eigenvalue, conformal_weight })
}

/// One candidate `t = q (n+1)` for `m = 2n`, `k = -(2n+3)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowWeightRow {
    pub q: u64,
    pub n: u64,
    pub t: u64,
    pub conformal_weight: Rational,
    pub j_eigenvalue: Rational,
}

impl fmt::Display for LowWeightRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} n={} t={} h={} J={}", self.q, self.n, self.t, self.conformal_weight, self.j_eigenvalue)
    }
}

/// `(q^2 + q)(n + 1) / 2`, the weight at `t = q (n+1)`.
pub fn low_weight(q: u64, n: u64) -> Rational {
    Rational::frac(((q * q + q) * (n + 1)) as i64, 2)
}

/// All `q >= 1`, `n >= 2` with `low_weight(q, n) <= bound`, ordered by `(q, n)`,
/// with top data computed from [`minimal_w_top`].
pub fn low_weight_candidates(bound: &Rational) -> Result<Vec<LowWeightRow>, WnumError> {
    let mut rows = Vec::new();
    let mut q = 1u64;
    while low_weight(q, 2) <= *bound {
        let mut n = 2u64;
        while low_weight(q, n) <= *bound {
            let m = (2 * n) as usize;
            let t = q * (n + 1);
            let k = Rational::frac(-(2 * n as i64 + 3), 2);
            let lambda = WeightLattice::new(m + 2)?.fundamental(1).scale(&Rational::from_int(t as i64));
            let top = minimal_w_top(m, &k, &lambda)?;
            rows.push(LowWeightRow { q, n, t, conformal_weight: top.conformal_weight, j_eigenvalue: top.j_eigenvalue });
            n += 1;
        }
        q += 1;
    }
    Ok(rows)
}
