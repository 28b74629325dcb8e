//! Adversary thresholds for LCC and FLCC, in exact rational arithmetic.
//!
//! `a(s) = (s/(s+1)) (1 - m r / (m - s + 1))` is the tolerated adversary
//! fraction of the `N - S` responsive workers when decoding with order `s`,
//! where `r = ((K + T - 1/m) D2 + 1)/(N - S)` is the modified rate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::flcc::{FlccDims, FlccError};

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn floor_clamped(x: &BigRational) -> usize {
    if x.is_negative() {
        0
    } else {
        x.floor().to_integer().to_usize().unwrap_or(usize::MAX)
    }
}

fn check_lcc_pre(d: &FlccDims) -> Result<(), FlccError> {
    let need = (d.batch + d.privacy - 1) * d.degree + d.stragglers + 1;
    if d.workers < need {
        return Err(FlccError::InvalidParams(format!(
            "N = {} < (K+T-1)*D2 + S + 1 = {need}",
            d.workers
        )));
    }
    Ok(())
}

/// `floor((N - (K+T-1) D2 - S - 1) / 2)`.
pub fn lcc_threshold(d: &FlccDims) -> Result<usize, FlccError> {
    check_lcc_pre(d)?;
    Ok((d.workers - (d.batch + d.privacy - 1) * d.degree - d.stragglers - 1) / 2)
}

/// `((K + T - 1/m) D2 + 1) / (N - S)`.
pub fn modified_rate(d: &FlccDims) -> Result<BigRational, FlccError> {
    if d.workers <= d.stragglers || d.fold == 0 {
        return Err(FlccError::InvalidParams(format!(
            "modified rate needs N > S and m >= 1 (N = {}, S = {}, m = {})",
            d.workers, d.stragglers, d.fold
        )));
    }
    let m = int(d.fold);
    let kt = int(d.batch + d.privacy) - int(1) / &m;
    Ok((kt * int(d.degree) + int(1)) / int(d.workers - d.stragglers))
}

/// `a(s)` for `1 <= s <= m`.
pub fn a_of_s(m: usize, r: &BigRational, s: usize) -> BigRational {
    assert!((1..=m).contains(&s), "s = {s} outside [1, {m}]");
    let frac = BigRational::new(BigInt::from(s), BigInt::from(s + 1));
    frac * (int(1) - int(m) * r / int(m - s + 1))
}

/// Continuous maximizer of `a(s)` on `[0, m]`.
///
/// This is the feasible stationary root
/// `(√(m(m+1)(m(1-r)+2)r) - (m+1)) / (mr - 1)`, written with the numerator
/// rationalized as `(m+1)(m-c+1) / (√((m+1)c(m-c+2)) + m + 1)`, `c = m r`,
/// which stays finite at `m r = 1`. Values beyond `m` clamp to `m`.
pub fn continuous_optimum(m: usize, r: &BigRational) -> f64 {
    let mf = m as f64;
    let c = (int(m) * r).to_f64().unwrap_or(f64::INFINITY);
    let disc = ((mf + 1.0) * c * (mf - c + 2.0)).max(0.0);
    let root = (mf + 1.0) * (mf - c + 1.0) / (disc.sqrt() + mf + 1.0);
    root.min(mf)
}

/// `s* = argmax_{s in [m]} a(s)` and `a(s*)`.
///
/// `a` is concave, so only `⌈s̃⌉ - 1` and `⌈s̃⌉` (clamped to `[1, m]`) are
/// compared; ties go to the smaller `s`, which needs less side information.
pub fn optimal_s(m: usize, r: &BigRational) -> (usize, BigRational) {
    assert!(m >= 1, "m must be at least 1");
    let tilde = continuous_optimum(m, r);
    let upper = (tilde.ceil() as i64).clamp(1, m as i64) as usize;
    let lower = (tilde.ceil() as i64 - 1).clamp(1, m as i64) as usize;
    let a_lower = a_of_s(m, r, lower);
    if lower == upper {
        return (lower, a_lower);
    }
    let a_upper = a_of_s(m, r, upper);
    if a_upper > a_lower {
        (upper, a_upper)
    } else {
        (lower, a_lower)
    }
}

/// Adversaries tolerated by FLCC as printed in closed form:
/// `floor((s*/(s*+1)) (N - m D2 (K + T - 1/m)/(m - s* + 1) - S - 1))`.
pub fn flcc_threshold_paper(d: &FlccDims) -> Result<usize, FlccError> {
    check_lcc_pre(d)?;
    let r = modified_rate(d)?;
    let (s, _) = optimal_s(d.fold, &r);
    let m = int(d.fold);
    let kt = int(d.batch + d.privacy) - int(1) / &m;
    let inner =
        int(d.workers) - m * int(d.degree) * kt / int(d.fold - s + 1) - int(d.stragglers) - int(1);
    let v = BigRational::new(BigInt::from(s), BigInt::from(s + 1)) * inner;
    Ok(floor_clamped(&v))
}

/// Adversaries certified by the radius inequality `A / (N - S) <= a(s*)`.
pub fn flcc_threshold_exact(d: &FlccDims) -> Result<usize, FlccError> {
    check_lcc_pre(d)?;
    let r = modified_rate(d)?;
    let (_, a) = optimal_s(d.fold, &r);
    Ok(floor_clamped(&(a * int(d.workers - d.stragglers))))
}

/// Master-side extra work relative to one worker, `(s* - 1)/m`.
pub fn normalized_extra_computation(m: usize, s_star: usize) -> BigRational {
    assert!((1..=m).contains(&s_star), "s* = {s_star} outside [1, {m}]");
    BigRational::new(BigInt::from(s_star - 1), BigInt::from(m))
}

/// Everything the threshold tables report for one folding parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSummary {
    pub fold: usize,
    pub s_star: usize,
    pub a_s_star: BigRational,
    pub paper: usize,
    pub exact: usize,
    pub lcc: usize,
    pub normalized_extra: BigRational,
}

impl ThresholdSummary {
    pub fn compute(d: &FlccDims) -> Result<Self, FlccError> {
        let lcc = lcc_threshold(d)?;
        let r = modified_rate(d)?;
        let (s_star, a_s_star) = optimal_s(d.fold, &r);
        Ok(Self {
            fold: d.fold,
            s_star,
            a_s_star,
            paper: flcc_threshold_paper(d)?,
            exact: flcc_threshold_exact(d)?,
            lcc,
            normalized_extra: normalized_extra_computation(d.fold, s_star),
        })
    }

    pub fn a_s_star_f64(&self) -> f64 {
        self.a_s_star.to_f64().unwrap_or(f64::NAN)
    }

    pub fn normalized_extra_f64(&self) -> f64 {
        self.normalized_extra.to_f64().unwrap_or(f64::NAN)
    }

    /// `A_FLCC / A_LCC` from the closed form; `NaN` when LCC tolerates none.
    pub fn ratio_paper(&self) -> f64 {
        if self.lcc == 0 {
            return f64::NAN;
        }
        self.paper as f64 / self.lcc as f64
    }
}
