//! Closed-form lower bounds on the probability that random side information
//! pins down the true polynomial.
//!
//! All three are evaluated exactly (big-integer binomials, rational powers)
//! and converted to `f64` at the end, clamped to `[0, 1]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, r)`, zero outside `0 <= r <= n`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn clamp_unit(x: BigRational) -> f64 {
    if x.is_negative() {
        0.0
    } else if x > BigRational::one() {
        1.0
    } else {
        x.to_f64().unwrap_or(0.0)
    }
}

/// `Σ_{i=l}^{t} C(q-k+l-1, i) C(k-l, t-i) / C(q-1, t)`.
///
/// `l` is the dimension of the candidate subspace and `t` the number of
/// distinct uniformly random nonzero evaluation points. For `t < l` the sum
/// is empty and the bound is 0.
pub fn bound_ours(q: u64, k: u64, l: u64, t: u64) -> f64 {
    let (q, k, l, t) = (q as i64, k as i64, l as i64, t as i64);
    let good = q - k + l - 1;
    let bad = k - l;
    let num: BigInt = (l..=t)
        .map(|i| binomial(good, i) * binomial(bad, t - i))
        .sum();
    let den = binomial(q - 1, t);
    if den.is_zero() {
        return 0.0;
    }
    clamp_unit(BigRational::new(num, den))
}

/// `max(0, 1 - k * num_evals / q)`.
pub fn bound_gr2016(q: u64, k: u64, num_evals: u64) -> f64 {
    let x = BigRational::one()
        - BigRational::new(BigInt::from(k) * BigInt::from(num_evals), BigInt::from(q));
    clamp_unit(x)
}

/// `max(0, 1 - C(t, l-1) (k/n)^{t-l+1})`.
pub fn bound_saraf(n: u64, k: u64, l: u64, t: u64) -> f64 {
    if t + 1 < l {
        return 0.0;
    }
    let exp = (t + 1 - l) as i32;
    let ratio = BigRational::new(BigInt::from(k), BigInt::from(n));
    let term = BigRational::from_integer(binomial(t as i64, l as i64 - 1))
        * num_traits::pow(ratio, exp as usize);
    clamp_unit(BigRational::one() - term)
}
