//! Prime-field arithmetic over `F_q` and primitive element discovery.
//!
//! Elements are stored as canonical representatives in `[0, q)`. Every
//! operation reduces eagerly, so an [`Fe`] produced by a [`PrimeField`] is
//! always valid for that field.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("{gamma} is not a primitive element of F_{q}")]
    NotPrimitive { q: u64, gamma: u64 },
    #[error("inversion of zero")]
    ZeroInverse,
}

/// An element of a prime field, kept in canonical form.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fe(u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_q` together with a verified primitive element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
    gamma: Fe,
}

impl PrimeField {
    /// Builds `F_q`, checking primality and picking the smallest primitive element.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let gamma = find_primitive(q)?;
        Ok(Self { q, gamma })
    }

    /// Builds `F_q` with a caller-chosen generator, which is verified.
    pub fn with_primitive(q: u64, gamma: u64) -> Result<Self, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        let gamma = gamma % q;
        if !is_generator(q, gamma, &prime_factors(q - 1)) {
            return Err(FieldError::NotPrimitive { q, gamma });
        }
        Ok(Self {
            q,
            gamma: Fe(gamma),
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn primitive(&self) -> Fe {
        self.gamma
    }

    #[inline]
    pub fn elem(&self, v: u64) -> Fe {
        Fe(v % self.q)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let r = (v as i128).rem_euclid(self.q as i128);
        Fe(r as u64)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let (s, overflow) = a.0.overflowing_add(b.0);
        if overflow || s >= self.q {
            Fe(s.wrapping_sub(self.q))
        } else {
            Fe(s)
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if a.0 >= b.0 {
            Fe(a.0 - b.0)
        } else {
            Fe(self.q - (b.0 - a.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            a
        } else {
            Fe(self.q - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(mul_mod(a.0, b.0, self.q))
    }

    /// `dst[i] -= c * src[i]`, the row update of Gaussian elimination.
    pub fn sub_scaled(&self, dst: &mut [Fe], c: Fe, src: &[Fe]) {
        if self.q <= 1 << 16 {
            // Both factors are below 2^16, so the product fits in a u32 and
            // a 64-bit reciprocal reduces it exactly without dividing.
            let q = self.q;
            let recip = (u64::MAX / q).wrapping_add(1);
            let c = c.0;
            for (d, s) in dst.iter_mut().zip(src) {
                let low = recip.wrapping_mul(c * s.0);
                let p = ((u128::from(low) * u128::from(q)) >> 64) as u64;
                d.0 = if d.0 >= p { d.0 - p } else { d.0 + q - p };
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.sub(*d, self.mul(c, s));
            }
        }
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        Fe(pow_mod(a.0, e, self.q))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        // Extended Euclid on (a, q).
        let (mut r0, mut r1) = (self.q as i128, a.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Fe(t0.rem_euclid(self.q as i128) as u64))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `gamma^e`, the `e`-th evaluation point of folded codes over this field.
    pub fn gamma_pow(&self, e: u64) -> Fe {
        self.pow(self.gamma, e)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(0..self.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(1..self.q))
    }

    /// True when `g` has multiplicative order exactly `q - 1`.
    pub fn is_primitive(&self, g: Fe) -> bool {
        is_generator(self.q, g.0, &prime_factors(self.q - 1))
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    // Divide in the narrowest width that holds the product; wide division is slow.
    if m <= 1 << 16 {
        (a.wrapping_mul(b) as u32 % m as u32) as u64
    } else if m <= 1 << 32 {
        a.wrapping_mul(b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(mut v) = stack.pop() {
        if v < 2 {
            continue;
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            if v % p == 0 {
                out.push(p);
                while v % p == 0 {
                    v /= p;
                }
            }
        }
        if v == 1 {
            continue;
        }
        if is_prime(v) {
            out.push(v);
            continue;
        }
        let d = pollard_rho(v);
        stack.push(d);
        stack.push(v / d);
    }
    out.sort_unstable();
    out.dedup();
    out
}

// Brent's variant; `n` is odd, composite and free of factors below 17.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_generator(q: u64, g: u64, factors_of_order: &[u64]) -> bool {
    if g == 0 {
        return false;
    }
    factors_of_order
        .iter()
        .all(|&p| pow_mod(g, (q - 1) / p, q) != 1)
}

/// Smallest primitive element of `F_q`.
pub fn find_primitive(q: u64) -> Result<Fe, FieldError> {
    if !is_prime(q) {
        return Err(FieldError::NotPrime(q));
    }
    if q == 2 {
        return Ok(Fe(1));
    }
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| is_generator(q, g, &factors))
        .map(Fe)
        .ok_or(FieldError::NotPrimitive { q, gamma: 0 })
}
