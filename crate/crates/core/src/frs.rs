//! Folded Reed-Solomon codes and their linear-algebraic list decoder.
//!
//! A polynomial `f` of degree `< k` is evaluated at `1, γ, ..., γ^{n-1}` and
//! the evaluations are bundled into `N = n/m` symbols of `m` consecutive
//! values. The decoder interpolates a polynomial
//! `Q(X, Y_1..Y_s) = A_0(X) + Σ A_i(X) Y_i` through the received symbols
//! (erased ones contribute nothing) and returns the affine space of
//! coefficient vectors solving `A_0(X) + Σ A_i(X) f(γ^{i-1} X) = 0`. Every
//! polynomial whose encoding is close enough to the received word lies in
//! that space, which has dimension at most `s - 1`.
//!
//! Measured cost is that of dense elimination on a roughly
//! `(N-S)(m-s+1)`-square system, i.e. cubic in the block length.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::field::{Fe, PrimeField};
use crate::linalg::{null_space, solve_affine, AffineSolution, LinalgError, MatFq};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrsError {
    #[error("invalid FRS parameters: {0}")]
    InvalidParams(String),
    #[error("polynomial degree {degree} is not below k = {k}")]
    DegreeTooLarge { degree: usize, k: usize },
    #[error("interpolation order s = {s} outside [1, m = {m}]")]
    InvalidOrder { s: usize, m: usize },
    #[error("received word does not match the code geometry: {0}")]
    Shape(String),
    #[error("degree parameter D is negative; too few non-erased symbols to decode")]
    DegreeParameterNegative,
    #[error("no polynomial of degree < k is consistent with the interpolated Q")]
    NoCandidates,
    #[error("interpolation produced no Q with a nonzero Y-part")]
    DegenerateInterpolation,
}

/// Folding geometry of `FRS_q^{(m)}[n, k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrsParams {
    pub field: PrimeField,
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl FrsParams {
    pub fn new(field: PrimeField, n: usize, m: usize, k: usize) -> Result<Self, FrsError> {
        if m == 0 || !n.is_multiple_of(m) {
            return Err(FrsError::InvalidParams(format!(
                "m = {m} must divide n = {n}"
            )));
        }
        if n as u64 > field.modulus() - 1 {
            return Err(FrsError::InvalidParams(format!(
                "n = {n} exceeds q - 1 = {}",
                field.modulus() - 1
            )));
        }
        if k == 0 || k >= n {
            return Err(FrsError::InvalidParams(format!(
                "k = {k} must satisfy 1 <= k < n = {n}"
            )));
        }
        Ok(Self { field, n, m, k })
    }

    /// Block length `N = n / m`.
    pub fn blocks(&self) -> usize {
        self.n / self.m
    }

    pub fn rate(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.n))
    }

    /// Evaluation point of slot `t` of symbol `j`.
    pub fn point(&self, j: usize, t: usize) -> Fe {
        self.field.gamma_pow((j * self.m + t) as u64)
    }
}

/// `N` symbols of `m` field elements, each possibly flagged as erased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrsCodeword {
    pub symbols: Vec<Vec<Fe>>,
    pub erased: Vec<bool>,
}

impl FrsCodeword {
    pub fn new(symbols: Vec<Vec<Fe>>) -> Self {
        let erased = vec![false; symbols.len()];
        Self { symbols, erased }
    }

    pub fn erase(&mut self, j: usize) {
        self.erased[j] = true;
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    /// Non-erased symbols on which `self` and `other` coincide.
    pub fn agreements(&self, other: &FrsCodeword) -> usize {
        self.symbols
            .iter()
            .zip(&other.symbols)
            .zip(&self.erased)
            .filter(|((a, b), &e)| !e && a == b)
            .count()
    }
}

pub fn frs_encode(f: &Poly, p: &FrsParams) -> Result<FrsCodeword, FrsError> {
    if let Some(d) = f.degree() {
        if d >= p.k {
            return Err(FrsError::DegreeTooLarge { degree: d, k: p.k });
        }
    }
    let symbols = (0..p.blocks())
        .map(|j| (0..p.m).map(|t| f.eval(&p.field, p.point(j, t))).collect())
        .collect();
    Ok(FrsCodeword::new(symbols))
}

/// Affine space of candidate coefficient vectors (length `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub subspace: AffineSolution,
    pub s_used: usize,
    /// Degree parameter `D` used for `A_1..A_s`.
    pub degree_param: usize,
}

impl DecodeResult {
    pub fn dimension(&self) -> usize {
        self.subspace.dimension()
    }

    pub fn contains(&self, field: &PrimeField, f: &Poly) -> bool {
        let k = self.subspace.ambient_dim();
        if f.degree().is_some_and(|d| d >= k) {
            return false;
        }
        self.subspace.contains(field, &f.padded(k))
    }
}

/// List decoding with interpolation order `s`; erased symbols are ignored.
pub fn list_decode(y: &FrsCodeword, s: usize, p: &FrsParams) -> Result<DecodeResult, FrsError> {
    let (m, k, field) = (p.m, p.k, &p.field);
    if s == 0 || s > m {
        return Err(FrsError::InvalidOrder { s, m });
    }
    if y.symbols.len() != p.blocks() || y.erased.len() != p.blocks() {
        return Err(FrsError::Shape(format!(
            "expected {} symbols, got {}",
            p.blocks(),
            y.symbols.len()
        )));
    }
    if let Some(bad) = y.symbols.iter().position(|sym| sym.len() != m) {
        return Err(FrsError::Shape(format!(
            "symbol {bad} does not have {m} entries"
        )));
    }

    let live: Vec<usize> = (0..p.blocks()).filter(|&j| !y.erased[j]).collect();
    let shifts = m - s + 1;
    let numer = (live.len() * shifts) as i64 - k as i64 + 1;
    if numer < 0 {
        return Err(FrsError::DegreeParameterNegative);
    }
    let d = numer as usize / (s + 1);

    // Unknowns: A_0 has D+k coefficients, then A_1..A_s with D+1 each.
    let a0_len = d + k;
    let ai_len = d + 1;
    let unknowns = a0_len + s * ai_len;
    let conditions = live.len() * shifts;
    let mut rows = Vec::with_capacity(conditions * unknowns);
    for &j in &live {
        for shift in 0..shifts {
            let x = p.point(j, shift);
            let powers: Vec<Fe> =
                std::iter::successors(Some(Fe::ONE), |&acc| Some(field.mul(acc, x)))
                    .take(a0_len)
                    .collect();
            rows.extend_from_slice(&powers);
            for l in 0..s {
                let yv = y.symbols[j][shift + l];
                rows.extend(powers[..ai_len].iter().map(|&pw| field.mul(yv, pw)));
            }
        }
    }
    let system = MatFq::new(conditions, unknowns, rows);
    let kernel = null_space(field, &system);
    let q_coeffs = (0..kernel.cols())
        .map(|c| kernel.column(c))
        .find(|v| v[a0_len..].iter().any(|c| !c.is_zero()))
        .ok_or(FrsError::DegenerateInterpolation)?;

    // Coefficient of X^e in A_0 + Σ_l A_l(X) f(γ^{l-1} X), linear in f_0..f_{k-1}.
    let gamma = field.primitive();
    let eqs = a0_len;
    let mut mat = MatFq::zeros(eqs, k);
    for l in 0..s {
        let a_l = &q_coeffs[a0_len + l * ai_len..a0_len + (l + 1) * ai_len];
        let g = field.pow(gamma, l as u64);
        let mut g_pow = Fe::ONE;
        for jdx in 0..k {
            for (deg, &a) in a_l.iter().enumerate() {
                if !a.is_zero() {
                    let cell = &mut mat[(deg + jdx, jdx)];
                    *cell = field.add(*cell, field.mul(a, g_pow));
                }
            }
            g_pow = field.mul(g_pow, g);
        }
    }
    let rhs: Vec<Fe> = q_coeffs[..a0_len].iter().map(|&a| field.neg(a)).collect();
    let subspace = match solve_affine(field, &mat, &rhs) {
        Ok(sol) => sol,
        Err(LinalgError::Inconsistent) => return Err(FrsError::NoCandidates),
        Err(e) => unreachable!("well-shaped system: {e}"),
    };
    Ok(DecodeResult {
        subspace,
        s_used: s,
        degree_param: d,
    })
}

/// Guaranteed decoding radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radius {
    /// Tolerated fraction of the non-erased symbols; may be negative.
    pub fraction: BigRational,
    /// Largest tolerated number of corrupted non-erased symbols.
    pub symbols: usize,
}

impl Radius {
    pub fn fraction_f64(&self) -> f64 {
        self.fraction.to_f64().unwrap_or(f64::NAN)
    }
}

/// `(s/(s+1)) (1 - mR/(m-s+1))` with `R = k / (m (N - erasures))`.
///
/// With no erasures `R = k/n`. Erased symbols shrink the effective length,
/// which raises the effective rate.
pub fn decoding_radius(p: &FrsParams, s: usize, erasures: usize) -> Radius {
    let live = p.blocks().saturating_sub(erasures);
    if live == 0 || s == 0 || s > p.m {
        return Radius {
            fraction: BigRational::zero(),
            symbols: 0,
        };
    }
    let big = |v: usize| BigInt::from(v);
    let rate = BigRational::new(big(p.k), big(p.m * live));
    let one = BigRational::from_integer(big(1));
    let fraction = BigRational::new(big(s), big(s + 1))
        * (one
            - BigRational::from_integer(big(p.m)) * rate
                / BigRational::from_integer(big(p.m - s + 1)));
    let symbols = if fraction.is_positive() {
        (fraction.clone() * BigRational::from_integer(big(live)))
            .floor()
            .to_integer()
            .to_usize()
            .unwrap_or(0)
    } else {
        0
    };
    Radius { fraction, symbols }
}
