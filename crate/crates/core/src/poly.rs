//! Dense univariate polynomials over `F_q` and Lagrange interpolation.

use crate::field::{Fe, FieldError, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("interpolation nodes are not pairwise distinct (repeated node {0})")]
    DuplicateNode(Fe),
    #[error("Lagrange index {index} out of range for {nodes} nodes")]
    IndexOutOfRange { index: usize, nodes: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coefficient vector; `coeffs[i]` multiplies `X^i`. Trailing zeros are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(coeffs: Vec<Fe>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Degree ignoring trailing zeros; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &PrimeField, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// Copy padded (or truncated, if the tail is zero) to exactly `len` coefficients.
    pub fn padded(&self, len: usize) -> Vec<Fe> {
        let mut c = self.coeffs.clone();
        c.resize(len, Fe::ZERO);
        c
    }

    /// Equality as functions, i.e. ignoring trailing zeros.
    pub fn same_as(&self, other: &Poly) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        self.padded(n) == other.padded(n)
    }

    pub fn scale(&self, field: &PrimeField, c: Fe) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn add(&self, field: &PrimeField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let (a, b) = (self.padded(n), other.padded(n));
        Poly::new(a.iter().zip(&b).map(|(&x, &y)| field.add(x, y)).collect())
    }

    pub fn mul(&self, field: &PrimeField, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }
}

fn check_distinct(nodes: &[Fe]) -> Result<(), PolyError> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(PolyError::DuplicateNode(w[0])),
        None => Ok(()),
    }
}

/// `prod_{l != j} (X - nodes[l])`, the numerator of the `j`-th basis polynomial.
fn vanishing_without(field: &PrimeField, nodes: &[Fe], j: usize) -> Poly {
    let mut acc = Poly::constant(Fe::ONE);
    for (l, &b) in nodes.iter().enumerate() {
        if l != j {
            acc = acc.mul(field, &Poly::new(vec![field.neg(b), Fe::ONE]));
        }
    }
    acc
}

/// The Lagrange basis polynomial for `nodes[j - 1]` (1-based `j`): one at
/// its own node, zero at every other node.
pub fn lagrange_monomial(field: &PrimeField, j: usize, nodes: &[Fe]) -> Result<Poly, PolyError> {
    if j == 0 || j > nodes.len() {
        return Err(PolyError::IndexOutOfRange {
            index: j,
            nodes: nodes.len(),
        });
    }
    check_distinct(nodes)?;
    let idx = j - 1;
    let num = vanishing_without(field, nodes, idx);
    let denom = num.eval(field, nodes[idx]);
    Ok(num.scale(field, field.inv(denom)?))
}

/// Values `ell_j(x)` of every basis polynomial over `nodes` at a single point.
pub fn lagrange_basis_at(field: &PrimeField, nodes: &[Fe], x: Fe) -> Result<Vec<Fe>, PolyError> {
    check_distinct(nodes)?;
    if let Some(pos) = nodes.iter().position(|&b| b == x) {
        let mut v = vec![Fe::ZERO; nodes.len()];
        v[pos] = Fe::ONE;
        return Ok(v);
    }
    nodes
        .iter()
        .enumerate()
        .map(|(j, &bj)| {
            let (mut num, mut den) = (Fe::ONE, Fe::ONE);
            for (l, &bl) in nodes.iter().enumerate() {
                if l != j {
                    num = field.mul(num, field.sub(x, bl));
                    den = field.mul(den, field.sub(bj, bl));
                }
            }
            Ok(field.div(num, den)?)
        })
        .collect()
}

/// Unique polynomial of degree `< points.len()` through the given points.
pub fn interpolate(field: &PrimeField, points: &[(Fe, Fe)]) -> Result<Poly, PolyError> {
    let xs: Vec<Fe> = points.iter().map(|p| p.0).collect();
    check_distinct(&xs)?;
    let mut acc = Poly::new(vec![Fe::ZERO; points.len()]);
    for (j, &(xj, yj)) in points.iter().enumerate() {
        if yj.is_zero() {
            continue;
        }
        let num = vanishing_without(field, &xs, j);
        let scale = field.div(yj, num.eval(field, xj))?;
        acc = acc.add(field, &num.scale(field, scale));
    }
    Ok(acc)
}
