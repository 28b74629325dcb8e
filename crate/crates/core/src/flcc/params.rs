use serde::{Deserialize, Serialize};

use crate::field::{Fe, PrimeField};
use crate::flcc::FlccError;

/// Integer protocol dimensions, independent of the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlccDims {
    /// Number of workers `N`.
    pub workers: usize,
    /// Batch size per fold `K`.
    pub batch: usize,
    /// Privacy level `T` (colluding workers that learn nothing).
    pub privacy: usize,
    /// Stragglers `S`.
    pub stragglers: usize,
    /// Byzantine workers `A`.
    pub adversaries: usize,
    /// Folding parameter `m`.
    pub fold: usize,
    /// Declared total degree `D2` of the computed polynomial.
    pub degree: usize,
}

impl FlccDims {
    /// Interpolation nodes per entry polynomial, `m (K + T)`.
    pub fn nodes(&self) -> usize {
        self.fold * (self.batch + self.privacy)
    }

    /// Degree of the composed polynomial `g(u_m(z))`, `(m(K+T) - 1) D2`.
    pub fn composed_degree(&self) -> usize {
        (self.nodes() - 1) * self.degree
    }

    pub fn with_fold(self, fold: usize) -> Self {
        Self { fold, ..self }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers, ..self }
    }
}

/// Validated FLCC parameters with the evaluation and interpolation point sets.
///
/// `E_m = α^0 .. α^{Nm-1}` (worker `i` owns `α^{mi} .. α^{mi+m-1}`) and
/// `I_m = α^{Nm} .. α^{Nm + m(K+T) - 1}`, so both sets are nonzero, distinct
/// and disjoint whenever `q > Nm + m(K+T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlccParams {
    pub field: PrimeField,
    pub dims: FlccDims,
    eval_points: Vec<Fe>,
    interp_points: Vec<Fe>,
}

impl FlccParams {
    pub fn new(field: PrimeField, dims: FlccDims) -> Result<Self, FlccError> {
        validate(&field, &dims)?;
        let nm = dims.workers * dims.fold;
        let eval_points = (0..nm as u64).map(|i| field.gamma_pow(i)).collect();
        let interp_points = (nm as u64..(nm + dims.nodes()) as u64)
            .map(|i| field.gamma_pow(i))
            .collect();
        Ok(Self {
            field,
            dims,
            eval_points,
            interp_points,
        })
    }

    /// `E_m`, all `N m` worker evaluation points.
    pub fn eval_points(&self) -> &[Fe] {
        &self.eval_points
    }

    /// Points of worker `i` (0-based).
    pub fn worker_points(&self, i: usize) -> &[Fe] {
        let m = self.dims.fold;
        &self.eval_points[i * m..(i + 1) * m]
    }

    /// `I_m`; the first `mK` carry data, the rest carry masks.
    pub fn interp_points(&self) -> &[Fe] {
        &self.interp_points
    }

    pub fn data_points(&self) -> &[Fe] {
        &self.interp_points[..self.dims.fold * self.dims.batch]
    }

    /// Coefficient count handed to the list decoder, `(m(K+T)-1) D2 + 1`.
    pub fn decoder_k(&self) -> usize {
        self.dims.composed_degree() + 1
    }
}

fn validate(field: &PrimeField, d: &FlccDims) -> Result<(), FlccError> {
    let bad = |msg: String| Err(FlccError::InvalidParams(msg));
    if d.workers == 0 {
        return bad("N must be at least 1".into());
    }
    if d.batch == 0 {
        return bad("K must be at least 1".into());
    }
    if d.fold == 0 {
        return bad("m must be at least 1".into());
    }
    if d.degree == 0 {
        return bad("D2 must be at least 1".into());
    }
    if d.stragglers + d.adversaries > d.workers {
        return bad(format!(
            "S + A = {} exceeds N = {}",
            d.stragglers + d.adversaries,
            d.workers
        ));
    }
    let q = field.modulus() as u128;
    let nm = (d.workers * d.fold) as u128;
    if q - 1 < nm {
        return bad(format!(
            "q - 1 = {} < N*m = {nm}: not enough evaluation points",
            q - 1
        ));
    }
    let total = nm + d.nodes() as u128;
    if q <= total {
        return bad(format!(
            "q = {q} <= N*m + m(K+T) = {total}: evaluation and interpolation points cannot be disjoint"
        ));
    }
    if d.composed_degree() as u128 >= nm {
        return bad(format!(
            "composed degree (m(K+T)-1)*D2 = {} must be < N*m = {nm}",
            d.composed_degree()
        ));
    }
    Ok(())
}
