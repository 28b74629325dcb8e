use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Fe, PrimeField};
use crate::flcc::{FlccError, FlccParams, PolynomialJob};
use crate::linalg::MatFq;
use crate::poly::lagrange_basis_at;

/// The entry-wise encoding polynomial `u_m`, stored by its node values, and
/// the shares it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    /// `I_m`.
    pub nodes: Vec<Fe>,
    /// `X_1..X_{mK}` followed by the masks `Z_1..Z_{mT}`.
    pub values: Vec<MatFq>,
    /// `shares[i][t] = u_m(α_{mi+t})`.
    pub shares: Vec<Vec<MatFq>>,
}

impl Encoding {
    pub fn shape(&self) -> (usize, usize) {
        self.values[0].shape()
    }

    /// `u_m(λ)`.
    pub fn eval_at(&self, field: &PrimeField, x: Fe) -> MatFq {
        let weights = lagrange_basis_at(field, &self.nodes, x).expect("nodes are distinct");
        combine(field, &self.values, &weights)
    }
}

fn combine(field: &PrimeField, mats: &[MatFq], weights: &[Fe]) -> MatFq {
    let (r, h) = mats[0].shape();
    let mut acc = MatFq::zeros(r, h);
    for (mat, &w) in mats.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for i in 0..r {
            for j in 0..h {
                acc[(i, j)] = field.add(acc[(i, j)], field.mul(w, mat[(i, j)]));
            }
        }
    }
    acc
}

/// Encodes `mK` equally shaped matrices with `mT` uniform masks drawn from `seed`.
pub fn flcc_encode(data: &[MatFq], params: &FlccParams, seed: u64) -> Result<Encoding, FlccError> {
    let shape = data.first().map(MatFq::shape).unwrap_or((0, 0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &params.field;
    let masks: Vec<MatFq> = (0..params.dims.fold * params.dims.privacy)
        .map(|_| MatFq::from_fn(shape.0, shape.1, |_, _| f.random(&mut rng)))
        .collect();
    flcc_encode_with_masks(data, &masks, params)
}

/// [`flcc_encode`] with caller-chosen masks.
pub fn flcc_encode_with_masks(
    data: &[MatFq],
    masks: &[MatFq],
    params: &FlccParams,
) -> Result<Encoding, FlccError> {
    let d = &params.dims;
    if data.len() != d.fold * d.batch {
        return Err(FlccError::Shape(format!(
            "expected mK = {} inputs, got {}",
            d.fold * d.batch,
            data.len()
        )));
    }
    if masks.len() != d.fold * d.privacy {
        return Err(FlccError::Shape(format!(
            "expected mT = {} masks, got {}",
            d.fold * d.privacy,
            masks.len()
        )));
    }
    let shape = data[0].shape();
    if let Some(bad) = data.iter().chain(masks).position(|x| x.shape() != shape) {
        return Err(FlccError::Shape(format!(
            "matrix {bad} is not {}x{}",
            shape.0, shape.1
        )));
    }
    let f = &params.field;
    let nodes = params.interp_points().to_vec();
    let values: Vec<MatFq> = data.iter().chain(masks).cloned().collect();
    let shares = (0..d.workers)
        .map(|i| {
            params
                .worker_points(i)
                .iter()
                .map(|&a| {
                    combine(
                        f,
                        &values,
                        &lagrange_basis_at(f, &nodes, a).expect("nodes are distinct"),
                    )
                })
                .collect()
        })
        .collect();
    Ok(Encoding {
        nodes,
        values,
        shares,
    })
}

/// What the master receives from one worker; `None` marks a straggler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerReturn {
    pub worker: usize,
    pub results: Option<Vec<MatFq>>,
}

/// Honest worker: applies `job` to each of its `m` shares.
pub fn worker_compute(
    worker: usize,
    shares: &[MatFq],
    field: &PrimeField,
    job: &dyn PolynomialJob,
) -> WorkerReturn {
    WorkerReturn {
        worker,
        results: Some(shares.iter().map(|s| job.apply(field, s)).collect()),
    }
}
