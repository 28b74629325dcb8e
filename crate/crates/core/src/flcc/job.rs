use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Fe, PrimeField};
use crate::linalg::MatFq;

/// A matrix-valued polynomial map applied by every worker.
///
/// Each output entry must be a polynomial of total degree at most
/// [`degree`](Self::degree) in the input entries.
pub trait PolynomialJob: Send + Sync {
    fn name(&self) -> &str;
    fn degree(&self) -> usize;
    /// Output shape for an input of shape `(r, h)`.
    fn output_shape(&self, input: (usize, usize)) -> (usize, usize);
    fn apply(&self, field: &PrimeField, x: &MatFq) -> MatFq;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinJob {
    Identity,
    /// Entry-wise `x ↦ x²`.
    EntrywiseSquare,
    /// `X ↦ XᵀX`.
    Gram,
}

impl BuiltinJob {
    pub const ALL: [BuiltinJob; 3] = [
        BuiltinJob::Identity,
        BuiltinJob::EntrywiseSquare,
        BuiltinJob::Gram,
    ];
}

impl PolynomialJob for BuiltinJob {
    fn name(&self) -> &str {
        match self {
            BuiltinJob::Identity => "identity",
            BuiltinJob::EntrywiseSquare => "square",
            BuiltinJob::Gram => "gram",
        }
    }

    fn degree(&self) -> usize {
        match self {
            BuiltinJob::Identity => 1,
            BuiltinJob::EntrywiseSquare | BuiltinJob::Gram => 2,
        }
    }

    fn output_shape(&self, (r, h): (usize, usize)) -> (usize, usize) {
        match self {
            BuiltinJob::Identity | BuiltinJob::EntrywiseSquare => (r, h),
            BuiltinJob::Gram => (h, h),
        }
    }

    fn apply(&self, field: &PrimeField, x: &MatFq) -> MatFq {
        match self {
            BuiltinJob::Identity => x.clone(),
            BuiltinJob::EntrywiseSquare => x.map(|&v| field.mul(v, v)),
            BuiltinJob::Gram => x.transpose().mul(field, x),
        }
    }
}

impl fmt::Display for BuiltinJob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinJob {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(BuiltinJob::Identity),
            "square" | "entrywise_square" => Ok(BuiltinJob::EntrywiseSquare),
            "gram" => Ok(BuiltinJob::Gram),
            other => Err(format!(
                "unknown job '{other}' (expected identity, square or gram)"
            )),
        }
    }
}

/// Largest degree seen along `lines` random lines `X0 + τ·V`, up to `cap`.
///
/// Along a line every output entry is a univariate polynomial in `τ`, so its
/// degree is the smallest `d` whose `(d+1)`-th forward difference vanishes.
/// Needs `q > cap + 1`; returns `None` if some entry exceeds `cap`.
pub fn probe_degree(
    job: &dyn PolynomialJob,
    field: &PrimeField,
    input: (usize, usize),
    cap: usize,
    lines: usize,
    seed: u64,
) -> Option<usize> {
    assert!(
        field.modulus() > cap as u64 + 1,
        "field too small to probe degree {cap}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, h) = input;
    let mut seen = 0;
    for _ in 0..lines {
        let base = MatFq::from_fn(r, h, |_, _| field.random(&mut rng));
        let dir = MatFq::from_fn(r, h, |_, _| field.random(&mut rng));
        let samples: Vec<MatFq> = (0..=cap as u64 + 1)
            .map(|tau| {
                let t = field.elem(tau);
                let x = MatFq::from_fn(r, h, |i, j| {
                    field.add(base[(i, j)], field.mul(t, dir[(i, j)]))
                });
                job.apply(field, &x)
            })
            .collect();
        let (orow, ocol) = samples[0].shape();
        for i in 0..orow {
            for j in 0..ocol {
                let mut diffs: Vec<Fe> = samples.iter().map(|s| s[(i, j)]).collect();
                // diffs[0] after n rounds is the n-th forward difference.
                let mut deg = None;
                for order in 0..=cap + 1 {
                    if diffs.iter().all(|v| v.is_zero()) {
                        deg = Some(order.saturating_sub(1));
                        break;
                    }
                    diffs = diffs.windows(2).map(|w| field.sub(w[1], w[0])).collect();
                }
                seen = seen.max(deg?);
            }
        }
    }
    Some(seen)
}
