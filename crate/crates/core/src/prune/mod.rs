//! Unique recovery from a list-decoder subspace using error-free evaluations.
//!
//! Given candidates `f = M x + z`, evaluations `y_e = V f` at points
//! `λ_1..λ_t` give the system `y_e - V z = (V M) x`. When `V M` has full
//! column rank the system pins `x`, otherwise the ambiguity is reported as
//! a detected failure rather than guessed.

pub mod bounds;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Fe, PrimeField};
use crate::frs::DecodeResult;
use crate::linalg::{rref, solve_affine, AffineSolution, LinalgError, MatFq};
use crate::poly::Poly;

pub use bounds::{binomial, bound_gr2016, bound_ours, bound_saraf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PruneError {
    #[error("field too small: q - 1 = {available} nonzero points but k = {k}")]
    FieldTooSmall { available: u64, k: usize },
    #[error("requested {requested} distinct nonzero points but only {available} exist")]
    TooManyPoints { requested: u64, available: u64 },
    #[error("{points} side-information points but {values} values")]
    LengthMismatch { points: usize, values: usize },
    #[error("side information is inconsistent with the candidate subspace")]
    InconsistentSideInfo,
}

/// Points at which error-free evaluations are requested.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SideInfoRequest {
    pub points: Vec<Fe>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PruneOutcome {
    Unique(Poly),
    DetectedFailure,
}

/// Chooses `l` points from successive powers of `γ` so that `V M` is invertible.
pub fn select_points_deterministic(
    field: &PrimeField,
    d: &DecodeResult,
) -> Result<SideInfoRequest, PruneError> {
    let l = d.dimension();
    if l == 0 {
        return Ok(SideInfoRequest::default());
    }
    let k = d.subspace.ambient_dim();
    let available = field.modulus() - 1;
    if available < k as u64 {
        return Err(PruneError::FieldTooSmall { available, k });
    }
    let basis = &d.subspace.basis;
    let mut pool = ((k + 4 * l) as u64).min(available) as usize;
    loop {
        let nodes: Vec<Fe> = (0..pool as u64).map(|i| field.gamma_pow(i)).collect();
        let vm = vandermonde_times(field, &nodes, basis);
        // Pivot columns of (V M)^T are the first independent rows of V M.
        let (_, rows) = rref(field, &vm.transpose());
        if rows.len() == l {
            return Ok(SideInfoRequest {
                points: rows.iter().map(|&i| nodes[i]).collect(),
            });
        }
        // A pool of >= k distinct nodes has rank k, so this only runs if the
        // basis itself is rank deficient.
        assert!(
            (pool as u64) < available,
            "candidate basis is rank deficient"
        );
        pool = ((pool * 2) as u64).min(available) as usize;
    }
}

/// `V M` without materializing `V`: row `i` is `Σ_j λ_i^j M[j, ·]`.
fn vandermonde_times(field: &PrimeField, nodes: &[Fe], m: &MatFq) -> MatFq {
    let (k, l) = m.shape();
    let mut out = MatFq::zeros(nodes.len(), l);
    for (i, &x) in nodes.iter().enumerate() {
        // Horner over the rows of M.
        for j in (0..k).rev() {
            for c in 0..l {
                out[(i, c)] = field.add(field.mul(out[(i, c)], x), m[(j, c)]);
            }
        }
    }
    out
}

/// `t` distinct points, uniform without replacement from `F_q^*`.
pub fn select_points_random(
    t: u64,
    seed: u64,
    field: &PrimeField,
) -> Result<SideInfoRequest, PruneError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    select_points_random_with(t, &mut rng, field)
}

pub fn select_points_random_with<R: Rng + ?Sized>(
    t: u64,
    rng: &mut R,
    field: &PrimeField,
) -> Result<SideInfoRequest, PruneError> {
    let available = field.modulus() - 1;
    if t > available {
        return Err(PruneError::TooManyPoints {
            requested: t,
            available,
        });
    }
    let points = if 2 * t > available {
        // Dense case: partial Fisher-Yates over all of F_q^*.
        let mut all: Vec<u64> = (1..=available).collect();
        for i in 0..t as usize {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
        }
        all.truncate(t as usize);
        all.into_iter().map(|v| field.elem(v)).collect()
    } else {
        let mut seen = HashSet::with_capacity(t as usize);
        let mut out = Vec::with_capacity(t as usize);
        while out.len() < t as usize {
            let v = field.random_nonzero(rng);
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    };
    Ok(SideInfoRequest { points })
}

/// Rewrites the basis so its restriction to `free_rows` is the identity.
///
/// Bases produced by `solve_affine` already have this shape and are returned
/// unchanged.
pub fn normalize_subspace(field: &PrimeField, s: &AffineSolution) -> AffineSolution {
    let l = s.dimension();
    if l == 0 || s.basis.select_rows(&s.free_rows) == MatFq::identity(l) {
        return s.clone();
    }
    let (_, rows) = rref(field, &s.basis.transpose());
    assert_eq!(rows.len(), l, "candidate basis is rank deficient");
    let block = s.basis.select_rows(&rows);
    // Invert the l x l block through [B | I] -> [I | B^-1].
    let aug = MatFq::from_fn(l, 2 * l, |i, j| {
        if j < l {
            block[(i, j)]
        } else if j - l == i {
            Fe::ONE
        } else {
            Fe::ZERO
        }
    });
    let (reduced, _) = rref(field, &aug);
    let inv = MatFq::from_fn(l, l, |i, j| reduced[(i, l + j)]);
    AffineSolution {
        particular: s.particular.clone(),
        basis: s.basis.mul(field, &inv),
        free_rows: rows,
    }
}

/// Solves `y_e - V z = (V M) x` for the unique candidate.
pub fn prune(
    field: &PrimeField,
    d: &DecodeResult,
    req: &SideInfoRequest,
    values: &[Fe],
) -> Result<PruneOutcome, PruneError> {
    if values.len() != req.points.len() {
        return Err(PruneError::LengthMismatch {
            points: req.points.len(),
            values: values.len(),
        });
    }
    let sub = normalize_subspace(field, &d.subspace);
    if sub.dimension() == 0 {
        return Ok(PruneOutcome::Unique(Poly::new(sub.particular)));
    }
    let vm = vandermonde_times(field, &req.points, &sub.basis);
    let z_col = MatFq::new(sub.ambient_dim(), 1, sub.particular.clone());
    let vz = vandermonde_times(field, &req.points, &z_col);
    let rhs: Vec<Fe> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| field.sub(v, vz[(i, 0)]))
        .collect();
    match solve_affine(field, &vm, &rhs) {
        Ok(sol) if sol.dimension() == 0 => Ok(PruneOutcome::Unique(Poly::new(
            sub.point(field, &sol.particular),
        ))),
        Ok(_) => Ok(PruneOutcome::DetectedFailure),
        Err(LinalgError::Inconsistent) => Err(PruneError::InconsistentSideInfo),
        Err(e) => unreachable!("well-shaped system: {e}"),
    }
}
