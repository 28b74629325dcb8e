//! Fixtures shared by the benchmarks.

use flcc::frs::{frs_encode, DecodeResult, FrsCodeword, FrsParams};
use flcc::linalg::AffineSolution;
use flcc::{Fe, MatFq, Poly, PrimeField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A codeword of a random message with `errors` symbols replaced by noise.
pub fn noisy_word(p: &FrsParams, errors: usize, seed: u64) -> FrsCodeword {
    let f = p.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msg = Poly::new((0..p.k).map(|_| f.random(&mut rng)).collect());
    let mut y = frs_encode(&msg, p).expect("fixture parameters are valid");
    for j in 0..errors {
        y.symbols[j] = (0..p.m).map(|_| f.random(&mut rng)).collect();
    }
    y
}

/// A random affine subspace of `F_q^k` with dimension `l`, in the shape
/// the list decoder returns.
pub fn random_subspace(f: &PrimeField, k: usize, l: usize, seed: u64) -> DecodeResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let particular = (0..k).map(|_| f.random(&mut rng)).collect();
    let basis = MatFq::from_fn(k, l, |r, c| match (r < l, r == c) {
        (true, true) => Fe::ONE,
        (true, false) => Fe::ZERO,
        _ => f.random(&mut rng),
    });
    DecodeResult {
        subspace: AffineSolution {
            particular,
            basis,
            free_rows: (0..l).collect(),
        },
        s_used: l + 1,
        degree_param: 0,
    }
}

/// Evaluations of the subspace member at coordinates `x` on `points`.
pub fn side_info(f: &PrimeField, d: &DecodeResult, x: &[Fe], points: &[Fe]) -> Vec<Fe> {
    let truth = Poly::new(d.subspace.point(f, x));
    points.iter().map(|&p| truth.eval(f, p)).collect()
}

pub fn random_coords(f: &PrimeField, l: usize, seed: u64) -> Vec<Fe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..l).map(|_| f.random(&mut rng)).collect()
}
