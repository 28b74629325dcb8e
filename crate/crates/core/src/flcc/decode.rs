use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::field::Fe;
use crate::flcc::{
    modified_rate, optimal_s, Encoding, FlccError, FlccParams, PolynomialJob, WorkerReturn,
};
use crate::frs::{list_decode, DecodeResult, FrsCodeword, FrsError, FrsParams};
use crate::linalg::MatFq;
use crate::poly::Poly;
use crate::prune::{
    prune, select_points_deterministic, select_points_random, PruneError, PruneOutcome,
    SideInfoRequest,
};

/// How the master obtains its error-free evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    /// Points chosen per entry after the returns arrive, so pruning never fails.
    Deterministic,
    /// `t` uniform points drawn from `seed` before decoding, shared by all entries.
    Probabilistic { t: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecodeOptions {
    /// Reject any entry whose recovered polynomial agrees with fewer than
    /// `N - S - A` returned symbols.
    pub consistency_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The list decoder found no candidate.
    Decoder,
    /// Side information left more than one candidate.
    Ambiguous,
    /// Side information contradicts every candidate.
    SideInfoMismatch,
    /// The recovered polynomial disagrees with too many workers.
    Consistency,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MasterOutcome {
    /// `g(X_1), ..., g(X_{mK})`.
    Recovered(Vec<MatFq>),
    DetectedFailure(FailureKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterReport {
    pub outcome: MasterOutcome,
    /// Interpolation order used by every entry decode.
    pub s_used: usize,
    /// Largest candidate-subspace dimension over all entries.
    pub l_max: usize,
    /// Subspace dimension per output entry, row-major; `None` where the
    /// list decoder failed.
    pub entry_dims: Vec<Option<usize>>,
    /// Number of `g(u_m(λ))` evaluations the master computed itself.
    pub side_info_evals: usize,
}

enum EntryState {
    Decoded(DecodeResult),
    Failed(FailureKind),
}

/// Entry-wise list decoding with `s = s*` followed by pruning.
///
/// `returns` holds one entry per worker; a straggler or a return of the
/// wrong shape is treated as an erasure. `encoding` gives the master access
/// to `u_m` for side information.
pub fn master_decode(
    returns: &[WorkerReturn],
    encoding: &Encoding,
    params: &FlccParams,
    job: &dyn PolynomialJob,
    mode: DecodeMode,
    opts: DecodeOptions,
) -> Result<MasterReport, FlccError> {
    let dims = &params.dims;
    let field = &params.field;
    let (m, n_workers) = (dims.fold, dims.workers);
    if returns.len() != n_workers {
        return Err(FlccError::Shape(format!(
            "expected {n_workers} worker returns, got {}",
            returns.len()
        )));
    }
    let out_shape = job.output_shape(encoding.shape());
    let mut by_worker: Vec<Option<&[MatFq]>> = vec![None; n_workers];
    for ret in returns {
        if ret.worker >= n_workers {
            return Err(FlccError::Shape(format!(
                "worker index {} out of range",
                ret.worker
            )));
        }
        if let Some(res) = &ret.results {
            if res.len() == m && res.iter().all(|x| x.shape() == out_shape) {
                by_worker[ret.worker] = Some(res.as_slice());
            }
        }
    }

    let (s, _) = optimal_s(m, &modified_rate(dims)?);
    let frs = FrsParams::new(*field, n_workers * m, m, params.decoder_k())?;
    let entries: Vec<(usize, usize)> = (0..out_shape.0)
        .flat_map(|a| (0..out_shape.1).map(move |b| (a, b)))
        .collect();
    let received: Vec<FrsCodeword> = entries
        .iter()
        .map(|&(a, b)| {
            let symbols = by_worker
                .iter()
                .map(|w| match w {
                    Some(res) => res.iter().map(|x| x[(a, b)]).collect(),
                    None => vec![Fe::ZERO; m],
                })
                .collect();
            let mut word = FrsCodeword::new(symbols);
            for (j, w) in by_worker.iter().enumerate() {
                if w.is_none() {
                    word.erase(j);
                }
            }
            word
        })
        .collect();

    let decoded: Vec<EntryState> = received
        .par_iter()
        .map(|y| match list_decode(y, s, &frs) {
            Ok(d) => Ok(EntryState::Decoded(d)),
            Err(
                FrsError::NoCandidates
                | FrsError::DegenerateInterpolation
                | FrsError::DegreeParameterNegative,
            ) => Ok(EntryState::Failed(FailureKind::Decoder)),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    let entry_dims: Vec<Option<usize>> = decoded
        .iter()
        .map(|e| match e {
            EntryState::Decoded(d) => Some(d.dimension()),
            EntryState::Failed(_) => None,
        })
        .collect();
    let l_max = entry_dims.iter().flatten().copied().max().unwrap_or(0);
    let report = |outcome, side_info_evals| MasterReport {
        outcome,
        s_used: s,
        l_max,
        entry_dims: entry_dims.clone(),
        side_info_evals,
    };

    let requests: Vec<SideInfoRequest> = match mode {
        DecodeMode::Deterministic => decoded
            .iter()
            .map(|e| match e {
                EntryState::Decoded(d) => select_points_deterministic(field, d),
                EntryState::Failed(_) => Ok(SideInfoRequest::default()),
            })
            .collect::<Result<_, _>>()?,
        DecodeMode::Probabilistic { t, seed } => {
            let shared = select_points_random(t, seed, field)?;
            vec![shared; entries.len()]
        }
    };
    // One evaluation of g(u_m(λ)) per distinct λ serves every entry.
    let mut side: BTreeMap<Fe, MatFq> = BTreeMap::new();
    for req in &requests {
        for &x in &req.points {
            side.entry(x)
                .or_insert_with(|| job.apply(field, &encoding.eval_at(field, x)));
        }
    }
    if let Some(kind) = decoded.iter().find_map(|e| match e {
        EntryState::Failed(kind) => Some(*kind),
        EntryState::Decoded(_) => None,
    }) {
        return Ok(report(MasterOutcome::DetectedFailure(kind), side.len()));
    }

    let recovered: Vec<Result<Poly, FailureKind>> = decoded
        .par_iter()
        .zip(&requests)
        .zip(&entries)
        .zip(&received)
        .map(|(((state, req), &(a, b)), y)| {
            let EntryState::Decoded(d) = state else {
                unreachable!("failures returned above")
            };
            let values: Vec<Fe> = req.points.iter().map(|x| side[x][(a, b)]).collect();
            let poly = match prune(field, d, req, &values) {
                Ok(PruneOutcome::Unique(p)) => p,
                Ok(PruneOutcome::DetectedFailure) => return Ok(Err(FailureKind::Ambiguous)),
                Err(PruneError::InconsistentSideInfo) => {
                    return Ok(Err(FailureKind::SideInfoMismatch))
                }
                Err(e) => return Err(e.into()),
            };
            if opts.consistency_check {
                let re = crate::frs::frs_encode(&poly, &frs)?;
                let need = y.symbols.len() - y.erasure_count();
                if y.agreements(&re) + dims.adversaries < need {
                    return Ok(Err(FailureKind::Consistency));
                }
            }
            Ok(Ok(poly))
        })
        .collect::<Result<_, FlccError>>()?;

    let mut polys = Vec::with_capacity(recovered.len());
    for r in recovered {
        match r {
            Ok(p) => polys.push(p),
            Err(kind) => return Ok(report(MasterOutcome::DetectedFailure(kind), side.len())),
        }
    }
    let outputs = params
        .data_points()
        .iter()
        .map(|&beta| {
            let vals: Vec<Fe> = polys.iter().map(|p| p.eval(field, beta)).collect();
            MatFq::new(out_shape.0, out_shape.1, vals)
        })
        .collect();
    Ok(report(MasterOutcome::Recovered(outputs), side.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::flcc::{flcc_encode, flcc_threshold_exact, worker_compute, BuiltinJob, FlccDims};
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const DESK: FlccDims = FlccDims {
        workers: 40,
        batch: 2,
        privacy: 1,
        stragglers: 2,
        adversaries: 0,
        fold: 4,
        degree: 2,
    };

    struct Run {
        params: FlccParams,
        encoding: Encoding,
        returns: Vec<WorkerReturn>,
        truth: Vec<MatFq>,
    }

    /// Stragglers are the first `S` workers, adversaries a random subset of the
    /// rest whose returns are replaced by uniform noise.
    fn run(dims: FlccDims, job: BuiltinJob, seed: u64) -> Run {
        let f = PrimeField::new(257).unwrap();
        let params = FlccParams::new(f, dims).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<MatFq> = (0..dims.fold * dims.batch)
            .map(|_| MatFq::from_fn(2, 2, |_, _| f.random(&mut rng)))
            .collect();
        let encoding = flcc_encode(&data, &params, seed ^ 0xABCD).unwrap();
        let out = job.output_shape((2, 2));
        let bad: Vec<usize> = sample(&mut rng, dims.workers - dims.stragglers, dims.adversaries)
            .into_iter()
            .map(|i| i + dims.stragglers)
            .collect();
        let returns = (0..dims.workers)
            .map(|i| {
                if i < dims.stragglers {
                    WorkerReturn {
                        worker: i,
                        results: None,
                    }
                } else if bad.contains(&i) {
                    let junk = (0..dims.fold)
                        .map(|_| MatFq::from_fn(out.0, out.1, |_, _| f.random(&mut rng)))
                        .collect();
                    WorkerReturn {
                        worker: i,
                        results: Some(junk),
                    }
                } else {
                    worker_compute(i, &encoding.shares[i], &f, &job)
                }
            })
            .collect();
        let truth = data.iter().map(|x| job.apply(&f, x)).collect();
        Run {
            params,
            encoding,
            returns,
            truth,
        }
    }

    fn decode(r: &Run, job: BuiltinJob, mode: DecodeMode) -> MasterReport {
        master_decode(
            &r.returns,
            &r.encoding,
            &r.params,
            &job,
            mode,
            DecodeOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn clean_returns_recover_exactly() {
        for job in BuiltinJob::ALL {
            let r = run(
                FlccDims {
                    stragglers: 0,
                    ..DESK
                },
                job,
                1,
            );
            let rep = decode(&r, job, DecodeMode::Deterministic);
            assert_eq!(
                rep.outcome,
                MasterOutcome::Recovered(r.truth.clone()),
                "{job}"
            );
            assert_eq!(rep.l_max, 0);
            assert_eq!(rep.side_info_evals, 0);
        }
    }

    #[test]
    fn tolerates_exact_threshold() {
        let a = flcc_threshold_exact(&DESK).unwrap();
        let dims = FlccDims {
            adversaries: a,
            ..DESK
        };
        for seed in 0..5 {
            for job in [BuiltinJob::EntrywiseSquare, BuiltinJob::Gram] {
                let r = run(dims, job, seed);
                let rep = decode(&r, job, DecodeMode::Deterministic);
                assert_eq!(rep.s_used, 2);
                assert_eq!(
                    rep.outcome,
                    MasterOutcome::Recovered(r.truth.clone()),
                    "seed {seed} {job}"
                );
                assert!(rep.side_info_evals <= rep.l_max.max(1) * 4);
            }
        }
    }

    #[test]
    fn probabilistic_mode_never_lies() {
        let dims = FlccDims {
            adversaries: 19,
            ..DESK
        };
        for seed in 0..5 {
            let r = run(dims, BuiltinJob::EntrywiseSquare, seed);
            for t in [0, 1, 2] {
                let rep = decode(
                    &r,
                    BuiltinJob::EntrywiseSquare,
                    DecodeMode::Probabilistic { t, seed },
                );
                match rep.outcome {
                    MasterOutcome::Recovered(out) => assert_eq!(out, r.truth),
                    MasterOutcome::DetectedFailure(kind) => {
                        assert_eq!(kind, FailureKind::Ambiguous);
                        assert!(rep.l_max as u64 > 0);
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_check_passes_honest_runs() {
        let dims = FlccDims {
            adversaries: 5,
            ..DESK
        };
        let r = run(dims, BuiltinJob::Gram, 3);
        let opts = DecodeOptions {
            consistency_check: true,
        };
        let rep = master_decode(
            &r.returns,
            &r.encoding,
            &r.params,
            &BuiltinJob::Gram,
            DecodeMode::Deterministic,
            opts,
        )
        .unwrap();
        assert_eq!(rep.outcome, MasterOutcome::Recovered(r.truth));
    }

    #[test]
    fn wrong_return_count_is_an_error() {
        let r = run(DESK, BuiltinJob::Identity, 0);
        let res = master_decode(
            &r.returns[1..],
            &r.encoding,
            &r.params,
            &BuiltinJob::Identity,
            DecodeMode::Deterministic,
            DecodeOptions::default(),
        );
        assert!(matches!(res, Err(FlccError::Shape(_))));
    }
}
