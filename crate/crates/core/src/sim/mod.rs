//! Seeded Monte Carlo experiments over the FLCC protocol and the bare FRS code.
//!
//! Every trial draws all of its randomness from a single `u64` seed, derived
//! from the campaign seed and the trial index by [`mix_seed`]. Trials run in
//! parallel and are aggregated in index order, so a campaign is a pure
//! function of its configuration and master seed.

mod roundtrip;
mod sweep;

pub use roundtrip::{
    roundtrip_trial, run_roundtrip, DimStats, PruneMode, RoundtripConfig, RoundtripStats,
    RoundtripTrial,
};
pub use sweep::{
    bounds_csv, format_sig6, parse_grid, sweep_bounds, sweep_thresholds, thresholds_csv, BoundRow,
    BoundSweep,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{Fe, PrimeField};
use crate::flcc::{
    flcc_encode, flcc_threshold_exact, master_decode, worker_compute, BuiltinJob, DecodeMode,
    DecodeOptions, Encoding, FailureKind, FlccDims, FlccError, FlccParams, MasterOutcome,
    PolynomialJob, WorkerReturn,
};
use crate::linalg::MatFq;
use crate::prune::bound_ours;

/// SplitMix64 finalizer applied to `master + (index + 1) * φ`, with
/// `φ = 0x9E3779B97F4A7C15`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryKind {
    /// Every returned value replaced by a uniform one.
    UniformRandom,
    /// One slot of every symbol shifted by a random nonzero offset.
    SymbolBurst,
    /// Returns computed honestly on a different, random encoding shared by
    /// all corrupted workers, so they agree with each other.
    Aliasing,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 3] = [
        AdversaryKind::UniformRandom,
        AdversaryKind::SymbolBurst,
        AdversaryKind::Aliasing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::UniformRandom => "uniform_random",
            AdversaryKind::SymbolBurst => "symbol_burst",
            AdversaryKind::Aliasing => "aliasing",
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdversaryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown adversary '{s}' (expected uniform_random, symbol_burst or aliasing)"
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryModel {
    pub kind: AdversaryKind,
    pub count: usize,
}

/// Decode mode without the per-trial seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ModeKind {
    Deterministic,
    Probabilistic { t: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    DetectedFailure,
    /// Wrong output although the adversary count was within the guarantee.
    SilentError,
    /// Wrong output with more adversaries than the guarantee covers.
    OutOfGuarantee,
}

/// One FLCC experiment. `dims.adversaries` is the count the master assumes
/// (it only matters for the consistency check); `adversary.count` workers
/// actually misbehave.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub q: u64,
    pub dims: FlccDims,
    pub job: BuiltinJob,
    pub mode: ModeKind,
    pub adversary: AdversaryModel,
    /// Input matrix shape `(r, h)`.
    pub shape: (usize, usize),
    pub consistency_check: bool,
}

impl SimConfig {
    pub fn params(&self) -> Result<FlccParams, FlccError> {
        let field = PrimeField::new(self.q).map_err(|e| FlccError::InvalidParams(e.to_string()))?;
        let params = FlccParams::new(field, self.dims)?;
        let responsive = self.dims.workers - self.dims.stragglers;
        if self.adversary.count > responsive {
            return Err(FlccError::InvalidParams(format!(
                "{} adversaries but only {responsive} responsive workers",
                self.adversary.count
            )));
        }
        if self.job.degree() > self.dims.degree {
            return Err(FlccError::InvalidParams(format!(
                "job '{}' has degree {} > D2 = {}",
                self.job,
                self.job.degree(),
                self.dims.degree
            )));
        }
        if self.shape.0 == 0 || self.shape.1 == 0 {
            return Err(FlccError::InvalidParams(
                "matrix shape must be nonempty".into(),
            ));
        }
        Ok(params)
    }

    /// Whether the actual adversary count is covered by the radius guarantee.
    pub fn within_guarantee(&self) -> bool {
        flcc_threshold_exact(&self.dims).is_ok_and(|a| self.adversary.count <= a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub outcome: Outcome,
    pub failure: Option<FailureKind>,
    pub l_max: usize,
    pub side_info_evals: usize,
    /// Lower bound on the success probability of this trial given the
    /// observed subspace dimensions; 1 in deterministic mode.
    pub bound: f64,
    pub within_guarantee: bool,
}

fn random_matrix<R: Rng + ?Sized>(f: &PrimeField, (r, h): (usize, usize), rng: &mut R) -> MatFq {
    MatFq::from_fn(r, h, |_, _| f.random(rng))
}

fn random_batch<R: Rng + ?Sized>(
    params: &FlccParams,
    shape: (usize, usize),
    rng: &mut R,
) -> Vec<MatFq> {
    (0..params.dims.fold * params.dims.batch)
        .map(|_| random_matrix(&params.field, shape, rng))
        .collect()
}

fn corrupt(
    kind: AdversaryKind,
    honest: Vec<MatFq>,
    alias: Option<&[MatFq]>,
    field: &PrimeField,
    rng: &mut ChaCha8Rng,
) -> Vec<MatFq> {
    match kind {
        AdversaryKind::UniformRandom => honest
            .iter()
            .map(|x| random_matrix(field, x.shape(), rng))
            .collect(),
        AdversaryKind::SymbolBurst => {
            let mut out = honest;
            let (r, h) = out[0].shape();
            for a in 0..r {
                for b in 0..h {
                    let slot = rng.random_range(0..out.len());
                    let off = field.random_nonzero(rng);
                    out[slot][(a, b)] = field.add(out[slot][(a, b)], off);
                }
            }
            out
        }
        AdversaryKind::Aliasing => alias.expect("aliasing needs a fake encoding").to_vec(),
    }
}

/// Honest, straggling and corrupted returns for one trial.
fn simulate_workers(
    cfg: &SimConfig,
    params: &FlccParams,
    encoding: &Encoding,
    rng: &mut ChaCha8Rng,
) -> Vec<WorkerReturn> {
    let d = &params.dims;
    let f = &params.field;
    let order = sample(rng, d.workers, d.stragglers + cfg.adversary.count).into_vec();
    let (stragglers, bad) = order.split_at(d.stragglers);
    let fake = (cfg.adversary.kind == AdversaryKind::Aliasing && !bad.is_empty()).then(|| {
        let data = random_batch(params, cfg.shape, rng);
        flcc_encode(&data, params, rng.next_u64()).expect("validated parameters")
    });
    (0..d.workers)
        .map(|i| {
            if stragglers.contains(&i) {
                return WorkerReturn {
                    worker: i,
                    results: None,
                };
            }
            let honest = worker_compute(i, &encoding.shares[i], f, &cfg.job);
            if !bad.contains(&i) {
                return honest;
            }
            let alias = fake.as_ref().map(|e| {
                worker_compute(i, &e.shares[i], f, &cfg.job)
                    .results
                    .unwrap()
            });
            let results = corrupt(
                cfg.adversary.kind,
                honest.results.unwrap(),
                alias.as_deref(),
                f,
                rng,
            );
            WorkerReturn {
                worker: i,
                results: Some(results),
            }
        })
        .collect()
}

/// Union bound over entries that share one random point set.
fn probabilistic_bound(q: u64, k: usize, t: u64, dims: &[Option<usize>]) -> f64 {
    let miss: f64 = dims
        .iter()
        .map(|l| match l {
            Some(l) => 1.0 - bound_ours(q, k as u64, *l as u64, t),
            None => 1.0,
        })
        .sum();
    (1.0 - miss).max(0.0)
}

/// Encodes random data, simulates the workers, decodes and compares with a
/// direct evaluation of the job.
pub fn run_trial(
    cfg: &SimConfig,
    params: &FlccParams,
    seed: u64,
) -> Result<TrialReport, FlccError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &params.field;
    let data = random_batch(params, cfg.shape, &mut rng);
    let encoding = flcc_encode(&data, params, rng.next_u64())?;
    let returns = simulate_workers(cfg, params, &encoding, &mut rng);
    let mode = match cfg.mode {
        ModeKind::Deterministic => DecodeMode::Deterministic,
        ModeKind::Probabilistic { t } => DecodeMode::Probabilistic {
            t,
            seed: rng.next_u64(),
        },
    };
    let opts = DecodeOptions {
        consistency_check: cfg.consistency_check,
    };
    let rep = master_decode(&returns, &encoding, params, &cfg.job, mode, opts)?;
    let within = cfg.within_guarantee();
    let (outcome, failure) = match &rep.outcome {
        MasterOutcome::Recovered(out) => {
            let truth: Vec<MatFq> = data.iter().map(|x| cfg.job.apply(f, x)).collect();
            if *out == truth {
                (Outcome::Success, None)
            } else if within {
                (Outcome::SilentError, None)
            } else {
                (Outcome::OutOfGuarantee, None)
            }
        }
        MasterOutcome::DetectedFailure(kind) => (Outcome::DetectedFailure, Some(*kind)),
    };
    let bound = match cfg.mode {
        ModeKind::Deterministic => 1.0,
        ModeKind::Probabilistic { t } => {
            probabilistic_bound(cfg.q, params.decoder_k(), t, &rep.entry_dims)
        }
    };
    Ok(TrialReport {
        seed,
        outcome,
        failure,
        l_max: rep.l_max,
        side_info_evals: rep.side_info_evals,
        bound,
        within_guarantee: within,
    })
}

/// Trials with a given `l_max`: their count, successes and mean bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Tally {
    pub trials: u64,
    pub successes: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub trials: u64,
    pub successes: u64,
    pub detected_failures: u64,
    pub silent_errors: u64,
    pub out_of_guarantee: u64,
    pub empirical_rate: f64,
    /// Mean per-trial lower bound on the success probability.
    pub theoretical_bound: f64,
    pub side_info_mean: f64,
    pub seed: u64,
    pub within_guarantee: bool,
    /// `flcc_threshold_exact` for the configured dimensions.
    pub guarantee: usize,
    pub s_star: usize,
    pub by_l_max: BTreeMap<usize, Tally>,
}

impl CampaignSummary {
    /// `√(p̂(1-p̂)/n)`.
    pub fn std_error(&self) -> f64 {
        let p = self.empirical_rate;
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// `trials` independent runs of [`run_trial`] seeded by [`mix_seed`].
pub fn run_campaign(
    cfg: &SimConfig,
    trials: u64,
    master_seed: u64,
) -> Result<CampaignSummary, FlccError> {
    if trials == 0 {
        return Err(FlccError::InvalidParams("trials must be at least 1".into()));
    }
    let params = cfg.params()?;
    let reports: Vec<TrialReport> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, &params, mix_seed(master_seed, i)))
        .collect::<Result<_, _>>()?;
    let count = |o: Outcome| reports.iter().filter(|r| r.outcome == o).count() as u64;
    let successes = count(Outcome::Success);
    let mut by_l_max: BTreeMap<usize, Tally> = BTreeMap::new();
    for r in &reports {
        let e = by_l_max.entry(r.l_max).or_default();
        e.trials += 1;
        e.successes += u64::from(r.outcome == Outcome::Success);
        e.bound += r.bound;
    }
    for t in by_l_max.values_mut() {
        t.bound /= t.trials as f64;
    }
    let n = trials as f64;
    let (s_star, _) =
        crate::flcc::optimal_s(cfg.dims.fold, &crate::flcc::modified_rate(&cfg.dims)?);
    Ok(CampaignSummary {
        trials,
        successes,
        detected_failures: count(Outcome::DetectedFailure),
        silent_errors: count(Outcome::SilentError),
        out_of_guarantee: count(Outcome::OutOfGuarantee),
        empirical_rate: successes as f64 / n,
        theoretical_bound: reports.iter().map(|r| r.bound).sum::<f64>() / n,
        side_info_mean: reports
            .iter()
            .map(|r| r.side_info_evals as f64)
            .sum::<f64>()
            / n,
        seed: master_seed,
        within_guarantee: cfg.within_guarantee(),
        guarantee: flcc_threshold_exact(&cfg.dims)?,
        s_star,
        by_l_max,
    })
}

/// `x` shifted by a uniform nonzero offset, so never equal to `x`.
pub(crate) fn other_value<R: Rng + ?Sized>(f: &PrimeField, x: Fe, rng: &mut R) -> Fe {
    f.add(x, f.random_nonzero(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk(adversaries: usize, kind: AdversaryKind, mode: ModeKind) -> SimConfig {
        SimConfig {
            q: 257,
            dims: FlccDims {
                workers: 40,
                batch: 2,
                privacy: 1,
                stragglers: 2,
                adversaries,
                fold: 4,
                degree: 2,
            },
            job: BuiltinJob::EntrywiseSquare,
            mode,
            adversary: AdversaryModel {
                kind,
                count: adversaries,
            },
            shape: (2, 2),
            consistency_check: false,
        }
    }

    #[test]
    fn mix_seed_spreads_indices() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| mix_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(mix_seed(0, 0), 0);
        assert_ne!(mix_seed(1, 0), mix_seed(0, 1));
    }

    #[test]
    fn adversary_names_round_trip() {
        for k in AdversaryKind::ALL {
            assert_eq!(k.name().parse::<AdversaryKind>().unwrap(), k);
            assert_eq!(
                serde_json::to_string(&k).unwrap(),
                format!("\"{}\"", k.name())
            );
        }
        assert!("byzantine".parse::<AdversaryKind>().is_err());
    }

    #[test]
    fn no_adversaries_always_succeed() {
        let cfg = desk(0, AdversaryKind::UniformRandom, ModeKind::Deterministic);
        let sum = run_campaign(&cfg, 8, 3).unwrap();
        assert_eq!(sum.successes, 8);
        assert_eq!(sum.empirical_rate, 1.0);
        assert_eq!(sum.side_info_mean, 0.0);
    }

    #[test]
    fn single_trial_campaign_is_run_trial() {
        let cfg = desk(19, AdversaryKind::Aliasing, ModeKind::Deterministic);
        let sum = run_campaign(&cfg, 1, 11).unwrap();
        let one = run_trial(&cfg, &cfg.params().unwrap(), mix_seed(11, 0)).unwrap();
        assert_eq!(sum.successes, u64::from(one.outcome == Outcome::Success));
        assert_eq!(sum.side_info_mean, one.side_info_evals as f64);
    }

    #[test]
    fn campaigns_are_reproducible() {
        let cfg = desk(
            19,
            AdversaryKind::SymbolBurst,
            ModeKind::Probabilistic { t: 1 },
        );
        let a = run_campaign(&cfg, 12, 5).unwrap();
        assert_eq!(a, run_campaign(&cfg, 12, 5).unwrap());
        assert_eq!(a.silent_errors, 0);
        assert_eq!(a.successes + a.detected_failures, 12);
    }

    #[test]
    fn threshold_adversaries_never_win_deterministically() {
        for kind in AdversaryKind::ALL {
            let cfg = desk(19, kind, ModeKind::Deterministic);
            let sum = run_campaign(&cfg, 6, 1).unwrap();
            assert_eq!(sum.successes, 6, "{kind}");
            assert!(sum.within_guarantee);
        }
    }

    #[test]
    fn invalid_setups_are_rejected() {
        let mut cfg = desk(0, AdversaryKind::Aliasing, ModeKind::Deterministic);
        cfg.adversary.count = 39;
        assert!(cfg.params().is_err());
        let mut cfg = desk(0, AdversaryKind::Aliasing, ModeKind::Deterministic);
        cfg.dims.degree = 1;
        assert!(cfg.params().is_err());
        assert!(run_campaign(
            &desk(0, AdversaryKind::Aliasing, ModeKind::Deterministic),
            0,
            0
        )
        .is_err());
    }

    #[test]
    fn probabilistic_bound_is_a_union_bound() {
        assert_eq!(probabilistic_bound(257, 23, 3, &[Some(0), Some(0)]), 1.0);
        let one = bound_ours(257, 23, 1, 3);
        let two = probabilistic_bound(257, 23, 3, &[Some(1), Some(1)]);
        assert!((two - (1.0 - 2.0 * (1.0 - one))).abs() < 1e-12);
        assert_eq!(probabilistic_bound(257, 23, 3, &[None]), 0.0);
    }
}
