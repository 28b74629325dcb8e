//! Encode, corrupt, list-decode and prune on the bare FRS code.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::field::PrimeField;
use crate::frs::{decoding_radius, frs_encode, list_decode, FrsCodeword, FrsError, FrsParams};
use crate::poly::Poly;
use crate::prune::{
    bound_ours, prune, select_points_deterministic, select_points_random, PruneError, PruneOutcome,
};
use crate::sim::{mix_seed, other_value, AdversaryKind, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneMode {
    Deterministic,
    Random { t: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripConfig {
    pub params: FrsParams,
    pub s: usize,
    /// Corrupted symbols per trial, chosen among the non-erased ones.
    pub errors: usize,
    pub erasures: usize,
    pub adversary: AdversaryKind,
    pub prune: PruneMode,
}

impl RoundtripConfig {
    pub fn validate(&self) -> Result<(), FrsError> {
        let m = self.params.m;
        if self.s == 0 || self.s > m {
            return Err(FrsError::InvalidOrder { s: self.s, m });
        }
        if self.errors + self.erasures > self.params.blocks() {
            return Err(FrsError::InvalidParams(format!(
                "{} errors + {} erasures exceed {} symbols",
                self.errors,
                self.erasures,
                self.params.blocks()
            )));
        }
        if let PruneMode::Random { t } = self.prune {
            if t > self.params.field.modulus() - 1 {
                return Err(FrsError::InvalidParams(format!("t = {t} exceeds q - 1")));
            }
        }
        Ok(())
    }

    pub fn radius(&self) -> usize {
        decoding_radius(&self.params, self.s, self.erasures).symbols
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripTrial {
    pub seed: u64,
    /// The true polynomial lies in the decoded subspace.
    pub contained: bool,
    pub dimension: Option<usize>,
    pub outcome: Outcome,
    pub side_info_evals: usize,
    /// 1 for deterministic pruning, `bound_ours` for random points.
    pub bound: f64,
}

fn random_poly<R: Rng + ?Sized>(f: &PrimeField, k: usize, rng: &mut R) -> Poly {
    Poly::new((0..k).map(|_| f.random(rng)).collect())
}

fn corrupt_symbol(
    kind: AdversaryKind,
    sym: &mut [crate::field::Fe],
    alias: &[crate::field::Fe],
    f: &PrimeField,
    rng: &mut ChaCha8Rng,
) {
    match kind {
        AdversaryKind::UniformRandom => {
            let orig = sym.to_vec();
            sym.iter_mut().for_each(|v| *v = f.random(rng));
            if sym == orig.as_slice() {
                sym[0] = other_value(f, sym[0], rng);
            }
        }
        AdversaryKind::SymbolBurst => {
            let slot = rng.random_range(0..sym.len());
            sym[slot] = other_value(f, sym[slot], rng);
        }
        AdversaryKind::Aliasing => {
            if sym == alias {
                sym[0] = other_value(f, sym[0], rng);
            } else {
                sym.copy_from_slice(alias);
            }
        }
    }
}

/// One trial; erased and corrupted symbol sets are disjoint and uniform.
pub fn roundtrip_trial(cfg: &RoundtripConfig, seed: u64) -> Result<RoundtripTrial, FrsError> {
    let p = &cfg.params;
    let f = &p.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = random_poly(f, p.k, &mut rng);
    let mut word = frs_encode(&truth, p)?;
    let alias = frs_encode(&random_poly(f, p.k, &mut rng), p)?;
    let picked = sample(&mut rng, p.blocks(), cfg.erasures + cfg.errors).into_vec();
    let (erased, bad) = picked.split_at(cfg.erasures);
    for &j in bad {
        corrupt_symbol(
            cfg.adversary,
            &mut word.symbols[j],
            &alias.symbols[j],
            f,
            &mut rng,
        );
    }
    for &j in erased {
        // Contents of erased symbols must not matter.
        word.symbols[j]
            .iter_mut()
            .for_each(|v| *v = f.random(&mut rng));
        word.erase(j);
    }
    let within = cfg.errors <= cfg.radius();
    let prune_seed = rng.next_u64();
    decode_and_prune(cfg, &word, &truth, within, prune_seed).map(|mut t| {
        t.seed = seed;
        t
    })
}

fn decode_and_prune(
    cfg: &RoundtripConfig,
    word: &FrsCodeword,
    truth: &Poly,
    within: bool,
    prune_seed: u64,
) -> Result<RoundtripTrial, FrsError> {
    let p = &cfg.params;
    let f = &p.field;
    let failed = |dimension, side_info_evals| RoundtripTrial {
        seed: 0,
        contained: false,
        dimension,
        outcome: Outcome::DetectedFailure,
        side_info_evals,
        bound: 0.0,
    };
    let d = match list_decode(word, cfg.s, p) {
        Ok(d) => d,
        Err(
            FrsError::NoCandidates
            | FrsError::DegenerateInterpolation
            | FrsError::DegreeParameterNegative,
        ) => return Ok(failed(None, 0)),
        Err(e) => return Err(e),
    };
    let contained = d.contains(f, truth);
    let l = d.dimension();
    let (req, bound) = match cfg.prune {
        PruneMode::Deterministic => (select_points_deterministic(f, &d), 1.0),
        PruneMode::Random { t } => (
            select_points_random(t, prune_seed, f),
            bound_ours(f.modulus(), p.k as u64, l as u64, t),
        ),
    };
    let req = req.map_err(|e| FrsError::InvalidParams(e.to_string()))?;
    let values: Vec<_> = req.points.iter().map(|&x| truth.eval(f, x)).collect();
    let outcome = match prune(f, &d, &req, &values) {
        Ok(PruneOutcome::Unique(g)) if g.same_as(truth) => Outcome::Success,
        Ok(PruneOutcome::Unique(_)) if within => Outcome::SilentError,
        Ok(PruneOutcome::Unique(_)) => Outcome::OutOfGuarantee,
        Ok(PruneOutcome::DetectedFailure) | Err(PruneError::InconsistentSideInfo) => {
            Outcome::DetectedFailure
        }
        Err(e) => return Err(FrsError::InvalidParams(e.to_string())),
    };
    Ok(RoundtripTrial {
        seed: 0,
        contained,
        dimension: Some(l),
        outcome,
        side_info_evals: req.points.len(),
        bound,
    })
}

/// Trials, successes and the pruning bound for one subspace dimension.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DimStats {
    pub trials: u64,
    pub successes: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripStats {
    pub trials: u64,
    pub contained: u64,
    pub successes: u64,
    pub detected_failures: u64,
    pub silent_errors: u64,
    pub out_of_guarantee: u64,
    pub containment_rate: f64,
    pub recovery_rate: f64,
    pub radius: usize,
    pub within_guarantee: bool,
    pub side_info_mean: f64,
    pub max_dimension: usize,
    pub seed: u64,
    pub by_dimension: BTreeMap<usize, DimStats>,
}

pub fn run_roundtrip(
    cfg: &RoundtripConfig,
    trials: u64,
    master_seed: u64,
) -> Result<RoundtripStats, FrsError> {
    cfg.validate()?;
    if trials == 0 {
        return Err(FrsError::InvalidParams("trials must be at least 1".into()));
    }
    let runs: Vec<RoundtripTrial> = (0..trials)
        .into_par_iter()
        .map(|i| roundtrip_trial(cfg, mix_seed(master_seed, i)))
        .collect::<Result<_, _>>()?;
    let count = |o: Outcome| runs.iter().filter(|r| r.outcome == o).count() as u64;
    let mut by_dimension: BTreeMap<usize, DimStats> = BTreeMap::new();
    for r in &runs {
        if let Some(l) = r.dimension {
            let e = by_dimension.entry(l).or_default();
            e.trials += 1;
            e.successes += u64::from(r.outcome == Outcome::Success);
            e.bound = r.bound;
        }
    }
    let n = trials as f64;
    let contained = runs.iter().filter(|r| r.contained).count() as u64;
    let successes = count(Outcome::Success);
    Ok(RoundtripStats {
        trials,
        contained,
        successes,
        detected_failures: count(Outcome::DetectedFailure),
        silent_errors: count(Outcome::SilentError),
        out_of_guarantee: count(Outcome::OutOfGuarantee),
        containment_rate: contained as f64 / n,
        recovery_rate: successes as f64 / n,
        radius: cfg.radius(),
        within_guarantee: cfg.errors <= cfg.radius(),
        side_info_mean: runs.iter().map(|r| r.side_info_evals as f64).sum::<f64>() / n,
        max_dimension: runs.iter().filter_map(|r| r.dimension).max().unwrap_or(0),
        seed: master_seed,
        by_dimension,
    })
}
