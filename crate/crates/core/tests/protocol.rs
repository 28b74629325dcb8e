//! Protocol-level properties of the encoder, decoder and thresholds.

use flcc::flcc::{
    a_of_s, flcc_encode_with_masks, flcc_threshold_exact, flcc_threshold_paper, lcc_threshold,
    modified_rate, optimal_s, probe_degree, BuiltinJob, FlccDims, PolynomialJob,
};
use flcc::sim::{run_campaign, AdversaryKind, AdversaryModel, ModeKind, SimConfig};
use flcc::{FlccParams, MatFq, PrimeField};
use num_rational::BigRational;
use proptest::prelude::*;

fn scalar(v: u64, f: &PrimeField) -> MatFq {
    MatFq::new(1, 1, vec![f.elem(v)])
}

/// With one mask every worker's share is a bijective function of the mask,
/// so over all masks it takes each field value exactly once.
#[test]
fn single_share_is_uniform() {
    let f = PrimeField::new(17).unwrap();
    let dims = FlccDims {
        workers: 4,
        batch: 1,
        privacy: 1,
        stragglers: 0,
        adversaries: 0,
        fold: 1,
        degree: 1,
    };
    let params = FlccParams::new(f, dims).unwrap();
    for x in 0..17 {
        let mut counts = vec![vec![0u32; 17]; dims.workers];
        for z in 0..17 {
            let enc = flcc_encode_with_masks(&[scalar(x, &f)], &[scalar(z, &f)], &params).unwrap();
            for (i, c) in counts.iter_mut().enumerate() {
                c[enc.shares[i][0][(0, 0)].value() as usize] += 1;
            }
        }
        assert!(
            counts.iter().all(|c| c.iter().all(|&n| n == 1)),
            "input {x}: {counts:?}"
        );
    }
}

#[test]
fn marginal_cost_of_an_adversary_tends_to_one() {
    let base = FlccDims {
        workers: 1000,
        batch: 180,
        privacy: 11,
        stragglers: 20,
        adversaries: 0,
        fold: 10_000,
        degree: 2,
    };
    let vals: Vec<usize> = (1000..=1100)
        .map(|n| flcc_threshold_paper(&base.with_workers(n)).unwrap())
        .collect();
    let diffs: Vec<usize> = vals.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(diffs.iter().all(|&d| d <= 1));
    let mean = diffs.iter().sum::<usize>() as f64 / diffs.len() as f64;
    assert!(mean >= 0.9, "{mean}");
    // LCC pays two workers per adversary.
    let lcc: Vec<usize> = (1000..=1100)
        .map(|n| lcc_threshold(&base.with_workers(n)).unwrap())
        .collect();
    assert_eq!(lcc[100] - lcc[0], 50);
}

#[test]
fn builtin_jobs_have_their_declared_degree() {
    let f = PrimeField::new(101).unwrap();
    for job in BuiltinJob::ALL {
        assert_eq!(probe_degree(&job, &f, (3, 2), 5, 4, 11), Some(job.degree()));
    }
}

#[test]
fn each_job_and_adversary_within_threshold() {
    let dims = FlccDims {
        workers: 40,
        batch: 2,
        privacy: 1,
        stragglers: 2,
        adversaries: 0,
        fold: 4,
        degree: 2,
    };
    let a = flcc_threshold_exact(&dims).unwrap();
    for job in BuiltinJob::ALL {
        for kind in AdversaryKind::ALL {
            let cfg = SimConfig {
                q: 257,
                dims: FlccDims {
                    adversaries: a,
                    ..dims
                },
                job,
                mode: ModeKind::Deterministic,
                adversary: AdversaryModel { kind, count: a },
                shape: (2, 2),
                consistency_check: true,
            };
            let s = run_campaign(&cfg, 10, 21).unwrap();
            assert_eq!(s.successes, 10, "{} {kind}", job.name());
        }
    }
}

fn rational(num: u32, den: u32) -> BigRational {
    BigRational::new(num.into(), den.into())
}

proptest! {
    #[test]
    fn a_is_concave(m in 3usize..120, num in 1u32..1000) {
        let r = rational(num, 1000);
        for s in 2..m {
            let second = a_of_s(m, &r, s + 1) - a_of_s(m, &r, s) * BigRational::from_integer(2.into()) + a_of_s(m, &r, s - 1);
            prop_assert!(second <= BigRational::from_integer(0.into()));
        }
    }

    #[test]
    fn closed_form_is_argmax(m in 1usize..=200, num in 1u32..1000) {
        let r = rational(num, 1000);
        let (s, a) = optimal_s(m, &r);
        let best = (1..=m).map(|s| a_of_s(m, &r, s)).max().unwrap();
        prop_assert_eq!(a, best.clone());
        prop_assert!((1..s).all(|t| a_of_s(m, &r, t) < best));
    }

    #[test]
    fn single_fold_is_lcc(n in 50usize..3000, k in 1usize..20, t in 0usize..5, s in 0usize..30, d in 1usize..4) {
        let dims = FlccDims { workers: n, batch: k, privacy: t, stragglers: s, adversaries: 0, fold: 1, degree: d };
        prop_assume!(lcc_threshold(&dims).is_ok());
        let lcc = lcc_threshold(&dims).unwrap();
        prop_assert_eq!(flcc_threshold_paper(&dims).unwrap(), lcc);
        prop_assert_eq!(flcc_threshold_exact(&dims).unwrap(), lcc);
        prop_assert!(modified_rate(&dims).is_ok());
    }
}
