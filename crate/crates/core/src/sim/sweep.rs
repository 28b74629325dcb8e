//! Grid sweeps over the closed-form bounds and thresholds, written as CSV.

use crate::flcc::{FlccDims, FlccError, ThresholdSummary};
use crate::prune::{bound_gr2016, bound_ours, bound_saraf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundSweep {
    Ours { q: u64, k: u64, l: u64, t: Vec<u64> },
    Gr2016 { q: u64, k: u64, evals: Vec<u64> },
    Saraf { n: u64, k: u64, l: u64, t: Vec<u64> },
}

/// The swept variable and the bound at that grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub x: u64,
    pub value: f64,
}

pub fn sweep_bounds(sweep: &BoundSweep) -> Vec<BoundRow> {
    let rows = |xs: &[u64], f: &dyn Fn(u64) -> f64| {
        xs.iter().map(|&x| BoundRow { x, value: f(x) }).collect()
    };
    match sweep {
        BoundSweep::Ours { q, k, l, t } => rows(t, &|t| bound_ours(*q, *k, *l, t)),
        BoundSweep::Gr2016 { q, k, evals } => rows(evals, &|e| bound_gr2016(*q, *k, e)),
        BoundSweep::Saraf { n, k, l, t } => rows(t, &|t| bound_saraf(*n, *k, *l, t)),
    }
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV is UTF-8")
}

/// Inputs plus the bound, one row per grid point.
pub fn bounds_csv(sweep: &BoundSweep) -> String {
    let rows = sweep_bounds(sweep);
    let v = |r: &BoundRow| format_sig6(r.value);
    match sweep {
        BoundSweep::Ours { q, k, l, .. } => to_csv(
            &["q", "k", "l", "t", "bound"],
            rows.iter().map(|r| {
                vec![
                    q.to_string(),
                    k.to_string(),
                    l.to_string(),
                    r.x.to_string(),
                    v(r),
                ]
            }),
        ),
        BoundSweep::Gr2016 { q, k, .. } => to_csv(
            &["q", "k", "evals", "bound"],
            rows.iter()
                .map(|r| vec![q.to_string(), k.to_string(), r.x.to_string(), v(r)]),
        ),
        BoundSweep::Saraf { n, k, l, .. } => to_csv(
            &["n", "k", "l", "t", "bound"],
            rows.iter().map(|r| {
                vec![
                    n.to_string(),
                    k.to_string(),
                    l.to_string(),
                    r.x.to_string(),
                    v(r),
                ]
            }),
        ),
    }
}

/// One [`ThresholdSummary`] per folding parameter.
pub fn sweep_thresholds(
    base: &FlccDims,
    folds: &[usize],
) -> Result<Vec<ThresholdSummary>, FlccError> {
    folds
        .iter()
        .map(|&m| ThresholdSummary::compute(&base.with_fold(m)))
        .collect()
}

pub fn thresholds_csv(rows: &[ThresholdSummary]) -> String {
    to_csv(
        &[
            "m",
            "s_star",
            "a_s_star",
            "flcc_paper",
            "flcc_exact",
            "lcc",
            "ratio_paper",
            "normalized_extra",
        ],
        rows.iter().map(|r| {
            vec![
                r.fold.to_string(),
                r.s_star.to_string(),
                format_sig6(r.a_s_star_f64()),
                r.paper.to_string(),
                r.exact.to_string(),
                r.lcc.to_string(),
                format_sig6(r.ratio_paper()),
                format_sig6(r.normalized_extra_f64()),
            ]
        }),
    )
}

/// Six significant digits in the style of C's `%g`: trailing zeros dropped,
/// scientific notation outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

/// Comma-separated items, each `a`, `a:b` (inclusive) or `a:b:step`.
pub fn parse_grid(spec: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<u64> = item
            .split(':')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad grid item '{item}'"))
            })
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [a] => out.push(*a),
            [a, b] | [a, b, _] if a > b => return Err(format!("empty range '{item}'")),
            [_, _, 0] => return Err(format!("zero step in '{item}'")),
            [a, b] => out.extend(*a..=*b),
            [a, b, step] => out.extend((*a..=*b).step_by(*step as usize)),
            _ => return Err(format!("bad grid item '{item}'")),
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(out)
}
