//! Scaling summary over the peak rows of a sweep.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use crate::config::Algo;
use crate::record::{ExperimentRecord, RowKind, CSV_SCHEMA_VERSION};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// Fewest distinct sides a series needs to be fitted.
pub const MIN_SIDES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composite {
    /// `sqrt(N ln N)`.
    SqrtNLogN,
    /// `sqrt(N) ln N`.
    SqrtNTimesLogN,
    /// `N`; the fitted slope is the bare exponent.
    N,
}

impl Composite {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            Composite::SqrtNLogN => (n * n.ln()).sqrt(),
            Composite::SqrtNTimesLogN => n.sqrt() * n.ln(),
            Composite::N => n,
        }
    }
}

/// `ln cost = intercept + slope ln composite`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub composite: Composite,
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

pub fn log_log_fit(ns: &[f64], costs: &[f64], composite: Composite) -> LogFit {
    let xs: Vec<f64> = ns.iter().map(|&n| composite.eval(n).ln()).collect();
    let ys: Vec<f64> = costs.iter().map(|c| c.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms_residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    LogFit {
        composite,
        slope,
        intercept,
        rms_residual,
    }
}

/// `max / min`.
pub fn band_ratio(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub side: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub steps: usize,
    pub cost: u64,
    /// `cost / composite(N)`.
    pub normalized_cost: f64,
    pub marked_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSeries {
    pub algo: Algo,
    pub c_delta: Option<f64>,
    pub composite: Composite,
    pub points: Vec<SeriesPoint>,
    pub cost_band: f64,
    pub min_probability: f64,
    pub probability_band: f64,
    pub fits: Vec<LogFit>,
}

impl CostSeries {
    fn new(algo: Algo, c_delta: Option<f64>, composite: Composite, peaks: &[&ExperimentRecord]) -> Self {
        let points: Vec<SeriesPoint> = peaks
            .iter()
            .map(|r| SeriesPoint {
                side: r.side,
                n: r.n,
                steps: r.steps,
                cost: r.time_steps_charged,
                normalized_cost: r.time_steps_charged as f64 / composite.eval(r.n as f64),
                marked_probability: r.marked_probability,
            })
            .collect();
        let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
        let costs: Vec<f64> = points.iter().map(|p| p.cost as f64).collect();
        let normalized: Vec<f64> = points.iter().map(|p| p.normalized_cost).collect();
        let probs: Vec<f64> = points.iter().map(|p| p.marked_probability).collect();
        Self {
            algo,
            c_delta,
            composite,
            cost_band: band_ratio(&normalized),
            min_probability: probs.iter().copied().fold(f64::MAX, f64::min),
            probability_band: band_ratio(&probs),
            fits: [Composite::SqrtNLogN, Composite::SqrtNTimesLogN, Composite::N]
                .iter()
                .map(|&c| log_log_fit(&ns, &costs, c))
                .collect(),
            points,
        }
    }
}

/// Peak `|<u_c,m|psi>|^2 ln N` of the plain walk, per side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapSeries {
    pub sides: Vec<usize>,
    pub overlap_sqr_ln_n: Vec<f64>,
    pub band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRatio {
    pub side: usize,
    /// `cost(akr+qaa) / cost(controlled)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub schema_version: u32,
    pub csv_schema_version: u32,
    /// The controlled series with the largest minimum success probability.
    pub controlled: Option<CostSeries>,
    /// One series per `c_delta` covering every side.
    pub controlled_candidates: Vec<CostSeries>,
    pub akr_qaa: Option<CostSeries>,
    pub akr_overlap: Option<OverlapSeries>,
    pub cost_ratio: Vec<CostRatio>,
    /// Ratio at the largest side exceeds the ratio at the smallest.
    pub ratio_grows: Option<bool>,
}

fn distinct_sides<'a>(rows: impl Iterator<Item = &'a ExperimentRecord>) -> usize {
    let mut sides: Vec<usize> = rows.map(|r| r.side).collect();
    sides.sort_unstable();
    sides.dedup();
    sides.len()
}

fn peaks(records: &[ExperimentRecord], algo: Algo) -> Vec<&ExperimentRecord> {
    records
        .iter()
        .filter(|r| r.algo == algo && r.row == RowKind::Peak)
        .collect()
}

pub fn scaling_report(records: &[ExperimentRecord]) -> anyhow::Result<ScalingSummary> {
    let mut summary = ScalingSummary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        csv_schema_version: CSV_SCHEMA_VERSION,
        controlled: None,
        controlled_candidates: Vec::new(),
        akr_qaa: None,
        akr_overlap: None,
        cost_ratio: Vec::new(),
        ratio_grows: None,
    };

    let controlled = peaks(records, Algo::Controlled);
    if !controlled.is_empty() {
        let all_sides = distinct_sides(controlled.iter().copied());
        if all_sides < MIN_SIDES {
            bail!("controlled rows cover {all_sides} sides, need at least {MIN_SIDES}");
        }
        let mut by_c: BTreeMap<u64, Vec<&ExperimentRecord>> = BTreeMap::new();
        for r in controlled {
            by_c.entry(r.c_delta.unwrap_or(f64::NAN).to_bits()).or_default().push(r);
        }
        for (bits, mut rows) in by_c {
            rows.sort_by_key(|r| r.side);
            if rows.len() == all_sides {
                summary.controlled_candidates.push(CostSeries::new(
                    Algo::Controlled,
                    Some(f64::from_bits(bits)),
                    Composite::SqrtNLogN,
                    &rows,
                ));
            }
        }
        summary.controlled = summary
            .controlled_candidates
            .iter()
            .max_by(|a, b| a.min_probability.total_cmp(&b.min_probability))
            .cloned();
    }

    let mut qaa = peaks(records, Algo::AkrQaa);
    if !qaa.is_empty() {
        qaa.sort_by_key(|r| r.side);
        if distinct_sides(qaa.iter().copied()) < MIN_SIDES {
            bail!("akr+qaa rows cover fewer than {MIN_SIDES} sides");
        }
        summary.akr_qaa = Some(CostSeries::new(Algo::AkrQaa, None, Composite::SqrtNTimesLogN, &qaa));
    }

    let mut best: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.algo == Algo::Akr) {
        let e = best.entry(r.side).or_insert((r.n, 0.0));
        e.1 = e.1.max(r.overlap_target * r.overlap_target);
    }
    if !best.is_empty() {
        if best.len() < MIN_SIDES {
            bail!("akr rows cover fewer than {MIN_SIDES} sides");
        }
        let values: Vec<f64> = best.values().map(|&(n, o)| o * (n as f64).ln()).collect();
        summary.akr_overlap = Some(OverlapSeries {
            sides: best.keys().copied().collect(),
            band: band_ratio(&values),
            overlap_sqr_ln_n: values,
        });
    }

    if let (Some(c), Some(q)) = (&summary.controlled, &summary.akr_qaa) {
        for qp in &q.points {
            if let Some(cp) = c.points.iter().find(|p| p.side == qp.side) {
                summary.cost_ratio.push(CostRatio {
                    side: qp.side,
                    ratio: qp.cost as f64 / cp.cost as f64,
                });
            }
        }
        if summary.cost_ratio.len() >= 2 {
            let first = summary.cost_ratio.first().unwrap().ratio;
            let last = summary.cost_ratio.last().unwrap().ratio;
            summary.ratio_grows = Some(last > first);
        }
    }

    if summary.controlled.is_none() && summary.akr_qaa.is_none() && summary.akr_overlap.is_none() {
        bail!("no peak rows to summarize");
    }
    Ok(summary)
}

pub fn write_summary(path: &Path, summary: &ScalingSummary) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let text = serde_json::to_string_pretty(summary)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}
