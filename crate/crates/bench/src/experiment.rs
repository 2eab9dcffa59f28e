//! Runs the walks over a step window around the predicted peak and turns the
//! probe logs into records.

use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use torus_search::amplify::{amplify, optimal_rounds, Amplified, TargetProjector, WalkPreparation};
use torus_search::controlled::run_controlled_with_stride;
use torus_search::dense::{dense_oracle, DenseOperator};
use torus_search::spectral::SecularSolution;
use torus_search::walk::{default_probe_stride, preparation_cost, run_akr_with_stride, Probe, ProbeLog, StepCosts};
use torus_search::{build_blocks, expand_target, solve_alpha, tuned_delta, ControlConfig, ProblemInstance, SearchMode, WalkOps};

use crate::config::{Algo, ExperimentSpec, Window};
use crate::record::{ExperimentRecord, RowKind};

/// Eigenphases below this count as zero when reading the dense spectrum.
const DENSE_PHASE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkKind {
    Akr,
    /// Controlled walk with `cos(delta) = c_delta / sqrt(ln N)`.
    Controlled { c_delta: f64 },
}

/// Location of the best probe within the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub probe: Probe,
    /// Parabolic refinement over the best probe and its two neighbours.
    pub refined_step: f64,
    pub at_boundary: bool,
}

/// One simulated walk: prediction, probe log and peak.
#[derive(Debug, Clone)]
pub struct WalkRun {
    pub instance: ProblemInstance,
    pub kind: WalkKind,
    pub config: Option<ControlConfig>,
    pub solution: SecularSolution,
    pub alpha_dense: Option<f64>,
    pub log: ProbeLog,
    /// First and last step of the window.
    pub window: (usize, usize),
    pub peak: Peak,
    pub wall_clock: f64,
}

impl WalkRun {
    pub fn delta(&self) -> f64 {
        self.config.map_or(0.0, |c| c.delta())
    }

    fn window_probes(&self) -> &[Probe] {
        let (lo, hi) = self.window;
        let start = self.log.probes.partition_point(|p| p.step < lo);
        let end = self.log.probes.partition_point(|p| p.step <= hi);
        &self.log.probes[start..end]
    }

    /// Time steps charged after `steps` iterations, preparation included.
    pub fn cost_at(&self, steps: usize) -> u64 {
        let c = StepCosts::default();
        (c.walk + c.oracle_reflection) * steps as u64 + preparation_cost(&self.instance)
    }

    /// Largest `|<t|psi>|^2` over every probe of the run.
    pub fn best_target_overlap_sqr(&self) -> f64 {
        self.log
            .probes
            .iter()
            .map(|p| p.target_overlap.norm_sqr())
            .fold(0.0, f64::max)
    }

    fn record(&self, probe: &Probe, row: RowKind) -> ExperimentRecord {
        ExperimentRecord {
            side: self.instance.side(),
            n: self.instance.n_sites(),
            algo: match self.kind {
                WalkKind::Akr => Algo::Akr,
                WalkKind::Controlled { .. } => Algo::Controlled,
            },
            delta: self.delta(),
            steps: probe.step,
            time_steps_charged: self.cost_at(probe.step),
            marked_probability: probe.marked_probability,
            overlap_target: probe.target_overlap.norm(),
            alpha_predicted: self.solution.alpha,
            alpha_dense: self.alpha_dense,
            t_predicted: self.solution.predicted_t,
            t_peak_empirical: self.peak.refined_step,
            wall_clock: self.wall_clock,
            c_delta: match self.kind {
                WalkKind::Akr => None,
                WalkKind::Controlled { c_delta } => Some(c_delta),
            },
            row,
            peak_at_boundary: self.peak.at_boundary,
        }
    }

    /// Window rows on an evenly spaced grid of `points` steps (nearest probe,
    /// duplicates dropped) followed by the peak row.
    pub fn records(&self, points: usize) -> Vec<ExperimentRecord> {
        let probes = self.window_probes();
        let (lo, hi) = self.window;
        let mut picked: Vec<usize> = Vec::with_capacity(points);
        for j in 0..points {
            let target = lo as f64 + j as f64 * (hi - lo) as f64 / (points - 1).max(1) as f64;
            let k = nearest(probes, target);
            if picked.last() != Some(&k) {
                picked.push(k);
            }
        }
        let mut out: Vec<ExperimentRecord> = picked
            .iter()
            .map(|&k| self.record(&probes[k], RowKind::Window))
            .collect();
        out.push(self.record(&self.peak.probe, RowKind::Peak));
        out
    }
}

fn nearest(probes: &[Probe], step: f64) -> usize {
    let i = probes.partition_point(|p| (p.step as f64) < step);
    if i == 0 {
        0
    } else if i == probes.len() {
        probes.len() - 1
    } else if step - probes[i - 1].step as f64 <= probes[i].step as f64 - step {
        i - 1
    } else {
        i
    }
}

/// Vertex of the parabola through three points, clamped to `[x0, x2]`.
pub fn parabolic_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> f64 {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 || !num.is_finite() {
        return x1;
    }
    (x1 - 0.5 * num / den).clamp(x0, x2)
}

fn find_peak(probes: &[Probe]) -> Peak {
    let (k, best) = probes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.marked_probability.total_cmp(&b.1.marked_probability))
        .expect("window holds at least one probe");
    let at_boundary = k == 0 || k + 1 == probes.len();
    let refined_step = if at_boundary {
        best.step as f64
    } else {
        let pt = |p: &Probe| (p.step as f64, p.marked_probability);
        parabolic_vertex(pt(&probes[k - 1]), pt(best), pt(&probes[k + 1]))
    };
    Peak {
        probe: *best,
        refined_step,
        at_boundary,
    }
}

/// Solves for the predicted peak, runs the walk through `window` and locates
/// the empirical peak.
pub fn simulate(
    instance: ProblemInstance,
    kind: WalkKind,
    window: &Window,
    stride: Option<usize>,
    dense_max_side: usize,
) -> anyhow::Result<WalkRun> {
    let start = Instant::now();
    let config = match kind {
        WalkKind::Akr => None,
        WalkKind::Controlled { c_delta } => Some(tuned_delta(&instance, c_delta)?),
    };
    let mode = config.map_or(SearchMode::Akr, SearchMode::Controlled);
    let blocks = build_blocks(&instance);
    let solution = solve_alpha(&expand_target(&blocks, mode))
        .with_context(|| format!("solving for alpha at side {}", instance.side()))?;
    let alpha_dense = if instance.side() <= dense_max_side {
        let which = config.map_or(DenseOperator::Akr, DenseOperator::Controlled);
        Some(dense_oracle(&instance, which)?.principal_phase(DENSE_PHASE_FLOOR)?)
    } else {
        None
    };

    let t = solution.predicted_t as f64;
    let lo = (window.lo * t).floor() as usize;
    let hi = ((window.hi * t).ceil() as usize).max(lo + 2);
    let stride = stride.unwrap_or_else(|| default_probe_stride(instance.side(), hi));
    let (_, log) = match config {
        None => run_akr_with_stride(&instance, hi, stride),
        Some(cfg) => run_controlled_with_stride(&instance, &cfg, hi, stride),
    };
    let mut run = WalkRun {
        instance,
        kind,
        config,
        solution,
        alpha_dense,
        log,
        window: (lo, hi),
        peak: Peak {
            probe: Probe {
                step: 0,
                marked_probability: 0.0,
                target_overlap: Default::default(),
            },
            refined_step: 0.0,
            at_boundary: true,
        },
        wall_clock: 0.0,
    };
    let probes = run.window_probes();
    if probes.is_empty() {
        anyhow::bail!("stride {stride} leaves no probe in window {lo}..={hi}");
    }
    run.peak = find_peak(probes);
    run.wall_clock = start.elapsed().as_secs_f64();
    Ok(run)
}

/// Amplitude amplification on the walk state at the run's peak step.
#[derive(Debug, Clone)]
pub struct QaaRun {
    pub rounds: usize,
    pub outcome: Amplified,
    /// `|<u_c,m|psi>|` after amplification.
    pub overlap_target: f64,
    pub wall_clock: f64,
}

pub fn amplify_run(run: &WalkRun) -> anyhow::Result<QaaRun> {
    if run.kind != WalkKind::Akr {
        anyhow::bail!("amplitude amplification is defined on the uncontrolled walk");
    }
    let start = Instant::now();
    let a = run.peak.probe.marked_probability.sqrt();
    let rounds = optimal_rounds(a)?;
    let prep = WalkPreparation::new(run.instance, run.peak.probe.step);
    let target = TargetProjector::MarkedSite(run.instance.marked_site());
    let outcome = amplify(&prep, &target, rounds);
    let overlap_target = WalkOps::new(run.instance).target_overlap(&outcome.state).norm();
    Ok(QaaRun {
        rounds,
        outcome,
        overlap_target,
        wall_clock: start.elapsed().as_secs_f64(),
    })
}

fn qaa_record(run: &WalkRun, qaa: &QaaRun) -> ExperimentRecord {
    let mut rec = run.record(&run.peak.probe, RowKind::Peak);
    rec.algo = Algo::AkrQaa;
    rec.time_steps_charged = qaa.outcome.total_cost;
    rec.marked_probability = qaa.outcome.success_probability;
    rec.overlap_target = qaa.overlap_target;
    rec.wall_clock = run.wall_clock + qaa.wall_clock;
    rec
}

fn run_task(spec: &ExperimentSpec, side: usize, kind: WalkKind) -> anyhow::Result<Vec<ExperimentRecord>> {
    let instance = ProblemInstance::new(side, spec.marked_site(side))?;
    let run = simulate(instance, kind, &spec.window, spec.stride, spec.dense_max_side)?;
    let mut out = Vec::new();
    let wants = |a: Algo| spec.algos.contains(&a);
    match kind {
        WalkKind::Akr => {
            if wants(Algo::Akr) {
                out.extend(run.records(spec.window.points));
            }
            if wants(Algo::AkrQaa) {
                out.push(qaa_record(&run, &amplify_run(&run)?));
            }
        }
        WalkKind::Controlled { .. } => out.extend(run.records(spec.window.points)),
    }
    Ok(out)
}

/// Every (side, algo, c_delta) point of `spec`, run concurrently and merged
/// in `(side, algo, delta, steps)` order.
pub fn run_experiment(spec: &ExperimentSpec) -> anyhow::Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let mut tasks: Vec<(usize, WalkKind)> = Vec::new();
    for &side in &spec.sides {
        if spec.algos.contains(&Algo::Akr) || spec.algos.contains(&Algo::AkrQaa) {
            tasks.push((side, WalkKind::Akr));
        }
        if spec.algos.contains(&Algo::Controlled) {
            for &c_delta in &spec.c_delta {
                tasks.push((side, WalkKind::Controlled { c_delta }));
            }
        }
    }
    let work = || {
        tasks
            .par_iter()
            .map(|&(side, kind)| run_task(spec, side, kind))
            .collect::<anyhow::Result<Vec<_>>>()
    };
    let batches = match spec.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building worker pool")?
            .install(work)?,
        None => work()?,
    };
    let mut records: Vec<ExperimentRecord> = batches.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        a.sort_key()
            .cmp(&b.sort_key())
            .then(a.c_delta.unwrap_or(0.0).total_cmp(&b.c_delta.unwrap_or(0.0)))
    });
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_vertex() {
        // y = -(x - 2.5)^2
        let f = |x: f64| -(x - 2.5) * (x - 2.5);
        let v = parabolic_vertex((1.0, f(1.0)), (2.0, f(2.0)), (4.0, f(4.0)));
        assert!((v - 2.5).abs() < 1e-12);
        assert_eq!(parabolic_vertex((0.0, 1.0), (1.0, 1.0), (2.0, 1.0)), 1.0);
    }

    #[test]
    fn nearest_probe() {
        let probes: Vec<Probe> = [2, 4, 6]
            .iter()
            .map(|&step| Probe {
                step,
                marked_probability: 0.0,
                target_overlap: Default::default(),
            })
            .collect();
        assert_eq!(nearest(&probes, 0.0), 0);
        assert_eq!(nearest(&probes, 4.9), 1);
        assert_eq!(nearest(&probes, 5.1), 2);
        assert_eq!(nearest(&probes, 99.0), 2);
    }

    #[test]
    fn small_controlled_run() {
        let inst = ProblemInstance::at_origin(8).unwrap();
        let run = simulate(inst, WalkKind::Controlled { c_delta: 1.0 }, &Window::default(), None, 8).unwrap();
        let dense = run.alpha_dense.unwrap();
        assert!((dense - run.solution.alpha).abs() < 1e-8);
        assert!(run.peak.probe.marked_probability > 1.0 / 64.0);
        let recs = run.records(25);
        assert_eq!(recs.last().unwrap().row, RowKind::Peak);
        for r in &recs {
            assert!((0.0..=1.0 + 1e-12).contains(&r.marked_probability));
            assert_eq!(r.time_steps_charged, 2 * r.steps as u64 + 16);
        }
    }
}
