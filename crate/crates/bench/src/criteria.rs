//! Pass/fail checks shared by the `verify` subcommand and the acceptance suite.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_search::dense::{dense_matrix, dense_oracle, eigen_residual, DenseOperator};
use torus_search::spectral::{akr_sums, assemble_eigenvector, f_lambda};
use torus_search::walk::run_akr_with_stride;
use torus_search::{
    build_blocks, expand_target, make_uniform, run_controlled, solve_alpha, tuned_delta, ControlConfig,
    ControlledOps, ProblemInstance, SearchMode, Space,
};

use crate::config::ExperimentSpec;
use crate::experiment::run_experiment;
use crate::record::write_csv;
use crate::report::{band_ratio, ScalingSummary};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    fn error(name: &'static str, err: anyhow::Error) -> Self {
        Self::new(name, false, format!("error: {err:#}"))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn guard(name: &'static str, check: impl FnOnce() -> anyhow::Result<Outcome>) -> Outcome {
    check().unwrap_or_else(|e| Outcome::error(name, e))
}

/// Norm drift over `steps` controlled iterations at `side`, and bitwise
/// equality of two independent runs (state and CSV, wall clock excluded).
pub fn unitarity_and_determinism(side: usize, steps: usize) -> Outcome {
    const NAME: &str = "unitarity & determinism";
    guard(NAME, || {
        let inst = ProblemInstance::at_origin(side)?;
        let cfg = tuned_delta(&inst, 1.0)?;
        let ops = ControlledOps::new(inst, cfg);
        let evolve = || -> anyhow::Result<(Vec<Complex64>, f64)> {
            let mut s = make_uniform(Space::Controlled, &inst);
            let mut drift = 0.0f64;
            for _ in 0..steps {
                ops.apply_u_c(&mut s)?;
                drift = drift.max((s.norm() - 1.0).abs());
            }
            Ok((s.into_amplitudes(), drift))
        };
        let (a, drift) = evolve()?;
        let (b, _) = evolve()?;
        let same_state = a
            .iter()
            .zip(&b)
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits());

        let spec = ExperimentSpec {
            sides: vec![8, 16],
            ..Default::default()
        };
        let csv = || -> anyhow::Result<Vec<u8>> {
            let rows: Vec<_> = run_experiment(&spec)?.iter().map(|r| r.without_timing()).collect();
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            Ok(buf)
        };
        let same_csv = csv()? == csv()?;
        Ok(Outcome::new(
            NAME,
            drift < 1e-10 && same_state && same_csv,
            format!(
                "side {side}, {steps} steps: max norm drift {drift:.2e} (< 1e-10), identical state {same_state}, identical CSV {same_csv}"
            ),
        ))
    })
}

/// Secular root against the dense spectrum, and the assembled eigenvector
/// against the dense operator, for both walks.
pub fn oracle_equivalence(sides: &[usize]) -> Outcome {
    const NAME: &str = "oracle equivalence";
    guard(NAME, || {
        let mut worst_alpha = 0.0f64;
        let mut worst_vec = 0.0f64;
        for &side in sides {
            let inst = ProblemInstance::at_origin(side)?;
            let blocks = build_blocks(&inst);
            let modes = [
                SearchMode::Akr,
                SearchMode::Controlled(ControlConfig::from_cos(0.5)?),
                SearchMode::Controlled(tuned_delta(&inst, 1.0)?),
            ];
            for mode in modes {
                let which = match mode {
                    SearchMode::Akr => DenseOperator::Akr,
                    SearchMode::Controlled(cfg) => DenseOperator::Controlled(cfg),
                };
                let sol = solve_alpha(&expand_target(&blocks, mode))?;
                let m = dense_matrix(&inst, which)?;
                let eig = dense_oracle(&inst, which)?;
                worst_alpha = worst_alpha.max((eig.principal_phase(1e-9)? - sol.alpha).abs());
                for lambda in [sol.alpha, -sol.alpha] {
                    let mut v = assemble_eigenvector(&blocks, &inst, mode, lambda)?;
                    v.normalize();
                    worst_vec = worst_vec.max(eigen_residual(&m, &v, Complex64::from_polar(1.0, lambda)));
                }
            }
        }
        Ok(Outcome::new(
            NAME,
            worst_alpha < 1e-8 && worst_vec < 1e-8,
            format!("sides {sides:?}: max |alpha - dense| {worst_alpha:.2e}, max eigen residual {worst_vec:.2e} (< 1e-8)"),
        ))
    })
}

pub fn akr_final_overlap(summary: &ScalingSummary) -> Outcome {
    const NAME: &str = "walk final overlap";
    match &summary.akr_overlap {
        None => Outcome::new(NAME, false, "no walk rows in the sweep".into()),
        Some(o) => Outcome::new(
            NAME,
            o.band <= 2.5,
            format!(
                "peak |<u_c,m|psi>|^2 ln N over sides {:?} = {:?}, band {:.3} (<= 2.5)",
                o.sides,
                rounded(&o.overlap_sqr_ln_n),
                o.band
            ),
        ),
    }
}

pub fn controlled_constant_success(summary: &ScalingSummary) -> Outcome {
    const NAME: &str = "controlled constant success";
    match &summary.controlled {
        None => Outcome::new(NAME, false, "no complete controlled series".into()),
        Some(c) => {
            let probs: Vec<f64> = c.points.iter().map(|p| p.marked_probability).collect();
            Outcome::new(
                NAME,
                c.min_probability >= 0.1 && c.probability_band <= 2.5,
                format!(
                    "best c_delta {:?}: peak probabilities {:?}, min {:.3} (>= 0.1), band {:.3} (<= 2.5)",
                    c.c_delta.unwrap_or(f64::NAN),
                    rounded(&probs),
                    c.min_probability,
                    c.probability_band
                ),
            )
        }
    }
}

pub fn scaling_separation(summary: &ScalingSummary) -> Outcome {
    const NAME: &str = "scaling separation";
    let (Some(c), Some(q)) = (&summary.controlled, &summary.akr_qaa) else {
        return Outcome::new(NAME, false, "need both controlled and akr+qaa series".into());
    };
    let ratios: Vec<f64> = summary.cost_ratio.iter().map(|r| r.ratio).collect();
    let grows = summary.ratio_grows.unwrap_or(false);
    // cost = (2r + 1) P + r with P = 2 steps + 2 side
    let rounds: Vec<u64> = q
        .points
        .iter()
        .map(|p| {
            let prep = 2 * (p.steps + p.side) as u64;
            (p.cost - prep) / (2 * prep + 1)
        })
        .collect();
    Outcome::new(
        NAME,
        c.cost_band <= 2.0 && q.cost_band <= 2.0 && grows,
        format!(
            "controlled cost/sqrt(N ln N) band {:.3} (<= 2), akr+qaa cost/(sqrt(N) ln N) band {:.3} (<= 2), \
             akr+qaa/controlled cost ratios {:?} (side {} -> {}) grow {grows}, amplification rounds {rounds:?}",
            c.cost_band,
            q.cost_band,
            rounded(&ratios),
            summary.cost_ratio.first().map_or(0, |r| r.side),
            summary.cost_ratio.last().map_or(0, |r| r.side),
        ),
    )
}

pub fn spectral_sums(sides: &[usize]) -> Outcome {
    const NAME: &str = "spectral sums";
    guard(NAME, || {
        let (mut s1, mut s2, mut s3) = (Vec::new(), Vec::new(), Vec::new());
        for &side in sides {
            let inst = ProblemInstance::at_origin(side)?;
            let e = expand_target(&build_blocks(&inst), SearchMode::Akr);
            let sol = solve_alpha(&e)?;
            let sums = akr_sums(&e, sol.alpha);
            let ln_n = inst.ln_n();
            s1.push(sums.s1 / ln_n);
            s2.push(sums.s2 * ln_n * ln_n);
            s3.push(sums.s3 / ln_n);
        }
        let (b1, b2, b3) = (band_ratio(&s1), band_ratio(&s2), band_ratio(&s3));
        Ok(Outcome::new(
            NAME,
            b1 <= 2.5 && b3 <= 2.5 && b2 <= 2.5,
            format!(
                "sides {sides:?}: s1/ln N band {b1:.3}, s3/ln N band {b3:.3} (<= 2.5), s2 ln^2 N = {:?} band {b2:.3} (<= 2.5)",
                rounded(&s2)
            ),
        ))
    })
}

pub fn coefficient_identities(sides: &[usize]) -> Outcome {
    const NAME: &str = "coefficient identities";
    guard(NAME, || {
        let mut walk_err = 0.0f64;
        let mut ctl_err = 0.0f64;
        for &side in sides {
            let inst = ProblemInstance::new(side, (side / 3, side - 1))?;
            let n = inst.n_sites() as f64;
            let blocks = build_blocks(&inst);
            let e = expand_target(&blocks, SearchMode::Akr);
            walk_err = walk_err.max((e.a0 - 1.0 / n.sqrt()).abs());
            for p in &e.pairs {
                walk_err = walk_err.max((p.amplitude - 1.0 / (2.0 * n).sqrt()).abs());
            }
            for delta in [0.0, 0.3, 0.9, 1.4] {
                let c = expand_target(&blocks, SearchMode::Controlled(ControlConfig::new(delta)?));
                ctl_err = ctl_err.max((c.a0 - e.a0 * delta.cos()).abs());
                for (pc, pa) in c.pairs.iter().zip(&e.pairs) {
                    ctl_err = ctl_err.max((pc.amplitude - pa.amplitude * delta.cos()).abs());
                }
                // the walk's own -1 weight (even sides only) adds in quadrature
                let ancilla = (c.a_k.powi(2) - (delta.cos() * e.a_k).powi(2)).max(0.0).sqrt();
                ctl_err = ctl_err.max((ancilla - delta.sin().abs()).abs());
                if side % 2 == 1 {
                    ctl_err = ctl_err.max((c.a_k - delta.sin().abs()).abs());
                }
            }
        }
        Ok(Outcome::new(
            NAME,
            walk_err < 1e-9 && ctl_err < 1e-12,
            format!("sides {sides:?}: walk coefficient error {walk_err:.2e} (< 1e-9), controlled scaling error {ctl_err:.2e} (< 1e-12)"),
        ))
    })
}

pub fn zero_delta_reduction(side: usize, steps: usize) -> Outcome {
    const NAME: &str = "zero-delta reduction";
    guard(NAME, || {
        let inst = ProblemInstance::new(side, (side / 2, 1))?;
        let (_, akr) = run_akr_with_stride(&inst, steps, 1);
        let (_, ctl) = run_controlled(&inst, &ControlConfig::new(0.0)?, steps);
        let mut worst = 0.0f64;
        let same_len = akr.probes.len() == ctl.probes.len();
        for (a, c) in akr.probes.iter().zip(&ctl.probes) {
            worst = worst
                .max((a.marked_probability - c.marked_probability).abs())
                .max((a.target_overlap - c.target_overlap).norm());
        }
        Ok(Outcome::new(
            NAME,
            same_len && worst < 1e-12,
            format!("side {side}, {steps} steps: max probe difference {worst:.2e} (< 1e-12)"),
        ))
    })
}

pub fn f_identities(points: usize, seed: u64) -> Outcome {
    const NAME: &str = "F identities";
    guard(NAME, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = Complex64::new(0.0, 1.0);
        let mut worst = 0.0f64;
        let mut done = 0;
        while done < points {
            let theta: f64 = rng.gen_range(-3.0..3.0);
            let lambda: f64 = rng.gen_range(-3.0..3.0);
            if (lambda - theta).abs() < 1e-2 || (lambda + theta).abs() < 1e-2 || lambda.abs() < 1e-2 {
                continue;
            }
            done += 1;
            let f = f_lambda(theta, lambda)?;
            let lhs = Complex64::from_polar(1.0, theta) * (-1.0 + i * f);
            let rhs = Complex64::from_polar(1.0, lambda) * (1.0 + i * f);
            let rel = |err: f64, scale: f64| err / (1.0 + scale.abs());
            worst = worst.max(rel((lhs - rhs).norm(), f));
            let pair = f + f_lambda(-theta, lambda)?;
            let want = 2.0 * lambda.sin() / (theta.cos() - lambda.cos());
            worst = worst.max(rel((pair - want).abs(), want));
            let zero = f_lambda(0.0, lambda)?;
            worst = worst.max(rel((zero - 1.0 / (0.5 * lambda).tan()).abs(), zero));
            let pi = f_lambda(PI, lambda)?;
            worst = worst.max(rel((pi + (0.5 * lambda).tan()).abs(), pi));
        }
        Ok(Outcome::new(
            NAME,
            worst < 1e-12,
            format!("{points} random points: max relative error {worst:.2e} (< 1e-12)"),
        ))
    })
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}

/// The sweep behind the scaling criteria: every algorithm over
/// `{16, 32, 64, 128}` with `c_delta` in `{0.5, 1, 2}`.
pub fn acceptance_spec() -> ExperimentSpec {
    ExperimentSpec::default()
}

/// The invariant checks; `summary` adds the sweep-based ones.
pub fn invariant_suite() -> Vec<Outcome> {
    vec![
        unitarity_and_determinism(32, 10_000),
        oracle_equivalence(&[4, 8]),
        spectral_sums(&[8, 16, 32, 64, 128]),
        coefficient_identities(&[4, 5, 8, 16, 32]),
        zero_delta_reduction(8, 100),
        f_identities(100, 0x5eed),
    ]
}

pub fn sweep_suite(summary: &ScalingSummary) -> Vec<Outcome> {
    vec![
        akr_final_overlap(summary),
        controlled_constant_success(summary),
        scaling_separation(summary),
    ]
}
