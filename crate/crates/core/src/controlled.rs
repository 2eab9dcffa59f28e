//! Ancilla-controlled walk search.
//!
//! One iteration is
//! `U_C = Zbar_b . c1W . (X_delta^dag)_b . c1Rbar_{uc,m} . (X_delta)_b`,
//! applied right to left. The conjugated reflection acts as a reflection
//! about `|delta_1>|u_c>|m>`, and `C = Zbar_b . c1W` has the whole ancilla-0
//! sector as its -1 eigenspace.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Result, SearchError};
use crate::lattice::{make_uniform, ProblemInstance, Space, StateVector, COIN_DIM};
use crate::walk::{
    default_probe_stride, preparation_cost, reflect_marked_block, walk_block, Probe, ProbeLog,
    WalkOps,
};

/// Default constant in `cos(delta) = c_delta / sqrt(ln N)`.
pub const DEFAULT_C_DELTA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlConfig {
    delta: f64,
    cos_delta: f64,
    sin_delta: f64,
    c_delta: Option<f64>,
}

impl ControlConfig {
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&delta) {
            return Err(SearchError::InvalidDelta(delta));
        }
        Ok(Self {
            delta,
            cos_delta: delta.cos(),
            sin_delta: delta.sin(),
            c_delta: None,
        })
    }

    /// Builds the angle from a cosine in `(0, 1]`; keeps the cosine exact.
    pub fn from_cos(cos_delta: f64) -> Result<Self> {
        if !(cos_delta > 0.0 && cos_delta <= 1.0) {
            return Err(SearchError::InvalidDelta(cos_delta.acos()));
        }
        let sin_delta = (1.0 - cos_delta * cos_delta).sqrt();
        Ok(Self {
            delta: sin_delta.atan2(cos_delta),
            cos_delta,
            sin_delta,
            c_delta: None,
        })
    }

    /// `cos(delta) = c_delta / sqrt(ln_n)`.
    pub fn from_ln_n(ln_n: f64, c_delta: f64) -> Result<Self> {
        let cos_delta = c_delta / ln_n.sqrt();
        if !(cos_delta > 0.0 && cos_delta <= 1.0) {
            return Err(SearchError::CDeltaTooLarge {
                c_delta,
                ln_n,
                cos_delta,
            });
        }
        let mut cfg = Self::from_cos(cos_delta)?;
        cfg.c_delta = Some(c_delta);
        Ok(cfg)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn cos_delta(&self) -> f64 {
        self.cos_delta
    }

    pub fn sin_delta(&self) -> f64 {
        self.sin_delta
    }

    /// The tuning constant this angle was derived from, if any.
    pub fn c_delta(&self) -> Option<f64> {
        self.c_delta
    }
}

/// Control angle with `cos(delta) = c_delta / sqrt(ln N)` (natural log).
pub fn tuned_delta(instance: &ProblemInstance, c_delta: f64) -> Result<ControlConfig> {
    ControlConfig::from_ln_n(instance.ln_n(), c_delta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledOps {
    walk: WalkOps,
    config: ControlConfig,
}

impl ControlledOps {
    pub fn new(instance: ProblemInstance, config: ControlConfig) -> Self {
        Self {
            walk: WalkOps::new(instance),
            config,
        }
    }

    pub fn instance(&self) -> &ProblemInstance {
        self.walk.instance()
    }

    pub fn config(&self) -> &ControlConfig {
        &self.config
    }

    pub fn walk_ops(&self) -> &WalkOps {
        &self.walk
    }

    /// One `U_C` costs a controlled reflection plus a controlled walk.
    pub fn iteration_cost(&self) -> u64 {
        self.walk.iteration_cost()
    }

    /// `X_delta = [[cos, sin], [-sin, cos]]` on the ancilla; its transpose
    /// when `dagger`.
    pub fn apply_x_delta(&self, state: &mut StateVector, dagger: bool) -> Result<()> {
        let (zero, one) = self.halves(state)?;
        let (c, s) = (self.config.cos_delta, self.config.sin_delta);
        let s = if dagger { -s } else { s };
        for (a0, a1) in zero.iter_mut().zip(one.iter_mut()) {
            let (b0, b1) = (*a0, *a1);
            *a0 = b0 * c + b1 * s;
            *a1 = b1 * c - b0 * s;
        }
        Ok(())
    }

    /// `Zbar = diag(-1, 1)` on the ancilla.
    pub fn apply_z_bar(&self, state: &mut StateVector) -> Result<()> {
        let (zero, _) = self.halves(state)?;
        zero.iter_mut().for_each(|a| *a = -*a);
        Ok(())
    }

    /// `c1Rbar_{uc,m} = I - 2|1,u_c,m><1,u_c,m|`.
    pub fn apply_controlled_reflection(&self, state: &mut StateVector) -> Result<()> {
        let n = self.instance().n_sites();
        let m = self.instance().marked_site();
        let (_, one) = self.halves(state)?;
        reflect_marked_block(one, n, m);
        Ok(())
    }

    /// `c1W`: the walk on the ancilla-1 sector.
    pub fn apply_controlled_walk(&self, state: &mut StateVector) -> Result<()> {
        let side = self.instance().side();
        let (_, one) = self.halves(state)?;
        walk_block(one, side);
        Ok(())
    }

    /// `C = Zbar_b . c1W`.
    pub fn apply_c(&self, state: &mut StateVector) -> Result<()> {
        self.apply_controlled_walk(state)?;
        self.apply_z_bar(state)
    }

    /// One search iteration `U_C`.
    pub fn apply_u_c(&self, state: &mut StateVector) -> Result<()> {
        self.apply_x_delta(state, false)?;
        self.apply_controlled_reflection(state)?;
        self.apply_x_delta(state, true)?;
        self.apply_controlled_walk(state)?;
        self.apply_z_bar(state)
    }

    /// The effective target `|delta_1>|u_c>|m>`, with
    /// `|delta_1> = -sin(delta)|0> + cos(delta)|1>`.
    pub fn target_state(&self) -> StateVector {
        let side = self.instance().side();
        let n = self.instance().n_sites();
        let m = self.instance().marked_site();
        let mut t = StateVector::zeros(Space::Controlled, side);
        let amps = t.amplitudes_mut();
        for d in 0..COIN_DIM {
            amps[d * n + m] = Complex64::new(-0.5 * self.config.sin_delta, 0.0);
            amps[(COIN_DIM + d) * n + m] = Complex64::new(0.5 * self.config.cos_delta, 0.0);
        }
        t
    }

    /// `<delta_1,u_c,m|psi>`, read off the marked site.
    pub fn target_overlap(&self, state: &StateVector) -> Complex64 {
        let n = self.instance().n_sites();
        let m = self.instance().marked_site();
        let a = state.amplitudes();
        let zero: Complex64 = (0..COIN_DIM).map(|d| a[d * n + m]).sum();
        let one: Complex64 = (0..COIN_DIM).map(|d| a[(COIN_DIM + d) * n + m]).sum();
        (one * self.config.cos_delta - zero * self.config.sin_delta) * 0.5
    }

    fn halves<'a>(
        &self,
        state: &'a mut StateVector,
    ) -> Result<(&'a mut [Complex64], &'a mut [Complex64])> {
        if state.space() != Space::Controlled {
            return Err(SearchError::WrongSpace {
                expected: "controlled",
                got: state.space(),
            });
        }
        if state.side() != self.instance().side() {
            return Err(SearchError::SideMismatch {
                expected: self.instance().side(),
                got: state.side(),
            });
        }
        let half = state.len() / 2;
        Ok(state.amplitudes_mut().split_at_mut(half))
    }
}

/// `U_C^steps |1>|u_c>|u_N>`, probing every `stride` steps (and at the end).
pub fn run_controlled_with_stride(
    instance: &ProblemInstance,
    config: &ControlConfig,
    steps: usize,
    stride: usize,
) -> (StateVector, ProbeLog) {
    let ops = ControlledOps::new(*instance, *config);
    let stride = stride.max(1);
    let mut state = make_uniform(Space::Controlled, instance);
    let m = instance.marked_site();
    let probe = |state: &StateVector, step: usize| Probe {
        step,
        marked_probability: state.site_probability(m),
        target_overlap: ops.target_overlap(state),
    };
    let mut log = ProbeLog {
        stride,
        probes: vec![probe(&state, 0)],
        time_steps: 0,
    };
    for step in 1..=steps {
        ops.apply_u_c(&mut state)
            .expect("uniform controlled state matches instance");
        if step % stride == 0 || step == steps {
            log.probes.push(probe(&state, step));
        }
    }
    log.time_steps = ops.iteration_cost() * steps as u64 + preparation_cost(instance);
    (state, log)
}

pub fn run_controlled(
    instance: &ProblemInstance,
    config: &ControlConfig,
    steps: usize,
) -> (StateVector, ProbeLog) {
    run_controlled_with_stride(
        instance,
        config,
        steps,
        default_probe_stride(instance.side(), steps),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{inner, BasisLabel};
    use crate::walk::run_akr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(side: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::zeros(Space::Controlled, side);
        for a in s.amplitudes_mut() {
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        s.normalize();
        s
    }

    fn ops(side: usize, delta: f64) -> ControlledOps {
        ControlledOps::new(
            ProblemInstance::at_origin(side).unwrap(),
            ControlConfig::new(delta).unwrap(),
        )
    }

    #[test]
    fn config_validation() {
        assert!(ControlConfig::new(-0.1).is_err());
        assert!(ControlConfig::new(FRAC_PI_2).is_err());
        let c = ControlConfig::new(0.7).unwrap();
        assert!((c.cos_delta().powi(2) + c.sin_delta().powi(2) - 1.0).abs() < 1e-15);
        assert!(ControlConfig::from_cos(0.0).is_err());
    }

    #[test]
    fn tuned_delta_cases() {
        let p = ProblemInstance::at_origin(4).unwrap();
        let c = tuned_delta(&p, p.ln_n().sqrt()).unwrap();
        assert_eq!(c.delta(), 0.0);

        let c = ControlConfig::from_ln_n(4.0, 1.0).unwrap();
        assert_eq!(c.cos_delta(), 0.5);
        assert!((c.delta() - std::f64::consts::FRAC_PI_3).abs() < 1e-15);

        let p8 = ProblemInstance::at_origin(8).unwrap();
        let c = tuned_delta(&p8, 1.0).unwrap();
        assert!((c.cos_delta() - 1.0 / (64f64).ln().sqrt()).abs() < 1e-15);
        assert_eq!(c.c_delta(), Some(1.0));

        assert!(matches!(
            tuned_delta(&p, 2.0),
            Err(SearchError::CDeltaTooLarge { .. })
        ));
    }

    #[test]
    fn x_delta_cases() {
        let id = ops(4, 0.0);
        let r = random_state(4, 1);
        let mut s = r.clone();
        id.apply_x_delta(&mut s, false).unwrap();
        assert_eq!(s, r);

        let o = ops(4, 0.4);
        let mut s = r.clone();
        o.apply_x_delta(&mut s, false).unwrap();
        o.apply_x_delta(&mut s, true).unwrap();
        assert!(s.max_abs_diff(&r).unwrap() < 1e-15);

        // X^dag |1> = |delta_1> = -sin|0> + cos|1>
        let mut e = StateVector::zeros(Space::Controlled, 4);
        let one = e.index(BasisLabel { ancilla: 1, coin: 2, x: 1, y: 3 });
        let zero = e.index(BasisLabel { ancilla: 0, coin: 2, x: 1, y: 3 });
        e.amplitudes_mut()[one] = Complex64::new(1.0, 0.0);
        o.apply_x_delta(&mut e, true).unwrap();
        assert!((e.amplitudes()[zero].re + 0.4f64.sin()).abs() < 1e-15);
        assert!((e.amplitudes()[one].re - 0.4f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn z_bar_cases() {
        let o = ops(4, 0.3);
        let r = random_state(4, 2);
        let mut s = r.clone();
        o.apply_z_bar(&mut s).unwrap();
        let half = r.len() / 2;
        for i in 0..r.len() {
            let want = if i < half { -r.amplitudes()[i] } else { r.amplitudes()[i] };
            assert_eq!(s.amplitudes()[i], want);
        }
        o.apply_z_bar(&mut s).unwrap();
        assert_eq!(s, r);
    }

    #[test]
    fn controlled_reflection_cases() {
        let o = ops(4, 0.3);
        let t = o.walk_ops().target_state();
        let mut s1 = StateVector::with_ancilla(&t, 1).unwrap();
        o.apply_controlled_reflection(&mut s1).unwrap();
        let mut want = StateVector::with_ancilla(&t, 1).unwrap();
        want.scale(Complex64::new(-1.0, 0.0));
        assert!(s1.max_abs_diff(&want).unwrap() < 1e-15);

        let s0 = StateVector::with_ancilla(&t, 0).unwrap();
        let mut s = s0.clone();
        o.apply_controlled_reflection(&mut s).unwrap();
        assert_eq!(s, s0);

        let mut off = StateVector::zeros(Space::Controlled, 4);
        let i = off.index(BasisLabel { ancilla: 1, coin: 0, x: 2, y: 2 });
        off.amplitudes_mut()[i] = Complex64::new(1.0, 0.0);
        let before = off.clone();
        o.apply_controlled_reflection(&mut off).unwrap();
        assert_eq!(off, before);
    }

    #[test]
    fn zero_delta_reduces_to_akr_iterate() {
        let o = ops(6, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut j = StateVector::zeros(Space::Joint, 6);
        for a in j.amplitudes_mut() {
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        j.normalize();
        let mut c = StateVector::with_ancilla(&j, 1).unwrap();
        o.apply_u_c(&mut c).unwrap();
        o.walk_ops().apply_search_iterate(&mut j).unwrap();
        assert!(c.ancilla_component(1).unwrap().max_abs_diff(&j).unwrap() < 1e-15);
        assert_eq!(c.ancilla_component(0).unwrap().norm(), 0.0);
    }

    #[test]
    fn ancilla_zero_sector_is_minus_one_eigenspace_of_c() {
        let o = ops(4, 0.8);
        let r = random_state(4, 7);
        let mut s = r.ancilla_component(0).unwrap();
        s.normalize();
        let s = StateVector::with_ancilla(&s, 0).unwrap();
        let mut cs = s.clone();
        o.apply_c(&mut cs).unwrap();
        let mut neg = s.clone();
        neg.scale(Complex64::new(-1.0, 0.0));
        assert_eq!(cs, neg);
    }

    #[test]
    fn u_c_equals_c_times_delta_one_reflection() {
        // U_C = C (I - 2|t_delta><t_delta|) on random states
        let o = ops(4, 0.9);
        let t = o.target_state();
        assert!((t.norm() - 1.0).abs() < 1e-15);
        for seed in 0..4 {
            let r = random_state(4, 20 + seed);
            let mut a = r.clone();
            o.apply_u_c(&mut a).unwrap();
            let mut b = r.clone();
            let ov = inner(&t, &r).unwrap();
            b.axpy(-ov * 2.0, &t).unwrap();
            o.apply_c(&mut b).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
        }
    }

    #[test]
    fn target_overlap_matches_inner_product() {
        let o = ops(4, 0.6);
        let r = random_state(4, 11);
        let direct = inner(&o.target_state(), &r).unwrap();
        assert!((direct - o.target_overlap(&r)).norm() < 1e-15);
    }

    #[test]
    fn run_controlled_initial_overlap_and_cost() {
        let p = ProblemInstance::at_origin(8).unwrap();
        let cfg = ControlConfig::new(0.5).unwrap();
        let (s, log) = run_controlled(&p, &cfg, 0);
        assert!((log.probes[0].target_overlap.norm() - 0.5f64.cos() / 8.0).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-14);
        let (_, log) = run_controlled(&p, &cfg, 12);
        assert_eq!(log.time_steps, 24 + 16);
    }

    #[test]
    fn zero_delta_run_matches_akr_run() {
        let p = ProblemInstance::at_origin(4).unwrap();
        let cfg = ControlConfig::new(0.0).unwrap();
        let (_, lc) = run_controlled(&p, &cfg, 30);
        let (_, la) = run_akr(&p, 30);
        for (c, a) in lc.probes.iter().zip(&la.probes) {
            assert!((c.marked_probability - a.marked_probability).abs() < 1e-12);
        }
    }
}
