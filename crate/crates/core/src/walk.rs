//! Coined walk on the torus: shift, Grover coin, oracle reflection, the walk
//! `W = S (R_uc (x) I)` and the search iterate `U_W = W Rbar_{uc,m}`.

use num_complex::Complex64;

use crate::error::{Result, SearchError};
use crate::lattice::{make_uniform, ProblemInstance, Space, StateVector, COIN_DIM};

/// Time steps charged per primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepCosts {
    pub walk: u64,
    pub oracle_reflection: u64,
}

impl Default for StepCosts {
    fn default() -> Self {
        Self {
            walk: 1,
            oracle_reflection: 1,
        }
    }
}

/// Time steps credited for preparing the uniform lattice state from a single site.
pub fn preparation_cost(instance: &ProblemInstance) -> u64 {
    2 * instance.side() as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkOps {
    instance: ProblemInstance,
    costs: StepCosts,
}

impl WalkOps {
    pub fn new(instance: ProblemInstance) -> Self {
        Self {
            instance,
            costs: StepCosts::default(),
        }
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn costs(&self) -> StepCosts {
        self.costs
    }

    /// Cost of one application of `U_W`.
    pub fn iteration_cost(&self) -> u64 {
        self.costs.walk + self.costs.oracle_reflection
    }

    /// Moving step `S`. Acts on every coin block (both ancilla halves in the
    /// controlled space).
    pub fn apply_shift(&self, state: &mut StateVector) -> Result<()> {
        let side = self.check_coined(state)?;
        for block in state.amplitudes_mut().chunks_exact_mut(COIN_DIM * side * side) {
            shift_block(block, side);
        }
        Ok(())
    }

    /// Coin flip `R_uc (x) I_N` on every coin block.
    pub fn apply_coin_flip(&self, state: &mut StateVector) -> Result<()> {
        let side = self.check_coined(state)?;
        for block in state.amplitudes_mut().chunks_exact_mut(COIN_DIM * side * side) {
            coin_flip_block(block, side * side);
        }
        Ok(())
    }

    /// `Rbar_{uc,m} = I - 2|u_c,m><u_c,m|` on a joint-space state.
    pub fn apply_oracle_reflection(&self, state: &mut StateVector) -> Result<()> {
        self.check_joint(state)?;
        let n = self.instance.n_sites();
        reflect_marked_block(state.amplitudes_mut(), n, self.instance.marked_site());
        Ok(())
    }

    /// `W = S (R_uc (x) I_N)`: coin flip, then shift.
    pub fn apply_walk(&self, state: &mut StateVector) -> Result<()> {
        self.check_joint(state)?;
        let side = self.instance.side();
        walk_block(state.amplitudes_mut(), side);
        Ok(())
    }

    /// `W^-1 = (R_uc (x) I_N) S`; both factors are involutions.
    pub fn apply_walk_inverse(&self, state: &mut StateVector) -> Result<()> {
        self.check_joint(state)?;
        let side = self.instance.side();
        walk_inverse_block(state.amplitudes_mut(), side);
        Ok(())
    }

    /// `U_W = W Rbar_{uc,m}`.
    pub fn apply_search_iterate(&self, state: &mut StateVector) -> Result<()> {
        self.apply_oracle_reflection(state)?;
        self.apply_walk(state)
    }

    /// `U_W^-1 = Rbar_{uc,m} W^-1`.
    pub fn apply_search_iterate_inverse(&self, state: &mut StateVector) -> Result<()> {
        self.apply_walk_inverse(state)?;
        self.apply_oracle_reflection(state)
    }

    /// The effective target `|u_c>|m>`.
    pub fn target_state(&self) -> StateVector {
        let side = self.instance.side();
        let n = self.instance.n_sites();
        let mut t = StateVector::zeros(Space::Joint, side);
        let m = self.instance.marked_site();
        for d in 0..COIN_DIM {
            t.amplitudes_mut()[d * n + m] = Complex64::new(0.5, 0.0);
        }
        t
    }

    /// `<u_c,m|psi>` for a joint state, read off the marked site only.
    pub fn target_overlap(&self, state: &StateVector) -> Complex64 {
        let n = self.instance.n_sites();
        let m = self.instance.marked_site();
        let a = state.amplitudes();
        (0..COIN_DIM).map(|d| a[d * n + m]).sum::<Complex64>() * 0.5
    }

    fn check_coined(&self, state: &StateVector) -> Result<usize> {
        match state.space() {
            Space::Joint | Space::Controlled if state.side() == self.instance.side() => {
                Ok(state.side())
            }
            Space::Joint | Space::Controlled => Err(SearchError::SideMismatch {
                expected: self.instance.side(),
                got: state.side(),
            }),
            got => Err(SearchError::WrongSpace {
                expected: "joint or controlled",
                got,
            }),
        }
    }

    fn check_joint(&self, state: &StateVector) -> Result<()> {
        if state.space() != Space::Joint || state.side() != self.instance.side() {
            return Err(SearchError::WrongSpace {
                expected: "joint",
                got: state.space(),
            });
        }
        Ok(())
    }
}

// Block-level kernels operate on one 4N coin block laid out as [d][y][x].

pub(crate) fn shift_block(block: &mut [Complex64], side: usize) {
    let n = side * side;
    let (horizontal, vertical) = block.split_at_mut(2 * n);
    let (right, left) = horizontal.split_at_mut(n);
    // |->,x> -> |<-,x+1>  and  |<-,x> -> |->,x-1>
    right.swap_with_slice(left);
    for row in left.chunks_exact_mut(side) {
        row.rotate_right(1);
    }
    for row in right.chunks_exact_mut(side) {
        row.rotate_left(1);
    }
    // |up,y> -> |down,y+1>  and  |down,y> -> |up,y-1>
    let (up, down) = vertical.split_at_mut(n);
    up.swap_with_slice(down);
    down.rotate_right(side);
    up.rotate_left(side);
}

pub(crate) fn coin_flip_block(block: &mut [Complex64], n: usize) {
    let (c0, rest) = block.split_at_mut(n);
    let (c1, rest) = rest.split_at_mut(n);
    let (c2, c3) = rest.split_at_mut(n);
    for i in 0..n {
        let half = (c0[i] + c1[i] + c2[i] + c3[i]) * 0.5;
        c0[i] = half - c0[i];
        c1[i] = half - c1[i];
        c2[i] = half - c2[i];
        c3[i] = half - c3[i];
    }
}

pub(crate) fn reflect_marked_block(block: &mut [Complex64], n: usize, site: usize) {
    let half = (0..COIN_DIM).map(|d| block[d * n + site]).sum::<Complex64>() * 0.5;
    for d in 0..COIN_DIM {
        block[d * n + site] -= half;
    }
}

pub(crate) fn walk_block(block: &mut [Complex64], side: usize) {
    coin_flip_block(block, side * side);
    shift_block(block, side);
}

pub(crate) fn walk_inverse_block(block: &mut [Complex64], side: usize) {
    shift_block(block, side);
    coin_flip_block(block, side * side);
}

/// One logged observation of a running search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub step: usize,
    pub marked_probability: f64,
    /// Overlap with the effective target of the search.
    pub target_overlap: Complex64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbeLog {
    pub stride: usize,
    pub probes: Vec<Probe>,
    /// Time steps consumed by the iterations, preparation credit included.
    pub time_steps: u64,
}

impl ProbeLog {
    pub fn best(&self) -> Option<&Probe> {
        self.probes
            .iter()
            .max_by(|a, b| a.marked_probability.total_cmp(&b.marked_probability))
    }
}

/// Probe stride for a run of `steps` iterations: every step up to side 32,
/// otherwise about 512 probes per run.
pub fn default_probe_stride(side: usize, steps: usize) -> usize {
    if side <= 32 {
        1
    } else {
        steps.div_ceil(512).max(1)
    }
}

/// `U_W^steps |u_c>|u_N>`, probing every `stride` steps (and at the end).
pub fn run_akr_with_stride(
    instance: &ProblemInstance,
    steps: usize,
    stride: usize,
) -> (StateVector, ProbeLog) {
    let ops = WalkOps::new(*instance);
    let stride = stride.max(1);
    let mut state = make_uniform(Space::Joint, instance);
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
        ops.apply_search_iterate(&mut state)
            .expect("uniform joint state matches instance");
        if step % stride == 0 || step == steps {
            log.probes.push(probe(&state, step));
        }
    }
    log.time_steps = ops.iteration_cost() * steps as u64 + preparation_cost(instance);
    (state, log)
}

pub fn run_akr(instance: &ProblemInstance, steps: usize) -> (StateVector, ProbeLog) {
    run_akr_with_stride(instance, steps, default_probe_stride(instance.side(), steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{inner, BasisLabel, Direction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(space: Space, side: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::zeros(space, side);
        for a in s.amplitudes_mut() {
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        s.normalize();
        s
    }

    fn basis(side: usize, d: Direction, x: usize, y: usize) -> StateVector {
        let mut s = StateVector::zeros(Space::Joint, side);
        let i = s.index(BasisLabel {
            ancilla: 0,
            coin: d.index(),
            x,
            y,
        });
        s.amplitudes_mut()[i] = Complex64::new(1.0, 0.0);
        s
    }

    fn ops(side: usize) -> WalkOps {
        WalkOps::new(ProblemInstance::at_origin(side).unwrap())
    }

    #[test]
    fn shift_moves_right_mover() {
        let w = ops(4);
        let mut s = basis(4, Direction::Right, 2, 1);
        w.apply_shift(&mut s).unwrap();
        assert_eq!(s, basis(4, Direction::Left, 3, 1));

        let mut s = basis(4, Direction::Right, 3, 1);
        w.apply_shift(&mut s).unwrap();
        assert_eq!(s, basis(4, Direction::Left, 0, 1));
    }

    #[test]
    fn shift_all_directions_with_wrap() {
        let w = ops(4);
        let cases = [
            ((Direction::Left, 0, 2), (Direction::Right, 3, 2)),
            ((Direction::Up, 1, 3), (Direction::Down, 1, 0)),
            ((Direction::Up, 1, 1), (Direction::Down, 1, 2)),
            ((Direction::Down, 2, 0), (Direction::Up, 2, 3)),
            ((Direction::Down, 2, 2), (Direction::Up, 2, 1)),
        ];
        for ((d, x, y), (d2, x2, y2)) in cases {
            let mut s = basis(4, d, x, y);
            w.apply_shift(&mut s).unwrap();
            assert_eq!(s, basis(4, d2, x2, y2), "{d:?} at ({x},{y})");
        }
    }

    #[test]
    fn shift_is_an_involution() {
        let w = ops(5);
        for i in 0..Space::Joint.dim(25) {
            let e = StateVector::basis(Space::Joint, 5, i);
            let mut s = e.clone();
            w.apply_shift(&mut s).unwrap();
            w.apply_shift(&mut s).unwrap();
            assert_eq!(s, e);
        }
    }

    #[test]
    fn coin_flip_cases() {
        let w = ops(2);
        let mut u = make_uniform(Space::Joint, w.instance());
        let before = u.clone();
        w.apply_coin_flip(&mut u).unwrap();
        assert!(u.max_abs_diff(&before).unwrap() < 1e-15);

        let mut s = basis(2, Direction::Right, 1, 0);
        w.apply_coin_flip(&mut s).unwrap();
        let site = 1;
        let got: Vec<f64> = (0..4).map(|d| s.amplitudes()[d * 4 + site].re).collect();
        assert_eq!(got, vec![-0.5, 0.5, 0.5, 0.5]);

        let r = random_state(Space::Joint, 4, 1);
        let mut s = r.clone();
        let w4 = ops(4);
        w4.apply_coin_flip(&mut s).unwrap();
        w4.apply_coin_flip(&mut s).unwrap();
        assert!(s.max_abs_diff(&r).unwrap() < 1e-15);
    }

    #[test]
    fn oracle_reflection_cases() {
        let w = ops(4);
        let t = w.target_state();
        let mut s = t.clone();
        w.apply_oracle_reflection(&mut s).unwrap();
        let mut neg = t.clone();
        neg.scale(Complex64::new(-1.0, 0.0));
        assert!(s.max_abs_diff(&neg).unwrap() < 1e-15);

        let mut off = basis(4, Direction::Up, 2, 3);
        let before = off.clone();
        w.apply_oracle_reflection(&mut off).unwrap();
        assert_eq!(off, before);

        let r = random_state(Space::Joint, 4, 2);
        let mut s = r.clone();
        w.apply_oracle_reflection(&mut s).unwrap();
        w.apply_oracle_reflection(&mut s).unwrap();
        assert!(s.max_abs_diff(&r).unwrap() < 1e-15);

        let mut c = StateVector::zeros(Space::Controlled, 4);
        assert!(w.apply_oracle_reflection(&mut c).is_err());
    }

    #[test]
    fn walk_fixes_uniform_state() {
        let w = ops(8);
        let mut u = make_uniform(Space::Joint, w.instance());
        let before = u.clone();
        w.apply_walk(&mut u).unwrap();
        assert!(u.max_abs_diff(&before).unwrap() < 1e-15);
    }

    #[test]
    fn walk_preserves_fourier_factor() {
        // coin (x) chi_p (x) chi_q stays in the same momentum sector
        let side = 6;
        let (p, q) = (1usize, 4usize);
        let mut s = StateVector::zeros(Space::Joint, side);
        let coin = [0.3, -0.7, 0.2, 0.5];
        for d in 0..4 {
            for y in 0..side {
                for x in 0..side {
                    let ph = 2.0 * std::f64::consts::PI * (p * x + q * y) as f64 / side as f64;
                    let i = (d * side + y) * side + x;
                    s.amplitudes_mut()[i] = Complex64::from_polar(coin[d], ph);
                }
            }
        }
        let w = ops(side);
        w.apply_walk(&mut s).unwrap();
        // every site holds the same coin vector up to the plane-wave phase
        let reference: Vec<Complex64> = (0..4).map(|d| s.amplitudes()[d * 36]).collect();
        for y in 0..side {
            for x in 0..side {
                let ph = 2.0 * std::f64::consts::PI * (p * x + q * y) as f64 / side as f64;
                for d in 0..4 {
                    let want = reference[d] * Complex64::from_polar(1.0, ph);
                    let got = s.amplitudes()[(d * side + y) * side + x];
                    assert!((want - got).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn operators_preserve_norm_on_random_states() {
        let w = ops(8);
        for seed in 0..5 {
            let mut s = random_state(Space::Joint, 8, seed);
            w.apply_walk(&mut s).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
            w.apply_search_iterate(&mut s).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
            let mut c = random_state(Space::Controlled, 8, seed + 100);
            w.apply_shift(&mut c).unwrap();
            w.apply_coin_flip(&mut c).unwrap();
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_iterate() {
        let w = ops(6);
        let r = random_state(Space::Joint, 6, 9);
        let mut s = r.clone();
        for _ in 0..7 {
            w.apply_search_iterate(&mut s).unwrap();
        }
        for _ in 0..7 {
            w.apply_search_iterate_inverse(&mut s).unwrap();
        }
        assert!(s.max_abs_diff(&r).unwrap() < 1e-13);
    }

    #[test]
    fn iterate_is_minus_walk_times_reflection() {
        // U_W = -(W R_uc,m) with R = 2|t><t| - I
        let w = ops(4);
        let r = random_state(Space::Joint, 4, 3);
        let mut a = r.clone();
        w.apply_search_iterate(&mut a).unwrap();

        let t = w.target_state();
        let mut b = r.clone();
        let ov = inner(&t, &r).unwrap();
        b.scale(Complex64::new(-1.0, 0.0));
        b.axpy(ov * 2.0, &t).unwrap();
        w.apply_walk(&mut b).unwrap();
        b.scale(Complex64::new(-1.0, 0.0));
        assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
    }

    #[test]
    fn run_akr_initial_overlap() {
        let p = ProblemInstance::at_origin(8).unwrap();
        let (_, log) = run_akr(&p, 0);
        assert_eq!(log.probes.len(), 1);
        assert!((log.probes[0].target_overlap.norm() - 1.0 / 8.0).abs() < 1e-15);
        assert_eq!(log.time_steps, 16);
        let (_, log) = run_akr(&p, 10);
        assert_eq!(log.probes.len(), 11);
        assert_eq!(log.time_steps, 20 + 16);
    }

    #[test]
    fn probe_stride_rule() {
        assert_eq!(default_probe_stride(32, 5000), 1);
        assert_eq!(default_probe_stride(64, 512), 1);
        assert_eq!(default_probe_stride(64, 513), 2);
        let p = ProblemInstance::at_origin(64).unwrap();
        let (_, log) = run_akr_with_stride(&p, 10, 4);
        let steps: Vec<usize> = log.probes.iter().map(|p| p.step).collect();
        assert_eq!(steps, vec![0, 4, 8, 10]);
    }

    #[test]
    fn marked_site_is_immaterial_on_the_torus() {
        let a = ProblemInstance::new(8, (0, 0)).unwrap();
        let b = ProblemInstance::new(8, (5, 2)).unwrap();
        let (_, la) = run_akr(&a, 40);
        let (_, lb) = run_akr(&b, 40);
        for (x, y) in la.probes.iter().zip(&lb.probes) {
            assert!((x.marked_probability - y.marked_probability).abs() < 1e-12);
            assert!((x.target_overlap - y.target_overlap).norm() < 1e-12);
        }
    }
}
