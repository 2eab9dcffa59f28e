//! Amplitude amplification over an opaque state preparation.
//!
//! One round is `-(S_psi S_target)` where `S_target` flips the sign of the
//! target subspace and `S_psi = run . (I - 2|s><s|) . run^-1` reflects about
//! the prepared state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SearchError};
use crate::lattice::{inner, make_uniform, ProblemInstance, Space, StateVector};
use crate::walk::{preparation_cost, WalkOps};

/// A unitary preparation `|s> -> run|s>` with an exact inverse.
pub trait Preparation {
    /// The state the preparation starts from.
    fn initial(&self) -> StateVector;
    fn run(&self, state: &mut StateVector);
    fn inverse_run(&self, state: &mut StateVector);
    /// Time steps charged per invocation of `run` or `inverse_run`.
    fn cost_steps(&self) -> u64;

    fn prepared(&self) -> StateVector {
        let mut s = self.initial();
        self.run(&mut s);
        s
    }
}

/// `steps` iterations of `U_W` from `|u_c>|u_N>`.
#[derive(Debug, Clone, Copy)]
pub struct WalkPreparation {
    ops: WalkOps,
    steps: usize,
}

impl WalkPreparation {
    pub fn new(instance: ProblemInstance, steps: usize) -> Self {
        Self {
            ops: WalkOps::new(instance),
            steps,
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

impl Preparation for WalkPreparation {
    fn initial(&self) -> StateVector {
        make_uniform(Space::Joint, self.ops.instance())
    }

    fn run(&self, state: &mut StateVector) {
        for _ in 0..self.steps {
            self.ops
                .apply_search_iterate(state)
                .expect("joint state of matching side");
        }
    }

    fn inverse_run(&self, state: &mut StateVector) {
        for _ in 0..self.steps {
            self.ops
                .apply_search_iterate_inverse(state)
                .expect("joint state of matching side");
        }
    }

    fn cost_steps(&self) -> u64 {
        self.ops.iteration_cost() * self.steps as u64 + preparation_cost(self.ops.instance())
    }
}

/// The subspace amplification drives towards.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetProjector {
    /// Every basis state whose lattice register is at this site.
    MarkedSite(usize),
    /// A single unit vector.
    State(StateVector),
}

impl TargetProjector {
    /// `I - 2P`.
    pub fn reflect(&self, state: &mut StateVector) {
        match self {
            TargetProjector::MarkedSite(site) => {
                let n = state.n_sites();
                let planes = state.space().planes();
                let amps = state.amplitudes_mut();
                for plane in 0..planes {
                    amps[plane * n + site] = -amps[plane * n + site];
                }
            }
            TargetProjector::State(t) => {
                let ov = inner(t, state).expect("target and state share a space");
                state
                    .axpy(ov * -2.0, t)
                    .expect("target and state share a space");
            }
        }
    }

    /// `<psi|P|psi>`.
    pub fn probability(&self, state: &StateVector) -> f64 {
        match self {
            TargetProjector::MarkedSite(site) => state.site_probability(*site),
            TargetProjector::State(t) => inner(t, state).map(|z| z.norm_sqr()).unwrap_or(0.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Amplified {
    pub state: StateVector,
    pub rounds: usize,
    /// `(2 rounds + 1) * prep cost + rounds` oracle steps.
    pub total_cost: u64,
    pub success_probability: f64,
}

/// Oracle steps charged per target reflection.
pub const ORACLE_STEP_COST: u64 = 1;

pub fn amplify<P: Preparation>(prep: &P, target: &TargetProjector, rounds: usize) -> Amplified {
    let initial = prep.initial();
    let mut state = initial.clone();
    prep.run(&mut state);
    for _ in 0..rounds {
        target.reflect(&mut state);
        prep.inverse_run(&mut state);
        let ov = inner(&initial, &state).expect("same space");
        state.axpy(ov * -2.0, &initial).expect("same space");
        prep.run(&mut state);
        state.scale(Complex64::new(-1.0, 0.0));
    }
    let success_probability = target.probability(&state);
    Amplified {
        state,
        rounds,
        total_cost: (2 * rounds as u64 + 1) * prep.cost_steps() + rounds as u64 * ORACLE_STEP_COST,
        success_probability,
    }
}

/// `round(pi / (4 asin a) - 1/2)`, floored at zero.
pub fn optimal_rounds(overlap_amplitude: f64) -> Result<usize> {
    let a = overlap_amplitude;
    if !(a > 0.0 && a <= 1.0) {
        return Err(SearchError::InvalidAmplitude(a));
    }
    let r = (PI / (4.0 * a.asin()) - 0.5).round();
    Ok(r.max(0.0) as usize)
}

/// `sin^2((2r + 1) asin a)`.
pub fn ideal_success(overlap_amplitude: f64, rounds: usize) -> f64 {
    ((2 * rounds + 1) as f64 * overlap_amplitude.asin()).sin().powi(2)
}
