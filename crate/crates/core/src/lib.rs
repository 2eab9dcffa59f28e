//! Discrete-time quantum-walk search for a marked site on the `L x L` torus.
//!
//! * [`lattice`]: register layout, uniform states, inner products, site statistics.
//! * [`walk`]: shift, Grover coin, oracle reflection and the walk search iterate.
//! * [`controlled`]: the ancilla-controlled walk and its iterate.
//! * [`spectral`]: momentum-sector eigenstructure, target expansion, secular
//!   equation and overlap predictions.
//! * [`dense`]: dense eigendecomposition oracle for small lattices.
//! * [`amplify`]: amplitude amplification on top of a walk run.

pub mod amplify;
pub mod controlled;
pub mod dense;
pub mod error;
pub mod lattice;
pub mod spectral;
pub mod walk;

pub use controlled::{run_controlled, tuned_delta, ControlConfig, ControlledOps};
pub use error::{Result, SearchError};
pub use lattice::{inner, make_uniform, site_distribution, ProblemInstance, Space, StateVector};
pub use spectral::{build_blocks, expand_target, solve_alpha, SearchMode, SpectralExpansion};
pub use walk::{run_akr, WalkOps};
