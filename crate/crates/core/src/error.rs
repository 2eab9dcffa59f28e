use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("lattice side must be at least 2, got {0}")]
    SideTooSmall(usize),
    #[error("marked site ({x}, {y}) outside a lattice of side {side}")]
    MarkedOutOfRange { x: usize, y: usize, side: usize },
    #[error("state built for side {got}, operator for side {expected}")]
    SideMismatch { expected: usize, got: usize },
    #[error("state spaces differ: {left:?} vs {right:?}")]
    SpaceMismatch {
        left: crate::lattice::Space,
        right: crate::lattice::Space,
    },
    #[error("operation requires {expected} space, got {got:?}")]
    WrongSpace {
        expected: &'static str,
        got: crate::lattice::Space,
    },
    #[error("control angle {0} outside [0, pi/2)")]
    InvalidDelta(f64),
    #[error("c_delta = {c_delta} too large for ln N = {ln_n}: cos(delta) would be {cos_delta}")]
    CDeltaTooLarge { c_delta: f64, ln_n: f64, cos_delta: f64 },
    #[error("F_lambda evaluated at its pole (lambda = {lambda}, theta = {theta})")]
    Pole { lambda: f64, theta: f64 },
    #[error("no sign change of the secular residual on [{lo}, {hi}]: r(lo) = {r_lo}, r(hi) = {r_hi}")]
    NoBracket { lo: f64, hi: f64, r_lo: f64, r_hi: f64 },
    #[error("expansion has a0 = {0}; need a0 > 0")]
    NoStationaryWeight(f64),
    #[error("expansion has no oscillating pairs")]
    NoPairs,
    #[error("dense oracle limited to side <= {max}, got {side}")]
    DenseTooLarge { side: usize, max: usize },
    #[error("dense eigendecomposition failed to converge")]
    EigenFailed,
    #[error("amplitude amplification needs 0 < a <= 1, got {0}")]
    InvalidAmplitude(f64),
    #[error("no eigenphase found in the requested range")]
    NoEigenphase,
}

pub type Result<T> = std::result::Result<T, SearchError>;
