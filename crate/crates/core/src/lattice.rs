//! Register layout and amplitude storage for the lattice, joint (coin x
//! lattice) and controlled (ancilla x coin x lattice) spaces.
//!
//! Basis index is `(b * 4 + d) * N + (y * side + x)`: `x` runs fastest, so a
//! shift along `x` is a row rotation and a shift along `y` rotates a whole
//! coin plane by `side` elements.

use num_complex::Complex64;

use crate::error::{Result, SearchError};

/// Number of coin directions.
pub const COIN_DIM: usize = 4;

/// Coin basis states; the discriminant is the coin index `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Right = 0,
    Left = 1,
    Up = 2,
    Down = 3,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Right,
        Direction::Left,
        Direction::Up,
        Direction::Down,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A spatial search problem: a `side x side` torus with one marked site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemInstance {
    side: usize,
    marked: (usize, usize),
}

impl ProblemInstance {
    pub fn new(side: usize, marked: (usize, usize)) -> Result<Self> {
        if side < 2 {
            return Err(SearchError::SideTooSmall(side));
        }
        if marked.0 >= side || marked.1 >= side {
            return Err(SearchError::MarkedOutOfRange {
                x: marked.0,
                y: marked.1,
                side,
            });
        }
        Ok(Self { side, marked })
    }

    /// Instance with the marked item at the origin.
    pub fn at_origin(side: usize) -> Result<Self> {
        Self::new(side, (0, 0))
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn marked(&self) -> (usize, usize) {
        self.marked
    }

    pub fn n_sites(&self) -> usize {
        self.side * self.side
    }

    /// Linear site index `y * side + x` of the marked site.
    pub fn marked_site(&self) -> usize {
        self.marked.1 * self.side + self.marked.0
    }

    pub fn ln_n(&self) -> f64 {
        (self.n_sites() as f64).ln()
    }
}

/// Which Hilbert space a state lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// `H_N`, dimension N.
    Lattice,
    /// `H_c (x) H_N`, dimension 4N.
    Joint,
    /// `H_b (x) H_c (x) H_N`, dimension 8N.
    Controlled,
}

impl Space {
    /// Number of `N`-sized planes in the layout.
    pub fn planes(self) -> usize {
        match self {
            Space::Lattice => 1,
            Space::Joint => COIN_DIM,
            Space::Controlled => 2 * COIN_DIM,
        }
    }

    pub fn dim(self, n_sites: usize) -> usize {
        self.planes() * n_sites
    }
}

/// Coordinates of one basis vector. `ancilla` and `coin` are zero in spaces
/// that lack those factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub ancilla: usize,
    pub coin: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: Space,
    side: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(space: Space, side: usize) -> Self {
        Self {
            space,
            side,
            amps: vec![Complex64::new(0.0, 0.0); space.dim(side * side)],
        }
    }

    /// Wraps raw amplitudes; panics if the length does not match the space.
    pub fn from_amplitudes(space: Space, side: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(
            amps.len(),
            space.dim(side * side),
            "amplitude count does not match {space:?} at side {side}"
        );
        Self { space, side, amps }
    }

    pub fn basis(space: Space, side: usize, index: usize) -> Self {
        let mut s = Self::zeros(space, side);
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn n_sites(&self) -> usize {
        self.side * self.side
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn index(&self, label: BasisLabel) -> usize {
        encode_index(self.space, self.side, label)
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        decode_index(self.space, self.side, index)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex64, other: &StateVector) -> Result<()> {
        check_same(self, other)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        check_same(self, other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Embeds a joint-space state as `|ancilla> (x) state`.
    pub fn with_ancilla(joint: &StateVector, ancilla: usize) -> Result<StateVector> {
        if joint.space != Space::Joint {
            return Err(SearchError::WrongSpace {
                expected: "joint",
                got: joint.space,
            });
        }
        let mut out = StateVector::zeros(Space::Controlled, joint.side);
        let half = joint.len();
        out.amps[ancilla * half..(ancilla + 1) * half].copy_from_slice(&joint.amps);
        Ok(out)
    }

    /// The ancilla-`b` half of a controlled state, as an (unnormalized) joint state.
    pub fn ancilla_component(&self, ancilla: usize) -> Result<StateVector> {
        if self.space != Space::Controlled {
            return Err(SearchError::WrongSpace {
                expected: "controlled",
                got: self.space,
            });
        }
        let half = self.len() / 2;
        Ok(StateVector {
            space: Space::Joint,
            side: self.side,
            amps: self.amps[ancilla * half..(ancilla + 1) * half].to_vec(),
        })
    }

    /// Probability of finding the lattice register at `site`.
    pub fn site_probability(&self, site: usize) -> f64 {
        let n = self.n_sites();
        (0..self.space.planes())
            .map(|plane| self.amps[plane * n + site].norm_sqr())
            .sum()
    }
}

pub fn encode_index(space: Space, side: usize, label: BasisLabel) -> usize {
    let n = side * side;
    let plane = match space {
        Space::Lattice => 0,
        Space::Joint => label.coin,
        Space::Controlled => label.ancilla * COIN_DIM + label.coin,
    };
    plane * n + label.y * side + label.x
}

pub fn decode_index(space: Space, side: usize, index: usize) -> BasisLabel {
    let n = side * side;
    let plane = index / n;
    let site = index % n;
    let (ancilla, coin) = match space {
        Space::Lattice => (0, 0),
        Space::Joint => (0, plane),
        Space::Controlled => (plane / COIN_DIM, plane % COIN_DIM),
    };
    BasisLabel {
        ancilla,
        coin,
        x: site % side,
        y: site / side,
    }
}

fn check_same(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.space != b.space || a.side != b.side {
        return Err(SearchError::SpaceMismatch {
            left: a.space,
            right: b.space,
        });
    }
    Ok(())
}

/// The initial state of the searches: uniform over coin and lattice, with the
/// ancilla (when present) in `|1>`.
pub fn make_uniform(space: Space, instance: &ProblemInstance) -> StateVector {
    let side = instance.side();
    let n = instance.n_sites();
    let mut s = StateVector::zeros(space, side);
    match space {
        Space::Lattice => {
            let v = 1.0 / (n as f64).sqrt();
            s.amps.iter_mut().for_each(|a| *a = Complex64::new(v, 0.0));
        }
        Space::Joint => {
            let v = 1.0 / ((COIN_DIM * n) as f64).sqrt();
            s.amps.iter_mut().for_each(|a| *a = Complex64::new(v, 0.0));
        }
        Space::Controlled => {
            let v = 1.0 / ((COIN_DIM * n) as f64).sqrt();
            let half = COIN_DIM * n;
            s.amps[half..]
                .iter_mut()
                .for_each(|a| *a = Complex64::new(v, 0.0));
        }
    }
    s
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_same(a, b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Site-resolved measurement statistics with ancilla and coin traced out.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    side: usize,
    probs: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.probs[y * self.side + x]
    }

    pub fn success_probability(&self, instance: &ProblemInstance) -> f64 {
        self.probs[instance.marked_site()]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

pub fn site_distribution(state: &StateVector) -> MeasurementDistribution {
    let n = state.n_sites();
    let mut probs = vec![0.0; n];
    for plane in state.amps.chunks_exact(n) {
        for (p, a) in probs.iter_mut().zip(plane) {
            *p += a.norm_sqr();
        }
    }
    MeasurementDistribution {
        side: state.side,
        probs,
    }
}
