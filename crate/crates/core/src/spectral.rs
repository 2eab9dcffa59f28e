//! Spectral analysis of walk search.
//!
//! The walk `W` is block diagonal in the plane-wave basis: each momentum
//! sector `(p, q)` carries a 4x4 coin matrix with eigenvalues
//! `{1, -1, e^{i theta}, e^{-i theta}}`, where
//! `cos theta = (cos(2 pi p / L) + cos(2 pi q / L)) / 2`.
//! Expanding the target in that eigenbasis gives a [`SpectralExpansion`];
//! the principal eigenphase `alpha` of the search iterate is the smallest
//! positive root of the secular equation
//!
//! ```text
//! a0^2 cot(l/2) / sin(l) = sum_j 2 a_j^2 / (cos l - cos theta_j) + A_k^2 tan(l/2) / sin(l)
//! ```
//!
//! and the overlaps of the initial and final states follow from finite sums
//! over the same expansion.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::controlled::ControlConfig;
use crate::error::{Result, SearchError};
use crate::lattice::{ProblemInstance, Space, StateVector, COIN_DIM};

type Coin = [Complex64; COIN_DIM];

const DEGENERACY_TOL: f64 = 1e-10;

/// Which search the expansion describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchMode {
    Akr,
    Controlled(ControlConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorKind {
    /// `(0, 0)`: eigenvalue 1 three times, -1 once; holds `|Phi_0>`.
    Stationary,
    /// `theta` strictly between 0 and pi.
    Oscillating,
    /// `(L/2, L/2)` on even sides: eigenvalue -1 three times, 1 once.
    Alternating,
}

/// One coin eigenvector of a momentum sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinEigvec {
    /// Signed eigenphase in `(-pi, pi]`.
    pub phase: f64,
    pub vector: Coin,
    /// `<Phi|u_c,m>` for the full lattice eigenvector `|v>|chi_p>|chi_q>`.
    pub overlap: Complex64,
}

impl CoinEigvec {
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phase)
    }
}

/// Eigenstructure of the walk in one momentum sector.
///
/// `coin_eigvecs` is ordered by role: `[v^1, v^-1, v^+, v^-]`. The last two
/// span the sector's part of the search subspace `H_0`. In the stationary
/// sector `v^+` is `|u_c>` (so `v^+ (x) chi_0 chi_0 = |Phi_0>`) and `v^-` is
/// another +1 vector; in the alternating sector `v^+-` are the complex pair
/// `(e_1 +- i e_2)/sqrt2` inside the -1 eigenspace, `e_1` along `|u_c>`.
/// Phases are fixed so that `a_plus`, `a_minus` are real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumBlock {
    pub p: usize,
    pub q: usize,
    pub theta: f64,
    pub kind: SectorKind,
    pub coin_eigvecs: [CoinEigvec; 4],
    pub a_plus: f64,
    pub a_minus: f64,
}

impl MomentumBlock {
    /// Lattice eigenvector `|v_role>|chi_p>|chi_q>` in the joint space.
    pub fn eigvec_state(&self, role: usize, side: usize) -> StateVector {
        plane_wave(&self.coin_eigvecs[role].vector, self.p, self.q, side)
    }
}

/// The walk restricted to momentum sector `(p, q)`: `S_pq (2|u_c><u_c| - I)`.
pub fn sector_matrix(p: usize, q: usize, side: usize) -> [[Complex64; 4]; 4] {
    let kp = TAU * p as f64 / side as f64;
    let kq = TAU * q as f64 / side as f64;
    let zero = Complex64::new(0.0, 0.0);
    let mut shift = [[zero; 4]; 4];
    shift[0][1] = Complex64::from_polar(1.0, kp);
    shift[1][0] = Complex64::from_polar(1.0, -kp);
    shift[2][3] = Complex64::from_polar(1.0, kq);
    shift[3][2] = Complex64::from_polar(1.0, -kq);
    let mut out = [[zero; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // coin matrix entries are 1/2 - delta_kj
            *entry = (0..4)
                .map(|k| shift[i][k] * (0.5 - if k == j { 1.0 } else { 0.0 }))
                .sum();
        }
    }
    out
}

/// Momentum-sector eigenstructure of the walk for `instance`, ordered
/// lexicographically in `(p, q)`.
pub fn build_blocks(instance: &ProblemInstance) -> Vec<MomentumBlock> {
    let side = instance.side();
    let mut blocks = Vec::with_capacity(instance.n_sites());
    for p in 0..side {
        for q in 0..side {
            blocks.push(build_block(instance, p, q));
        }
    }
    blocks
}

fn build_block(instance: &ProblemInstance, p: usize, q: usize) -> MomentumBlock {
    let side = instance.side();
    let m = sector_matrix(p, q, side);
    let cos_theta = (0..4).map(|i| m[i][i]).sum::<Complex64>().re / 2.0;
    let u = uniform_coin();

    // <chi_p chi_q|m>: the target restricted to this sector is g |u_c>.
    let (mx, my) = instance.marked();
    let kp = TAU * p as f64 / side as f64;
    let kq = TAU * q as f64 / side as f64;
    let g = Complex64::from_polar(
        1.0 / (instance.n_sites() as f64).sqrt(),
        -(kp * mx as f64 + kq * my as f64),
    );

    let (kind, theta, vecs, phases) = if cos_theta > 1.0 - DEGENERACY_TOL {
        let plus = eigenspace_basis(&m, 1.0, &u);
        let minus = eigenspace_basis(&m, -1.0, &u);
        // plus[0] is along u_c
        (
            SectorKind::Stationary,
            0.0,
            [plus[2], minus[0], plus[0], plus[1]],
            [0.0, PI, 0.0, 0.0],
        )
    } else if cos_theta < -1.0 + DEGENERACY_TOL {
        let plus = eigenspace_basis(&m, 1.0, &u);
        let minus = eigenspace_basis(&m, -1.0, &u);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::new(0.0, 1.0);
        let vp = combine(&minus[0], &minus[1], s, i * s);
        let vm = combine(&minus[0], &minus[1], s, -i * s);
        (
            SectorKind::Alternating,
            PI,
            [plus[0], minus[2], vp, vm],
            [0.0, PI, PI, PI],
        )
    } else {
        let sin_theta = ((1.0 - cos_theta) * (1.0 + cos_theta)).sqrt();
        let theta = sin_theta.atan2(cos_theta);
        let spectrum = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(cos_theta, sin_theta),
            Complex64::new(cos_theta, -sin_theta),
        ];
        let mut vecs = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (role, v) in vecs.iter_mut().enumerate() {
            *v = if role >= 2 {
                normalized(&project(&m, &spectrum, role, &u))
            } else {
                best_projection(&m, &spectrum, role)
            };
        }
        (
            SectorKind::Oscillating,
            theta,
            vecs,
            [0.0, PI, theta, -theta],
        )
    };

    let eig = |role: usize| {
        let mut vector = vecs[role];
        let raw = g * dot(&vector, &u);
        if role >= 2 && raw.norm() > 0.0 {
            // make <Phi|t> real and non-negative
            let phase = Complex64::from_polar(1.0, raw.arg());
            vector.iter_mut().for_each(|c| *c *= phase);
        } else {
            fix_phase(&mut vector);
        }
        CoinEigvec {
            phase: phases[role],
            vector,
            overlap: g * dot(&vector, &u),
        }
    };
    let coin_eigvecs = [eig(0), eig(1), eig(2), eig(3)];
    MomentumBlock {
        p,
        q,
        theta,
        kind,
        a_plus: coin_eigvecs[2].overlap.re,
        a_minus: coin_eigvecs[3].overlap.re,
        coin_eigvecs,
    }
}

fn uniform_coin() -> Coin {
    [Complex64::new(0.5, 0.0); 4]
}

/// `<a|b>`.
fn dot(a: &Coin, b: &Coin) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &Coin) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: &Coin) -> Coin {
    let n = norm(v);
    let mut out = *v;
    out.iter_mut().for_each(|c| *c /= n);
    out
}

fn combine(a: &Coin, b: &Coin, ca: f64, cb: Complex64) -> Coin {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        out[i] = a[i] * ca + b[i] * cb;
    }
    out
}

fn mat_vec(m: &[[Complex64; 4]; 4], v: &Coin) -> Coin {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// Spectral projector onto eigenvalue `spectrum[role]`, built as the
/// Lagrange product over the other (distinct) eigenvalues, applied to `seed`.
fn project(m: &[[Complex64; 4]; 4], spectrum: &[Complex64; 4], role: usize, seed: &Coin) -> Coin {
    let mut v = *seed;
    for (k, mu) in spectrum.iter().enumerate() {
        if k == role {
            continue;
        }
        let mv = mat_vec(m, &v);
        let denom = spectrum[role] - mu;
        for i in 0..4 {
            v[i] = (mv[i] - mu * v[i]) / denom;
        }
    }
    v
}

fn best_projection(m: &[[Complex64; 4]; 4], spectrum: &[Complex64; 4], role: usize) -> Coin {
    let candidates = (0..4).map(|i| {
        let mut e = [Complex64::new(0.0, 0.0); 4];
        e[i] = Complex64::new(1.0, 0.0);
        project(m, spectrum, role, &e)
    });
    let best = candidates
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .expect("four candidates");
    normalized(&best)
}

/// Orthonormal basis of the `eigenvalue` eigenspace of an involutive block
/// (`M^2 = I`), by Gram-Schmidt on `(I + eigenvalue M)/2` applied to
/// `u_c` and then the standard basis. The first vector is along `u_c` when
/// `u_c` has a component there.
fn eigenspace_basis(m: &[[Complex64; 4]; 4], eigenvalue: f64, u: &Coin) -> Vec<Coin> {
    let mut seeds = vec![*u];
    for i in 0..4 {
        let mut e = [Complex64::new(0.0, 0.0); 4];
        e[i] = Complex64::new(1.0, 0.0);
        seeds.push(e);
    }
    let mut basis: Vec<Coin> = Vec::new();
    for seed in seeds {
        let mv = mat_vec(m, &seed);
        let mut v = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            v[i] = (seed[i] + mv[i] * eigenvalue) * 0.5;
        }
        for b in &basis {
            let c = dot(b, &v);
            for i in 0..4 {
                v[i] -= b[i] * c;
            }
        }
        if norm(&v) > 1e-8 {
            basis.push(normalized(&v));
        }
    }
    basis
}

/// Rotates `v` so its largest component is real and positive.
fn fix_phase(v: &mut Coin) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    if pivot.norm() > 0.0 {
        let phase = Complex64::from_polar(1.0, -pivot.arg());
        v.iter_mut().for_each(|c| *c *= phase);
    }
}

fn plane_wave(coin: &Coin, p: usize, q: usize, side: usize) -> StateVector {
    let n = side * side;
    let norm = 1.0 / (n as f64).sqrt();
    let mut s = StateVector::zeros(Space::Joint, side);
    let amps = s.amplitudes_mut();
    for y in 0..side {
        for x in 0..side {
            let k = ((p * x + q * y) % side) as f64;
            let wave = Complex64::from_polar(norm, TAU * k / side as f64);
            for (d, c) in coin.iter().enumerate() {
                amps[d * n + y * side + x] = c * wave;
            }
        }
    }
    s
}

/// Basis of the search subspace `H_0`: `|Phi_0>` and `|Phi_pq^+->` for every
/// other sector.
pub fn search_subspace_basis(blocks: &[MomentumBlock], side: usize) -> Vec<StateVector> {
    let mut basis = Vec::with_capacity(2 * blocks.len());
    for b in blocks {
        basis.push(b.eigvec_state(2, side));
        if b.kind != SectorKind::Stationary {
            basis.push(b.eigvec_state(3, side));
        }
    }
    basis
}

/// One oscillating pair `a_j (|Phi_j^+> + |Phi_j^->)` with eigenphases `+-theta_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub amplitude: f64,
    pub theta: f64,
}

/// Target-state coefficients in the eigenbasis of the (controlled) walk.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralExpansion {
    pub a0: f64,
    pub pairs: Vec<SpectralPair>,
    /// Norm of the target's projection on the -1 eigenspace.
    pub a_k: f64,
    pub theta_min: f64,
}

impl SpectralExpansion {
    pub fn new(a0: f64, pairs: Vec<SpectralPair>, a_k: f64) -> Self {
        let theta_min = pairs
            .iter()
            .map(|p| p.theta)
            .fold(f64::INFINITY, f64::min);
        Self {
            a0,
            pairs,
            a_k,
            theta_min,
        }
    }

    /// `a0^2 + 2 sum a_j^2 + A_k^2`.
    pub fn total_weight(&self) -> f64 {
        self.a0 * self.a0
            + 2.0 * self.pairs.iter().map(|p| p.amplitude * p.amplitude).sum::<f64>()
            + self.a_k * self.a_k
    }

    /// Every eigen-direction as `(a_l^2, theta_l)`, pairs expanded to `+-theta`.
    pub fn weighted_phases(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        std::iter::once((self.a0 * self.a0, 0.0))
            .chain(self.pairs.iter().flat_map(|p| {
                let w = p.amplitude * p.amplitude;
                [(w, p.theta), (w, -p.theta)]
            }))
            .chain(std::iter::once((self.a_k * self.a_k, PI)))
    }
}

/// Expansion of the effective target of `mode` over the walk's momentum blocks.
pub fn expand_target(blocks: &[MomentumBlock], mode: SearchMode) -> SpectralExpansion {
    let mut a0 = 0.0;
    let mut a_k_sq = 0.0;
    let mut pairs = Vec::new();
    for b in blocks {
        match b.kind {
            SectorKind::Stationary => a0 = b.a_plus,
            SectorKind::Alternating => a_k_sq += b.a_plus * b.a_plus + b.a_minus * b.a_minus,
            SectorKind::Oscillating => pairs.push(SpectralPair {
                amplitude: (0.5 * (b.a_plus * b.a_plus + b.a_minus * b.a_minus)).sqrt(),
                theta: b.theta,
            }),
        }
    }
    match mode {
        SearchMode::Akr => SpectralExpansion::new(a0, pairs, a_k_sq.sqrt()),
        SearchMode::Controlled(cfg) => {
            let (c, s) = (cfg.cos_delta(), cfg.sin_delta());
            for p in &mut pairs {
                p.amplitude *= c;
            }
            SpectralExpansion::new(a0 * c, pairs, (s * s + c * c * a_k_sq).sqrt())
        }
    }
}

/// `F_lambda(theta) = cot((lambda - theta) / 2)`.
pub fn f_lambda(theta: f64, lambda: f64) -> Result<f64> {
    let half = 0.5 * (lambda - theta);
    let s = half.sin();
    if s.abs() <= f64::EPSILON * half.abs().max(1.0) {
        return Err(SearchError::Pole { lambda, theta });
    }
    Ok(half.cos() / s)
}

/// `cos(l) - cos(t)` without cancellation.
fn cos_diff(l: f64, t: f64) -> f64 {
    2.0 * (0.5 * (t + l)).sin() * (0.5 * (t - l)).sin()
}

/// Left minus right side of the secular equation at `lambda`. Even in `lambda`.
pub fn secular_residual(lambda: f64, expansion: &SpectralExpansion) -> Result<f64> {
    let s = lambda.sin();
    if s.abs() <= f64::EPSILON * lambda.abs().max(1.0) {
        return Err(SearchError::Pole {
            lambda,
            theta: 0.0,
        });
    }
    let half = 0.5 * lambda;
    let lhs = expansion.a0 * expansion.a0 * half.cos() / (half.sin() * s);
    let mut rhs = expansion.a_k * expansion.a_k * half.tan() / s;
    for pair in &expansion.pairs {
        let d = cos_diff(lambda, pair.theta);
        if d == 0.0 {
            return Err(SearchError::Pole {
                lambda,
                theta: pair.theta,
            });
        }
        rhs += 2.0 * pair.amplitude * pair.amplitude / d;
    }
    Ok(lhs - rhs)
}

/// Finite-sum diagnostics evaluated at the solved eigenphase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSums {
    /// `4 a0^2 cot^2(alpha/2)`.
    pub t0: f64,
    /// `sum_j a_j^2 (F_a(theta_j) - F_-a(theta_j))^2` over both members of each pair.
    pub tj: f64,
    /// `4 A_k^2 tan^2(alpha/2)`.
    pub tk: f64,
    /// `||w_alpha + w_-alpha||^2`.
    pub w_sum_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecularSolution {
    pub alpha: f64,
    /// `ceil(pi / (2 alpha))`.
    pub predicted_t: usize,
    /// `|<Phi_0|alpha^->|`.
    pub initial_overlap: f64,
    /// `|<t|alpha^+>|`.
    pub final_overlap: f64,
    pub sums: OverlapSums,
    pub residual: f64,
    pub iterations: usize,
}

const MAX_BISECTIONS: usize = 200;

/// Principal eigenphase: the root of the secular equation in
/// `(eps, theta_min/2 - eps)` with `eps = 1e-12 theta_min`, by bisection.
pub fn solve_alpha(expansion: &SpectralExpansion) -> Result<SecularSolution> {
    if expansion.pairs.is_empty() {
        return Err(SearchError::NoPairs);
    }
    let eps = 1e-12 * expansion.theta_min;
    solve_alpha_in(expansion, eps, 0.5 * expansion.theta_min - eps)
}

/// Bisection for a sign change of the secular residual on `[lo, hi]`.
pub fn solve_alpha_in(expansion: &SpectralExpansion, lo: f64, hi: f64) -> Result<SecularSolution> {
    if !(expansion.a0 > 0.0) {
        return Err(SearchError::NoStationaryWeight(expansion.a0));
    }
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut r_lo = secular_residual(lo, expansion)?;
    let r_hi = secular_residual(hi, expansion)?;
    if r_lo.signum() == r_hi.signum() {
        return Err(SearchError::NoBracket { lo, hi, r_lo, r_hi });
    }
    let mut iterations = 0;
    let mut root = 0.5 * (lo + hi);
    while iterations < MAX_BISECTIONS {
        iterations += 1;
        root = 0.5 * (lo + hi);
        if root <= lo || root >= hi {
            break;
        }
        let r = secular_residual(root, expansion)?;
        if r == 0.0 {
            break;
        }
        if r.signum() == r_lo.signum() {
            lo = root;
            r_lo = r;
        } else {
            hi = root;
        }
    }
    let residual = secular_residual(root, expansion)?;
    let sums = overlap_sums(expansion, root)?;
    let (initial_overlap, final_overlap) = overlaps_from_sums(&sums);
    Ok(SecularSolution {
        alpha: root,
        predicted_t: (PI / (2.0 * root.abs())).ceil() as usize,
        initial_overlap,
        final_overlap,
        sums,
        residual,
        iterations,
    })
}

fn overlap_sums(expansion: &SpectralExpansion, alpha: f64) -> Result<OverlapSums> {
    let a0_sq = expansion.a0 * expansion.a0;
    let ak_sq = expansion.a_k * expansion.a_k;
    let t0 = a0_sq * (f_lambda(0.0, alpha)? - f_lambda(0.0, -alpha)?).powi(2);
    let tk = ak_sq * (f_lambda(PI, alpha)? - f_lambda(PI, -alpha)?).powi(2);
    let mut tj = 0.0;
    let mut w_sum_sq = 0.0;
    for pair in &expansion.pairs {
        let w = pair.amplitude * pair.amplitude;
        for theta in [pair.theta, -pair.theta] {
            let fp = f_lambda(theta, alpha)?;
            let fm = f_lambda(theta, -alpha)?;
            tj += w * (fp - fm).powi(2);
            w_sum_sq += w * (fp + fm).powi(2);
        }
    }
    Ok(OverlapSums {
        t0,
        tj,
        tk,
        w_sum_sq,
    })
}

fn overlaps_from_sums(sums: &OverlapSums) -> (f64, f64) {
    let initial = (sums.t0 / (sums.t0 + sums.tj + sums.tk)).sqrt();
    let last = (1.0 + sums.w_sum_sq / 4.0).powf(-0.5);
    (initial, last)
}

/// `(|<Phi_0|alpha^->|, |<t|alpha^+>|)` as exact finite sums at `solution.alpha`.
pub fn eigvec_predictions(
    solution: &SecularSolution,
    expansion: &SpectralExpansion,
) -> Result<(f64, f64)> {
    Ok(overlaps_from_sums(&overlap_sums(expansion, solution.alpha)?))
}

/// `sum_l a_l^2 F_lambda(theta_l)`: zero exactly when `|w_lambda>` is
/// orthogonal to the target.
pub fn orthogonality_sum(expansion: &SpectralExpansion, lambda: f64) -> Result<f64> {
    let mut total = 0.0;
    for (w, theta) in expansion.weighted_phases() {
        if w > 0.0 {
            total += w * f_lambda(theta, lambda)?;
        }
    }
    Ok(total)
}

/// The three walk sums over oscillating pairs:
/// `s1 = sum a^2/(1 - cos theta)`,
/// `s2 = sum alpha^4/a0^2 * a^2/(1 - cos theta)^2`,
/// `s3 = sum a^2 cot^2(theta/4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkSums {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

pub fn akr_sums(expansion: &SpectralExpansion, alpha: f64) -> WalkSums {
    let a0_sq = expansion.a0 * expansion.a0;
    let mut sums = WalkSums {
        s1: 0.0,
        s2: 0.0,
        s3: 0.0,
    };
    for pair in &expansion.pairs {
        let w = pair.amplitude * pair.amplitude;
        // 1 - cos t = 2 sin^2(t/2)
        let one_minus_cos = 2.0 * (0.5 * pair.theta).sin().powi(2);
        sums.s1 += w / one_minus_cos;
        sums.s2 += alpha.powi(4) / a0_sq * w / one_minus_cos.powi(2);
        sums.s3 += w / (0.25 * pair.theta).tan().powi(2);
    }
    sums
}

/// Unnormalized eigenvector `|t> + i|w_lambda>` of the search iterate
/// (`U_W` or `U_C`), assembled from the momentum blocks.
pub fn assemble_eigenvector(
    blocks: &[MomentumBlock],
    instance: &ProblemInstance,
    mode: SearchMode,
    lambda: f64,
) -> Result<StateVector> {
    let side = instance.side();
    let mut joint = StateVector::zeros(Space::Joint, side);
    for b in blocks {
        for (role, e) in b.coin_eigvecs.iter().enumerate() {
            if e.overlap.norm() < 1e-15 {
                continue;
            }
            let coef = e.overlap * Complex64::new(1.0, f_lambda(e.phase, lambda)?);
            joint.axpy(coef, &b.eigvec_state(role, side))?;
        }
    }
    match mode {
        SearchMode::Akr => Ok(joint),
        SearchMode::Controlled(cfg) => {
            // |delta_1,u_c,m> = cos|1>|t> - sin|0>|t>; the ancilla-0 part sits at phase pi
            joint.scale(Complex64::new(cfg.cos_delta(), 0.0));
            let mut out = StateVector::with_ancilla(&joint, 1)?;
            let mut t = crate::walk::WalkOps::new(*instance).target_state();
            let coef = Complex64::new(1.0, f_lambda(PI, lambda)?) * -cfg.sin_delta();
            t.scale(coef);
            out.axpy(Complex64::new(1.0, 0.0), &StateVector::with_ancilla(&t, 0)?)?;
            Ok(out)
        }
    }
}
