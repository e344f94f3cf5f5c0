//! The geometric-measure engine: classical-classical states induced by paired
//! von Neumann measurements, the Hilbert-Schmidt distance between a state and
//! its measured image, and maximization of the measurement objective
//! (k.x)^2 + (l.y)^2 + (k^T T l)^2 over unit axes by alternating exact
//! eigenvector updates, cross-checked by a deterministic sphere-grid oracle.

use crate::matkit::{hermitian_eigen, kron, pauli, CMat};
use crate::states::{bloch_decompose, cs_to_matrix, BlochForm, CsParams, DensityMatrix, StateError};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Grid resolution used when no explicit one is requested (64 x 128 points).
pub const DEFAULT_GRID_RESOLUTION: usize = 64;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("measurement axis must be unit length (|axis| = {norm:.17})")]
    NotUnit { norm: f64 },
    #[error("cannot normalize a zero axis")]
    ZeroAxis,
    #[error("closed form case {case} does not apply: |p3| = {p3:.3e}, |p5| = {p5:.3e}")]
    WrongCase { case: u8, p3: f64, p5: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Unit measurement axes for the two qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAxes {
    pub k: [f64; 3],
    pub l: [f64; 3],
}

impl MeasurementAxes {
    pub fn new(k: [f64; 3], l: [f64; 3]) -> Result<Self, GeoError> {
        for axis in [&k, &l] {
            let norm = norm3(axis);
            if (norm - 1.0).abs() > 1e-12 {
                return Err(GeoError::NotUnit { norm });
            }
        }
        Ok(MeasurementAxes { k, l })
    }

    pub fn from_directions(k: [f64; 3], l: [f64; 3]) -> Result<Self, GeoError> {
        Ok(MeasurementAxes {
            k: normalize3(&k).ok_or(GeoError::ZeroAxis)?,
            l: normalize3(&l).ok_or(GeoError::ZeroAxis)?,
        })
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn normalize3(a: &[f64; 3]) -> Option<[f64; 3]> {
    let n = norm3(a);
    if n < 1e-14 {
        None
    } else {
        Some([a[0] / n, a[1] / n, a[2] / n])
    }
}

fn mat3_vec(t: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [dot3(&t[0], v), dot3(&t[1], v), dot3(&t[2], v)]
}

fn mat3_transpose_vec(t: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        t[0][0] * v[0] + t[1][0] * v[1] + t[2][0] * v[2],
        t[0][1] * v[0] + t[1][1] * v[1] + t[2][1] * v[2],
        t[0][2] * v[0] + t[1][2] * v[1] + t[2][2] * v[2],
    ]
}

/// u u^T + w w^T.
fn rank_two(u: &[f64; 3], w: &[f64; 3]) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = u[i] * u[j] + w[i] * w[j];
        }
    }
    m
}

/// Top eigenvalue of u u^T + w w^T through the 2x2 Gram matrix.
fn rank_two_top_eigenvalue(u: &[f64; 3], w: &[f64; 3]) -> f64 {
    let a = dot3(u, u);
    let c = dot3(w, w);
    let b = dot3(u, w);
    0.5 * ((a + c) + ((a - c) * (a - c) + 4.0 * b * b).sqrt())
}

/// Axis maximizing v^T M v for a symmetric 3x3 M. If the previous axis
/// already lies in the top eigenspace it is kept, which pins the choice on
/// degenerate spectra (symmetric states would otherwise cycle through
/// equivalent bases).
fn top_eigen_axis(m: &[[f64; 3]; 3], previous: &[f64; 3]) -> [f64; 3] {
    let cm = CMat::from_fn(3, 3, |i, j| Complex64::new(m[i][j], 0.0));
    let decomp = hermitian_eigen(&cm).expect("symmetric 3x3 always diagonalizes");
    let top = decomp.eigenvalues[2];
    let scale = decomp.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let degeneracy_eps = 1e-12 * (1.0 + scale);

    // Project the previous axis onto the top eigenspace.
    let mut projection = [0.0; 3];
    for j in 0..3 {
        if top - decomp.eigenvalues[j] <= degeneracy_eps {
            let col = [
                decomp.eigenvectors[(0, j)].re,
                decomp.eigenvectors[(1, j)].re,
                decomp.eigenvectors[(2, j)].re,
            ];
            let coeff = dot3(&col, previous);
            for i in 0..3 {
                projection[i] += coeff * col[i];
            }
        }
    }
    if norm3(&projection) >= 1.0 - 1e-9 {
        return normalize3(&projection).unwrap();
    }
    let top_col = [
        decomp.eigenvectors[(0, 2)].re,
        decomp.eigenvectors[(1, 2)].re,
        decomp.eigenvectors[(2, 2)].re,
    ];
    normalize3(&top_col).unwrap_or(*previous)
}

fn axis_projector(axis: &[f64; 3], sign: f64) -> CMat {
    let mut m = pauli(0);
    for (i, component) in axis.iter().enumerate() {
        m = m.add(&pauli(i + 1).scale_re(sign * component));
    }
    m.scale_re(0.5)
}

/// Measurement-induced classical-classical state
/// chi = sum_ij (Pi_i (x) Pi_j) rho (Pi_i (x) Pi_j).
pub fn micc(rho: &DensityMatrix, axes: &MeasurementAxes) -> DensityMatrix {
    let mut chi = CMat::zeros(4, 4);
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            let projector = kron(&axis_projector(&axes.k, sa), &axis_projector(&axes.l, sb));
            chi = chi.add(&projector.mul(rho.matrix()).mul(&projector));
        }
    }
    // The pinching map preserves all density-matrix contracts.
    DensityMatrix::new_unchecked(chi)
}

/// tr[(rho - tau)^2], computed directly on the matrices.
pub fn hs_distance_sq(rho: &DensityMatrix, tau: &DensityMatrix) -> f64 {
    let d = rho.matrix().sub(tau.matrix());
    d.mul(&d).trace().re
}

fn cross_term(b: &BlochForm, k: &[f64; 3], l: &[f64; 3]) -> f64 {
    dot3(k, &mat3_vec(&b.t, l))
}

/// The measurement objective (k.x)^2 + (l.y)^2 + (k^T T l)^2.
pub fn objective(b: &BlochForm, axes: &MeasurementAxes) -> f64 {
    objective_parts(b, &axes.k, &axes.l)
}

fn objective_parts(b: &BlochForm, k: &[f64; 3], l: &[f64; 3]) -> f64 {
    let kx = dot3(k, &b.x);
    let ly = dot3(l, &b.y);
    let ktl = cross_term(b, k, l);
    kx * kx + ly * ly + ktl * ktl
}

/// Squared Hilbert-Schmidt distance between a state and its measured image in
/// correlation form: (1/4) [ |x|^2 + |y|^2 + |T|_F^2 - objective ]. Equals
/// [`hs_distance_sq`] of the state and its [`micc`] image.
pub fn eq5_distance(b: &BlochForm, axes: &MeasurementAxes) -> f64 {
    0.25 * (b.total_norm_sq() - objective(b, axes))
}

#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    /// Stop when an iteration gains less than this.
    pub tol: f64,
    pub max_iters: usize,
    /// Extra random restart pairs appended to the deterministic start set.
    pub random_restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            tol: 1e-12,
            max_iters: 500,
            random_restarts: 8,
            seed: 0x6765_6f64_6973,
        }
    }
}

/// Outcome of a maximization run.
#[derive(Clone, Debug)]
pub struct OptResult {
    pub lambda_max: f64,
    pub axes: MeasurementAxes,
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
    /// Largest per-iteration objective decrease observed; the half-step guard
    /// keeps this at exactly zero.
    pub ascent_violation: f64,
}

struct Run {
    objective: f64,
    k: [f64; 3],
    l: [f64; 3],
    iterations: usize,
    converged: bool,
    ascent_violation: f64,
}

fn alternate_from(b: &BlochForm, start_k: [f64; 3], start_l: [f64; 3], cfg: &OptimizerConfig) -> Run {
    let mut k = start_k;
    let mut l = start_l;
    let mut current = objective_parts(b, &k, &l);
    let mut iterations = 0;
    let mut converged = false;
    let mut ascent_violation = 0.0f64;

    for it in 1..=cfg.max_iters {
        // k-step: maximize (k.x)^2 + (k.Tl)^2 for fixed l.
        let tl = mat3_vec(&b.t, &l);
        let k_candidate = top_eigen_axis(&rank_two(&b.x, &tl), &k);
        if objective_parts(b, &k_candidate, &l) >= objective_parts(b, &k, &l) {
            k = k_candidate;
        }
        // l-step: maximize (l.y)^2 + (k.Tl)^2 for fixed k.
        let tk = mat3_transpose_vec(&b.t, &k);
        let l_candidate = top_eigen_axis(&rank_two(&b.y, &tk), &l);
        if objective_parts(b, &k, &l_candidate) >= objective_parts(b, &k, &l) {
            l = l_candidate;
        }

        let next = objective_parts(b, &k, &l);
        if next < current {
            ascent_violation = ascent_violation.max(current - next);
        }
        let gain = next - current;
        current = next;
        iterations = it;
        if gain < cfg.tol {
            converged = true;
            break;
        }
    }

    Run {
        objective: current,
        k,
        l,
        iterations,
        converged,
        ascent_violation,
    }
}

/// Uniform point on the unit sphere from two uniform draws.
pub fn random_unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Deterministic multistart list: the singular-vector pairs of T (descending
/// singular value), the normalized Bloch pair when both vectors are nonzero,
/// the coordinate axes, then seeded random pairs.
fn restart_pairs(b: &BlochForm, cfg: &OptimizerConfig) -> Vec<([f64; 3], [f64; 3])> {
    let mut starts = Vec::new();

    let gram = {
        let mut g = [[0.0; 3]; 3];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|r| b.t[r][i] * b.t[r][j]).sum();
            }
        }
        g
    };
    let cm = CMat::from_fn(3, 3, |i, j| Complex64::new(gram[i][j], 0.0));
    let decomp = hermitian_eigen(&cm).expect("Gram matrix is symmetric");
    for j in (0..3).rev() {
        let v = [
            decomp.eigenvectors[(0, j)].re,
            decomp.eigenvectors[(1, j)].re,
            decomp.eigenvectors[(2, j)].re,
        ];
        let v = match normalize3(&v) {
            Some(v) => v,
            None => continue,
        };
        let u = normalize3(&mat3_vec(&b.t, &v)).unwrap_or(v);
        starts.push((u, v));
    }

    if let (Some(x), Some(y)) = (normalize3(&b.x), normalize3(&b.y)) {
        starts.push((x, y));
    }

    for i in 0..3 {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        starts.push((e, e));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_restarts {
        starts.push((random_unit_vector(&mut rng), random_unit_vector(&mut rng)));
    }
    starts
}

/// Maximizes the measurement objective by alternating exact eigenvector
/// updates from every restart pair, keeping the best run.
pub fn maximize_alternating(b: &BlochForm, cfg: &OptimizerConfig) -> OptResult {
    let starts = restart_pairs(b, cfg);
    let restarts_used = starts.len();
    let mut best: Option<Run> = None;
    for (k0, l0) in starts {
        let run = alternate_from(b, k0, l0, cfg);
        let better = match &best {
            Some(current) => run.objective > current.objective,
            None => true,
        };
        if better {
            best = Some(run);
        }
    }
    let run = best.expect("restart list is never empty");
    OptResult {
        lambda_max: run.objective,
        axes: MeasurementAxes { k: run.k, l: run.l },
        iterations: run.iterations,
        converged: run.converged,
        restarts_used,
        ascent_violation: run.ascent_violation,
    }
}

/// Sphere-grid oracle: scans `resolution x 2*resolution` latitude/longitude
/// points for the B-side axis, solving the A side exactly per point, then
/// polishes the best grid point with one alternating run.
pub fn maximize_grid(b: &BlochForm, resolution: usize) -> OptResult {
    assert!(resolution >= 8, "grid resolution must be at least 8");
    let mut best_value = f64::NEG_INFINITY;
    let mut best_l = [0.0, 0.0, 1.0];
    for i in 0..resolution {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / resolution as f64;
        let (sin_t, cos_t) = theta.sin_cos();
        for j in 0..2 * resolution {
            let phi = std::f64::consts::PI * j as f64 / resolution as f64;
            let l = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
            let ly = dot3(&l, &b.y);
            let value = rank_two_top_eigenvalue(&b.x, &mat3_vec(&b.t, &l)) + ly * ly;
            if value > best_value {
                best_value = value;
                best_l = l;
            }
        }
    }
    let k0 = top_eigen_axis(&rank_two(&b.x, &mat3_vec(&b.t, &best_l)), &[0.0, 0.0, 1.0]);
    let cfg = OptimizerConfig::default();
    let run = alternate_from(b, k0, best_l, &cfg);
    OptResult {
        lambda_max: run.objective,
        axes: MeasurementAxes { k: run.k, l: run.l },
        iterations: run.iterations,
        converged: run.converged,
        restarts_used: 1,
        ascent_violation: run.ascent_violation,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Alternating,
    Grid,
}

/// Geometric measure and the maximization evidence behind it.
#[derive(Clone, Debug)]
pub struct GResult {
    /// (total - lambda_max) / 4, clamped to zero.
    pub g: f64,
    /// Unclamped value; tiny negatives witness roundoff, not discord.
    pub g_raw: f64,
    /// |x|^2 + |y|^2 + |T|_F^2.
    pub total: f64,
    pub opt: OptResult,
}

/// G = (1/4) [ |x|^2 + |y|^2 + |T|_F^2 - lambda_max ].
pub fn geometric_measure(rho: &DensityMatrix, method: Method) -> GResult {
    let b = bloch_decompose(rho);
    let opt = match method {
        Method::Alternating => maximize_alternating(&b, &OptimizerConfig::default()),
        Method::Grid => maximize_grid(&b, DEFAULT_GRID_RESOLUTION),
    };
    let total = b.total_norm_sq();
    let g_raw = 0.25 * (total - opt.lambda_max);
    GResult {
        g: g_raw.max(0.0),
        g_raw,
        total,
        opt,
    }
}

/// Verbatim closed-form candidate for lambda_max compared against the grid
/// oracle; the candidate never replaces the numerical value.
#[derive(Clone, Debug)]
pub struct ClosedFormReport {
    pub candidate: f64,
    pub numerical: f64,
    pub difference: f64,
}

fn closed_form_report(candidate: f64, p: &CsParams) -> Result<ClosedFormReport, GeoError> {
    let rho = cs_to_matrix(p)?;
    let numerical = maximize_grid(&bloch_decompose(&rho), DEFAULT_GRID_RESOLUTION).lambda_max;
    Ok(ClosedFormReport {
        candidate,
        numerical,
        difference: candidate - numerical,
    })
}

/// First published case, |p3| = |p5| = 0:
/// l'^2 = 4 p6^2 - ((2 p6)^2 - (4 p1 - 1)^2) l3^2, maximized over the unit
/// constraint (the larger of the two endpoint coefficients).
pub fn closed_form_case1(p: &CsParams, tol: f64) -> Result<ClosedFormReport, GeoError> {
    if p.p3.abs() > tol || p.p5.abs() > tol {
        return Err(GeoError::WrongCase {
            case: 1,
            p3: p.p3,
            p5: p.p5,
        });
    }
    let at_l3_zero = 4.0 * p.p6 * p.p6;
    let at_l3_one = (4.0 * p.p1 - 1.0) * (4.0 * p.p1 - 1.0);
    closed_form_report(at_l3_zero.max(at_l3_one), p)
}

/// Second published case, both p3 and p5 nonzero:
/// l'^2 = 4(p6+p7)^2 l1^2 + 4((p6-p7) - 2 p3)^2 l2^2 + (4 p1 - 4 p5 - 1)^2 l3^2,
/// maximized over the unit constraint (the largest coefficient).
pub fn closed_form_case2(p: &CsParams, tol: f64) -> Result<ClosedFormReport, GeoError> {
    if p.p3.abs() <= tol || p.p5.abs() <= tol {
        return Err(GeoError::WrongCase {
            case: 2,
            p3: p.p3,
            p5: p.p5,
        });
    }
    let c1 = 4.0 * (p.p6 + p.p7) * (p.p6 + p.p7);
    let c2 = 4.0 * ((p.p6 - p.p7) - 2.0 * p.p3) * ((p.p6 - p.p7) - 2.0 * p.p3);
    let c3 = (4.0 * p.p1 - 4.0 * p.p5 - 1.0) * (4.0 * p.p1 - 4.0 * p.p5 - 1.0);
    closed_form_report(c1.max(c2).max(c3), p)
}
