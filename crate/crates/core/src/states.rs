//! Two-qubit state representations: generic density matrices, the
//! centrosymmetric (CS) and X seven-parameter families, Hadamard conjugation
//! between them, the Bloch/Pauli correlation decomposition, and the
//! equivalence-condition checker for CS/X parameter pairs.

use crate::matkit::{hadamard, hermitian_eigen, kron, pauli, CMat};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Tolerance for the density-matrix contracts (Hermiticity, trace, positivity).
pub const DENSITY_TOL: f64 = 1e-10;

/// Default tolerance for shape classification; physical-model matrices arrive
/// with roundoff, so callers may widen it.
pub const DEFAULT_SHAPE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian (max |m - m†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace:.17} instead of 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("matrix does not have the {family:?} shape (residual {residual:.3e} > {tolerance:.1e})")]
    WrongShape {
        family: StateFamily,
        residual: f64,
        tolerance: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFamily {
    Cs,
    X,
}

/// Result of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateShape {
    Cs,
    X,
    Both,
    Neither,
}

impl StateShape {
    pub fn admits_cs(self) -> bool {
        matches!(self, StateShape::Cs | StateShape::Both)
    }

    pub fn admits_x(self) -> bool {
        matches!(self, StateShape::X | StateShape::Both)
    }
}

/// A validated 4x4 two-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before wrapping.
    pub fn new(m: CMat) -> Result<Self, StateError> {
        assert!(m.rows() == 4 && m.cols() == 4, "density matrix must be 4x4");
        // NaN deviations (from non-finite entries) must fail each gate.
        let deviation = m.hermiticity_deviation();
        if deviation.is_nan() || deviation > DENSITY_TOL {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if trace.is_nan() || (trace - 1.0).abs() > DENSITY_TOL {
            return Err(StateError::TraceNotOne { trace });
        }
        let eig = hermitian_eigen(&m).map_err(|_| StateError::NotHermitian { deviation })?;
        let min_eigenvalue = eig.eigenvalues[0];
        if min_eigenvalue.is_nan() || min_eigenvalue < -DENSITY_TOL {
            return Err(StateError::NotPositive { min_eigenvalue });
        }
        Ok(DensityMatrix { m })
    }

    /// Wraps without validating. For constructions that preserve the
    /// contracts by identity (unitary conjugation, pinching, normalized Gibbs
    /// weights); anything user-facing goes through [`DensityMatrix::new`].
    pub(crate) fn new_unchecked(m: CMat) -> Self {
        debug_assert!(m.rows() == 4 && m.cols() == 4);
        DensityMatrix { m }
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.m)
            .expect("validated state is Hermitian")
            .eigenvalues[0]
    }

    /// Maximally mixed state I/4.
    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m: CMat::identity(4).scale_re(0.25),
        }
    }

    /// |Phi+><Phi+| Bell projector.
    pub fn bell_phi_plus() -> Self {
        DensityMatrix {
            m: CMat::from_real(&[
                &[0.5, 0.0, 0.0, 0.5],
                &[0.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 0.0],
                &[0.5, 0.0, 0.0, 0.5],
            ]),
        }
    }
}

/// Seven real parameters of the CS family: p1 on the corners/diagonal,
/// p2 + i p3 and p4 + i p5 the complex off-diagonals, p6 and p7 the real
/// outer/inner anti-diagonal entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
    pub p6: f64,
    pub p7: f64,
}

impl CsParams {
    pub fn new(p: [f64; 7]) -> Self {
        CsParams {
            p1: p[0],
            p2: p[1],
            p3: p[2],
            p4: p[3],
            p5: p[4],
            p6: p[5],
            p7: p[6],
        }
    }

    pub fn as_array(&self) -> [f64; 7] {
        [self.p1, self.p2, self.p3, self.p4, self.p5, self.p6, self.p7]
    }
}

/// Seven real parameters of the X family: q1, q2, q3 on the diagonal (the
/// fourth diagonal entry is 1 - q1 - q2 - q3), q4 + i q5 the outer
/// anti-diagonal, q6 + i q7 the inner anti-diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XParams {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
    pub q5: f64,
    pub q6: f64,
    pub q7: f64,
}

impl XParams {
    pub fn new(q: [f64; 7]) -> Self {
        XParams {
            q1: q[0],
            q2: q[1],
            q3: q[2],
            q4: q[3],
            q5: q[4],
            q6: q[5],
            q7: q[6],
        }
    }

    pub fn as_array(&self) -> [f64; 7] {
        [self.q1, self.q2, self.q3, self.q4, self.q5, self.q6, self.q7]
    }
}

/// Assembles the CS matrix
///
/// ```text
/// [ p1        p2 + i p3   p4 + i p5   p6        ]
/// [ p2 - i p3  1/2 - p1   p7          p4 - i p5 ]
/// [ p4 - i p5  p7         1/2 - p1    p2 - i p3 ]
/// [ p6        p4 + i p5   p2 + i p3   p1        ]
/// ```
///
/// Hermiticity and unit trace hold by construction; positivity can fail and
/// is reported as an error.
pub fn cs_to_matrix(p: &CsParams) -> Result<DensityMatrix, StateError> {
    let c = |re, im| Complex64::new(re, im);
    let d = 0.5 - p.p1;
    let m = CMat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) | (3, 3) => c(p.p1, 0.0),
        (1, 1) | (2, 2) => c(d, 0.0),
        (0, 1) | (3, 2) => c(p.p2, p.p3),
        (1, 0) | (2, 3) => c(p.p2, -p.p3),
        (0, 2) | (3, 1) => c(p.p4, p.p5),
        (2, 0) | (1, 3) => c(p.p4, -p.p5),
        (0, 3) | (3, 0) => c(p.p6, 0.0),
        (1, 2) | (2, 1) => c(p.p7, 0.0),
        _ => unreachable!(),
    });
    DensityMatrix::new(m)
}

/// Assembles the X matrix
///
/// ```text
/// [ q1         0           0           q4 + i q5 ]
/// [ 0          q2          q6 + i q7   0         ]
/// [ 0          q6 - i q7   q3          0         ]
/// [ q4 - i q5  0           0           1-q1-q2-q3]
/// ```
pub fn x_to_matrix(q: &XParams) -> Result<DensityMatrix, StateError> {
    let c = |re, im| Complex64::new(re, im);
    let q8 = 1.0 - q.q1 - q.q2 - q.q3;
    let m = CMat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) => c(q.q1, 0.0),
        (1, 1) => c(q.q2, 0.0),
        (2, 2) => c(q.q3, 0.0),
        (3, 3) => c(q8, 0.0),
        (0, 3) => c(q.q4, q.q5),
        (3, 0) => c(q.q4, -q.q5),
        (1, 2) => c(q.q6, q.q7),
        (2, 1) => c(q.q6, -q.q7),
        _ => c(0.0, 0.0),
    });
    DensityMatrix::new(m)
}

/// Max deviation from the CS pattern: centrosymmetry m[i][j] = m[3-i][3-j]
/// plus the diagonal constraints m[1][1] = m[2][2] = 1/2 - m[0][0].
pub fn cs_residual(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let mut r: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            r = r.max((m[(i, j)] - m[(3 - i, 3 - j)]).norm());
        }
    }
    let d = Complex64::new(0.5, 0.0) - m[(0, 0)];
    r = r.max((m[(1, 1)] - d).norm());
    r = r.max((m[(2, 2)] - d).norm());
    r
}

/// Max entry modulus over the eight positions the X pattern forces to zero.
pub fn x_residual(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    [(0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (3, 1), (2, 3), (3, 2)]
        .iter()
        .map(|&(i, j)| m[(i, j)].norm())
        .fold(0.0, f64::max)
}

/// Shape classification against the CS and X patterns at the given tolerance.
pub fn classify(rho: &DensityMatrix, tol: f64) -> StateShape {
    let cs = cs_residual(rho) <= tol;
    let x = x_residual(rho) <= tol;
    match (cs, x) {
        (true, true) => StateShape::Both,
        (true, false) => StateShape::Cs,
        (false, true) => StateShape::X,
        (false, false) => StateShape::Neither,
    }
}

/// Reads the seven CS parameters back off a matrix with the CS shape.
///
/// Symmetric entries are averaged so near-CS matrices (roundoff within `tol`)
/// extract cleanly; the round-trip through [`cs_to_matrix`] then reproduces
/// the input to within the shape residual.
pub fn extract_cs_params(rho: &DensityMatrix, tol: f64) -> Result<CsParams, StateError> {
    let residual = cs_residual(rho);
    if residual > tol {
        return Err(StateError::WrongShape {
            family: StateFamily::Cs,
            residual,
            tolerance: tol,
        });
    }
    let m = rho.matrix();
    let off1 = (m[(0, 1)] + m[(3, 2)] + m[(1, 0)].conj() + m[(2, 3)].conj()).scale(0.25);
    let off2 = (m[(0, 2)] + m[(3, 1)] + m[(2, 0)].conj() + m[(1, 3)].conj()).scale(0.25);
    Ok(CsParams {
        p1: 0.5 * (m[(0, 0)].re + m[(3, 3)].re),
        p2: off1.re,
        p3: off1.im,
        p4: off2.re,
        p5: off2.im,
        p6: 0.5 * (m[(0, 3)].re + m[(3, 0)].re),
        p7: 0.5 * (m[(1, 2)].re + m[(2, 1)].re),
    })
}

/// Reads the seven X parameters back off a matrix with the X shape.
pub fn extract_x_params(rho: &DensityMatrix, tol: f64) -> Result<XParams, StateError> {
    let residual = x_residual(rho);
    if residual > tol {
        return Err(StateError::WrongShape {
            family: StateFamily::X,
            residual,
            tolerance: tol,
        });
    }
    let m = rho.matrix();
    let outer = (m[(0, 3)] + m[(3, 0)].conj()).scale(0.5);
    let inner = (m[(1, 2)] + m[(2, 1)].conj()).scale(0.5);
    Ok(XParams {
        q1: m[(0, 0)].re,
        q2: m[(1, 1)].re,
        q3: m[(2, 2)].re,
        q4: outer.re,
        q5: outer.im,
        q6: inner.re,
        q7: inner.im,
    })
}

/// Conjugation by H (x) H. Maps CS states to X states and back; an involution.
pub fn hadamard_conjugate(rho: &DensityMatrix) -> DensityMatrix {
    let u = kron(&hadamard(), &hadamard());
    // Unitary conjugation preserves the density-matrix contracts, so the
    // result is wrapped without re-validation.
    DensityMatrix {
        m: u.mul(rho.matrix()).mul(&u),
    }
}

/// Local Bloch vectors and the 3x3 correlation matrix of a two-qubit state:
/// x_i = tr[rho (sigma_i (x) sigma_0)], y_j = tr[rho (sigma_0 (x) sigma_j)],
/// t_ij = tr[rho (sigma_i (x) sigma_j)].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochForm {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochForm {
    pub fn zero() -> Self {
        BlochForm {
            x: [0.0; 3],
            y: [0.0; 3],
            t: [[0.0; 3]; 3],
        }
    }

    /// ||x||^2 + ||y||^2 + ||T||_F^2, the measurement-invariant part of the
    /// Hilbert-Schmidt weight.
    pub fn total_norm_sq(&self) -> f64 {
        let sq = |v: &[f64; 3]| v.iter().map(|c| c * c).sum::<f64>();
        sq(&self.x) + sq(&self.y) + self.t.iter().map(sq).sum::<f64>()
    }
}

fn pauli_trace(m: &CMat, mu: usize, nu: usize) -> f64 {
    let op = kron(&pauli(mu), &pauli(nu));
    m.mul(&op).trace().re
}

/// Generic trace-formula Bloch decomposition.
pub fn bloch_decompose(rho: &DensityMatrix) -> BlochForm {
    let m = rho.matrix();
    let mut b = BlochForm::zero();
    for i in 0..3 {
        b.x[i] = pauli_trace(m, i + 1, 0);
        b.y[i] = pauli_trace(m, 0, i + 1);
        for j in 0..3 {
            b.t[i][j] = pauli_trace(m, i + 1, j + 1);
        }
    }
    b
}

/// Full 4x4 Pauli expectation matrix R_mu_nu = tr[rho (sigma_mu (x) sigma_nu)].
pub fn pauli_r_matrix(rho: &DensityMatrix) -> [[f64; 4]; 4] {
    let m = rho.matrix();
    let mut r = [[0.0; 4]; 4];
    for (mu, row) in r.iter_mut().enumerate() {
        for (nu, entry) in row.iter_mut().enumerate() {
            *entry = pauli_trace(m, mu, nu);
        }
    }
    r
}

/// Inverse of [`bloch_decompose`]:
/// rho = (1/4) [I + sum x_i s_i0 + sum y_j s_0j + sum t_ij s_ij].
/// The result is Hermitian with unit trace but may violate positivity; the
/// caller validates.
pub fn bloch_compose(b: &BlochForm) -> CMat {
    let mut m = kron(&pauli(0), &pauli(0));
    for i in 0..3 {
        m = m.add(&kron(&pauli(i + 1), &pauli(0)).scale_re(b.x[i]));
        m = m.add(&kron(&pauli(0), &pauli(i + 1)).scale_re(b.y[i]));
        for j in 0..3 {
            m = m.add(&kron(&pauli(i + 1), &pauli(j + 1)).scale_re(b.t[i][j]));
        }
    }
    m.scale_re(0.25)
}

/// One clause of the equivalence conditions, evaluated as published.
#[derive(Clone, Debug)]
pub struct ClauseCheck {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl ClauseCheck {
    fn eval(label: &'static str, lhs: f64, rhs: f64, tol: f64) -> Self {
        ClauseCheck {
            label,
            lhs,
            rhs,
            satisfied: (lhs - rhs).abs() <= tol,
        }
    }
}

/// Outcome of [`check_condition6`]: the five published clauses verbatim, the
/// square-root clause's domain status and alternate branch, and the
/// authoritative generic R-matrix comparison.
#[derive(Clone, Debug)]
pub struct Condition6Report {
    pub clauses: Vec<ClauseCheck>,
    /// 16(p1^2 + p3^2 + p5^2) - 8 p1 + 1; the square-root clause is undefined
    /// when this is negative, which is reported here instead of failing.
    pub radicand: f64,
    pub radicand_negative: bool,
    /// Plus branch of the square-root clause, evaluated when the published
    /// minus branch fails.
    pub alternate_branch: Option<ClauseCheck>,
    pub r_matrices_equal: bool,
    pub max_r_deviation: f64,
    pub tolerance: f64,
}

impl Condition6Report {
    pub fn verbatim_satisfied(&self) -> Vec<bool> {
        self.clauses.iter().map(|c| c.satisfied).collect()
    }

    pub fn all_verbatim_satisfied(&self) -> bool {
        self.clauses.iter().all(|c| c.satisfied)
    }
}

/// Checks the five published equivalence clauses between a CS and an X
/// parameter set, and independently compares the generic R matrices of the
/// two states in a common frame (the X state is pulled back through H (x) H
/// before the entrywise comparison, since the Bloch frame rotates with the
/// conjugation).
pub fn check_condition6(
    p: &CsParams,
    q: &XParams,
    tol: f64,
) -> Result<Condition6Report, StateError> {
    let rho_cs = cs_to_matrix(p)?;
    let rho_x = x_to_matrix(q)?;

    let mut clauses = Vec::with_capacity(5);
    clauses.push(ClauseCheck::eval(
        "|p2| = |2(q1 + q3) - 1| / 4",
        p.p2.abs(),
        (2.0 * (q.q1 + q.q3) - 1.0).abs() / 4.0,
        tol,
    ));
    clauses.push(ClauseCheck::eval(
        "|p4| = |2(q1 + q2) - 1| / 4",
        p.p4.abs(),
        (2.0 * (q.q1 + q.q2) - 1.0).abs() / 4.0,
        tol,
    ));
    clauses.push(ClauseCheck::eval("p7 = q4", p.p7, q.q4, tol));
    clauses.push(ClauseCheck::eval("p6 = q6", p.p6, q.q6, tol));

    let radicand = 16.0 * (p.p1 * p.p1 + p.p3 * p.p3 + p.p5 * p.p5) - 8.0 * p.p1 + 1.0;
    let radicand_negative = radicand < 0.0;
    let mut alternate_branch = None;
    let sqrt_clause = if radicand_negative {
        ClauseCheck {
            label: "q2 + q3 = (1 - sqrt(16(p1^2+p3^2+p5^2) - 8 p1 + 1)) / 2",
            lhs: q.q2 + q.q3,
            rhs: f64::NAN,
            satisfied: false,
        }
    } else {
        let minus = ClauseCheck::eval(
            "q2 + q3 = (1 - sqrt(16(p1^2+p3^2+p5^2) - 8 p1 + 1)) / 2",
            q.q2 + q.q3,
            (1.0 - radicand.sqrt()) / 2.0,
            tol,
        );
        if !minus.satisfied {
            alternate_branch = Some(ClauseCheck::eval(
                "alternate branch: q2 + q3 = (1 + sqrt(...)) / 2",
                q.q2 + q.q3,
                (1.0 + radicand.sqrt()) / 2.0,
                tol,
            ));
        }
        minus
    };
    clauses.push(sqrt_clause);

    let r_cs = pauli_r_matrix(&rho_cs);
    let r_x_aligned = pauli_r_matrix(&hadamard_conjugate(&rho_x));
    let mut max_r_deviation: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            max_r_deviation = max_r_deviation.max((r_cs[mu][nu] - r_x_aligned[mu][nu]).abs());
        }
    }

    Ok(Condition6Report {
        clauses,
        radicand,
        radicand_negative,
        alternate_branch,
        r_matrices_equal: max_r_deviation <= tol,
        max_r_deviation,
        tolerance: tol,
    })
}

/// X parameters of the Hadamard conjugate of a CS state.
pub fn derive_x_from_cs(p: &CsParams) -> Result<XParams, StateError> {
    let rho = cs_to_matrix(p)?;
    extract_x_params(&hadamard_conjugate(&rho), DEFAULT_SHAPE_TOL)
}

/// CS parameters of the Hadamard conjugate of an X state.
pub fn derive_cs_from_x(q: &XParams) -> Result<CsParams, StateError> {
    let rho = x_to_matrix(q)?;
    extract_cs_params(&hadamard_conjugate(&rho), DEFAULT_SHAPE_TOL)
}

/// Conjugates by u (x) v for single-qubit unitaries u, v.
pub fn local_unitary_conjugate(rho: &DensityMatrix, u: &CMat, v: &CMat) -> DensityMatrix {
    debug_assert!(u.mul(&u.adjoint()).sub(&CMat::identity(2)).max_norm() < 1e-10);
    debug_assert!(v.mul(&v.adjoint()).sub(&CMat::identity(2)).max_norm() < 1e-10);
    let w = kron(u, v);
    DensityMatrix::new_unchecked(w.mul(rho.matrix()).mul(&w.adjoint()))
}

/// SU(2) element cos(theta/2) I - i sin(theta/2) (n . sigma) for a random
/// axis n and angle theta.
pub fn random_single_qubit_unitary(rng: &mut impl Rng) -> CMat {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    let axis = [r * azimuth.cos(), r * azimuth.sin(), z];
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (sin_h, cos_h) = (theta / 2.0).sin_cos();
    let mut u = CMat::identity(2).scale(Complex64::new(cos_h, 0.0));
    for (i, component) in axis.iter().enumerate() {
        u = u.add(&pauli(i + 1).scale(Complex64::new(0.0, -sin_h * component)));
    }
    u
}

/// Two f64 standard normals by Box-Muller from a uniform stream.
fn normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    let u1: f64 = loop {
        let u = rng.gen::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    (r * angle.cos(), r * angle.sin())
}

fn ginibre(rng: &mut impl Rng) -> CMat {
    CMat::from_fn(4, 4, |_, _| {
        let (re, im) = normal_pair(rng);
        Complex64::new(re, im)
    })
}

/// Seeded Hilbert-Schmidt-ensemble state G G† / tr(G G†); the same seed gives
/// a bit-identical matrix.
pub fn random_density_matrix(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_matrix_from(&mut rng)
}

/// Same ensemble, drawing from a caller-owned generator.
pub fn random_density_matrix_from(rng: &mut impl Rng) -> DensityMatrix {
    loop {
        let g = ginibre(rng);
        let w = g.mul(&g.adjoint());
        let trace = w.trace().re;
        if trace > 1e-12 {
            return DensityMatrix::new(w.scale_re(1.0 / trace))
                .expect("Wishart construction yields a valid state");
        }
    }
}

/// Rejection sampler for valid CS parameters: p1 in [0, 1/2], the rest in
/// [-1/4, 1/4], kept only when the assembled matrix is positive.
pub fn sample_cs_params(rng: &mut impl Rng) -> CsParams {
    loop {
        let p = CsParams {
            p1: rng.gen_range(0.0..=0.5),
            p2: rng.gen_range(-0.25..=0.25),
            p3: rng.gen_range(-0.25..=0.25),
            p4: rng.gen_range(-0.25..=0.25),
            p5: rng.gen_range(-0.25..=0.25),
            p6: rng.gen_range(-0.25..=0.25),
            p7: rng.gen_range(-0.25..=0.25),
        };
        if cs_to_matrix(&p).is_ok() {
            return p;
        }
    }
}

/// Rejection sampler for valid X parameters: q1, q2, q3 in [0, 1], the
/// anti-diagonal parts in [-1/4, 1/4].
pub fn sample_x_params(rng: &mut impl Rng) -> XParams {
    loop {
        let q = XParams {
            q1: rng.gen_range(0.0..=1.0),
            q2: rng.gen_range(0.0..=1.0),
            q3: rng.gen_range(0.0..=1.0),
            q4: rng.gen_range(-0.25..=0.25),
            q5: rng.gen_range(-0.25..=0.25),
            q6: rng.gen_range(-0.25..=0.25),
            q7: rng.gen_range(-0.25..=0.25),
        };
        if x_to_matrix(&q).is_ok() {
            return q;
        }
    }
}
