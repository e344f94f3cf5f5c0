//! Dense complex-matrix kernel for the 2x2, 3x3 and 4x4 matrices this crate
//! works with: products, adjoints, traces, norms, Kronecker products, and a
//! Jacobi-based Hermitian eigendecomposition with the matrix exponential on
//! top of it.

use num_complex::Complex64;
use thiserror::Error;

/// Largest matrix dimension the kernel supports.
pub const MAX_DIM: usize = 4;

/// Hermiticity tolerance accepted by [`hermitian_eigen`] (max-norm of `a - a†`).
pub const HERMITICITY_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix is not Hermitian (max |a - a†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi diagonalization did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
}

/// Small dense complex matrix, row-major, dimensions fixed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&rows) && (1..=MAX_DIM).contains(&cols),
            "dimensions must be in 1..={}",
            MAX_DIM
        );
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a square matrix from rows of `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == rows[0].len()));
        let cols = rows[0].len();
        CMat::from_fn(n, cols, |i, j| Complex64::new(rows[i][j].0, rows[i][j].1))
    }

    /// Builds a square matrix from real entries.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let cols = rows[0].len();
        CMat::from_fn(n, cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Max-norm: largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm of `a - a†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// sigma_0 .. sigma_3: identity plus the three Pauli matrices.
pub fn pauli(mu: usize) -> CMat {
    match mu {
        0 => CMat::identity(2),
        1 => CMat::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]]),
        2 => CMat::from_rows(&[vec![(0.0, 0.0), (0.0, -1.0)], vec![(0.0, 1.0), (0.0, 0.0)]]),
        3 => CMat::from_rows(&[vec![(1.0, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (-1.0, 0.0)]]),
        _ => panic!("Pauli index must be 0..=3"),
    }
}

/// Single-qubit Hadamard matrix (1/sqrt(2)) [[1, 1], [1, -1]].
pub fn hadamard() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_real(&[&[h, h], &[h, -h]])
}

/// Kronecker product of two 2x2 matrices.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    assert!(
        a.rows() == 2 && a.cols() == 2 && b.rows() == 2 && b.cols() == 2,
        "kron takes 2x2 factors"
    );
    CMat::from_fn(4, 4, |i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl EigenDecomp {
    /// Column `j` of the eigenvector matrix.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors[(i, j)])
            .collect()
    }

    /// V diag(f(lambda_i)) V†.
    pub fn recombine(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        CMat::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * f(self.eigenvalues[k]) * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigen(a: &CMat) -> Result<EigenDecomp, MatError> {
    assert!(a.is_square());
    let deviation = a.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(MatError::NotHermitian { deviation });
    }
    let n = a.rows();
    // Work on the exactly Hermitian average so roundoff in the input cannot
    // leak into the rotations.
    let mut m = CMat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = CMat::identity(n);
    let threshold = JACOBI_REL_THRESHOLD * m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            return Ok(sorted_decomposition(&m, v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }
    let off_diagonal = off_diagonal_norm(&m);
    if off_diagonal <= threshold {
        return Ok(sorted_decomposition(&m, v));
    }
    Err(MatError::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
        off_diagonal,
    })
}

fn off_diagonal_norm(m: &CMat) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += m[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating m[(p, q)].
///
/// The rotation is U = I except U[p][p] = c, U[p][q] = -s e^{i phi},
/// U[q][p] = s e^{-i phi}, U[q][q] = c, where m[(p, q)] = b e^{i phi};
/// m <- U† m U and v <- v U.
fn jacobi_rotate(m: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = m[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b;
    let alpha = m[(p, p)].re;
    let gamma = m[(q, q)].re;

    let theta = (gamma - alpha) / (2.0 * b);
    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
    let t = -sign / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.rows();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        // Columns p and q of row r.
        let mrp = m[(r, p)];
        let mrq = m[(r, q)];
        m[(r, p)] = mrp * c + mrq * s * phase.conj();
        m[(r, q)] = mrq * c - mrp * s * phase;
        // Rows p and q keep Hermiticity exactly.
        m[(p, r)] = m[(r, p)].conj();
        m[(q, r)] = m[(r, q)].conj();
    }
    let new_alpha = alpha * c * c + 2.0 * b * s * c + gamma * s * s;
    let new_gamma = alpha * s * s - 2.0 * b * s * c + gamma * c * c;
    m[(p, p)] = Complex64::new(new_alpha, 0.0);
    m[(q, q)] = Complex64::new(new_gamma, 0.0);
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * c + vrq * s * phase.conj();
        v[(r, q)] = vrq * c - vrp * s * phase;
    }
}

fn sorted_decomposition(m: &CMat, v: CMat) -> EigenDecomp {
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    EigenDecomp {
        eigenvalues,
        eigenvectors,
    }
}

/// Hermitian matrix exponential: V diag(e^{s lambda_i}) V†.
pub fn herm_exp(a: &CMat, s: f64) -> Result<CMat, MatError> {
    let decomp = hermitian_eigen(a)?;
    Ok(decomp.recombine(|lambda| (s * lambda).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        let g = CMat::from_fn(n, n, |_, _| random_complex(rng));
        g.add(&g.adjoint()).scale_re(0.5)
    }

    #[test]
    fn kron_identity_is_identity() {
        let id = kron(&pauli(0), &pauli(0));
        assert_eq!(id.sub(&CMat::identity(4)).max_norm(), 0.0);
    }

    #[test]
    fn kron_sigma_z_pair_is_diagonal() {
        let zz = kron(&pauli(3), &pauli(3));
        let expected = CMat::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(zz.sub(&expected).max_norm(), 0.0);
    }

    #[test]
    fn kron_hadamard_pair_matches_direct_expansion() {
        // Direct 4x4 expansion of H (x) H: every entry +-1/2, first row all +1/2.
        let hh = kron(&hadamard(), &hadamard());
        let expected = CMat::from_real(&[
            &[0.5, 0.5, 0.5, 0.5],
            &[0.5, -0.5, 0.5, -0.5],
            &[0.5, 0.5, -0.5, -0.5],
            &[0.5, -0.5, -0.5, 0.5],
        ]);
        assert!(hh.sub(&expected).max_norm() < 1e-15);
    }

    #[test]
    fn kron_is_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = CMat::from_fn(2, 2, |_, _| random_complex(&mut rng));
            let b = CMat::from_fn(2, 2, |_, _| random_complex(&mut rng));
            let c = CMat::from_fn(2, 2, |_, _| random_complex(&mut rng));
            let lhs = kron(&a.add(&b), &c);
            let rhs = kron(&a, &c).add(&kron(&b, &c));
            assert!(lhs.sub(&rhs).max_norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_identity() {
        let decomp = hermitian_eigen(&CMat::identity(4)).unwrap();
        for lambda in &decomp.eigenvalues {
            assert!((lambda - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_sigma_x() {
        let decomp = hermitian_eigen(&pauli(1)).unwrap();
        assert!((decomp.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((decomp.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_bell_projector() {
        // |Phi+><Phi+| has spectrum (0, 0, 0, 1).
        let bell = CMat::from_real(&[
            &[0.5, 0.0, 0.0, 0.5],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.5, 0.0, 0.0, 0.5],
        ]);
        let decomp = hermitian_eigen(&bell).unwrap();
        for lambda in &decomp.eigenvalues[..3] {
            assert!(lambda.abs() < 1e-14);
        }
        assert!((decomp.eigenvalues[3] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = CMat::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(0.0, 0.0), (0.0, 0.0)]]);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(MatError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let a = random_hermitian(&mut rng, n);
            let decomp = hermitian_eigen(&a).unwrap();
            let reconstructed = decomp.recombine(|x| x);
            assert!(reconstructed.sub(&a).max_norm() < 1e-10);
            // Eigenvector Gram matrix is the identity.
            let gram = decomp.eigenvectors.adjoint().mul(&decomp.eigenvectors);
            assert!(gram.sub(&CMat::identity(n)).max_norm() < 1e-10);
            // Ascending order and A v = lambda v per column.
            for j in 0..n {
                if j > 0 {
                    assert!(decomp.eigenvalues[j] >= decomp.eigenvalues[j - 1]);
                }
                let v = decomp.eigenvector(j);
                for i in 0..n {
                    let av: Complex64 = (0..n).map(|k| a[(i, k)] * v[k]).sum();
                    assert!((av - v[i] * decomp.eigenvalues[j]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn herm_exp_zero_scale_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(&mut rng, 4);
        let e = herm_exp(&a, 0.0).unwrap();
        assert!(e.sub(&CMat::identity(4)).max_norm() < 1e-12);
    }

    #[test]
    fn herm_exp_diagonal_case() {
        let a = CMat::from_real(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let e = herm_exp(&a, 1.0).unwrap();
        assert!((e[(0, 0)].re - 1f64.exp()).abs() < 1e-12);
        assert!((e[(1, 1)].re - 2f64.exp()).abs() < 1e-11);
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn herm_exp_sigma_x_matches_cosh_sinh() {
        // e^{-sigma_x} = cosh(1) I - sinh(1) sigma_x.
        let e = herm_exp(&pauli(1), -1.0).unwrap();
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        assert!((e[(0, 0)].re - ch).abs() < 1e-12);
        assert!((e[(1, 1)].re - ch).abs() < 1e-12);
        assert!((e[(0, 1)].re + sh).abs() < 1e-12);
        assert!((e[(1, 0)].re + sh).abs() < 1e-12);
        assert!((ch - 1.543080634815244).abs() < 1e-12);
        assert!((sh - 1.1752011936438014).abs() < 1e-12);
    }

    #[test]
    fn herm_exp_inverse_and_trace_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let n = rng.gen_range(2..=4);
            let a = random_hermitian(&mut rng, n);
            let s = rng.gen_range(-2.0..2.0);
            let e_plus = herm_exp(&a, s).unwrap();
            let e_minus = herm_exp(&a, -s).unwrap();
            assert!(e_plus.mul(&e_minus).sub(&CMat::identity(n)).max_norm() < 1e-9);
            assert!(e_plus.hermiticity_deviation() < 1e-10);

            let decomp = hermitian_eigen(&a).unwrap();
            let trace_direct: f64 = decomp.eigenvalues.iter().map(|l| (s * l).exp()).sum();
            assert!((e_plus.trace().re - trace_direct).abs() < 1e-10);
        }
    }
}
