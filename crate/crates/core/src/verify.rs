//! Self-verification suite behind the `verify` CLI command: every module
//! invariant exercised on seeded samples, reported as one pass/fail row per
//! check. Deterministic for a fixed seed.

use crate::geodiscord::{
    eq5_distance, geometric_measure, hs_distance_sq, maximize_alternating, maximize_grid, micc,
    objective, MeasurementAxes, Method, OptimizerConfig,
};
use crate::matkit::{herm_exp, hermitian_eigen, kron, CMat};
use crate::models::{
    nanopore_state, oracle_is_centrosymmetric, xxz_dm_hamiltonian, xxz_dm_thermal_oracle,
    NanoporeParams, XxzDmParams,
};
use crate::states::{
    bloch_compose, bloch_decompose, check_condition6, classify, cs_to_matrix, derive_x_from_cs,
    hadamard_conjugate, local_unitary_conjugate, random_density_matrix_from,
    random_single_qubit_unitary, sample_cs_params, sample_x_params, x_residual, x_to_matrix,
    DensityMatrix,
};
use crate::sweep::{emit_csv, run_sweep, Axis, ModelKind, SweepSpec};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Checker {
    samples: usize,
    seed: u64,
    results: Vec<CheckResult>,
}

impl Checker {
    fn run(
        &mut self,
        name: &'static str,
        check: impl FnOnce(&mut ChaCha8Rng, usize) -> (bool, String),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(self.results.len() as u64));
        let (passed, detail) = check(&mut rng, self.samples);
        self.results.push(CheckResult {
            name,
            passed,
            detail,
        });
    }
}

fn random_axes(rng: &mut ChaCha8Rng) -> MeasurementAxes {
    MeasurementAxes {
        k: crate::geodiscord::random_unit_vector(rng),
        l: crate::geodiscord::random_unit_vector(rng),
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    g.add(&g.adjoint()).scale_re(0.5)
}

/// Runs every invariant check on `samples` seeded draws.
pub fn run_all(samples: usize, seed: u64) -> Vec<CheckResult> {
    let mut checker = Checker {
        samples,
        seed,
        results: Vec::new(),
    };

    checker.run("matkit/eigen-reconstruction", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let n = rng.gen_range(2..=4);
            let a = random_hermitian(rng, n);
            let decomp = match hermitian_eigen(&a) {
                Ok(d) => d,
                Err(e) => return (false, format!("eigensolver failed: {e}")),
            };
            worst = worst.max(decomp.recombine(|x| x).sub(&a).max_norm());
            let gram = decomp.eigenvectors.adjoint().mul(&decomp.eigenvectors);
            worst = worst.max(gram.sub(&CMat::identity(n)).max_norm());
        }
        (worst <= 1e-10, format!("max deviation {worst:.3e}"))
    });

    checker.run("matkit/herm-exp-identities", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let n = rng.gen_range(2..=4);
            let a = random_hermitian(rng, n);
            let s = rng.gen_range(-2.0..2.0);
            let plus = herm_exp(&a, s).unwrap();
            let minus = herm_exp(&a, -s).unwrap();
            worst = worst.max(plus.mul(&minus).sub(&CMat::identity(n)).max_norm());
            let spectral: f64 = hermitian_eigen(&a)
                .unwrap()
                .eigenvalues
                .iter()
                .map(|l| (s * l).exp())
                .sum();
            worst = worst.max((plus.trace().re - spectral).abs());
        }
        (worst <= 1e-9, format!("max deviation {worst:.3e}"))
    });

    checker.run("matkit/kron-bilinearity", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let rand2 = |rng: &mut ChaCha8Rng| {
                CMat::from_fn(2, 2, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            };
            let (a, b, c) = (rand2(rng), rand2(rng), rand2(rng));
            let lhs = kron(&a.add(&b), &c);
            let rhs = kron(&a, &c).add(&kron(&b, &c));
            worst = worst.max(lhs.sub(&rhs).max_norm());
        }
        (worst <= 1e-12, format!("max deviation {worst:.3e}"))
    });

    checker.run("states/hadamard-involution", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let rho = random_density_matrix_from(rng);
            let twice = hadamard_conjugate(&hadamard_conjugate(&rho));
            worst = worst.max(twice.matrix().sub(rho.matrix()).max_norm());
        }
        (worst <= 1e-13, format!("max deviation {worst:.3e}"))
    });

    checker.run("states/cs-x-conversion", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let p = sample_cs_params(rng);
            let conj = hadamard_conjugate(&cs_to_matrix(&p).unwrap());
            worst = worst.max(x_residual(&conj));
            if !classify(&conj, 1e-9).admits_x() {
                return (false, "conjugate of a CS state not classified X".to_string());
            }
            let q = sample_x_params(rng);
            let back = hadamard_conjugate(&x_to_matrix(&q).unwrap());
            if !classify(&back, 1e-9).admits_cs() {
                return (false, "conjugate of an X state not classified CS".to_string());
            }
        }
        (worst <= 1e-10, format!("max X-pattern residual {worst:.3e}"))
    });

    checker.run("states/bloch-round-trip", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let rho = random_density_matrix_from(rng);
            let recomposed = bloch_compose(&bloch_decompose(&rho));
            worst = worst.max(recomposed.sub(rho.matrix()).max_norm());
        }
        (worst <= 1e-12, format!("max deviation {worst:.3e}"))
    });

    checker.run("states/correlation-patterns", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let p = sample_cs_params(rng);
            let b = bloch_decompose(&cs_to_matrix(&p).unwrap());
            for (have, want) in [
                (b.y[0], 4.0 * p.p2),
                (b.x[0], 4.0 * p.p4),
                (b.t[0][0], 2.0 * (p.p6 + p.p7)),
                (b.t[1][1], 2.0 * (p.p7 - p.p6)),
                (b.t[1][2], -4.0 * p.p5),
                (b.t[2][1], -4.0 * p.p3),
                (b.t[2][2], 4.0 * p.p1 - 1.0),
            ] {
                worst = worst.max((have - want).abs());
            }
            let q = sample_x_params(rng);
            let b = bloch_decompose(&x_to_matrix(&q).unwrap());
            for (have, want) in [
                (b.y[2], 2.0 * (q.q1 + q.q3) - 1.0),
                (b.x[2], 2.0 * (q.q1 + q.q2) - 1.0),
                (b.t[0][0], 2.0 * (q.q6 + q.q4)),
                (b.t[1][1], 2.0 * (q.q6 - q.q4)),
                (b.t[2][2], 1.0 - 2.0 * (q.q2 + q.q3)),
            ] {
                worst = worst.max((have - want).abs());
            }
        }
        (worst <= 1e-12, format!("max deviation {worst:.3e}"))
    });

    checker.run("states/extraction-round-trip", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let p = sample_cs_params(rng);
            let q = derive_x_from_cs(&p).unwrap();
            let back = crate::states::derive_cs_from_x(&q).unwrap();
            for (a, b) in p.as_array().iter().zip(back.as_array()) {
                worst = worst.max((a - b).abs());
            }
        }
        (worst <= 1e-12, format!("max deviation {worst:.3e}"))
    });

    checker.run("states/condition6-r-equality", |rng, samples| {
        let mut worst: f64 = 0.0;
        let mut verbatim_passes = 0usize;
        for _ in 0..samples {
            let p = sample_cs_params(rng);
            let q = derive_x_from_cs(&p).unwrap();
            let report = check_condition6(&p, &q, 1e-10).unwrap();
            worst = worst.max(report.max_r_deviation);
            if !report.r_matrices_equal {
                return (
                    false,
                    format!("R mismatch {:.3e} on a derived pair", report.max_r_deviation),
                );
            }
            if report.all_verbatim_satisfied() {
                verbatim_passes += 1;
            }
        }
        (
            true,
            format!(
                "max R deviation {worst:.3e}; verbatim clauses all-pass on {verbatim_passes}/{samples}"
            ),
        )
    });

    checker.run("geodiscord/eq5-identity", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let rho = random_density_matrix_from(rng);
            let axes = random_axes(rng);
            let via_form = eq5_distance(&bloch_decompose(&rho), &axes);
            let direct = hs_distance_sq(&rho, &micc(&rho, &axes));
            worst = worst.max((via_form - direct).abs());
        }
        (worst <= 1e-12, format!("max deviation {worst:.3e}"))
    });

    checker.run("geodiscord/flip-symmetry", |rng, samples| {
        for _ in 0..samples {
            let b = bloch_decompose(&random_density_matrix_from(rng));
            let axes = random_axes(rng);
            let reference = objective(&b, &axes);
            let neg = |v: [f64; 3]| [-v[0], -v[1], -v[2]];
            let k_flip = MeasurementAxes { k: neg(axes.k), l: axes.l };
            let l_flip = MeasurementAxes { k: axes.k, l: neg(axes.l) };
            if objective(&b, &k_flip) != reference || objective(&b, &l_flip) != reference {
                return (false, "sign flip changed the objective".to_string());
            }
        }
        (true, "exact under k -> -k and l -> -l".to_string())
    });

    checker.run("geodiscord/monotone-ascent-optimality", |rng, samples| {
        let cfg = OptimizerConfig::default();
        let mut worst_slack: f64 = f64::NEG_INFINITY;
        for _ in 0..samples {
            let b = bloch_decompose(&random_density_matrix_from(rng));
            let result = maximize_alternating(&b, &cfg);
            if result.ascent_violation != 0.0 {
                return (
                    false,
                    format!("ascent decreased by {:.3e}", result.ascent_violation),
                );
            }
            let achieved = objective(&b, &result.axes);
            for _ in 0..1000 {
                let probe = random_axes(rng);
                worst_slack = worst_slack.max(objective(&b, &probe) - achieved);
            }
        }
        (
            worst_slack <= 1e-9,
            format!("worst probe advantage {worst_slack:.3e}"),
        )
    });

    checker.run("geodiscord/known-values", |_, _| {
        let mixed = geometric_measure(&DensityMatrix::maximally_mixed(), Method::Alternating).g;
        let bell = geometric_measure(&DensityMatrix::bell_phi_plus(), Method::Alternating).g;
        let bell_grid = geometric_measure(&DensityMatrix::bell_phi_plus(), Method::Grid).g;
        let passed = mixed <= 1e-12 && (bell - 0.5).abs() <= 1e-9 && (bell_grid - 0.5).abs() <= 1e-9;
        (
            passed,
            format!("G(I/4) = {mixed:.3e}, G(Bell) = {bell:.12}, grid {bell_grid:.12}"),
        )
    });

    checker.run("geodiscord/local-unitary-invariance", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let rho = random_density_matrix_from(rng);
            let u = random_single_qubit_unitary(rng);
            let v = random_single_qubit_unitary(rng);
            let rotated = local_unitary_conjugate(&rho, &u, &v);
            let g = geometric_measure(&rho, Method::Alternating).g;
            let g_rotated = geometric_measure(&rotated, Method::Alternating).g;
            worst = worst.max((g - g_rotated).abs());
        }
        (worst <= 1e-8, format!("max |G - G'| = {worst:.3e}"))
    });

    checker.run("geodiscord/classical-states-zero", |rng, samples| {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let a: f64 = rng.gen_range(0.0..=1.0);
            let b: f64 = rng.gen_range(0.0..=1.0);
            let m = CMat::from_fn(4, 4, |i, j| {
                if i != j {
                    return Complex64::new(0.0, 0.0);
                }
                let pa = if i / 2 == 0 { a } else { 1.0 - a };
                let pb = if i % 2 == 0 { b } else { 1.0 - b };
                Complex64::new(pa * pb, 0.0)
            });
            let rho = DensityMatrix::new(m).unwrap();
            worst = worst.max(geometric_measure(&rho, Method::Alternating).g);
        }
        (worst <= 1e-10, format!("max G {worst:.3e}"))
    });

    checker.run("geodiscord/grid-vs-alternating", |rng, samples| {
        let cfg = OptimizerConfig::default();
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let b = bloch_decompose(&random_density_matrix_from(rng));
            let grid = maximize_grid(&b, 64);
            let alternating = maximize_alternating(&b, &cfg);
            worst = worst.max((grid.lambda_max - alternating.lambda_max).abs());
        }
        (worst <= 1e-6, format!("max gap {worst:.3e}"))
    });

    checker.run("models/nanopore-suite", |rng, samples| {
        let frozen = nanopore_state(&NanoporeParams::new(0.0, 100, 0.001, 5.0).unwrap()).unwrap();
        if frozen
            .matrix()
            .sub(DensityMatrix::maximally_mixed().matrix())
            .max_norm()
            != 0.0
        {
            return (false, "beta = 0 did not give I/4 exactly".to_string());
        }
        if geometric_measure(&frozen, Method::Alternating).g != 0.0 {
            return (false, "G(I/4) not exactly zero".to_string());
        }
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let beta = rng.gen_range(0.0..3.0);
            let coupling = rng.gen_range(0.001..1.0);
            let t = rng.gen_range(0.0..10.0);
            let params = NanoporeParams::new(beta, 100, coupling, t).unwrap();
            let rho = match nanopore_state(&params) {
                Ok(rho) => rho,
                Err(e) => return (false, format!("state generation failed: {e}")),
            };
            if !classify(&rho, 1e-10).admits_cs() {
                return (false, "nanopore state not CS".to_string());
            }
            let period = 2.0 * std::f64::consts::PI / params.a();
            let shifted =
                nanopore_state(&NanoporeParams::new(beta, 100, coupling, t + period).unwrap())
                    .unwrap();
            worst = worst.max(rho.matrix().sub(shifted.matrix()).max_norm());
        }
        (worst <= 1e-10, format!("max periodicity deviation {worst:.3e}"))
    });

    checker.run("models/thermal-oracle", |rng, samples| {
        let mut worst_commutator: f64 = 0.0;
        for _ in 0..samples {
            let params = XxzDmParams::new(
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(0.05..10.0),
            )
            .unwrap();
            let rho = xxz_dm_thermal_oracle(&params);
            let h = xxz_dm_hamiltonian(&params);
            let commutator = rho.matrix().mul(&h).sub(&h.mul(rho.matrix()));
            worst_commutator = worst_commutator.max(commutator.max_norm());
            if !oracle_is_centrosymmetric(&params) {
                return (false, "oracle state not centrosymmetric".to_string());
            }
        }
        let tail = geometric_measure(
            &xxz_dm_thermal_oracle(&XxzDmParams::new(1.0, 0.0, 1.0, 50.0).unwrap()),
            Method::Alternating,
        )
        .g;
        (
            worst_commutator <= 1e-10 && tail < 1e-3,
            format!("max |[rho, H]| = {worst_commutator:.3e}, G(T=50) = {tail:.3e}"),
        )
    });

    checker.run("sweep/parallel-determinism", |_, _| {
        let spec = SweepSpec {
            model: ModelKind::XxzDm,
            fixed: BTreeMap::from([
                ("j".to_string(), 1.0),
                ("jz".to_string(), 0.0),
                ("dx".to_string(), 1.0),
            ]),
            axes: vec![Axis::uniform("temp", 0.5, 5.0, 12)],
            method: Method::Alternating,
            jobs: 1,
        };
        let serial = run_sweep(&spec).unwrap();
        let parallel = run_sweep(&SweepSpec { jobs: 8, ..spec.clone() }).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_csv(&serial, &mut a).unwrap();
        emit_csv(&parallel, &mut b).unwrap();
        (a == b, format!("{} bytes, jobs 1 vs 8 identical: {}", a.len(), a == b))
    });

    checker.results
}
