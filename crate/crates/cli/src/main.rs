//! Command-line front-end: state-file analysis, CS/X conversion with the
//! equivalence-condition report, model state generation, parameter sweeps and
//! the self-verification suite. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use clap::{Parser, Subcommand, ValueEnum};
use gqd::geodiscord::{geometric_measure, GResult, Method};
use gqd::models::{
    nanopore_state, xxz_dm_closed_vs_oracle, xxz_dm_thermal_closed, xxz_dm_thermal_oracle,
    NanoporeParams, XxzDmParams,
};
use gqd::qst::{format_cs, format_matrix, format_x, parse_state, ParsedState};
use gqd::states::{
    bloch_decompose, check_condition6, classify, derive_cs_from_x, derive_x_from_cs,
    extract_cs_params, extract_x_params, Condition6Report, CsParams, DensityMatrix, XParams,
    DEFAULT_SHAPE_TOL,
};
use gqd::sweep::{emit_csv, parse_sweep_file, run_sweep, ModelKind};
use gqd::verify::run_all;
use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gqd", version, about = "Geometric measure of quantum discord for two-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Alternating,
    Grid,
}

impl From<MethodArg> for Method {
    fn from(value: MethodArg) -> Method {
        match value {
            MethodArg::Alternating => Method::Alternating,
            MethodArg::Grid => Method::Grid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cs,
    X,
}

#[derive(Subcommand)]
enum Command {
    /// Print G, lambda_max, the optimal axes, the Bloch form and the shape
    /// classification of a qst1 state file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "alternating")]
        method: MethodArg,
    },
    /// Hadamard-convert a state between the CS and X families and print the
    /// derived parameters with the full condition report.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: FamilyArg,
    },
    /// Generate a model state in qst1 format.
    Model {
        #[command(subcommand)]
        model: ModelCommand,
    },
    /// Run a parameter sweep from a spec file and write the CSV table.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the jobs value from the spec file.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the invariant suite and print one pass/fail row per check.
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Spin pair in a nanopore at inverse temperature beta after free
    /// evolution for the given time.
    Nanopore {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        coupling: f64,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        analyze: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thermal two-qubit XXZ chain with a DM term.
    XxzDm {
        #[arg(long)]
        j: f64,
        #[arg(long)]
        jz: f64,
        #[arg(long)]
        dx: f64,
        #[arg(long)]
        temp: f64,
        /// Use the matrix-exponential route (the default).
        #[arg(long, conflicts_with = "closed")]
        oracle: bool,
        /// Use the published closed-form matrix instead; also prints its
        /// deviation from the matrix-exponential route.
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        analyze: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// 6-digit summary with the exact value alongside.
fn show(v: f64) -> String {
    format!("{v:.6} ({v:.16e})")
}

fn vec3(v: &[f64; 3]) -> String {
    format!("({:.6}, {:.6}, {:.6})", v[0], v[1], v[2])
}

fn print_analysis(rho: &DensityMatrix, method: Method) {
    let b = bloch_decompose(rho);
    let result: GResult = geometric_measure(rho, method);
    println!("classification: {:?}", classify(rho, DEFAULT_SHAPE_TOL));
    println!("bloch x = {}", vec3(&b.x));
    println!("bloch y = {}", vec3(&b.y));
    for (i, row) in b.t.iter().enumerate() {
        println!("T row {} = {}", i + 1, vec3(row));
    }
    println!("total |x|^2+|y|^2+|T|^2 = {}", show(result.total));
    println!("lambda_max = {}", show(result.opt.lambda_max));
    println!("G = {}", show(result.g));
    println!("axes k = {}", vec3(&result.opt.axes.k));
    println!("axes l = {}", vec3(&result.opt.axes.l));
    println!(
        "iterations = {}, converged = {}, restarts = {}",
        result.opt.iterations, result.opt.converged, result.opt.restarts_used
    );
}

fn print_condition_report(report: &Condition6Report) {
    println!("condition report (tolerance {:.1e}):", report.tolerance);
    for clause in &report.clauses {
        let mark = if clause.satisfied { "ok  " } else { "FAIL" };
        println!(
            "  [{mark}] {:<55} lhs {:.6e}  rhs {:.6e}",
            clause.label, clause.lhs, clause.rhs
        );
    }
    if report.radicand_negative {
        println!(
            "  domain error: radicand {:.6e} is negative, square-root clause undefined",
            report.radicand
        );
    }
    if let Some(alt) = &report.alternate_branch {
        let mark = if alt.satisfied { "ok  " } else { "FAIL" };
        println!(
            "  [{mark}] {:<55} lhs {:.6e}  rhs {:.6e}",
            alt.label, alt.lhs, alt.rhs
        );
    }
    println!(
        "  generic R comparison (frame-aligned): max deviation {:.6e} -> {}",
        report.max_r_deviation,
        if report.r_matrices_equal {
            "equal"
        } else {
            "DIFFERENT"
        }
    );
}

fn load_state(path: &Path) -> Result<ParsedState, Box<dyn Error>> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(parse_state(&text)?)
}

fn write_or_print(target: &Option<PathBuf>, content: &str) -> Result<(), Box<dyn Error>> {
    match target {
        Some(path) => {
            fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, Box<dyn Error>> {
    match command {
        Command::Analyze { input, method } => {
            let parsed = load_state(&input)?;
            let rho = parsed.to_density()?;
            println!("state: {} (kind {})", input.display(), parsed.kind());
            print_analysis(&rho, method.into());
            Ok(ExitCode::SUCCESS)
        }

        Command::Convert { input, to } => {
            let parsed = load_state(&input)?;
            let rho = parsed.to_density()?;
            match to {
                FamilyArg::X => {
                    let p = match parsed {
                        ParsedState::Cs(p) => p,
                        _ => extract_cs_params(&rho, DEFAULT_SHAPE_TOL)?,
                    };
                    let q: XParams = derive_x_from_cs(&p)?;
                    println!("derived X parameters:");
                    print!("{}", format_x(&q));
                    let report = check_condition6(&p, &q, 1e-10)?;
                    print_condition_report(&report);
                }
                FamilyArg::Cs => {
                    let q = match parsed {
                        ParsedState::X(q) => q,
                        _ => extract_x_params(&rho, DEFAULT_SHAPE_TOL)?,
                    };
                    let p: CsParams = derive_cs_from_x(&q)?;
                    println!("derived CS parameters:");
                    print!("{}", format_cs(&p));
                    let report = check_condition6(&p, &q, 1e-10)?;
                    print_condition_report(&report);
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Model { model } => {
            match model {
                ModelCommand::Nanopore {
                    beta,
                    n,
                    coupling,
                    time,
                    analyze,
                    out,
                } => {
                    let params = NanoporeParams::new(beta, n, coupling, time)?;
                    let rho = nanopore_state(&params)?;
                    write_or_print(&out, &format_matrix(&rho))?;
                    if analyze {
                        print_analysis(&rho, Method::Alternating);
                    }
                }
                ModelCommand::XxzDm {
                    j,
                    jz,
                    dx,
                    temp,
                    oracle: _,
                    closed,
                    analyze,
                    out,
                } => {
                    let params = XxzDmParams::new(j, jz, dx, temp)?;
                    let rho = if closed {
                        let comparison = xxz_dm_closed_vs_oracle(&params);
                        if let Some(dev) = comparison.max_abs_deviation {
                            eprintln!("closed form vs matrix exponential: max deviation {dev:.6e}");
                        }
                        xxz_dm_thermal_closed(&params)?
                    } else {
                        xxz_dm_thermal_oracle(&params)
                    };
                    write_or_print(&out, &format_matrix(&rho))?;
                    if analyze {
                        print_analysis(&rho, Method::Alternating);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep { spec, out, jobs } => {
            let text = fs::read_to_string(&spec)
                .map_err(|e| format!("cannot read {}: {e}", spec.display()))?;
            let file = parse_sweep_file(&text)?;
            let mut sweep_spec = if file.model == "file" {
                let rel = file.path.clone().ok_or("model 'file' needs a 'path' key")?;
                let base_path = if Path::new(&rel).is_absolute() {
                    PathBuf::from(&rel)
                } else {
                    spec.parent().unwrap_or(Path::new(".")).join(&rel)
                };
                let base = match load_state(&base_path)? {
                    ParsedState::Cs(p) => ModelKind::CsFamily(p),
                    ParsedState::X(q) => ModelKind::XFamily(q),
                    ParsedState::Matrix(_) => {
                        return Err("model 'file' needs a cs- or x-kind base state".into())
                    }
                };
                file.into_spec_with_base(base)?
            } else {
                file.into_spec()?
            };
            if let Some(jobs) = jobs {
                sweep_spec.jobs = jobs;
            }
            let table = run_sweep(&sweep_spec)?;
            let mut buffer = Vec::new();
            emit_csv(&table, &mut buffer)?;
            fs::write(&out, &buffer)
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            let invalid = table.rows.iter().filter(|r| r.result.is_none()).count();
            println!(
                "wrote {} rows ({} invalid) to {}",
                table.rows.len(),
                invalid,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { samples, seed } => {
            let results = run_all(samples, seed);
            let mut all_passed = true;
            println!("{:<42} {:6}  detail", "check", "status");
            for result in &results {
                all_passed &= result.passed;
                println!(
                    "{:<42} {:6}  {}",
                    result.name,
                    if result.passed { "pass" } else { "FAIL" },
                    result.detail
                );
            }
            println!(
                "{} of {} checks passed (samples = {samples}, seed = {seed})",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            );
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
