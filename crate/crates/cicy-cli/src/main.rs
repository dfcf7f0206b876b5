//! `cicy` — certificates for rational curves on Calabi-Yau complete
//! intersections.
//!
//! Subcommands: `certify` (rank story for one witness), `splitting` (bundle
//! analysis), `profile` (kernel-dimension ladder), `lemmas` (structured
//! matrix fuzzing), `deform` (Newton continuation appended to an existing
//! certificate). Every run writes a JSON certificate; the exit code is the
//! machine-readable verdict (see `error.rs` for the contract).

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{ArgAction, Args, Parser, Subcommand};

use cicy_core::ci::{CicyType, PointSharing};
use cicy_core::primes::DEFAULT_PRIME;
use cicy_core::scalar::ScalarCtx;
use cicy_core::witness::WitnessMode;

use cicy_cli::deform::{run_deform, DeformSpec};
use cicy_cli::error::CliError;
use cicy_cli::lemmas::{run_lemmas, LemmaId, LemmaSpec};
use cicy_cli::numbers::parse_rational;
use cicy_cli::output::{resolve_out_path, write_certificate};
use cicy_cli::runs::{run_certify, run_profile, run_splitting, GeometrySpec};
use cicy_cli::schema::Certificate;

#[derive(Parser)]
#[command(
    name = "cicy",
    version,
    about = "Exact certificates for rational curves on complete-intersection Calabi-Yau 3-folds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify full rank of the incidence Jacobian for witness curves.
    Certify(GeometryArgs),
    /// Splitting types, immersion defect, and normal-bundle verdict.
    Splitting(GeometryArgs),
    /// Kernel-dimension ladder across levels, checked against row counts.
    Profile(GeometryArgs),
    /// Fuzz one structured-matrix validator with random instances.
    Lemmas(LemmaArgs),
    /// Append a Newton continuation trace to an existing certificate.
    Deform(DeformArgs),
}

#[derive(Args)]
struct GeometryArgs {
    /// Family label as comma-joined hypersurface degrees, e.g. "3,2,2".
    /// Repeat the flag to fan out over several families.
    #[arg(long = "type", value_name = "H1,H2,..", required = true, action = ArgAction::Append)]
    types: Vec<String>,
    /// Curve degree; repeat the flag to fan out over several degrees.
    #[arg(long, required = true, action = ArgAction::Append)]
    degree: Vec<usize>,
    /// Witness construction: "paper" (structured, reproducible by hand) or
    /// "random". Default: paper where available, random otherwise.
    #[arg(long)]
    mode: Option<String>,
    /// Seed for all randomized draws; repeat the flag to fan out.
    #[arg(long, action = ArgAction::Append)]
    seed: Vec<u64>,
    /// Prime modulus for the scalar field (default: the published 62-bit
    /// prime 2305843009213693967).
    #[arg(long, conflicts_with = "rational")]
    prime: Option<u64>,
    /// Compute over arbitrary-precision rationals instead of a prime field.
    #[arg(long)]
    rational: bool,
    /// Let hypersurfaces of equal marked-point count share one point group.
    #[arg(long)]
    shared_points: bool,
    /// Output file (single run only). Default: CICY_OUT_DIR or "." plus a
    /// deterministic name.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for fanned-out runs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct LemmaArgs {
    /// Validator id: two-band, three-band, split-identity, grid-2x6,
    /// grid-3x7, grid-4x4.
    #[arg(long)]
    lemma: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Degree parameter of the shape (block size for grid-4x4).
    #[arg(long, default_value_t = 1)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, conflicts_with = "rational")]
    prime: Option<u64>,
    #[arg(long)]
    rational: bool,
    /// Also verify the determinant identity over the full symbolic point
    /// grid (split-identity only; exponential in the degree, fine for <= 3).
    #[arg(long)]
    symbolic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeformArgs {
    /// Certificate to extend; must carry a passing full-level rank check
    /// over the rationals.
    #[arg(long)]
    cert: PathBuf,
    /// Perturbation step, exact: "1e-3", "0.001", "1/1000", or "0".
    #[arg(long)]
    epsilon: String,
    /// Per-equation convergence threshold, exact.
    #[arg(long, default_value = "1e-12")]
    tol: String,
    /// Fraction bits of the fixed-point iterate.
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Seed for the perturbation-direction draw (default: witness seed + 1).
    #[arg(long)]
    delta_seed: Option<u64>,
    /// Newton iterations per path leg before the step is halved.
    #[arg(long, default_value_t = 30)]
    max_iterations: u32,
    /// Step halvings allowed over the whole path.
    #[arg(long, default_value_t = 12)]
    max_subdivisions: u32,
    /// Rewrite target; the input path when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Certify(args) => geometry_main(&args, "certify", run_certify),
        Cmd::Splitting(args) => geometry_main(&args, "splitting", run_splitting),
        Cmd::Profile(args) => geometry_main(&args, "profile", run_profile),
        Cmd::Lemmas(args) => lemmas_main(&args),
        Cmd::Deform(args) => deform_main(&args),
    };
    std::process::exit(code);
}

fn scalar_ctx(prime: Option<u64>, rational: bool) -> ScalarCtx {
    if rational {
        ScalarCtx::Rational
    } else {
        ScalarCtx::prime(prime.unwrap_or(DEFAULT_PRIME))
    }
}

/// The structured construction exists for every family, but the quartic-based
/// ones are built degree by degree and stop at 8.
fn paper_available(ty: CicyType, degree: usize) -> bool {
    !matches!(ty, CicyType::Quartic42 | CicyType::Quintic5) || degree <= 8
}

fn resolve_mode(
    requested: Option<&str>,
    ty: CicyType,
    degree: usize,
) -> Result<WitnessMode, CliError> {
    match requested {
        Some("paper") => Ok(WitnessMode::Pattern),
        Some("random") => Ok(WitnessMode::Random),
        Some(other) => {
            Err(CliError::Hypothesis(format!("mode must be paper or random, got {other:?}")))
        }
        None => Ok(if paper_available(ty, degree) {
            WitnessMode::Pattern
        } else {
            WitnessMode::Random
        }),
    }
}

type GeometryRunner = fn(&GeometrySpec) -> Result<Certificate, CliError>;

fn geometry_main(args: &GeometryArgs, command: &str, runner: GeometryRunner) -> i32 {
    let ctx = scalar_ctx(args.prime, args.rational);
    let sharing = if args.shared_points {
        PointSharing::Glued
    } else {
        PointSharing::Independent
    };
    let seeds: &[u64] = if args.seed.is_empty() { &[0] } else { &args.seed };

    // Cartesian fan-out: every family times every degree times every seed.
    let mut specs = Vec::new();
    for label in &args.types {
        let ty = match CicyType::parse(label) {
            Some(t) => t,
            None => {
                eprintln!(
                    "cicy: unknown family {label:?} (expected 2,2,2,2 | 3,2,2 | 3,3 | 4,2 | 5)"
                );
                return 3;
            }
        };
        for &degree in &args.degree {
            let mode = match resolve_mode(args.mode.as_deref(), ty, degree) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("cicy: {e}");
                    return e.exit_code();
                }
            };
            for &seed in seeds {
                specs.push(GeometrySpec { ty, degree, mode, ctx, seed, sharing });
            }
        }
    }
    if specs.len() > 1 && args.out.is_some() {
        eprintln!("cicy: --out names one file; use CICY_OUT_DIR for fanned-out runs");
        return 3;
    }

    let outcomes = run_fanned(&specs, args.jobs.max(1), |spec| {
        let cert = runner(spec)?;
        let path = resolve_out_path(args.out.as_deref(), &spec.file_name(command));
        write_certificate(&path, &cert)?;
        Ok((cert, path))
    });

    let mut code = 0;
    for (spec, outcome) in specs.iter().zip(outcomes) {
        let tag = format!(
            "{command} {} d={} {} seed={}",
            spec.ty.label(),
            spec.degree,
            spec.mode_name(),
            spec.seed
        );
        match outcome {
            Ok((cert, path)) => {
                let verdict = if cert.pass {
                    "PASS".to_string()
                } else {
                    let failed = cert.checks.iter().filter(|c| !c.pass).count();
                    code = code.max(1);
                    format!("FAIL ({failed} of {} checks)", cert.checks.len())
                };
                println!("{tag}: {verdict} -> {}", path.display());
            }
            Err(e) => {
                eprintln!("{tag}: error: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    code
}

/// Run jobs across worker threads, preserving input order in the results.
fn run_fanned<T, F>(specs: &[GeometrySpec], jobs: usize, work: F) -> Vec<Result<T, CliError>>
where
    T: Send,
    F: Fn(&GeometrySpec) -> Result<T, CliError> + Sync,
{
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Result<T, CliError>>>> =
        specs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(specs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let outcome = work(&specs[i]);
                *results[i].lock().unwrap() = Some(outcome);
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every job ran"))
        .collect()
}

fn lemmas_main(args: &LemmaArgs) -> i32 {
    let id = match LemmaId::parse(&args.lemma) {
        Some(id) => id,
        None => {
            let names: Vec<&str> = LemmaId::ALL.iter().map(|id| id.name()).collect();
            eprintln!("cicy: unknown lemma {:?} (expected one of {})", args.lemma, names.join(", "));
            return 3;
        }
    };
    let spec = LemmaSpec {
        id,
        size: args.degree,
        trials: args.trials,
        seed: args.seed,
        ctx: scalar_ctx(args.prime, args.rational),
        symbolic: args.symbolic,
    };
    match run_lemmas(&spec).and_then(|cert| {
        let path = resolve_out_path(args.out.as_deref(), &spec.file_name());
        write_certificate(&path, &cert)?;
        Ok((cert, path))
    }) {
        Ok((cert, path)) => {
            let report = &cert.lemma_reports[0];
            let verdict = if cert.pass { "PASS" } else { "FAIL" };
            println!(
                "lemmas {} degree={} trials={}: {verdict} ({} passed, {} failed, {} redraws) -> {}",
                report.lemma,
                report.size_param,
                report.trials,
                report.passes,
                report.failures,
                report.hypothesis_resamples,
                path.display()
            );
            if cert.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("cicy: lemmas: {e}");
            e.exit_code()
        }
    }
}

fn deform_main(args: &DeformArgs) -> i32 {
    let parsed = parse_rational(&args.epsilon).and_then(|eps| {
        let tol = parse_rational(&args.tol)?;
        Ok((eps, tol))
    });
    let (epsilon, tolerance) = match parsed {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("cicy: deform: {e}");
            return e.exit_code();
        }
    };
    let spec = DeformSpec {
        cert_path: args.cert.clone(),
        out_path: args.out.clone(),
        epsilon,
        tolerance,
        precision: args.precision,
        delta_seed: args.delta_seed,
        max_iterations: args.max_iterations,
        max_subdivisions: args.max_subdivisions,
    };
    match run_deform(&spec) {
        Ok((cert, path)) => {
            let verdict = if cert.pass { "PASS" } else { "FAIL" };
            let trace = cert.continuation.as_ref();
            println!(
                "deform {}: {verdict} (converged: {}, final residual {}) -> {}",
                args.cert.display(),
                trace.map(|t| t.converged).unwrap_or(false),
                trace.map(|t| t.final_residual.as_str()).unwrap_or("-"),
                path.display()
            );
            if cert.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("cicy: deform: {e}");
            e.exit_code()
        }
    }
}
