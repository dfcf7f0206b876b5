//! End-to-end checks of the command-line surface: certificate reproducibility,
//! serde round-trips, the pinned golden example, process exit codes, and the
//! output-directory contract.

use std::path::{Path, PathBuf};
use std::process::Command;

use cicy_cli::deform::{run_deform, DeformSpec};
use cicy_cli::lemmas::{run_lemmas, LemmaId, LemmaSpec};
use cicy_cli::output::{read_certificate, write_certificate};
use cicy_cli::runs::{run_certify, run_profile, run_splitting, GeometrySpec};
use cicy_cli::schema::Certificate;
use cicy_core::ci::{CicyType, PointSharing};
use cicy_core::primes::DEFAULT_PRIME;
use cicy_core::scalar::ScalarCtx;
use cicy_core::witness::WitnessMode;

use num_rational::BigRational;
use num_traits::Zero;

fn quintic_spec(seed: u64, ctx: ScalarCtx, mode: WitnessMode) -> GeometrySpec {
    GeometrySpec {
        ty: CicyType::Quintic5,
        degree: 1,
        mode,
        ctx,
        seed,
        sharing: PointSharing::Independent,
    }
}

/// Serialize with the volatile timing table emptied; equal strings mean the
/// certificates are byte-identical in every reproducible field.
fn stable_bytes(cert: &Certificate) -> String {
    let mut cert = cert.clone();
    cert.timings_ms.clear();
    serde_json::to_string_pretty(&cert).unwrap()
}

#[test]
fn identical_specs_reproduce_identical_bytes() {
    let spec = quintic_spec(11, ScalarCtx::Prime(DEFAULT_PRIME), WitnessMode::Random);
    let first = run_certify(&spec).unwrap();
    let second = run_certify(&spec).unwrap();
    assert!(first.pass, "quintic random certification should pass");
    assert_eq!(stable_bytes(&first), stable_bytes(&second));

    let first = run_splitting(&spec).unwrap();
    let second = run_splitting(&spec).unwrap();
    assert_eq!(stable_bytes(&first), stable_bytes(&second));

    let first = run_profile(&spec).unwrap();
    let second = run_profile(&spec).unwrap();
    assert_eq!(stable_bytes(&first), stable_bytes(&second));
}

#[test]
fn distinct_seeds_change_the_witness() {
    let a = run_certify(&quintic_spec(1, ScalarCtx::Prime(DEFAULT_PRIME), WitnessMode::Random))
        .unwrap();
    let b = run_certify(&quintic_spec(2, ScalarCtx::Prime(DEFAULT_PRIME), WitnessMode::Random))
        .unwrap();
    assert_ne!(
        a.witness.as_ref().unwrap().curve.components,
        b.witness.as_ref().unwrap().curve.components
    );
}

#[test]
fn certificate_round_trips_through_json() {
    let cert =
        run_certify(&quintic_spec(5, ScalarCtx::Prime(DEFAULT_PRIME), WitnessMode::Pattern))
            .unwrap();
    let text = serde_json::to_string_pretty(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(text, serde_json::to_string_pretty(&back).unwrap());

    // A lemma certificate exercises the sections a geometry run leaves empty.
    let lemma = run_lemmas(&LemmaSpec {
        id: LemmaId::TwoBand,
        size: 2,
        trials: 5,
        seed: 9,
        ctx: ScalarCtx::Prime(DEFAULT_PRIME),
        symbolic: false,
    })
    .unwrap();
    let text = serde_json::to_string_pretty(&lemma).unwrap();
    assert!(!text.contains("cy_type"), "geometry fields must be omitted, not null");
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(text, serde_json::to_string_pretty(&back).unwrap());
}

fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/certificate-example.json")
}

#[test]
fn golden_example_matches_a_fresh_run() {
    let golden = read_certificate(&golden_path()).unwrap();
    let fresh =
        run_certify(&quintic_spec(7, ScalarCtx::Prime(DEFAULT_PRIME), WitnessMode::Pattern))
            .unwrap();
    assert!(fresh.pass);
    assert_eq!(stable_bytes(&golden), stable_bytes(&fresh));
}

#[test]
fn foreign_schema_versions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("future.json");
    std::fs::write(&path, "{\"schema_version\": 999}\n").unwrap();
    let err = read_certificate(&path).unwrap_err();
    assert_eq!(err.exit_code(), 5);
}

#[test]
fn deform_appends_a_reproducible_continuation_section() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("start.json");
    let cert = run_certify(&quintic_spec(3, ScalarCtx::Rational, WitnessMode::Random)).unwrap();
    assert!(cert.pass);
    write_certificate(&cert_path, &cert).unwrap();

    let spec = DeformSpec {
        cert_path: cert_path.clone(),
        out_path: Some(dir.path().join("moved.json")),
        epsilon: BigRational::new(1.into(), 1000.into()),
        tolerance: BigRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(12)),
        precision: 128,
        delta_seed: None,
        max_iterations: 30,
        max_subdivisions: 12,
    };
    let (first, out) = run_deform(&spec).unwrap();
    assert!(first.pass, "continuation from a passing rational certificate should converge");
    assert_eq!(out, dir.path().join("moved.json"));
    let trace = first.continuation.as_ref().unwrap();
    assert!(trace.converged);
    assert!(!trace.deformed_coefficients.is_empty());
    assert_eq!(first.command, "certify+deform");

    let (second, _) = run_deform(&spec).unwrap();
    assert_eq!(stable_bytes(&first), stable_bytes(&second));

    // The original input is untouched when an output path is given.
    let untouched = read_certificate(&cert_path).unwrap();
    assert!(untouched.continuation.is_none());
}

#[test]
fn zero_step_deform_stays_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("start.json");
    let cert = run_certify(&quintic_spec(4, ScalarCtx::Rational, WitnessMode::Random)).unwrap();
    write_certificate(&cert_path, &cert).unwrap();

    let (done, _) = run_deform(&DeformSpec {
        cert_path,
        out_path: None,
        epsilon: BigRational::zero(),
        tolerance: BigRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(12)),
        precision: 128,
        delta_seed: None,
        max_iterations: 30,
        max_subdivisions: 12,
    })
    .unwrap();
    assert!(done.pass);
    let trace = done.continuation.as_ref().unwrap();
    assert!(trace.final_residual_exactly_zero);
    assert_eq!(trace.total_iterations, 0);
}

#[test]
fn deform_refuses_prime_field_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("start.json");
    let cert =
        run_certify(&quintic_spec(3, ScalarCtx::Prime(DEFAULT_PRIME), WitnessMode::Random))
            .unwrap();
    write_certificate(&cert_path, &cert).unwrap();

    let err = run_deform(&DeformSpec {
        cert_path,
        out_path: None,
        epsilon: BigRational::zero(),
        tolerance: BigRational::new(1.into(), 100.into()),
        precision: 128,
        delta_seed: None,
        max_iterations: 30,
        max_subdivisions: 12,
    })
    .unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

// ---------------------------------------------------------------------------
// Process-level checks through the compiled binary.
// ---------------------------------------------------------------------------

fn cicy(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cicy"))
        .args(args)
        .env("CICY_OUT_DIR", dir)
        .output()
        .expect("binary should launch")
}

#[test]
fn exit_zero_and_certificate_in_out_dir_on_success() {
    let dir = tempfile::tempdir().unwrap();
    let out = cicy(
        dir.path(),
        &["certify", "--type", "5", "--degree", "1", "--mode", "random", "--seed", "1"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let expected = dir.path().join(format!("certify-5-d1-random-seed1-p{DEFAULT_PRIME}.json"));
    let cert = read_certificate(&expected).unwrap();
    assert!(cert.pass);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}

#[test]
fn exit_one_when_a_check_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = cicy(
        dir.path(),
        &["certify", "--type", "3,3", "--degree", "1", "--mode", "paper", "--seed", "7"],
    );
    assert_eq!(out.status.code(), Some(1));
    let expected = dir.path().join(format!("certify-33-d1-paper-seed7-p{DEFAULT_PRIME}.json"));
    let cert = read_certificate(&expected).unwrap();
    assert!(!cert.pass, "the failing certificate is still written in full");
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn exit_two_on_malformed_arguments() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cicy(dir.path(), &["certify", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(cicy(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn exit_three_on_violated_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = cicy(dir.path(), &["certify", "--type", "9,9", "--degree", "1"]);
    assert_eq!(unknown.status.code(), Some(3));

    let unavailable = cicy(
        dir.path(),
        &["certify", "--type", "5", "--degree", "12", "--mode", "paper"],
    );
    assert_eq!(unavailable.status.code(), Some(3));
    let chatter = format!(
        "{}{}",
        String::from_utf8_lossy(&unavailable.stdout),
        String::from_utf8_lossy(&unavailable.stderr)
    );
    assert!(chatter.contains("error"), "got: {chatter}");
}

#[test]
fn exit_five_on_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-certificate.json");
    let out = cicy(
        dir.path(),
        &["deform", "--cert", missing.to_str().unwrap(), "--epsilon", "1e-3"],
    );
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn explicit_out_path_beats_the_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested/explicit.json");
    let out = cicy(
        dir.path(),
        &[
            "certify",
            "--type",
            "4,2",
            "--degree",
            "1",
            "--mode",
            "random",
            "--seed",
            "2",
            "--out",
            target.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(target.is_file(), "parent directories are created on demand");
}

#[test]
fn fan_out_covers_the_full_cartesian_product() {
    let dir = tempfile::tempdir().unwrap();
    let out = cicy(
        dir.path(),
        &[
            "certify", "--type", "5", "--type", "4,2", "--degree", "1", "--degree", "2",
            "--mode", "random", "--seed", "1", "--seed", "2", "--jobs", "4",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(written, 8, "2 types x 2 degrees x 2 seeds");
}
