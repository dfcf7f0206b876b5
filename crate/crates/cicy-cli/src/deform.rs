//! The `deform` subcommand: push a certified witness toward a nearby
//! generic complete intersection and append the numerical evidence.
//!
//! The input is an existing certificate with a passing full-level rank check.
//! The curve and forms are reconstructed exactly from the document (not
//! re-derived from the seed, so hand-edited or archived certificates work),
//! the perturbation directions are drawn from a recorded seed over the full
//! coefficient space of each hypersurface degree, and a fixed-point Newton
//! path is run from the witness to the perturbed system. The continuation
//! trace, the final residuals, and a numerical full-rank check at the
//! endpoint are appended; the updated document is rewritten atomically.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use cicy_core::bigfloat::BigFloat;
use cicy_core::ci::{CicyType, CompleteIntersection};
use cicy_core::continuation::{newton_deform, ContinuationJob};
use cicy_core::homform::HomForm;
use cicy_core::rng::SeededRng;
use cicy_core::scalar::ScalarCtx;

use crate::error::CliError;
use crate::output::{read_certificate, write_certificate};
use crate::schema::{self, Certificate};

#[derive(Clone, Debug)]
pub struct DeformSpec {
    pub cert_path: PathBuf,
    /// Rewrite target; the input path when absent.
    pub out_path: Option<PathBuf>,
    pub epsilon: BigRational,
    pub tolerance: BigRational,
    pub precision: u32,
    /// Seed for the perturbation draw; recorded seed plus one when absent.
    pub delta_seed: Option<u64>,
    pub max_iterations: u32,
    pub max_subdivisions: u32,
}

/// Quadratic-decay slack: the squared-residual bound may be loose by this
/// many doublings, absorbing constants from the Jacobian's conditioning.
const DECAY_SLACK_BITS: u32 = 20;

pub fn run_deform(spec: &DeformSpec) -> Result<(Certificate, PathBuf), CliError> {
    let total = Instant::now();
    let mut cert = read_certificate(&spec.cert_path)?;

    let top_rank_ok = cert.rank_results.last().map(|r| r.full_row_rank).unwrap_or(false);
    if !top_rank_ok {
        return Err(CliError::Hypothesis(
            "input certificate does not carry a passing full-level rank check".into(),
        ));
    }
    let ctx = cert.scalar_context.to_ctx()?;
    if ctx != ScalarCtx::Rational {
        return Err(CliError::Hypothesis(
            "continuation starts from rational data; re-run certify with --rational".into(),
        ));
    }
    let ty_label = cert
        .cy_type
        .as_deref()
        .ok_or_else(|| CliError::Schema("certificate without a family label".into()))?;
    let ty = CicyType::parse(ty_label)
        .ok_or_else(|| CliError::Schema(format!("unknown family label {ty_label:?}")))?;
    let witness = cert
        .witness
        .as_ref()
        .ok_or_else(|| CliError::Schema("certificate without witness data".into()))?;

    let curve = schema::curve_from_json(ctx, &witness.curve)?;
    let nvars = ty.ambient_dim() + 1;
    let forms = witness
        .forms
        .iter()
        .map(|f| schema::form_from_json(ctx, nvars, f))
        .collect::<Result<Vec<_>, _>>()?;
    let ci = CompleteIntersection::new(ty, forms)?;

    let recorded_seed: u64 = cert
        .seed
        .parse()
        .map_err(|_| CliError::Schema(format!("unreadable seed {:?}", cert.seed)))?;
    let delta_seed = spec.delta_seed.unwrap_or(recorded_seed.wrapping_add(1));
    let mut rng = SeededRng::new(delta_seed);
    let deltas: Vec<HomForm> = ty
        .degrees()
        .iter()
        .map(|&h| rng.homform_dense(ctx, nvars, h as u32, 9))
        .collect();

    let job = ContinuationJob::prepare(
        ci,
        curve,
        deltas,
        spec.epsilon.clone(),
        spec.tolerance.clone(),
        spec.precision,
        spec.max_iterations,
        spec.max_subdivisions,
    )?;
    let report = newton_deform(&job)?;

    // Quadratic decay is judged on the trace itself, leg by leg, with
    // residuals already at the truncation floor exempt.
    let floor = BigFloat::pow2(-(3 * spec.precision as i64 / 4), spec.precision);
    let quadratic = report
        .legs
        .iter()
        .all(|leg| leg.shows_quadratic_decay(&floor, DECAY_SLACK_BITS));

    cert.continuation = Some(schema::continuation_json(
        &report,
        &spec.epsilon,
        &spec.tolerance,
        spec.precision,
        delta_seed,
        quadratic,
    ));
    cert.command.push_str("+deform");

    cert.push_check(
        "continuation_converged",
        report.converged,
        match &report.failure {
            Some(f) => f.clone(),
            None => format!("reached the target step in {} iterations", report.total_iterations),
        },
    );
    let below_tol = if spec.epsilon.is_zero() {
        report.final_residual_exactly_zero
    } else {
        let tol = BigFloat::from_rational(&spec.tolerance, spec.precision);
        report.final_residual.cmp_abs(&tol) != std::cmp::Ordering::Greater
    };
    cert.push_check(
        "continuation_residual_below_tolerance",
        below_tol,
        format!(
            "final residual {} against tolerance {}",
            report.final_residual.to_decimal_string(20),
            schema::rational_to_string(&spec.tolerance)
        ),
    );
    cert.push_check(
        "continuation_quadratic_decay",
        quadratic,
        "per-leg residual traces contract quadratically inside the basin".to_string(),
    );
    cert.push_check(
        "endpoint_rank_maintained",
        report.endpoint_min_pivot.is_some(),
        match &report.endpoint_min_pivot {
            Some(p) => format!("smallest endpoint pivot {}", p.to_decimal_string(20)),
            None => "endpoint incidence matrix lost full row rank numerically".to_string(),
        },
    );
    cert.settle();
    cert.timings_ms.insert("deform".to_string(), total.elapsed().as_millis());

    let out = spec.out_path.clone().unwrap_or_else(|| spec.cert_path.clone());
    write_certificate(&out, &cert)?;
    Ok((cert, out))
}

/// Convenience for tests: deform an existing certificate file in place.
pub fn deform_file(path: &Path, epsilon: &str, tolerance: &str) -> Result<Certificate, CliError> {
    let spec = DeformSpec {
        cert_path: path.to_path_buf(),
        out_path: None,
        epsilon: crate::numbers::parse_rational(epsilon)?,
        tolerance: crate::numbers::parse_rational(tolerance)?,
        precision: 128,
        delta_seed: None,
        max_iterations: 30,
        max_subdivisions: 12,
    };
    run_deform(&spec).map(|(cert, _)| cert)
}
