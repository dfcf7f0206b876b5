//! The geometry subcommands: certify, splitting, profile.
//!
//! All three share one pipeline — seeded witness construction, marked-point
//! draw, then command-specific analyses — and differ in which results become
//! gating checks. `certify` gates on the rank story (full row rank at every
//! level, top kernel of dimension four, the tautological kernel vectors, and
//! agreement between kernel dimension and twisted-section count); bundle
//! splittings, immersion defect, and the normal-bundle verdict are recorded
//! as analysis, since witness curves are not required to be generic.
//! `splitting` gates on the bundle analysis being determined at every level,
//! and `profile` gates on the level-to-level kernel-dimension drops matching
//! the expected row counts.

use std::collections::BTreeMap;
use std::time::Instant;

use cicy_core::bundles::{immersion_defect, normal_bundle_type, splitting_type, twisted_section_dim};
use cicy_core::ci::{CicyType, MarkedPointSet, PointSharing};
use cicy_core::incidence::{build_jacobian_level, certificate_for, orbit_report};
use cicy_core::rng::SeededRng;
use cicy_core::scalar::ScalarCtx;
use cicy_core::witness::{build_witness, Witness, WitnessMode};
use cicy_core::CoreError;

use crate::error::CliError;
use crate::schema::{
    self, Certificate, LevelSplittingJson, RankResultJson, ScalarContextJson, SCHEMA_VERSION,
};

/// Everything a geometry run depends on; two equal specs produce certificates
/// that differ at most in `timings_ms`.
#[derive(Clone, Copy, Debug)]
pub struct GeometrySpec {
    pub ty: CicyType,
    pub degree: usize,
    pub mode: WitnessMode,
    pub ctx: ScalarCtx,
    pub seed: u64,
    pub sharing: PointSharing,
}

impl GeometrySpec {
    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            WitnessMode::Pattern => "paper",
            WitnessMode::Random => "random",
        }
    }

    pub fn sharing_name(&self) -> &'static str {
        match self.sharing {
            PointSharing::Independent => "independent",
            PointSharing::Glued => "glued",
        }
    }

    /// Compact digits-only family tag for file names, e.g. `322`.
    pub fn type_slug(&self) -> String {
        self.ty.degrees().iter().map(|d| d.to_string()).collect()
    }

    /// Deterministic certificate file name for this run.
    pub fn file_name(&self, command: &str) -> String {
        let field = match self.ctx {
            ScalarCtx::Rational => "rational".to_string(),
            ScalarCtx::Prime(p) => format!("p{p}"),
        };
        format!(
            "{command}-{}-d{}-{}-seed{}-{}.json",
            self.type_slug(),
            self.degree,
            self.mode_name(),
            self.seed,
            field
        )
    }
}

fn base_certificate(spec: &GeometrySpec, command: &str) -> Certificate {
    Certificate {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        cy_type: Some(spec.ty.label()),
        ambient_dim: Some(spec.ty.ambient_dim()),
        hypersurface_degrees: Some(spec.ty.degrees().to_vec()),
        degree: Some(spec.degree),
        mode: Some(spec.mode_name().to_string()),
        seed: spec.seed.to_string(),
        scalar_context: ScalarContextJson::from_ctx(spec.ctx),
        point_sharing: Some(spec.sharing_name().to_string()),
        witness: None,
        rank_results: Vec::new(),
        kernel_profile: None,
        splitting: Vec::new(),
        immersion: None,
        normal_bundle: None,
        lemma_reports: Vec::new(),
        continuation: None,
        checks: Vec::new(),
        pass: false,
        timings_ms: BTreeMap::new(),
    }
}

/// Shared preamble: witness plus marked points, with the witness serialized
/// into the certificate.
fn build_geometry(
    spec: &GeometrySpec,
    cert: &mut Certificate,
) -> Result<(Witness, MarkedPointSet), CliError> {
    if spec.degree == 0 {
        return Err(CliError::Hypothesis("degree must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rng = SeededRng::new(spec.seed);
    let witness = build_witness(&mut rng, spec.ctx, spec.ty, spec.degree, spec.mode)
        .map_err(CliError::from)?;
    let points =
        MarkedPointSet::draw(&mut rng, spec.ctx, spec.ty, spec.degree, spec.sharing);
    cert.witness = Some(schema::witness_to_json(&witness.ci, &witness.curve, &points));
    cert.timings_ms.insert("witness".to_string(), start.elapsed().as_millis());
    Ok((witness, points))
}

/// Rank certificates at every level plus the kernel-dimension profile
/// (level 0 is the whole coefficient space).
fn rank_story(
    witness: &Witness,
    points: &MarkedPointSet,
    spec: &GeometrySpec,
    cert: &mut Certificate,
) -> Result<(), CliError> {
    let start = Instant::now();
    let r = witness.ci.forms().len();
    let full_dim = (spec.ty.ambient_dim() + 1) * (spec.degree + 1);
    let mut profile = vec![full_dim];
    let mut results: Vec<RankResultJson> = Vec::with_capacity(r);
    for level in 1..=r {
        let jac = build_jacobian_level(&witness.ci, &witness.curve, points, level)?;
        let rank_cert = certificate_for(&jac);
        profile.push(rank_cert.kernel_dim);
        results.push(schema::rank_result_json(level, &rank_cert));
        if level == r {
            let orbit = orbit_report(&jac, &witness.curve)?;
            cert.push_check(
                "tautological_kernel_contained",
                orbit.in_kernel.iter().all(|&b| b),
                format!(
                    "reparametrization-orbit vectors in kernel: {:?}; they span the kernel: {}",
                    orbit.in_kernel, orbit.orbit_spans_kernel
                ),
            );
        }
    }
    for res in &results {
        cert.push_check(
            &format!("full_row_rank_level_{}", res.level),
            res.full_row_rank,
            format!("rank {} of a {} x {} incidence matrix", res.rank, res.rows, res.cols),
        );
    }
    let top_kernel = results.last().map(|r| r.kernel_dim).unwrap_or(full_dim);
    cert.push_check(
        "top_kernel_dimension_is_four",
        top_kernel == 4,
        format!("kernel dimension {top_kernel} at the full level"),
    );
    cert.rank_results = results;
    cert.kernel_profile = Some(profile);
    cert.timings_ms.insert("rank".to_string(), start.elapsed().as_millis());
    Ok(())
}

/// Twisted-section count at the full level against the top kernel dimension:
/// the two modules measure the same space through different matrices.
fn sections_vs_kernel(witness: &Witness, cert: &mut Certificate) -> Result<(), CliError> {
    let start = Instant::now();
    let r = witness.ci.forms().len();
    let top_kernel = match cert.rank_results.last() {
        Some(res) => res.kernel_dim,
        None => return Ok(()),
    };
    match twisted_section_dim(&witness.ci, &witness.curve, r, 0) {
        Ok(h0) => {
            cert.push_check(
                "kernel_matches_section_count",
                top_kernel == h0 + 1,
                format!("kernel {top_kernel} against h0 {h0} + 1"),
            );
        }
        Err(e) => {
            cert.push_check(
                "kernel_matches_section_count",
                false,
                format!("section count unavailable: {e}"),
            );
        }
    }
    cert.timings_ms.insert("sections".to_string(), start.elapsed().as_millis());
    Ok(())
}

/// Splitting type at levels `0..=r`, immersion defect, normal-bundle verdict.
/// Failures to determine a splitting are recorded in place, never guessed.
fn bundle_story(witness: &Witness, cert: &mut Certificate) -> Result<(), CliError> {
    let start = Instant::now();
    let r = witness.ci.forms().len();
    for level in 0..=r {
        match splitting_type(&witness.ci, &witness.curve, level) {
            Ok(split) => cert.splitting.push(LevelSplittingJson {
                level,
                parts: Some(split.parts().to_vec()),
                undetermined: None,
            }),
            Err(e) => cert.splitting.push(LevelSplittingJson {
                level,
                parts: None,
                undetermined: Some(e.to_string()),
            }),
        }
    }
    cert.timings_ms.insert("splitting".to_string(), start.elapsed().as_millis());

    let start = Instant::now();
    let defect = immersion_defect(&witness.curve)?;
    cert.immersion = Some(schema::immersion_json(&defect));
    match normal_bundle_type(&witness.ci, &witness.curve) {
        Ok(report) => cert.normal_bundle = Some(schema::normal_bundle_json(&report)),
        Err(CoreError::SplittingUndetermined(_)) => cert.normal_bundle = None,
        Err(e) => return Err(e.into()),
    }
    cert.timings_ms.insert("bundle".to_string(), start.elapsed().as_millis());
    Ok(())
}

/// `certify`: the existence verdict for one (type, degree, mode, seed).
pub fn run_certify(spec: &GeometrySpec) -> Result<Certificate, CliError> {
    let total = Instant::now();
    let mut cert = base_certificate(spec, "certify");
    let (witness, points) = build_geometry(spec, &mut cert)?;
    rank_story(&witness, &points, spec, &mut cert)?;
    sections_vs_kernel(&witness, &mut cert)?;
    bundle_story(&witness, &mut cert)?;
    if let Some(stage_ok) = witness.surface_stage_full_rank {
        cert.push_check(
            "surface_stage_full_rank",
            stage_ok,
            "rank certificate of the intermediate surface-stage incidence matrix".to_string(),
        );
    }
    cert.settle();
    cert.timings_ms.insert("total".to_string(), total.elapsed().as_millis());
    Ok(cert)
}

/// `splitting`: bundle analysis only; gates on every level decoding.
pub fn run_splitting(spec: &GeometrySpec) -> Result<Certificate, CliError> {
    let total = Instant::now();
    let mut cert = base_certificate(spec, "splitting");
    let (witness, _points) = build_geometry(spec, &mut cert)?;
    bundle_story(&witness, &mut cert)?;
    for entry in cert.splitting.clone() {
        cert.push_check(
            &format!("splitting_determined_level_{}", entry.level),
            entry.parts.is_some(),
            match (&entry.parts, &entry.undetermined) {
                (Some(parts), _) => format!("parts {parts:?}"),
                (None, Some(reason)) => reason.clone(),
                (None, None) => "missing".to_string(),
            },
        );
    }
    let immersed = cert.immersion.as_ref().map(|i| i.is_immersion).unwrap_or(false);
    cert.push_check(
        "parametrization_is_immersion",
        immersed,
        "total ramification defect is zero".to_string(),
    );
    cert.settle();
    cert.timings_ms.insert("total".to_string(), total.elapsed().as_millis());
    Ok(cert)
}

/// `profile`: kernel dimensions per level; gates on the expected drops.
pub fn run_profile(spec: &GeometrySpec) -> Result<Certificate, CliError> {
    let total = Instant::now();
    let mut cert = base_certificate(spec, "profile");
    let (witness, points) = build_geometry(spec, &mut cert)?;
    rank_story(&witness, &points, spec, &mut cert)?;
    // Re-gate: profile cares about the drops, not the rank verdicts.
    cert.checks.clear();
    let profile = cert.kernel_profile.clone().unwrap_or_default();
    let degrees = spec.ty.degrees();
    for level in 0..degrees.len() {
        let expected = degrees[level] * spec.degree + 1;
        let drop = profile[level] - profile[level + 1];
        cert.push_check(
            &format!("kernel_drop_level_{}", level + 1),
            drop == expected,
            format!(
                "kernel {} -> {} drops by {drop}, expected {expected}",
                profile[level],
                profile[level + 1]
            ),
        );
    }
    cert.settle();
    cert.timings_ms.insert("total".to_string(), total.elapsed().as_millis());
    Ok(cert)
}
