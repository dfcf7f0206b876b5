//! The `lemmas` subcommand: randomized validation of the structured-matrix
//! nondegeneracy statements the rank certificates reduce to.
//!
//! Each validator id names one matrix shape. A trial draws a
//! hypothesis-satisfying instance, assembles the matrix exactly, and records
//! whether the promised conclusion (nondegeneracy, or a determinant
//! identity) holds. Draws whose hypotheses fail are tallied and redrawn —
//! they say nothing about the statement — while a conclusion failure is
//! captured verbatim, inputs and matrix, for offline inspection. The
//! band-aligned determinant identity can additionally be checked
//! symbolically: every point tuple from a grid large enough to force the
//! polynomial identity.

use std::collections::BTreeMap;
use std::time::Instant;

use cicy_core::banded::{
    aligned_split_identity, aligned_split_identity_on_grid, check_three_band, check_two_band,
    random_three_band_spec, random_two_band_spec, three_band_matrix, two_band_matrix,
};
use cicy_core::grids::{
    check_grid_2x6, check_grid_3x7, check_grid_4x4, synthesize_grid_2x6, synthesize_grid_3x7,
    synthesize_grid_4x4,
};
use cicy_core::matrix::ExactMatrix;
use cicy_core::rng::SeededRng;
use cicy_core::scalar::ScalarCtx;
use cicy_core::unipoly::UniPoly;

use crate::error::CliError;
use crate::schema::{
    scalar_to_string, Certificate, CounterexampleJson, LemmaReportJson, ScalarContextJson,
    SCHEMA_VERSION,
};

/// Redraws allowed per trial before the run reports resampling exhaustion.
const RESAMPLES_PER_TRIAL: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaId {
    /// Interleaved two-scaling square band, `(2d+1) x (2d+1)`.
    TwoBand,
    /// Interleaved three-scaling band with a double-degree third scaling.
    ThreeBand,
    /// Determinant identity for the band with one point group at the zeros
    /// of the first scaling.
    SplitIdentity,
    /// Two-row, six-column-group glued block grid.
    Grid2x6,
    /// Three-row, seven-column-group glued block grid.
    Grid3x7,
    /// Four-row square block grid with an invertible Schur complement.
    Grid4x4,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::TwoBand,
        LemmaId::ThreeBand,
        LemmaId::SplitIdentity,
        LemmaId::Grid2x6,
        LemmaId::Grid3x7,
        LemmaId::Grid4x4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::TwoBand => "two-band",
            LemmaId::ThreeBand => "three-band",
            LemmaId::SplitIdentity => "split-identity",
            LemmaId::Grid2x6 => "grid-2x6",
            LemmaId::Grid3x7 => "grid-3x7",
            LemmaId::Grid4x4 => "grid-4x4",
        }
    }

    pub fn parse(text: &str) -> Option<LemmaId> {
        LemmaId::ALL.iter().copied().find(|id| id.name() == text)
    }
}

/// One run of the `lemmas` subcommand.
#[derive(Clone, Copy, Debug)]
pub struct LemmaSpec {
    pub id: LemmaId,
    /// Degree parameter for bands, block size for the square grid.
    pub size: usize,
    pub trials: usize,
    pub seed: u64,
    pub ctx: ScalarCtx,
    /// Also run the exhaustive symbolic check (split-identity only).
    pub symbolic: bool,
}

impl LemmaSpec {
    pub fn file_name(&self) -> String {
        let field = match self.ctx {
            ScalarCtx::Rational => "rational".to_string(),
            ScalarCtx::Prime(p) => format!("p{p}"),
        };
        format!(
            "lemmas-{}-s{}-trials{}-seed{}-{}.json",
            self.id.name(),
            self.size,
            self.trials,
            self.seed,
            field
        )
    }
}

fn render_matrix(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| scalar_to_string(m.get(r, c))).collect())
        .collect()
}

fn render_poly(label: &str, p: &UniPoly) -> String {
    let coeffs: Vec<String> = p.coeffs().iter().map(scalar_to_string).collect();
    format!("{label} coefficients (ascending): [{}]", coeffs.join(", "))
}

fn render_points(label: &str, pts: &[cicy_core::scalar::Scalar]) -> String {
    let rendered: Vec<String> = pts.iter().map(scalar_to_string).collect();
    format!("{label}: [{}]", rendered.join(", "))
}

/// Outcome of one drawn trial.
enum Trial {
    Pass,
    HypothesisMiss,
    Fail(CounterexampleJson),
}

fn one_trial(spec: &LemmaSpec, rng: &mut SeededRng) -> Result<Trial, CliError> {
    let ctx = spec.ctx;
    let d = spec.size;
    match spec.id {
        LemmaId::TwoBand => {
            let instance = random_two_band_spec(rng, ctx, d);
            let report = check_two_band(&instance)?;
            if !report.violations.is_empty() {
                return Ok(Trial::HypothesisMiss);
            }
            if report.conclusion_holds {
                return Ok(Trial::Pass);
            }
            Ok(Trial::Fail(CounterexampleJson {
                description: format!(
                    "two-band matrix degenerate: rank {} of {}",
                    report.rank, report.dimension
                ),
                inputs: vec![
                    render_poly("h1", &instance.h1),
                    render_poly("h2", &instance.h2),
                    render_points("t1", &instance.t1),
                    render_points("t2", &instance.t2),
                ],
                matrix: render_matrix(&two_band_matrix(&instance)?),
            }))
        }
        LemmaId::ThreeBand => {
            let instance = random_three_band_spec(rng, ctx, d);
            let report = check_three_band(&instance)?;
            if !report.violations.is_empty() {
                return Ok(Trial::HypothesisMiss);
            }
            if report.conclusion_holds {
                return Ok(Trial::Pass);
            }
            Ok(Trial::Fail(CounterexampleJson {
                description: format!(
                    "three-band matrix degenerate: rank {} of {} (upper sub-block full: {})",
                    report.rank, report.dimension, report.v_subblock_full
                ),
                inputs: vec![
                    render_poly("h1", &instance.h1),
                    render_poly("h2", &instance.h2),
                    render_poly("h3", &instance.h3),
                    render_points("t1", &instance.t1),
                    render_points("t2", &instance.t2),
                    render_points("t3", &instance.t3),
                ],
                matrix: render_matrix(&three_band_matrix(&instance)?),
            }))
        }
        LemmaId::SplitIdentity => {
            let h2 = rng.poly_exact_degree(ctx, d, 9);
            let roots = rng.distinct_points(ctx, d);
            let t2 = rng.distinct_points(ctx, d + 1);
            let report = aligned_split_identity(&h2, &roots, &t2, d)?;
            if report.identity_holds {
                return Ok(Trial::Pass);
            }
            Ok(Trial::Fail(CounterexampleJson {
                description: format!(
                    "split determinant identity broke: {} against {}",
                    scalar_to_string(&report.lhs_det),
                    scalar_to_string(&report.rhs_det)
                ),
                inputs: vec![
                    render_poly("h2", &h2),
                    render_points("roots of h1", &roots),
                    render_points("t2", &t2),
                ],
                matrix: Vec::new(),
            }))
        }
        LemmaId::Grid2x6 => {
            let grid = synthesize_grid_2x6(rng, ctx, d)?;
            let report = check_grid_2x6(&grid)?;
            if !report.hypotheses_hold {
                return Ok(Trial::HypothesisMiss);
            }
            if report.conclusion_holds {
                return Ok(Trial::Pass);
            }
            Ok(Trial::Fail(CounterexampleJson {
                description: format!(
                    "two-row grid rank {} short of {}",
                    report.rank, report.expected_rank
                ),
                inputs: vec!["synthesized block grid; matrix below".to_string()],
                matrix: render_matrix(&grid.assemble()?),
            }))
        }
        LemmaId::Grid3x7 => {
            let grid = synthesize_grid_3x7(rng, ctx, d)?;
            let report = check_grid_3x7(&grid)?;
            if !report.hypotheses_hold {
                return Ok(Trial::HypothesisMiss);
            }
            if report.conclusion_holds {
                return Ok(Trial::Pass);
            }
            Ok(Trial::Fail(CounterexampleJson {
                description: format!(
                    "three-row grid rank {} short of {}",
                    report.rank, report.expected_rank
                ),
                inputs: vec!["synthesized block grid; matrix below".to_string()],
                matrix: render_matrix(&grid.assemble()?),
            }))
        }
        LemmaId::Grid4x4 => {
            let grid = synthesize_grid_4x4(rng, ctx, d)?;
            let report = check_grid_4x4(&grid)?;
            if !report.blocks_nondegenerate
                || !report.stated_complement_nondegenerate
                || !report.derived_complement_nondegenerate
            {
                return Ok(Trial::HypothesisMiss);
            }
            let identity_ok = report.determinant_identity_holds.unwrap_or(false);
            if report.conclusion_nondegenerate && identity_ok {
                return Ok(Trial::Pass);
            }
            Ok(Trial::Fail(CounterexampleJson {
                description: format!(
                    "square grid: invertible {}, determinant identity {:?}",
                    report.conclusion_nondegenerate, report.determinant_identity_holds
                ),
                inputs: vec!["synthesized block grid; matrix below".to_string()],
                matrix: render_matrix(&grid.assemble()?),
            }))
        }
    }
}

pub fn run_lemmas(spec: &LemmaSpec) -> Result<Certificate, CliError> {
    if spec.trials == 0 {
        return Err(CliError::Hypothesis("at least one trial is required".into()));
    }
    if spec.size == 0 {
        return Err(CliError::Hypothesis("size parameter must be at least 1".into()));
    }
    if spec.symbolic && spec.id != LemmaId::SplitIdentity {
        return Err(CliError::Hypothesis(
            "the symbolic grid check exists only for split-identity".into(),
        ));
    }
    let total = Instant::now();
    let mut rng = SeededRng::new(spec.seed);

    let mut passes = 0usize;
    let mut failures = 0usize;
    let mut resamples = 0usize;
    let mut counterexample = None;
    for _ in 0..spec.trials {
        let mut misses = 0usize;
        loop {
            match one_trial(spec, &mut rng)? {
                Trial::Pass => {
                    passes += 1;
                    break;
                }
                Trial::Fail(cx) => {
                    failures += 1;
                    if counterexample.is_none() {
                        counterexample = Some(cx);
                    }
                    break;
                }
                Trial::HypothesisMiss => {
                    resamples += 1;
                    misses += 1;
                    if misses > RESAMPLES_PER_TRIAL {
                        return Err(CliError::Resampling(format!(
                            "{} hypothesis redraws for one {} trial (seed {})",
                            misses,
                            spec.id.name(),
                            spec.seed
                        )));
                    }
                }
            }
        }
    }

    let symbolic_identity = if spec.symbolic {
        let h2 = rng.poly_exact_degree(spec.ctx, spec.size, 9);
        let roots = rng.distinct_points(spec.ctx, spec.size);
        Some(aligned_split_identity_on_grid(&h2, &roots, spec.size)?)
    } else {
        None
    };

    let mut cert = Certificate {
        schema_version: SCHEMA_VERSION,
        command: "lemmas".to_string(),
        cy_type: None,
        ambient_dim: None,
        hypersurface_degrees: None,
        degree: None,
        mode: None,
        seed: spec.seed.to_string(),
        scalar_context: ScalarContextJson::from_ctx(spec.ctx),
        point_sharing: None,
        witness: None,
        rank_results: Vec::new(),
        kernel_profile: None,
        splitting: Vec::new(),
        immersion: None,
        normal_bundle: None,
        lemma_reports: vec![LemmaReportJson {
            lemma: spec.id.name().to_string(),
            size_param: spec.size,
            trials: spec.trials,
            passes,
            hypothesis_resamples: resamples,
            failures,
            symbolic_identity,
            counterexample,
        }],
        continuation: None,
        checks: Vec::new(),
        pass: false,
        timings_ms: BTreeMap::new(),
    };
    cert.push_check(
        "no_conclusion_failures",
        failures == 0,
        format!("{passes} of {} trials passed, {resamples} hypothesis redraws", spec.trials),
    );
    if let Some(ok) = symbolic_identity {
        cert.push_check(
            "symbolic_identity_holds",
            ok,
            "determinant identity verified over the full point grid".to_string(),
        );
    }
    cert.settle();
    cert.timings_ms.insert("total".to_string(), total.elapsed().as_millis());
    Ok(cert)
}
