//! The certificate document: a single versioned JSON schema shared by every
//! subcommand.
//!
//! One schema, optional sections: a `certify` run fills the witness, rank and
//! bundle sections; `lemmas` fills the lemma reports; `deform` appends a
//! continuation trace to an existing certificate. Exact scalars — curve and
//! form coefficients, marked points, moduli, seeds — are serialized as
//! decimal strings so that arbitrary-precision values survive JSON without
//! 64-bit truncation; small counts (ranks, dimensions, splitting parts) stay
//! native JSON numbers. Field order is struct order, and every collection is
//! emitted in a deterministic order, so re-running a command with the same
//! arguments reproduces the file byte for byte except for `timings_ms`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use cicy_core::bundles::{ImmersionDefect, NormalBundleReport};
use cicy_core::ci::{CompleteIntersection, MarkedPointSet};
use cicy_core::continuation::ContinuationReport;
use cicy_core::curve::RationalCurve;
use cicy_core::homform::HomForm;
use cicy_core::incidence::RankCertificate;
use cicy_core::scalar::{Scalar, ScalarCtx};
use cicy_core::unipoly::UniPoly;

use crate::error::CliError;

/// Bumped on any field addition, removal, or meaning change.
pub const SCHEMA_VERSION: u32 = 1;

/// Decimal digits kept when fixed-point residuals are rendered into JSON.
pub const RESIDUAL_DIGITS: u32 = 45;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Certificate {
    pub schema_version: u32,
    /// Subcommand that produced the document (`deform` appends, not replaces).
    pub command: String,
    /// Hypersurface-degree label, e.g. `"3,2,2"`. Absent for lemma runs,
    /// which are family-independent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cy_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypersurface_degrees: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Witness construction: `"paper"` (structured) or `"random"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub seed: String,
    pub scalar_context: ScalarContextJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_sharing: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rank_results: Vec<RankResultJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_profile: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub splitting: Vec<LevelSplittingJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub immersion: Option<ImmersionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_bundle: Option<NormalBundleJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lemma_reports: Vec<LemmaReportJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuation: Option<ContinuationJson>,
    /// Every gate that decides the exit code, in execution order.
    pub checks: Vec<CheckJson>,
    /// True exactly when every entry of `checks` passed.
    pub pass: bool,
    /// Wall-clock milliseconds per phase. The only nondeterministic field.
    pub timings_ms: BTreeMap<String, u128>,
}

impl Certificate {
    /// Recompute the aggregate verdict from the individual checks.
    pub fn settle(&mut self) {
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn push_check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckJson { name: name.to_string(), pass, detail });
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ScalarContextJson {
    /// `"rational"` or `"prime"`.
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

impl ScalarContextJson {
    pub fn from_ctx(ctx: ScalarCtx) -> Self {
        match ctx {
            ScalarCtx::Rational => {
                ScalarContextJson { field: "rational".to_string(), modulus: None }
            }
            ScalarCtx::Prime(p) => ScalarContextJson {
                field: "prime".to_string(),
                modulus: Some(p.to_string()),
            },
        }
    }

    pub fn to_ctx(&self) -> Result<ScalarCtx, CliError> {
        match self.field.as_str() {
            "rational" => Ok(ScalarCtx::Rational),
            "prime" => {
                let m = self
                    .modulus
                    .as_deref()
                    .ok_or_else(|| CliError::Schema("prime context without modulus".into()))?;
                let p: u64 = m
                    .parse()
                    .map_err(|_| CliError::Schema(format!("unreadable modulus {m:?}")))?;
                Ok(ScalarCtx::prime(p))
            }
            other => Err(CliError::Schema(format!("unknown scalar field kind {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct WitnessJson {
    pub curve: CurveJson,
    pub forms: Vec<FormJson>,
    /// One group per hypersurface, `h_i * d + 1` points each.
    pub marked_points: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CurveJson {
    pub degree_bound: usize,
    /// Coefficients per component, ascending powers of the parameter.
    pub components: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FormJson {
    pub degree: u32,
    /// Lexicographic by exponent vector — the storage order, reproduced.
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub exponents: Vec<u8>,
    pub coefficient: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RankResultJson {
    /// Number of leading hypersurfaces imposed (1-based; level `r` is all).
    pub level: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub full_row_rank: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LevelSplittingJson {
    pub level: usize,
    /// Parts in descending order when the decode succeeded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undetermined: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ImmersionJson {
    /// Vanishing degree of the Wronskian-minor gcd in the affine chart.
    pub affine_defect: usize,
    pub defect_at_infinity: usize,
    pub total_defect: usize,
    pub is_immersion: bool,
    /// Rational ramification parameters with multiplicities.
    pub support: Vec<SupportPointJson>,
    /// Gcd degree attributable only to non-rational parameter values.
    pub unresolved_degree: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SupportPointJson {
    pub point: String,
    pub multiplicity: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct NormalBundleJson {
    pub tangent_splitting: Vec<i64>,
    pub normal_splitting: Vec<i64>,
    pub degree_sum: i64,
    /// `normal_splitting == [-1, -1]`: rigid, balanced.
    pub rigid_pair: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LemmaReportJson {
    /// Validator identifier, e.g. `"two-band"` or `"grid-4x4"`.
    pub lemma: String,
    /// Degree parameter for band shapes, block size for square grids.
    pub size_param: usize,
    pub trials: usize,
    pub passes: usize,
    /// Draws discarded because a hypothesis failed (not conclusion failures).
    pub hypothesis_resamples: usize,
    pub failures: usize,
    /// Outcome of the exhaustive symbolic identity check, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic_identity: Option<bool>,
    /// First failing instance, verbatim, for offline inspection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CounterexampleJson {
    pub description: String,
    /// Human-readable rendering of the drawn inputs.
    pub inputs: Vec<String>,
    /// The assembled matrix, row major, decimal entries.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ContinuationJson {
    pub epsilon: String,
    pub tolerance: String,
    pub precision: u32,
    /// Seed of the stream that drew the perturbation forms.
    pub delta_seed: String,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Path parameter reached (equals `epsilon` on success).
    pub reached: String,
    pub final_residual: String,
    pub final_residual_exactly_zero: bool,
    /// Smallest pivot of the full-width incidence matrix at the endpoint —
    /// numerical evidence the Jacobian stayed nondegenerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint_min_pivot: Option<String>,
    pub total_iterations: u32,
    /// Final-leg residual trace contracts quadratically within slack.
    pub quadratic_decay: bool,
    pub legs: Vec<ContinuationLegJson>,
    /// Corrected curve coefficients, flat `component * (d + 1) + power`.
    pub deformed_coefficients: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ContinuationLegJson {
    pub target: String,
    pub iterations: u32,
    pub converged: bool,
    /// Max-norm residual at entry, then after each Newton update.
    pub residuals: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

// ---------------------------------------------------------------------------
// Conversions: core types -> JSON rows and back.
// ---------------------------------------------------------------------------

/// Exact decimal rendering: `"p"` or `"p/q"` for rationals, the canonical
/// residue for prime-field values.
pub fn scalar_to_string(s: &Scalar) -> String {
    match s {
        Scalar::Rational(r) => {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        Scalar::Prime { value, .. } => value.to_string(),
    }
}

/// Inverse of [`scalar_to_string`] for the given context.
pub fn scalar_from_string(ctx: ScalarCtx, text: &str) -> Result<Scalar, CliError> {
    let bad = || CliError::Schema(format!("unreadable scalar {text:?}"));
    match ctx {
        ScalarCtx::Rational => {
            let (numer, denom) = match text.split_once('/') {
                Some((n, d)) => (n, d),
                None => (text, "1"),
            };
            let n: BigInt = numer.parse().map_err(|_| bad())?;
            let d: BigInt = denom.parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Scalar::Rational(BigRational::new(n, d)))
        }
        ScalarCtx::Prime(p) => {
            let v: u64 = text.parse().map_err(|_| bad())?;
            if v >= p {
                return Err(bad());
            }
            Ok(Scalar::Prime { value: v, modulus: p })
        }
    }
}

pub fn curve_to_json(curve: &RationalCurve) -> CurveJson {
    let d = curve.degree_bound();
    CurveJson {
        degree_bound: d,
        components: curve
            .components()
            .iter()
            .map(|c| (0..=d).map(|k| scalar_to_string(&c.coeff(k))).collect())
            .collect(),
    }
}

pub fn curve_from_json(ctx: ScalarCtx, json: &CurveJson) -> Result<RationalCurve, CliError> {
    let mut comps = Vec::with_capacity(json.components.len());
    for coeffs in &json.components {
        if coeffs.len() != json.degree_bound + 1 {
            return Err(CliError::Schema(format!(
                "component with {} coefficients against degree bound {}",
                coeffs.len(),
                json.degree_bound
            )));
        }
        let scalars = coeffs
            .iter()
            .map(|s| scalar_from_string(ctx, s))
            .collect::<Result<Vec<_>, _>>()?;
        comps.push(UniPoly::from_coeffs(ctx, scalars));
    }
    RationalCurve::new(json.degree_bound, comps).map_err(CliError::from)
}

pub fn form_to_json(form: &HomForm) -> FormJson {
    FormJson {
        degree: form.degree(),
        terms: form
            .terms()
            .map(|(exps, coeff)| TermJson {
                exponents: exps.to_vec(),
                coefficient: scalar_to_string(coeff),
            })
            .collect(),
    }
}

pub fn form_from_json(
    ctx: ScalarCtx,
    nvars: usize,
    json: &FormJson,
) -> Result<HomForm, CliError> {
    let mut f = HomForm::zero(ctx, nvars, json.degree);
    for term in &json.terms {
        if term.exponents.len() != nvars {
            return Err(CliError::Schema(format!(
                "term with {} exponents in a {nvars}-variable form",
                term.exponents.len()
            )));
        }
        f.add_term(&term.exponents, scalar_from_string(ctx, &term.coefficient)?);
    }
    Ok(f)
}

pub fn witness_to_json(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    points: &MarkedPointSet,
) -> WitnessJson {
    WitnessJson {
        curve: curve_to_json(curve),
        forms: ci.forms().iter().map(form_to_json).collect(),
        marked_points: points
            .groups()
            .iter()
            .map(|g| g.iter().map(scalar_to_string).collect())
            .collect(),
    }
}

pub fn rank_result_json(level: usize, cert: &RankCertificate) -> RankResultJson {
    RankResultJson {
        level,
        rows: cert.rows,
        cols: cert.cols,
        rank: cert.rank,
        kernel_dim: cert.kernel_dim,
        full_row_rank: cert.full_row_rank,
    }
}

pub fn immersion_json(defect: &ImmersionDefect) -> ImmersionJson {
    ImmersionJson {
        affine_defect: defect.gcd_degree,
        defect_at_infinity: defect.defect_at_infinity,
        total_defect: defect.total,
        is_immersion: defect.is_immersion(),
        support: defect
            .support
            .iter()
            .map(|(point, multiplicity)| SupportPointJson {
                point: scalar_to_string(point),
                multiplicity: *multiplicity,
            })
            .collect(),
        unresolved_degree: defect.unresolved_degree,
    }
}

pub fn normal_bundle_json(report: &NormalBundleReport) -> NormalBundleJson {
    NormalBundleJson {
        tangent_splitting: report.tangent_splitting.parts().to_vec(),
        normal_splitting: report.normal_splitting.parts().to_vec(),
        degree_sum: report.degree_sum,
        rigid_pair: report.rigid_pair,
    }
}

pub fn continuation_json(
    report: &ContinuationReport,
    epsilon: &BigRational,
    tolerance: &BigRational,
    precision: u32,
    delta_seed: u64,
    quadratic_decay: bool,
) -> ContinuationJson {
    ContinuationJson {
        epsilon: rational_to_string(epsilon),
        tolerance: rational_to_string(tolerance),
        precision,
        delta_seed: delta_seed.to_string(),
        converged: report.converged,
        failure: report.failure.clone(),
        reached: rational_to_string(&report.reached),
        final_residual: report.final_residual.to_decimal_string(RESIDUAL_DIGITS),
        final_residual_exactly_zero: report.final_residual_exactly_zero,
        endpoint_min_pivot: report
            .endpoint_min_pivot
            .as_ref()
            .map(|p| p.to_decimal_string(RESIDUAL_DIGITS)),
        total_iterations: report.total_iterations,
        quadratic_decay,
        legs: report
            .legs
            .iter()
            .map(|leg| ContinuationLegJson {
                target: rational_to_string(&leg.target),
                iterations: leg.iterations,
                converged: leg.converged,
                residuals: leg
                    .residuals
                    .iter()
                    .map(|r| r.to_decimal_string(RESIDUAL_DIGITS))
                    .collect(),
            })
            .collect(),
        deformed_coefficients: report
            .deformed_coefficients
            .iter()
            .map(|c| c.to_decimal_string(RESIDUAL_DIGITS))
            .collect(),
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
