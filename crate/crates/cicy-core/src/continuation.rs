//! Newton correction of a witness curve toward perturbed, generic
//! hypersurface coefficients.
//!
//! The exact layer certifies one explicit curve on one explicit
//! intersection. Nearby intersections `g_i + s·δg_i` no longer pass through
//! it, but the incidence equations at the marked points form a square
//! system in the coefficients selected by a passing rank certificate, and
//! that system's Jacobian is invertible at the start. Walking `s` from 0 to
//! the requested step and Newton-correcting the selected coefficients at
//! each leg realizes the deformation numerically.
//!
//! The perturbed forms stay exact rationals (`s` is rational); only the
//! curve iterate lives in fixed-point arithmetic. Every operation is
//! deterministic, so a job reproduces its trace bit for bit. Failures —
//! a numerically singular Jacobian, an exhausted subdivision budget — are
//! returned as reports carrying the partial trace, not as bare errors.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bigfloat::{min_row_pivot, solve_square, BigFloat};
use crate::ci::{CompleteIntersection, MarkedPointSet};
use crate::curve::RationalCurve;
use crate::error::CoreError;
use crate::homform::HomForm;
use crate::incidence::{build_jacobian, select_independent_coordinates};
use crate::scalar::{Scalar, ScalarCtx};

/// Evaluate a rational-coefficient form at a fixed-point vector.
fn eval_form(form: &HomForm, point: &[BigFloat], precision: u32) -> BigFloat {
    let mut acc = BigFloat::zero(precision);
    for (exps, coeff) in form.terms() {
        let r = coeff.as_rational().expect("continuation runs over rationals");
        let mut term = BigFloat::from_rational(r, precision);
        for (j, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&point[j]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Horner evaluation of one curve component from the flat coefficient
/// vector (component-major, ascending powers).
fn eval_component(
    coeffs: &[BigFloat],
    j: usize,
    d: usize,
    t: &BigFloat,
    precision: u32,
) -> BigFloat {
    let mut acc = BigFloat::zero(precision);
    for k in (0..=d).rev() {
        acc = acc.mul(t).add(&coeffs[j * (d + 1) + k]);
    }
    acc
}

/// One continuation task: a certified start pair, perturbation directions,
/// a target step, and the numerical budget.
#[derive(Clone, Debug)]
pub struct ContinuationJob {
    pub ci: CompleteIntersection,
    pub curve: RationalCurve,
    pub points: MarkedPointSet,
    /// Coefficient indices solved for; the complementary ones stay frozen.
    /// Comes from exact elimination of the incidence matrix at `points`.
    pub partition: Vec<usize>,
    /// One perturbation form per hypersurface, same degrees, rescaled by
    /// [`ContinuationJob::prepare`] to unit sup-norm at the marked points.
    pub delta_forms: Vec<HomForm>,
    /// Target step along the perturbation; the path runs from 0 to here.
    pub epsilon: BigRational,
    /// Per-equation convergence threshold.
    pub tolerance: BigRational,
    /// Fraction bits of the fixed-point iterate.
    pub precision: u32,
    /// Newton iterations allowed per leg before the leg is declared
    /// divergent and the step is halved.
    pub max_iterations: u32,
    /// Step halvings allowed over the whole path.
    pub max_subdivisions: u32,
}

impl ContinuationJob {
    /// Builds a job from a certified pair: draws nothing, derives the
    /// marked points deterministically (dyadic values, exactly
    /// representable in fixed point) and the coefficient partition by
    /// exact elimination. Perturbation forms are rescaled to unit
    /// sup-norm on the marked points, so the step parameter is the
    /// sup-norm of the residual it injects. Fails if the incidence matrix
    /// does not have full row rank at the start — continuation is only
    /// meaningful from a certified witness.
    pub fn prepare(
        ci: CompleteIntersection,
        curve: RationalCurve,
        delta_forms: Vec<HomForm>,
        epsilon: BigRational,
        tolerance: BigRational,
        precision: u32,
        max_iterations: u32,
        max_subdivisions: u32,
    ) -> Result<Self, CoreError> {
        if curve.ctx() != ScalarCtx::Rational {
            return Err(CoreError::Unsupported(
                "continuation needs rational start data (a prime-field curve \
                 has no numerical neighbourhood)"
                    .into(),
            ));
        }
        if tolerance <= BigRational::zero() {
            return Err(CoreError::ParameterOutOfRange("tolerance must be positive".into()));
        }
        if precision < 64 {
            return Err(CoreError::ParameterOutOfRange(
                "fixed-point precision below 64 bits".into(),
            ));
        }
        if epsilon < BigRational::zero() {
            return Err(CoreError::ParameterOutOfRange("negative step".into()));
        }
        let degrees = ci.ty().degrees();
        if delta_forms.len() != degrees.len() {
            return Err(CoreError::DimensionMismatch(
                "one perturbation form per hypersurface".into(),
            ));
        }
        for (df, &h) in delta_forms.iter().zip(degrees) {
            if df.nvars() != ci.ty().ambient_dim() + 1 || df.degree() as usize != h {
                return Err(CoreError::DimensionMismatch(
                    "perturbation form shape differs from its hypersurface".into(),
                ));
            }
        }
        if !ci.contains_curve(&curve)? {
            return Err(CoreError::InvalidConstruction(
                "start curve does not lie on the start intersection".into(),
            ));
        }
        // Dyadic marked points k/2^b in (0, 1]: exact in fixed point, and
        // any distinct choice yields the same exact kernel, so the rank
        // certificate transfers.
        let d = curve.degree_bound();
        let ctx = ScalarCtx::Rational;
        let max_group = degrees.iter().map(|&h| h * d + 1).max().unwrap_or(1);
        let mut denom = 1i64;
        while (denom as usize) < max_group {
            denom *= 2;
        }
        let groups: Vec<Vec<Scalar>> = degrees
            .iter()
            .map(|&h| {
                (1..=(h * d + 1) as i64)
                    .map(|k| ctx.from_ratio_i64(k, denom))
                    .collect()
            })
            .collect();
        let points = MarkedPointSet::new(ci.ty(), d, groups)?;
        let jac = build_jacobian(&ci, &curve, &points)?;
        if jac.rank() != jac.rows() {
            return Err(CoreError::InvalidConstruction(alloc::format!(
                "incidence matrix rank {} of {} rows at the start: continuation \
                 needs a certified witness",
                jac.rank(),
                jac.rows()
            )));
        }
        let partition = select_independent_coordinates(&jac);

        // Rescale each perturbation to unit sup-norm over its marked
        // points, so the path parameter measures the injected residual
        // directly: at parameter `s` the start curve violates each
        // perturbed equation by at most `s`. Without this the step would
        // be denominated in the arbitrary coefficient scale of the drawn
        // forms — a dense high-degree form easily evaluates to 1e7 on a
        // small curve, putting even tiny steps outside the Newton basin.
        let mut delta_forms = delta_forms;
        for (i, delta) in delta_forms.iter_mut().enumerate() {
            let mut sup = BigRational::zero();
            for t in points.group(i) {
                let value = delta.eval(&curve.eval(t))?;
                let size = value.as_rational().expect("rational context").abs();
                if size > sup {
                    sup = size;
                }
            }
            if !sup.is_zero() {
                *delta = delta.scale(&Scalar::Rational(sup.recip()));
            }
        }

        Ok(ContinuationJob {
            ci,
            curve,
            points,
            partition,
            delta_forms,
            epsilon,
            tolerance,
            precision,
            max_iterations,
            max_subdivisions,
        })
    }
}

/// Trace of one Newton leg: the residuals before and after each update.
#[derive(Clone, Debug)]
pub struct NewtonLeg {
    /// Cumulative path parameter this leg ends at.
    pub target: BigRational,
    /// Max-norm residual at entry, then after each Newton update.
    pub residuals: Vec<BigFloat>,
    pub iterations: u32,
    pub converged: bool,
}

impl NewtonLeg {
    /// Does the trace contract quadratically once inside the basin?
    ///
    /// For every consecutive pair with `r_i <= 1/4` and `r_{i+1}` above
    /// the precision floor, requires `r_{i+1} <= r_i^2 * slack`. Residuals
    /// already at the floor are exempt: truncation noise dominates there.
    pub fn shows_quadratic_decay(&self, floor: &BigFloat, slack_bits: u32) -> bool {
        let precision = floor.precision();
        let quarter = BigFloat::from_rational(
            &BigRational::new(BigInt::from(1), BigInt::from(4)),
            precision,
        );
        for w in self.residuals.windows(2) {
            let (r0, r1) = (&w[0], &w[1]);
            if r0.cmp_abs(&quarter) == core::cmp::Ordering::Greater {
                continue;
            }
            if r1.cmp_abs(floor) != core::cmp::Ordering::Greater {
                continue;
            }
            let mut bound = r0.mul(r0);
            for _ in 0..slack_bits {
                bound = bound.add(&bound);
            }
            if r1.cmp_abs(&bound) == core::cmp::Ordering::Greater {
                return false;
            }
        }
        true
    }
}

/// Outcome of a continuation run. Failure is a report state, not an error:
/// the trace up to the failure is always preserved.
#[derive(Clone, Debug)]
pub struct ContinuationReport {
    pub legs: Vec<NewtonLeg>,
    /// Path parameter actually reached (equals the job's step on success).
    pub reached: BigRational,
    pub converged: bool,
    pub failure: Option<String>,
    /// Max-norm residual at the end of the path.
    pub final_residual: BigFloat,
    /// The unperturbed case is evaluated exactly; this records that the
    /// residual is identically zero rather than merely small.
    pub final_residual_exactly_zero: bool,
    /// Smallest pivot magnitude of the full-width incidence matrix at the
    /// deformed endpoint, if it reached full row rank numerically.
    pub endpoint_min_pivot: Option<BigFloat>,
    /// Total Newton iterations over all legs.
    pub total_iterations: u32,
    /// Flat coefficient vector of the corrected curve at the end of the
    /// path (layout `j * (d + 1) + k`); equals the start coefficients when
    /// the step is zero, and the last accepted iterate on failure.
    pub deformed_coefficients: Vec<BigFloat>,
}

fn perturbed_forms(job: &ContinuationJob, s: &BigRational) -> Vec<HomForm> {
    let scale = Scalar::Rational(s.clone());
    job.ci
        .forms()
        .iter()
        .zip(&job.delta_forms)
        .map(|(g, dg)| g.add(&dg.scale(&scale)))
        .collect()
}

struct Workspace {
    n1: usize,
    d: usize,
    precision: u32,
    /// (form index, parameter) per equation, flattened form-major.
    equations: Vec<(usize, BigFloat)>,
    /// Partials of the current perturbed forms, form-major then variable.
    partials: Vec<Vec<HomForm>>,
}

impl Workspace {
    fn residuals(&self, forms: &[HomForm], coeffs: &[BigFloat]) -> Vec<BigFloat> {
        self.equations
            .iter()
            .map(|(i, t)| {
                let point: Vec<BigFloat> = (0..self.n1)
                    .map(|j| eval_component(coeffs, j, self.d, t, self.precision))
                    .collect();
                eval_form(&forms[*i], &point, self.precision)
            })
            .collect()
    }

    fn jacobian(&self, coeffs: &[BigFloat], partition: &[usize]) -> Vec<Vec<BigFloat>> {
        self.equations
            .iter()
            .map(|(i, t)| {
                let point: Vec<BigFloat> = (0..self.n1)
                    .map(|j| eval_component(coeffs, j, self.d, t, self.precision))
                    .collect();
                let partial_values: Vec<BigFloat> = self.partials[*i]
                    .iter()
                    .map(|p| eval_form(p, &point, self.precision))
                    .collect();
                partition
                    .iter()
                    .map(|&col| {
                        let (j, k) = (col / (self.d + 1), col % (self.d + 1));
                        let mut v = partial_values[j].clone();
                        for _ in 0..k {
                            v = v.mul(t);
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

fn max_abs(values: &[BigFloat], precision: u32) -> BigFloat {
    let mut best = BigFloat::zero(precision);
    for v in values {
        if v.cmp_abs(&best) == core::cmp::Ordering::Greater {
            best = v.abs();
        }
    }
    best
}

/// Runs the whole continuation path for a prepared job. See the module
/// docs for the policy: full step first, halving on divergence, doubling
/// back after success, everything deterministic.
pub fn newton_deform(job: &ContinuationJob) -> Result<ContinuationReport, CoreError> {
    let precision = job.precision;
    let d = job.curve.degree_bound();
    let n1 = job.curve.len();
    let tol = BigFloat::from_rational(&job.tolerance, precision);
    let pivot_floor = BigFloat::pow2(-((precision / 2) as i64), precision);

    // Flat coefficient vector of the start curve, exactly converted.
    let mut coeffs: Vec<BigFloat> = Vec::with_capacity(n1 * (d + 1));
    for comp in job.curve.components() {
        for k in 0..=d {
            let c = comp.coeff(k);
            coeffs.push(BigFloat::from_rational(
                c.as_rational().expect("rational ctx"),
                precision,
            ));
        }
    }

    let mut equations: Vec<(usize, BigFloat)> = Vec::new();
    for (i, group) in job.points.groups().iter().enumerate() {
        for t in group {
            equations.push((
                i,
                BigFloat::from_rational(t.as_rational().expect("rational ctx"), precision),
            ));
        }
    }
    if equations.len() != job.partition.len() {
        return Err(CoreError::DimensionMismatch(
            "coefficient partition size must match the equation count".into(),
        ));
    }

    let mut report = ContinuationReport {
        legs: Vec::new(),
        reached: BigRational::zero(),
        converged: false,
        failure: None,
        final_residual: BigFloat::zero(precision),
        final_residual_exactly_zero: false,
        endpoint_min_pivot: None,
        total_iterations: 0,
        deformed_coefficients: coeffs.clone(),
    };

    if job.epsilon.is_zero() {
        // Nothing moves; the incidence identities hold exactly on the
        // witness, and the residual is zero as a rational number.
        report.converged = true;
        report.final_residual_exactly_zero = true;
        let forms = job.ci.forms().to_vec();
        report.endpoint_min_pivot =
            endpoint_pivot(&forms, &coeffs, &pivot_floor, precision, d, n1, &equations)?;
        return Ok(report);
    }

    let mut workspace = Workspace {
        n1,
        d,
        precision,
        equations,
        partials: Vec::new(),
    };

    let mut reached = BigRational::zero();
    let mut step = job.epsilon.clone();
    let mut subdivisions = 0u32;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));

    while reached < job.epsilon {
        let target = {
            let t = &reached + &step;
            if t > job.epsilon {
                job.epsilon.clone()
            } else {
                t
            }
        };
        let forms = perturbed_forms(job, &target);
        workspace.partials = forms
            .iter()
            .map(|f| (0..n1).map(|j| f.partial_derivative(j)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;

        let saved = coeffs.clone();
        let mut leg = NewtonLeg {
            target: target.clone(),
            residuals: Vec::new(),
            iterations: 0,
            converged: false,
        };
        let mut res = workspace.residuals(&forms, &coeffs);
        let mut res_max = max_abs(&res, precision);
        leg.residuals.push(res_max.clone());
        let mut singular: Option<String> = None;

        while !leg.converged {
            if res_max.cmp_abs(&tol) != core::cmp::Ordering::Greater {
                leg.converged = true;
                break;
            }
            if leg.iterations == job.max_iterations {
                break;
            }
            // Divergence cut: once past the first update, a growing
            // residual will not come back.
            if leg.iterations >= 2 {
                let prev = &leg.residuals[leg.residuals.len() - 2];
                if res_max.cmp_abs(prev) == core::cmp::Ordering::Greater {
                    break;
                }
            }
            let jac = workspace.jacobian(&coeffs, &job.partition);
            let rhs: Vec<BigFloat> = res.iter().map(|r| r.neg()).collect();
            match solve_square(&jac, &rhs, &pivot_floor) {
                Ok((delta, _)) => {
                    for (slot, dv) in job.partition.iter().zip(&delta) {
                        coeffs[*slot] = coeffs[*slot].add(dv);
                    }
                }
                Err(e) => {
                    singular = Some(alloc::format!("{e}"));
                    break;
                }
            }
            leg.iterations += 1;
            report.total_iterations += 1;
            res = workspace.residuals(&forms, &coeffs);
            res_max = max_abs(&res, precision);
            leg.residuals.push(res_max.clone());
        }

        if leg.converged {
            reached = target.clone();
            report.final_residual = res_max.clone();
            report.legs.push(leg);
            // Try to take the rest in one leg again.
            step = {
                let doubled = &step + &step;
                let rest = &job.epsilon - &reached;
                if doubled > rest && !rest.is_zero() {
                    rest
                } else {
                    doubled
                }
            };
        } else {
            coeffs = saved;
            report.legs.push(leg);
            if subdivisions == job.max_subdivisions {
                report.reached = reached;
                report.failure = Some(match singular {
                    Some(s) => s,
                    None => alloc::format!(
                        "subdivision budget {} exhausted before reaching the step",
                        job.max_subdivisions
                    ),
                });
                report.deformed_coefficients = coeffs;
                return Ok(report);
            }
            subdivisions += 1;
            step = &step * &half;
            if let Some(s) = singular {
                // Remember the first singularity encountered; overwritten
                // only by a later hard failure.
                if report.failure.is_none() {
                    report.failure = Some(alloc::format!("retried after: {s}"));
                }
            }
        }
    }

    report.reached = reached;
    report.converged = true;
    report.failure = None;
    let final_forms = perturbed_forms(job, &job.epsilon);
    report.endpoint_min_pivot =
        endpoint_pivot(&final_forms, &coeffs, &pivot_floor, precision, d, n1,
                       &workspace.equations)?;
    report.deformed_coefficients = coeffs;
    Ok(report)
}

/// Full-width incidence matrix at the (possibly deformed) endpoint,
/// reduced numerically: evidence that the Jacobian stayed away from the
/// rank-drop locus along the path.
#[allow(clippy::too_many_arguments)]
fn endpoint_pivot(
    forms: &[HomForm],
    coeffs: &[BigFloat],
    pivot_floor: &BigFloat,
    precision: u32,
    d: usize,
    n1: usize,
    equations: &[(usize, BigFloat)],
) -> Result<Option<BigFloat>, CoreError> {
    let mut rows: Vec<Vec<BigFloat>> = Vec::with_capacity(equations.len());
    for (i, t) in equations {
        let point: Vec<BigFloat> = (0..n1)
            .map(|j| eval_component(coeffs, j, d, t, precision))
            .collect();
        let mut row = Vec::with_capacity(n1 * (d + 1));
        for j in 0..n1 {
            let pv = eval_form(&forms[*i].partial_derivative(j)?, &point, precision);
            let mut power = BigFloat::from_i64(1, precision);
            for _ in 0..=d {
                row.push(pv.mul(&power));
                power = power.mul(t);
            }
        }
        rows.push(row);
    }
    Ok(min_row_pivot(&rows, pivot_floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::CicyType;
    use crate::rng::SeededRng;
    use crate::witness::{build_witness, WitnessMode};
    use num_traits::One;

    fn quintic_job(seed: u64, d: usize, eps_num: i64, eps_den: i64) -> ContinuationJob {
        let ctx = ScalarCtx::Rational;
        let mut rng = SeededRng::new(seed);
        let w = build_witness(&mut rng, ctx, CicyType::Quintic5, d, WitnessMode::Pattern).unwrap();
        let delta = alloc::vec![rng.homform_dense(ctx, 5, 5, 5)];
        ContinuationJob::prepare(
            w.ci,
            w.curve,
            delta,
            BigRational::new(BigInt::from(eps_num), BigInt::from(eps_den)),
            BigRational::new(BigInt::from(1), BigInt::from(10u64.pow(12))),
            128,
            10,
            16,
        )
        .unwrap()
    }

    #[test]
    fn zero_step_gives_exactly_zero_residual() {
        let job = quintic_job(201, 1, 0, 1);
        let report = newton_deform(&job).unwrap();
        assert!(report.converged);
        assert!(report.final_residual_exactly_zero);
        assert!(report.final_residual.is_zero());
        assert_eq!(report.total_iterations, 0);
        assert!(report.legs.is_empty());
        assert!(report.endpoint_min_pivot.is_some());
    }

    #[test]
    fn small_step_converges_quadratically_below_tolerance() {
        let job = quintic_job(202, 1, 1, 1000);
        let report = newton_deform(&job).unwrap();
        assert!(report.converged, "failure: {:?}", report.failure);
        assert_eq!(report.reached, job.epsilon);
        assert!(report.total_iterations <= 10, "{} iterations", report.total_iterations);
        let tol = BigFloat::from_rational(&job.tolerance, 128);
        assert!(report.final_residual.cmp_abs(&tol) != core::cmp::Ordering::Greater);
        assert!(!report.final_residual.is_zero());
        assert!(!report.final_residual_exactly_zero);
        let floor = BigFloat::pow2(-96, 128);
        for leg in &report.legs {
            assert!(leg.converged);
            assert!(leg.shows_quadratic_decay(&floor, 20), "trace {:?}", leg.residuals);
        }
        assert!(report.endpoint_min_pivot.is_some());
    }

    #[test]
    fn traces_are_bitwise_reproducible() {
        let r1 = newton_deform(&quintic_job(203, 1, 1, 1000)).unwrap();
        let r2 = newton_deform(&quintic_job(203, 1, 1, 1000)).unwrap();
        assert_eq!(r1.legs.len(), r2.legs.len());
        for (a, b) in r1.legs.iter().zip(&r2.legs) {
            assert_eq!(a.residuals, b.residuals);
        }
        assert_eq!(r1.final_residual, r2.final_residual);
    }

    #[test]
    fn oversized_step_subdivides_instead_of_failing() {
        // A big step may or may not converge directly; what is forbidden
        // is a bare error. Either the path completes or the report says
        // why not.
        let job = quintic_job(204, 1, 3, 10);
        let report = newton_deform(&job).unwrap();
        if report.converged {
            assert_eq!(report.reached, job.epsilon);
        } else {
            assert!(report.failure.is_some());
            assert!(report.reached < job.epsilon);
        }
    }

    #[test]
    fn prepare_rejects_bad_jobs() {
        let ctx = ScalarCtx::Rational;
        let mut rng = SeededRng::new(205);
        let w = build_witness(&mut rng, ctx, CicyType::Quintic5, 1, WitnessMode::Pattern).unwrap();
        let delta = alloc::vec![rng.homform_dense(ctx, 5, 5, 5)];
        let bad_tol = ContinuationJob::prepare(
            w.ci.clone(),
            w.curve.clone(),
            delta.clone(),
            BigRational::zero(),
            BigRational::zero(),
            128,
            10,
            8,
        );
        assert!(matches!(bad_tol, Err(CoreError::ParameterOutOfRange(_))));
        let bad_precision = ContinuationJob::prepare(
            w.ci.clone(),
            w.curve.clone(),
            delta.clone(),
            BigRational::zero(),
            BigRational::one(),
            32,
            10,
            8,
        );
        assert!(matches!(bad_precision, Err(CoreError::ParameterOutOfRange(_))));
        let bad_count = ContinuationJob::prepare(
            w.ci.clone(),
            w.curve.clone(),
            Vec::new(),
            BigRational::zero(),
            BigRational::one(),
            128,
            10,
            8,
        );
        assert!(matches!(bad_count, Err(CoreError::DimensionMismatch(_))));
    }
}
