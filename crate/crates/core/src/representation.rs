//! Representation of a frame family via a single linear operator:
//! `Theta_{k+1} = T Theta_k` across consecutive window indices.
//!
//! The solver finds the least-squares representer supported on `span{M_k}`,
//! reports its residual and its extreme singular values on the span, checks
//! the norm sandwich `1 <= ||T|| <= sqrt(B/A)` under its hypotheses, verifies
//! that the kernel of the synthesis operator is invariant under the cyclic
//! right shift, and renders the obstruction to invertible representers of
//! tight families as a window-growth divergence scan.

use num_complex::Complex;

use crate::frame::{FrameBounds, FrameError, FrameFamily, StructureChecks, WindowSemantics};
use crate::numerics::{
    least_squares_solve, nullspace_basis, svd, vec_dot, vec_norm, ComplexMatrix, NumericsError,
};
use crate::scalar::{default_tolerance, Real};

/// Norms below this are compared absolutely when forming relative residuals.
const ZERO_NORM_FLOOR: f64 = 1e-14;

#[derive(Debug, thiserror::Error)]
pub enum RepresentError {
    #[error("representation needs at least two members, found {found}")]
    TooFewMembers { found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("hypothesis violated: {hypothesis}")]
    HypothesisViolation { hypothesis: Hypothesis },
    #[error("operation requires cyclic window semantics: {context}")]
    SemanticsUnsupported { context: String },
    #[error("generator violation at half-width {half_width}: {context}")]
    GeneratorViolation { half_width: usize, context: String },
    #[error("window list must not be empty")]
    EmptyWindows,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Hypotheses behind the norm sandwich of a representer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// Window semantics must be cyclic so reindexing is a bijection.
    CyclicSemantics,
    /// The representer must actually represent the family at tolerance.
    ResidualWithinTol,
    /// Every member operator must be self-adjoint.
    SelfAdjoint,
    /// Every member must map its subspace onto itself.
    OntoSubspace,
    /// The frame operator must be invertible on `span{M_k}`.
    FrameOnSpan,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Hypothesis::CyclicSemantics => "cyclic window semantics",
            Hypothesis::ResidualWithinTol => "representation residual within tolerance",
            Hypothesis::SelfAdjoint => "self-adjoint members",
            Hypothesis::OntoSubspace => "members map their subspaces onto themselves",
            Hypothesis::FrameOnSpan => "frame operator invertible on the subspace span",
        };
        f.write_str(name)
    }
}

impl Hypothesis {
    pub fn key(self) -> &'static str {
        match self {
            Hypothesis::CyclicSemantics => "cyclic_semantics",
            Hypothesis::ResidualWithinTol => "residual_within_tol",
            Hypothesis::SelfAdjoint => "self_adjoint",
            Hypothesis::OntoSubspace => "onto_subspace",
            Hypothesis::FrameOnSpan => "frame_on_span",
        }
    }
}

/// A solved (or candidate) representer with its quality numbers.
#[derive(Clone, Debug)]
pub struct Representer<R: Real> {
    /// The operator embedded as `n x n`, zero on the orthogonal complement
    /// of `span{M_k}`.
    pub operator: ComplexMatrix<R>,
    /// Max over consecutive pairs of the relative residual
    /// `||T Theta_k - Theta_{k+1}||_F / ||Theta_{k+1}||_F`.
    pub residual: R,
    /// Largest singular value of the operator restricted to the span.
    pub op_norm: R,
    /// Smallest singular value of the operator restricted to the span.
    pub min_singular: R,
}

/// Consecutive index pairs per window semantics: truncated windows stop at
/// `k_max - 1`, cyclic windows wrap around.
fn representation_pairs<R: Real>(
    family: &FrameFamily<R>,
) -> Vec<(&ComplexMatrix<R>, &ComplexMatrix<R>)> {
    let members = family.members();
    let count = members.len();
    match family.semantics() {
        WindowSemantics::Truncated => (0..count.saturating_sub(1))
            .map(|i| (&members[i].theta, &members[i + 1].theta))
            .collect(),
        WindowSemantics::Cyclic => (0..count)
            .map(|i| (&members[i].theta, &members[(i + 1) % count].theta))
            .collect(),
    }
}

/// Max relative residual of `T Theta_k = Theta_{k+1}` over all pairs.
pub fn representation_residual<R: Real>(
    family: &FrameFamily<R>,
    operator: &ComplexMatrix<R>,
) -> Result<R, RepresentError> {
    if operator.rows() != family.dim() || operator.cols() != family.dim() {
        return Err(RepresentError::DimMismatch {
            expected: family.dim(),
            found: operator.rows().max(operator.cols()),
        });
    }
    operator.validate_finite().map_err(RepresentError::from)?;
    let floor = R::from_f64_lossy(ZERO_NORM_FLOOR);
    let mut worst = R::zero();
    for (lhs, rhs) in representation_pairs(family) {
        let err = operator.mul(lhs).sub(rhs).fro_norm();
        let scale = rhs.fro_norm();
        let rel = if scale < floor { err } else { err / scale };
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// Least-squares representer supported on `span{M_k}`.
///
/// Minimizes `sum_k ||T Theta_k - Theta_{k+1}||_F^2` and returns the
/// minimum-norm solution on rank deficiency. Because every operator maps into
/// the span, the minimum-norm solution is automatically zero on the span's
/// orthogonal complement.
pub fn solve_representer<R: Real>(
    family: &FrameFamily<R>,
) -> Result<Representer<R>, RepresentError> {
    if family.len() < 2 {
        return Err(RepresentError::TooFewMembers {
            found: family.len(),
        });
    }
    let pairs = representation_pairs(family);
    let lhs: Vec<ComplexMatrix<R>> = pairs.iter().map(|(l, _)| (*l).clone()).collect();
    let rhs: Vec<ComplexMatrix<R>> = pairs.iter().map(|(_, r)| (*r).clone()).collect();
    let operator = least_squares_solve(&lhs, &rhs)?;
    let residual = representation_residual(family, &operator)?;
    let (op_norm, min_singular) = span_singular_extremes(family, &operator)?;
    Ok(Representer {
        operator,
        residual,
        op_norm,
        min_singular,
    })
}

/// Extreme singular values of `operator` restricted to `span{M_k}`.
pub fn span_singular_extremes<R: Real>(
    family: &FrameFamily<R>,
    operator: &ComplexMatrix<R>,
) -> Result<(R, R), RepresentError> {
    let q = family.span_basis()?;
    let restricted = q.adjoint().mul(operator).mul(&q);
    let sigma = svd(&restricted)?.sigma;
    let max = sigma.first().copied().unwrap_or_else(R::zero);
    let min = sigma.last().copied().unwrap_or_else(R::zero);
    Ok((max, min))
}

/// Whether `operator` represents the family within `tol`.
pub fn verify_representation<R: Real>(
    family: &FrameFamily<R>,
    operator: &ComplexMatrix<R>,
    tol: R,
) -> Result<bool, RepresentError> {
    Ok(representation_residual(family, operator)? <= tol)
}

/// Everything the sandwich check measures, with hypothesis outcomes.
///
/// The audit never raises on a failed hypothesis; it reports. Assertion is
/// the caller's decision (`norm_sandwich_check`) and is only meaningful under
/// cyclic semantics, where reindexing over the window is exact.
#[derive(Clone, Debug)]
pub struct SandwichAudit<R: Real> {
    pub op_norm: R,
    /// Bounds of the frame operator restricted to the subspace span.
    pub bounds_on_span: FrameBounds<R>,
    pub span_dim: usize,
    /// `sqrt(B/A)` on the span; absent when not a frame there.
    pub upper_limit: Option<R>,
    /// Hypotheses that failed, in check order.
    pub failures: Vec<Hypothesis>,
    /// `1 - tol <= op_norm <= sqrt(B/A) + tol`; absent without an upper limit.
    pub within: Option<bool>,
    pub tol: R,
}

impl<R: Real> SandwichAudit<R> {
    pub fn hypotheses_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Measure the norm sandwich and every hypothesis behind it.
pub fn sandwich_audit<R: Real>(
    family: &FrameFamily<R>,
    representer: &Representer<R>,
    tol: R,
) -> Result<SandwichAudit<R>, RepresentError> {
    let mut failures = Vec::new();
    if family.semantics() != WindowSemantics::Cyclic {
        failures.push(Hypothesis::CyclicSemantics);
    }
    if representer.residual > tol {
        failures.push(Hypothesis::ResidualWithinTol);
    }
    let structure = family.validate_structure(StructureChecks::representation_hypotheses(), tol);
    if !structure.self_adjoint_ok() {
        failures.push(Hypothesis::SelfAdjoint);
    }
    if !structure.onto_ok() {
        failures.push(Hypothesis::OntoSubspace);
    }
    let (bounds, span_dim) = family.frame_bounds_on_span()?;
    let is_frame_on_span = bounds.is_frame(R::from_f64_lossy(crate::frame::FRAME_RATIO_TOL));
    if !is_frame_on_span {
        failures.push(Hypothesis::FrameOnSpan);
    }
    let upper_limit = is_frame_on_span.then(|| (bounds.upper / bounds.lower).sqrt());
    let within = upper_limit
        .map(|limit| representer.op_norm >= R::one() - tol && representer.op_norm <= limit + tol);
    Ok(SandwichAudit {
        op_norm: representer.op_norm,
        bounds_on_span: bounds,
        span_dim,
        upper_limit,
        failures,
        within,
        tol,
    })
}

/// Sandwich report with all three numbers, produced only when every
/// hypothesis holds.
#[derive(Clone, Debug)]
pub struct SandwichReport<R: Real> {
    pub op_norm: R,
    /// Always 1.
    pub lower_limit: R,
    pub upper_limit: R,
    pub bounds_on_span: FrameBounds<R>,
    pub within: bool,
}

/// Assert-mode sandwich check: fails with `HypothesisViolation` naming the
/// first failed hypothesis instead of reporting around it.
pub fn norm_sandwich_check<R: Real>(
    family: &FrameFamily<R>,
    representer: &Representer<R>,
    tol: R,
) -> Result<SandwichReport<R>, RepresentError> {
    let audit = sandwich_audit(family, representer, tol)?;
    if let Some(&hypothesis) = audit.failures.first() {
        return Err(RepresentError::HypothesisViolation { hypothesis });
    }
    Ok(SandwichReport {
        op_norm: audit.op_norm,
        lower_limit: R::one(),
        upper_limit: audit.upper_limit.expect("frame on span verified"),
        bounds_on_span: audit.bounds_on_span,
        within: audit.within.expect("upper limit available"),
    })
}

/// Kernel dimension of the synthesis operator and how far the cyclic right
/// shift moves its basis out of the kernel.
#[derive(Clone, Copy, Debug)]
pub struct ShiftInvarianceReport<R: Real> {
    pub kernel_dim: usize,
    /// Largest relative distance of a shifted kernel basis vector from the
    /// kernel subspace.
    pub max_violation: R,
}

/// Check that `N_U` is invariant under the cyclic right shift of block
/// sequences.
///
/// The kernel is computed from the stacked synthesis matrix at the default
/// rank tolerance. Truncated windows have no shift bijection and are
/// rejected; a representer whose residual exceeds `tol` violates the
/// hypothesis that makes invariance meaningful.
pub fn kernel_shift_invariance<R: Real>(
    family: &FrameFamily<R>,
    representer: &Representer<R>,
    tol: R,
) -> Result<ShiftInvarianceReport<R>, RepresentError> {
    if family.semantics() != WindowSemantics::Cyclic {
        return Err(RepresentError::SemanticsUnsupported {
            context: "kernel shift invariance needs a cyclic window".into(),
        });
    }
    if representer.residual > tol {
        return Err(RepresentError::HypothesisViolation {
            hypothesis: Hypothesis::ResidualWithinTol,
        });
    }
    let u = family.synthesis_matrix();
    let basis = nullspace_basis(&u, default_tolerance())?;
    let kernel_dim = basis.len();
    if kernel_dim == 0 {
        return Ok(ShiftInvarianceReport {
            kernel_dim,
            max_violation: R::zero(),
        });
    }
    let n = family.dim();
    let count = family.len();
    let mut max_violation = R::zero();
    for v in &basis {
        // Right shift: the block at slot i moves to slot (i + 1) mod count.
        let mut shifted = vec![Complex::new(R::zero(), R::zero()); v.len()];
        for i in 0..count {
            let dst = (i + 1) % count;
            shifted[dst * n..(dst + 1) * n].copy_from_slice(&v[i * n..(i + 1) * n]);
        }
        // Distance from the kernel subspace via the projector sum.
        let mut residual = shifted.clone();
        for b in &basis {
            let coeff = vec_dot(b, &shifted);
            for (r, x) in residual.iter_mut().zip(b) {
                *r = *r - *x * coeff;
            }
        }
        let violation = vec_norm(&residual) / vec_norm(&shifted);
        max_violation = max_violation.max(violation);
    }
    Ok(ShiftInvarianceReport {
        kernel_dim,
        max_violation,
    })
}

/// Generator handing out, per half-width `K`, a truncated family on
/// `[-K, K]` together with its candidate representer.
pub type WindowGenerator<'a, R> =
    dyn Fn(usize) -> Result<(FrameFamily<R>, ComplexMatrix<R>), RepresentError> + 'a;

/// One window of the divergence scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanRow<R: Real> {
    pub half_width: usize,
    pub member_count: usize,
    /// Upper frame bound `B(K)`.
    pub upper_bound: R,
    /// `(2K + 1) * B_0` from the single-member base bound.
    pub predicted: R,
    pub rel_error: R,
    /// Growth ratio against the first window within 5 percent.
    pub ratio_ok: bool,
}

/// Divergence scan result: linear growth of `B(K)` in the member count.
#[derive(Clone, Debug)]
pub struct ScanReport<R: Real> {
    pub rows: Vec<ScanRow<R>>,
    /// Upper bound of the single-member `K = 0` family.
    pub base_bound: R,
    /// Log-log slope of `B(K)` against the member count; absent for a single
    /// window.
    pub growth_slope: Option<R>,
    pub slope_ok: bool,
    pub ratios_ok: bool,
}

/// Tolerance on the growth-ratio and slope verdicts.
const GROWTH_TOLERANCE: f64 = 0.05;
/// Relative tolerance for tightness and isometry of generator output.
const GENERATOR_TOL: f64 = 1e-9;

/// Window-growth rendering of the obstruction to invertible representers.
///
/// For a tight family whose candidate representer is an invertible isometry,
/// every member contributes the same energy, so the upper frame bound grows
/// linearly with the window: no bounded `Z`-indexed frame can exist. The scan
/// verifies the generator's promises (tight at each window, candidate with
/// all singular values 1) and reports `B(K)` with its linear prediction and
/// the fitted growth exponent.
pub fn invertibility_obstruction_scan<R: Real>(
    generator: &WindowGenerator<'_, R>,
    windows: &[usize],
) -> Result<ScanReport<R>, RepresentError> {
    if windows.is_empty() {
        return Err(RepresentError::EmptyWindows);
    }
    let gen_tol = R::from_f64_lossy(GENERATOR_TOL);

    let (base_family, _) = generator(0)?;
    let base_bound = base_family.frame_bounds()?.upper;

    let mut rows: Vec<ScanRow<R>> = Vec::with_capacity(windows.len());
    let mut first: Option<(usize, R)> = None;
    for &half_width in windows {
        let (family, candidate) = generator(half_width)?;
        if family.semantics() != WindowSemantics::Truncated {
            return Err(RepresentError::GeneratorViolation {
                half_width,
                context: "scan families must use truncated windows".into(),
            });
        }
        let expected_count = 2 * half_width + 1;
        if family.len() != expected_count {
            return Err(RepresentError::GeneratorViolation {
                half_width,
                context: format!(
                    "expected {expected_count} members on [-{half_width}, {half_width}], found {}",
                    family.len()
                ),
            });
        }
        if !family.is_tight(gen_tol)? {
            return Err(RepresentError::GeneratorViolation {
                half_width,
                context: "family is not tight".into(),
            });
        }
        let sigma = svd(&candidate)?.sigma;
        let max = sigma.first().copied().unwrap_or_else(R::zero);
        let min = sigma.last().copied().unwrap_or_else(R::zero);
        if (max - R::one()).abs() > gen_tol || (min - R::one()).abs() > gen_tol {
            return Err(RepresentError::GeneratorViolation {
                half_width,
                context: format!(
                    "candidate is not an invertible isometry (singular values in [{:e}, {:e}])",
                    min.as_f64(),
                    max.as_f64()
                ),
            });
        }
        let upper = family.frame_bounds()?.upper;
        let predicted = base_bound * R::from_f64_lossy(expected_count as f64);
        let rel_error = (upper - predicted).abs() / predicted;

        let ratio_ok = match first {
            None => {
                first = Some((expected_count, upper));
                true
            }
            Some((count0, upper0)) => {
                let measured = upper / upper0;
                let ideal = R::from_f64_lossy(expected_count as f64 / count0 as f64);
                ((measured / ideal) - R::one()).abs() <= R::from_f64_lossy(GROWTH_TOLERANCE)
            }
        };
        rows.push(ScanRow {
            half_width,
            member_count: expected_count,
            upper_bound: upper,
            predicted,
            rel_error,
            ratio_ok,
        });
    }

    let growth_slope = if rows.len() >= 2 {
        Some(log_log_slope(&rows))
    } else {
        None
    };
    let slope_ok =
        growth_slope.is_none_or(|s| (s - R::one()).abs() <= R::from_f64_lossy(GROWTH_TOLERANCE));
    let ratios_ok = rows.iter().all(|r| r.ratio_ok);
    Ok(ScanReport {
        rows,
        base_bound,
        growth_slope,
        slope_ok,
        ratios_ok,
    })
}

/// Least-squares slope of `ln B(K)` against `ln(member count)`.
fn log_log_slope<R: Real>(rows: &[ScanRow<R>]) -> R {
    let n = R::from_f64_lossy(rows.len() as f64);
    let xs: Vec<R> = rows
        .iter()
        .map(|r| R::from_f64_lossy(r.member_count as f64).ln())
        .collect();
    let ys: Vec<R> = rows.iter().map(|r| r.upper_bound.ln()).collect();
    let mean_x = xs.iter().fold(R::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(R::zero(), |a, &y| a + y) / n;
    let mut num = R::zero();
    let mut den = R::zero();
    for (x, y) in xs.iter().zip(&ys) {
        num = num + (*x - mean_x) * (*y - mean_y);
        den = den + (*x - mean_x) * (*x - mean_x);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FrameMember;
    use approx::assert_relative_eq;

    type M = ComplexMatrix<f64>;

    fn shift(n: usize, by: usize) -> M {
        M::from_fn(n, n, |i, j| {
            if i == (j + by) % n {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    fn full_family(dim: usize, semantics: WindowSemantics, thetas: Vec<M>) -> FrameFamily<f64> {
        let members = thetas
            .into_iter()
            .enumerate()
            .map(|(i, t)| FrameMember::full(i as i64, t))
            .collect();
        FrameFamily::new(dim, semantics, members).unwrap()
    }

    fn geometric_shift_family(n: usize, len: usize, r: f64) -> FrameFamily<f64> {
        let thetas = (0..len)
            .map(|k| shift(n, k % n).scale_real(r.powi(k as i32)))
            .collect();
        full_family(n, WindowSemantics::Truncated, thetas)
    }

    #[test]
    fn solver_recovers_scaled_shift() {
        let family = geometric_shift_family(4, 5, 0.5);
        let rep = solve_representer(&family).unwrap();
        assert!(rep.residual <= 1e-10);
        let expected = shift(4, 1).scale_real(0.5);
        assert!(rep.operator.sub(&expected).fro_norm() <= 1e-10);
        assert_relative_eq!(rep.op_norm, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn constant_invertible_family_yields_identity() {
        let theta = M::from_real(2, &[2.0, 1.0, 1.0, 2.0]);
        let family = full_family(
            2,
            WindowSemantics::Truncated,
            vec![theta.clone(), theta.clone(), theta],
        );
        let rep = solve_representer(&family).unwrap();
        assert!(rep.operator.sub(&M::identity(2)).fro_norm() <= 1e-10);
        assert!(rep.residual <= 1e-12);
    }

    #[test]
    fn rank_one_swap_recovers_restricted_permutation() {
        // Theta_0 maps onto span{e1}, Theta_1 sends e1 to e2; the minimum
        // norm representer is the swap restricted to span{e1}.
        let theta0 = M::from_real(2, &[1.0, 0.0, 0.0, 0.0]);
        let theta1 = M::from_real(2, &[0.0, 0.0, 1.0, 0.0]);
        let family = full_family(2, WindowSemantics::Truncated, vec![theta0, theta1]);
        let rep = solve_representer(&family).unwrap();
        assert!(rep.residual <= 1e-12);
        let expected = M::from_real(2, &[0.0, 0.0, 1.0, 0.0]);
        assert!(rep.operator.sub(&expected).fro_norm() <= 1e-12);
    }

    #[test]
    fn verify_accepts_exact_and_rejects_zero() {
        let family = geometric_shift_family(3, 4, 0.5);
        let rep = solve_representer(&family).unwrap();
        assert!(verify_representation(&family, &rep.operator, 1e-9).unwrap());
        let zero = M::zeros(3, 3);
        assert!(!verify_representation(&family, &zero, 1e-9).unwrap());
    }

    #[test]
    fn perturbed_representer_fails_tight_tolerance() {
        let family = geometric_shift_family(3, 4, 0.5);
        let rep = solve_representer(&family).unwrap();
        let bump = M::identity(3).scale_real(1e-3);
        let perturbed = rep.operator.add(&bump);
        assert!(!verify_representation(&family, &perturbed, 1e-6).unwrap());
    }

    #[test]
    fn resolving_transformed_family_is_idempotent() {
        let family = geometric_shift_family(4, 5, 0.8);
        let rep = solve_representer(&family).unwrap();
        let transformed = full_family(
            4,
            WindowSemantics::Truncated,
            family
                .members()
                .iter()
                .map(|m| rep.operator.mul(&m.theta))
                .collect(),
        );
        let rep2 = solve_representer(&transformed).unwrap();
        assert!(rep2.operator.sub(&rep.operator).fro_norm() <= 1e-6);
    }

    #[test]
    fn sandwich_rejects_non_self_adjoint_shift_family() {
        let thetas = (0..3).map(|k| shift(3, k)).collect();
        let family = full_family(3, WindowSemantics::Cyclic, thetas);
        let rep = solve_representer(&family).unwrap();
        let err = norm_sandwich_check(&family, &rep, 1e-9).unwrap_err();
        assert!(matches!(
            err,
            RepresentError::HypothesisViolation {
                hypothesis: Hypothesis::SelfAdjoint
            }
        ));
    }

    #[test]
    fn sandwich_holds_for_constant_projection_family() {
        let basis = M::from_rows(vec![
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
        ])
        .unwrap();
        let sub = crate::frame::Subspace::new(basis).unwrap();
        let theta = sub.projection();
        let members = (0..4)
            .map(|k| FrameMember::new(k, sub.clone(), theta.clone()))
            .collect();
        let family = FrameFamily::new(3, WindowSemantics::Cyclic, members).unwrap();
        let rep = solve_representer(&family).unwrap();
        let report = norm_sandwich_check(&family, &rep, 1e-9).unwrap();
        assert!(report.within);
        assert_relative_eq!(report.op_norm, 1.0, epsilon = 1e-10);
        assert_relative_eq!(report.upper_limit, 1.0, epsilon = 1e-10);
        assert_relative_eq!(report.bounds_on_span.lower, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn sandwich_audits_truncated_windows_without_asserting() {
        let family = geometric_shift_family(3, 4, 0.5);
        let rep = solve_representer(&family).unwrap();
        let audit = sandwich_audit(&family, &rep, 1e-9).unwrap();
        assert!(audit.failures.contains(&Hypothesis::CyclicSemantics));
        assert!(!audit.hypotheses_hold());
        // numbers are still measured
        assert!(audit.op_norm > 0.0);
    }

    #[test]
    fn trivial_kernel_reports_zero() {
        let family = full_family(2, WindowSemantics::Cyclic, vec![M::identity(2)]);
        // single-member cyclic family: U = I has no kernel
        let rep = Representer {
            operator: M::identity(2),
            residual: 0.0,
            op_norm: 1.0,
            min_singular: 1.0,
        };
        let report = kernel_shift_invariance(&family, &rep, 1e-9).unwrap();
        assert_eq!(report.kernel_dim, 0);
        assert_eq!(report.max_violation, 0.0);
    }

    #[test]
    fn scalar_pair_kernel_is_shift_invariant() {
        // m = 2 copies of the identity on C^1: N_U = span{(1, -1)}
        let family = full_family(
            1,
            WindowSemantics::Cyclic,
            vec![M::identity(1), M::identity(1)],
        );
        let rep = solve_representer(&family).unwrap();
        let report = kernel_shift_invariance(&family, &rep, 1e-9).unwrap();
        assert_eq!(report.kernel_dim, 1);
        assert!(report.max_violation <= 1e-10);
    }

    #[test]
    fn cyclic_shift_powers_have_invariant_kernel() {
        let thetas = (0..3).map(|k| shift(3, k)).collect();
        let family = full_family(3, WindowSemantics::Cyclic, thetas);
        let rep = solve_representer(&family).unwrap();
        assert!(rep.residual <= 1e-10);
        let report = kernel_shift_invariance(&family, &rep, 1e-9).unwrap();
        assert_eq!(report.kernel_dim, 6);
        assert!(report.max_violation <= 1e-9);
    }

    #[test]
    fn truncated_windows_cannot_shift() {
        let family = geometric_shift_family(3, 4, 0.5);
        let rep = solve_representer(&family).unwrap();
        assert!(matches!(
            kernel_shift_invariance(&family, &rep, 1e-9),
            Err(RepresentError::SemanticsUnsupported { .. })
        ));
    }

    fn identity_generator(half_width: usize) -> Result<(FrameFamily<f64>, M), RepresentError> {
        let count = 2 * half_width as i64 + 1;
        let members = (0..count)
            .map(|i| FrameMember::full(i - half_width as i64, M::identity(2)))
            .collect();
        Ok((
            FrameFamily::new(2, WindowSemantics::Truncated, members)?,
            M::identity(2),
        ))
    }

    #[test]
    fn identity_scan_grows_linearly() {
        let report = invertibility_obstruction_scan(&identity_generator, &[4, 8, 16]).unwrap();
        assert_eq!(report.base_bound, 1.0);
        let uppers: Vec<f64> = report.rows.iter().map(|r| r.upper_bound).collect();
        assert_eq!(uppers, vec![9.0, 17.0, 33.0]);
        assert!(report.rows.iter().all(|r| r.rel_error <= 1e-12));
        assert!(report.ratios_ok);
        assert_relative_eq!(report.growth_slope.unwrap(), 1.0, epsilon = 1e-12);
        assert!(report.slope_ok);
    }

    #[test]
    fn reflection_scan_grows_linearly() {
        let reflection = M::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let generator = |half_width: usize| -> Result<(FrameFamily<f64>, M), RepresentError> {
            let count = 2 * half_width as i64 + 1;
            let members = (0..count)
                .map(|i| {
                    let k = i - half_width as i64;
                    let theta = if k.rem_euclid(2) == 0 {
                        M::identity(2)
                    } else {
                        M::from_real(2, &[0.0, 1.0, 1.0, 0.0])
                    };
                    FrameMember::full(k, theta)
                })
                .collect();
            Ok((
                FrameFamily::new(2, WindowSemantics::Truncated, members)?,
                reflection.clone(),
            ))
        };
        let report = invertibility_obstruction_scan(&generator, &[4, 8, 16]).unwrap();
        let uppers: Vec<f64> = report.rows.iter().map(|r| r.upper_bound).collect();
        assert_eq!(uppers, vec![9.0, 17.0, 33.0]);
        assert!(report.slope_ok && report.ratios_ok);
    }

    #[test]
    fn scan_rejects_non_isometric_candidates() {
        let generator = |half_width: usize| -> Result<(FrameFamily<f64>, M), RepresentError> {
            let (family, _) = identity_generator(half_width)?;
            Ok((family, M::identity(2).scale_real(2.0)))
        };
        assert!(matches!(
            invertibility_obstruction_scan(&generator, &[2]),
            Err(RepresentError::GeneratorViolation { .. })
        ));
    }

    #[test]
    fn scan_rejects_loose_frames() {
        let generator = |half_width: usize| -> Result<(FrameFamily<f64>, M), RepresentError> {
            let count = 2 * half_width as i64 + 1;
            let members = (0..count)
                .map(|i| {
                    let theta = if i == 0 {
                        M::from_real(2, &[2.0, 0.0, 0.0, 1.0])
                    } else {
                        M::identity(2)
                    };
                    FrameMember::full(i - half_width as i64, theta)
                })
                .collect();
            Ok((
                FrameFamily::new(2, WindowSemantics::Truncated, members)?,
                M::identity(2),
            ))
        };
        assert!(matches!(
            invertibility_obstruction_scan(&generator, &[2]),
            Err(RepresentError::GeneratorViolation { .. })
        ));
    }

    #[test]
    fn empty_window_list_is_rejected() {
        assert!(matches!(
            invertibility_obstruction_scan(&identity_generator, &[]),
            Err(RepresentError::EmptyWindows)
        ));
    }

    #[test]
    fn canonical_dual_of_representable_family_shares_the_representer() {
        // Gamma_k = Theta_k S^{-1} satisfies Gamma_{k+1} = T Gamma_k for the
        // same T; verified numerically by re-solving on the dual.
        let thetas = (0..3).map(|k| shift(3, k)).collect();
        let family = full_family(3, WindowSemantics::Cyclic, thetas);
        let rep = solve_representer(&family).unwrap();
        let dual = family.canonical_dual().unwrap();
        let dual_rep = solve_representer(dual.family()).unwrap();
        assert!(dual_rep.residual <= 1e-10);
        assert!(dual_rep.operator.sub(&rep.operator).fro_norm() <= 1e-8);
    }
}
