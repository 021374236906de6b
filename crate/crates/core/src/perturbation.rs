//! Perturbation stability and linear-independence checks for frame families.
//!
//! The central object is the two-parameter relative perturbation condition
//! between a family `{Theta_k}` and a perturbed family `{Theta_hat_k}`:
//!
//! ```text
//! || sum_k c_k (Theta_k - Theta_hat_k) f ||
//!     <= alpha || sum_k c_k Theta_k f || + beta || sum_k c_k Theta_hat_k f ||
//! ```
//!
//! for all vectors `f` and finite coefficient sequences `c`. When it holds
//! with `alpha, beta` in `[0, 1)`, the perturbed family is again a frame with
//! explicit bounds `((1-alpha)/(1+beta))^2 A` and `((1+alpha)/(1-beta))^2 B`.
//!
//! The condition quantifies over an infinite set, so the checker samples:
//! every Kronecker-delta coefficient sequence (these drive the bound above)
//! against seeded random unit vectors, plus seeded random coefficient
//! sequences. Verdicts are labeled as sampled and violations carry a
//! reproducible witness.

use num_complex::Complex;

use crate::frame::{FrameBounds, FrameError, FrameFamily, WindowSemantics};
use crate::numerics::{matrix_rank, vec_norm, ComplexMatrix, NumericsError};
use crate::sampling::{random_coefficients, random_unit_vector, rng_from_seed};
use crate::scalar::Real;

/// Relative slack applied to the sampled condition so that exact boundary
/// equalities (e.g. uniformly scaled perturbations) pass under roundoff.
const EQUALITY_SLACK: f64 = 1e-9;

/// Norms below this are compared absolutely in relative residuals.
const ZERO_NORM_FLOOR: f64 = 1e-14;

#[derive(Debug, thiserror::Error)]
pub enum PerturbError {
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("invalid parameters: {context}")]
    InvalidParams { context: String },
    #[error("perturbation condition was not established before verification")]
    ConditionNotEstablished,
    #[error("index {index} is outside the truncated window [{k_min}, {k_max}]")]
    IndexOutOfWindow { index: i64, k_min: i64, k_max: i64 },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Perturbation parameters `alpha, beta` in `[0, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct PerturbationParams<R: Real> {
    alpha: R,
    beta: R,
}

impl<R: Real> PerturbationParams<R> {
    pub fn new(alpha: R, beta: R) -> Result<Self, PerturbError> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v >= R::zero() && v < R::one()) {
                return Err(PerturbError::InvalidParams {
                    context: format!("{name} must lie in [0, 1), got {:?}", v),
                });
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }

    pub fn beta(&self) -> R {
        self.beta
    }
}

/// A failing probe of the perturbation condition.
#[derive(Clone, Debug)]
pub struct Witness<R: Real> {
    pub coefficients: Vec<Complex<R>>,
    pub vector: Vec<Complex<R>>,
    pub lhs: R,
    pub rhs: R,
}

/// Outcome of the sampled condition check.
#[derive(Clone, Debug)]
pub enum ConditionVerdict<R: Real> {
    /// No sampled probe violated the condition.
    PassedSampled,
    /// The stored probe reproducibly violates the condition.
    ViolatedWitness(Witness<R>),
}

impl<R: Real> ConditionVerdict<R> {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionVerdict::PassedSampled)
    }
}

fn check_conformable<R: Real>(
    family: &FrameFamily<R>,
    perturbed: &FrameFamily<R>,
) -> Result<(), PerturbError> {
    if family.dim() != perturbed.dim()
        || family.len() != perturbed.len()
        || family.k_min() != perturbed.k_min()
        || family.semantics() != perturbed.semantics()
    {
        return Err(PerturbError::ShapeMismatch {
            context: format!(
                "families must share dim, window and semantics: \
                 {}x{} on [{}, {}] vs {}x{} on [{}, {}]",
                family.dim(),
                family.len(),
                family.k_min(),
                family.k_max(),
                perturbed.dim(),
                perturbed.len(),
                perturbed.k_min(),
                perturbed.k_max()
            ),
        });
    }
    Ok(())
}

/// Evaluate both sides of the perturbation condition at one probe.
///
/// Returns `(lhs, rhs)` where `rhs` includes the boundary-equality slack.
/// Re-evaluating a stored witness reproduces its verdict exactly.
pub fn evaluate_condition<R: Real>(
    family: &FrameFamily<R>,
    perturbed: &FrameFamily<R>,
    params: &PerturbationParams<R>,
    coefficients: &[Complex<R>],
    f: &[Complex<R>],
) -> Result<(R, R), PerturbError> {
    check_conformable(family, perturbed)?;
    if coefficients.len() != family.len() {
        return Err(PerturbError::ShapeMismatch {
            context: format!(
                "expected {} coefficients, got {}",
                family.len(),
                coefficients.len()
            ),
        });
    }
    if f.len() != family.dim() {
        return Err(PerturbError::ShapeMismatch {
            context: format!("expected probe of length {}, got {}", family.dim(), f.len()),
        });
    }
    let dim = family.dim();
    let mut base_sum = vec![Complex::new(R::zero(), R::zero()); dim];
    let mut pert_sum = vec![Complex::new(R::zero(), R::zero()); dim];
    for ((m, g), &c) in family
        .members()
        .iter()
        .zip(perturbed.members())
        .zip(coefficients)
    {
        if c.norm_sqr() == R::zero() {
            continue;
        }
        let mf = m.theta.mul_vec(f);
        let gf = g.theta.mul_vec(f);
        for i in 0..dim {
            base_sum[i] = base_sum[i] + mf[i] * c;
            pert_sum[i] = pert_sum[i] + gf[i] * c;
        }
    }
    let base_norm = vec_norm(&base_sum);
    let pert_norm = vec_norm(&pert_sum);
    let mut lhs = R::zero();
    for (a, b) in base_sum.iter().zip(&pert_sum) {
        lhs = lhs + (*a - *b).norm_sqr();
    }
    let lhs = lhs.sqrt();
    let slack = R::from_f64_lossy(EQUALITY_SLACK) * (base_norm + pert_norm);
    let rhs = params.alpha * base_norm + params.beta * pert_norm + slack;
    Ok((lhs, rhs))
}

/// Sampled check of the perturbation condition.
///
/// Probes, in deterministic order: every Kronecker-delta coefficient
/// sequence against `samples` random unit vectors each, then `samples`
/// random coefficient sequences with fresh random unit vectors. The first
/// violation wins.
pub fn check_perturbation_condition<R: Real>(
    family: &FrameFamily<R>,
    perturbed: &FrameFamily<R>,
    params: &PerturbationParams<R>,
    samples: usize,
    seed: u64,
) -> Result<ConditionVerdict<R>, PerturbError> {
    check_conformable(family, perturbed)?;
    let count = family.len();
    let dim = family.dim();
    let zero = Complex::new(R::zero(), R::zero());
    let one = Complex::new(R::one(), R::zero());
    let mut rng = rng_from_seed(seed);

    for member in 0..count {
        let mut coefficients = vec![zero; count];
        coefficients[member] = one;
        for _ in 0..samples {
            let f = random_unit_vector(&mut rng, dim);
            let (lhs, rhs) = evaluate_condition(family, perturbed, params, &coefficients, &f)?;
            if lhs > rhs {
                return Ok(ConditionVerdict::ViolatedWitness(Witness {
                    coefficients,
                    vector: f,
                    lhs,
                    rhs,
                }));
            }
        }
    }
    for _ in 0..samples {
        let coefficients = random_coefficients(&mut rng, count);
        let f = random_unit_vector(&mut rng, dim);
        let (lhs, rhs) = evaluate_condition(family, perturbed, params, &coefficients, &f)?;
        if lhs > rhs {
            return Ok(ConditionVerdict::ViolatedWitness(Witness {
                coefficients,
                vector: f,
                lhs,
                rhs,
            }));
        }
    }
    Ok(ConditionVerdict::PassedSampled)
}

/// Frame bounds guaranteed for the perturbed family:
/// `((1 - alpha)/(1 + beta))^2 A` and `((1 + alpha)/(1 - beta))^2 B`.
pub fn perturbed_frame_bounds<R: Real>(
    params: &PerturbationParams<R>,
    base: &FrameBounds<R>,
) -> Result<FrameBounds<R>, PerturbError> {
    let lower_positive = base.lower > R::zero();
    if !lower_positive {
        return Err(PerturbError::InvalidParams {
            context: "base lower frame bound must be positive".into(),
        });
    }
    let lower_factor = (R::one() - params.alpha) / (R::one() + params.beta);
    let upper_factor = (R::one() + params.alpha) / (R::one() - params.beta);
    Ok(FrameBounds {
        lower: lower_factor * lower_factor * base.lower,
        upper: upper_factor * upper_factor * base.upper,
    })
}

/// Full perturbation report: parameters, sampled verdict, guaranteed versus
/// measured spectral bounds, and the two-sided comparison.
#[derive(Clone, Debug)]
pub struct PerturbationReport<R: Real> {
    pub params: PerturbationParams<R>,
    pub condition: ConditionVerdict<R>,
    pub theoretical: FrameBounds<R>,
    pub computed: FrameBounds<R>,
    /// `theoretical.lower <= computed.lower + tol`
    pub lower_ok: bool,
    /// `computed.upper <= theoretical.upper + tol`
    pub upper_ok: bool,
}

impl<R: Real> PerturbationReport<R> {
    pub fn sandwich_ok(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Compare the perturbed family's spectral bounds against the guarantee.
///
/// The caller must have established the condition first; a verdict other
/// than `PassedSampled` is rejected.
pub fn verify_perturbed_frame<R: Real>(
    family: &FrameFamily<R>,
    perturbed: &FrameFamily<R>,
    params: &PerturbationParams<R>,
    condition: &ConditionVerdict<R>,
    tol: R,
) -> Result<PerturbationReport<R>, PerturbError> {
    if !condition.passed() {
        return Err(PerturbError::ConditionNotEstablished);
    }
    check_conformable(family, perturbed)?;
    let base = family.frame_bounds()?;
    let theoretical = perturbed_frame_bounds(params, &base)?;
    let computed = perturbed.frame_bounds()?;
    let lower_ok = theoretical.lower <= computed.lower + tol;
    let upper_ok = computed.upper <= theoretical.upper + tol;
    Ok(PerturbationReport {
        params: *params,
        condition: condition.clone(),
        theoretical,
        computed,
        lower_ok,
        upper_ok,
    })
}

/// Whether a list of same-shape operators is linearly independent.
///
/// Each operator is vectorized; independence is a rank decision at `tol`
/// relative to the largest singular value of the stacked matrix.
pub fn linear_independence<R: Real>(
    operators: &[ComplexMatrix<R>],
    tol: R,
) -> Result<bool, PerturbError> {
    if operators.is_empty() {
        return Err(PerturbError::ShapeMismatch {
            context: "need at least one operator".into(),
        });
    }
    let (rows, cols) = (operators[0].rows(), operators[0].cols());
    if operators
        .iter()
        .any(|m| m.rows() != rows || m.cols() != cols)
    {
        return Err(PerturbError::ShapeMismatch {
            context: "operators must share a shape".into(),
        });
    }
    let stacked = ComplexMatrix::from_rows(operators.iter().map(|m| m.vectorize()).collect())
        .map_err(PerturbError::from)?;
    Ok(matrix_rank(&stacked, tol)? == operators.len())
}

/// Whether `t_ext` intertwines the adjoint family: `t_ext Theta_k^H =
/// Theta_{k+1}^H` across consecutive pairs, at relative tolerance `tol`.
pub fn check_adjoint_intertwining<R: Real>(
    family: &FrameFamily<R>,
    t_ext: &ComplexMatrix<R>,
    tol: R,
) -> Result<bool, PerturbError> {
    if t_ext.rows() != family.dim() || t_ext.cols() != family.dim() {
        return Err(PerturbError::ShapeMismatch {
            context: format!(
                "operator must be {}x{}, got {}x{}",
                family.dim(),
                family.dim(),
                t_ext.rows(),
                t_ext.cols()
            ),
        });
    }
    let members = family.members();
    let count = members.len();
    let pairs: Vec<(usize, usize)> = match family.semantics() {
        WindowSemantics::Truncated => (0..count.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        WindowSemantics::Cyclic => (0..count).map(|i| (i, (i + 1) % count)).collect(),
    };
    let floor = R::from_f64_lossy(ZERO_NORM_FLOOR);
    for (i, j) in pairs {
        let lhs = t_ext.mul(&members[i].theta.adjoint());
        let rhs = members[j].theta.adjoint();
        let err = lhs.sub(&rhs).fro_norm();
        let scale = rhs.fro_norm();
        let rel = if scale < floor { err } else { err / scale };
        if rel > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Residual of the six-term dependency relation
/// `Theta_{2l-1} + Theta_{2l+1} + Theta_{2(l+N)-1} + Theta_{2(l+N)+1} -
/// 2 Theta_{2l+N-1} - 2 Theta_{2l+N+1}`, normalized by the largest member
/// norm of the family.
///
/// A residual of zero certifies the linear dependency that representable
/// families with an adjoint-intertwining extension must satisfy.
pub fn dependency_relation_residual<R: Real>(
    family: &FrameFamily<R>,
    ell: i64,
    steps: i64,
) -> Result<R, PerturbError> {
    if steps <= 0 {
        return Err(PerturbError::InvalidParams {
            context: format!("steps must be positive, got {steps}"),
        });
    }
    let indices = [
        2 * ell - 1,
        2 * ell + 1,
        2 * (ell + steps) - 1,
        2 * (ell + steps) + 1,
        2 * ell + steps - 1,
        2 * ell + steps + 1,
    ];
    let coefficients = [1.0, 1.0, 1.0, 1.0, -2.0, -2.0];
    let dim = family.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (&k, &c) in indices.iter().zip(&coefficients) {
        let member = family.member_at(k).ok_or(PerturbError::IndexOutOfWindow {
            index: k,
            k_min: family.k_min(),
            k_max: family.k_max(),
        })?;
        acc = acc.add(&member.theta.scale_real(R::from_f64_lossy(c)));
    }
    let scale = family
        .members()
        .iter()
        .fold(R::zero(), |m, member| m.max(member.theta.fro_norm()));
    Ok(acc.fro_norm() / scale)
}

/// Diagnostic for the index-additivity premise `Theta_a Theta_b =
/// Theta_{a+b}`: the Frobenius norm of the difference.
///
/// The dependency relation above implicitly merges operator products into
/// index sums; this residual shows on which families that premise holds.
pub fn product_vs_index_sum_residual<R: Real>(
    family: &FrameFamily<R>,
    a: i64,
    b: i64,
) -> Result<R, PerturbError> {
    let get = |k: i64| {
        family
            .member_at(k)
            .ok_or(PerturbError::IndexOutOfWindow {
                index: k,
                k_min: family.k_min(),
                k_max: family.k_max(),
            })
            .map(|m| &m.theta)
    };
    let ta = get(a)?;
    let tb = get(b)?;
    let tsum = get(a + b)?;
    Ok(ta.mul(tb).sub(tsum).fro_norm())
}

/// Lower bound for the smallest `alpha` making the condition hold with
/// `beta = 0`: the max over delta probes of
/// `||(Theta_i - Theta_hat_i) v|| / ||Theta_i v||` on sampled unit vectors.
///
/// This samples a supremum, so it only bounds the true minimal `alpha` from
/// below.
pub fn minimal_alpha_lower_bound<R: Real>(
    family: &FrameFamily<R>,
    perturbed: &FrameFamily<R>,
    samples: usize,
    seed: u64,
) -> Result<R, PerturbError> {
    check_conformable(family, perturbed)?;
    let mut rng = rng_from_seed(seed);
    let floor = R::from_f64_lossy(ZERO_NORM_FLOOR);
    let mut best = R::zero();
    for (m, g) in family.members().iter().zip(perturbed.members()) {
        for _ in 0..samples {
            let v = random_unit_vector(&mut rng, family.dim());
            let mv = m.theta.mul_vec(&v);
            let gv = g.theta.mul_vec(&v);
            let denom = vec_norm(&mv);
            if denom < floor {
                continue;
            }
            let mut num = R::zero();
            for (x, y) in mv.iter().zip(&gv) {
                num = num + (*x - *y).norm_sqr();
            }
            best = best.max(num.sqrt() / denom);
        }
    }
    Ok(best)
}
