//! g-fusion frame families over integer windows.
//!
//! A family pairs each window index `k` with a closed subspace `M_k` of `C^n`
//! and an operator `Theta_k` mapping `C^n` into `M_k`. The family is a frame
//! when `sum_k ||Theta_k f||^2` is pinched between `A ||f||^2` and
//! `B ||f||^2` for every `f`; the optimal constants are the extreme
//! eigenvalues of the frame operator `S = sum_k Theta_k^H Theta_k`.
//!
//! Families are immutable after construction and all operations are pure, so
//! values can be shared freely across threads. Sums run in window order for
//! reproducibility.

use num_complex::Complex;

use crate::numerics::{
    hermitian_eigenvalues, hermitian_inverse, matrix_rank, svd, vec_norm, ComplexMatrix,
    NumericsError,
};
use crate::scalar::{default_tolerance, Real};

/// Relative tolerance for the range-containment invariant of each member.
pub const RANGE_CONTAINMENT_TOL: f64 = 1e-9;
/// Frobenius tolerance for `basis^H basis = I` on subspace bases.
pub const SUBSPACE_ORTHONORMALITY_TOL: f64 = 1e-10;
/// A family counts as a frame when `lower > FRAME_RATIO_TOL * upper`.
pub const FRAME_RATIO_TOL: f64 = 1e-9;
/// Relative reconstruction error guaranteed by the canonical dual.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Errors from frame construction and frame operations.
#[derive(Debug, thiserror::Error)]
pub enum FrameError {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("family is not a frame (bounds {lower:e}, {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("block count mismatch: expected {expected}, found {found}")]
    BlockCountMismatch { expected: usize, found: usize },
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("block {index} lies outside its subspace (relative deviation {deviation:e})")]
    BlockOutsideSubspace { index: usize, deviation: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Closed subspace of `C^n` given by an orthonormal column basis.
#[derive(Clone, Debug)]
pub struct Subspace<R: Real> {
    basis: ComplexMatrix<R>,
}

impl<R: Real> Subspace<R> {
    /// Wrap an `n x d` matrix with orthonormal columns, `1 <= d <= n`.
    pub fn new(basis: ComplexMatrix<R>) -> Result<Self, FrameError> {
        basis.validate_finite().map_err(FrameError::from)?;
        let (n, d) = (basis.rows(), basis.cols());
        if d < 1 || d > n {
            return Err(FrameError::InvalidFamily(format!(
                "subspace dimension {d} must lie in 1..={n}"
            )));
        }
        let gram = basis.adjoint().mul(&basis);
        let deviation = gram.sub(&ComplexMatrix::identity(d)).fro_norm();
        if deviation > R::from_f64_lossy(SUBSPACE_ORTHONORMALITY_TOL) {
            return Err(FrameError::InvalidFamily(format!(
                "subspace basis is not orthonormal (Gram deviation {:e})",
                deviation.as_f64()
            )));
        }
        Ok(Self { basis })
    }

    /// The full ambient space `C^n`.
    pub fn full(n: usize) -> Self {
        Self {
            basis: ComplexMatrix::identity(n),
        }
    }

    /// Orthonormal basis of the column span of `m`, at the default rank
    /// tolerance.
    pub fn spanned_by(m: &ComplexMatrix<R>) -> Result<Self, FrameError> {
        let dec = svd(m)?;
        let sigma_max = dec.sigma.first().copied().unwrap_or_else(R::zero);
        let cut = default_tolerance::<R>() * sigma_max;
        let rank = dec.sigma.iter().filter(|&&s| s > cut).count();
        if rank == 0 {
            return Err(FrameError::InvalidFamily(
                "cannot span a subspace from a zero matrix".into(),
            ));
        }
        let basis = ComplexMatrix::from_fn(m.rows(), rank, |i, j| dec.u[(i, j)]);
        Self::new(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix<R> {
        &self.basis
    }

    /// Orthogonal projection `basis * basis^H` onto the subspace.
    pub fn projection(&self) -> ComplexMatrix<R> {
        self.basis.mul(&self.basis.adjoint())
    }
}

/// Finite renderings of the integer index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowSemantics {
    /// Indices live in `[k_min, k_max]`; sums over the integers truncate.
    Truncated,
    /// Indices are residues modulo the member count; shifts wrap around.
    Cyclic,
}

impl WindowSemantics {
    pub fn as_str(self) -> &'static str {
        match self {
            WindowSemantics::Truncated => "truncated",
            WindowSemantics::Cyclic => "cyclic",
        }
    }
}

/// One `(k, M_k, Theta_k)` triple.
#[derive(Clone, Debug)]
pub struct FrameMember<R: Real> {
    pub k: i64,
    pub subspace: Subspace<R>,
    pub theta: ComplexMatrix<R>,
}

impl<R: Real> FrameMember<R> {
    pub fn new(k: i64, subspace: Subspace<R>, theta: ComplexMatrix<R>) -> Self {
        Self { k, subspace, theta }
    }

    /// Member with the full ambient space as its subspace.
    pub fn full(k: i64, theta: ComplexMatrix<R>) -> Self {
        let n = theta.rows();
        Self::new(k, Subspace::full(n), theta)
    }
}

/// Indexed window of operators with their subspaces.
#[derive(Clone, Debug)]
pub struct FrameFamily<R: Real> {
    dim: usize,
    semantics: WindowSemantics,
    members: Vec<FrameMember<R>>,
}

impl<R: Real> FrameFamily<R> {
    /// Validate and freeze a family.
    ///
    /// Checks: member indices are consecutive, every operator is a finite
    /// `n x n` matrix whose range lies in its subspace (up to
    /// `RANGE_CONTAINMENT_TOL` relative), and at least one operator is
    /// nonzero.
    pub fn new(
        dim: usize,
        semantics: WindowSemantics,
        members: Vec<FrameMember<R>>,
    ) -> Result<Self, FrameError> {
        if dim == 0 {
            return Err(FrameError::InvalidFamily(
                "ambient dimension is zero".into(),
            ));
        }
        if members.is_empty() {
            return Err(FrameError::InvalidFamily("family has no members".into()));
        }
        let mut any_nonzero = false;
        for (i, m) in members.iter().enumerate() {
            if i > 0 && m.k != members[i - 1].k + 1 {
                return Err(FrameError::InvalidFamily(format!(
                    "window indices must be consecutive, found {} after {}",
                    m.k,
                    members[i - 1].k
                )));
            }
            if m.theta.rows() != dim || m.theta.cols() != dim {
                return Err(FrameError::InvalidFamily(format!(
                    "member k={} has shape {}x{}, expected {dim}x{dim}",
                    m.k,
                    m.theta.rows(),
                    m.theta.cols()
                )));
            }
            m.theta.validate_finite().map_err(FrameError::from)?;
            if m.subspace.ambient_dim() != dim {
                return Err(FrameError::InvalidFamily(format!(
                    "member k={} subspace lives in C^{}, expected C^{dim}",
                    m.k,
                    m.subspace.ambient_dim()
                )));
            }
            let theta_norm = m.theta.fro_norm();
            if theta_norm > R::zero() {
                any_nonzero = true;
                let deviation = range_deviation(&m.theta, &m.subspace);
                if deviation > R::from_f64_lossy(RANGE_CONTAINMENT_TOL) * theta_norm {
                    return Err(FrameError::InvalidFamily(format!(
                        "member k={} maps outside its subspace (relative deviation {:e})",
                        m.k,
                        (deviation / theta_norm).as_f64()
                    )));
                }
            }
        }
        if !any_nonzero {
            return Err(FrameError::InvalidFamily(
                "all member operators are zero".into(),
            ));
        }
        Ok(Self {
            dim,
            semantics,
            members,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn semantics(&self) -> WindowSemantics {
        self.semantics
    }

    pub fn members(&self) -> &[FrameMember<R>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn k_min(&self) -> i64 {
        self.members[0].k
    }

    pub fn k_max(&self) -> i64 {
        self.members[self.members.len() - 1].k
    }

    /// Member at window index `k`; cyclic semantics reduce `k` modulo the
    /// member count, truncated semantics require `k` inside the window.
    pub fn member_at(&self, k: i64) -> Option<&FrameMember<R>> {
        let m = self.members.len() as i64;
        match self.semantics {
            WindowSemantics::Cyclic => {
                let offset = (k - self.k_min()).rem_euclid(m);
                self.members.get(offset as usize)
            }
            WindowSemantics::Truncated => {
                if k < self.k_min() || k > self.k_max() {
                    None
                } else {
                    self.members.get((k - self.k_min()) as usize)
                }
            }
        }
    }

    /// Family with every operator multiplied by a real factor.
    pub fn scaled(&self, factor: R) -> Result<Self, FrameError> {
        let members = self
            .members
            .iter()
            .map(|m| FrameMember::new(m.k, m.subspace.clone(), m.theta.scale_real(factor)))
            .collect();
        Self::new(self.dim, self.semantics, members)
    }

    /// Frame operator `S = sum_k Theta_k^H Theta_k`.
    pub fn frame_operator(&self) -> ComplexMatrix<R> {
        let mut s = ComplexMatrix::zeros(self.dim, self.dim);
        for m in &self.members {
            s = s.add(&m.theta.adjoint().mul(&m.theta));
        }
        s
    }

    /// Optimal frame bounds: the extreme eigenvalues of the frame operator.
    ///
    /// Eigenvalues within machine noise below zero are clamped; `S` is a sum
    /// of Gram terms and therefore positive semidefinite.
    pub fn frame_bounds(&self) -> Result<FrameBounds<R>, FrameError> {
        let s = self.frame_operator();
        let values = hermitian_eigenvalues(&s, default_tolerance())?;
        Ok(FrameBounds::from_spectrum(&values))
    }

    /// Orthonormal basis of `span{M_k}` over all members.
    pub fn span_basis(&self) -> Result<ComplexMatrix<R>, FrameError> {
        let blocks: Vec<&ComplexMatrix<R>> =
            self.members.iter().map(|m| m.subspace.basis()).collect();
        let stacked = ComplexMatrix::hstack(&blocks);
        let dec = svd(&stacked)?;
        let sigma_max = dec.sigma.first().copied().unwrap_or_else(R::zero);
        let cut = default_tolerance::<R>() * sigma_max;
        let rank = dec.sigma.iter().filter(|&&s| s > cut).count();
        Ok(ComplexMatrix::from_fn(self.dim, rank.max(1), |i, j| {
            dec.u[(i, j)]
        }))
    }

    /// Frame bounds of the frame operator restricted to `span{M_k}`, with
    /// the span dimension.
    ///
    /// Equal to `frame_bounds` when the subspaces fill the ambient space;
    /// otherwise this is the natural domain for norm comparisons of
    /// operators supported on the span.
    pub fn frame_bounds_on_span(&self) -> Result<(FrameBounds<R>, usize), FrameError> {
        let q = self.span_basis()?;
        let s = self.frame_operator();
        let restricted = q.adjoint().mul(&s).mul(&q);
        let values = hermitian_eigenvalues(&restricted, default_tolerance())?;
        Ok((FrameBounds::from_spectrum(&values), q.cols()))
    }

    /// Whether the optimal bounds agree to `rel_tol`: `(B - A)/B <= rel_tol`.
    pub fn is_tight(&self, rel_tol: R) -> Result<bool, FrameError> {
        let bounds = self.frame_bounds()?;
        if !bounds.is_frame(R::from_f64_lossy(FRAME_RATIO_TOL)) {
            return Err(FrameError::NotAFrame {
                lower: bounds.lower.as_f64(),
                upper: bounds.upper.as_f64(),
            });
        }
        Ok((bounds.upper - bounds.lower) / bounds.upper <= rel_tol)
    }

    /// Analysis images `{Theta_k f}` in window order.
    pub fn analysis(&self, f: &[Complex<R>]) -> Result<Vec<Vec<Complex<R>>>, FrameError> {
        if f.len() != self.dim {
            return Err(FrameError::DimMismatch {
                expected: self.dim,
                found: f.len(),
            });
        }
        Ok(self.members.iter().map(|m| m.theta.mul_vec(f)).collect())
    }

    /// Synthesis `sum_k Theta_k^H f_k` of one block per member.
    ///
    /// Blocks must lie in their member's subspace (relative deviation at most
    /// `RANGE_CONTAINMENT_TOL`); out-of-range blocks are rejected rather than
    /// silently projected.
    pub fn synthesis(&self, blocks: &[Vec<Complex<R>>]) -> Result<Vec<Complex<R>>, FrameError> {
        if blocks.len() != self.members.len() {
            return Err(FrameError::BlockCountMismatch {
                expected: self.members.len(),
                found: blocks.len(),
            });
        }
        let mut out = vec![Complex::new(R::zero(), R::zero()); self.dim];
        for (i, (m, block)) in self.members.iter().zip(blocks).enumerate() {
            if block.len() != self.dim {
                return Err(FrameError::DimMismatch {
                    expected: self.dim,
                    found: block.len(),
                });
            }
            let block_norm = vec_norm(block);
            if block_norm > R::zero() {
                let projected = m.subspace.projection().mul_vec(block);
                let mut dev = R::zero();
                for (a, b) in block.iter().zip(&projected) {
                    dev = dev + (*a - *b).norm_sqr();
                }
                let deviation = dev.sqrt() / block_norm;
                if deviation > R::from_f64_lossy(RANGE_CONTAINMENT_TOL) {
                    return Err(FrameError::BlockOutsideSubspace {
                        index: i,
                        deviation: deviation.as_f64(),
                    });
                }
            }
            let contribution = m.theta.adjoint().mul_vec(block);
            for (acc, x) in out.iter_mut().zip(&contribution) {
                *acc = *acc + *x;
            }
        }
        Ok(out)
    }

    /// Block-row synthesis matrix `[Theta_{k_min}^H | ... | Theta_{k_max}^H]`.
    pub fn synthesis_matrix(&self) -> ComplexMatrix<R> {
        let adjoints: Vec<ComplexMatrix<R>> =
            self.members.iter().map(|m| m.theta.adjoint()).collect();
        let refs: Vec<&ComplexMatrix<R>> = adjoints.iter().collect();
        ComplexMatrix::hstack(&refs)
    }

    /// Canonical dual family `Gamma_k = Theta_k S^{-1}`.
    pub fn canonical_dual(&self) -> Result<DualFamily<R>, FrameError> {
        let s = self.frame_operator();
        let s_inv = hermitian_inverse(&s, default_tolerance(), R::from_f64_lossy(FRAME_RATIO_TOL))
            .map_err(|e| match e {
                NumericsError::Singular { .. } => {
                    let bounds = self.frame_bounds().ok();
                    FrameError::NotAFrame {
                        lower: bounds.as_ref().map_or(0.0, |b| b.lower.as_f64()),
                        upper: bounds.as_ref().map_or(0.0, |b| b.upper.as_f64()),
                    }
                }
                other => FrameError::from(other),
            })?;
        let members = self
            .members
            .iter()
            .map(|m| FrameMember::new(m.k, m.subspace.clone(), m.theta.mul(&s_inv)))
            .collect();
        Ok(DualFamily {
            family: Self::new(self.dim, self.semantics, members)?,
        })
    }

    /// `sum_k Theta_k^H Gamma_k f` for a paired family of the same shape.
    ///
    /// With the canonical dual this reconstructs `f`; with `gammas = self` it
    /// applies the frame operator.
    pub fn reconstruct(
        &self,
        gammas: &FrameFamily<R>,
        f: &[Complex<R>],
    ) -> Result<Vec<Complex<R>>, FrameError> {
        if f.len() != self.dim {
            return Err(FrameError::DimMismatch {
                expected: self.dim,
                found: f.len(),
            });
        }
        if gammas.dim != self.dim {
            return Err(FrameError::DimMismatch {
                expected: self.dim,
                found: gammas.dim,
            });
        }
        if gammas.len() != self.len() {
            return Err(FrameError::BlockCountMismatch {
                expected: self.len(),
                found: gammas.len(),
            });
        }
        let mut out = vec![Complex::new(R::zero(), R::zero()); self.dim];
        for (m, g) in self.members.iter().zip(gammas.members()) {
            let gk_f = g.theta.mul_vec(f);
            let term = m.theta.adjoint().mul_vec(&gk_f);
            for (acc, x) in out.iter_mut().zip(&term) {
                *acc = *acc + *x;
            }
        }
        Ok(out)
    }

    /// Per-member structural audit.
    ///
    /// Always reports range containment. Self-adjointness, surjectivity onto
    /// the subspace (`Theta_k(M_k) = M_k`) and idempotence (`Theta_k^2 =
    /// Theta_k`) are measured when requested. Failures are reported, never
    /// raised.
    pub fn validate_structure(&self, checks: StructureChecks, tol: R) -> ValidationReport<R> {
        let members = self
            .members
            .iter()
            .map(|m| {
                let norm = m.theta.fro_norm();
                let range_dev = if norm > R::zero() {
                    range_deviation(&m.theta, &m.subspace) / norm
                } else {
                    R::zero()
                };
                let range_ok = range_dev <= R::from_f64_lossy(RANGE_CONTAINMENT_TOL);

                let self_adjoint = checks.self_adjoint.then(|| {
                    let dev = if norm > R::zero() {
                        m.theta.hermitian_deviation() / norm
                    } else {
                        R::zero()
                    };
                    MeasuredCheck {
                        deviation: dev,
                        ok: dev <= tol,
                    }
                });

                let onto_subspace = checks.onto_subspace.then(|| {
                    let image = m.theta.mul(m.subspace.basis());
                    let rank = matrix_rank(&image, default_tolerance()).unwrap_or(0);
                    OntoCheck {
                        rank,
                        subspace_dim: m.subspace.dim(),
                        ok: rank == m.subspace.dim(),
                    }
                });

                let projection = checks.projection.then(|| {
                    let dev_abs = m.theta.mul(&m.theta).sub(&m.theta).fro_norm();
                    let scale = norm.max(norm * norm).max(R::one() * R::epsilon());
                    let dev = dev_abs / scale;
                    MeasuredCheck {
                        deviation: dev,
                        ok: dev <= tol,
                    }
                });

                MemberStructure {
                    k: m.k,
                    range_deviation: range_dev,
                    range_ok,
                    self_adjoint,
                    onto_subspace,
                    projection,
                }
            })
            .collect();
        ValidationReport { members }
    }
}

/// Construct the weighted fusion frame `Theta_k = v_k * pi_{M_k}`.
pub fn weighted_fusion_frame<R: Real>(
    subspaces: Vec<Subspace<R>>,
    weights: &[R],
) -> Result<FrameFamily<R>, FrameError> {
    if subspaces.is_empty() || subspaces.len() != weights.len() {
        return Err(FrameError::BlockCountMismatch {
            expected: subspaces.len(),
            found: weights.len(),
        });
    }
    for (i, w) in weights.iter().enumerate() {
        // NaN weights must fail too, so test the positive direction.
        let positive = *w > R::zero();
        if !positive {
            return Err(FrameError::NonPositiveWeight { index: i });
        }
    }
    let dim = subspaces[0].ambient_dim();
    let members = subspaces
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(i, (sub, &w))| {
            let theta = sub.projection().scale_real(w);
            FrameMember::new(i as i64, sub, theta)
        })
        .collect();
    FrameFamily::new(dim, WindowSemantics::Truncated, members)
}

/// Optimal frame constants `0 <= lower <= upper`.
#[derive(Clone, Copy, Debug)]
pub struct FrameBounds<R: Real> {
    pub lower: R,
    pub upper: R,
}

impl<R: Real> FrameBounds<R> {
    fn from_spectrum(ascending: &[R]) -> Self {
        let upper = ascending.last().copied().unwrap_or_else(R::zero);
        let mut lower = ascending.first().copied().unwrap_or_else(R::zero);
        // Clamp machine-noise negatives from the PSD frame operator.
        if lower < R::zero() {
            lower = R::zero();
        }
        Self { lower, upper }
    }

    /// The frame property holds when the lower bound is positive; `rel_tol`
    /// scales the singularity decision by the upper bound.
    pub fn is_frame(&self, rel_tol: R) -> bool {
        self.lower > rel_tol * self.upper && self.upper > R::zero()
    }

    /// Condition ratio `upper / lower`.
    pub fn ratio(&self) -> R {
        self.upper / self.lower
    }
}

/// Dual family holding `Gamma_k`; structurally a frame family over the same
/// subspaces, with the reconstruction guarantee of the canonical dual.
#[derive(Clone, Debug)]
pub struct DualFamily<R: Real> {
    family: FrameFamily<R>,
}

impl<R: Real> DualFamily<R> {
    pub fn family(&self) -> &FrameFamily<R> {
        &self.family
    }
}

impl<R: Real> std::ops::Deref for DualFamily<R> {
    type Target = FrameFamily<R>;

    fn deref(&self) -> &FrameFamily<R> {
        &self.family
    }
}

/// Which structural hypotheses `validate_structure` should measure.
#[derive(Clone, Copy, Debug, Default)]
pub struct StructureChecks {
    pub self_adjoint: bool,
    pub onto_subspace: bool,
    pub projection: bool,
}

impl StructureChecks {
    pub fn all() -> Self {
        Self {
            self_adjoint: true,
            onto_subspace: true,
            projection: true,
        }
    }

    /// The hypotheses under which a representer has a two-sided norm bound:
    /// self-adjoint members mapping their subspaces onto themselves.
    pub fn representation_hypotheses() -> Self {
        Self {
            self_adjoint: true,
            onto_subspace: true,
            projection: false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MeasuredCheck<R: Real> {
    pub deviation: R,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct OntoCheck {
    pub rank: usize,
    pub subspace_dim: usize,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct MemberStructure<R: Real> {
    pub k: i64,
    pub range_deviation: R,
    pub range_ok: bool,
    pub self_adjoint: Option<MeasuredCheck<R>>,
    pub onto_subspace: Option<OntoCheck>,
    pub projection: Option<MeasuredCheck<R>>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport<R: Real> {
    pub members: Vec<MemberStructure<R>>,
}

impl<R: Real> ValidationReport<R> {
    pub fn all_ok(&self) -> bool {
        self.members.iter().all(|m| {
            m.range_ok
                && m.self_adjoint.is_none_or(|c| c.ok)
                && m.onto_subspace.is_none_or(|c| c.ok)
                && m.projection.is_none_or(|c| c.ok)
        })
    }

    pub fn self_adjoint_ok(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.self_adjoint.is_none_or(|c| c.ok))
    }

    pub fn onto_ok(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.onto_subspace.is_none_or(|c| c.ok))
    }
}

/// `||(I - pi_M) Theta||_F`, the mass of `Theta` outside the subspace.
fn range_deviation<R: Real>(theta: &ComplexMatrix<R>, subspace: &Subspace<R>) -> R {
    let projected = subspace.projection().mul(theta);
    theta.sub(&projected).fro_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_unit_vector, rng_from_seed};
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

    #[test]
    fn single_identity_member_has_identity_frame_operator() {
        let f = full_family(2, WindowSemantics::Truncated, vec![M::identity(2)]);
        let s = f.frame_operator();
        assert!(s.sub(&M::identity(2)).fro_norm() <= 1e-15);
        let b = f.frame_bounds().unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
    }

    #[test]
    fn cyclic_shift_family_is_tight_with_bound_three() {
        let thetas = vec![M::identity(3), shift(3, 1), shift(3, 2)];
        let f = full_family(3, WindowSemantics::Cyclic, thetas);
        let s = f.frame_operator();
        assert!(s.sub(&M::identity(3).scale_real(3.0)).fro_norm() <= 1e-14);
        assert!(f.is_tight(1e-12).unwrap());
    }

    #[test]
    fn scalar_members_sum_squares() {
        let f = full_family(
            1,
            WindowSemantics::Truncated,
            vec![M::identity(1), M::identity(1).scale_real(2.0)],
        );
        let s = f.frame_operator();
        assert_relative_eq!(s[(0, 0)].re, 5.0, max_relative = 1e-15);
    }

    #[test]
    fn direct_sum_projections_are_tight() {
        let f = full_family(
            2,
            WindowSemantics::Truncated,
            vec![
                M::from_real(2, &[1.0, 0.0, 0.0, 0.0]),
                M::from_real(2, &[0.0, 0.0, 0.0, 1.0]),
            ],
        );
        let b = f.frame_bounds().unwrap();
        assert_relative_eq!(b.lower, 1.0, max_relative = 1e-14);
        assert_relative_eq!(b.upper, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn mixed_diagonal_family_is_not_tight() {
        let f = full_family(
            2,
            WindowSemantics::Truncated,
            vec![M::identity(2), M::from_real(2, &[2.0, 0.0, 0.0, 1.0])],
        );
        // S = diag(5, 2)
        assert!(!f.is_tight(1e-9).unwrap());
        let b = f.frame_bounds().unwrap();
        assert_relative_eq!(b.lower, 2.0, max_relative = 1e-14);
        assert_relative_eq!(b.upper, 5.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_member_changes_nothing() {
        let base = full_family(
            3,
            WindowSemantics::Truncated,
            vec![M::identity(3), shift(3, 1)],
        );
        let padded = full_family(
            3,
            WindowSemantics::Truncated,
            vec![M::identity(3), shift(3, 1), M::zeros(3, 3)],
        );
        let a = base.frame_bounds().unwrap();
        let b = padded.frame_bounds().unwrap();
        assert_eq!(a.lower, b.lower);
        assert_eq!(a.upper, b.upper);
        assert!(base.is_tight(1e-9).unwrap() == padded.is_tight(1e-9).unwrap());
    }

    #[test]
    fn analysis_of_decaying_shifts_hits_scaled_axes() {
        let thetas = vec![
            M::identity(3),
            shift(3, 1).scale_real(0.5),
            shift(3, 2).scale_real(0.25),
        ];
        let f = full_family(3, WindowSemantics::Truncated, thetas);
        let e0 = vec![
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
        ];
        let images = f.analysis(&e0).unwrap();
        assert_relative_eq!(images[0][0].re, 1.0);
        assert_relative_eq!(images[1][1].re, 0.5);
        assert_relative_eq!(images[2][2].re, 0.25);
    }

    #[test]
    fn analysis_energy_matches_frame_operator_quadratic_form() {
        let thetas = vec![M::identity(3), shift(3, 1).scale_real(0.5)];
        let f = full_family(3, WindowSemantics::Truncated, thetas);
        let mut rng = rng_from_seed(42);
        for _ in 0..20 {
            let v = random_unit_vector(&mut rng, 3);
            let images = f.analysis(&v).unwrap();
            let energy: f64 = images.iter().map(|b| vec_norm(b).powi(2)).sum();
            let sv = f.frame_operator().mul_vec(&v);
            let quad = crate::numerics::vec_dot(&v, &sv).re;
            assert_relative_eq!(energy, quad, max_relative = 1e-10);
        }
    }

    #[test]
    fn synthesis_of_analysis_applies_frame_operator() {
        let thetas = vec![M::identity(3), shift(3, 1).scale_real(0.5), shift(3, 2)];
        let f = full_family(3, WindowSemantics::Truncated, thetas);
        let mut rng = rng_from_seed(7);
        for _ in 0..10 {
            let v = random_unit_vector(&mut rng, 3);
            let blocks = f.analysis(&v).unwrap();
            let synth = f.synthesis(&blocks).unwrap();
            let sv = f.frame_operator().mul_vec(&v);
            let diff: f64 = synth
                .iter()
                .zip(&sv)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff <= 1e-10);
        }
    }

    #[test]
    fn analysis_of_zero_vector_is_all_zero_blocks() {
        let f = full_family(
            2,
            WindowSemantics::Truncated,
            vec![M::identity(2), shift(2, 1)],
        );
        let zero = vec![Complex::new(0.0, 0.0); 2];
        for block in f.analysis(&zero).unwrap() {
            assert!(vec_norm(&block) == 0.0);
        }
    }

    #[test]
    fn synthesis_of_zero_blocks_is_zero() {
        let f = full_family(
            2,
            WindowSemantics::Truncated,
            vec![M::identity(2), shift(2, 1)],
        );
        let zero = vec![Complex::new(0.0, 0.0); 2];
        let out = f.synthesis(&[zero.clone(), zero]).unwrap();
        assert!(vec_norm(&out) == 0.0);
    }

    #[test]
    fn single_identity_synthesis_returns_the_block() {
        let f = full_family(2, WindowSemantics::Truncated, vec![M::identity(2)]);
        let g = vec![Complex::new(0.3, 0.1), Complex::new(-0.7, 0.2)];
        let out = f.synthesis(std::slice::from_ref(&g)).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn synthesis_matrix_of_scalar_members_stacks_adjoints() {
        let f = full_family(
            1,
            WindowSemantics::Truncated,
            vec![M::identity(1), M::identity(1).scale_real(2.0)],
        );
        let u = f.synthesis_matrix();
        assert_eq!((u.rows(), u.cols()), (1, 2));
        assert_eq!(u[(0, 0)].re, 1.0);
        assert_eq!(u[(0, 1)].re, 2.0);

        let single = full_family(2, WindowSemantics::Truncated, vec![M::identity(2)]);
        assert!(single.synthesis_matrix().sub(&M::identity(2)).fro_norm() == 0.0);
    }

    #[test]
    fn reconstruct_of_zero_vector_is_zero() {
        let f = full_family(2, WindowSemantics::Truncated, vec![M::identity(2)]);
        let dual = f.canonical_dual().unwrap();
        let zero = vec![Complex::new(0.0, 0.0); 2];
        let out = f.reconstruct(&dual, &zero).unwrap();
        assert!(vec_norm(&out) == 0.0);
        // a single identity member is its own canonical dual
        assert!(dual.members()[0].theta.sub(&M::identity(2)).fro_norm() <= 1e-14);
    }

    #[test]
    fn synthesis_matrix_agrees_with_blockwise_synthesis() {
        let thetas = vec![shift(3, 1), shift(3, 2)];
        let f = full_family(3, WindowSemantics::Cyclic, thetas);
        let u = f.synthesis_matrix();
        assert_eq!((u.rows(), u.cols()), (3, 6));
        // adjoint of a real permutation is its transpose
        assert_eq!(u[(0, 1)].re, 1.0);
        let mut rng = rng_from_seed(3);
        let blocks: Vec<Vec<Complex<f64>>> =
            (0..2).map(|_| random_unit_vector(&mut rng, 3)).collect();
        let stacked: Vec<Complex<f64>> = blocks.concat();
        let via_matrix = u.mul_vec(&stacked);
        let via_blocks = f.synthesis(&blocks).unwrap();
        let diff: f64 = via_matrix
            .iter()
            .zip(&via_blocks)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-12);
    }

    #[test]
    fn synthesis_rejects_blocks_outside_subspace() {
        let basis = M::from_rows(vec![
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
        ])
        .unwrap();
        let sub = Subspace::new(basis).unwrap();
        let theta = M::from_real(2, &[1.0, 0.0, 0.0, 0.0]);
        let f = FrameFamily::new(
            2,
            WindowSemantics::Truncated,
            vec![FrameMember::new(0, sub, theta)],
        )
        .unwrap();
        let out_of_range = vec![vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]];
        assert!(matches!(
            f.synthesis(&out_of_range),
            Err(FrameError::BlockOutsideSubspace { index: 0, .. })
        ));
    }

    #[test]
    fn canonical_dual_of_tight_family_divides_by_bound() {
        let thetas = vec![M::identity(3), shift(3, 1), shift(3, 2)];
        let f = full_family(3, WindowSemantics::Cyclic, thetas);
        let dual = f.canonical_dual().unwrap();
        for (m, g) in f.members().iter().zip(dual.members()) {
            let expected = m.theta.scale_real(1.0 / 3.0);
            assert!(g.theta.sub(&expected).fro_norm() <= 1e-13);
        }
    }

    #[test]
    fn canonical_dual_reconstructs_probes() {
        let thetas = vec![M::identity(3), shift(3, 1).scale_real(0.5), shift(3, 2)];
        let f = full_family(3, WindowSemantics::Truncated, thetas);
        let dual = f.canonical_dual().unwrap();
        let mut rng = rng_from_seed(42);
        for _ in 0..100 {
            let v = random_unit_vector(&mut rng, 3);
            let rebuilt = f.reconstruct(&dual, &v).unwrap();
            let err: f64 = rebuilt
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= RECONSTRUCTION_TOL);
        }
    }

    #[test]
    fn reconstruct_with_family_itself_applies_frame_operator() {
        let thetas = vec![M::identity(2), M::from_real(2, &[2.0, 0.0, 0.0, 1.0])];
        let f = full_family(2, WindowSemantics::Truncated, thetas);
        let v = vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        let out = f.reconstruct(&f, &v).unwrap();
        let sv = f.frame_operator().mul_vec(&v);
        assert!(out.iter().zip(&sv).all(|(a, b)| (a - b).norm() <= 1e-14));
        // and it is not the identity on a non-tight family
        assert!((out[0] - v[0]).norm() > 1.0);
    }

    #[test]
    fn non_frame_family_has_no_canonical_dual() {
        let theta = M::from_real(2, &[1.0, 0.0, 0.0, 0.0]);
        let f = full_family(2, WindowSemantics::Truncated, vec![theta]);
        assert!(matches!(
            f.canonical_dual(),
            Err(FrameError::NotAFrame { .. })
        ));
    }

    #[test]
    fn projection_members_pass_all_structure_checks() {
        let basis = M::from_rows(vec![
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
        ])
        .unwrap();
        let sub = Subspace::new(basis).unwrap();
        let theta = sub.projection();
        let f = FrameFamily::new(
            3,
            WindowSemantics::Cyclic,
            vec![
                FrameMember::new(0, sub.clone(), theta.clone()),
                FrameMember::new(1, sub, theta),
            ],
        )
        .unwrap();
        let report = f.validate_structure(StructureChecks::all(), 1e-9);
        assert!(report.all_ok());
    }

    #[test]
    fn shift_members_fail_self_adjointness() {
        let thetas = vec![M::identity(3), shift(3, 1).scale_real(0.5)];
        let f = full_family(3, WindowSemantics::Truncated, thetas);
        let report = f.validate_structure(StructureChecks::representation_hypotheses(), 1e-9);
        assert!(!report.self_adjoint_ok());
        assert!(report.members[0].self_adjoint.unwrap().ok);
        assert!(!report.members[1].self_adjoint.unwrap().ok);
    }

    #[test]
    fn rank_one_member_maps_its_line_onto_itself() {
        let basis = M::from_rows(vec![
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
        ])
        .unwrap();
        let sub = Subspace::new(basis).unwrap();
        let theta = M::from_real(2, &[1.0, 0.0, 0.0, 0.0]);
        let f = FrameFamily::new(
            2,
            WindowSemantics::Truncated,
            vec![FrameMember::new(0, sub, theta)],
        )
        .unwrap();
        let report = f.validate_structure(StructureChecks::all(), 1e-9);
        assert!(report.all_ok());
    }

    #[test]
    fn weighted_fusion_frame_on_axes_is_tight() {
        let subs: Vec<Subspace<f64>> = (0..3)
            .map(|i| {
                let basis = M::from_fn(3, 1, |r, _| {
                    if r == i {
                        Complex::new(1.0, 0.0)
                    } else {
                        Complex::new(0.0, 0.0)
                    }
                });
                Subspace::new(basis).unwrap()
            })
            .collect();
        let f = weighted_fusion_frame(subs, &[1.0, 1.0, 1.0]).unwrap();
        let b = f.frame_bounds().unwrap();
        assert_relative_eq!(b.lower, 1.0, max_relative = 1e-13);
        assert_relative_eq!(b.upper, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn repeated_full_space_weights_add_in_squares() {
        let subs = vec![Subspace::full(2), Subspace::full(2)];
        let f = weighted_fusion_frame(subs, &[1.0, 2.0]).unwrap();
        let b = f.frame_bounds().unwrap();
        assert_relative_eq!(b.lower, 5.0, max_relative = 1e-13);
        assert_relative_eq!(b.upper, 5.0, max_relative = 1e-13);
    }

    #[test]
    fn non_positive_weights_are_rejected() {
        let subs = vec![Subspace::full(2)];
        assert!(matches!(
            weighted_fusion_frame(subs, &[0.0]),
            Err(FrameError::NonPositiveWeight { index: 0 })
        ));
    }

    #[test]
    fn family_rejects_range_violations() {
        let basis = M::from_rows(vec![
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(0.0, 0.0)],
        ])
        .unwrap();
        let sub = Subspace::new(basis).unwrap();
        // image includes e2, outside span{e1}
        let theta = M::from_real(2, &[0.0, 0.0, 1.0, 0.0]);
        let err = FrameFamily::new(
            2,
            WindowSemantics::Truncated,
            vec![FrameMember::new(0, sub, theta)],
        );
        assert!(matches!(err, Err(FrameError::InvalidFamily(_))));
    }

    #[test]
    fn family_rejects_non_consecutive_indices() {
        let err = FrameFamily::new(
            2,
            WindowSemantics::Truncated,
            vec![
                FrameMember::full(0, M::identity(2)),
                FrameMember::full(2, M::identity(2)),
            ],
        );
        assert!(matches!(err, Err(FrameError::InvalidFamily(_))));
    }

    #[test]
    fn family_rejects_all_zero_members() {
        let err = FrameFamily::new(
            2,
            WindowSemantics::Truncated,
            vec![FrameMember::full(0, M::zeros(2, 2))],
        );
        assert!(matches!(err, Err(FrameError::InvalidFamily(_))));
    }

    #[test]
    fn bounds_invariant_under_right_unitary_factor() {
        use crate::sampling::random_unitary;
        let mut rng = rng_from_seed(11);
        let v: M = random_unitary(&mut rng, 3);
        let thetas = vec![M::identity(3), shift(3, 1).scale_real(0.5)];
        let f = full_family(3, WindowSemantics::Truncated, thetas.clone());
        let rotated = full_family(
            3,
            WindowSemantics::Truncated,
            thetas.into_iter().map(|t| t.mul(&v)).collect(),
        );
        let a = f.frame_bounds().unwrap();
        let b = rotated.frame_bounds().unwrap();
        assert_relative_eq!(a.lower, b.lower, max_relative = 1e-11);
        assert_relative_eq!(a.upper, b.upper, max_relative = 1e-11);
    }

    #[test]
    fn cyclic_member_lookup_wraps() {
        let thetas = vec![M::identity(2), M::identity(2).scale_real(2.0)];
        let f = full_family(2, WindowSemantics::Cyclic, thetas);
        assert_eq!(f.member_at(2).unwrap().k, 0);
        assert_eq!(f.member_at(-1).unwrap().k, 1);
        assert_eq!(f.member_at(5).unwrap().k, 1);
    }

    #[test]
    fn truncated_member_lookup_respects_window() {
        let thetas = vec![M::identity(2), M::identity(2).scale_real(2.0)];
        let f = full_family(2, WindowSemantics::Truncated, thetas);
        assert!(f.member_at(2).is_none());
        assert!(f.member_at(-1).is_none());
        assert_eq!(f.member_at(1).unwrap().k, 1);
    }
}
