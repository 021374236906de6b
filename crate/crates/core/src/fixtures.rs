//! Concrete frame families built from finite cyclic groups, plus seeded
//! random fixtures for the test and audit suites.
//!
//! Convolution by a point mass on `Z_n` is a cyclic permutation of
//! coordinates, so translation-invariance arguments hold exactly at finite
//! order: shifts are unitary, compose by index addition, and distinct shifts
//! are orthogonal in the Frobenius inner product.

use num_complex::Complex;

use crate::frame::{FrameError, FrameFamily, FrameMember, Subspace, WindowSemantics};
use crate::numerics::ComplexMatrix;
use crate::representation::RepresentError;
use crate::sampling::{random_orthonormal_columns, rng_from_seed, uniform_in};
use crate::scalar::Real;

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("shift element {element} is outside the group of order {order}")]
    OutOfRange { element: usize, order: usize },
    #[error(
        "base element generates a subgroup of order {order}, need at least {needed} \
         for a window of half-width {half_width}"
    )]
    SubgroupTooSmall {
        order: usize,
        needed: usize,
        half_width: usize,
    },
    #[error("decay factor must lie in {range}, got {value}")]
    InvalidDecay { value: f64, range: &'static str },
    #[error("invalid spectrum range: need 0 < lo <= hi, got ({lo}, {hi})")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("invalid parameter: {context}")]
    InvalidParameter { context: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Permutation matrix of convolution by the point mass at `x` on `Z_n`:
/// `e_j` maps to `e_{(j + x) mod n}`. Unitary for every `x`.
pub fn dirac_shift<R: Real>(n: usize, x: usize) -> Result<ComplexMatrix<R>, FixtureError> {
    if n == 0 || x >= n {
        return Err(FixtureError::OutOfRange {
            element: x,
            order: n,
        });
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == (j + x) % n {
            Complex::new(R::one(), R::zero())
        } else {
            Complex::new(R::zero(), R::zero())
        }
    }))
}

fn shift_by_index<R: Real>(
    n: usize,
    base: usize,
    k: i64,
) -> Result<ComplexMatrix<R>, FixtureError> {
    let element = (k * base as i64).rem_euclid(n as i64) as usize;
    dirac_shift(n, element)
}

/// Order of `x` in `Z_n`.
fn element_order(n: usize, x: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    if x == 0 {
        1
    } else {
        n / gcd(n, x)
    }
}

/// Two-sided family of geometrically decaying shifts on the window
/// `[-half_width, half_width]`:
/// `Theta_k = decay^{|k|} * shift(k * base mod n)`, subspaces full.
///
/// The family is tight with `A = B = sum_{|k| <= K} decay^{2|k|}` because
/// every shift is unitary. The `2K + 1` operators are pairwise distinct, and
/// hence linearly independent, when the order of `base` exceeds `2K`; an
/// order of exactly `2K` is accepted (the two boundary members coincide, the
/// bounds are unaffected).
pub fn decaying_shift_family<R: Real>(
    n: usize,
    half_width: usize,
    base: usize,
    decay: f64,
) -> Result<FrameFamily<R>, FixtureError> {
    if !(decay > 0.0 && decay < 1.0) {
        return Err(FixtureError::InvalidDecay {
            value: decay,
            range: "(0, 1)",
        });
    }
    if base >= n {
        return Err(FixtureError::OutOfRange {
            element: base,
            order: n,
        });
    }
    let order = element_order(n, base);
    if half_width > 0 && order < 2 * half_width {
        return Err(FixtureError::SubgroupTooSmall {
            order,
            needed: 2 * half_width,
            half_width,
        });
    }
    let k_range = -(half_width as i64)..=(half_width as i64);
    let members = k_range
        .map(|k| {
            let weight = R::from_f64_lossy(decay.powi(k.unsigned_abs() as i32));
            let theta = shift_by_index::<R>(n, base, k)?.scale_real(weight);
            Ok(FrameMember::full(k, theta))
        })
        .collect::<Result<Vec<_>, FixtureError>>()?;
    Ok(FrameFamily::new(n, WindowSemantics::Truncated, members)?)
}

/// One-sided variant on `[0, length]`: `Theta_k = decay^k * shift(k * base)`.
///
/// Unlike the two-sided family this admits an exact representer,
/// `T = decay * shift(base)`, because every step scales by the same factor.
pub fn one_sided_shift_family<R: Real>(
    n: usize,
    length: usize,
    base: usize,
    decay: f64,
) -> Result<FrameFamily<R>, FixtureError> {
    if !(decay > 0.0 && decay <= 1.0) {
        return Err(FixtureError::InvalidDecay {
            value: decay,
            range: "(0, 1]",
        });
    }
    if base >= n {
        return Err(FixtureError::OutOfRange {
            element: base,
            order: n,
        });
    }
    let members = (0..=length as i64)
        .map(|k| {
            let weight = R::from_f64_lossy(decay.powi(k as i32));
            let theta = shift_by_index::<R>(n, base, k)?.scale_real(weight);
            Ok(FrameMember::full(k, theta))
        })
        .collect::<Result<Vec<_>, FixtureError>>()?;
    Ok(FrameFamily::new(n, WindowSemantics::Truncated, members)?)
}

/// Iterates convolution by the point mass at `shift_element` on a base
/// operator: `Theta_k = shift(k * shift_element) * Theta_0` on
/// `[-half_width, half_width]`.
///
/// Every member is a unitary image of `Theta_0`, so `||Theta_k f|| =
/// ||Theta_0 f||` and the upper frame bound grows linearly with the window;
/// no bounded extension to all integer indices can exist.
pub fn iterated_shift_family<R: Real>(
    n: usize,
    half_width: usize,
    shift_element: usize,
    base_operator: Option<ComplexMatrix<R>>,
) -> Result<FrameFamily<R>, FixtureError> {
    if shift_element >= n {
        return Err(FixtureError::OutOfRange {
            element: shift_element,
            order: n,
        });
    }
    let theta0 = match base_operator {
        Some(m) => {
            if m.rows() != n || m.cols() != n {
                return Err(FixtureError::InvalidParameter {
                    context: format!(
                        "base operator must be {n}x{n}, got {}x{}",
                        m.rows(),
                        m.cols()
                    ),
                });
            }
            m
        }
        None => ComplexMatrix::identity(n),
    };
    let k_range = -(half_width as i64)..=(half_width as i64);
    let members = k_range
        .map(|k| {
            let theta = shift_by_index::<R>(n, shift_element, k)?.mul(&theta0);
            Ok(FrameMember::full(k, theta))
        })
        .collect::<Result<Vec<_>, FixtureError>>()?;
    Ok(FrameFamily::new(n, WindowSemantics::Truncated, members)?)
}

/// Window descriptor for the random generators.
#[derive(Clone, Copy, Debug)]
pub struct WindowSpec {
    pub semantics: WindowSemantics,
    pub k_min: i64,
    pub k_max: i64,
}

impl WindowSpec {
    pub fn cyclic(members: usize) -> Self {
        Self {
            semantics: WindowSemantics::Cyclic,
            k_min: 0,
            k_max: members as i64 - 1,
        }
    }

    pub fn truncated(k_min: i64, k_max: i64) -> Self {
        Self {
            semantics: WindowSemantics::Truncated,
            k_min,
            k_max,
        }
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.k_max < self.k_min
    }
}

/// Subspace dimensions for `random_self_adjoint_family`.
#[derive(Clone, Copy, Debug)]
pub enum SubspaceDims {
    /// Every member acts on the full ambient space.
    Full,
    /// Dimensions drawn uniformly from `lo..=hi` per member.
    Range { lo: usize, hi: usize },
}

/// Family of independent random self-adjoint operators, each with
/// eigenvalues in `[lo, hi]` on a randomly drawn subspace.
///
/// The construction `Theta_k = B_k diag(lambda) B_k^H` with orthonormal
/// `B_k` forces self-adjointness and `Theta_k(M_k) = M_k` exactly, so the
/// structural audit passes for every seed. Deterministic in the seed.
pub fn random_self_adjoint_family<R: Real>(
    n: usize,
    window: WindowSpec,
    seed: u64,
    spectrum: (f64, f64),
    dims: SubspaceDims,
) -> Result<FrameFamily<R>, FixtureError> {
    let (lo, hi) = spectrum;
    if !(lo > 0.0 && lo <= hi) {
        return Err(FixtureError::InvalidRange { lo, hi });
    }
    if window.is_empty() {
        return Err(FixtureError::InvalidParameter {
            context: "window is empty".into(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let members = (window.k_min..=window.k_max)
        .map(|k| {
            let d = match dims {
                SubspaceDims::Full => n,
                SubspaceDims::Range { lo: dlo, hi: dhi } => {
                    let dlo = dlo.clamp(1, n);
                    let dhi = dhi.clamp(dlo, n);
                    use rand::Rng as _;
                    rng.gen_range(dlo..=dhi)
                }
            };
            let basis = random_orthonormal_columns::<R>(&mut rng, n, d);
            let eigenvalues: Vec<R> = (0..d)
                .map(|_| uniform_in(&mut rng, R::from_f64_lossy(lo), R::from_f64_lossy(hi)))
                .collect();
            // B diag(lambda) B^H
            let scaled = ComplexMatrix::from_fn(n, d, |i, j| basis[(i, j)].scale(eigenvalues[j]));
            let theta = scaled.mul(&basis.adjoint());
            let subspace = if d == n {
                Subspace::full(n)
            } else {
                Subspace::new(basis).expect("orthonormal by construction")
            };
            Ok(FrameMember::new(k, subspace, theta))
        })
        .collect::<Result<Vec<_>, FixtureError>>()?;
    Ok(FrameFamily::new(n, window.semantics, members)?)
}

/// Cyclic family of commuting self-adjoint operators with an exact
/// representer, plus that representer.
///
/// All members share a random eigenbasis `Q`; member `k` has eigenvalues
/// `lambda_i * sign_i^k` with `lambda_i` drawn from `[lo, hi]` on the first
/// `rank` directions and zero beyond. The representer is the sign flip
/// `H = Q diag(sign) Q^H` restricted to the span, a self-adjoint isometry
/// there, so `Theta_{k+1} = H Theta_k` holds exactly including the cyclic
/// wraparound (signs are only flipped when the member count is even).
pub fn random_representable_family<R: Real>(
    n: usize,
    members: usize,
    seed: u64,
    spectrum: (f64, f64),
    rank: usize,
) -> Result<(FrameFamily<R>, ComplexMatrix<R>), FixtureError> {
    let (lo, hi) = spectrum;
    if !(lo > 0.0 && lo <= hi) {
        return Err(FixtureError::InvalidRange { lo, hi });
    }
    if members < 2 {
        return Err(FixtureError::InvalidParameter {
            context: format!("need at least two members, got {members}"),
        });
    }
    if rank == 0 || rank > n {
        return Err(FixtureError::InvalidParameter {
            context: format!("rank must lie in 1..={n}, got {rank}"),
        });
    }
    let mut rng = rng_from_seed(seed);
    let basis = random_orthonormal_columns::<R>(&mut rng, n, rank);
    let eigenvalues: Vec<R> = (0..rank)
        .map(|_| uniform_in(&mut rng, R::from_f64_lossy(lo), R::from_f64_lossy(hi)))
        .collect();
    let signs: Vec<R> = (0..rank)
        .map(|_| {
            use rand::Rng as _;
            if members.is_multiple_of(2) && rng.gen::<bool>() {
                -R::one()
            } else {
                R::one()
            }
        })
        .collect();

    let subspace = if rank == n {
        Subspace::full(n)
    } else {
        Subspace::new(basis.clone()).expect("orthonormal by construction")
    };
    let assemble = |values: &[R]| -> ComplexMatrix<R> {
        let scaled = ComplexMatrix::from_fn(n, rank, |i, j| basis[(i, j)].scale(values[j]));
        scaled.mul(&basis.adjoint())
    };

    let family_members = (0..members as i64)
        .map(|k| {
            let values: Vec<R> = eigenvalues
                .iter()
                .zip(&signs)
                .map(|(&l, &s)| if k % 2 == 0 { l } else { l * s })
                .collect();
            FrameMember::new(k, subspace.clone(), assemble(&values))
        })
        .collect();
    let representer = assemble(&signs);
    let family = FrameFamily::new(n, WindowSemantics::Cyclic, family_members)?;
    Ok((family, representer))
}

/// Constant identity family, mostly for smoke tests and demos.
pub fn identity_family<R: Real>(
    n: usize,
    members: usize,
    semantics: WindowSemantics,
) -> Result<FrameFamily<R>, FixtureError> {
    if members == 0 {
        return Err(FixtureError::InvalidParameter {
            context: "need at least one member".into(),
        });
    }
    let members = (0..members as i64)
        .map(|k| FrameMember::full(k, ComplexMatrix::identity(n)))
        .collect();
    Ok(FrameFamily::new(n, semantics, members)?)
}

/// Registered window generators for the divergence scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFixture {
    /// `Theta_k = I` on `C^2`, candidate `T = I`.
    Identity,
    /// `Theta_k = H^k` for the coordinate-swap reflection `H` on `C^2`,
    /// candidate `T = H` (self-adjoint unitary).
    Reflection,
    /// `Theta_k = shift(k) * Theta_0` on `C^8`, candidate the unit shift;
    /// a unitary translation family.
    Translation,
}

impl ScanFixture {
    pub const NAMES: [&'static str; 3] = ["identity", "reflection", "translation"];

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::Identity),
            "reflection" => Some(Self::Reflection),
            "translation" => Some(Self::Translation),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Reflection => "reflection",
            Self::Translation => "translation",
        }
    }

    /// Family on `[-half_width, half_width]` with its candidate representer.
    pub fn generate<R: Real>(
        self,
        half_width: usize,
    ) -> Result<(FrameFamily<R>, ComplexMatrix<R>), RepresentError> {
        let build = |n: usize,
                     theta: &dyn Fn(i64) -> ComplexMatrix<R>|
         -> Result<FrameFamily<R>, RepresentError> {
            let members = (-(half_width as i64)..=half_width as i64)
                .map(|k| FrameMember::full(k, theta(k)))
                .collect();
            Ok(FrameFamily::new(n, WindowSemantics::Truncated, members)?)
        };
        match self {
            Self::Identity => {
                let family = build(2, &|_| ComplexMatrix::identity(2))?;
                Ok((family, ComplexMatrix::identity(2)))
            }
            Self::Reflection => {
                let swap = ComplexMatrix::from_fn(2, 2, |i, j| {
                    if i != j {
                        Complex::new(R::one(), R::zero())
                    } else {
                        Complex::new(R::zero(), R::zero())
                    }
                });
                let identity = ComplexMatrix::identity(2);
                let family = build(2, &|k| {
                    if k.rem_euclid(2) == 0 {
                        identity.clone()
                    } else {
                        swap.clone()
                    }
                })?;
                Ok((family, swap))
            }
            Self::Translation => {
                let n = 8;
                let family = build(n, &|k| {
                    shift_by_index::<R>(n, 1, k).expect("unit shift is always in range")
                })?;
                let candidate = dirac_shift::<R>(n, 1).expect("unit shift is always in range");
                Ok((family, candidate))
            }
        }
    }
}
