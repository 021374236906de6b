//! Complex Jacobi plane rotation shared by the eigen and SVD kernels.

use num_complex::Complex;

use crate::scalar::Real;

/// Unitary 2x2 rotation `J = [[c, s], [-s*conj(phase), c*conj(phase)]]`
/// chosen so that `J^H [[app, apq], [conj(apq), aqq]] J` is diagonal.
#[derive(Clone, Debug)]
pub struct ComplexRotation<R: Real> {
    pub c: R,
    pub s: R,
    /// Unit complex number `apq / |apq|`.
    pub phase: Complex<R>,
}

/// Rotation annihilating the off-diagonal entry of a Hermitian 2x2 block.
///
/// `app` and `aqq` are the real diagonal entries, `apq` the off-diagonal one
/// (must be nonzero).
pub fn rotation_for<R: Real>(app: R, aqq: R, apq: Complex<R>) -> ComplexRotation<R> {
    let mag = apq.norm();
    debug_assert!(mag > R::zero());
    let phase = apq.unscale(mag);
    // Classic symmetric Jacobi angle on [[app, |apq|], [|apq|, aqq]].
    let tau = (aqq - app) / (mag + mag);
    let t = if tau == R::zero() {
        R::one()
    } else {
        let sign = if tau > R::zero() { R::one() } else { -R::one() };
        sign / (tau.abs() + (R::one() + tau * tau).sqrt())
    };
    let c = R::one() / (R::one() + t * t).sqrt();
    let s = t * c;
    ComplexRotation { c, s, phase }
}
