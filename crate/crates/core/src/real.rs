//! Scalar abstraction shared by every numerical module.

use nalgebra::{Complex, ComplexField, DMatrix, RealField};
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Matrices are stored as `DMatrix<Complex<T>>`; all tolerances in the crate
/// are expressed in `f64` and converted with [`Real::lit`].
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Machine epsilon of the type.
    const EPS: f64;

    fn lit(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            const EPS: f64 = <$t>::EPSILON as f64;

            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Largest |M - M†| entry.
pub fn hermiticity_residual<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Real part of the trace.
pub fn trace_re<T: Real>(m: &CMatrix<T>) -> T {
    (0..m.nrows().min(m.ncols())).fold(T::zero(), |acc, i| acc + m[(i, i)].re)
}

/// Eigenvalues of a Hermitian matrix, sorted ascending; `None` when the
/// implicit QR iteration fails to converge.
///
/// The matrix is symmetrized first so round-off in the lower triangle cannot
/// leak into the solve.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Option<Vec<T>> {
    let half = T::lit(0.5);
    let sym = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()).scale(half)
    });
    let eig = nalgebra::SymmetricEigen::try_new(sym, T::default_epsilon(), 10_000)?;
    let mut ev: Vec<T> = eig.eigenvalues.iter().copied().collect();
    if ev.iter().any(|x| !x.is_finite()) {
        return None;
    }
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Some(ev)
}
