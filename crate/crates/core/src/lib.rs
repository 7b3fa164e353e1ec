//! Eigenvalue density and eigenvector nonorthogonality of complex symmetric
//! (class AI†) random matrices.
//!
//! The crate evaluates the exact finite-N laws (radial density, overlap
//! distributions, their CDFs and moments), the large-N edge and bulk limit
//! laws for AI† and both Ginibre ensembles, and provides the Monte-Carlo
//! machinery used to check them: reproducible samplers, a dense complex
//! eigensolver, empirical distributions and KS distances.
//!
//! Numerical kernels are generic over the scalar type through [`Real`];
//! `f64` aliases for the common entry points live at the crate root.

pub mod commands;
pub mod empirics;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod laws;
pub mod spectra;
pub mod specfun;
pub mod verify;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub use error::{Error, Result};

/// Floating point scalar used by every numerical kernel: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Complex<T> = num_complex::Complex<T>;
pub type C64 = num_complex::Complex<f64>;

pub type LawContextF64 = laws::exact::LawContext<f64>;
pub type OverlapLawF64 = laws::exact::OverlapLaw<f64>;
pub type ComplexMatrixF64 = ensembles::ComplexMatrix<f64>;
pub type EigenSystemF64 = spectra::EigenSystem<f64>;
pub type SpectralRecordF64 = spectra::SpectralRecord<f64>;
pub type EmpiricalDistributionF64 = empirics::EmpiricalDistribution<f64>;
pub type HistogramF64 = empirics::Histogram<f64>;
pub type QuadratureResultF64 = specfun::QuadratureResult<f64>;
