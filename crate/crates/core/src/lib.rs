//! Clifford analysis on the Lie ball.
//!
//! The crate links holomorphic functions on the Lie ball `L_n` in `C^n`,
//! complex regular functions on `L_{n+1}`, and left monogenic functions on
//! the unit ball of `R^{n+1}`:
//!
//! * [`clifford`]: dense Clifford algebra arithmetic.
//! * [`geometry`]: `|z|_C`, the Lie norm, and the singular sets `gamma_C(z)`.
//! * [`harmonics`]: Legendre polynomials `P_{k,n}` and their homogenized forms.
//! * [`monogenic`]: polynomial Dirac calculus, Cauchy-Kowalevski extension,
//!   and the monogenic zonal extensions `W_{k,n+2}`.
//! * [`cauchy`]: Cauchy kernels and the sphere Cauchy transform.
//! * [`lie`]: Lie sphere projections, the Cauchy-Hua kernel and the
//!   extension maps `w` and `u`.
//! * [`opcalc`]: symmetric functional calculus for tuples of matrices.

pub mod cauchy;
pub mod clifford;
pub mod error;
pub mod geometry;
pub mod harmonics;
pub mod io;
pub mod lie;
pub mod monogenic;
pub mod opcalc;
pub mod poly;
pub mod quadrature;
pub mod sampling;
pub mod verify;

pub use error::{MonolieError, Result};
