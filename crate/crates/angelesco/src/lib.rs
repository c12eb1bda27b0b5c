//! Multiple orthogonal polynomials for modified Jacobi-Angelesco weights on
//! the touching intervals `[a,0]` and `[0,1]`, the vector equilibrium problem
//! behind their zero distribution, the contour-integral model functions of the
//! associated local Riemann-Hilbert problem, and end-to-end verification of
//! the double-scaling Mehler-Heine formula connecting them.
//!
//! All computations run at user-selected decimal precision on top of MPFR.
//! See the `examples/` directory for one runnable program per capability and
//! the `angelesco` binary for a scriptable front end.

pub mod asympt;
pub mod curve;
pub mod error;
pub mod fitting;
pub mod linalg;
pub mod modelrhp;
pub mod mop;
pub mod phase;
pub mod potentials;
pub mod prec;
pub mod quad;
pub mod report;
pub mod weights;

pub use error::{Error, Result};
pub use prec::Prec;
