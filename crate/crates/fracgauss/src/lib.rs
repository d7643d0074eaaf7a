//! Fractional derivatives via Gauss quadrature and numerical Laplace
//! inversion.
//!
//! The crate stacks up from a small expression language (`expr`) and special
//! functions (`specfun`), through Gauss rule construction on (0, inf) and
//! (-1, 1) (`quadrature`), to Laplace transform inversion (`laplace`) and
//! the fractional-derivative machinery itself (`fracderiv`). `cli` exposes
//! the whole pipeline as subcommands; the `fracgauss` binary is a thin
//! wrapper over [`cli::run`].
//!
//! A quick tour:
//!
//! ```
//! use fracgauss::fracderiv::{fd_compute, DerivativeClass, FdMethod, FdParams,
//!                            FractionalOrder, FunctionSpec};
//!
//! let half = FractionalOrder::new(0.5).unwrap();
//! let f = FunctionSpec::new("t");
//! let r = fd_compute(&f, None, &half, DerivativeClass::RiemannLiouville,
//!                    FdMethod::GlSum, &FdParams::default(), 1.0).unwrap();
//! // d^(1/2)/dt^(1/2) of t at t = 1 is 2/sqrt(pi)
//! assert!((r.value - 1.1283791670955126).abs() < 1e-3);
//! ```

// validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`:
// the negated form also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// `n % 2 == 0` reads better than is_multiple_of in index arithmetic
#![allow(clippy::manual_is_multiple_of)]

pub mod cli;
pub mod error;
pub mod expr;
pub mod fracderiv;
pub mod laplace;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use fracderiv::{DerivativeClass, FdMethod, FdParams, FractionalOrder, FunctionSpec};
pub use laplace::{InversionConfig, InversionMethod, TransformPair, TransformSpec};
pub use quadrature::{QuadratureRule, RuleKind};

/// Complex scalar used throughout the transform evaluation paths.
pub type ComplexScalar = num_complex::Complex64;
