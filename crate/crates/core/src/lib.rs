//! Tao General Difference (TGD) operators.
//!
//! A TGD replaces the limit in a derivative with a weighted difference over a
//! finite interval `[x0 - W, x0 + W]`. Every operator is built from a kernel
//! `w(t)` on `(0, W]` and applied to sampled data by convolution.
//!
//! - [`kernel`]: kernel families, normalization and constraint checks.
//! - [`op1d`]: continuous operators and their 1D discretizations.
//! - [`opnd`]: rotational, orthogonal and LoT operators in 2D and 3D.
//! - [`conv`]: convolution of sampled fields with boundary policies.
//!
//! Sign convention: operators are stored with positive first-order weights at
//! negative offsets (`[1, 0, -1]` for `N = 1`) and applied by true convolution,
//! `out(n) = sum_i op(i) * x(n - i)`, so a rising ramp gives a positive slope.

pub mod conv;
pub mod error;
pub mod field;
pub mod fit;
pub mod kernel;
pub mod metrics;
pub mod noise;
pub mod op1d;
pub mod opnd;
pub mod quad;
pub mod reference;
pub mod rotation;
pub mod spectrum;

pub use conv::{convolve, convolve_separable, OperatorRef};
pub use error::{Result, TgdError};
pub use field::{Boundary, SampledField};
pub use kernel::{ConstraintReport, Family, KernelDef, KernelSpec};
pub use op1d::{ContinuousOperator, DiscreteOperator1D, Mode, Order, Provenance};
pub use opnd::{Construction, DiscreteOperatorND, NdKind, RotateSpec};
pub use rotation::RotationWeight;
