//! Exact enumeration, saddle-point asymptotics and limiting-distribution
//! diagnostics for the number of block pairs in type-B set partitions.
//!
//! A B_n-partition is a set partition of `{±1, ..., ±n}` whose blocks are
//! permuted by negation, with at most one block (the zero-block) equal to
//! its own negation. The remaining blocks come in pairs `(B, -B)`.
//!
//! * [`exact_enum`]: the counting triangles `M`, `N`, `S` in exact
//!   arithmetic, plus the identities tying them together.
//! * [`brute_oracle`]: exhaustive enumeration for `n <= 5`.
//! * [`saddle_solver`]: roots of `r (e^{2r} + c) = n`.
//! * [`asymptotics`]: closed-form estimates of `M_n`, `N_n`, `N_n / M_n`.
//! * [`contour_oracle`]: Cauchy-integral quadrature on the saddle circle.
//! * [`distribution`]: exact moments and Kolmogorov distance to the normal.
//! * [`rootedness`]: Sturm certificates for the row polynomials.
//! * [`report`]: the full battery of checks against [`calibration`] bounds.

pub mod asymptotics;
pub mod brute_oracle;
pub mod calibration;
pub mod contour_oracle;
pub mod distribution;
pub mod error;
pub mod exact_enum;
pub mod numeric;
pub mod report;
pub mod rootedness;
pub mod saddle_solver;

pub use error::{Error, Result};
pub use exact_enum::{build_triangle, CountTriangle, Kind, RowPolynomial, RowSweep, SequenceValue};
