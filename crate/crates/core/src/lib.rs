//! Photon-number statistics of squeezed number states.
//!
//! A squeezed number state is obtained by applying the single-mode squeeze
//! operator to a harmonic-oscillator number state |n>. Its photon-number
//! distribution P(m) oscillates strongly; this crate computes it three ways
//! and quantifies where each approximation holds:
//!
//! * exact overlap integrals (Gauss-Hermite quadrature or a three-term
//!   recurrence in the outcome index), in [`exact_dist`];
//! * a semiclassical formula built from the area and phases of the crossing
//!   region of two phase-space bands, in [`interference`] and [`wkb_engine`];
//! * closed forms derived from Wigner-function overlaps of band areas, in
//!   [`cohen_dist`].
//!
//! All numerics are generic over the floating-point scalar via [`real::Real`]
//! (f64 for production, f32 usable for storage/smoke testing). The crate-root
//! alias [`Scalar`] is f64.

pub mod cohen_dist;
pub mod compare;
pub mod distribution;
pub mod error;
pub mod exact_dist;
pub mod interference;
pub mod real;
pub mod special_fn;
pub mod states;
pub mod wkb_engine;

mod cache;

pub use compare::ComparisonReport;
pub use distribution::{Distribution, EntryFlag, Method};
pub use error::{Result, SqzError};
pub use states::SqueezedNumberState;
pub use wkb_engine::WkbState;

/// Default scalar type for production use.
pub type Scalar = f64;
