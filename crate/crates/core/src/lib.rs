//! Exact Mukai-lattice computations on elliptic surfaces: pairings and
//! central charges, the relative Fourier–Mukai action on cohomology, and
//! Bridgeland walls for `1 − ℓϱ` on elliptic K3 surfaces.

pub mod charge;
pub mod check;
pub mod cli;
pub mod error;
pub mod fm;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod walls;

pub use check::Check;
pub use error::{Error, Result};
pub use fm::FmData;
pub use lattice::{CohVector, NsClass, SurfaceData};
pub use rational::Rational;
pub use walls::WallProblem;
