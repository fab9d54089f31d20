//! Degrees-of-freedom regions of two-user MIMO Z and full interference
//! channels, and a blind interference-alignment scheme that reaches the
//! no-CSIT corner point `(M1, min(M2,N2)(N1−M1)/N1)` when
//! `M1 < N1 < min(M2, N2)` using antenna mode switching at transmitter 1.
//!
//! - [`matkernel`]: dense complex matrices, Kronecker products, SVD rank,
//!   log-det rates, DFT matrices.
//! - [`dofregion`]: the four DoF regions as exact rational polytopes.
//! - [`biascheme`]: nulling and beamforming matrices, time expansion and
//!   verification of the alignment conditions.
//! - [`simulate`]: seeded Monte Carlo rates and DoF slope estimates.
//! - [`properties`]: region-level properties swept over configurations.

pub mod biascheme;
pub mod dofregion;
pub mod error;
pub mod matkernel;
pub mod properties;
pub mod rational;
pub mod simulate;

pub use biascheme::{BiaScheme, TimeExpandedChannels, Tolerances, VerificationReport};
pub use dofregion::{AntennaConfig, Channel, DofPair, DofRegion, HalfPlane};
pub use error::{Error, Result};
pub use matkernel::ComplexMatrix;
pub use rational::Rational;
pub use simulate::{ChannelDraw, DofEstimate, RatePoint, RateSweep};
