//! Downlink SINR of hexagonal, Poisson and fluid cellular networks.
//!
//! The crate draws base-station layouts on a torus ([`placement`]), computes
//! per-user SINR and pooled Monte Carlo samples ([`sinr`]), evaluates the
//! closed-form fluid model ([`fluid`]), and compares the resulting CDFs
//! ([`stats`]). [`experiment`] wires these into the files written by the
//! `fluidsinr` command-line tool.
//!
//! The central observation reproduced here is that the Poisson-network SINR
//! CDF is the fluid-model CDF translated by `3η − 6` dB.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiment;
pub mod fluid;
pub mod numeric;
pub mod placement;
pub mod rng;
pub mod sinr;
pub mod stats;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use fluid::{CellShape, FitCoefficients, FluidCdf, FluidModel};
pub use placement::{LayoutModel, NetworkLayout, Point, TorusRegion};
pub use sinr::{PropagationModel, SinrSampleSet};
pub use stats::{CdfCurve, EmpiricalCdf, ShiftFit};
