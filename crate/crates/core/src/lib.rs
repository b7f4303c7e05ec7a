//! Traveling-wave stability toolkit for a free-interface combustion model with
//! ignition temperature and stepwise kinetics.
//!
//! The wave moves with unit speed; its single shape parameter is
//! `m = Θi/(1−Θi)` and the Lewis number enters through `ε = 1/Le`.
//!
//! * [`model`] — parameters and the explicit traveling wave.
//! * [`spectral`] — branch data, dispersion relations, essential spectrum,
//!   boundary matrix and eigenfunctions.
//! * [`rootscan`] — argument-principle root location in rectangles.
//! * [`hurwitz`] — the degree-7 squared polynomial, Hurwitz determinants and
//!   the Hopf critical curve `m_c(ε)`.
//! * [`simulator`] — front-fixed method-of-lines solver for the free-interface
//!   problem.

pub mod error;
pub mod hurwitz;
pub mod model;
pub mod poly;
pub mod rootscan;
pub mod simulator;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{ModelParams, Side, WaveJumps, WaveProfile};
