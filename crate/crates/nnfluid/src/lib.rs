//! Simulator and verification harness for a 1-D heat-conducting compressible
//! power-law fluid in Lagrangian mass coordinates.
//!
//! The crate is organized bottom-up:
//! - [`grid`]: uniform truncated grid, derivatives, weighted integrals;
//! - [`model`]: parameters, constitutive flux, density profiles, initial data;
//! - [`solver`]: implicit time stepper (lagged fixed-point outer loop, damped
//!   Newton inner solves) with an energy-exact heating discretization;
//! - [`energetics`]: weighted energy/dissipation functionals and a-priori
//!   bound envelopes with runtime audits;
//! - [`extension`]: local continuation bounds and the segment scheduler that
//!   chains short solves into long horizons;
//! - [`verify`]: independent oracles — manufactured solutions, conservation
//!   audits, inequality property checks, and a linear-reference reduction;
//! - [`report`]: reproducible CSV/JSON artifacts keyed by a config hash.

pub mod energetics;
pub mod error;
pub mod extension;
pub mod grid;
pub mod model;
pub mod report;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
