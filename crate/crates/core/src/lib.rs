//! Classical-spin dynamics and design tools for a three-spin magnetic Toffoli gate.
//!
//! Two control spins stay frozen in one of four logical configurations and
//! steer the precession of a target spin through the effective field they
//! produce. The crate provides:
//!
//! - [`spin`]: unit vectors, bit encoding and the Toffoli truth table;
//! - [`dynamics`]: effective fields, the LLG right-hand side and an RK4 integrator;
//! - [`analytics`]: elliptic-integral flip times and quartic-first-integral periods;
//! - [`design`]: gate-time commensurability solvers, pole stability, physical units;
//! - [`verify`]: truth-table certification of a candidate gate;
//! - [`cli`]: the `magtoffoli` command-line front end.

pub mod analytics;
pub mod cli;
pub mod design;
pub mod dynamics;
pub mod error;
pub mod spin;
pub mod verify;

pub use error::{Error, Result};
