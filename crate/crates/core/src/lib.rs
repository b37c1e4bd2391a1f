//! Looped (non-classical) paths in multi-slit interference and the Sorkin
//! parameter `κ` they produce.
//!
//! ```no_run
//! use slitpaths::{sorkin, validate, Preset};
//!
//! let setup = validate(Preset::Photon.setup())?;
//! let kappa = sorkin::kappa(&setup, 0.0, sorkin::Normalization::CentralMax)?;
//! println!("kappa(0) = {kappa:.3e}");
//! # Ok::<(), slitpaths::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod error_budget;
pub mod experiment;
pub mod kernels;
pub mod quadrature;
pub mod run;
pub mod sorkin;

pub use error::{Error, Result, ValidationIssue};
pub use experiment::{preset, validate, ExperimentSetup, Preset, ValidatedSetup};
