//! Squared Hopf coalgebras over a finite-dimensional Hopf algebra `H`.
//!
//! Objects of `V = H-comod` and of its tensor powers are modelled as
//! comodules over `H^{⊗n}`; every structure map is an exact matrix.

pub mod coend;
pub mod comod;
pub mod error;
pub mod exactla;
pub mod fixtures;
pub mod hopf;
pub mod io;
pub mod pipeline;
pub mod placement;
pub mod report;
pub mod squared;

pub use error::{Error, Result};
pub use exactla::{Field, Matrix, Scalar};
pub use report::{VerificationReport, Witness};
