//! Damped harmonic oscillator toolkit: Caldirola-Kanai dynamics and its
//! symmetry operators, the Bateman dual system, its group law and
//! quantization, and the constraint reduction back to Caldirola-Kanai.

pub mod arnold;
pub mod bateman;
pub mod bateman_group;
pub mod ck_evolve;
pub mod ck_ops;
pub mod cli;
pub mod coeffring;
pub mod damped_particle;
pub mod constraint_reduce;
pub mod error;
pub mod grid;
pub mod lie;
pub mod mixedrep;
pub mod model_core;
pub mod ode;
pub mod report;
pub mod weylalg;

pub use coeffring::ExpPoly;
pub use error::{Error, Result};
pub use model_core::{build_basis, ClassicalBasis, PhysParams};
pub use num_complex::Complex64 as C64;
pub use weylalg::{MonomialKey, WeylOp};
