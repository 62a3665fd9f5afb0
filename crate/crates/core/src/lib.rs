//! Numerical workbench for the real quartic surfaces
//!
//! ```text
//! (y₂y₃ + Q(y₀,y₁))² − y₀y₁(y₀+y₁)(y₀−a·y₁) = 0
//! ```
//!
//! and the objects built from them: plane sections and their bitangents,
//! real touching conics on C*-invariant planes, the h-functions that decide
//! which small resolutions can work, the intersection lattices behind the
//! bitangent counts, and the three-parameter moduli chart with its
//! involution.

pub mod bitangents;
pub mod config;
pub mod conics;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod moduli;
pub mod numkit;
pub mod resolutions;
pub mod surface;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
