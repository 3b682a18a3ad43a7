//! Numerical extended Weyl calculus on a one-degree-of-freedom phase space.
//!
//! The crate realizes Heisenberg-Weyl translations acting on phase-space
//! fields `Psi(x, p)`, Weyl quantization of symbols in both the configuration
//! and the phase-space picture, Mehlig-Wilkinson metaplectic operators, the
//! wavepacket (FBI) transform intertwining the two pictures, and solvers for
//! the phase-space Schrodinger equation
//!
//! ```text
//! i hbar dPsi/dt = H(x + i hbar d/dp, -i hbar d/dx) Psi
//! ```
//!
//! Symplectic linear algebra ([`symplectic`]) works in any dimension `2n`;
//! grids and fields are one-dimensional in `x` (so two-dimensional in `z`).
//!
//! Data-parallel inner loops use rayon when the `parallel` feature is on
//! (the default). Results do not depend on the feature: every reduction runs
//! in a fixed order.

pub mod dump;
pub mod error;
pub mod evolve;
pub mod field;
pub mod grid;
pub mod heisenberg;
pub mod metaplectic;
mod par;
mod spectral;
pub mod states;
pub mod symplectic;
pub mod wavepacket;
pub mod weyl;

pub use error::{Error, Result};
pub use evolve::{EvolutionPlan, Hamiltonian, Method};
pub use field::{Axis, ConfigField, Field, PhaseField};
pub use metaplectic::MetaplecticOp;
pub use grid::GridSpec;
pub use num_complex::Complex64;
pub use symplectic::{LinearHamiltonian, PhasePoint, QuadraticHamiltonian, SymplecticMatrix};
