//! Numerical toolkit for Dirac quantum walks and their fermionic cellular
//! automata on a discrete spacetime lattice.
//!
//! The crate is organised bottom-up:
//!
//! * [`spinor`]: closed-form SU(2) algebra, small unitary eigendecompositions
//!   and the principal-branch quasi-energy map.
//! * [`walk1d`]: Bloch matrices, dispersion and gap certificates for the
//!   1+1-D Dirac walk and the rotated-shift ("modified") walk.
//! * [`lattice`]: position-space evolution on a periodic ring.
//! * [`fock`]: mode-level Dirac-sea bookkeeping and modular pair-creation
//!   energies.
//! * [`circuits`]: Jordan-Wigner qubit circuits and an independently built
//!   fermionic reference unitary.
//! * [`walk3d`]: the 3+1-D walks, doubling points and gap scans.
//!
//! Physics inputs are dimensionless wherever possible: `p·δx`, `E·δt` and
//! `m·c²·δt`. [`WalkParams`] carries the physical constants and converts.

pub mod circuits;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod spinor;
pub mod walk1d;
pub mod walk3d;

pub use error::{Error, Result};
pub use walk1d::{BlochResult, Model, WalkParams};
