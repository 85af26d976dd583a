//! Norm derivatives and orthogonality relations in the Hilbert module
//! `M_{m,n}(ℂ)` over `M_n(ℂ)`.
//!
//! States of `M_n(ℂ)` are density matrices, and the states attaining the norm
//! of `x` are those supported on the top eigenspace of `⟨x, x⟩`. The one-sided
//! derivatives `ρ±` and the orthogonality relations all reduce to spectral
//! questions about compressions to that eigenspace; [`verify`] checks them
//! against definition-level brute force.

pub mod daugavet;
pub mod derivative;
pub mod error;
pub mod io;
pub mod matrix;
pub mod module;
pub mod numrange;
pub mod ortho;
pub mod parallel;
pub mod search;
pub mod state;
pub mod verify;

pub use daugavet::{module_daugavet_check, operator_daugavet_witness, rho_cube_identity};
pub use derivative::{rho_fd, rho_minus, rho_pair, rho_plus, DerivativePair, Side};
pub use error::{Error, Result};
pub use matrix::{adjoint, hermitian_spectrum, operator_norm, ComplexMatrix, HermitianSpectrum};
pub use module::{inner_product, module_action, module_norm, AlgebraElement, ModuleElement};
pub use numrange::{zero_in_numrange, ZeroMembership};
pub use ortho::{decide, OrthoReport, Relation, Witness};
pub use parallel::Execution;
pub use state::{top_face, StateWitness, TopFace};
