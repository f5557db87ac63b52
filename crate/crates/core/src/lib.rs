//! Disordered Heisenberg chains with two- and three-body Dzyaloshinskii-Moriya
//! couplings: sector Hamiltonians, dense and filtered interior eigensolvers,
//! Chebyshev quench dynamics, multipartite entanglement and finite-size scaling.

pub mod analysis;
pub mod dynamics;
pub mod eigensolve;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod observables;
pub mod output;
pub mod pipeline;
pub mod seeding;

mod linalg;

pub use error::{Error, Result};
