//! Dense spectra, Lanczos spectral bounds and the filtered interior eigensolver.

mod bounds;
mod dense;
mod dispatch;
mod filter;
pub(crate) mod krylov;
mod polfed;
mod selection;

pub use bounds::{extremal_bounds, normalize_operator, NormalizedOperator, SpectralBounds, DEFAULT_MARGIN};
pub use dense::{dense_eigensystem, dense_eigenvalues, dense_middle, dense_spectrum, DenseEigensystem, MAX_DENSE_DIM};
pub use dispatch::{solve_middle, solve_middle_values, SolverSettings};
pub use filter::{filter_apply, filter_coefficients, ChebyshevFilter, FilterWork};
pub use polfed::{auto_filter_order, polfed_interior, PolfedConfig, ACCEPTED_RESIDUAL};
pub use selection::{middle_selection, read_checkpoint, write_checkpoint, EigenSelection, SolverKind};
