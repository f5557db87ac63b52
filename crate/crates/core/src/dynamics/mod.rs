//! Quench dynamics from the Néel state.

mod bessel;
mod grid;
mod propagate;
mod quench;

pub use bessel::bessel_j_sequence;
pub use grid::{TimeGrid, DEFAULT_POINTS_PER_DECADE, DEFAULT_T_MAX, DEFAULT_T_MIN};
pub use propagate::{chebyshev_propagate, chebyshev_propagate_in_place, PropagatorWork, StepInfo, DEFAULT_EPS_M, MAX_EXPANSION_ORDER};
pub use quench::{
    dense_propagate, dense_states, evolve_all, evolve_ggm_series, evolve_realization, neel_state, steady_state_value, Propagator,
    QuenchParams, QuenchSeries, Trajectory, DEFAULT_STEADY_T_LO, NEEL_WINDOW,
};
