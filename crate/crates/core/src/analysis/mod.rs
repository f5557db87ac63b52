//! Finite-size-scaling collapse and the quench growth and plateau fits.

mod collapse;
mod fits;
mod simplex;

pub use collapse::{correlation_length, fss_cost, fss_fit, CollapseFit, FitBox, ScalingDataset, ScalingRow, FLAT_SURFACE};
pub use fits::{
    first_crossing, steady_scaling_fit, transient_fit, transient_fit_points, SteadyFit, TransientFit, ALPHA_THRESHOLD,
    DEFAULT_TRANSIENT_WINDOW, FLAT_PLATEAU, MIN_TRANSIENT_POINTS,
};
