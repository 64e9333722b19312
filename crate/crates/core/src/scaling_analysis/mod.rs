//! Finite-size scaling collapse and resampling error bars.

mod bootstrap;
mod fit;

pub use bootstrap::{bootstrap_stderr, BootstrapResult, DEFAULT_RESAMPLES, DEFAULT_RESAMPLE_SIZE};
pub use fit::{
    fit_collapse, inner_fit, jackknife_errors, scaling_variable, write_collapse_csv, CollapseConfig, CollapseFit,
    DataPoint,
};
