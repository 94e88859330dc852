//! Reference values for testing the estimators: closed-form Gaussian VAR(1)
//! measures and exact plug-in values on discrete sequences.

mod plugin;
mod var;

pub use plugin::{plugin_discrete_measure, DiscretePmf, PluginResult};
pub use var::{
    analytic_gaussian_measure, gen_var1, stationary_covariance, StationaryCovariance, Var1System,
    DEFAULT_BURN_IN, GENERATOR,
};
