//! Adaptive dynamics for the game of teams.
//!
//! Strategies are nonnegative profiles over competitive ability, either as
//! a vector `y_0 … y_M` or as samples of a function on `[0, 1]`. They evolve
//! along the selection gradient, projected onto the mean-competitive-ability
//! boundary `mca = ½` once that boundary is reached.
//!
//! ```
//! use teamgame_core::prelude::*;
//!
//! let y0 = Strategy::new(vec![2.0, 1.5, 1.0, 0.5]).unwrap();
//! let cfg = IntegratorConfig::new(Method::Rk4, 1e-3, 2.0).unwrap();
//! let traj = simulate_discrete(&y0, &cfg).unwrap();
//! assert!(traj.switch_time.is_some());
//! assert!((traj.diagnostics.last().unwrap().mca - 0.5).abs() < 1e-9);
//! ```

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod operators;
pub mod quadrature;
pub mod spectral;
pub mod strategy;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::dynamics::{
        defeat_check, is_stationary, mca_lower_bound, mca_rate, reverse_simulate, simulate,
        simulate_discrete, simulate_function, switch_time, IntegratorConfig, MCABound, Method,
        Trajectory,
    };
    pub use crate::error::{Error, Result};
    pub use crate::operators::{
        apply_a_discrete, apply_a_function, build_operators, DiscreteOperators, Regime,
        SampledOperators, SwitchedField,
    };
    pub use crate::quadrature::Quadrature;
    pub use crate::spectral::{
        build_propagator, charpoly_binomial, charpoly_direct, compute_spectrum, stationary_basis,
        CharPoly, Propagator, Spectrum,
    };
    pub use crate::strategy::{
        mca_discrete, mca_function, payoff_discrete, payoff_function, SampledStrategy, Strategy,
        ValidityReport,
    };
}
