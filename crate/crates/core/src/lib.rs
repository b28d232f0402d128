//! Blow-up time lower bounds and radial simulation for a nonlinear-diffusion
//! parabolic–elliptic chemotaxis system.

pub mod bound;
pub mod cascade;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod exponents;
pub mod gn;
pub mod grid;
pub mod pipeline;
pub mod plot;
pub mod quadrature;
pub mod report;
pub mod sim;
pub mod spec;
pub mod trace;

pub use bound::{BoundResult, OdiCoefficients, OsgoodBound};
pub use cascade::{ConstantCascade, EnergyConstants, LpPathConstants, OdiConstants};
pub use config::{RunConfig, VerifyOptions};
pub use diagnostics::EnergyRow;
pub use error::{Error, Result};
pub use exponents::ExponentSet;
pub use grid::RadialGrid;
pub use pipeline::{BoundReport, Failure, VerifyReport};
pub use sim::{RadialState, Verdict};
pub use spec::{DomainGeom, InitialData, ProblemInput, ProblemSpec, Shape};
