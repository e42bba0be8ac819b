//! Level schemes and optical-pumping rate equations.
//!
//! Three topologies are supported:
//!
//! * [`LevelScheme::Standard3`]: ground `|1>`, excited `|2>` and a metastable
//!   shelving level `|m>` outside the grating bandwidth.
//! * [`LevelScheme::Lambda3`]: two long-lived ground sublevels `|1>`, `|3>`
//!   sharing one excited level `|2>`.
//! * [`LevelScheme::Tm5`]: two ground and two excited sublevels (`|1>`-`|2>`
//!   and `|3>`-`|4>` transitions) plus a metastable level `|m>`, as in Tm:YAG
//!   under a magnetic field.
//!
//! Pumping rates are handled in reduced form. For the standard scheme the
//! reduced rate is `r = R / gamma_m`; for the sublevel schemes it is
//! `r = R / gamma_e`. The dimensionless drive strength is `zeta * <r>` or
//! `xi * <r>` respectively, see [`LevelScheme::drive_scale`].

mod absorption;
mod margins;
mod oracle;
mod scheme;
mod steady;

pub use absorption::{absorption, Absorption, GridTopology};
pub use margins::{weak_field_margins, MarginReport, MarginStatus};
pub use oracle::{
    integrate_populations, rate_generator, transient_oracle, OracleRun, PopulationState,
    RateGenerator, Trajectory, CONSERVATION_TOLERANCE, CONVERGENCE_TOLERANCE, RICHARDSON_TOLERANCE,
};
pub use scheme::{presets, LevelScheme, SchemeKind};
pub use steady::{steady_state, PopulationDifferences};
