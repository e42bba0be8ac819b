//! Simulation of interlaced spin gratings: spectro-spatial absorption gratings
//! engraved by optical pumping in inhomogeneously broadened media.
//!
//! The crate is organised bottom-up:
//!
//! * [`kinetics`] holds the level schemes, the steady-state population
//!   differences and a brute-force transient integrator used as an oracle.
//! * [`excitation`] builds pumping-rate profiles over the spectro-spatial
//!   phase (or over optical frequency for finite-bandwidth pulse pairs).
//! * [`engraving`] marches the engraving fields through an optically thick
//!   medium and records the absorption grating `alpha(z, phi)`.
//! * [`diffraction`] propagates a weak probe through the grating and returns
//!   the first-order diffraction efficiency.
//! * [`bench`] turns all of the above into reproducible datasets.
//!
//! ```
//! use isg::prelude::*;
//!
//! let scheme = LevelScheme::tm_yag_isg();
//! let grid = PhaseGrid::new(256)?;
//! let field = sinusoidal_pump(&grid, 30.0 / scheme.xi()?)?;
//! let entrance = entrance_profile(&scheme, &field, 1.0)?;
//! let c = contrast(&entrance, 1.0);
//! assert!((c - 120.0 / 61.0).abs() < 1e-9);
//! # Ok::<(), isg::Error>(())
//! ```

pub mod bench;
pub mod config;
pub mod diffraction;
pub mod engraving;
mod error;
pub mod excitation;
pub mod kinetics;
mod ode;
pub mod validate;

pub use error::{Error, Result};

/// The names most programs need.
pub mod prelude {
    pub use crate::diffraction::{
        efficiency_vs_depth, eta_uniform, probe_efficiency, EfficiencyCurve, ProbeResult,
    };
    pub use crate::engraving::{
        contrast, engrave_large_angle, engrave_small_angle, entrance_profile, fourier_coefficients,
        ideal_grating, max_phase_matched_order, EngravingRegime, FourierGrating, GratingProfile,
        IdealKind, MediumSpec,
    };
    pub use crate::excitation::{replica_field, sinusoidal_pump, ExcitationField, PhaseGrid};
    pub use crate::kinetics::{steady_state, LevelScheme, PopulationDifferences, SchemeKind};
    pub use crate::{Error, Result};
}
