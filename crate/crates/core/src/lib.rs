//! Closed-form modeling of a reconfigurable composite right/left-handed
//! (CRLH) leaky-wave antenna loaded with interdigital capacitors.
//!
//! The pipeline runs from layout to beam direction:
//!
//! - [`idc`] extracts the lumped RLC′ model of an interdigital capacitor,
//! - [`cell`] turns its series capacitance into a balanced CRLH unit cell,
//! - [`network`] and [`dispersion`] solve the Bloch problem of the periodic
//!   cascade and map the phase constant to a beam angle,
//! - [`radiation`] synthesizes the array-factor pattern of the finite aperture.
//!
//! [`config`], [`pipeline`], [`output`] and [`checks`] back the command-line tool.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cell;
pub mod checks;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod geometry;
pub mod idc;
pub mod network;
pub mod output;
pub mod pipeline;
pub mod radiation;

pub use cell::{calibrate_balanced, cell_for_state, is_balanced, resonances, CrlhUnitCell, ResonancePair};
pub use dispersion::{
    bloch_gamma, dispersion_sweep, scan_angle, scan_profile, transition_frequency, DispersionPoint, Region,
};
pub use error::{CrlhError, Result};
pub use geometry::{CellGeometry, IdcGeometry, SubstrateSpec, SwitchState};
pub use idc::{extract, IdcLumpedModel};
pub use network::{unit_cell_abcd, TwoPortAbcd};
pub use radiation::{array_factor, main_beam_vs_frequency, RadiationPattern};
