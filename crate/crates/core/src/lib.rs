//! Microwave single-photon sensing with a trapped Bose-Einstein condensate.
//!
//! The crate follows the physical chain from a coplanar-waveguide (CPW)
//! resonator down to counted atoms:
//!
//! * [`cpw`]: conformal-mapping line parameters, the quasi-static field of the
//!   half-wave mode and single-photon field amplitudes.
//! * [`condensate`]: Thomas-Fermi cloud quantities and the spectral
//!   resolution function of the condensate used as a detector.
//! * [`sensing`]: outcoupling amplitude, outcoupled atom density and the
//!   detection-volume atom count per cavity photon.
//!
//! [`special`] and [`quadrature`] are the numerical kernels underneath.

pub mod condensate;
pub mod constants;
pub mod cpw;
pub mod error;
pub mod quadrature;
pub mod sensing;
pub mod special;

pub use constants::{PhysicalConstants, RB87};
pub use error::{Error, Result};
