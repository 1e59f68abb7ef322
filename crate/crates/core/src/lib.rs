//! Photon information efficiency (PIE) of photon-starved optical links.
//!
//! The crate covers the whole chain from a diffraction-limited link budget
//! down to bits per received photon:
//!
//! * [`linkbudget`]: received power, photon flux, per-slot signal and noise
//!   strengths.
//! * [`caplimits`]: coherent-detection (one and two quadrature) limits and the
//!   Gordon-Holevo bound.
//! * [`detstats`]: per-slot photocount laws for a multimode incoherent filter,
//!   a single-mode pulse gate with on/off detection, and photon number
//!   resolution.
//! * [`ppmcore`]: PPM information measures (noiseless, hard decoding, the
//!   relative-entropy soft-decoding bound, the unrestricted-bandwidth limit).
//! * [`optimize`]: maximization over pulse energy and parameter sweeps.
//! * [`mcoracle`]: seeded Monte Carlo sampling of the same physical models.
//! * [`table2`]: built-in deep-space downlink reference data.
//!
//! ```
//! use pll_core::{caplimits, linkbudget::from_db};
//!
//! let night = from_db(-72.5);
//! let pie = caplimits::gh_pie_asymptote(night).unwrap();
//! assert!((pie - 24.084).abs() < 1e-3);
//! ```

pub mod caplimits;
pub mod detstats;
mod error;
pub mod linkbudget;
pub mod mcoracle;
pub mod optimize;
pub mod ppmcore;
pub mod table2;

pub use error::{Error, Result};
pub use linkbudget::{ChannelPoint, LinkGeometry, Noise};
