//! Diffraction-limited link budget and conversions between received power,
//! photon flux, and per-slot photon numbers.
//!
//! Everything here is in SI units. Astronomical units, wavelengths and slot
//! durations are converted by the caller (see [`au_to_m`],
//! [`wavelength_to_frequency`], [`slot_rate_from_duration`]).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Astronomical unit (m).
pub const ASTRONOMICAL_UNIT: f64 = 1.495_978_707e11;

/// Physical parameters of a free-space optical link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Link range (m).
    pub range: f64,
    /// Transmit aperture diameter (m).
    pub d_tx: f64,
    /// Receive aperture diameter (m).
    pub d_rx: f64,
    /// Carrier frequency (Hz).
    pub carrier: f64,
    /// Receiver subsystem efficiency, in (0, 1].
    pub eta_rx: f64,
    /// Atmospheric transmission, in (0, 1].
    pub eta_atm: f64,
    /// Transmitted optical power (W). Zero is accepted and yields a dark link.
    pub p_tx: f64,
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        check(self.range > 0.0, "range", self.range, "> 0 m")?;
        check(self.d_tx > 0.0, "d_tx", self.d_tx, "> 0 m")?;
        check(self.d_rx > 0.0, "d_rx", self.d_rx, "> 0 m")?;
        check(self.carrier > 0.0, "carrier", self.carrier, "> 0 Hz")?;
        check(
            self.eta_rx > 0.0 && self.eta_rx <= 1.0,
            "eta_rx",
            self.eta_rx,
            "in (0, 1]",
        )?;
        check(
            self.eta_atm > 0.0 && self.eta_atm <= 1.0,
            "eta_atm",
            self.eta_atm,
            "in (0, 1]",
        )?;
        check(self.p_tx >= 0.0, "p_tx", self.p_tx, ">= 0 W")
    }
}

/// Far-field power transmission between two circular apertures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffraction {
    pub factor: f64,
    /// Set when `factor > 1`: the receiver sits in the near field and the
    /// far-field formula overestimates the coupling.
    pub near_field: bool,
}

/// `(1/r²) · f_c² · (π D_rx D_tx / 4c)²`.
pub fn diffraction_loss(geom: &LinkGeometry) -> Result<Diffraction> {
    geom.validate()?;
    let aperture = PI * geom.d_rx * geom.d_tx / (4.0 * SPEED_OF_LIGHT);
    let factor = (geom.carrier * aperture / geom.range).powi(2);
    Ok(Diffraction {
        factor,
        near_field: factor > 1.0,
    })
}

/// Received optical power (W).
pub fn received_power(geom: &LinkGeometry) -> Result<f64> {
    let diff = diffraction_loss(geom)?;
    Ok(geom.eta_rx * geom.eta_atm * diff.factor * geom.p_tx)
}

/// Photons per second carried by power `p_rx` at carrier frequency `carrier`.
pub fn photon_flux(p_rx: f64, carrier: f64) -> Result<f64> {
    check(p_rx >= 0.0, "p_rx", p_rx, ">= 0 W")?;
    check(carrier > 0.0, "carrier", carrier, "> 0 Hz")?;
    Ok(p_rx / (PLANCK * carrier))
}

/// Mean photons per slot, `n_s = flux / B`.
pub fn signal_per_slot(flux: f64, slot_rate: f64) -> Result<f64> {
    check(flux >= 0.0, "flux", flux, ">= 0 photons/s")?;
    check(slot_rate > 0.0, "slot_rate", slot_rate, "> 0 Hz")?;
    Ok(flux / slot_rate)
}

/// Background photons per slot reaching the detector through `mode_count`
/// temporal modes, given a noise power spectral density in W/Hz.
///
/// With `mode_count = 1` the result is the noise per signal mode `n_n`.
pub fn noise_per_slot(noise_psd: f64, carrier: f64, mode_count: u32) -> Result<f64> {
    check(noise_psd >= 0.0, "noise_psd", noise_psd, ">= 0 W/Hz")?;
    check(carrier > 0.0, "carrier", carrier, "> 0 Hz")?;
    check(mode_count >= 1, "mode_count", mode_count as f64, ">= 1")?;
    Ok(mode_count as f64 * noise_psd / (PLANCK * carrier))
}

/// Background photons per slot from a measured background photon flux.
pub fn noise_from_background_flux(flux: f64, slot_rate: f64) -> Result<f64> {
    signal_per_slot(flux, slot_rate)
}

/// `10 log10(x)`.
pub fn db(x: f64) -> Result<f64> {
    check(x > 0.0, "x", x, "> 0 for a decibel value")?;
    Ok(10.0 * x.log10())
}

pub fn from_db(value_db: f64) -> f64 {
    10f64.powf(value_db / 10.0)
}

pub fn au_to_m(au: f64) -> f64 {
    au * ASTRONOMICAL_UNIT
}

pub fn wavelength_to_frequency(wavelength_m: f64) -> Result<f64> {
    check(wavelength_m > 0.0, "wavelength", wavelength_m, "> 0 m")?;
    Ok(SPEED_OF_LIGHT / wavelength_m)
}

pub fn slot_rate_from_duration(slot_s: f64) -> Result<f64> {
    check(slot_s > 0.0, "slot duration", slot_s, "> 0 s")?;
    Ok(1.0 / slot_s)
}

/// Background noise as seen by the detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Noise {
    /// Poissonian noise collected over many temporal modes by an incoherent
    /// filter; `n_b` photons per slot. `modes` records the effective mode
    /// count when known.
    Multimode { n_b: f64, modes: Option<u32> },
    /// Thermal noise confined to the signal mode; `n_n` photons per mode.
    SingleMode { n_n: f64 },
}

impl Noise {
    pub fn multimode(n_b: f64) -> Self {
        Noise::Multimode { n_b, modes: None }
    }

    pub fn single_mode(n_n: f64) -> Self {
        Noise::SingleMode { n_n }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Noise::Multimode { n_b, .. } => n_b,
            Noise::SingleMode { n_n } => n_n,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Noise::Multimode { .. } => "multimode",
            Noise::SingleMode { .. } => "single-mode",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.value();
        check(v >= 0.0 && v.is_finite(), "noise", v, "finite and >= 0")
    }
}

/// Operating point of the channel: signal photons per slot and noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPoint {
    pub n_s: f64,
    pub noise: Noise,
}

impl ChannelPoint {
    pub fn new(n_s: f64, noise: Noise) -> Result<Self> {
        let point = ChannelPoint { n_s, noise };
        point.validate()?;
        Ok(point)
    }

    pub fn validate(&self) -> Result<()> {
        check(
            self.n_s >= 0.0 && self.n_s.is_finite(),
            "n_s",
            self.n_s,
            "finite and >= 0",
        )?;
        self.noise.validate()
    }
}
