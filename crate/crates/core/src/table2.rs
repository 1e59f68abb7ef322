//! Reference data for a deep-space optical downlink, 1.25 to 2.75 au.
//!
//! Each row pairs a range with the photon flux delivered to the ground
//! receiver and the data rate the mission link plans at that range. The
//! reported columns are the achievable rates quoted for several receivers.
//! [`reproduce`] recomputes those rates as `flux × PIE` from the noise
//! conditions.

use serde::{Deserialize, Serialize};

use crate::caplimits;
use crate::detstats::Detection;
use crate::error::Result;
use crate::linkbudget::{from_db, Noise};
use crate::ppmcore;

/// One range of the reference downlink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub distance_au: f64,
    /// Received photons per second.
    pub flux: f64,
    /// Planned data rate, Mbps.
    pub expected_mbps: f64,
}

pub const ROWS: [ReferenceRow; 7] = [
    ReferenceRow { distance_au: 1.25, flux: 1.67e5, expected_mbps: 0.456 },
    ReferenceRow { distance_au: 1.50, flux: 1.16e5, expected_mbps: 0.456 },
    ReferenceRow { distance_au: 1.75, flux: 8.53e4, expected_mbps: 0.228 },
    ReferenceRow { distance_au: 2.00, flux: 6.53e4, expected_mbps: 0.228 },
    ReferenceRow { distance_au: 2.25, flux: 5.16e4, expected_mbps: 0.228 },
    ReferenceRow { distance_au: 2.50, flux: 4.18e4, expected_mbps: 0.114 },
    ReferenceRow { distance_au: 2.75, flux: 3.45e4, expected_mbps: 0.114 },
];

/// A receiver and noise condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Column {
    SifNight,
    SifDay,
    QpgNight,
    QpgDay,
    GhNight,
    GhDay,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::SifNight,
        Column::SifDay,
        Column::QpgNight,
        Column::QpgDay,
        Column::GhNight,
        Column::GhDay,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Column::SifNight => "sif_night",
            Column::SifDay => "sif_day",
            Column::QpgNight => "qpg_night",
            Column::QpgDay => "qpg_day",
            Column::GhNight => "gh_night",
            Column::GhDay => "gh_day",
        }
    }

    fn is_day(&self) -> bool {
        matches!(self, Column::SifDay | Column::QpgDay | Column::GhDay)
    }

    /// Published rates in Mbps. The daytime multimode receiver was not
    /// reported.
    pub fn reported_mbps(&self) -> Option<[f64; 7]> {
        match self {
            Column::SifNight => Some([1.435, 0.997, 0.733, 0.561, 0.443, 0.359, 0.296]),
            Column::SifDay => None,
            Column::QpgNight => Some([3.087, 2.144, 1.577, 1.207, 0.954, 0.773, 0.638]),
            Column::QpgDay => Some([1.579, 1.097, 0.807, 0.617, 0.488, 0.395, 0.326]),
            Column::GhNight => Some([4.023, 2.794, 2.055, 1.573, 1.243, 1.007, 0.831]),
            Column::GhDay => Some([2.359, 1.638, 1.205, 0.922, 0.729, 0.590, 0.487]),
        }
    }

    /// Bits per photon under `cond`.
    pub fn pie(&self, cond: &Conditions) -> Result<f64> {
        let day = self.is_day();
        match self {
            Column::SifNight | Column::SifDay => {
                let n_b = from_db(if day { cond.day_n_b_db } else { cond.night_n_b_db });
                let r = ppmcore::pie_unrestricted_bandwidth(&Noise::multimode(n_b), Detection::OnOff, cond.nf_cap)?;
                Ok(r.pie)
            }
            Column::QpgNight | Column::QpgDay => {
                let n_n = from_db(if day { cond.day_n_n_db } else { cond.night_n_n_db });
                let r = ppmcore::pie_unrestricted_bandwidth(&Noise::single_mode(n_n), Detection::OnOff, cond.nf_cap)?;
                Ok(r.pie)
            }
            Column::GhNight | Column::GhDay => {
                let n_n = from_db(if day { cond.day_n_n_db } else { cond.night_n_n_db });
                caplimits::gh_pie_asymptote(n_n)
            }
        }
    }
}

/// Noise strengths in dB relative to one photon per slot (multimode) or mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    pub night_n_b_db: f64,
    pub day_n_b_db: f64,
    pub night_n_n_db: f64,
    pub day_n_n_db: f64,
    /// Upper end of the pulse-energy search.
    pub nf_cap: f64,
}

impl Default for Conditions {
    fn default() -> Self {
        Self {
            night_n_b_db: -39.5,
            day_n_b_db: -9.5,
            night_n_n_db: -72.5,
            day_n_n_db: -42.5,
            nf_cap: 1e3,
        }
    }
}

/// Rates recomputed for one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRates {
    pub column: Column,
    pub pie: f64,
    /// Mbps, one entry per [`ROWS`] element.
    pub mbps: Vec<f64>,
}

impl ColumnRates {
    /// Largest `|computed / reported − 1|`, `None` for unreported columns.
    pub fn max_rel_error(&self) -> Option<f64> {
        let reported = self.column.reported_mbps()?;
        Some(
            self.mbps
                .iter()
                .zip(reported)
                .map(|(c, r)| (c / r - 1.0).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Recomputes `columns` over [`ROWS`].
pub fn reproduce(cond: &Conditions, columns: &[Column]) -> Result<Vec<ColumnRates>> {
    columns
        .iter()
        .map(|&column| {
            let pie = column.pie(cond)?;
            let mbps = ROWS.iter().map(|r| r.flux * pie * 1e-6).collect();
            Ok(ColumnRates { column, pie, mbps })
        })
        .collect()
}
