use pll_core::linkbudget::{self as lb, LinkGeometry, PLANCK};

use super::{db_or_floor, key_value_report, kv};
use crate::args::LinkbudgetArgs;
use crate::{CliError, Outcome};

fn carrier(a: &LinkbudgetArgs) -> Result<Option<f64>, CliError> {
    match (a.carrier_hz, a.wavelength_nm) {
        (Some(f), _) => Ok(Some(f)),
        (None, Some(nm)) => Ok(Some(lb::wavelength_to_frequency(nm * 1e-9)?)),
        (None, None) => Ok(None),
    }
}

fn geometry(a: &LinkbudgetArgs, carrier: Option<f64>) -> Result<Option<LinkGeometry>, CliError> {
    let range = a.range_m.or(a.range_au.map(lb::au_to_m));
    let given = [range, a.d_tx_m, a.d_rx_m, a.p_tx_w];
    if given.iter().all(Option::is_none) {
        return Ok(None);
    }
    let missing: Vec<&str> = [
        ("range-au or --range-m", range),
        ("d-tx-m", a.d_tx_m),
        ("d-rx-m", a.d_rx_m),
        ("p-tx-w", a.p_tx_w),
        ("carrier-hz or --wavelength-nm", carrier),
    ]
    .iter()
    .filter(|(_, v)| v.is_none())
    .map(|(k, _)| *k)
    .collect();
    if !missing.is_empty() {
        return Err(CliError::Usage(format!(
            "incomplete link geometry, missing --{}",
            missing.join(", --")
        )));
    }
    let g = LinkGeometry {
        range: range.unwrap(),
        d_tx: a.d_tx_m.unwrap(),
        d_rx: a.d_rx_m.unwrap(),
        carrier: carrier.unwrap(),
        eta_rx: a.eta_rx,
        eta_atm: a.eta_atm,
        p_tx: a.p_tx_w.unwrap(),
    };
    g.validate()?;
    Ok(Some(g))
}

pub fn run(a: &LinkbudgetArgs) -> Result<Outcome, CliError> {
    lb::slot_rate_from_duration(a.slot_ns * 1e-9)?;
    // 1e9 / ns avoids the rounding in 1 / (ns · 1e-9).
    let slot_rate = 1e9 / a.slot_ns;
    let carrier = carrier(a)?;
    let geom = geometry(a, carrier)?;
    let mut r = key_value_report("linkbudget", "none");
    r.input("slot_ns", a.slot_ns);

    let signal_flux = if let Some(g) = geom {
        r.input("range_m", g.range);
        r.input("d_tx_m", g.d_tx);
        r.input("d_rx_m", g.d_rx);
        r.input("carrier_hz", g.carrier);
        r.input("eta_rx", g.eta_rx);
        r.input("eta_atm", g.eta_atm);
        r.input("p_tx_w", g.p_tx);
        let d = lb::diffraction_loss(&g)?;
        if d.near_field {
            eprintln!("warning: diffraction factor exceeds 1, far-field formula does not hold");
            r.notes.push("near field: diffraction factor exceeds 1".into());
        }
        kv(&mut r, "diffraction_factor", d.factor, "");
        kv(&mut r, "diffraction_factor_db", db_or_floor(d.factor), "dB");
        let p_rx = lb::received_power(&g)?;
        kv(&mut r, "received_power", p_rx, "W");
        kv(&mut r, "received_power_dbm", db_or_floor(p_rx * 1e3), "dBm");
        Some(lb::photon_flux(p_rx, g.carrier)?)
    } else {
        if let Some(f) = a.signal_flux_per_s {
            r.input("signal_flux_per_s", f);
        }
        a.signal_flux_per_s
    };
    kv(&mut r, "slot_rate", slot_rate, "Hz");
    if let Some(flux) = signal_flux {
        let n_s = lb::signal_per_slot(flux, slot_rate)?;
        kv(&mut r, "signal_flux", flux, "photons/s");
        kv(&mut r, "n_s", n_s, "photons/slot");
        kv(&mut r, "n_s_db", db_or_floor(n_s), "dB");
    }

    let modes = a.modes.unwrap_or(1);
    if let Some(m) = a.modes {
        r.input("modes", m as u64);
    }
    let noise = match (a.bg_flux_per_s, a.noise_psd_w_per_hz) {
        (Some(flux), _) => {
            r.input("bg_flux_per_s", flux);
            let n_b = lb::noise_from_background_flux(flux, slot_rate)?;
            Some((n_b, n_b / modes as f64))
        }
        (None, Some(psd)) => {
            r.input("noise_psd_w_per_hz", psd);
            let f = carrier.ok_or_else(|| {
                CliError::Usage("--noise-psd-w-per-hz needs --carrier-hz or --wavelength-nm".into())
            })?;
            let n_n = lb::noise_per_slot(psd, f, 1)?;
            kv(&mut r, "noise_psd_in_photon_units", psd / (PLANCK * f), "");
            Some((lb::noise_per_slot(psd, f, modes)?, n_n))
        }
        (None, None) => None,
    };
    if let Some((n_b, n_n)) = noise {
        kv(&mut r, "n_b", n_b, "photons/slot");
        kv(&mut r, "n_b_db", db_or_floor(n_b), "dB");
        kv(&mut r, "n_n", n_n, "photons/mode");
        kv(&mut r, "n_n_db", db_or_floor(n_n), "dB");
    }

    if signal_flux.is_none() && noise.is_none() {
        return Err(CliError::Usage(
            "nothing to compute: give a link geometry, --signal-flux-per-s, or a noise source".into(),
        ));
    }
    Ok(r.into())
}
