use pll_core::table2::{self, Column, Conditions, ROWS};

use crate::args::Table2Args;
use crate::report::{Cell, Report};
use crate::{CliError, Outcome};

pub fn run(a: &Table2Args) -> Result<Outcome, CliError> {
    let cond = Conditions {
        night_n_b_db: a.night_nb_db,
        day_n_b_db: a.day_nb_db,
        night_n_n_db: a.night_nn_db,
        day_n_n_db: a.day_nn_db,
        nf_cap: a.nf_max,
    };
    let fluxes: Vec<f64> = match &a.flux_per_s {
        Some(f) if f.len() == ROWS.len() => f.clone(),
        Some(f) => {
            return Err(CliError::Usage(format!(
                "--flux-per-s needs {} values, got {}",
                ROWS.len(),
                f.len()
            )))
        }
        None => ROWS.iter().map(|r| r.flux).collect(),
    };
    if fluxes.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
        return Err(CliError::Usage("fluxes must be finite and >= 0".into()));
    }

    let mut columns = vec![
        Column::SifNight,
        Column::QpgNight,
        Column::QpgDay,
        Column::GhNight,
        Column::GhDay,
    ];
    if a.with_sif_day {
        columns.insert(1, Column::SifDay);
    }
    let out = table2::reproduce(&cond, &columns)?;

    let mut r = Report::new("table2", "SIF_SOFT,QPG_ONOFF,GH");
    r.input("night_nb_db", a.night_nb_db);
    if a.with_sif_day {
        r.input("day_nb_db", a.day_nb_db);
    }
    r.input("night_nn_db", a.night_nn_db);
    r.input("day_nn_db", a.day_nn_db);
    r.input("nf_max", a.nf_max);
    r.notes.push("rate = unlimited-bandwidth PIE x received photon flux".into());
    r.notes.push("expected: mission planning rates, reference data echoed as is".into());
    if a.with_sif_day {
        r.notes.push("sif_day: no published counterpart".into());
    }
    for col in &out {
        r.notes.push(format!("pie {} = {} bits/photon", col.column.key(), crate::report::fmt_num(col.pie)));
    }

    let mut cols: Vec<(String, &str)> = vec![
        ("distance".into(), "au"),
        ("flux".into(), "photons/s"),
        ("expected".into(), "Mbps"),
    ];
    cols.extend(out.iter().map(|c| (c.column.key().to_string(), "Mbps")));
    r.columns = cols
        .iter()
        .map(|(n, u)| crate::report::Column::new(n, u))
        .collect();

    for (i, row) in ROWS.iter().enumerate() {
        let flux = fluxes[i];
        let mut cells = vec![
            Cell::Fixed(row.distance_au, 2),
            Cell::Num(flux),
            Cell::Fixed(row.expected_mbps, 3),
        ];
        cells.extend(out.iter().map(|c| Cell::Fixed(c.pie * flux * 1e-6, 3)));
        r.row(cells);
    }
    Ok(r.into())
}
