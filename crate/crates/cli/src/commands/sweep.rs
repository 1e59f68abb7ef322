use std::path::{Path, PathBuf};

use pll_core::optimize::{self, log_grid, Model, SearchOptions, SweepTable};

use crate::args::SweepArgs;
use crate::report::{Cell, Report};
use crate::{CliError, Outcome};

fn grid(lo: f64, hi: f64, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) || n == 0 {
        return Err(CliError::Usage(format!(
            "{what} grid needs 0 < min <= max and at least one point"
        )));
    }
    if n > 1 && hi == lo {
        return Err(CliError::Usage(format!("{what} grid with several points needs min < max")));
    }
    Ok(log_grid(lo, hi, n))
}

fn noise_column(model: Model) -> &'static str {
    match model {
        Model::SifHard | Model::SifSoft => "n_b",
        Model::QpgOnOff | Model::QpgPnr => "n_n",
    }
}

/// Long-format table: one row per cell.
pub fn table_report(t: &SweepTable, range: (f64, f64)) -> Report {
    let mut r = Report::new("sweep", t.model.tag());
    r.input("ns_min", t.ns_grid[0]);
    r.input("ns_max", *t.ns_grid.last().unwrap());
    r.input("ns_points", t.ns_grid.len() as u64);
    r.input("noise_min", t.noise_grid[0]);
    r.input("noise_max", *t.noise_grid.last().unwrap());
    r.input("noise_points", t.noise_grid.len() as u64);
    r.input("nf_min", range.0);
    r.input("nf_max", range.1);
    r.columns(&[
        ("n_s", "photons/slot"),
        (noise_column(t.model), if t.model.noise_name() == "n_b" { "photons/slot" } else { "photons/mode" }),
        ("pie", "bits/photon"),
        ("nf_star", "photons"),
        ("m_star", "slots"),
        ("boundary_hit", ""),
        ("flags", ""),
    ]);
    for c in &t.cells {
        let row = match &c.result {
            Ok(p) => {
                let flags = if p.m_floor { "m_floor" } else { "" };
                vec![
                    c.n_s.into(),
                    c.noise.into(),
                    p.pie_star.into(),
                    p.nf_star.into(),
                    p.m_star.into(),
                    p.boundary_hit.into(),
                    flags.into(),
                ]
            }
            Err(e) => vec![
                c.n_s.into(),
                c.noise.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                false.into(),
                format!("error: {e}").into(),
            ],
        };
        r.row(row);
    }
    r
}

/// One panel as a matrix: rows are noise values, columns `n_s` values.
pub fn panel_report(t: &SweepTable, quantity: &str) -> Report {
    let mut r = Report::new("sweep", t.model.tag());
    r.notes.push(format!(
        "{quantity} by {} (rows) and n_s (columns)",
        noise_column(t.model)
    ));
    let mut cols = vec![format!("{} \\ n_s", noise_column(t.model))];
    cols.extend(t.ns_grid.iter().map(|v| Cell::Num(*v).to_csv()));
    r.columns = cols
        .iter()
        .map(|c| crate::report::Column::new(c, ""))
        .collect();
    for (i, &noise) in t.noise_grid.iter().enumerate() {
        let mut row = vec![Cell::Num(noise)];
        for j in 0..t.ns_grid.len() {
            let v = match &t.cell(i, j).result {
                Ok(p) => match quantity {
                    "pie" => p.pie_star,
                    "nf_star" => p.nf_star,
                    _ => p.m_star,
                },
                Err(_) => f64::NAN,
            };
            row.push(Cell::Num(v));
        }
        r.row(row);
    }
    r
}

fn panel_path(prefix: &Path, quantity: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!("_{quantity}.csv"));
    prefix.with_file_name(name)
}

pub fn run(a: &SweepArgs) -> Result<Outcome, CliError> {
    let model: Model = a.model.parse().map_err(CliError::Usage)?;
    let ns = grid(a.ns_min, a.ns_max, a.ns_points, "n_s")?;
    let noise = grid(a.noise_min, a.noise_max, a.noise_points, "noise")?;
    let (lo, hi) = model.default_nf_range();
    let range = (a.nf_min.unwrap_or(lo), a.nf_max.unwrap_or(hi));
    let table = optimize::sweep(model, &ns, &noise, range, &SearchOptions::default())?;

    if let Some(prefix) = &a.panels {
        for q in ["pie", "nf_star", "m_star"] {
            let path = panel_path(prefix, q);
            let text = panel_report(&table, q).to_csv()?;
            std::fs::write(&path, text)
                .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(table_report(&table, range).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_names() {
        assert_eq!(panel_path(Path::new("out/fig4d"), "pie"), PathBuf::from("out/fig4d_pie.csv"));
    }

    #[test]
    fn grid_validation() {
        assert!(grid(0.0, 1.0, 3, "n_s").is_err());
        assert!(grid(1.0, 1.0, 3, "n_s").is_err());
        assert_eq!(grid(1.0, 1.0, 1, "n_s").unwrap(), vec![1.0]);
    }
}
