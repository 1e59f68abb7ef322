pub mod linkbudget;
pub mod mc;
pub mod pie;
pub mod sweep;
pub mod table;

use pll_core::linkbudget::{db, from_db, Noise};

use crate::args::NoiseArgs;
use crate::report::{Cell, Report};
use crate::CliError;

/// Noise given on the command line, `None` when no noise flag was used.
pub(crate) fn noise_from_args(a: &NoiseArgs) -> Option<Noise> {
    if let Some(v) = a.nb.or(a.nb_db.map(from_db)) {
        return Some(Noise::multimode(v));
    }
    a.nn.or(a.nn_db.map(from_db)).map(Noise::single_mode)
}

pub(crate) fn require<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

/// `10 log10 x`, or `-inf` for zero.
pub(crate) fn db_or_floor(x: f64) -> f64 {
    db(x).unwrap_or(f64::NEG_INFINITY)
}

/// Starts a `quantity, value, unit` report.
pub(crate) fn key_value_report(command: &'static str, model: &str) -> Report {
    let mut r = Report::new(command, model);
    r.columns(&[("quantity", ""), ("value", ""), ("unit", "")]);
    r
}

pub(crate) fn kv(r: &mut Report, quantity: &str, value: impl Into<Cell>, unit: &str) {
    r.row(vec![quantity.into(), value.into(), unit.into()]);
}

pub(crate) fn noise_inputs(r: &mut Report, noise: &Noise) {
    match *noise {
        Noise::Multimode { n_b, .. } => r.input("nb", n_b),
        Noise::SingleMode { n_n } => r.input("nn", n_n),
    }
}
