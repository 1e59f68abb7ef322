use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "pll",
    version,
    about = "Photon information efficiency of photon-starved optical links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Received power, photon flux and per-slot signal/noise strengths.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Linkbudget(LinkbudgetArgs),
    /// PIE of one receiver at one operating point.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Pie(PieArgs),
    /// Optimized PPM operating points over an (n_s, noise) grid.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Achievable rates of the deep-space reference downlink.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Table2(Table2Args),
    /// Compare the analytic detection statistics with Monte Carlo samples.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    McValidate(McArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Emit JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Write to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// JSON object of parameters, keyed by flag name with `_` for `-`.
    /// Flags given on the command line take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// Noise strength given either as a plain number or in dB.
#[derive(Args, Debug, Clone, Default)]
pub struct NoiseArgs {
    /// Multimode noise photons per slot.
    #[arg(long, conflicts_with_all = ["nb_db", "nn", "nn_db"])]
    pub nb: Option<f64>,
    #[arg(long, conflicts_with_all = ["nn", "nn_db"])]
    pub nb_db: Option<f64>,
    /// Single-mode noise photons per mode.
    #[arg(long, conflicts_with = "nn_db")]
    pub nn: Option<f64>,
    #[arg(long)]
    pub nn_db: Option<f64>,
}

#[derive(Args, Debug)]
pub struct LinkbudgetArgs {
    #[arg(long, conflicts_with = "range_m")]
    pub range_au: Option<f64>,
    #[arg(long)]
    pub range_m: Option<f64>,
    /// Transmit aperture diameter.
    #[arg(long)]
    pub d_tx_m: Option<f64>,
    /// Receive aperture diameter.
    #[arg(long)]
    pub d_rx_m: Option<f64>,
    #[arg(long, conflicts_with = "wavelength_nm")]
    pub carrier_hz: Option<f64>,
    #[arg(long)]
    pub wavelength_nm: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub eta_rx: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta_atm: f64,
    #[arg(long)]
    pub p_tx_w: Option<f64>,
    /// Received signal photon flux, used when no geometry is given.
    #[arg(long, conflicts_with = "p_tx_w")]
    pub signal_flux_per_s: Option<f64>,
    /// PPM slot duration.
    #[arg(long)]
    pub slot_ns: f64,
    /// Background photons per second passed by the multimode filter.
    #[arg(long, conflicts_with = "noise_psd_w_per_hz")]
    pub bg_flux_per_s: Option<f64>,
    /// Background spectral density in the signal mode.
    #[arg(long)]
    pub noise_psd_w_per_hz: Option<f64>,
    /// Temporal-spectral modes passed by the multimode filter.
    #[arg(long)]
    pub modes: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PieArgs {
    /// S1, S2, GH, SIF_HARD, SIF_SOFT, QPG_ONOFF or QPG_PNR.
    #[arg(long)]
    pub model: String,
    /// Signal photons per slot.
    #[arg(long, conflicts_with = "ns_db")]
    pub ns: Option<f64>,
    #[arg(long)]
    pub ns_db: Option<f64>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Photons per PPM pulse.
    #[arg(long, conflicts_with_all = ["m", "optimize", "unrestricted"])]
    pub nf: Option<f64>,
    /// PPM order; the pulse carries `m · n_s` photons.
    #[arg(long, conflicts_with_all = ["optimize", "unrestricted"])]
    pub m: Option<u64>,
    /// Maximize over pulse energy.
    #[arg(long, conflicts_with = "unrestricted")]
    pub optimize: bool,
    /// Supremum over pulse energy as n_s → 0 (unlimited bandwidth).
    #[arg(long)]
    pub unrestricted: bool,
    #[arg(long)]
    pub nf_min: Option<f64>,
    #[arg(long)]
    pub nf_max: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// SIF_HARD, SIF_SOFT, QPG_ONOFF or QPG_PNR.
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 1e-6)]
    pub ns_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub ns_max: f64,
    #[arg(long, default_value_t = 61)]
    pub ns_points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub noise_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_max: f64,
    #[arg(long, default_value_t = 61)]
    pub noise_points: usize,
    #[arg(long)]
    pub nf_min: Option<f64>,
    #[arg(long)]
    pub nf_max: Option<f64>,
    /// Also write `<PREFIX>_pie.csv`, `<PREFIX>_nf_star.csv` and
    /// `<PREFIX>_m_star.csv` as noise × n_s matrices.
    #[arg(long, value_name = "PREFIX")]
    pub panels: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct Table2Args {
    #[arg(long, default_value_t = -39.5)]
    pub night_nb_db: f64,
    #[arg(long, default_value_t = -9.5)]
    pub day_nb_db: f64,
    #[arg(long, default_value_t = -72.5)]
    pub night_nn_db: f64,
    #[arg(long, default_value_t = -42.5)]
    pub day_nn_db: f64,
    /// Upper end of the pulse-energy search.
    #[arg(long, default_value_t = 1e3)]
    pub nf_max: f64,
    /// Seven comma-separated received photon fluxes replacing the built-in ones.
    #[arg(long, value_delimiter = ',', num_args = 7)]
    pub flux_per_s: Option<Vec<f64>>,
    /// Add the daytime multimode column, which has no published counterpart.
    #[arg(long)]
    pub with_sif_day: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct McArgs {
    /// SIF, QPG, QPG_PNR or SIF_HARD.
    #[arg(long)]
    pub model: String,
    /// Photons per pulse (slot statistics).
    #[arg(long)]
    pub nf: Option<f64>,
    /// Signal photons per slot (hard-decoded frames).
    #[arg(long)]
    pub ns: Option<f64>,
    /// PPM order (hard-decoded frames).
    #[arg(long)]
    pub m: Option<u32>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Slots (or frames) per simulated law.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Relative error applied to every analytic value; a non-zero value is a
    /// negative control that should make the run fail.
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
    /// Write the sampled histogram(s) as CSV.
    #[arg(long, value_name = "PATH")]
    pub histogram: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}
