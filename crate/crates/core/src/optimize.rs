//! One-dimensional maximization over pulse energy, and rectangular sweeps
//! over signal and noise strength.
//!
//! The search is a log-spaced scan (guards against multiple local maxima)
//! followed by golden-section refinement in `ln n_f` on the bracket around the
//! best grid point. It is deterministic: the same inputs always produce the
//! same bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detstats::Detection;
use crate::error::{check, Error, Result};
use crate::linkbudget::{ChannelPoint, Noise};
use crate::ppmcore;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Points in the coarse log-spaced scan.
    pub grid_points: usize,
    /// Relative width in `n_f` at which golden-section refinement stops.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid_points: 240,
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}

/// Outcome of [`maximize_over_nf`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NfMaximum {
    pub nf: f64,
    /// Objective value at `nf`; `f64::INFINITY` if the objective diverged.
    pub pie: f64,
    /// Maximizer within 1% of either end of the search range.
    pub boundary_hit: bool,
    pub evaluations: usize,
}

/// `n_f` values `lo · (hi/lo)^(i/(n−1))`, `i = 0..n`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Maximizes `objective` over `n_f ∈ [lo, hi]`.
///
/// A NaN from the objective is an error. An infinite value short-circuits the
/// search and is returned as the maximum.
pub fn maximize_over_nf<F>(objective: F, lo: f64, hi: f64, opts: &SearchOptions) -> Result<NfMaximum>
where
    F: Fn(f64) -> Result<f64>,
{
    check(lo > 0.0 && lo.is_finite(), "lo", lo, "finite and > 0")?;
    check(hi > lo && hi.is_finite(), "hi", hi, "finite and > lo")?;
    check(
        opts.grid_points >= 3,
        "grid_points",
        opts.grid_points as f64,
        ">= 3",
    )?;

    let mut evaluations = 0usize;
    let mut eval = |nf: f64| -> Result<f64> {
        evaluations += 1;
        let v = objective(nf)?;
        if v.is_nan() {
            return Err(Error::Objective { nf });
        }
        Ok(v)
    };

    let grid = log_grid(lo, hi, opts.grid_points);
    let mut best = (grid[0], f64::NEG_INFINITY);
    let mut best_idx = 0;
    for (i, &nf) in grid.iter().enumerate() {
        let v = eval(nf)?;
        if v == f64::INFINITY {
            return Ok(NfMaximum {
                nf,
                pie: v,
                boundary_hit: false,
                evaluations,
            });
        }
        if v > best.1 {
            best = (nf, v);
            best_idx = i;
        }
    }

    let mut a = grid[best_idx.saturating_sub(1)].ln();
    let mut b = grid[(best_idx + 1).min(grid.len() - 1)].ln();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c.exp())?;
    let mut fd = eval(d.exp())?;
    for _ in 0..opts.max_iter {
        for (u, f) in [(c, fc), (d, fd)] {
            if f > best.1 {
                best = (u.exp(), f);
            }
        }
        if b - a < opts.rel_tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d.exp())?;
        }
    }
    for (u, f) in [(c, fc), (d, fd)] {
        if f > best.1 {
            best = (u.exp(), f);
        }
    }

    let (nf, pie) = best;
    Ok(NfMaximum {
        nf,
        pie,
        boundary_hit: nf <= lo * 1.01 || nf >= hi / 1.01,
        evaluations,
    })
}

/// Receiver and decoder combination optimized in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Incoherent multimode filter, on/off detection, hard decoding.
    SifHard,
    /// Incoherent multimode filter, on/off detection, soft-decoding bound.
    SifSoft,
    /// Single-mode pulse gate, on/off detection, soft-decoding bound.
    QpgOnOff,
    /// Single-mode pulse gate, photon number resolution, soft-decoding bound.
    QpgPnr,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::SifHard, Model::SifSoft, Model::QpgOnOff, Model::QpgPnr];

    pub fn tag(&self) -> &'static str {
        match self {
            Model::SifHard => "SIF_HARD",
            Model::SifSoft => "SIF_SOFT",
            Model::QpgOnOff => "QPG_ONOFF",
            Model::QpgPnr => "QPG_PNR",
        }
    }

    /// Name of the noise parameter: `n_b` (multimode) or `n_n` (single mode).
    pub fn noise_name(&self) -> &'static str {
        match self {
            Model::SifHard | Model::SifSoft => "n_b",
            Model::QpgOnOff | Model::QpgPnr => "n_n",
        }
    }

    pub fn noise(&self, value: f64) -> Noise {
        match self {
            Model::SifHard | Model::SifSoft => Noise::multimode(value),
            Model::QpgOnOff | Model::QpgPnr => Noise::single_mode(value),
        }
    }

    pub fn detection(&self) -> Detection {
        match self {
            Model::QpgPnr => Detection::Pnr,
            _ => Detection::OnOff,
        }
    }

    /// Default pulse-energy search range. Photon number resolution keeps
    /// gaining from stronger pulses, so its range is wider.
    pub fn default_nf_range(&self) -> (f64, f64) {
        match self {
            Model::QpgPnr => (1e-6, 1e4),
            _ => (1e-6, 1e3),
        }
    }

    /// Smallest admissible pulse energy at signal strength `n_s`: `M ≥ 1`
    /// for the soft bound, `M ≥ 2` for hard decoding.
    pub fn min_nf(&self, n_s: f64) -> f64 {
        match self {
            Model::SifHard => 2.0 * n_s,
            _ => n_s,
        }
    }

    /// PIE as a function of pulse energy at fixed `(n_s, noise)`.
    ///
    /// Hard decoding needs an integer order: `M = max(2, round(n_f / n_s))`
    /// and the frame is evaluated at `n_f = M · n_s`.
    pub fn objective(&self, n_s: f64, noise: f64) -> impl Fn(f64) -> Result<f64> {
        let model = *self;
        let channel = ChannelPoint {
            n_s,
            noise: model.noise(noise),
        };
        move |n_f| match model {
            Model::SifHard => ppmcore::pie_hard(&channel, hard_order(n_f, n_s)),
            _ => ppmcore::pie_soft_bound(&channel, n_f, model.detection()),
        }
    }
}

fn hard_order(n_f: f64, n_s: f64) -> u64 {
    ((n_f / n_s).round() as u64).max(2)
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        Model::ALL
            .into_iter()
            .find(|m| m.tag() == up)
            .ok_or_else(|| {
                format!("unknown model `{s}` (expected SIF_HARD, SIF_SOFT, QPG_ONOFF or QPG_PNR)")
            })
    }
}

/// Optimized PPM operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PpmOperatingPoint {
    pub nf_star: f64,
    /// PPM order `nf_star / n_s`; an integer for hard decoding.
    pub m_star: f64,
    pub pie_star: f64,
    pub boundary_hit: bool,
    /// The optimum sits at the `M ≥ 1` (or `M ≥ 2`) floor rather than at an
    /// interior maximum.
    pub m_floor: bool,
    pub evaluations: usize,
}

/// Maximizes the model's PIE over pulse energy at `(n_s, noise)`.
///
/// The lower end of `nf_range` is raised to the model's minimum pulse energy.
pub fn optimize_point(
    model: Model,
    n_s: f64,
    noise: f64,
    nf_range: (f64, f64),
    opts: &SearchOptions,
) -> Result<PpmOperatingPoint> {
    ChannelPoint::new(n_s, model.noise(noise))?;
    check(n_s > 0.0, "n_s", n_s, "> 0")?;
    let floor = model.min_nf(n_s);
    let lo = nf_range.0.max(floor);
    let hi = nf_range.1;
    check(hi > lo, "n_f range upper end", hi, "above the minimum pulse energy")?;

    let objective = model.objective(n_s, noise);
    let best = maximize_over_nf(&objective, lo, hi, opts)?;
    let mut evaluations = best.evaluations;
    let (mut nf, mut pie) = (best.nf, best.pie);

    if model == Model::SifHard && pie.is_finite() {
        // Integer polish: the objective is a staircase in n_f.
        let max_m = (hi / n_s).floor() as u64;
        let mut m = hard_order(nf, n_s);
        pie = objective(m as f64 * n_s)?;
        for _ in 0..10_000 {
            let mut moved = false;
            for cand in [m.saturating_sub(1), m + 1] {
                if cand < 2 || cand > max_m || cand == m {
                    continue;
                }
                let v = objective(cand as f64 * n_s)?;
                evaluations += 1;
                if v > pie {
                    pie = v;
                    m = cand;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        nf = m as f64 * n_s;
    }

    let boundary_hit = nf <= lo * 1.01 || nf >= hi / 1.01;
    Ok(PpmOperatingPoint {
        nf_star: nf,
        m_star: if model == Model::SifHard {
            (nf / n_s).round()
        } else {
            nf / n_s
        },
        pie_star: pie,
        boundary_hit,
        m_floor: floor >= nf_range.0 && nf <= lo * 1.01,
        evaluations,
    })
}

/// One cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub n_s: f64,
    pub noise: f64,
    pub result: Result<PpmOperatingPoint>,
}

/// Optimized operating points over a rectangular `(n_s, noise)` grid.
///
/// Cells are stored noise-major: `cells[i * ns_grid.len() + j]` holds
/// `(ns_grid[j], noise_grid[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub model: Model,
    pub ns_grid: Vec<f64>,
    pub noise_grid: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn cell(&self, noise_idx: usize, ns_idx: usize) -> &SweepCell {
        &self.cells[noise_idx * self.ns_grid.len() + ns_idx]
    }
}

fn check_grid(grid: &[f64], what: &'static str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid(what));
    }
    if grid.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Grid("grid values must be finite and positive"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("grid must be strictly increasing"));
    }
    Ok(())
}

/// Optimizes every `(n_s, noise)` cell. Per-cell failures are kept in the
/// cell; only malformed grids abort the sweep.
pub fn sweep(
    model: Model,
    ns_grid: &[f64],
    noise_grid: &[f64],
    nf_range: (f64, f64),
    opts: &SearchOptions,
) -> Result<SweepTable> {
    check_grid(ns_grid, "n_s grid is empty")?;
    check_grid(noise_grid, "noise grid is empty")?;
    let cols = ns_grid.len();
    let run = |idx: usize| {
        let (n_s, noise) = (ns_grid[idx % cols], noise_grid[idx / cols]);
        SweepCell {
            n_s,
            noise,
            result: optimize_point(model, n_s, noise, nf_range, opts),
        }
    };
    let n = cols * noise_grid.len();

    #[cfg(feature = "parallel")]
    let cells = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let cells = (0..n).map(run).collect();

    Ok(SweepTable {
        model,
        ns_grid: ns_grid.to_vec(),
        noise_grid: noise_grid.to_vec(),
        cells,
    })
}
