use pll_core::detstats;
use pll_core::linkbudget::{ChannelPoint, Noise};
use pll_core::mcoracle::{self, CountHistogram, McEstimate};
use pll_core::ppmcore;

use super::{noise_from_args, noise_inputs, require};
use crate::args::McArgs;
use crate::report::{Cell, Report};
use crate::{CliError, Outcome};

/// Per-check acceptance band, in standard errors.
const Z_BAND: f64 = 3.0;
/// Bins with fewer expected counts are not tested individually.
const MIN_EXPECTED: f64 = 25.0;
/// Lowest acceptable χ² p-value.
const CHI2_ALPHA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
enum McModel {
    Sif,
    Qpg,
    QpgPnr,
    SifHard,
}

impl McModel {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "SIF" => Ok(McModel::Sif),
            "QPG" => Ok(McModel::Qpg),
            "QPG_PNR" => Ok(McModel::QpgPnr),
            "SIF_HARD" => Ok(McModel::SifHard),
            _ => Err(CliError::Usage(format!(
                "unknown model `{s}` (expected SIF, QPG, QPG_PNR or SIF_HARD)"
            ))),
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            McModel::Sif => "SIF",
            McModel::Qpg => "QPG",
            McModel::QpgPnr => "QPG_PNR",
            McModel::SifHard => "SIF_HARD",
        }
    }
}

struct Checks {
    report: Report,
    failed: Vec<String>,
    perturb: f64,
}

impl Checks {
    fn new(model: McModel, perturb: f64) -> Self {
        let mut report = Report::new("mc-validate", model.tag());
        report.columns(&[
            ("check", ""),
            ("analytic", ""),
            ("empirical", ""),
            ("std_err", ""),
            ("z", ""),
            ("pass", ""),
        ]);
        Self {
            report,
            failed: Vec::new(),
            perturb,
        }
    }

    fn record(&mut self, name: String, analytic: f64, empirical: f64, std_err: f64, z: f64) {
        let pass = z.abs() <= Z_BAND;
        if !pass {
            self.failed.push(format!("{name} (z = {z:.2})"));
        }
        self.report.row(vec![
            name.into(),
            analytic.into(),
            empirical.into(),
            std_err.into(),
            Cell::Fixed(z, 3),
            pass.into(),
        ]);
    }

    /// Compares an estimate with a (perturbed) analytic value.
    fn estimate(&mut self, name: &str, est: McEstimate, analytic: f64) {
        let analytic = analytic * (1.0 + self.perturb);
        self.record(name.into(), analytic, est.value, est.std_err, est.z_score(analytic));
    }

    /// Per-bin comparison of a histogram with a pmf, then a χ² test.
    fn histogram(&mut self, label: &str, hist: &CountHistogram, pmf: &[f64]) {
        let pmf: Vec<f64> = pmf.iter().map(|p| p * (1.0 + self.perturb)).collect();
        let n = hist.samples() as f64;
        for (k, &pk) in pmf.iter().enumerate() {
            if n * pk < MIN_EXPECTED {
                continue;
            }
            let sigma = (pk * (1.0 - pk) / n).sqrt();
            let z = hist.bin_z(k, pk);
            self.record(format!("{label}[{k}]"), pk, hist.count(k) as f64 / n, sigma, z);
        }
        let chi = mcoracle::chi_square(hist, &pmf, MIN_EXPECTED);
        let pass = chi.p_value >= CHI2_ALPHA;
        if !pass {
            self.failed.push(format!("{label}_chi2 (p = {:.2e})", chi.p_value));
        }
        self.report.row(vec![
            format!("{label}_chi2").into(),
            (chi.dof as f64).into(),
            chi.statistic.into(),
            f64::NAN.into(),
            Cell::Fixed(chi.p_value, 6),
            pass.into(),
        ]);
    }
}

fn histogram_csv(pulse: &CountHistogram, empty: &CountHistogram, p: &[f64], q: &[f64]) -> Result<String, CliError> {
    let mut r = Report::new("mc-validate", "histogram");
    r.columns(&[
        ("k", "photons"),
        ("pulse_count", ""),
        ("empty_count", ""),
        ("pulse_expected", ""),
        ("empty_expected", ""),
    ]);
    let len = pulse.counts().len().max(empty.counts().len());
    let (np, ne) = (pulse.samples() as f64, empty.samples() as f64);
    for k in 0..len {
        r.row(vec![
            (k as u64).into(),
            pulse.count(k).into(),
            empty.count(k).into(),
            (np * p.get(k).copied().unwrap_or(0.0)).into(),
            (ne * q.get(k).copied().unwrap_or(0.0)).into(),
        ]);
    }
    r.to_csv()
}

fn joint_csv(joint: &[u64], m: u32) -> Result<String, CliError> {
    let mut r = Report::new("mc-validate", "frames");
    r.notes.push(format!("decision {m} is an erasure"));
    r.columns(&[("symbol", ""), ("decision", ""), ("count", "")]);
    let width = m as usize + 1;
    for (i, &c) in joint.iter().enumerate() {
        r.row(vec![((i / width) as u64).into(), ((i % width) as u64).into(), c.into()]);
    }
    r.to_csv()
}

pub fn run(a: &McArgs) -> Result<Outcome, CliError> {
    let model = McModel::parse(&a.model)?;
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let noise = noise_from_args(&a.noise);
    let noise = match (model, noise) {
        (McModel::Sif | McModel::SifHard, None) => Noise::multimode(0.0),
        (McModel::Qpg | McModel::QpgPnr, None) => Noise::single_mode(0.0),
        (McModel::Sif | McModel::SifHard, Some(n @ Noise::Multimode { .. })) => n,
        (McModel::Qpg | McModel::QpgPnr, Some(n @ Noise::SingleMode { .. })) => n,
        (m, Some(n)) => {
            return Err(CliError::Usage(format!(
                "model {} does not accept {} noise",
                m.tag(),
                n.kind()
            )))
        }
    };
    noise.validate()?;

    let mut checks = Checks::new(model, a.perturb);
    checks.report.input("samples", a.samples);
    checks.report.input("seed", a.seed);
    if a.perturb != 0.0 {
        checks.report.input("perturb", a.perturb);
        checks.report.notes.push("analytic values deliberately perturbed".into());
    }
    noise_inputs(&mut checks.report, &noise);
    let nv = noise.value();
    // Pulse and empty slots draw from disjoint seeds.
    let (seed_pulse, seed_empty) = (a.seed, a.seed ^ 0x9e37_79b9_7f4a_7c15);

    let histogram_text = match model {
        McModel::Sif | McModel::Qpg | McModel::QpgPnr => {
            let n_f = require(a.nf, "nf")?;
            checks.report.input("nf", n_f);
            let (pulse, empty, p, q) = if model == McModel::Sif {
                let s = detstats::sif_stats(n_f, nv)?;
                let pulse = mcoracle::sample_sif_counts(n_f + nv, a.samples, seed_pulse)?;
                let empty = mcoracle::sample_sif_counts(nv, a.samples, seed_empty)?;
                checks.estimate("p_click", pulse.click_probability(), s.p);
                checks.estimate("q_click", empty.click_probability(), s.q);
                checks.estimate("pulse_mean", pulse.mean_count(), n_f + nv);
                checks.estimate("empty_mean", empty.mean_count(), nv);
                let tol = detstats::DEFAULT_TAIL_TOL;
                let p = detstats::pnr_stats(n_f + nv, 0.0, tol)?.p;
                let q = detstats::pnr_stats(nv, 0.0, tol)?.p;
                (pulse, empty, p, q)
            } else {
                let s = detstats::qpg_stats(n_f, nv)?;
                let pulse = mcoracle::sample_qpg_counts(n_f, nv, a.samples, seed_pulse)?;
                let empty = mcoracle::sample_qpg_counts(0.0, nv, a.samples, seed_empty)?;
                checks.estimate("p_click", pulse.click_probability(), s.p);
                checks.estimate("q_click", empty.click_probability(), s.q);
                checks.estimate("pulse_mean", pulse.mean_count(), n_f + nv);
                checks.estimate("empty_mean", empty.mean_count(), nv);
                let st = detstats::pnr_stats(n_f, nv, detstats::DEFAULT_TAIL_TOL)?;
                (pulse, empty, st.p, st.q)
            };
            if model == McModel::QpgPnr {
                checks.histogram("p_k", &pulse, &p);
                checks.histogram("q_k", &empty, &q);
            }
            Some(histogram_csv(&pulse, &empty, &p, &q)?)
        }
        McModel::SifHard => {
            let n_s = require(a.ns, "ns")?;
            let m = require(a.m, "m")?;
            checks.report.input("ns", n_s);
            checks.report.input("m", m as u64);
            let ch = ChannelPoint::new(n_s, noise)?;
            let analytic = ppmcore::pie_hard(&ch, m as u64)?;
            let est = mcoracle::simulate_hard_frames(&ch, m, a.samples, seed_pulse)?;
            checks.estimate("pie", est.pie, analytic);
            Some(joint_csv(&est.joint, m)?)
        }
    };

    if let (Some(path), Some(text)) = (&a.histogram, histogram_text) {
        std::fs::write(path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    }

    let failure = if checks.failed.is_empty() {
        None
    } else {
        Some(CliError::Failure(format!(
            "validation failed: {}",
            checks.failed.join(", ")
        )))
    };
    Ok(Outcome {
        report: checks.report,
        failure,
    })
}
