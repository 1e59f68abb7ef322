use pll_core::caplimits::{self, RatePie};
use pll_core::linkbudget::{from_db, ChannelPoint, Noise};
use pll_core::optimize::{self, Model, SearchOptions};
use pll_core::ppmcore;

use super::{key_value_report, kv, noise_from_args, noise_inputs, require};
use crate::args::PieArgs;
use crate::report::Report;
use crate::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq)]
enum PieModel {
    S1,
    S2,
    Gh,
    Ppm(Model),
}

impl PieModel {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(PieModel::S1),
            "S2" => Ok(PieModel::S2),
            "GH" => Ok(PieModel::Gh),
            _ => s.parse::<Model>().map(PieModel::Ppm).map_err(|_| {
                CliError::Usage(format!(
                    "unknown model `{s}` (expected S1, S2, GH, SIF_HARD, SIF_SOFT, QPG_ONOFF or QPG_PNR)"
                ))
            }),
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            PieModel::S1 => "S1",
            PieModel::S2 => "S2",
            PieModel::Gh => "GH",
            PieModel::Ppm(m) => m.tag(),
        }
    }

    /// Noise the receiver sees; absent noise means a noiseless channel.
    fn noise(&self, given: Option<Noise>) -> Result<Noise, CliError> {
        let wants_multimode = matches!(self, PieModel::Ppm(Model::SifHard | Model::SifSoft));
        match given {
            None if wants_multimode => Ok(Noise::multimode(0.0)),
            None => Ok(Noise::single_mode(0.0)),
            Some(n @ Noise::Multimode { .. }) if wants_multimode => Ok(n),
            Some(n @ Noise::SingleMode { .. }) if !wants_multimode => Ok(n),
            Some(n) => Err(CliError::Usage(format!(
                "model {} does not accept {} noise (use --{})",
                self.tag(),
                n.kind(),
                if wants_multimode { "nb or --nb-db" } else { "nn or --nn-db" }
            ))),
        }
    }
}

fn rate_rows(r: &mut Report, v: RatePie) {
    kv(r, "rate", v.rate_per_slot, "bits/slot");
    kv(r, "pie", v.pie, "bits/photon");
}

fn coherent(r: &mut Report, model: PieModel, a: &PieArgs, n_s: Option<f64>, n_n: f64) -> Result<(), CliError> {
    if a.nf.is_some() || a.m.is_some() || a.optimize {
        return Err(CliError::Usage(format!(
            "--nf, --m and --optimize apply to PPM models, not {}",
            model.tag()
        )));
    }
    let n_s = if a.unrestricted { 0.0 } else { require(n_s, "ns")? };
    r.input("ns", n_s);
    let v = match model {
        PieModel::S1 => caplimits::shannon_s1(n_s, n_n)?,
        PieModel::S2 => caplimits::shannon_s2(n_s, n_n)?,
        _ => caplimits::gordon_holevo(n_s, n_n)?,
    };
    rate_rows(r, v);
    if model == PieModel::Gh && n_n > 0.0 {
        kv(r, "pie_asymptote", caplimits::gh_pie_asymptote(n_n)?, "bits/photon");
    }
    Ok(())
}

fn ppm(r: &mut Report, model: Model, a: &PieArgs, n_s: Option<f64>, noise: Noise) -> Result<(), CliError> {
    let (lo_default, hi_default) = model.default_nf_range();
    let range = (a.nf_min.unwrap_or(lo_default), a.nf_max.unwrap_or(hi_default));

    if a.unrestricted {
        if model == Model::SifHard {
            return Err(CliError::Usage("--unrestricted needs a soft-decoding model".into()));
        }
        let v = ppmcore::pie_unrestricted_bandwidth(&noise, model.detection(), range.1)?;
        r.input("nf_max", range.1);
        kv(r, "pie", v.pie, "bits/photon");
        kv(r, "nf_at_sup", v.nf_at_sup, "photons");
        kv(r, "boundary_hit", v.boundary_hit, "");
        return Ok(());
    }

    let n_s = require(n_s, "ns")?;
    r.input("ns", n_s);
    let channel = ChannelPoint::new(n_s, noise)?;
    if a.optimize {
        r.input("nf_min", range.0);
        r.input("nf_max", range.1);
        let p = optimize::optimize_point(model, n_s, noise.value(), range, &SearchOptions::default())?;
        kv(r, "pie", p.pie_star, "bits/photon");
        kv(r, "nf_star", p.nf_star, "photons");
        kv(r, "m_star", p.m_star, "slots");
        kv(r, "boundary_hit", p.boundary_hit, "");
        kv(r, "m_floor", p.m_floor, "");
        return Ok(());
    }

    let (n_f, pie) = match (a.nf, a.m) {
        (_, Some(m)) if model == Model::SifHard => (m as f64 * n_s, ppmcore::pie_hard(&channel, m)?),
        (Some(n_f), _) if model == Model::SifHard => {
            let m = ((n_f / n_s).round() as u64).max(2);
            (m as f64 * n_s, ppmcore::pie_hard(&channel, m)?)
        }
        (Some(n_f), _) => (n_f, ppmcore::pie_soft_bound(&channel, n_f, model.detection())?),
        (None, Some(m)) => {
            let n_f = m as f64 * n_s;
            (n_f, ppmcore::pie_soft_bound(&channel, n_f, model.detection())?)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "PPM models need one of --nf, --m, --optimize or --unrestricted".into(),
            ))
        }
    };
    kv(r, "pie", pie, "bits/photon");
    kv(r, "n_f", n_f, "photons");
    kv(r, "m", if n_s > 0.0 { n_f / n_s } else { f64::INFINITY }, "slots");
    Ok(())
}

pub fn run(a: &PieArgs) -> Result<Outcome, CliError> {
    let model = PieModel::parse(&a.model)?;
    let noise = model.noise(noise_from_args(&a.noise))?;
    let n_s = a.ns.or(a.ns_db.map(from_db));
    let mut r = key_value_report("pie", model.tag());
    noise_inputs(&mut r, &noise);
    match model {
        PieModel::Ppm(m) => ppm(&mut r, m, a, n_s, noise)?,
        _ => coherent(&mut r, model, a, n_s, noise.value())?,
    }
    Ok(r.into())
}
