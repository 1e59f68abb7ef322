//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::time::{Duration, Instant};

use pll_core::caplimits;
use pll_core::detstats;
use pll_core::linkbudget::{from_db, ChannelPoint, Noise};
use pll_core::mcoracle;
use pll_core::optimize::{self, log_grid, Model, SearchOptions};
use pll_core::ppmcore;
use pll_core::table2::{self, Column, Conditions, ROWS};

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> std::result::Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn table_columns(columns: &[Column], tol: f64, limit: Duration) -> Check {
    let start = Instant::now();
    let out = table2::reproduce(&Conditions::default(), columns).map_err(|e| e.to_string())?;
    let took = within_time(start, limit)?;
    let mut worst: f64 = 0.0;
    let mut pies = Vec::new();
    for col in &out {
        let reported = col.column.reported_mbps().expect("reported column");
        for (i, (&got, want)) in col.mbps.iter().zip(reported).enumerate() {
            let rel = (got / want - 1.0).abs();
            worst = worst.max(rel);
            ensure(rel <= tol, || {
                format!("{} row {}: {got:.4} vs {want} Mbps", col.column.key(), i + 1)
            })?;
        }
        pies.push(format!("{}={:.3}", col.column.key(), col.pie));
    }
    Ok(format!(
        "{} entries, worst rel err {:.2}%, PIE {} b/photon, {took:.2?}",
        out.len() * ROWS.len(),
        worst * 100.0,
        pies.join(" ")
    ))
}

fn ac1() -> Check {
    table_columns(&[Column::GhNight, Column::GhDay], 0.01, Duration::from_secs(1))
}

fn ac2() -> Check {
    let msg = table_columns(&[Column::QpgNight, Column::QpgDay], 0.02, Duration::from_secs(5))?;
    let cond = Conditions::default();
    let night = Column::QpgNight.pie(&cond).map_err(|e| e.to_string())?;
    let day = Column::QpgDay.pie(&cond).map_err(|e| e.to_string())?;
    ensure((night - 18.48).abs() < 0.02, || format!("night PIE {night}"))?;
    ensure((day - 9.46).abs() < 0.02, || format!("day PIE {day}"))?;
    Ok(msg)
}

fn ac3() -> Check {
    let msg = table_columns(&[Column::SifNight], 0.02, Duration::from_secs(5))?;
    let pie = Column::SifNight.pie(&Conditions::default()).map_err(|e| e.to_string())?;
    ensure((pie - 8.59).abs() < 0.01, || format!("PIE {pie}"))?;
    Ok(msg)
}

fn ac4() -> Check {
    let psd = caplimits::dbm_per_hz_to_w_per_hz(-178.45);
    let pie = caplimits::pie_strong_noise(32e9, psd).map_err(|e| e.to_string())?;
    ensure((pie - 0.0214).abs() <= 5e-4, || format!("PIE_RF {pie}"))?;
    Ok(format!("PIE_RF = {pie:.5} b/photon"))
}

fn ac5() -> Check {
    let s1 = caplimits::shannon_s1(1e-9, 0.0).map_err(|e| e.to_string())?.pie;
    let s2 = caplimits::shannon_s2(1e-9, 0.0).map_err(|e| e.to_string())?.pie;
    ensure((s1 - 2.885).abs() <= 1e-3, || format!("S1 {s1}"))?;
    ensure((s2 - 1.443).abs() <= 1e-3, || format!("S2 {s2}"))?;
    Ok(format!("S1 = {s1:.5}, S2 = {s2:.5} b/photon"))
}

fn ac6() -> Check {
    let mut worst: f64 = 0.0;
    for k in 1..=16u32 {
        let m = 2f64.powi(k as i32);
        let pie = ppmcore::pie_ppm_noiseless(1e-9, m).map_err(|e| e.to_string())?;
        let err = (pie - k as f64).abs();
        worst = worst.max(err);
        ensure(err <= 1e-6, || format!("M = 2^{k}: {pie}"))?;
    }
    Ok(format!("M = 2^1..2^16, worst abs err {worst:.1e}"))
}

/// Maximum of `objective` over a 1e5-point log grid, then over 1e4 points
/// spanning the two grid steps either side of the best grid point.
fn exhaustive(objective: impl Fn(f64) -> pll_core::Result<f64>, lo: f64, hi: f64) -> f64 {
    let scan = |a: f64, b: f64, n: usize| {
        (0..n)
            .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp().clamp(lo, hi))
            .map(|nf| (objective(nf).unwrap(), nf))
            .fold((f64::NEG_INFINITY, lo), |x, y| if y.0 > x.0 { y } else { x })
    };
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (100_000 - 1) as f64;
    let (coarse, at) = scan(a, b, 100_000);
    let (fine, _) = scan((at.ln() - 2.0 * step).max(a), (at.ln() + 2.0 * step).min(b), 10_000);
    coarse.max(fine)
}

fn ac7() -> Check {
    let ns_grid = log_grid(1e-5, 1e-1, 5);
    let noise_grid = log_grid(1e-7, 1e-1, 5);
    let opts = SearchOptions::default();
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    let mut took = Duration::ZERO;
    for model in Model::ALL {
        let range = model.default_nf_range();
        let start = Instant::now();
        let table = optimize::sweep(model, &ns_grid, &noise_grid, range, &opts)
            .map_err(|e| format!("{model}: {e}"))?;
        took += start.elapsed();
        for c in &table.cells {
            let (n_s, noise) = (c.n_s, c.noise);
            let point = c
                .result
                .as_ref()
                .map_err(|e| format!("{model} ({n_s:e}, {noise:e}): {e}"))?;
            let lo = range.0.max(model.min_nf(n_s));
            let brute = exhaustive(model.objective(n_s, noise), lo, range.1);
            let rel = (point.pie_star - brute).abs() / brute;
            worst = worst.max(rel);
            ensure(rel <= 1e-6, || {
                format!("{model} ({n_s:e}, {noise:e}): {} vs grid {brute}", point.pie_star)
            })?;
            cells += 1;
        }
    }
    ensure(took < Duration::from_secs(300), || format!("sweeps took {took:.2?}, limit 300s"))?;
    Ok(format!("{cells} cells, worst rel diff {worst:.1e}, sweeps {took:.1?}"))
}

const MC_SAMPLES: u64 = 10_000_000;
const MIN_EXPECTED: f64 = 25.0;

/// Per-bin 3σ comparison plus a χ² test; returns the largest |z| and the
/// smallest χ² p-value.
fn compare_histogram(
    label: &str,
    hist: &mcoracle::CountHistogram,
    pmf: &[f64],
) -> std::result::Result<(f64, f64), String> {
    let n = hist.samples() as f64;
    let mut worst: f64 = 0.0;
    for (k, &pk) in pmf.iter().enumerate() {
        if n * pk < MIN_EXPECTED {
            continue;
        }
        let z = hist.bin_z(k, pk);
        worst = worst.max(z.abs());
        ensure(z.abs() <= 3.0, || format!("{label}: bin {k} z = {z:.2}"))?;
    }
    let chi = mcoracle::chi_square(hist, pmf, MIN_EXPECTED);
    Ok((worst, chi.p_value))
}

fn ac8() -> Check {
    let start = Instant::now();
    let mut worst_z: f64 = 0.0;
    let mut p_values = Vec::new();
    let mut seed = 2026_1016u64;
    let mut next_seed = || {
        seed += 1;
        seed
    };

    // Single-mode points spanning n_n over four decades.
    let qpg_points = [
        (1.0, 1e-4),
        (0.5, 1e-3),
        (2.0, 1e-2),
        (1.0, 0.1),
        (3.0, 0.3),
        (0.5, 1.0),
    ];
    for &(n_f, n_n) in &qpg_points {
        let stats = detstats::pnr_stats(n_f, n_n, detstats::DEFAULT_TAIL_TOL).map_err(|e| e.to_string())?;
        let binary = detstats::qpg_stats(n_f, n_n).map_err(|e| e.to_string())?;
        for (pulse, pmf, click) in [(n_f, &stats.p, binary.p), (0.0, &stats.q, binary.q)] {
            let label = format!("QPG n_f={pulse} n_n={n_n}");
            let hist = mcoracle::sample_qpg_counts(pulse, n_n, MC_SAMPLES, next_seed()).map_err(|e| e.to_string())?;
            let z = hist.click_probability().z_score(click);
            ensure(z.abs() <= 3.0, || format!("{label}: click z = {z:.2}"))?;
            let (w, p) = compare_histogram(&label, &hist, pmf)?;
            worst_z = worst_z.max(w).max(z.abs());
            p_values.push((label, p));
        }
    }

    // Multimode points.
    for &(n_f, n_b) in &[(0.5, from_db(-39.5)), (1.0, 1e-2)] {
        let s = detstats::sif_stats(n_f, n_b).map_err(|e| e.to_string())?;
        for (mean, click) in [(n_f + n_b, s.p), (n_b, s.q)] {
            let label = format!("SIF mean={mean:e}");
            let hist = mcoracle::sample_sif_counts(mean, MC_SAMPLES, next_seed()).map_err(|e| e.to_string())?;
            let z = hist.click_probability().z_score(click);
            ensure(z.abs() <= 3.0, || format!("{label}: click z = {z:.2}"))?;
            let pmf = detstats::pnr_stats(mean, 0.0, detstats::DEFAULT_TAIL_TOL)
                .map_err(|e| e.to_string())?
                .p;
            let (w, p) = compare_histogram(&label, &hist, &pmf)?;
            worst_z = worst_z.max(w).max(z.abs());
            p_values.push((label, p));
        }
    }

    // Bonferroni-corrected χ² at overall significance 1e-3.
    let alpha = 1e-3 / p_values.len() as f64;
    for (label, p) in &p_values {
        ensure(*p >= alpha, || format!("{label}: chi-square p = {p:.2e}"))?;
    }
    let min_p = p_values.iter().map(|(_, p)| *p).fold(1.0, f64::min);

    // Hard-decoding frames.
    let mut hard = Vec::new();
    for &(m, n_s, n_b) in &[(16u32, 1e-3, 1e-4), (64u32, 1e-3, 1e-3)] {
        let ch = ChannelPoint::new(n_s, Noise::multimode(n_b)).map_err(|e| e.to_string())?;
        let analytic = ppmcore::pie_hard(&ch, m as u64).map_err(|e| e.to_string())?;
        let est = mcoracle::simulate_hard_frames(&ch, m, MC_SAMPLES, next_seed()).map_err(|e| e.to_string())?;
        let z = est.pie.z_score(analytic);
        ensure(z.abs() <= 3.0, || {
            format!("hard M={m}: MC {} ± {} vs {analytic}", est.pie.value, est.pie.std_err)
        })?;
        hard.push(format!("M={m} z={z:+.2}"));
    }

    let took = within_time(start, Duration::from_secs(600))?;
    Ok(format!(
        "{} histograms, max |z| {worst_z:.2}, min chi2 p {min_p:.3}, hard {}, {took:.1?}",
        p_values.len(),
        hard.join(" ")
    ))
}

fn ac9() -> Check {
    let ns_grid = log_grid(1e-6, 1e-1, 10);
    let nn_grid = log_grid(1e-8, 1.0, 10);

    let mut kl_checked = 0;
    for &n_n in &nn_grid {
        for &n_f in &log_grid(1e-3, 100.0, 10) {
            let s = detstats::pnr_stats(n_f, n_n, detstats::DEFAULT_TAIL_TOL).map_err(|e| e.to_string())?;
            let sum_p: f64 = s.p.iter().sum();
            let sum_q: f64 = s.q.iter().sum();
            ensure((sum_p - 1.0).abs() <= 1e-10 && (sum_q - 1.0).abs() <= 1e-10, || {
                format!("normalization at ({n_f}, {n_n}): {sum_p}, {sum_q}")
            })?;
            let mean: f64 = s.p.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
            ensure(((mean / (n_f + n_n)) - 1.0).abs() <= 1e-8, || {
                format!("mean at ({n_f}, {n_n}): {mean}")
            })?;
            let b = detstats::binarize(&s);
            let direct = detstats::qpg_stats(n_f, n_n).map_err(|e| e.to_string())?;
            ensure((b.p - direct.p).abs() <= 1e-12 && (b.q - direct.q).abs() <= 1e-12, || {
                format!("binarize at ({n_f}, {n_n}): {b:?} vs {direct:?}")
            })?;
            let d = ppmcore::kl_discrete(&s.p, &s.q).map_err(|e| e.to_string())?;
            let db = ppmcore::kl_binary(direct.p, direct.q).map_err(|e| e.to_string())?;
            ensure(d.bits >= 0.0 && db >= 0.0 && d.bits >= db - 1e-12, || {
                format!("divergence at ({n_f}, {n_n}): {} vs {db}", d.bits)
            })?;
            kl_checked += 1;
        }
    }

    let opts = SearchOptions::default();
    let on_off = optimize::sweep(Model::QpgOnOff, &ns_grid, &nn_grid, Model::QpgOnOff.default_nf_range(), &opts)
        .map_err(|e| e.to_string())?;
    let pnr = optimize::sweep(Model::QpgPnr, &ns_grid, &nn_grid, Model::QpgPnr.default_nf_range(), &opts)
        .map_err(|e| e.to_string())?;
    for (a, b) in on_off.cells.iter().zip(&pnr.cells) {
        let a_pie = a.result.as_ref().map_err(|e| e.to_string())?.pie_star;
        let b_pie = b.result.as_ref().map_err(|e| e.to_string())?.pie_star;
        let gh = caplimits::gh_pie_asymptote(a.noise).map_err(|e| e.to_string())?;
        ensure(b_pie >= a_pie * (1.0 - 1e-9), || {
            format!("PNR < ONOFF at ({}, {}): {b_pie} vs {a_pie}", a.n_s, a.noise)
        })?;
        ensure(b_pie <= gh * (1.0 + 1e-9), || {
            format!("PNR above GH at ({}, {}): {b_pie} vs {gh}", a.n_s, a.noise)
        })?;
        ensure(a_pie >= 0.0, || format!("negative PIE at ({}, {})", a.n_s, a.noise))?;
    }
    Ok(format!(
        "{kl_checked} distributions, {} optimized cells per receiver",
        on_off.cells.len()
    ))
}

fn main() {
    let checks: [(&str, &str, fn() -> Check); 9] = [
        ("AC1", "Gordon-Holevo table columns", ac1),
        ("AC2", "single-mode on/off table columns", ac2),
        ("AC3", "multimode night table column", ac3),
        ("AC4", "RF benchmark", ac4),
        ("AC5", "coherent asymptotes", ac5),
        ("AC6", "noiseless PPM", ac6),
        ("AC7", "optimizer vs exhaustive scan", ac7),
        ("AC8", "Monte Carlo validation", ac8),
        ("AC9", "property suite", ac9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| id.eq_ignore_ascii_case(f)) {
            continue;
        }
        match check() {
            Ok(detail) => println!("{id} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
