use pll_core::caplimits;
use pll_core::linkbudget::{self as lb, LinkGeometry};
use pll_core::mcoracle;
use pll_core::optimize::{self, log_grid, Model, SearchOptions};

fn deep_space(range_au: f64) -> LinkGeometry {
    LinkGeometry {
        range: lb::au_to_m(range_au),
        d_tx: 0.22,
        d_rx: 5.1,
        carrier: lb::wavelength_to_frequency(1550e-9).unwrap(),
        eta_rx: 0.5,
        eta_atm: 1.0,
        p_tx: 4.0,
    }
}

fn flux(g: &LinkGeometry) -> f64 {
    lb::photon_flux(lb::received_power(g).unwrap(), g.carrier).unwrap()
}

#[test]
fn inverse_square_in_range() {
    let near = flux(&deep_space(1.25));
    let far = flux(&deep_space(2.5));
    assert!((near / far - 4.0).abs() < 1e-12);
}

#[test]
fn more_bandwidth_approaches_the_holevo_asymptote() {
    let f = flux(&deep_space(1.25));
    let n_n = lb::from_db(-72.5);
    let limit = caplimits::gh_pie_asymptote(n_n).unwrap();
    let mut last = 0.0;
    for slot_rate in [1e8, 1e9, 1e10, 1e11] {
        let n_s = lb::signal_per_slot(f, slot_rate).unwrap();
        let pie = caplimits::gordon_holevo(n_s, n_n).unwrap().pie;
        assert!(pie > last && pie < limit, "B = {slot_rate:e}");
        last = pie;
    }
}

#[test]
fn sweep_cells_match_single_points() {
    let ns = log_grid(1e-4, 1e-2, 3);
    let noise = log_grid(1e-5, 1e-2, 2);
    let opts = SearchOptions::default();
    for model in [Model::SifHard, Model::QpgOnOff] {
        let range = model.default_nf_range();
        let t = optimize::sweep(model, &ns, &noise, range, &opts).unwrap();
        for (i, &nz) in noise.iter().enumerate() {
            for (j, &s) in ns.iter().enumerate() {
                let single = optimize::optimize_point(model, s, nz, range, &opts).unwrap();
                assert_eq!(t.cell(i, j).result.as_ref().unwrap(), &single);
            }
        }
    }
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mcoracle::sample_qpg_counts(1.5, 0.2, 300_000, 99).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.counts(), b.counts());
    assert_eq!(a.samples(), 300_000);
}
