//! Per-slot photocount statistics for the three receiver front ends.
//!
//! * Multimode incoherent filter, on/off detection: Poissonian noise over many
//!   modes, [`sif_stats`].
//! * Single-mode pulse gate, on/off detection: displaced thermal light,
//!   [`qpg_stats`].
//! * Single-mode pulse gate with photon number resolution: full count
//!   distributions, [`pnr_stats`].
//!
//! The multimode formula is applied for every `n_b`; it is only physically
//! accurate for weak per-mode noise spread over many modes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};
use crate::linkbudget::Noise;

/// Default bound on the probability mass dropped by truncating count
/// distributions.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Largest photocount index a distribution may extend to.
pub const K_MAX_CAP: usize = 1 << 20;

/// Click probabilities for a pulse slot (`p`) and an empty slot (`q`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinarySlotStats {
    pub p: f64,
    pub q: f64,
    gap: f64,
}

impl BinarySlotStats {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q, gap: p - q }
    }

    /// `p − q`, evaluated without cancellation where a closed form exists.
    pub fn contrast(&self) -> f64 {
        self.gap
    }
}

/// Photocount distributions for a pulse slot and an empty slot, truncated at
/// `k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PnrSlotStats {
    /// `p[k]`: probability of `k` counts given a pulse.
    pub p: Vec<f64>,
    /// `q[k]`: probability of `k` counts given an empty slot.
    pub q: Vec<f64>,
    pub k_max: usize,
    /// Upper bound on the mass beyond `k_max`, for either distribution.
    pub tail_mass: f64,
    /// Set for `n_n = 0`: the pulse is Poissonian and empty slots never click.
    pub noiseless: bool,
    pub n_n: f64,
}

impl PnrSlotStats {
    /// `ln q[k]`, exact even where `q[k]` underflows to zero.
    pub fn ln_q(&self, k: usize) -> f64 {
        if self.noiseless {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        let ln_norm = -self.n_n.ln_1p();
        ln_norm + k as f64 * (ln_norm + self.n_n.ln())
    }
}

/// How the detector reports a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Detection {
    /// Click / no click.
    OnOff,
    /// Integer photon number.
    Pnr,
}

impl fmt::Display for Detection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detection::OnOff => "ONOFF",
            Detection::Pnr => "PNR",
        })
    }
}

impl FromStr for Detection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ONOFF" | "ON_OFF" => Ok(Detection::OnOff),
            "PNR" => Ok(Detection::Pnr),
            other => Err(format!("unknown detection mode `{other}` (expected ONOFF or PNR)")),
        }
    }
}

/// Slot law of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotStatistics {
    Binary(BinarySlotStats),
    Counts(PnrSlotStats),
}

fn check_photons(name: &'static str, v: f64) -> Result<()> {
    check(v >= 0.0 && v.is_finite(), name, v, "finite and >= 0")
}

/// Multimode filter: `p = 1 − exp(−n_f − n_b)`, `q = 1 − exp(−n_b)`.
pub fn sif_stats(n_f: f64, n_b: f64) -> Result<BinarySlotStats> {
    check_photons("n_f", n_f)?;
    check_photons("n_b", n_b)?;
    Ok(BinarySlotStats {
        p: -(-n_f - n_b).exp_m1(),
        q: -(-n_b).exp_m1(),
        gap: (-n_b).exp() * -(-n_f).exp_m1(),
    })
}

/// Single-mode gate with on/off detection:
/// `p = 1 − exp(−n_f/(1+n_n))/(1+n_n)`, `q = n_n/(1+n_n)`.
pub fn qpg_stats(n_f: f64, n_n: f64) -> Result<BinarySlotStats> {
    check_photons("n_f", n_f)?;
    check_photons("n_n", n_n)?;
    let a = n_f / (1.0 + n_n);
    let dark = (-a).exp() / (1.0 + n_n);
    Ok(BinarySlotStats {
        p: 1.0 - dark,
        q: n_n / (1.0 + n_n),
        gap: -(-a).exp_m1() / (1.0 + n_n),
    })
}

/// Laguerre polynomial `L_n(z)` by the three-term recurrence.
pub fn laguerre(n: usize, z: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - z);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - z) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Photocount distributions behind a single-mode gate.
///
/// Empty slots are Bose-Einstein, `q_k = n_n^k / (1+n_n)^(k+1)`. A pulse slot
/// holds displaced thermal light,
/// `p_k = n_n^k / (1+n_n)^(k+1) · exp(−n_f/(1+n_n)) · L_k(−n_f/(n_n(1+n_n)))`.
///
/// The product `r^k L_k(−x)` with `r = n_n/(1+n_n)` is carried through the
/// Laguerre recurrence directly, with a running rescale kept in log space so
/// that large `n_f / n_n` neither overflows nor underflows. The distributions
/// are extended one count at a time until both tails are below `tail_tol`;
/// the pulse tail uses the geometric bound available past the mode of a
/// log-concave law.
pub fn pnr_stats(n_f: f64, n_n: f64, tail_tol: f64) -> Result<PnrSlotStats> {
    check_photons("n_f", n_f)?;
    check_photons("n_n", n_n)?;
    check(
        tail_tol > 0.0 && tail_tol <= 1e-9,
        "tail_tol",
        tail_tol,
        "in (0, 1e-9]",
    )?;
    if n_n == 0.0 {
        return poisson_counts(n_f, tail_tol);
    }

    let ln_norm = -n_n.ln_1p();
    let r = n_n / (1.0 + n_n);
    let x = n_f / (n_n * (1.0 + n_n));
    let ln_pref = -n_f / (1.0 + n_n) + ln_norm;

    let mut p = Vec::new();
    let mut q = Vec::new();
    let (mut t_prev, mut t) = (0.0f64, 1.0f64);
    // p_k = exp(ln_pref + scale) · t; the factor is cached between rescales
    // and only taken out of log space once it is representable.
    let mut scale = 0.0f64;
    let mut factor = pulse_factor(ln_pref);
    let mut q_k = ln_norm.exp();
    let mut q_tail = r;
    let mut p_prev = 0.0f64;

    for k in 0..=K_MAX_CAP {
        let p_k = if n_f == 0.0 {
            q_k
        } else if let Some(f) = factor {
            f * t
        } else {
            let ln_f = ln_pref + scale;
            // |ln t| ≤ ln 1e200 < 461 between rescales.
            if ln_f + 461.0 < -746.0 {
                0.0
            } else {
                (ln_f + t.ln()).exp()
            }
        };
        p.push(p_k);
        q.push(q_k);

        let p_tail = geometric_tail(p_k, p_prev);
        if q_tail < tail_tol && p_tail < tail_tol {
            return Ok(PnrSlotStats {
                p,
                q,
                k_max: k,
                tail_mass: q_tail.max(p_tail),
                noiseless: false,
                n_n,
            });
        }
        p_prev = p_k;
        q_k *= r;
        q_tail *= r;

        let kf = k as f64;
        let next = r * ((2.0 * kf + 1.0 + x) * t - kf * r * t_prev) / (kf + 1.0);
        t_prev = t;
        t = next;
        if t > 1e200 || (t > 0.0 && t < 1e-200) {
            t_prev /= t;
            scale += t.ln();
            t = 1.0;
            factor = pulse_factor(ln_pref + scale);
        }
    }
    Err(Error::Truncation {
        k_max: K_MAX_CAP,
        tail: 1.0 - p.iter().sum::<f64>(),
    })
}

/// `exp(ln_f)` when it is a comfortably normal number.
fn pulse_factor(ln_f: f64) -> Option<f64> {
    (ln_f > -700.0).then(|| ln_f.exp())
}

/// Mass beyond index k of a log-concave law, bounded by a geometric series
/// with ratio `p_k / p_(k−1)`. Infinite while the ratio is still ≥ 1.
fn geometric_tail(p_k: f64, p_prev: f64) -> f64 {
    if p_k == 0.0 {
        return if p_prev > 0.0 { 0.0 } else { f64::INFINITY };
    }
    let ratio = p_k / p_prev;
    if !(ratio < 1.0) {
        return f64::INFINITY;
    }
    p_k * ratio / (1.0 - ratio)
}

fn poisson_counts(n_f: f64, tail_tol: f64) -> Result<PnrSlotStats> {
    let mut p = Vec::new();
    if n_f == 0.0 {
        p.push(1.0);
    } else {
        let ln_mean = n_f.ln();
        let mut ln_p = -n_f;
        let mut p_prev = 0.0;
        for k in 0..=K_MAX_CAP {
            if k > 0 {
                ln_p += ln_mean - (k as f64).ln();
            }
            let p_k = ln_p.exp();
            p.push(p_k);
            if geometric_tail(p_k, p_prev) < tail_tol {
                break;
            }
            p_prev = p_k;
        }
        if p.len() > K_MAX_CAP {
            return Err(Error::Truncation {
                k_max: K_MAX_CAP,
                tail: 1.0 - p.iter().sum::<f64>(),
            });
        }
    }
    let k_max = p.len() - 1;
    let mut q = vec![0.0; p.len()];
    q[0] = 1.0;
    let tail_mass = (1.0 - p.iter().sum::<f64>()).max(0.0).min(tail_tol);
    Ok(PnrSlotStats {
        p,
        q,
        k_max,
        tail_mass,
        noiseless: true,
        n_n: 0.0,
    })
}

/// Collapses photon-number statistics to click / no click.
pub fn binarize(stats: &PnrSlotStats) -> BinarySlotStats {
    let (p0, q0) = (stats.p[0], stats.q[0]);
    BinarySlotStats {
        p: 1.0 - p0,
        q: 1.0 - q0,
        gap: q0 - p0,
    }
}

/// Slot law for a receiver: multimode noise requires on/off detection,
/// single-mode noise supports both.
pub fn slot_statistics(noise: &Noise, n_f: f64, detection: Detection) -> Result<SlotStatistics> {
    match (noise, detection) {
        (Noise::Multimode { n_b, .. }, Detection::OnOff) => {
            sif_stats(n_f, *n_b).map(SlotStatistics::Binary)
        }
        (Noise::SingleMode { n_n }, Detection::OnOff) => {
            qpg_stats(n_f, *n_n).map(SlotStatistics::Binary)
        }
        (Noise::SingleMode { n_n }, Detection::Pnr) => {
            pnr_stats(n_f, *n_n, DEFAULT_TAIL_TOL).map(SlotStatistics::Counts)
        }
        (Noise::Multimode { .. }, Detection::Pnr) => Err(Error::Incompatible {
            mode: "PNR",
            noise: "multimode",
        }),
    }
}
