//! Information measures for pulse position modulation.
//!
//! A PPM frame has `M` slots and carries one pulse of mean photon number
//! `n_f = M · n_s`. The soft-decoding measure is the per-slot relative-entropy
//! lower bound `D(p ‖ p/M + (1 − 1/M) q) / n_f`; with `M → ∞` it becomes the
//! unrestricted-bandwidth integrand `D(p ‖ q) / n_f`. Hard decoding keeps only
//! frames with exactly one click and erases everything else.
//!
//! Divergences are accumulated as `Σ y_k φ(p_k/y_k − 1)` with
//! `φ(t) = (1+t) ln(1+t) − t ≥ 0`, which equals the relative entropy for
//! normalized laws and stays nonnegative when `p ≈ y`.

use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};

use crate::detstats::{self, Detection, SlotStatistics};
use crate::error::{check, Error, Result};
use crate::linkbudget::{ChannelPoint, Noise};
use crate::optimize::{self, SearchOptions};

/// Pulse energy, PPM order and slot signal strength, tied by `n_f = M · n_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PpmFrame {
    pub n_f: f64,
    pub m: f64,
    pub n_s: f64,
}

impl PpmFrame {
    pub fn from_order(n_s: f64, m: f64) -> Result<Self> {
        check(n_s > 0.0 && n_s.is_finite(), "n_s", n_s, "finite and > 0")?;
        check(m >= 1.0, "M", m, ">= 1")?;
        Ok(Self { n_f: m * n_s, m, n_s })
    }

    pub fn from_pulse(n_s: f64, n_f: f64) -> Result<Self> {
        check(n_s > 0.0 && n_s.is_finite(), "n_s", n_s, "finite and > 0")?;
        check(n_f >= n_s, "n_f", n_f, ">= n_s (M >= 1)")?;
        Ok(Self { n_f, m: n_f / n_s, n_s })
    }
}

/// `φ(t) = (1+t) ln(1+t) − t`, accurate near `t = 0`.
pub(crate) fn phi(t: f64) -> f64 {
    if t <= -1.0 {
        // t < −1 only arises from rounding when one law is a point mass.
        return 1.0;
    }
    if t.abs() < 1e-3 {
        // Σ_{n≥2} (−1)^n t^n / (n(n−1))
        let t2 = t * t;
        return t2
            * (0.5 - t / 6.0 + t2 / 12.0 - t2 * t / 20.0 + t2 * t2 / 30.0 - t2 * t2 * t / 42.0);
    }
    (1.0 + t) * t.ln_1p() - t
}

/// Noiseless PPM with Poissonian pulses: `(1 − e^(−n_f)) log2 M / n_f`.
pub fn pie_ppm_noiseless(n_f: f64, m: f64) -> Result<f64> {
    check(n_f > 0.0 && n_f.is_finite(), "n_f", n_f, "finite and > 0")?;
    check(m >= 1.0, "M", m, ">= 1")?;
    Ok(-(-n_f).exp_m1() / n_f * m.log2())
}

fn check_asymptotic_domain(n_s: f64) -> Result<()> {
    check(n_s > 0.0 && n_s < 1.0 / E, "n_s", n_s, "in (0, 1/e)")
}

/// Large-`M` approximation of the optimized noiseless PIE,
/// `log2(1/n_s) − log2 ln(1/n_s)` (constant term dropped).
pub fn pie_ppm_asymptotic(n_s: f64) -> Result<f64> {
    check_asymptotic_domain(n_s)?;
    let inv = 1.0 / n_s;
    Ok(inv.log2() - inv.ln().log2())
}

/// Approximate optimal pulse energy for noiseless PPM, `2 / ln(2e / n_s)`.
pub fn nf_star_approx(n_s: f64) -> Result<f64> {
    check_asymptotic_domain(n_s)?;
    Ok(2.0 / (2.0 * E / n_s).ln())
}

/// `y φ(d / y)`, switching to `x ln(x/y) − d` with `x = y + d` once the ratio
/// is too large for `φ` (`y` may be subnormal in far tails).
fn scaled_phi(y: f64, d: f64) -> f64 {
    let t = d / y;
    if t < 1e8 {
        y * phi(t)
    } else {
        let x = y + d;
        x * (x.ln() - y.ln()) - d
    }
}

/// Divergence between two binary laws, in bits, given the difference `d = x − y`
/// computed by the caller.
fn kl_binary_with_gap(x: f64, y: f64, d: f64) -> f64 {
    let mut nats = 0.0;
    if x > 0.0 || y > 0.0 {
        if y == 0.0 {
            return f64::INFINITY;
        }
        nats += scaled_phi(y, d);
    }
    if x < 1.0 || y < 1.0 {
        if y == 1.0 {
            return f64::INFINITY;
        }
        nats += scaled_phi(1.0 - y, -d);
    }
    nats / LN_2
}

/// Relative entropy `D(x ‖ y)` between the binary laws `(x, 1−x)` and
/// `(y, 1−y)`, in bits. `f64::INFINITY` when `x` is not absolutely continuous
/// with respect to `y`.
pub fn kl_binary(x: f64, y: f64) -> Result<f64> {
    check((0.0..=1.0).contains(&x), "x", x, "in [0, 1]")?;
    check((0.0..=1.0).contains(&y), "y", y, "in [0, 1]")?;
    Ok(kl_binary_with_gap(x, y, x - y))
}

/// Result of a divergence over truncated integer-valued laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteKl {
    pub bits: f64,
    /// Probability mass missing from the longer-tailed of the two inputs.
    /// Bounds the error caused by truncation together with the log-ratio at
    /// the cut.
    pub truncated_mass: f64,
}

/// `Σ_k p_k log2(p_k / y_k)` over aligned supports `0..len`.
pub fn kl_discrete(p: &[f64], y: &[f64]) -> Result<DiscreteKl> {
    if p.len() != y.len() || p.is_empty() {
        return Err(Error::Domain {
            name: "support length",
            value: p.len() as f64,
            expected: "non-empty and equal for both distributions",
        });
    }
    let mut nats = 0.0;
    for (&pk, &yk) in p.iter().zip(y) {
        check(pk >= 0.0, "p_k", pk, ">= 0")?;
        check(yk >= 0.0, "y_k", yk, ">= 0")?;
        nats += divergence_term(pk, yk, pk - yk);
        if nats.is_infinite() {
            break;
        }
    }
    let missing = |v: &[f64]| (1.0 - v.iter().sum::<f64>()).max(0.0);
    Ok(DiscreteKl {
        bits: nats / LN_2,
        truncated_mass: missing(p).max(missing(y)),
    })
}

fn divergence_term(pk: f64, yk: f64, gap: f64) -> f64 {
    if yk == 0.0 {
        if pk > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        scaled_phi(yk, gap)
    }
}

/// Soft-decoding lower bound on PIE (bits/photon) for PPM with pulse energy
/// `n_f` at the channel's signal strength: `D(p ‖ p/M + (1 − 1/M) q) / n_f`
/// with `M = n_f / n_s` treated as continuous.
///
/// `n_s = 0` is accepted and gives the unrestricted-bandwidth integrand
/// `D(p ‖ q) / n_f`.
pub fn pie_soft_bound(channel: &ChannelPoint, n_f: f64, detection: Detection) -> Result<f64> {
    channel.validate()?;
    check(n_f > 0.0 && n_f.is_finite(), "n_f", n_f, "finite and > 0")?;
    let w = channel.n_s / n_f;
    check(w <= 1.0 + 1e-12, "M = n_f/n_s", 1.0 / w, ">= 1")?;
    let w = w.min(1.0);
    let bits = match detstats::slot_statistics(&channel.noise, n_f, detection)? {
        SlotStatistics::Binary(s) => {
            let y = w * s.p + (1.0 - w) * s.q;
            kl_binary_with_gap(s.p, y, (1.0 - w) * s.contrast())
        }
        SlotStatistics::Counts(s) => {
            let mut nats = 0.0;
            for (k, (&pk, &qk)) in s.p.iter().zip(&s.q).enumerate() {
                let yk = w * pk + (1.0 - w) * qk;
                nats += if yk == 0.0 && pk > 0.0 {
                    // Far tail where the mixture underflowed; q[k] never
                    // vanishes with thermal noise, so take it from logs.
                    let ln_q = (1.0 - w).ln() + s.ln_q(k);
                    let ln_p = if w > 0.0 { w.ln() + pk.ln() } else { f64::NEG_INFINITY };
                    let hi = ln_q.max(ln_p);
                    if hi == f64::NEG_INFINITY {
                        f64::INFINITY
                    } else {
                        let ln_y = hi + ((ln_q - hi).exp() + (ln_p - hi).exp()).ln();
                        pk * (pk.ln() - ln_y) - (1.0 - w) * pk
                    }
                } else {
                    divergence_term(pk, yk, (1.0 - w) * (pk - qk))
                };
            }
            nats / LN_2
        }
    };
    Ok(bits / n_f)
}

/// Click probabilities used by the on/off receivers for a channel's noise.
fn on_off_stats(noise: &Noise, n_f: f64) -> Result<detstats::BinarySlotStats> {
    match detstats::slot_statistics(noise, n_f, Detection::OnOff)? {
        SlotStatistics::Binary(s) => Ok(s),
        SlotStatistics::Counts(_) => unreachable!("on/off detection yields binary statistics"),
    }
}

/// Hard-decoding PIE for integer PPM order `m`, with `n_f = m · n_s`.
///
/// Only frames with exactly one click are decoded, as the symbol at the
/// clicked slot. Writing `a = p (1−q)^(m−1)` (correct single click) and
/// `b = (1−p) q (1−q)^(m−2)` (single click in one particular wrong slot), the
/// symmetric channel carries `a log2(a/ȳ) + (m−1) b log2(b/ȳ)` bits per frame
/// with `ȳ = (a + (m−1) b) / m`; erasures are input-independent and add
/// nothing.
pub fn pie_hard(channel: &ChannelPoint, m: u64) -> Result<f64> {
    channel.validate()?;
    check(m >= 2, "M", m as f64, "an integer >= 2")?;
    let n_f = m as f64 * channel.n_s;
    if n_f == 0.0 {
        return Ok(0.0);
    }
    Ok(hard_frame_information(&on_off_stats(&channel.noise, n_f)?, m) / n_f)
}

/// Mutual information (bits) between the PPM symbol and the hard decision.
pub(crate) fn hard_frame_information(s: &detstats::BinarySlotStats, m: u64) -> f64 {
    let mf = m as f64;
    let (p, q) = (s.p, s.q);
    let quiet_rest = if m == 2 {
        1.0
    } else {
        ((mf - 2.0) * (-q).ln_1p()).exp()
    };
    let a = p * (1.0 - q) * quiet_rest;
    let b = (1.0 - p) * q * quiet_rest;
    let mean = (a + (mf - 1.0) * b) / mf;
    if mean == 0.0 {
        return 0.0;
    }
    let diff = quiet_rest * s.contrast();
    let t_hit = (mf - 1.0) * diff / (mf * mean);
    let t_miss = -diff / (mf * mean);
    mean * (phi(t_hit) + (mf - 1.0) * phi(t_miss)) / LN_2
}

/// Photon information efficiency without bandwidth limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnrestrictedPie {
    /// Bits per photon; `f64::INFINITY` when unbounded.
    pub pie: f64,
    /// Pulse energy attaining the supremum.
    pub nf_at_sup: f64,
    /// Maximizer within 1% of the pulse energy cap.
    pub boundary_hit: bool,
}

/// Lower end of the pulse energies searched for the unrestricted supremum.
pub const UNRESTRICTED_NF_FLOOR: f64 = 1e-8;

/// `sup_{0 < n_f ≤ nf_cap} D(p ‖ q) / n_f` for the receiver's slot law.
pub fn pie_unrestricted_bandwidth(
    noise: &Noise,
    detection: Detection,
    nf_cap: f64,
) -> Result<UnrestrictedPie> {
    noise.validate()?;
    check(
        nf_cap > UNRESTRICTED_NF_FLOOR && nf_cap.is_finite(),
        "nf_cap",
        nf_cap,
        "finite and > 1e-8",
    )?;
    let channel = ChannelPoint { n_s: 0.0, noise: *noise };
    // Probe the law once so incompatible pairs fail before the search.
    detstats::slot_statistics(noise, 1.0, detection)?;
    let best = optimize::maximize_over_nf(
        |n_f| pie_soft_bound(&channel, n_f, detection),
        UNRESTRICTED_NF_FLOOR,
        nf_cap,
        &SearchOptions::default(),
    )?;
    Ok(UnrestrictedPie {
        pie: best.pie,
        nf_at_sup: best.nf,
        boundary_hit: best.pie.is_finite() && best.nf >= nf_cap / 1.01,
    })
}
