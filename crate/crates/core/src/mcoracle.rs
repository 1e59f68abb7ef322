//! Monte Carlo photocounting under the semiclassical detection model.
//!
//! A slot's photon number is Poisson given its optical intensity. Multimode
//! filtered noise has a fixed intensity. A single-mode slot carries a complex
//! amplitude `√n_f + β` with `β` circular Gaussian, `E|β|² = n_n`, so the
//! intensity `|√n_f + β|²` fluctuates from slot to slot.
//!
//! Work is split into chunks of [`CHUNK`] draws. Chunk `i` uses a ChaCha8
//! stream keyed by the user seed with stream id `i`, so totals do not depend
//! on how chunks are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::detstats;
use crate::error::{check, Result};
use crate::linkbudget::{ChannelPoint, Noise};
use crate::ppmcore;

/// Draws per independent random stream.
pub const CHUNK: u64 = 1 << 16;

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `(value − expected) / std_err`.
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = self.value - expected;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_err
        }
    }
}

/// Histogram of photocounts per slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountHistogram {
    counts: Vec<u64>,
    samples: u64,
    seed: u64,
}

impl CountHistogram {
    fn empty(seed: u64) -> Self {
        Self {
            counts: Vec::new(),
            samples: 0,
            seed,
        }
    }

    fn record(&mut self, k: u64) {
        let k = k as usize;
        if k >= self.counts.len() {
            self.counts.resize(k + 1, 0);
        }
        self.counts[k] += 1;
        self.samples += 1;
    }

    /// Adds another histogram drawn with the same seed family.
    pub fn merge(mut self, other: Self) -> Self {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.samples += other.samples;
        self
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    fn proportion(&self, hits: u64) -> McEstimate {
        let n = self.samples as f64;
        let p = hits as f64 / n;
        McEstimate {
            value: p,
            std_err: (p * (1.0 - p) / n).sqrt(),
            samples: self.samples,
            seed: self.seed,
        }
    }

    /// Empirical `P(k)`.
    pub fn probability(&self, k: usize) -> McEstimate {
        self.proportion(self.count(k))
    }

    /// Empirical `P(k ≥ 1)`.
    pub fn click_probability(&self) -> McEstimate {
        self.proportion(self.samples - self.count(0))
    }

    pub fn mean_count(&self) -> McEstimate {
        let n = self.samples as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (k, &c) in self.counts.iter().enumerate() {
            let (k, c) = (k as f64, c as f64);
            s1 += k * c;
            s2 += k * k * c;
        }
        let mean = s1 / n;
        let var = (s2 / n - mean * mean).max(0.0);
        McEstimate {
            value: mean,
            std_err: (var / n).sqrt(),
            samples: self.samples,
            seed: self.seed,
        }
    }

    /// Deviation of bin `k` from `expected_prob` in units of the binomial
    /// standard deviation implied by `expected_prob`.
    pub fn bin_z(&self, k: usize, expected_prob: f64) -> f64 {
        let n = self.samples as f64;
        let sigma = (n * expected_prob * (1.0 - expected_prob)).sqrt();
        let diff = self.count(k) as f64 - n * expected_prob;
        if diff == 0.0 {
            0.0
        } else {
            diff / sigma
        }
    }
}

/// Pearson goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson χ² of a histogram against `expected` probabilities. Bins whose
/// expected count is below `min_expected` are pooled, together with all mass
/// beyond the end of `expected`, into one tail bin.
pub fn chi_square(hist: &CountHistogram, expected: &[f64], min_expected: f64) -> ChiSquare {
    let n = hist.samples() as f64;
    let (mut stat, mut bins) = (0.0, 0usize);
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (k, &pk) in expected.iter().enumerate() {
        let e = n * pk;
        let o = hist.count(k) as f64;
        if e >= min_expected {
            stat += (o - e).powi(2) / e;
            bins += 1;
        } else {
            pooled_obs += o;
            pooled_exp += e;
        }
    }
    pooled_obs += hist.counts().iter().skip(expected.len()).sum::<u64>() as f64;
    pooled_exp += (n - n * expected.iter().sum::<f64>()).max(0.0);
    if pooled_exp > 0.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        bins += 1;
    } else if pooled_obs > 0.0 {
        stat = f64::INFINITY;
    }
    let dof = bins.saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64)
        .map(|d| d.sf(stat))
        .unwrap_or(f64::NAN);
    ChiSquare {
        statistic: stat,
        dof,
        p_value,
    }
}

/// Photocount law of one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlotLaw {
    /// Fixed intensity.
    Poisson { mean: f64 },
    /// Coherent amplitude `√n_f` plus circular Gaussian noise of mean
    /// intensity `n_n`.
    DisplacedThermal { n_f: f64, n_n: f64 },
}

impl SlotLaw {
    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v >= 0.0 && v.is_finite();
        match *self {
            SlotLaw::Poisson { mean } => check(ok(mean), "mean", mean, "finite and >= 0"),
            SlotLaw::DisplacedThermal { n_f, n_n } => {
                check(ok(n_f), "n_f", n_f, "finite and >= 0")?;
                check(ok(n_n), "n_n", n_n, "finite and >= 0")
            }
        }
    }

    fn sampler(&self) -> SlotSampler {
        match *self {
            SlotLaw::Poisson { mean } => SlotSampler::Fixed(Poisson::new(mean).ok()),
            SlotLaw::DisplacedThermal { n_f, n_n } => SlotSampler::Thermal {
                amplitude: n_f.sqrt(),
                sigma: (n_n / 2.0).sqrt(),
            },
        }
    }
}

enum SlotSampler {
    /// `None` for zero intensity.
    Fixed(Option<Poisson<f64>>),
    Thermal { amplitude: f64, sigma: f64 },
}

impl SlotSampler {
    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        match self {
            SlotSampler::Fixed(None) => 0,
            SlotSampler::Fixed(Some(d)) => d.sample(rng) as u64,
            SlotSampler::Thermal { amplitude, sigma } => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let intensity = (amplitude + sigma * re).powi(2) + (sigma * im).powi(2);
                if intensity > 0.0 {
                    match Poisson::new(intensity) {
                        Ok(d) => d.sample(rng) as u64,
                        Err(_) => 0,
                    }
                } else {
                    0
                }
            }
        }
    }
}

/// Runs `work(rng, draws)` on each chunk and folds the results with `merge`.
fn chunked<T, W, M>(total: u64, seed: u64, work: W, merge: M, identity: T) -> T
where
    T: Send + Clone,
    W: Fn(&mut ChaCha8Rng, u64) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let chunks = total.div_ceil(CHUNK);
    let run = |i: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let draws = CHUNK.min(total - i * CHUNK);
        work(&mut rng, draws)
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        // Ordered collection keeps floating-point free merges reproducible.
        let parts: Vec<T> = (0..chunks).into_par_iter().map(run).collect();
        parts.into_iter().fold(identity, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(run).fold(identity, &merge)
    }
}

/// Draws `samples` slots from `law`.
pub fn sample_counts(law: SlotLaw, samples: u64, seed: u64) -> Result<CountHistogram> {
    law.validate()?;
    check(samples > 0, "samples", samples as f64, "> 0")?;
    let hist = chunked(
        samples,
        seed,
        |rng, draws| {
            let sampler = law.sampler();
            let mut h = CountHistogram::empty(seed);
            for _ in 0..draws {
                h.record(sampler.sample(rng));
            }
            h
        },
        CountHistogram::merge,
        CountHistogram::empty(seed),
    );
    Ok(hist)
}

/// Poissonian slots with the given mean (multimode filter).
pub fn sample_sif_counts(mean: f64, samples: u64, seed: u64) -> Result<CountHistogram> {
    sample_counts(SlotLaw::Poisson { mean }, samples, seed)
}

/// Single-mode slots holding a pulse of mean `n_f` in thermal noise `n_n`.
pub fn sample_qpg_counts(n_f: f64, n_n: f64, samples: u64, seed: u64) -> Result<CountHistogram> {
    sample_counts(SlotLaw::DisplacedThermal { n_f, n_n }, samples, seed)
}

/// Simulated hard-decoding PPM channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardFrameEstimate {
    /// Plug-in mutual information per photon, bits.
    pub pie: McEstimate,
    /// Plug-in mutual information per frame, bits.
    pub bits_per_frame: McEstimate,
    pub erasure_rate: f64,
    /// Joint counts, `joint[x * (m + 1) + y]`, `y = m` for an erasure.
    pub joint: Vec<u64>,
}

fn slot_laws(noise: &Noise, n_f: f64) -> (SlotLaw, SlotLaw) {
    match *noise {
        Noise::Multimode { n_b, .. } => (
            SlotLaw::Poisson { mean: n_f + n_b },
            SlotLaw::Poisson { mean: n_b },
        ),
        Noise::SingleMode { n_n } => (
            SlotLaw::DisplacedThermal { n_f, n_n },
            SlotLaw::DisplacedThermal { n_f: 0.0, n_n },
        ),
    }
}

/// Simulates `frames` PPM frames of order `m` with `n_f = m · n_s`.
///
/// Symbols are uniform. Every slot is sampled from its photocount law; a frame
/// with exactly one clicking slot decodes to that slot, anything else is an
/// erasure. The returned information is the plug-in estimate from the joint
/// symbol/decision histogram.
pub fn simulate_hard_frames(
    channel: &ChannelPoint,
    m: u32,
    frames: u64,
    seed: u64,
) -> Result<HardFrameEstimate> {
    channel.validate()?;
    check(m >= 2, "M", m as f64, ">= 2")?;
    check(frames > 0, "frames", frames as f64, "> 0")?;
    let n_f = m as f64 * channel.n_s;
    let (pulse, empty) = slot_laws(&channel.noise, n_f);
    let width = m as usize + 1;

    let joint = chunked(
        frames,
        seed,
        |rng, draws| {
            let (pulse, empty) = (pulse.sampler(), empty.sampler());
            let mut joint = vec![0u64; m as usize * width];
            for _ in 0..draws {
                let x = rng.random_range(0..m);
                let mut clicks = 0;
                let mut at = 0;
                for slot in 0..m {
                    let law = if slot == x { &pulse } else { &empty };
                    if law.sample(rng) > 0 {
                        clicks += 1;
                        at = slot;
                        if clicks > 1 {
                            break;
                        }
                    }
                }
                let y = if clicks == 1 { at } else { m };
                joint[x as usize * width + y as usize] += 1;
            }
            joint
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            a
        },
        vec![0u64; m as usize * width],
    );

    let total = frames as f64;
    let mut px = vec![0.0; m as usize];
    let mut py = vec![0.0; width];
    for x in 0..m as usize {
        for y in 0..width {
            let c = joint[x * width + y] as f64;
            px[x] += c;
            py[y] += c;
        }
    }
    let (mut mi, mut second) = (0.0, 0.0);
    for x in 0..m as usize {
        for y in 0..width {
            let c = joint[x * width + y] as f64;
            if c > 0.0 {
                let l = (c * total / (px[x] * py[y])).log2();
                mi += c / total * l;
                second += c / total * l * l;
            }
        }
    }
    let se = ((second - mi * mi).max(0.0) / total).sqrt();
    let bits_per_frame = McEstimate {
        value: mi,
        std_err: se,
        samples: frames,
        seed,
    };
    let pie = if n_f > 0.0 {
        McEstimate {
            value: mi / n_f,
            std_err: se / n_f,
            ..bits_per_frame
        }
    } else {
        McEstimate {
            value: 0.0,
            std_err: 0.0,
            ..bits_per_frame
        }
    };
    Ok(HardFrameEstimate {
        pie,
        bits_per_frame,
        erasure_rate: py[m as usize] / total,
        joint,
    })
}

/// Analytic counterparts of the sampled quantities, for side-by-side reports.
pub fn analytic_click_probabilities(noise: &Noise, n_f: f64) -> Result<detstats::BinarySlotStats> {
    match *noise {
        Noise::Multimode { n_b, .. } => detstats::sif_stats(n_f, n_b),
        Noise::SingleMode { n_n } => detstats::qpg_stats(n_f, n_n),
    }
}

/// Analytic hard-decoding PIE at the same operating point as
/// [`simulate_hard_frames`].
pub fn analytic_hard_pie(channel: &ChannelPoint, m: u32) -> Result<f64> {
    ppmcore::pie_hard(channel, m as u64)
}
