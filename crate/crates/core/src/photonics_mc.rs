//! Monte Carlo model of the heralded two-source experiment.
//!
//! Each pulse, two independent SPDC sources emit `n_a` and `n_b` pairs. The
//! idlers are detected with efficiency `η_idler · η_det`, and the pulse is kept
//! only when the detected idler counts equal the herald target. The surviving
//! signal photons are thinned by the path transmission, sent through the beam
//! splitter by sampling the exact Fock-walk distribution for the actual
//! surviving pair, and thinned again by the detector efficiency.
//!
//! Heralding is rare (about `5e-4` per pulse for `(2, 2)` at `⟨n⟩ = 0.2`), so
//! the simulator jumps straight from one heralded pulse to the next: the gap is
//! geometric in the herald probability, and the pair numbers of a heralded pulse
//! are drawn from their posterior given the idler counts. This has the same law
//! as simulating every pulse.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Geometric};

use crate::fock_walk::walk_distribution;
use crate::kravchuk::check_reflectivity;
use crate::math::{asinh, binomial_pmf, cosh, ln, powi, sinh, sqrt, tanh};
use crate::{Error, Result};

/// Truncation: the neglected tail of the pair-number law stays below this.
pub const TAIL_MASS: f64 = 1e-12;

const MAX_TRUNCATION: usize = 100_000;

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// Two-mode squeezed vacuum `Σ λ_n |n, n⟩`, `λ_n = tanhⁿg / cosh g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdcSource {
    gain: f64,
    n_max: usize,
    cdf: Vec<f64>,
}

impl SpdcSource {
    pub fn from_gain(gain: f64) -> Result<Self> {
        if !(gain >= 0.0 && gain.is_finite()) {
            return Err(Error::InvalidParameter { name: "gain", value: gain });
        }
        let t = tanh(gain);
        let q = t * t;
        // tail beyond n is q^(n+1)
        let n_max = if q == 0.0 {
            0
        } else {
            let n = (ln(TAIL_MASS) / ln(q)) as usize;
            if n > MAX_TRUNCATION {
                return Err(Error::InvalidParameter { name: "gain", value: gain });
            }
            n
        };
        let mut source = Self { gain, n_max, cdf: Vec::new() };
        let mut acc = 0.0;
        source.cdf = (0..=n_max)
            .map(|n| {
                acc += source.pair_probability(n);
                acc
            })
            .collect();
        Ok(source)
    }

    /// Source with `sinh²g = mean`.
    pub fn from_mean_photon_number(mean: f64) -> Result<Self> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(Error::InvalidParameter { name: "mean photon number", value: mean });
        }
        Self::from_gain(asinh(sqrt(mean)))
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn mean_photon_number(&self) -> f64 {
        let s = sinh(self.gain);
        s * s
    }

    /// Largest pair number that can be drawn.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitude(&self, n: usize) -> f64 {
        powi(tanh(self.gain), n) / cosh(self.gain)
    }

    /// `λ_n² = tanh^{2n}g / cosh²g`.
    pub fn pair_probability(&self, n: usize) -> f64 {
        let a = self.amplitude(n);
        a * a
    }

    /// Probability mass kept by the truncation.
    pub fn truncated_mass(&self) -> f64 {
        self.cdf[self.n_max]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>() * self.truncated_mass();
        self.cdf.partition_point(|&c| c <= u).min(self.n_max)
    }

    /// Probability that exactly `h` idler photons are detected when each
    /// is seen with probability `efficiency`.
    pub fn herald_probability(&self, h: usize, efficiency: f64) -> f64 {
        (h..=self.n_max)
            .map(|n| self.pair_probability(n) * binomial_pmf(n, h, efficiency))
            .sum()
    }

    fn posterior(&self, h: usize, efficiency: f64) -> Option<WeightedIndex<f64>> {
        let weights = (h..=self.n_max).map(|n| self.pair_probability(n) * binomial_pmf(n, h, efficiency));
        WeightedIndex::new(weights).ok()
    }
}

/// Parameters of one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mean_photon_number: f64,
    /// Signal-path transmission `η`, applied before the beam splitter.
    pub transmission: f64,
    pub detector_efficiency: f64,
    /// Idler-path transmission; `None` uses `transmission`. The idler detector
    /// has the same efficiency as the signal detectors.
    pub idler_transmission: Option<f64>,
    pub pulses: u64,
    pub reflectivity: f64,
    /// Detected idler counts `(l, S - l)` that herald a pulse.
    pub herald: (usize, usize),
    pub seed: u64,
    /// Run until this many heralded events instead of for `pulses` pulses.
    pub heralded_events: Option<u64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mean_photon_number: 0.2,
            transmission: 0.5,
            detector_efficiency: 0.9,
            idler_transmission: None,
            pulses: 1_000_000,
            reflectivity: 0.5,
            herald: (2, 2),
            seed: 0,
            heralded_events: None,
        }
    }
}

impl ExperimentConfig {
    /// No loss anywhere; every photon is detected.
    pub fn lossless(reflectivity: f64, herald: (usize, usize)) -> Self {
        Self {
            transmission: 1.0,
            detector_efficiency: 1.0,
            idler_transmission: Some(1.0),
            reflectivity,
            herald,
            ..Self::default()
        }
    }

    pub fn idler_efficiency(&self) -> f64 {
        self.idler_transmission.unwrap_or(self.transmission) * self.detector_efficiency
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mean_photon_number >= 0.0 && self.mean_photon_number.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mean photon number",
                value: self.mean_photon_number,
            });
        }
        check_probability("transmission", self.transmission)?;
        check_probability("detector efficiency", self.detector_efficiency)?;
        if let Some(t) = self.idler_transmission {
            check_probability("idler transmission", t)?;
        }
        check_reflectivity(self.reflectivity)?;
        let budget = self.heralded_events.unwrap_or(self.pulses);
        if budget == 0 {
            return Err(Error::InvalidParameter { name: "pulses", value: 0.0 });
        }
        Ok(())
    }
}

/// Detected `(k_a, k_b)` patterns of the heralded pulses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CountRecord {
    pub herald: (usize, usize),
    pub pulses: u64,
    pub heralded: u64,
    pub counts: BTreeMap<(usize, usize), u64>,
}

/// One populated or empty bin of a [`CountRecord`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub k_a: usize,
    pub k_b: usize,
    pub count: u64,
    pub probability: f64,
    /// `1/√N`; absent for an empty bin.
    pub uncertainty: Option<f64>,
}

impl CountRecord {
    pub fn count(&self, k_a: usize, k_b: usize) -> u64 {
        self.counts.get(&(k_a, k_b)).copied().unwrap_or(0)
    }

    /// Relative frequency among heralded pulses; `None` without heralds.
    pub fn probability(&self, k_a: usize, k_b: usize) -> Option<f64> {
        (self.heralded > 0).then(|| self.count(k_a, k_b) as f64 / self.heralded as f64)
    }

    pub fn uncertainty(&self, k_a: usize, k_b: usize) -> Option<f64> {
        let n = self.count(k_a, k_b);
        (n > 0).then(|| 1.0 / sqrt(n as f64))
    }

    pub fn bin(&self, k_a: usize, k_b: usize) -> Bin {
        Bin {
            k_a,
            k_b,
            count: self.count(k_a, k_b),
            probability: self.probability(k_a, k_b).unwrap_or(0.0),
            uncertainty: self.uncertainty(k_a, k_b),
        }
    }

    /// Every pattern with `k_a + k_b = S` for the heralded `S`, then any
    /// lossy pattern that was observed.
    pub fn bins(&self) -> Vec<Bin> {
        let s = self.herald.0 + self.herald.1;
        let mut out: Vec<Bin> = (0..=s).map(|k| self.bin(k, s - k)).collect();
        out.extend(
            self.counts
                .keys()
                .filter(|(a, b)| a + b != s)
                .map(|&(a, b)| self.bin(a, b)),
        );
        out
    }

    /// Adds another run with the same herald.
    pub fn merge(&mut self, other: &CountRecord) -> Result<()> {
        if self.herald != other.herald {
            return Err(Error::InvalidParameter {
                name: "herald",
                value: (other.herald.0 + other.herald.1) as f64,
            });
        }
        self.pulses += other.pulses;
        self.heralded += other.heralded;
        for (&key, &n) in &other.counts {
            *self.counts.entry(key).or_insert(0) += n;
        }
        Ok(())
    }
}

fn thin<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> usize {
    if n == 0 || p >= 1.0 {
        return n;
    }
    // p is validated, so construction cannot fail
    Binomial::new(n as u64, p).map_or(0, |b| b.sample(rng) as usize)
}

struct WalkSampler {
    reflectivity: f64,
    cache: BTreeMap<(usize, usize), WeightedIndex<f64>>,
}

impl WalkSampler {
    fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R, total: usize, in_a: usize) -> Result<usize> {
        if total == 0 {
            return Ok(0);
        }
        if !self.cache.contains_key(&(total, in_a)) {
            let d = walk_distribution(total, in_a, self.reflectivity)?;
            let w = WeightedIndex::new(d.probs()).map_err(|_| Error::NotNormalised(d.sum()))?;
            self.cache.insert((total, in_a), w);
        }
        Ok(self.cache[&(total, in_a)].sample(rng))
    }
}

/// Runs the experiment; deterministic in `cfg.seed`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CountRecord> {
    cfg.validate()?;
    let source = SpdcSource::from_mean_photon_number(cfg.mean_photon_number)?;
    let (ha, hb) = cfg.herald;
    let target = ha.max(hb);
    if target > source.n_max() {
        return Err(Error::HeraldBeyondTruncation { target, n_max: source.n_max() });
    }
    let eta_idler = cfg.idler_efficiency();
    let mut record = CountRecord { herald: cfg.herald, ..CountRecord::default() };

    let p_herald = source.herald_probability(ha, eta_idler) * source.herald_probability(hb, eta_idler);
    let (post_a, post_b) = match (source.posterior(ha, eta_idler), source.posterior(hb, eta_idler)) {
        (Some(a), Some(b)) if p_herald > 0.0 => (a, b),
        _ => {
            record.pulses = if cfg.heralded_events.is_some() { 0 } else { cfg.pulses };
            return Ok(record);
        }
    };
    let gaps = Geometric::new(p_herald.min(1.0))
        .map_err(|_| Error::InvalidParameter { name: "herald probability", value: p_herald })?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut walk = WalkSampler { reflectivity: cfg.reflectivity, cache: BTreeMap::new() };
    loop {
        if cfg.heralded_events == Some(record.heralded) {
            break;
        }
        let step = gaps.sample(&mut rng).saturating_add(1);
        if cfg.heralded_events.is_none() && record.pulses.saturating_add(step) > cfg.pulses {
            record.pulses = cfg.pulses;
            break;
        }
        record.pulses = record.pulses.saturating_add(step);
        record.heralded += 1;

        let n_a = ha + post_a.sample(&mut rng);
        let n_b = hb + post_b.sample(&mut rng);
        let l = thin(&mut rng, n_a, cfg.transmission);
        let m = thin(&mut rng, n_b, cfg.transmission);
        let k = walk.sample(&mut rng, l + m, l)?;
        let k_a = thin(&mut rng, k, cfg.detector_efficiency);
        let k_b = thin(&mut rng, l + m - k, cfg.detector_efficiency);
        *record.counts.entry((k_a, k_b)).or_insert(0) += 1;
    }
    Ok(record)
}

/// Sampled emission rate of exactly `n` pairs from one source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRate {
    pub pairs: usize,
    pub pulses: u64,
    pub events: u64,
    pub repetition_rate: f64,
}

impl PairRate {
    pub fn per_pulse(&self) -> f64 {
        self.events as f64 / self.pulses as f64
    }

    pub fn per_minute(&self) -> f64 {
        self.per_pulse() * self.repetition_rate * 60.0
    }

    /// Poisson error on [`per_minute`](Self::per_minute).
    pub fn per_minute_uncertainty(&self) -> f64 {
        sqrt(self.events.max(1) as f64) / self.pulses as f64 * self.repetition_rate * 60.0
    }
}

/// Draws `pulses` emissions and counts those with exactly `pairs` pairs.
pub fn simulate_pair_rate(
    source: &SpdcSource,
    pairs: usize,
    repetition_rate: f64,
    pulses: u64,
    seed: u64,
) -> Result<PairRate> {
    if pulses == 0 {
        return Err(Error::InvalidParameter { name: "pulses", value: 0.0 });
    }
    if !(repetition_rate > 0.0 && repetition_rate.is_finite()) {
        return Err(Error::InvalidParameter { name: "repetition rate", value: repetition_rate });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = (0..pulses).filter(|_| source.sample(&mut rng) == pairs).count() as u64;
    Ok(PairRate { pairs, pulses, events, repetition_rate })
}
