//! Independent reference evaluators shared by the integration tests.
//!
//! Nothing here calls into the crate's numerical routines.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rpow(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `φ_k^{(r)}(l - S r, S)` for rational `r = num/den` from exact rational
/// arithmetic: the square and the sign are exact, only the final square root
/// is rounded.
pub fn exact_kravchuk(s: usize, num: i64, den: i64, k: usize, l: usize) -> f64 {
    let r = rat(num, den);
    let q = BigRational::one() - &r;
    let z = r.recip();
    // ₂F₁[-k, -l; -S; 1/r]
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for j in 0..k.min(l) {
        let j = j as i64;
        let numer = BigRational::from_integer(BigInt::from((j - k as i64) * (j - l as i64)));
        let denom = BigRational::from_integer(BigInt::from((j - s as i64) * (j + 1)));
        term = term * numer / denom * &z;
        sum += &term;
    }
    let squared = BigRational::from_integer(binomial(s, l) * binomial(s, k))
        * rpow(&q, s as i64 - l as i64 - k as i64)
        * rpow(&r, (l + k) as i64)
        * &sum
        * &sum;
    let magnitude = squared.to_f64().unwrap().sqrt();
    let mut sign = if sum.is_negative() { -1.0 } else { 1.0 };
    if k % 2 == 1 {
        sign = -sign;
    }
    if sum.is_zero() {
        0.0
    } else {
        sign * magnitude
    }
}

/// Dense polynomial in two commuting creation operators, indexed by the
/// power of `a†` (the power of `b†` is implied by the total degree).
#[derive(Clone)]
struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    fn one() -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Multiply by `α a† + β b†`.
    fn times_linear(&self, alpha: Complex64, beta: Complex64) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c * alpha;
            out[i] += c * beta;
        }
        Self { coeffs: out }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Output state of `|l, S-l⟩` through `exp(-iθ H)` with
/// `H = (i/2)(a†b e^{-iφ} - a b† e^{iφ})`, expanded symbolically.
///
/// The single-photon action is the 2×2 exponential of
/// `[[0, -(i/2)e^{iφ}], [(i/2)e^{-iφ}, 0]]` in the basis `(b†, a†)`:
///
/// ```text
/// a† ↦ cos(θ/2) a† - e^{iφ} sin(θ/2) b†
/// b† ↦ e^{-iφ} sin(θ/2) a† + cos(θ/2) b†
/// ```
///
/// and `|l, S-l⟩ = (a†)^l (b†)^{S-l} |0⟩ / √(l!(S-l)!)`.
pub fn polynomial_expansion_state(s: usize, l: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let sn = (theta / 2.0).sin();
    let a_to = (c, -Complex64::from_polar(sn, phi));
    let b_to = (Complex64::from_polar(sn, -phi), c);
    let mut p = Poly::one();
    for _ in 0..l {
        p = p.times_linear(a_to.0, a_to.1);
    }
    for _ in 0..(s - l) {
        p = p.times_linear(b_to.0, b_to.1);
    }
    let norm_in = (factorial(l) * factorial(s - l)).sqrt();
    (0..=s)
        .map(|k| p.coeffs[k] * ((factorial(k) * factorial(s - k)).sqrt() / norm_in))
        .collect()
}

/// Probabilities from [`polynomial_expansion_state`].
pub fn polynomial_expansion_probs(s: usize, l: usize, r: f64) -> Vec<f64> {
    let theta = 2.0 * r.sqrt().asin();
    polynomial_expansion_state(s, l, theta, std::f64::consts::FRAC_PI_2)
        .iter()
        .map(|a| a.norm_sqr())
        .collect()
}

pub fn binomial_law(n: usize, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            binomial(n, k).to_f64().unwrap() * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        })
        .collect()
}

/// Pulse-by-pulse simulation of the heralded experiment, sharing no code
/// with the crate: pair numbers from the geometric law by sequential search,
/// per-photon coin flips for every loss, and beam-splitter outputs drawn from
/// [`polynomial_expansion_probs`]. Returns `(pulses, heralded, counts)`.
pub struct NaiveRun {
    pub heralded: u64,
    pub counts: std::collections::BTreeMap<(usize, usize), u64>,
}

pub struct NaiveSetup {
    pub mean: f64,
    pub transmission: f64,
    pub detector: f64,
    pub idler: f64,
    pub reflectivity: f64,
    pub herald: (usize, usize),
}

pub fn naive_experiment(setup: &NaiveSetup, pulses: u64, seed: u64) -> NaiveRun {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let q = setup.mean / (1.0 + setup.mean);
    let mut bs_tables = std::collections::BTreeMap::new();
    let mut run = NaiveRun { heralded: 0, counts: Default::default() };
    for _ in 0..pulses {
        let mut pairs = [0usize; 2];
        for n in pairs.iter_mut() {
            let u: f64 = rng.gen();
            let mut p = 1.0 - q;
            let mut acc = p;
            while u >= acc {
                *n += 1;
                p *= q;
                acc += p;
            }
        }
        let idler_eff = setup.idler * setup.detector;
        let seen_a = (0..pairs[0]).filter(|_| rng.gen_bool(idler_eff)).count();
        let seen_b = (0..pairs[1]).filter(|_| rng.gen_bool(idler_eff)).count();
        if (seen_a, seen_b) != setup.herald {
            continue;
        }
        run.heralded += 1;
        let l = (0..pairs[0]).filter(|_| rng.gen_bool(setup.transmission)).count();
        let m = (0..pairs[1]).filter(|_| rng.gen_bool(setup.transmission)).count();
        let table = bs_tables
            .entry((l + m, l))
            .or_insert_with(|| polynomial_expansion_probs(l + m, l, setup.reflectivity));
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut k = table.len() - 1;
        for (i, p) in table.iter().enumerate() {
            acc += p;
            if u < acc {
                k = i;
                break;
            }
        }
        let ka = (0..k).filter(|_| rng.gen_bool(setup.detector)).count();
        let kb = (0..l + m - k).filter(|_| rng.gen_bool(setup.detector)).count();
        *run.counts.entry((ka, kb)).or_insert(0) += 1;
    }
    run
}
