//! Partially distinguishable input.
//!
//! Rotating the polarisation of the mode-`b` photons by `y` sends
//! `b† → cos y b† + sin y b†⊥`, so `|l, S-l⟩` becomes a superposition over the
//! number `n` of photons left in the interfering polarisation, with weight
//! `C(S-l, n) cos^{2n}y sin^{2(S-l-n)}y`. The `n` co-polarised photons walk
//! together with the `l` photons in mode `a`; the `S-l-n` orthogonal ones
//! split independently. Detectors count both polarisations.

use alloc::vec;
use alloc::vec::Vec;

use crate::fock_walk::{walk_distribution, Distribution, TwoModeFock};
use crate::kravchuk::check_reflectivity;
use crate::math::{binomial_pmf, cos, exp, ln_choose, powi, sin, PI};
use crate::{Error, Result};

/// `|l, S-l⟩` with the mode-`b` polarisation rotated by `y ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishabilityInput {
    fock: TwoModeFock,
    mixing_angle: f64,
}

impl DistinguishabilityInput {
    pub fn new(total: usize, in_a: usize, mixing_angle: f64) -> Result<Self> {
        let fock = TwoModeFock::new(total, in_a)?;
        if !(0.0..=PI / 2.0).contains(&mixing_angle) {
            return Err(Error::InvalidParameter {
                name: "mixing angle",
                value: mixing_angle,
            });
        }
        Ok(Self { fock, mixing_angle })
    }

    pub fn total(&self) -> usize {
        self.fock.total()
    }

    pub fn in_a(&self) -> usize {
        self.fock.in_a()
    }

    pub fn mixing_angle(&self) -> f64 {
        self.mixing_angle
    }

    /// Probability that `n` of the mode-`b` photons keep the interfering
    /// polarisation.
    pub fn weight(&self, n: usize) -> f64 {
        let m = self.fock.in_b();
        if n > m {
            return 0.0;
        }
        let c = cos(self.mixing_angle);
        let s = sin(self.mixing_angle);
        // powi keeps the endpoints exact (0^0 = 1)
        exp(ln_choose(m, n)) * powi(c * c, n) * powi(s * s, m - n)
    }
}

/// Photon-number distribution at detector `a`, summed over polarisations.
pub fn decohered_distribution(input: &DistinguishabilityInput, r: f64) -> Result<Distribution> {
    check_reflectivity(r)?;
    let total = input.total();
    let l = input.in_a();
    let m = total - l;
    let mut probs = vec![0.0; total + 1];
    for n in 0..=m {
        let w = input.weight(n);
        if w == 0.0 {
            continue;
        }
        let coherent = walk_distribution(l + n, l, r)?;
        let rest = m - n;
        let classical: Vec<f64> = (0..=rest).map(|j| binomial_pmf(rest, j, r)).collect();
        for (k, pk) in coherent.probs().iter().enumerate() {
            for (j, pj) in classical.iter().enumerate() {
                probs[k + j] += w * pk * pj;
            }
        }
    }
    Ok(Distribution::from_raw(probs))
}
