//! The beam splitter as a one-step continuous-time quantum walk.
//!
//! A two-mode Fock state `|l, S-l⟩` is the walker at position `Δ = S - 2l`
//! on an `S + 1` site line. The beam-splitter Hamiltonian
//! `H = (i/2)(a†b e^{-iφ} - a b† e^{iφ})` hops it to `l ± 1` with amplitudes
//! `½√((l+1)(S-l))` and `½√(l(S-l+1))`, and the reflectivity `r = sin²(θ/2)`
//! sets the walk time `θ`.
//!
//! Evolution is available two ways that must agree: the closed Kravchuk form
//! ([`evolve`]) and diagonalisation of [`hbs_matrix`] ([`evolve_spectral`]).
//! The closed form carries the global phase `e^{-iθS/2}`, so the operator
//! implemented by both routes is `exp(-iθ(H + S/2))`, whose spectrum
//! `{0, 1, …, S}` is integer and makes the walk exactly `2π`-periodic.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::kravchuk::{amplitude_matrix, check_index, check_reflectivity, kravchuk_column, mixing_angle};
use crate::linalg::HermitianTridiagonal;
use crate::math::{abs, sin, sqrt, PI};
use crate::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-10;

/// `|l, S-l⟩`: `l` photons in mode `a`, `S - l` in mode `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoModeFock {
    total: usize,
    in_a: usize,
}

impl TwoModeFock {
    pub fn new(total: usize, in_a: usize) -> Result<Self> {
        check_index(in_a, total)?;
        Ok(Self { total, in_a })
    }

    /// From the walker position `Δ = S - 2l`.
    pub fn from_imbalance(total: usize, imbalance: i64) -> Result<Self> {
        let twice_l = total as i64 - imbalance;
        if twice_l < 0 || twice_l % 2 != 0 || twice_l > 2 * total as i64 {
            return Err(Error::InvalidParameter {
                name: "imbalance",
                value: imbalance as f64,
            });
        }
        Self::new(total, (twice_l / 2) as usize)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn in_a(&self) -> usize {
        self.in_a
    }

    pub fn in_b(&self) -> usize {
        self.total - self.in_a
    }

    /// `Δ = S - 2l`.
    pub fn imbalance(&self) -> i64 {
        self.total as i64 - 2 * self.in_a as i64
    }
}

impl From<TwoModeFock> for StateVector {
    fn from(f: TwoModeFock) -> Self {
        StateVector::basis(f.total, f.in_a)
    }
}

/// Reflectivity and phase of a lossless beam splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    reflectivity: f64,
    phase: f64,
}

impl BeamSplitter {
    pub fn new(reflectivity: f64, phase: f64) -> Result<Self> {
        check_reflectivity(reflectivity)?;
        if !phase.is_finite() {
            return Err(Error::InvalidParameter { name: "phase", value: phase });
        }
        Ok(Self { reflectivity, phase })
    }

    /// From the mixing angle `θ ∈ [0, π]`.
    pub fn from_angle(theta: f64, phase: f64) -> Result<Self> {
        Self::new(r_of_theta(theta)?, phase)
    }

    /// The real-Hamiltonian convention `φ = π/2`.
    pub fn real(reflectivity: f64) -> Result<Self> {
        Self::new(reflectivity, PI / 2.0)
    }

    pub fn reflectivity(&self) -> f64 {
        self.reflectivity
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn theta(&self) -> f64 {
        mixing_angle(self.reflectivity)
    }
}

/// `θ = 2 arcsin √r`, mapping `[0, 1]` onto `[0, π]`.
pub fn theta_of_r(r: f64) -> Result<f64> {
    check_reflectivity(r)?;
    Ok(mixing_angle(r))
}

/// `r = sin²(θ/2)` for `θ ∈ [0, π]`.
pub fn r_of_theta(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidParameter { name: "theta", value: theta });
    }
    let s = sin(theta / 2.0);
    Ok((s * s).clamp(0.0, 1.0))
}

/// Output photon-number statistics: `probs[k]` for `|k, S-k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Checks non-negativity and unit sum (to `1e-10`).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(&bad) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::InvalidParameter { name: "probability", value: bad });
        }
        let sum: f64 = probs.iter().sum();
        if abs(sum - 1.0) > NORM_TOLERANCE {
            return Err(Error::NotNormalised(sum));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_raw(mut probs: Vec<f64>) -> Self {
        // round-off can leave -1e-17 where an amplitude vanishes
        probs.iter_mut().for_each(|p| *p = p.max(0.0));
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn total(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mean of `S_z = (S - 2k)/2`.
    pub fn mean_spin_z(&self) -> f64 {
        let s = self.total() as f64;
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| p * (s - 2.0 * k as f64) / 2.0)
            .sum()
    }

    /// Variance of `S_z = (S - 2k)/2`.
    pub fn variance_spin_z(&self) -> f64 {
        let s = self.total() as f64;
        let mean = self.mean_spin_z();
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let d = (s - 2.0 * k as f64) / 2.0 - mean;
                p * d * d
            })
            .sum()
    }

    /// `½ Σ |p - q|`; distributions of different length are zero-padded.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let n = self.probs.len().max(other.probs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..n)
            .map(|i| abs(get(&self.probs, i) - get(&other.probs, i)))
            .sum::<f64>()
    }
}

/// Pure state over `{|k, S-k⟩ : k = 0..=S}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|k, S-k⟩`.
    pub fn basis(total: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); total + 1];
        amps[k.min(total)] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Wraps amplitudes that are already normalised to `1e-10`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let n = norm_sqr(&amps);
        if !(abs(n - 1.0) <= NORM_TOLERANCE) {
            return Err(Error::NotNormalised(n));
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalised(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&amps);
        if amps.is_empty() || !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalised(n));
        }
        let scale = 1.0 / sqrt(n);
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { amps })
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn total(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `amps[k] ↦ amps[S - k]`.
    pub fn mirror(&self) -> Self {
        let mut amps = self.amps.clone();
        amps.reverse();
        Self { amps }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                found: other.amps.len(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::from_raw(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Matrix of `H = (i/2)(a†b e^{-iφ} - a b† e^{iφ})` on `{|l, S-l⟩}`.
///
/// Below-diagonal entries are `H[l+1][l] = (i/2) e^{-iφ} √((l+1)(S-l))`, the
/// `a†b` ladder element; at `φ = π/2` the matrix is real with
/// `H[l][l+1] = ½√((l+1)(S-l))`.
pub fn hbs_matrix(total: usize, phi: f64) -> HermitianTridiagonal {
    let phase = Complex64::new(0.0, 0.5) * Complex64::from_polar(1.0, -phi);
    let off = (0..total)
        .map(|l| phase * sqrt(((l + 1) * (total - l)) as f64))
        .map(snap_to_axes)
        .collect();
    HermitianTridiagonal {
        diag: vec![0.0; total + 1],
        off,
    }
}

// e^{-iπ/2}·i leaves a 6e-17 imaginary residue; the real convention should
// be exactly real.
fn snap_to_axes(z: Complex64) -> Complex64 {
    let tiny = 4.0 * f64::EPSILON * z.norm();
    Complex64::new(
        if abs(z.re) <= tiny { 0.0 } else { z.re },
        if abs(z.im) <= tiny { 0.0 } else { z.im },
    )
}

/// Closed-form evolution `ψ ↦ A ψ` with `A[k][l] = 𝒜_S^{(r,φ)}(k, l)`.
pub fn evolve(state: &StateVector, bs: &BeamSplitter) -> Result<StateVector> {
    let total = state.total();
    let a = amplitude_matrix(total, bs.reflectivity, bs.phase)?;
    Ok(StateVector {
        amps: a.apply(&state.amps),
    })
}

/// Spectral evolution `ψ ↦ exp(-iθ(H + S/2)) ψ` from the eigenbasis of
/// [`hbs_matrix`].
pub fn evolve_spectral(state: &StateVector, bs: &BeamSplitter) -> Result<StateVector> {
    evolve_by_angle(state, bs.theta(), bs.phase)
}

/// As [`evolve_spectral`] for an arbitrary real walk time `θ`.
pub fn evolve_by_angle(state: &StateVector, theta: f64, phi: f64) -> Result<StateVector> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter { name: "theta", value: theta });
    }
    let total = state.total();
    let shift = total as f64 / 2.0;
    let eig = hbs_matrix(total, phi).eigen()?;
    let amps = eig.apply_function(&state.amps, |lambda| {
        Complex64::from_polar(1.0, -theta * (lambda + shift))
    });
    Ok(StateVector { amps })
}

/// `p_S^{(r)}(k, l) = |φ_k^{(r)}(l - S r, S)|²` for `k = 0..=S`.
pub fn walk_distribution(total: usize, in_a: usize, r: f64) -> Result<Distribution> {
    let col = kravchuk_column(total, r, in_a)?;
    Ok(Distribution::from_raw(col.into_iter().map(|x| x * x).collect()))
}

/// `¼((S² - Δ²)/2 + S)`, the ballistic prefactor of the variance.
pub fn ballistic_prefactor(total: usize, in_a: usize) -> Result<f64> {
    let f = TwoModeFock::new(total, in_a)?;
    let s = total as f64;
    let delta = f.imbalance() as f64;
    Ok(0.25 * ((s * s - delta * delta) / 2.0 + s))
}

/// `Var[S_z] = ¼((S² - Δ²)/2 + S) sin²θ`.
pub fn variance_exact(total: usize, in_a: usize, r: f64) -> Result<f64> {
    let theta = theta_of_r(r)?;
    let s = sin(theta);
    Ok(ballistic_prefactor(total, in_a)? * s * s)
}

/// Small-angle form `¼((S² - Δ²)/2 + S) θ_eff²` with `θ_eff = min(θ, π - θ)`.
pub fn variance_approx(total: usize, in_a: usize, r: f64) -> Result<f64> {
    let theta = theta_of_r(r)?;
    let folded = theta.min(PI - theta);
    Ok(ballistic_prefactor(total, in_a)? * folded * folded)
}

/// `|⟨mirror(ψ)| U(r) |ψ⟩|²` with `U` the real-convention (`φ = π/2`)
/// beam splitter. At `r = 1` the unitary is the mirror times a global phase,
/// so the fidelity is one for every state.
pub fn perfect_state_transfer_fidelity(state: &StateVector, r: f64) -> Result<f64> {
    let n = state.norm_sqr();
    if !(abs(n - 1.0) <= NORM_TOLERANCE) {
        return Err(Error::NotNormalised(n));
    }
    let out = evolve(state, &BeamSplitter::real(r)?)?;
    Ok(state.mirror().inner(&out)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn hamiltonian_small_cases() {
        let h = hbs_matrix(1, FRAC_PI_2).to_dense();
        assert_abs_diff_eq!(h[(0, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(1, 0)].re, 0.5, epsilon = 1e-15);
        assert_eq!(h[(0, 1)].im, 0.0);
        let h2 = hbs_matrix(2, FRAC_PI_2);
        for o in &h2.off {
            assert_abs_diff_eq!(o.re, 2f64.sqrt() / 2.0, epsilon = 1e-15);
        }
        let h0 = hbs_matrix(0, 0.3);
        assert_eq!(h0.dim(), 1);
        assert_eq!(h0.diag, vec![0.0]);
    }

    #[test]
    fn hopping_support_and_magnitudes() {
        let s = 9;
        let h = hbs_matrix(s, 1.1);
        for l in 0..=s {
            let out = h.apply(StateVector::basis(s, l).amps());
            for (k, a) in out.iter().enumerate() {
                let expected = if k == l + 1 {
                    0.5 * (((l + 1) * (s - l)) as f64).sqrt()
                } else if l > 0 && k == l - 1 {
                    0.5 * ((l * (s - l + 1)) as f64).sqrt()
                } else {
                    0.0
                };
                assert_abs_diff_eq!(a.norm(), expected, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn angle_round_trip() {
        for &r in &[0.0, 1e-6, 0.04, 0.3, 0.5, 0.96, 1.0] {
            let theta = theta_of_r(r).unwrap();
            assert_abs_diff_eq!(r_of_theta(theta).unwrap(), r, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(theta_of_r(0.5).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert!((theta_of_r(0.04).unwrap() - 0.40).abs() < 0.005);
        assert!((theta_of_r(0.96).unwrap() - 2.74).abs() < 0.005);
        assert!(r_of_theta(-0.1).is_err());
        assert!(r_of_theta(4.0).is_err());
    }

    #[test]
    fn imbalance_bookkeeping() {
        let f = TwoModeFock::new(6, 1).unwrap();
        assert_eq!(f.imbalance(), 4);
        assert_eq!(f.in_b(), 5);
        assert_eq!(TwoModeFock::from_imbalance(6, 4).unwrap(), f);
        assert!(TwoModeFock::from_imbalance(6, 3).is_err());
        assert!(TwoModeFock::from_imbalance(6, 8).is_err());
        assert!(TwoModeFock::new(2, 3).is_err());
    }

    #[test]
    fn hom_bunching_for_two_two() {
        let d = walk_distribution(4, 2, 0.5).unwrap();
        let expected = [0.375, 0.0, 0.25, 0.0, 0.375];
        for (p, e) in d.probs().iter().zip(expected) {
            assert_abs_diff_eq!(*p, e, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(d.variance_spin_z(), 3.0, epsilon = 1e-13);
    }

    #[test]
    fn variance_values() {
        assert!((variance_approx(4, 2, 0.04).unwrap() - 0.49).abs() < 0.01);
        assert!((variance_approx(4, 2, 0.3).unwrap() - 4.03).abs() < 0.01);
        assert!((variance_approx(4, 2, 0.5).unwrap() - 7.40).abs() < 0.01);
        assert!((variance_approx(4, 2, 0.96).unwrap() - 0.49).abs() < 0.01);
        assert_abs_diff_eq!(variance_exact(4, 2, 0.5).unwrap(), 3.0, epsilon = 1e-14);
        for s in [1usize, 6, 11] {
            let r = 0.37;
            let sin2 = theta_of_r(r).unwrap().sin().powi(2);
            assert_abs_diff_eq!(variance_exact(s, 0, r).unwrap(), s as f64 / 4.0 * sin2, epsilon = 1e-14);
            assert_abs_diff_eq!(variance_exact(s, s, r).unwrap(), s as f64 / 4.0 * sin2, epsilon = 1e-14);
        }
    }

    #[test]
    fn state_validation() {
        let bad = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(StateVector::new(bad.clone()), Err(Error::NotNormalised(_))));
        let ok = StateVector::normalised(bad).unwrap();
        assert_abs_diff_eq!(ok.norm_sqr(), 1.0, epsilon = 1e-15);
        assert!(StateVector::normalised(vec![Complex64::new(0.0, 0.0)]).is_err());
        assert!(ok.inner(&StateVector::basis(3, 0)).is_err());
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.2, -0.2]).is_err());
    }

    #[test]
    fn transfer_fidelity_endpoints() {
        let s = 6;
        let edge = StateVector::basis(s, 0);
        assert_abs_diff_eq!(perfect_state_transfer_fidelity(&edge, 1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(perfect_state_transfer_fidelity(&edge, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        let unnormalised = StateVector {
            amps: vec![Complex64::new(2.0, 0.0); 3],
        };
        assert!(perfect_state_transfer_fidelity(&unnormalised, 1.0).is_err());
    }
}
