//! Chiral XY chains in the single-excitation sector.
//!
//! `H = Σ_n J_n (σ⁺_n σ⁻_{n+1} + h.c.)` restricted to one flipped spin is the
//! zero-diagonal tridiagonal matrix with `H[n-1][n] = J_n` (sites `0..=S`).
//! Two coupling families matter here: the SSH chain `J_n = 2J(1 + δ(-1)^n)`
//! and the generalised chain `J_n = ½√(n(S+1-n))`, which is exactly the
//! beam-splitter Hamiltonian of [`crate::fock_walk::hbs_matrix`] at `φ = π/2`.

use alloc::vec::Vec;

use crate::fock_walk::hbs_matrix;
use crate::linalg::{DenseMatrix, Eigensystem, SymTridiagonal};
use crate::math::{abs, ln, sqrt, PI};
use crate::{Complex64, Error, Result};

/// Coupling vector `J_1 … J_S` of an `S + 1` site chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    couplings: Vec<f64>,
}

impl ChainSpec {
    /// All couplings must be finite and strictly positive.
    pub fn new(couplings: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = couplings.iter().find(|j| !(j.is_finite() && **j > 0.0)) {
            return Err(Error::InvalidParameter { name: "coupling", value: bad });
        }
        Ok(Self { couplings })
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn sites(&self) -> usize {
        self.couplings.len() + 1
    }

    /// `‖J‖∞`.
    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().copied().fold(0.0, f64::max)
    }

    pub fn matrix(&self) -> SingleExcitationMatrix {
        SingleExcitationMatrix {
            tridiagonal: SymTridiagonal::new(
                alloc::vec![0.0; self.sites()],
                self.couplings.clone(),
            ),
        }
    }
}

/// `[H_XY]_{mn}` over the basis `|n⟩ = σ⁺_n |↓↓…↓⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationMatrix {
    tridiagonal: SymTridiagonal,
}

impl SingleExcitationMatrix {
    pub fn tridiagonal(&self) -> &SymTridiagonal {
        &self.tridiagonal
    }

    pub fn to_dense(&self) -> DenseMatrix<f64> {
        self.tridiagonal.to_dense()
    }

    pub fn to_complex_dense(&self) -> DenseMatrix<Complex64> {
        self.to_dense().map(|x| Complex64::new(x, 0.0))
    }
}

/// SSH couplings `J_n = 2J(1 + δ(-1)^n)` for `n = 1..=S`.
pub fn ssh_couplings(total: usize, hopping: f64, delta: f64) -> Result<ChainSpec> {
    if total < 1 {
        return Err(Error::InvalidParameter { name: "total", value: 0.0 });
    }
    if !(abs(delta) < 1.0) {
        return Err(Error::InvalidParameter { name: "delta", value: delta });
    }
    if !(hopping > 0.0 && hopping.is_finite()) {
        return Err(Error::InvalidParameter { name: "hopping", value: hopping });
    }
    ChainSpec::new(
        (1..=total)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                2.0 * hopping * (1.0 + delta * sign)
            })
            .collect(),
    )
}

/// Generalised SSH couplings `J_n = ½√(n(S+1-n))`.
pub fn generalized_ssh_couplings(total: usize) -> Result<ChainSpec> {
    if total < 1 {
        return Err(Error::InvalidParameter { name: "total", value: 0.0 });
    }
    ChainSpec::new(
        (1..=total)
            .map(|n| 0.5 * sqrt((n * (total + 1 - n)) as f64))
            .collect(),
    )
}

/// Ascending spectrum with orthonormal eigenvectors as columns.
pub fn eigensystem(spec: &ChainSpec) -> Result<Eigensystem> {
    spec.matrix().tridiagonal.eigen()
}

/// How an edge state decays into the bulk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Localisation {
    /// `|ψ_n| ∝ e^{-n/ξ}` on the occupied sublattice, `ξ` in sites.
    Exponential { length: f64 },
    /// Not exponentially localised (power-law or extended envelope).
    Algebraic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeState {
    pub amps: Vec<f64>,
    pub energy: f64,
    pub localisation: Localisation,
}

impl EdgeState {
    fn from_vector(mut amps: Vec<f64>, energy: f64) -> Self {
        // deterministic sign: first significant amplitude positive
        let peak = amps.iter().fold(0.0f64, |m, a| m.max(abs(*a)));
        if let Some(first) = amps.iter().find(|a| abs(**a) > 1e-12 * peak) {
            if *first < 0.0 {
                amps.iter_mut().for_each(|a| *a = -*a);
            }
        }
        let localisation = match fit_profile(&amps) {
            Ok(length) => Localisation::Exponential { length },
            Err(_) => Localisation::Algebraic,
        };
        Self {
            amps,
            energy,
            localisation,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a * a).collect()
    }
}

/// `1e-8 · ‖J‖∞`.
pub fn default_zero_tolerance(spec: &ChainSpec) -> f64 {
    1e-8 * spec.max_coupling().max(f64::MIN_POSITIVE)
}

/// The unique eigenvector with `|λ| < tol`.
///
/// `Ok(None)` when no eigenvalue is that small; [`Error::AmbiguousZeroMode`]
/// when more than one is. `tol` defaults to [`default_zero_tolerance`].
pub fn zero_energy_mode(spec: &ChainSpec, tol: Option<f64>) -> Result<Option<EdgeState>> {
    let tol = tol.unwrap_or_else(|| default_zero_tolerance(spec));
    let eig = eigensystem(spec)?;
    let zeros: Vec<usize> = (0..eig.values.len())
        .filter(|&j| abs(eig.values[j]) < tol)
        .collect();
    match zeros.as_slice() {
        [] => Ok(None),
        [j] => Ok(Some(EdgeState::from_vector(eig.vector(*j), eig.values[*j]))),
        many => Err(Error::AmbiguousZeroMode(many.len())),
    }
}

/// The eigenvector with the smallest `|λ|` (the non-negative member of a
/// `±λ` chiral pair).
pub fn near_zero_mode(spec: &ChainSpec) -> Result<EdgeState> {
    let eig = eigensystem(spec)?;
    let j = (0..eig.values.len())
        .min_by(|&a, &b| {
            abs(eig.values[a])
                .total_cmp(&abs(eig.values[b]))
                .then(eig.values[b].total_cmp(&eig.values[a]))
        })
        .ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
    Ok(EdgeState::from_vector(eig.vector(j), eig.values[j]))
}

/// Localisation length `ξ` from a least-squares fit of `ln|ψ_n|` against
/// the site index `n` on the occupied sublattice.
///
/// The fit runs from the heavier edge to the middle of the chain, stopping
/// where the amplitude reaches round-off (`1e-10` of the peak). A state
/// whose weight sits on a single site reports `ξ = 0`. Profiles that are
/// non-monotone, reappear at the far edge, or are not straight in log scale
/// return [`Error::NotExponentiallyLocalised`].
pub fn fit_localisation_length(state: &EdgeState) -> Result<f64> {
    fit_profile(&state.amps)
}

const FLOOR: f64 = 1e-10;
const FAR_EDGE_RATIO: f64 = 1e-3;
const MIN_R_SQUARED: f64 = 0.99;

fn fit_profile(amps: &[f64]) -> Result<f64> {
    let n = amps.len();
    if n == 0 {
        return Err(Error::NotExponentiallyLocalised);
    }
    let weight = |parity: usize| -> f64 {
        amps.iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == parity)
            .map(|(_, a)| a * a)
            .sum()
    };
    let parity = if weight(0) >= weight(1) { 0 } else { 1 };
    let mut sites: Vec<(usize, f64)> = amps
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == parity)
        .map(|(i, a)| (i, abs(*a)))
        .collect();
    let peak = sites.iter().fold(0.0f64, |m, s| m.max(s.1));
    if !(peak > 0.0) {
        return Err(Error::NotExponentiallyLocalised);
    }
    let left = sites.first().map_or(0.0, |s| s.1);
    let right = sites.last().map_or(0.0, |s| s.1);
    if right > left {
        sites.reverse();
    }
    let near = sites[0].1;
    let far = sites[sites.len() - 1].1;
    let edge = sites[0].0;
    if sites.len() > 1 && far > FAR_EDGE_RATIO * near {
        return Err(Error::NotExponentiallyLocalised);
    }

    let half = n.div_ceil(2);
    let window: Vec<(f64, f64)> = sites
        .iter()
        .take_while(|(i, a)| edge.abs_diff(*i) < half && *a > FLOOR * peak)
        .map(|&(i, a)| (edge.abs_diff(i) as f64, ln(a)))
        .collect();
    if window.len() < 2 {
        // everything on one site: sub-site localisation
        return Ok(0.0);
    }
    if window.windows(2).any(|w| w[1].1 > w[0].1 + 1e-9) {
        return Err(Error::NotExponentiallyLocalised);
    }

    let m = window.len() as f64;
    let mean_x = window.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = window.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = window.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = window.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = window.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::NotExponentiallyLocalised);
    }
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    if r_squared < MIN_R_SQUARED {
        return Err(Error::NotExponentiallyLocalised);
    }
    Ok(-1.0 / slope)
}

/// `ξ = 2 / ln((1+δ)/(1-δ))` for the SSH chain.
pub fn ssh_localisation_length(delta: f64) -> f64 {
    2.0 / ln((1.0 + delta) / (1.0 - delta))
}

/// Asymptotic envelope `4 / (π S √(1 - (2k/S - 1)²))` of the generalised
/// chain's zero mode; infinite at `k = 0` and `k = S`.
pub fn edge_envelope(total: usize, k: usize) -> f64 {
    let s = total as f64;
    let x = 2.0 * k as f64 / s - 1.0;
    let rad = 1.0 - x * x;
    if rad <= 0.0 {
        return f64::INFINITY;
    }
    4.0 / (PI * s * sqrt(rad))
}

/// `max |[H_BS]^Fock_{nm} - [H_XY]^Spin_{nm}|` for `φ = π/2` and the
/// generalised couplings.
pub fn photonic_equivalence_check(total: usize) -> Result<f64> {
    let photonic = hbs_matrix(total, PI / 2.0).to_dense();
    let spin = generalized_ssh_couplings(total)?.matrix().to_complex_dense();
    Ok(photonic.max_abs_diff(&spin))
}
