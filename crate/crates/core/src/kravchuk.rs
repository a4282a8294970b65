//! Kravchuk functions and beam-splitter transition amplitudes.
//!
//! The orthonormal Kravchuk function
//!
//! ```text
//! φ_k^{(r)}(l - S r, S) = (-1)^k √(C(S,l) C(S,k)) √((1-r)^{S-l-k} r^{l+k}) ₂F₁[-k, -l; -S; 1/r]
//! ```
//!
//! is the real part of the beam-splitter kernel in the Fock basis. The
//! terminating hypergeometric sum cancels catastrophically once `S` passes
//! about 30, so [`kravchuk_column`] evaluates it instead as an eigenvector of
//! the Jacobi matrix
//!
//! ```text
//! J[k][k]   = r S + k (1 - 2r)
//! J[k][k+1] = √((k+1)(S-k) r (1-r))
//! ```
//!
//! whose eigenvalue `l` owns column `l` of the Kravchuk matrix. The column is
//! built by two three-term recurrences, forward from `k = 0` and backward from
//! `k = S`, spliced inside the oscillatory region where both are stable, and
//! normalised at the end. `φ_0` is always positive, which pins the sign.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::DenseMatrix;
use crate::math::{abs, asin, exp, ln, ln_choose, sqrt, PI};
use crate::{Error, Result};

/// Arguments of `φ_k^{(r)}(l - S r, S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KravchukParams {
    /// Total photon number `S`.
    pub total: usize,
    /// Reflectivity `r ∈ [0, 1]`.
    pub reflectivity: f64,
    /// Output index `k`.
    pub output: usize,
    /// Input index `l`.
    pub input: usize,
}

impl KravchukParams {
    pub fn new(total: usize, reflectivity: f64, output: usize, input: usize) -> Result<Self> {
        let p = Self {
            total,
            reflectivity,
            output,
            input,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_reflectivity(self.reflectivity)?;
        check_index(self.output, self.total)?;
        check_index(self.input, self.total)
    }

    /// The lattice argument `x = l - S r`.
    pub fn argument(&self) -> f64 {
        self.input as f64 - self.total as f64 * self.reflectivity
    }
}

/// A beam-splitter probability amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude(pub Complex64);

impl Amplitude {
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn probability(self) -> f64 {
        self.0.norm_sqr()
    }
}

pub(crate) fn check_reflectivity(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Reflectivity(r))
    }
}

pub(crate) fn check_index(index: usize, total: usize) -> Result<()> {
    if index <= total {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, total })
    }
}

/// `φ_k^{(r)}(l - S r, S)` by the stable recurrence.
pub fn kravchuk_function(p: &KravchukParams) -> Result<f64> {
    p.validate()?;
    Ok(kravchuk_column(p.total, p.reflectivity, p.input)?[p.output])
}

/// Column `l` of the Kravchuk matrix: `[φ_k^{(r)}(l - S r, S) for k in 0..=S]`.
///
/// At `r = 0` this is `e_l`; at `r = 1` it is `(-1)^{S-l} e_{S-l}`, the limit
/// of the closed form.
pub fn kravchuk_column(total: usize, r: f64, input: usize) -> Result<Vec<f64>> {
    check_reflectivity(r)?;
    check_index(input, total)?;
    let n = total + 1;
    let mut col = vec![0.0; n];
    if r == 0.0 {
        col[input] = 1.0;
        return Ok(col);
    }
    if r == 1.0 {
        let k = total - input;
        col[k] = if k % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(col);
    }
    if total == 0 {
        col[0] = 1.0;
        return Ok(col);
    }
    Ok(stable_column(total, r, input))
}

/// The full `(S+1)×(S+1)` matrix `M[k][l] = φ_k^{(r)}(l - S r, S)`.
pub fn kravchuk_matrix(total: usize, r: f64) -> Result<DenseMatrix<f64>> {
    check_reflectivity(r)?;
    let n = total + 1;
    let mut m = DenseMatrix::zeros(n, n);
    for l in 0..n {
        let col = kravchuk_column(total, r, l)?;
        for (k, v) in col.into_iter().enumerate() {
            m[(k, l)] = v;
        }
    }
    Ok(m)
}

// Values beyond this are folded back to keep the recurrences finite.
const RESCALE_LIMIT: f64 = 1e150;

fn stable_column(total: usize, r: f64, input: usize) -> Vec<f64> {
    let s = total as f64;
    let lambda = input as f64;
    let diag = |k: usize| r * s + k as f64 * (1.0 - 2.0 * r);
    let off: Vec<f64> = (0..total)
        .map(|k| sqrt((k as f64 + 1.0) * (s - k as f64) * r * (1.0 - r)))
        .collect();

    let m = splice_point(total, lambda, &diag, &off);

    // Forward: f_0 = 1, valid (up to scale) through the splice pair (m, m+1).
    let mut fwd = vec![0.0; m + 2];
    fwd[0] = 1.0;
    fwd[1] = (lambda - diag(0)) / off[0];
    for k in 1..=m {
        fwd[k + 1] = ((lambda - diag(k)) * fwd[k] - off[k - 1] * fwd[k - 1]) / off[k];
        if too_big(fwd[k + 1]) {
            fwd[..=k + 1].iter_mut().for_each(|x| *x /= RESCALE_LIMIT);
        }
    }

    // Backward: g_S = 1, valid down to m.
    let mut bwd = vec![0.0; total + 1];
    bwd[total] = 1.0;
    bwd[total - 1] = (lambda - diag(total)) / off[total - 1];
    let mut k = total - 1;
    while k > m {
        bwd[k - 1] = ((lambda - diag(k)) * bwd[k] - off[k] * bwd[k + 1]) / off[k - 1];
        if too_big(bwd[k - 1]) {
            bwd[k - 1..].iter_mut().for_each(|x| *x /= RESCALE_LIMIT);
        }
        k -= 1;
    }

    // Least-squares scale over the pair (m, m+1); consecutive entries of an
    // eigenvector of an unreduced tridiagonal matrix never vanish together.
    let num = fwd[m] * bwd[m] + fwd[m + 1] * bwd[m + 1];
    let den = bwd[m] * bwd[m] + bwd[m + 1] * bwd[m + 1];
    let scale = num / den;

    let mut col = Vec::with_capacity(total + 1);
    col.extend_from_slice(&fwd[..=m]);
    col.extend(bwd[m + 1..].iter().map(|g| g * scale));

    let norm = sqrt(col.iter().map(|x| x * x).sum());
    col.iter_mut().for_each(|x| *x /= norm);
    col
}

fn too_big(x: f64) -> bool {
    abs(x) > RESCALE_LIMIT
}

/// Middle of the classically allowed band `(λ - J_kk)² ≤ 4 b̄_k²`, clamped so
/// that `(m, m+1)` is a valid pair.
fn splice_point(total: usize, lambda: f64, diag: &impl Fn(usize) -> f64, off: &[f64]) -> usize {
    let local_coupling = |k: usize| {
        let left = if k > 0 { off[k - 1] } else { 0.0 };
        let right = if k < total { off[k] } else { 0.0 };
        0.5 * (left + right)
    };
    let excess = |k: usize| {
        let gap = lambda - diag(k);
        gap * gap - 4.0 * local_coupling(k) * local_coupling(k)
    };
    let allowed: Vec<usize> = (0..=total).filter(|&k| excess(k) <= 0.0).collect();
    let m = match (allowed.first(), allowed.last()) {
        (Some(&lo), Some(&hi)) => (lo + hi) / 2,
        _ => (0..=total)
            .min_by(|&a, &b| excess(a).total_cmp(&excess(b)))
            .unwrap_or(0),
    };
    m.min(total - 1)
}

/// Reference evaluation by the terminating ₂F₁ sum.
///
/// Exact in exact arithmetic but cancels badly for `S ≳ 30`; kept for small
/// `S` cross-checks. Requires `0 < r < 1`.
pub fn kravchuk_hypergeometric(p: &KravchukParams) -> Result<f64> {
    p.validate()?;
    let r = p.reflectivity;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Reflectivity(r));
    }
    let (s, k, l) = (p.total, p.output, p.input);
    // ₂F₁[-k, -l; -S; z] = Σ_j (-k)_j (-l)_j / ((-S)_j j!) z^j
    let z = 1.0 / r;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..k.min(l) {
        let jf = j as f64;
        term *= (jf - k as f64) * (jf - l as f64) / ((jf - s as f64) * (jf + 1.0)) * z;
        sum += term;
    }
    let log_weight = 0.5
        * (ln_choose(s, l)
            + ln_choose(s, k)
            + (s as f64 - l as f64 - k as f64) * ln(1.0 - r)
            + (l + k) as f64 * ln(r));
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * exp(log_weight) * sum)
}

/// Mixing angle `θ = 2 arcsin √r`.
pub fn mixing_angle(r: f64) -> f64 {
    2.0 * asin(sqrt(r))
}

/// `𝒜_S^{(r,φ)}(k, l) = e^{-iθS/2} e^{iφ(l-k)} (-1)^{k+l} φ_k^{(r)}(l - S r, S)`.
pub fn bs_amplitude(total: usize, r: f64, phi: f64, output: usize, input: usize) -> Result<Amplitude> {
    let p = KravchukParams::new(total, r, output, input)?;
    let value = kravchuk_function(&p)?;
    Ok(Amplitude(amplitude_phase(total, r, phi, output, input) * value))
}

/// The phase factor multiplying the Kravchuk function in [`bs_amplitude`].
pub(crate) fn amplitude_phase(total: usize, r: f64, phi: f64, output: usize, input: usize) -> Complex64 {
    let theta = mixing_angle(r);
    let sign = if (output + input) % 2 == 0 { 1.0 } else { -1.0 };
    let angle = -theta * total as f64 / 2.0 + phi * (input as f64 - output as f64);
    Complex64::from_polar(sign, angle)
}

/// The unitary `A[k][l] = 𝒜_S^{(r,φ)}(k, l)`.
pub fn amplitude_matrix(total: usize, r: f64, phi: f64) -> Result<DenseMatrix<Complex64>> {
    let m = kravchuk_matrix(total, r)?;
    Ok(DenseMatrix::from_fn(total + 1, total + 1, |k, l| {
        amplitude_phase(total, r, phi, k, l) * m[(k, l)]
    }))
}

/// Fractionality `α = 4 arcsin(√r) / π` of the Kravchuk–Fourier transform
/// realised by a beam splitter of reflectivity `r`.
pub fn fractional_qkt_order(r: f64) -> Result<f64> {
    check_reflectivity(r)?;
    Ok(4.0 * asin(sqrt(r)) / PI)
}
