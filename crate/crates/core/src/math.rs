//! Float helpers routed through `libm` so the crate builds without `std`.

pub(crate) use libm::{asin, asinh, cos, cosh, exp, fabs as abs, lgamma, log as ln, sin, sinh, sqrt, tanh};

pub(crate) const PI: f64 = core::f64::consts::PI;

/// `ln C(n, k)`.
pub(crate) fn ln_choose(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    lgamma(n as f64 + 1.0) - lgamma(k as f64 + 1.0) - lgamma((n - k) as f64 + 1.0)
}

/// Binomial probability mass `C(n, k) p^k (1-p)^(n-k)`, exact at `p ∈ {0, 1}`.
pub(crate) fn binomial_pmf(n: usize, k: usize, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    exp(ln_choose(n, k) + k as f64 * ln(p) + (n - k) as f64 * ln(1.0 - p))
}

/// `x^n` for small non-negative integer `n`, with `0^0 = 1`.
pub(crate) fn powi(x: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}
