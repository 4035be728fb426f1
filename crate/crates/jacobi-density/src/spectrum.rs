//! Brute-force spectra of finite tridiagonal matrices by Sturm-sequence
//! bisection, plus the empirical-vs-theoretical distribution metrics.

use rayon::prelude::*;

use crate::bands::BandStructure;
use crate::coeffs::{build_truncated, PeriodicCoefficients, TridiagonalMatrix};
use crate::density::rho_cdf;
use crate::error::Result;
use crate::scaling::ScalingSpec;

/// Sorted eigenvalues of J(n)/phi(n-1).
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub values: Vec<f64>,
    pub n: usize,
    pub t: usize,
}

/// Number of eigenvalues strictly below `lambda`, via the signs of the
/// LDLT pivots of T - lambda I.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < 1e-300 {
            if q >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - offdiag[i - 1] * offdiag[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues, sorted ascending. Each eigenvalue is found by an
/// independent index-range bisection to absolute tolerance
/// 1e-12 max(1, ||T||_inf); degenerate clusters come out as repeated
/// values.
pub fn eigenvalues(m: &TridiagonalMatrix) -> Vec<f64> {
    let n = m.dim();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m.diag[0]];
    }
    // Gershgorin bounds
    let max_off = m.offdiag.iter().fold(0.0_f64, |acc, e| acc.max(e.abs()));
    let lo = m.diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * max_off;
    let hi = m.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * max_off;
    let tol = 1e-12 * m.inf_norm().max(1.0);

    (0..n)
        .into_par_iter()
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break; // interval at floating-point resolution
                }
                if sturm_count(&m.diag, &m.offdiag, mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Eigenvalues of J(n)/phi(n-1), the scaled truncation spectrum.
pub fn scaled_spectrum(
    coeffs: &PeriodicCoefficients,
    scaling: &ScalingSpec,
    n: usize,
) -> Result<SpectrumResult> {
    let scale = scaling.phi_of(n.saturating_sub(1))?;
    let m = build_truncated(coeffs, scaling, n)?;
    let mut values = eigenvalues(&m);
    for v in &mut values {
        *v /= scale;
    }
    Ok(SpectrumResult {
        values,
        n,
        t: coeffs.period(),
    })
}

/// Kolmogorov-Smirnov distance between the empirical distribution of the
/// computed eigenvalues and the CDF of the limiting density rho.
pub fn ks_distance(
    spec: &SpectrumResult,
    bands: &BandStructure,
    scaling: &ScalingSpec,
) -> Result<f64> {
    let n = spec.values.len();
    let cdf: Result<Vec<f64>> = spec
        .values
        .par_iter()
        .map(|&z| rho_cdf(z, bands, scaling))
        .collect();
    let cdf = cdf?;
    let mut d = 0.0_f64;
    for (i, f) in cdf.iter().enumerate() {
        let below = i as f64 / n as f64;
        let above = (i + 1) as f64 / n as f64;
        d = d.max(f - below).max(above - f);
    }
    Ok(d)
}

/// Histogram normalized as a density: each bin carries
/// count / (N * width), so it integrates to the in-range eigenvalue
/// fraction. Returns (bin center, density) pairs.
pub fn histogram(
    spec: &SpectrumResult,
    nbins: usize,
    lo: f64,
    hi: f64,
) -> Vec<(f64, f64)> {
    assert!(nbins >= 1 && lo < hi);
    let width = (hi - lo) / nbins as f64;
    let n = spec.values.len().max(1);
    let mut counts = vec![0usize; nbins];
    for &v in &spec.values {
        if v >= lo && v <= hi {
            let idx = (((v - lo) / width) as usize).min(nbins - 1);
            counts[idx] += 1;
        }
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let center = lo + (i as f64 + 0.5) * width;
            (center, c as f64 / (n as f64 * width))
        })
        .collect()
}
