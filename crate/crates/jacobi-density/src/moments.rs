//! Moment oracles: K_M (periodic matrix), the omega factor, their product
//! m_M, the empirical finite-n average, and the direct moment of rho.
//!
//! K_M is computed two independent ways: exactly, as the averaged diagonal
//! of L^M on a finite window wide enough that the power never reaches the
//! boundary; and by quadrature of x^M rho0(x) over the bands. The identity
//! m_M = K_M int omega^M g = int z^M rho(z) dz is the crate's strongest
//! end-to-end consistency check.

use crate::bands::BandStructure;
use crate::coeffs::{build_periodic_window, PeriodicCoefficients};
use crate::density::{rho, support_hull};
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::scaling::ScalingSpec;
use crate::spectrum::SpectrumResult;

/// One row of the moment table.
#[derive(Clone, Copy, Debug)]
pub struct MomentReport {
    pub order: u32,
    pub k_m: f64,
    pub omega_factor: f64,
    pub m_theory: f64,
    pub m_empirical: Option<f64>,
    pub abs_error: Option<f64>,
}

/// K_M = lim (1/nt) sum_j (L^M e_j, e_j), computed exactly as the averaged
/// diagonal of L^M over one period of a finite window. The window halfwidth
/// M + 1 + t guarantees the repeated matrix-vector products never touch the
/// boundary, so the result equals the bi-infinite value.
pub fn periodic_moment(coeffs: &PeriodicCoefficients, order: u32) -> f64 {
    let t = coeffs.period();
    let m = order as usize;
    let halfwidth = m + 1 + t;
    let window = build_periodic_window(coeffs, halfwidth);
    let dim = window.dim();
    // center aligned to phase 0 of the period
    let center = halfwidth + (t - halfwidth % t) % t;
    let mut acc = 0.0;
    let mut v = vec![0.0; dim];
    let mut w = vec![0.0; dim];
    for i in 0..t {
        v.iter_mut().for_each(|x| *x = 0.0);
        v[center + i] = 1.0;
        for _ in 0..m {
            window.matvec(&v, &mut w);
            std::mem::swap(&mut v, &mut w);
        }
        debug_assert_eq!(v[0], 0.0, "power vector reached the window boundary");
        debug_assert_eq!(v[dim - 1], 0.0, "power vector reached the window boundary");
        acc += v[center + i];
    }
    acc / t as f64
}

/// Second, independent route: K_M = int x^M rho0(x) dx by band-wise
/// quadrature.
pub fn periodic_moment_quadrature(bands: &BandStructure, order: u32) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..bands.period() {
        acc += bands.band_weighted_integral(i, |x| x.powi(order as i32))?;
    }
    Ok(acc)
}

/// m_M = K_M int_0^1 omega^M g(omega) d omega.
pub fn theorem_moment(coeffs: &PeriodicCoefficients, scaling: &ScalingSpec, order: u32) -> f64 {
    periodic_moment(coeffs, order) * scaling.omega_moment(order)
}

/// (1/nt) sum z_k^M over the computed scaled eigenvalues.
pub fn empirical_moment(spec: &SpectrumResult, order: u32) -> f64 {
    if spec.values.is_empty() {
        return 0.0;
    }
    let sum: f64 = spec
        .values
        .iter()
        .map(|z| z.powi(order as i32))
        .sum();
    sum / spec.values.len() as f64
}

/// int z^M rho(z) dz over the scaled support, split at z = 0 and at every
/// band edge inside the hull (the kink and divergence points of rho).
pub fn density_moment(
    bands: &BandStructure,
    scaling: &ScalingSpec,
    order: u32,
) -> Result<f64> {
    let (zmin, zmax) = support_hull(bands);
    let mut breaks = vec![zmin, zmax];
    for &e in bands.edges() {
        if e > zmin && e < zmax {
            breaks.push(e);
        }
    }
    if zmin < 0.0 && zmax > 0.0 {
        breaks.push(0.0);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (zmax - zmin));

    let mut acc = 0.0;
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let q = tanh_sinh(
            |z| z.powi(order as i32) * rho(z, bands, scaling).unwrap_or(f64::NAN),
            lo,
            hi,
            1e-7,
            1e-10,
        );
        if !q.converged {
            return Err(Error::NonconvergedQuadrature {
                at: Some(0.5 * (lo + hi)),
                estimate: q.value,
                error: q.abs_error,
            });
        }
        acc += q.value;
    }
    Ok(acc)
}

/// Assemble the full moment table for orders 0..=max_order.
pub fn moment_table(
    coeffs: &PeriodicCoefficients,
    scaling: &ScalingSpec,
    max_order: u32,
    empirical: Option<&SpectrumResult>,
) -> Vec<MomentReport> {
    (0..=max_order)
        .map(|order| {
            let k_m = periodic_moment(coeffs, order);
            let omega_factor = scaling.omega_moment(order);
            let m_theory = k_m * omega_factor;
            let m_empirical = empirical.map(|s| empirical_moment(s, order));
            let abs_error = m_empirical.map(|e| (e - m_theory).abs());
            MomentReport {
                order,
                k_m,
                omega_factor,
                m_theory,
                m_empirical,
                abs_error,
            }
        })
        .collect()
}
