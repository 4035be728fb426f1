//! The limiting eigenvalue density rho(z) of the scaled truncations.
//!
//! rho(z) is the g-weighted superposition of rescaled copies of the
//! periodic density rho0:
//!
//! ```text
//! rho(z) = int g(omega) rho0(z / omega) / omega  d omega
//! ```
//!
//! taken over { omega in (0, 1] : z / omega in spec(L) }. That support set
//! is a finite union of intervals whose endpoints are exactly the case-table
//! limits z/nu_j, z/mu_j and 1; computing it once and integrating each
//! interval with tanh-sinh quadrature replaces the explicit branch
//! enumeration (which unit tests keep as a cross-check).

use rayon::prelude::*;

use crate::bands::BandStructure;
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::scaling::ScalingSpec;

/// Relative tolerance for the omega integrals.
const RHO_QUAD_TOL: f64 = 1e-8;
/// Absolute floor for the same: densities and CDFs live on an O(1) scale,
/// so slivers of the support contributing less than this are done.
const RHO_QUAD_ABS: f64 = 1e-11;

/// One omega-interval of the support, with the nature of each endpoint:
/// `singular` endpoints are where z/omega meets a band edge (inverse
/// square-root blowup of rho0), regular ones come from the clip at
/// omega = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_singular: bool,
    pub hi_singular: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OmegaSupport {
    pub intervals: Vec<OmegaInterval>,
}

/// Density curve on a z grid; `singular[i]` marks divergence points.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurve {
    pub z: Vec<f64>,
    pub rho: Vec<f64>,
    pub singular: Vec<bool>,
}

/// { omega in (0, 1] : z / omega in spec(L) } as sorted disjoint intervals.
pub fn omega_support(z: f64, bands: &BandStructure) -> Result<OmegaSupport> {
    if z == 0.0 {
        return Err(Error::ZeroNotSupported);
    }
    let mut intervals = Vec::new();
    for (mu, nu) in bands.bands() {
        let (mut lo, mut hi, mut lo_singular, mut hi_singular);
        if z > 0.0 {
            // z/omega decreases from +inf to z as omega runs over (0, 1].
            if nu <= 0.0 {
                continue;
            }
            lo = z / nu;
            lo_singular = true;
            if mu > 0.0 {
                hi = z / mu;
                hi_singular = true;
            } else {
                hi = f64::INFINITY;
                hi_singular = false;
            }
        } else {
            if mu >= 0.0 {
                continue;
            }
            lo = z / mu;
            lo_singular = true;
            if nu < 0.0 {
                hi = z / nu;
                hi_singular = true;
            } else {
                hi = f64::INFINITY;
                hi_singular = false;
            }
        }
        if hi > 1.0 {
            hi = 1.0;
            hi_singular = false;
        }
        if lo > 1.0 || hi <= lo {
            continue;
        }
        if lo < 0.0 {
            lo = 0.0;
            lo_singular = false;
        }
        intervals.push(OmegaInterval {
            lo,
            hi,
            lo_singular,
            hi_singular,
        });
    }
    intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    Ok(OmegaSupport { intervals })
}

/// Hull [min(0, mu_1), max(0, nu_t)] of the scaled support.
pub fn support_hull(bands: &BandStructure) -> (f64, f64) {
    (bands.min_edge().min(0.0), bands.max_edge().max(0.0))
}

/// The limiting density rho(z). Constant scaling delegates to rho0;
/// z = 0 is routed through `rho_at_zero`. Returns POSITIVE_INFINITY at
/// divergence points.
pub fn rho(z: f64, bands: &BandStructure, scaling: &ScalingSpec) -> Result<f64> {
    if matches!(scaling, ScalingSpec::Constant) {
        return Ok(bands.rho0(z));
    }
    if z == 0.0 {
        return Ok(rho_at_zero(bands, scaling));
    }
    let (zmin, zmax) = support_hull(bands);
    let span = (zmax - zmin).max(1e-300);
    if z < zmin || z > zmax {
        return Ok(0.0);
    }
    // Evaluation exactly at a hull edge takes the one-sided limit just
    // inside; the edge value itself is finite there.
    let mut z = z;
    if zmax != 0.0 && (z - zmax).abs() <= 1e-12 * span {
        z = zmax - 1e-9 * span;
    } else if zmin != 0.0 && (z - zmin).abs() <= 1e-12 * span {
        z = zmin + 1e-9 * span;
    }

    let support = omega_support(z, bands)?;
    let mut total = 0.0;
    for iv in &support.intervals {
        let q = tanh_sinh(
            |w| scaling.g_unchecked(w) * bands.rho0_interior(z / w) / w,
            iv.lo,
            iv.hi,
            RHO_QUAD_TOL,
            RHO_QUAD_ABS,
        );
        if !q.converged {
            return Err(Error::NonconvergedQuadrature {
                at: Some(z),
                estimate: q.value,
                error: q.abs_error,
            });
        }
        total += q.value;
    }
    Ok(total)
}

/// rho at z = 0: zero when 0 is off the spectrum of L, otherwise
/// rho0(0) int g(omega)/omega d omega, which is finite exactly when that
/// integral converges (power scaling: gamma < 1).
pub fn rho_at_zero(bands: &BandStructure, scaling: &ScalingSpec) -> f64 {
    if !bands.contains(0.0) {
        return 0.0;
    }
    let r0 = bands.rho0(0.0);
    match scaling {
        ScalingSpec::Constant => r0,
        ScalingSpec::Power { gamma } => {
            if *gamma < 1.0 {
                r0 / (1.0 - gamma)
            } else {
                f64::INFINITY
            }
        }
        ScalingSpec::Table { points } => {
            // g/omega is finite on the table's support (omega > 0).
            let mut acc = 0.0;
            for pair in points.windows(2) {
                let [w0, g0] = pair[0];
                let [w1, g1] = pair[1];
                acc += 0.5 * (g0 / w0 + g1 / w1) * (w1 - w0);
            }
            r0 * acc
        }
    }
}

/// The elementary phi(n) = n densities for t = 1, in the variables
/// a = a_0, b = 2 b_0 (Meixner-Pollaczek for a < b, Meixner for a > b).
/// Degenerate at a = b.
pub fn rho_closed_form_linear(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a >= 0.0 && b > 0.0) {
        return Err(Error::config(
            "a",
            "closed form expects a >= 0 and b > 0",
        ));
    }
    if a == b {
        return Err(Error::DegenerateClosedForm);
    }
    // keep r^2 = |a^2 - b^2| exact; sqrt-then-square loses an ulp that
    // matters right at the support edges
    let r2 = (a * a - b * b).abs();
    let r = r2.sqrt();
    let pi = std::f64::consts::PI;
    if a < b {
        if z < a - b || z > a + b {
            return Ok(0.0);
        }
        if z == 0.0 {
            return Ok(f64::INFINITY);
        }
        let arg = (r2 / (z * b) + a / b).abs().max(1.0);
        Ok(arg.acosh() / (pi * r))
    } else {
        if z < 0.0 || z > a + b {
            return Ok(0.0);
        }
        if z <= a - b {
            return Ok(1.0 / r);
        }
        let arg = (-r2 / (z * b) + a / b).clamp(-1.0, 1.0);
        Ok(arg.acos() / (pi * r))
    }
}

/// Uniform-grid sweep of rho; parallel over z, assembled by index.
pub fn rho_curve(
    bands: &BandStructure,
    scaling: &ScalingSpec,
    zmin: f64,
    zmax: f64,
    npoints: usize,
) -> Result<DensityCurve> {
    if !(zmin < zmax) || npoints < 2 {
        return Err(Error::config(
            "grid",
            format!("need zmin < zmax and npoints >= 2, got [{zmin}, {zmax}] x {npoints}"),
        ));
    }
    let step = (zmax - zmin) / (npoints - 1) as f64;
    let z: Vec<f64> = (0..npoints).map(|i| zmin + step * i as f64).collect();
    let rho_vals: Result<Vec<f64>> = z
        .par_iter()
        .map(|&zi| rho(zi, bands, scaling))
        .collect();
    let rho_vals = rho_vals?;
    let singular = rho_vals.iter().map(|v| v.is_infinite()).collect();
    Ok(DensityCurve {
        z,
        rho: rho_vals,
        singular,
    })
}

/// CDF of rho0 in closed form: on each band S is monotone between -2 and
/// +2, so the band fraction below x is an arcsine of S(x)/2.
pub fn rho0_cdf(bands: &BandStructure, x: f64) -> f64 {
    let t = bands.period() as f64;
    let pi = std::f64::consts::PI;
    let mut acc = 0.0;
    for (mu, nu) in bands.bands() {
        if x >= nu {
            acc += 1.0 / t;
        } else if x > mu {
            let s_mu = bands.discriminant().eval(mu);
            let sv = (bands.discriminant().eval(x) / 2.0).clamp(-1.0, 1.0);
            // S runs from s_mu (+-2) to -s_mu across the band.
            let frac = if s_mu >= 0.0 {
                (std::f64::consts::FRAC_PI_2 - sv.asin()) / pi
            } else {
                (sv.asin() + std::f64::consts::FRAC_PI_2) / pi
            };
            acc += frac / t;
        }
    }
    acc
}

/// CDF of rho: F(z) = int_0^1 g(omega) F0(z/omega) d omega, split at the
/// omega values where z/omega crosses a band edge.
pub fn rho_cdf(z: f64, bands: &BandStructure, scaling: &ScalingSpec) -> Result<f64> {
    if matches!(scaling, ScalingSpec::Constant) {
        return Ok(rho0_cdf(bands, z));
    }
    let (zmin, zmax) = support_hull(bands);
    if z >= zmax {
        return Ok(1.0);
    }
    if z <= zmin {
        return Ok(0.0);
    }
    if z == 0.0 {
        // F(0) = fraction of rho0 mass below 0 (every omega-copy scales
        // around the origin without moving mass across it).
        return Ok(rho0_cdf(bands, 0.0));
    }
    let mut breaks = vec![0.0, 1.0];
    for e in bands.edges() {
        if z.signum() == e.signum() {
            let w = z / e;
            if w > 0.0 && w < 1.0 {
                breaks.push(w);
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        let q = tanh_sinh(
            |w| scaling.g_unchecked(w) * rho0_cdf(bands, z / w),
            lo,
            hi,
            RHO_QUAD_TOL,
            RHO_QUAD_ABS,
        );
        if !q.converged {
            return Err(Error::NonconvergedQuadrature {
                at: Some(z),
                estimate: q.value,
                error: q.abs_error,
            });
        }
        total += q.value;
    }
    Ok(total.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::band_structure;
    use crate::coeffs::PeriodicCoefficients;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn bands_for(a: &[f64], b: &[f64]) -> BandStructure {
        band_structure(&PeriodicCoefficients::new(a.to_vec(), b.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn support_free_matrix() {
        let b = bands_for(&[0.0], &[1.0]);
        let s = omega_support(1.0, &b).unwrap();
        assert_eq!(s.intervals.len(), 1);
        let iv = s.intervals[0];
        assert!((iv.lo - 0.5).abs() < 1e-15);
        assert!((iv.hi - 1.0).abs() < 1e-15);
        assert!(iv.lo_singular);
        assert!(!iv.hi_singular);
    }

    #[test]
    fn support_period_two() {
        let b = bands_for(&[0.0, 0.0], &[1.0, 2.0]);
        let s = omega_support(0.5, &b).unwrap();
        assert_eq!(s.intervals.len(), 1);
        let iv = s.intervals[0];
        assert!((iv.lo - 0.5 / 3.0).abs() < 1e-12);
        assert!((iv.hi - 0.5).abs() < 1e-12);
        assert!(iv.lo_singular && iv.hi_singular);
    }

    #[test]
    fn support_outside() {
        let b = bands_for(&[0.0], &[1.0]);
        let s = omega_support(5.0, &b).unwrap();
        assert!(s.intervals.is_empty());
        assert!(omega_support(0.0, &b).is_err());
    }

    #[test]
    fn rho_matches_arccosh_value() {
        // t=1, a0=0, b0=1 (closed-form variables a=0, b=2), gamma=1, z=1
        let b = bands_for(&[0.0], &[1.0]);
        let v = rho(1.0, &b, &ScalingSpec::power(1.0)).unwrap();
        let expect = 2.0_f64.acosh() / (2.0 * PI);
        assert!((v - expect).abs() < 1e-8, "{v} vs {expect}");
    }

    #[test]
    fn rho_plateau_value() {
        // t=1, a0=3, b0=0.5 (closed-form variables a=3, b=1), gamma=1, z=0.5 -> 1/sqrt(8)
        let b = bands_for(&[3.0], &[0.5]);
        let v = rho(0.5, &b, &ScalingSpec::power(1.0)).unwrap();
        let expect = 1.0 / 8.0_f64.sqrt();
        assert!((v - expect).abs() < 1e-7, "{v} vs {expect}");
    }

    #[test]
    fn rho_outside_support() {
        let b = bands_for(&[0.0], &[1.0]);
        assert_eq!(rho(5.0, &b, &ScalingSpec::power(1.0)).unwrap(), 0.0);
        assert_eq!(rho(-9.0, &b, &ScalingSpec::power(2.0)).unwrap(), 0.0);
    }

    #[test]
    fn rho_constant_delegates_to_rho0() {
        let b = bands_for(&[0.0, 0.0], &[1.0, 2.0]);
        for z in [-2.5, -1.3, 0.0, 0.4, 1.7, 2.9] {
            assert_eq!(rho(z, &b, &ScalingSpec::Constant).unwrap(), b.rho0(z));
        }
    }

    #[test]
    fn rho_at_zero_cases() {
        let gap = bands_for(&[0.0, 0.0], &[1.0, 2.0]);
        assert_eq!(rho_at_zero(&gap, &ScalingSpec::power(1.0)), 0.0);

        let free = bands_for(&[0.0], &[1.0]);
        let v = rho_at_zero(&free, &ScalingSpec::power(0.5));
        assert!((v - 1.0 / PI).abs() < 1e-12, "{v}");
        assert!(rho_at_zero(&free, &ScalingSpec::power(1.0)).is_infinite());
        assert!(rho_at_zero(&free, &ScalingSpec::power(2.0)).is_infinite());
    }

    #[test]
    fn closed_form_values() {
        let v = rho_closed_form_linear(0.0, 2.0, 1.0).unwrap();
        assert!((v - 2.0_f64.acosh() / (2.0 * PI)).abs() < 1e-12);

        let v = rho_closed_form_linear(3.0, 1.0, 1.0).unwrap();
        assert!((v - 1.0 / 8.0_f64.sqrt()).abs() < 1e-15);

        // hard upper edge of the Meixner case
        let v = rho_closed_form_linear(3.0, 1.0, 4.0).unwrap();
        assert!(v.abs() < 1e-12);

        assert!(matches!(
            rho_closed_form_linear(1.0, 1.0, 0.5),
            Err(Error::DegenerateClosedForm)
        ));
    }

    #[test]
    fn curve_constant_scaling_is_arcsine() {
        let b = bands_for(&[0.0], &[1.0]);
        let c = rho_curve(&b, &ScalingSpec::Constant, -2.0, 2.0, 5).unwrap();
        assert!(c.singular[0] && c.singular[4]);
        assert!((c.rho[1] - 1.0 / (PI * 3.0_f64.sqrt())).abs() < 1e-12);
        assert!((c.rho[2] - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((c.rho[3] - c.rho[1]).abs() < 1e-12);
    }

    #[test]
    fn curve_outside_support_is_zero() {
        let b = bands_for(&[0.0], &[1.0]);
        let c = rho_curve(&b, &ScalingSpec::power(1.0), 5.0, 9.0, 7).unwrap();
        assert!(c.rho.iter().all(|&v| v == 0.0));
        assert!(c.singular.iter().all(|&s| !s));
    }

    #[test]
    fn curve_matches_closed_form() {
        // t=1 a0=0 b0=1 <-> (a, b) = (0, 2), gamma = 1
        let b = bands_for(&[0.0], &[1.0]);
        let c = rho_curve(&b, &ScalingSpec::power(1.0), 0.1, 1.9, 19).unwrap();
        for (zi, v) in c.z.iter().zip(&c.rho) {
            let expect = rho_closed_form_linear(0.0, 2.0, *zi).unwrap();
            assert!((v - expect).abs() < 1e-6, "z={zi}: {v} vs {expect}");
        }
    }

    #[test]
    fn symmetry_for_zero_diagonal() {
        let b = bands_for(&[0.0, 0.0], &[1.0, 2.0]);
        let s = ScalingSpec::power(1.5);
        for z in [0.3, 0.9, 1.4, 2.2, 2.8] {
            let plus = rho(z, &b, &s).unwrap();
            let minus = rho(-z, &b, &s).unwrap();
            assert!((plus - minus).abs() < 1e-9, "z={z}: {plus} vs {minus}");
        }
    }

    /// Enumerate the case-by-case interval limits directly and compare
    /// with the unified support construction.
    fn branch_intervals(z: f64, bands: &BandStructure) -> Vec<(f64, f64)> {
        let t = bands.period();
        let edges = bands.edges();
        let mu = |j: usize| edges[2 * (j - 1)];
        let nu = |j: usize| edges[2 * (j - 1) + 1];
        let mut out = Vec::new();
        if z > 0.0 {
            // locate z among the nonnegative bands/gaps
            let mut in_band = None;
            for j in 1..=t {
                if z >= mu(j) && z <= nu(j) {
                    in_band = Some(j);
                }
            }
            let start = if let Some(i) = in_band {
                out.push((z / nu(i), 1.0));
                i + 1
            } else {
                // first band entirely above z
                let mut k = t + 1;
                for j in (1..=t).rev() {
                    if mu(j) > z {
                        k = j;
                    }
                }
                k
            };
            for j in start..=t {
                out.push((z / nu(j), z / mu(j)));
            }
        } else {
            let mut in_band = None;
            for j in 1..=t {
                if z >= mu(j) && z <= nu(j) {
                    in_band = Some(j);
                }
            }
            let end = if let Some(i) = in_band {
                out.push((z / mu(i), 1.0));
                i - 1
            } else {
                let mut k = 0;
                for j in 1..=t {
                    if nu(j) < z {
                        k = j;
                    }
                }
                k
            };
            for j in 1..=end {
                out.push((z / mu(j), z / nu(j)));
            }
        }
        out.retain(|(lo, hi)| *lo <= 1.0 && hi > lo);
        let mut out: Vec<(f64, f64)> = out
            .into_iter()
            .map(|(lo, hi)| (lo, hi.min(1.0)))
            .collect();
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    #[test]
    fn case_table_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 20 {
            let t = rng.gen_range(1..=3usize);
            let a: Vec<f64> = (0..t).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let b: Vec<f64> = (0..t)
                .map(|_| {
                    let v: f64 = rng.gen_range(0.3..2.0);
                    if rng.gen_bool(0.5) {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            let Ok(coeffs) = PeriodicCoefficients::new(a, b) else {
                continue;
            };
            let Ok(bs) = band_structure(&coeffs) else {
                continue;
            };
            // skip degenerate geometries (edges near 0 or touching bands)
            let span = bs.span();
            if bs.edges().iter().any(|e| e.abs() < 0.05 * span) {
                continue;
            }
            let (zmin, zmax) = support_hull(&bs);
            let z = rng.gen_range(zmin..zmax);
            if z.abs() < 0.02 * span
                || bs.edges().iter().any(|e| (z - e).abs() < 0.02 * span)
            {
                continue;
            }
            let unified = omega_support(z, &bs).unwrap();
            let branches = branch_intervals(z, &bs);
            assert_eq!(
                unified.intervals.len(),
                branches.len(),
                "interval count for z={z}, edges={:?}",
                bs.edges()
            );
            for (iv, (lo, hi)) in unified.intervals.iter().zip(&branches) {
                assert!((iv.lo - lo).abs() <= 1e-12 * lo.abs().max(1.0));
                assert!((iv.hi - hi).abs() <= 1e-12 * hi.abs().max(1.0));
            }
            checked += 1;
        }
    }

    #[test]
    fn cdf_monotone_and_normalized() {
        let b = bands_for(&[0.0], &[1.0]);
        let s = ScalingSpec::power(1.0);
        let mut prev = 0.0;
        for i in 0..=40 {
            let z = -2.0 + 4.0 * i as f64 / 40.0;
            let f = rho_cdf(z, &b, &s).unwrap();
            assert!(f >= prev - 1e-9, "CDF not monotone at z={z}");
            prev = f;
        }
        assert!((rho_cdf(2.0, &b, &s).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(rho_cdf(-2.0, &b, &s).unwrap(), 0.0);
        // symmetry: F(0) = 1/2
        let f0 = rho_cdf(0.0, &b, &s).unwrap();
        assert!((f0 - 0.5).abs() < 1e-9, "F(0) = {f0}");
    }

    #[test]
    fn cdf_matches_density_integral() {
        let b = bands_for(&[3.0], &[0.5]);
        let s = ScalingSpec::power(1.0);
        for z in [0.5, 1.5, 2.5, 3.5] {
            let direct = rho_cdf(z, &b, &s).unwrap();
            // integrate rho piecewise, splitting at the kink z = a - b = 2
            let f = |x: f64| rho(x, &b, &s).unwrap_or(0.0);
            let mid = z.min(2.0);
            let mut mass = tanh_sinh(f, 0.0, mid, 1e-9, 1e-12).value;
            if z > mid {
                mass += tanh_sinh(f, mid, z, 1e-9, 1e-12).value;
            }
            assert!(
                (direct - mass).abs() < 1e-6,
                "z={z}: {direct} vs {mass}"
            );
        }
    }
}
