//! The scaling function phi, represented through the density g(omega) of its
//! limit profile on (0, 1].
//!
//! `Constant` models phi(n) = 1 (asymptotically periodic matrices); its g is
//! a unit point mass at omega = 1, so the limiting density collapses to the
//! periodic density rho0. `Power` is phi(k) = (k+1)^gamma with
//! g(omega) = omega^(-1+1/gamma)/gamma. `Table` carries a tabulated g for
//! scalings where only the limit profile is known; it cannot rebuild finite
//! matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalingSpec {
    Constant,
    Power { gamma: f64 },
    Table { points: Vec<[f64; 2]> },
}

impl ScalingSpec {
    pub fn power(gamma: f64) -> Self {
        ScalingSpec::Power { gamma }
    }

    /// Validate the invariants; `path` prefixes error locations.
    pub fn validate(&self, path: &str) -> Result<()> {
        match self {
            ScalingSpec::Constant => Ok(()),
            ScalingSpec::Power { gamma } => {
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return Err(Error::config(
                        format!("{path}.gamma"),
                        format!("gamma must be a finite positive real, got {gamma}"),
                    ));
                }
                Ok(())
            }
            ScalingSpec::Table { points } => {
                if points.len() < 2 {
                    return Err(Error::config(
                        format!("{path}.points"),
                        "tabulated g needs at least two points",
                    ));
                }
                let mut prev = 0.0_f64;
                for (i, [w, g]) in points.iter().enumerate() {
                    if !(w.is_finite() && *w > 0.0 && *w <= 1.0) {
                        return Err(Error::config(
                            format!("{path}.points[{i}]"),
                            format!("omega must lie in (0, 1], got {w}"),
                        ));
                    }
                    if *w <= prev {
                        return Err(Error::config(
                            format!("{path}.points[{i}]"),
                            "omega values must be strictly ascending",
                        ));
                    }
                    if !(g.is_finite() && *g >= 0.0) {
                        return Err(Error::config(
                            format!("{path}.points[{i}]"),
                            format!("g must be finite and nonnegative, got {g}"),
                        ));
                    }
                    prev = *w;
                }
                let mass = trapezoid(points, 0);
                if (mass - 1.0).abs() > 1e-6 {
                    return Err(Error::config(
                        format!("{path}.points"),
                        format!("trapezoidal integral of g is {mass}, must be 1 within 1e-6"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// g(omega) for omega in (0, 1]. Constant scaling has no density
    /// (a point mass at 1) and must be special-cased by the caller.
    pub fn g_of(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0 && omega <= 1.0) {
            return Err(Error::config(
                "omega",
                format!("omega must lie in (0, 1], got {omega}"),
            ));
        }
        match self {
            ScalingSpec::Constant => Err(Error::config(
                "kind",
                "constant scaling is a point mass at omega = 1; no density exists",
            )),
            ScalingSpec::Power { gamma } => Ok(omega.powf(-1.0 + 1.0 / gamma) / gamma),
            ScalingSpec::Table { points } => Ok(interpolate(points, omega)),
        }
    }

    /// Unchecked density evaluation for quadrature loops; returns 0 for
    /// constant scaling (its mass lives in the point at omega = 1).
    pub(crate) fn g_unchecked(&self, omega: f64) -> f64 {
        match self {
            ScalingSpec::Constant => 0.0,
            ScalingSpec::Power { gamma } => omega.powf(-1.0 + 1.0 / gamma) / gamma,
            ScalingSpec::Table { points } => interpolate(points, omega),
        }
    }

    /// phi(k) with the (k+1) argument shift, so that the leading block of a
    /// truncated matrix is never scaled by zero.
    pub fn phi_of(&self, k: usize) -> Result<f64> {
        match self {
            ScalingSpec::Constant => Ok(1.0),
            ScalingSpec::Power { gamma } => Ok(((k + 1) as f64).powf(*gamma)),
            ScalingSpec::Table { .. } => Err(Error::UnsupportedForEmpirical),
        }
    }

    /// Moment of g: int_0^1 omega^M g(omega) d omega.
    pub fn omega_moment(&self, order: u32) -> f64 {
        match self {
            ScalingSpec::Constant => 1.0,
            ScalingSpec::Power { gamma } => 1.0 / (order as f64 * gamma + 1.0),
            ScalingSpec::Table { points } => trapezoid(points, order),
        }
    }
}

fn interpolate(points: &[[f64; 2]], omega: f64) -> f64 {
    let first = points[0][0];
    let last = points[points.len() - 1][0];
    if omega < first || omega > last {
        return 0.0;
    }
    match points.binary_search_by(|p| p[0].partial_cmp(&omega).unwrap()) {
        Ok(i) => points[i][1],
        Err(i) => {
            let [w0, g0] = points[i - 1];
            let [w1, g1] = points[i];
            let s = (omega - w0) / (w1 - w0);
            g0 + s * (g1 - g0)
        }
    }
}

/// Trapezoidal int omega^M g(omega) d omega over the table range.
fn trapezoid(points: &[[f64; 2]], order: u32) -> f64 {
    let mut acc = 0.0;
    for pair in points.windows(2) {
        let [w0, g0] = pair[0];
        let [w1, g1] = pair[1];
        let f0 = w0.powi(order as i32) * g0;
        let f1 = w1.powi(order as i32) * g1;
        acc += 0.5 * (f0 + f1) * (w1 - w0);
    }
    acc
}
