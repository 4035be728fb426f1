//! Periodic limit coefficients and construction of finite tridiagonal
//! matrices: scaled truncations J(n) and unscaled periodic windows of the
//! limit matrix L.

use crate::error::{Error, Result};
use crate::scaling::ScalingSpec;

/// The period t and the limit values a_i (diagonal) and b_i (off-diagonal).
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicCoefficients {
    t: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PeriodicCoefficients {
    /// Build and validate; the period is the common length of `a` and `b`.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::config("a", "period must be at least 1"));
        }
        if a.len() != b.len() {
            return Err(Error::config(
                "b",
                format!("a has {} entries but b has {}", a.len(), b.len()),
            ));
        }
        for (i, v) in a.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::config(format!("a[{i}]"), "entries must be finite"));
            }
        }
        for (i, v) in b.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::config(format!("b[{i}]"), "entries must be finite"));
            }
            if *v == 0.0 {
                return Err(Error::config(
                    format!("b[{i}]"),
                    "off-diagonal limits must be nonzero",
                ));
            }
        }
        Ok(PeriodicCoefficients { t: a.len(), a, b })
    }

    pub fn period(&self) -> usize {
        self.t
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// max |a_i| + 2 max |b_i|, a crude bound on the periodic spectrum radius.
    pub fn magnitude(&self) -> f64 {
        let amax = self.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let bmax = self.b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        amax + 2.0 * bmax
    }
}

/// Symmetric tridiagonal matrix; only the diagonal and one off-diagonal
/// are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len().max(1));
        TridiagonalMatrix { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Row-sum norm.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        let mut best = 0.0_f64;
        for i in 0..n {
            let mut row = self.diag[i].abs();
            if i > 0 {
                row += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                row += self.offdiag[i].abs();
            }
            best = best.max(row);
        }
        best
    }

    /// y = T x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }
}

/// The nt x nt truncation J(n) with entries a_i phi(k), b_i phi(k) in block
/// k; the off-diagonal entry crossing a block boundary takes the left
/// block's scale.
pub fn build_truncated(
    coeffs: &PeriodicCoefficients,
    scaling: &ScalingSpec,
    n: usize,
) -> Result<TridiagonalMatrix> {
    if n == 0 {
        return Err(Error::config("n", "block count must be at least 1"));
    }
    let t = coeffs.period();
    let m = n
        .checked_mul(t)
        .filter(|m| *m < usize::MAX / 2)
        .ok_or(Error::DimensionOverflow { n, t })?;
    let mut diag = Vec::with_capacity(m);
    let mut offdiag = Vec::with_capacity(m - 1);
    for k in 0..n {
        let phi = scaling.phi_of(k)?;
        for i in 0..t {
            diag.push(coeffs.a()[i] * phi);
            if k * t + i < m - 1 {
                offdiag.push(coeffs.b()[i] * phi);
            }
        }
    }
    Ok(TridiagonalMatrix { diag, offdiag })
}

/// A (2 halfwidth + 1 + t)-dimensional unscaled window of the bi-infinite
/// periodic matrix L, entries a_{i mod t}, b_{i mod t}.
pub fn build_periodic_window(
    coeffs: &PeriodicCoefficients,
    halfwidth: usize,
) -> TridiagonalMatrix {
    assert!(halfwidth >= 1, "halfwidth must be at least 1");
    let t = coeffs.period();
    let m = 2 * halfwidth + 1 + t;
    let diag = (0..m).map(|j| coeffs.a()[j % t]).collect();
    let offdiag = (0..m - 1).map(|j| coeffs.b()[j % t]).collect();
    TridiagonalMatrix { diag, offdiag }
}
