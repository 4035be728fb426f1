//! Band structure of the periodic limit matrix L: the discriminant
//! polynomial S(x) = p_t(x) + q_{t-1}(x), the band edges (solutions of
//! S(x) = +-2), and the periodic eigenvalue density
//! rho0(x) = |S'(x)| / (t pi sqrt(4 - S(x)^2)) on the bands.

use nalgebra::DMatrix;

use crate::coeffs::PeriodicCoefficients;
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;

/// Dense real polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial { coeffs: vec![c] }.trimmed()
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as f64 * c)
            .collect();
        Polynomial { coeffs }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0.0)
                    + other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Polynomial { coeffs }.trimmed()
    }

    pub fn scaled(&self, s: f64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
        .trimmed()
    }

    /// Multiply by the linear factor (x - shift).
    pub fn mul_linear(&self, shift: f64) -> Polynomial {
        if self.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] += c;
            coeffs[i] -= shift * c;
        }
        Polynomial { coeffs }.trimmed()
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }.trimmed()
    }
}

/// S(x) = p_t(x) + q_{t-1}(x) built by the three-term polynomial recurrence
/// p_0 = 1, p_1 = (x - a_0)/b_0; q_0 = 0, q_1 = -b_{t-1}/b_0;
/// y_{k+1} = ((x - a_k) y_k - b_{k-1} y_{k-1}) / b_k.
pub fn discriminant(coeffs: &PeriodicCoefficients) -> Polynomial {
    let t = coeffs.period();
    let a = coeffs.a();
    let b = coeffs.b();

    let step = |y: &Polynomial, y_prev: &Polynomial, k: usize| -> Polynomial {
        y.mul_linear(a[k])
            .add(&y_prev.scaled(-b[k - 1]))
            .scaled(1.0 / b[k])
    };

    // p up to p_t
    let mut p_prev = Polynomial::constant(1.0);
    let mut p = Polynomial::from_coeffs(vec![-a[0] / b[0], 1.0 / b[0]]);
    for k in 1..t {
        let next = step(&p, &p_prev, k);
        p_prev = p;
        p = next;
    }

    // q up to q_{t-1}
    let mut q_prev = Polynomial::zero();
    let mut q = Polynomial::constant(-b[t - 1] / b[0]);
    for k in 1..t.saturating_sub(1) {
        let next = step(&q, &q_prev, k);
        q_prev = q;
        q = next;
    }
    let q_tm1 = if t == 1 { q_prev } else { q };

    p.add(&q_tm1)
}

/// Band structure: 2t sorted edges pairing into bands [mu_i, nu_i], the
/// discriminant and its derivative.
#[derive(Clone, Debug)]
pub struct BandStructure {
    edges: Vec<f64>,
    s: Polynomial,
    s_deriv: Polynomial,
    s_deriv2: Polynomial,
    t: usize,
}

/// Real roots (with multiplicity) of the monic polynomial via the
/// eigenvalues of its companion matrix. Complex parts are discarded; the
/// caller polishes and validates.
fn companion_root_candidates(poly: &Polynomial) -> Vec<f64> {
    let deg = poly.degree();
    if deg == 0 {
        return vec![];
    }
    let lead = poly.leading();
    let monic: Vec<f64> = poly.coeffs()[..deg].iter().map(|c| c / lead).collect();
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -monic[i];
    }
    m.complex_eigenvalues().iter().map(|z| z.re).collect()
}

/// Solve S(x) = +-2 for the 2t band edges, refining companion-matrix
/// candidates by Newton's method with a residual acceptance test.
pub fn band_edges(s: &Polynomial, t: usize) -> Result<BandStructure> {
    if s.degree() != t {
        return Err(Error::BadDiscriminantDegree {
            expected: t,
            found: s.degree(),
        });
    }
    let s_deriv = s.derivative();
    // S(x)^2 - 4
    let mut sq = s.mul(s);
    let mut c = sq.coeffs().to_vec();
    c[0] -= 4.0;
    sq = Polynomial::from_coeffs(c);

    let coeff_norm: f64 = s.coeffs().iter().map(|c| c.abs()).sum();
    let residual_tol = |x: f64| 1e-12 * (coeff_norm * x.abs().max(1.0).powi(t as i32)).max(1.0);

    let mut edges = Vec::with_capacity(2 * t);
    for cand in companion_root_candidates(&sq) {
        let target = if s.eval(cand) >= 0.0 { 2.0 } else { -2.0 };
        let mut x = cand;
        // Polish to the step-size limit rather than the residual tolerance:
        // simple edges then land within a few ulp, which the factored
        // discriminant evaluation in band_quad relies on.
        for _ in 0..100 {
            let f = s.eval(x) - target;
            let d = s_deriv.eval(x);
            if d == 0.0 {
                break;
            }
            let step = f / d;
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                break;
            }
        }
        if (s.eval(x) - target).abs() <= residual_tol(x) {
            edges.push(x);
        }
    }
    if edges.len() != 2 * t {
        return Err(Error::BandEdges {
            found: edges.len(),
            expected: 2 * t,
        });
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s_deriv2 = s_deriv.derivative();
    Ok(BandStructure {
        edges,
        s: s.clone(),
        s_deriv,
        s_deriv2,
        t,
    })
}

/// Convenience: discriminant plus edge extraction.
pub fn band_structure(coeffs: &PeriodicCoefficients) -> Result<BandStructure> {
    band_edges(&discriminant(coeffs), coeffs.period())
}

impl BandStructure {
    pub fn period(&self) -> usize {
        self.t
    }

    pub fn discriminant(&self) -> &Polynomial {
        &self.s
    }

    /// Sorted edges mu_1, nu_1, ..., mu_t, nu_t.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Band i (zero-based) as (mu, nu).
    pub fn band(&self, i: usize) -> (f64, f64) {
        (self.edges[2 * i], self.edges[2 * i + 1])
    }

    pub fn bands(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.t).map(|i| self.band(i))
    }

    pub fn min_edge(&self) -> f64 {
        self.edges[0]
    }

    pub fn max_edge(&self) -> f64 {
        self.edges[2 * self.t - 1]
    }

    pub fn span(&self) -> f64 {
        self.max_edge() - self.min_edge()
    }

    /// Whether x lies in the spectrum (closed bands), within a tiny slack.
    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * self.span().max(1.0);
        self.bands()
            .any(|(mu, nu)| x >= mu - slack && x <= nu + slack)
    }

    /// A point where two consecutive bands meet (nu_i == mu_{i+1} within
    /// 1e-10 of the span), returned as their midpoint.
    fn touching_point_near(&self, x: f64, window: f64) -> Option<f64> {
        let tol = 1e-10 * self.span().max(1.0);
        for i in 0..self.t.saturating_sub(1) {
            let (nu, mu_next) = (self.edges[2 * i + 1], self.edges[2 * i + 2]);
            if mu_next - nu <= tol {
                let tp = 0.5 * (nu + mu_next);
                if (x - tp).abs() <= window {
                    return Some(tp);
                }
            }
        }
        None
    }

    fn rho0_raw(&self, x: f64) -> f64 {
        let sv = self.s.eval(x);
        let disc = 4.0 - sv * sv;
        if disc <= 0.0 {
            return f64::INFINITY;
        }
        self.s_deriv.eval(x).abs() / (self.t as f64 * std::f64::consts::PI * disc.sqrt())
    }

    /// The finite limit of rho0 at a touching point: S and S' both vanish
    /// to first order there, so S = sigma + c u^2 with |sigma| = 2 and
    /// c = S''/2, giving sqrt(|S''|/2) / (t pi).
    fn rho0_touching_limit(&self, tp: f64) -> f64 {
        let c2 = self.s_deriv2.eval(tp).abs() * 0.5;
        c2.sqrt() / (self.t as f64 * std::f64::consts::PI)
    }

    /// Periodic density rho0(x); 0 off the bands, POSITIVE_INFINITY at
    /// simple band edges, the finite limit at touching edges. Edge
    /// classification carries a small tolerance (refined edges are only
    /// accurate to a few ulp); quadrature uses `rho0_interior` instead,
    /// where that window would systematically drop mass.
    pub fn rho0(&self, x: f64) -> f64 {
        // Direct evaluation suffers catastrophic cancellation in 4 - S^2
        // near a touching point, so use the limit in a small window.
        let span = self.span().max(1.0);
        if let Some(tp) = self.touching_point_near(x, 1e-7 * span) {
            return self.rho0_touching_limit(tp);
        }
        let edge_tol = 1e-12 * span;
        if x < self.min_edge() - edge_tol || x > self.max_edge() + edge_tol {
            return 0.0;
        }
        if self.edges.iter().any(|e| (e - x).abs() <= edge_tol) {
            return f64::INFINITY;
        }
        if !self.contains(x) {
            return 0.0;
        }
        self.rho0_raw(x)
    }

    /// rho0 for quadrature integrands: no edge tolerance, so nodes placed
    /// double-exponentially close to a band edge still contribute. A node
    /// landing exactly on an edge comes out infinite (disc <= 0) and is
    /// skipped by the integrator.
    pub(crate) fn rho0_interior(&self, x: f64) -> f64 {
        let span = self.span().max(1.0);
        if let Some(tp) = self.touching_point_near(x, 1e-7 * span) {
            return self.rho0_touching_limit(tp);
        }
        if !self.bands().any(|(mu, nu)| x >= mu && x <= nu) {
            return 0.0;
        }
        self.rho0_raw(x)
    }

    /// rho0 evaluated through the factored discriminant
    /// 4 - S(x)^2 = lead^2 prod_j |x - e_j| (inside a band), with the
    /// factor for edge `near` supplied exactly as u^2 = |x - e_near|.
    /// Evaluating the product of exact small differences sidesteps the
    /// catastrophic cancellation of 4 - S(x)^2 near the edge.
    fn rho0_factored(&self, x: f64, near: usize, u2: f64) -> f64 {
        let mut prod = u2;
        for (j, e) in self.edges.iter().enumerate() {
            if j != near {
                prod *= (x - e).abs();
            }
        }
        let lead = self.s.leading();
        let disc = lead * lead * prod;
        if disc <= 0.0 {
            return f64::INFINITY;
        }
        self.s_deriv.eval(x).abs() / (self.t as f64 * std::f64::consts::PI * disc.sqrt())
    }

    /// Integral of f(x) rho0(x) over band i. The substitution x = e -+ u^2
    /// at each edge turns the inverse-square-root endpoints into smooth
    /// integrands, so the result is accurate to near machine precision
    /// (direct x-space quadrature bottoms out around 1e-8: no float can
    /// represent points closer to an edge than one ulp).
    pub fn band_weighted_integral<F: Fn(f64) -> f64>(&self, i: usize, f: F) -> Result<f64> {
        let (mu, nu) = self.band(i);
        let mid = 0.5 * (mu + nu);
        let halves = [
            (2 * i, mu, 1.0),      // left half, x = mu + u^2
            (2 * i + 1, nu, -1.0), // right half, x = nu - u^2
        ];
        let mut acc = 0.0;
        for (near, edge, dir) in halves {
            let q = tanh_sinh(
                |u| {
                    let u2 = u * u;
                    let x = edge + dir * u2;
                    2.0 * u * f(x) * self.rho0_factored(x, near, u2)
                },
                0.0,
                (mid - mu).sqrt(),
                1e-12,
                1e-14,
            );
            if !q.converged {
                return Err(Error::NonconvergedQuadrature {
                    at: Some(edge),
                    estimate: q.value,
                    error: q.abs_error,
                });
            }
            acc += q.value;
        }
        Ok(acc)
    }

    /// Integral of rho0 over band i; 1/t for a non-touching band.
    pub fn rho0_band_integral(&self, i: usize) -> Result<f64> {
        self.band_weighted_integral(i, |_| 1.0)
    }
}
