//! Config ingestion and the subcommand pipeline behind the `jacobi-density`
//! binary: bands, density, spectrum, moments, validate, plot.
//!
//! Every subcommand is a pure function from a validated [`RunConfig`] to a
//! set of named output files (CSV or JSON text), so the whole surface is
//! testable without touching the filesystem.

use serde::{Deserialize, Serialize};

use crate::bands::{band_structure, BandStructure};
use crate::coeffs::PeriodicCoefficients;
use crate::density::{rho_curve, support_hull, DensityCurve};
use crate::error::{Error, Result};
use crate::moments::{moment_table, MomentReport};
use crate::scaling::ScalingSpec;
use crate::spectrum::{histogram, ks_distance, scaled_spectrum};

pub const DEFAULT_GRID_POINTS: usize = 512;
pub const DEFAULT_MAX_ORDER: u32 = 6;
pub const DEFAULT_KS_THRESHOLD: f64 = 0.05;
pub const DEFAULT_MOMENT_THRESHOLD: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl Default for OutputFormat {
    fn default() -> Self {
        OutputFormat::Csv
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub zmin: f64,
    pub zmax: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub t: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub phi: ScalingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments_max: Option<u32>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_threshold: Option<f64>,
}

impl RunConfig {
    pub fn coefficients(&self) -> Result<PeriodicCoefficients> {
        PeriodicCoefficients::new(self.a.clone(), self.b.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 {
            return Err(Error::config("t", "period must be at least 1"));
        }
        if self.t != self.a.len() {
            return Err(Error::config(
                "a",
                format!("expected {} entries for period t = {}", self.t, self.t),
            ));
        }
        self.coefficients()?;
        self.phi.validate("phi")?;
        if let Some(g) = &self.grid {
            if g.points < 2 {
                return Err(Error::config("grid.points", "need at least 2 grid points"));
            }
            if !(g.zmin < g.zmax) {
                return Err(Error::config("grid.zmin", "need zmin < zmax"));
            }
        }
        if self.n == Some(0) {
            return Err(Error::config("n", "block count must be at least 1"));
        }
        for (field, v) in [
            ("ks_threshold", self.ks_threshold),
            ("moment_threshold", self.moment_threshold),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::config(field, "threshold must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// Parse and validate a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Canonical JSON emission; `parse_config(emit_config(c)) == c` for every
/// valid config.
pub fn emit_config(cfg: &RunConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serialization cannot fail")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Bands,
    Density,
    Spectrum,
    Validate,
    Moments,
    Plot,
}

impl std::str::FromStr for Subcommand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bands" => Ok(Subcommand::Bands),
            "density" => Ok(Subcommand::Density),
            "spectrum" => Ok(Subcommand::Spectrum),
            "validate" => Ok(Subcommand::Validate),
            "moments" => Ok(Subcommand::Moments),
            "plot" => Ok(Subcommand::Plot),
            other => Err(Error::config(
                "subcommand",
                format!("unknown subcommand `{other}`"),
            )),
        }
    }
}

/// A produced file: default file name plus full text contents.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub files: Vec<OutputFile>,
    /// false only when `validate` thresholds fail.
    pub passed: bool,
}

/// Run one pipeline stage over a validated config.
pub fn run_subcommand(sub: Subcommand, cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let coeffs = cfg.coefficients()?;
    let bands = band_structure(&coeffs)?;
    match sub {
        Subcommand::Bands => run_bands(cfg, &bands),
        Subcommand::Density => run_density(cfg, &bands),
        Subcommand::Spectrum => run_spectrum(cfg, &coeffs),
        Subcommand::Moments => run_moments(cfg, &coeffs),
        Subcommand::Validate => run_validate(cfg, &coeffs, &bands),
        Subcommand::Plot => run_plot(cfg, &coeffs, &bands),
    }
}

fn grid_for(cfg: &RunConfig, bands: &BandStructure) -> GridSpec {
    cfg.grid.unwrap_or_else(|| {
        let (zmin, zmax) = if matches!(cfg.phi, ScalingSpec::Constant) {
            (bands.min_edge(), bands.max_edge())
        } else {
            support_hull(bands)
        };
        GridSpec {
            zmin,
            zmax,
            points: DEFAULT_GRID_POINTS,
        }
    })
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn run_bands(cfg: &RunConfig, bands: &BandStructure) -> Result<RunOutput> {
    let contents = match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            let coeff_list: Vec<String> = bands
                .discriminant()
                .coeffs()
                .iter()
                .map(|c| fmt(*c))
                .collect();
            out.push_str(&format!("# S_coefficients: {}\n", coeff_list.join(",")));
            out.push_str("band,mu,nu\n");
            for i in 0..bands.period() {
                let (mu, nu) = bands.band(i);
                out.push_str(&format!("{},{},{}\n", i + 1, fmt(mu), fmt(nu)));
            }
            out
        }
        OutputFormat::Json => {
            let bands_json: Vec<_> = (0..bands.period())
                .map(|i| {
                    let (mu, nu) = bands.band(i);
                    serde_json::json!({"band": i + 1, "mu": mu, "nu": nu})
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "s_coefficients": bands.discriminant().coeffs(),
                "bands": bands_json,
            }))? + "\n"
        }
    };
    Ok(RunOutput {
        files: vec![OutputFile {
            name: format!("bands.{}", ext(cfg.format)),
            contents,
        }],
        passed: true,
    })
}

fn density_csv(curve: &DensityCurve) -> String {
    let mut out = String::from("z,rho,singular\n");
    for i in 0..curve.z.len() {
        let rho_str = if curve.singular[i] {
            "inf".to_string()
        } else {
            fmt(curve.rho[i])
        };
        out.push_str(&format!(
            "{},{},{}\n",
            fmt(curve.z[i]),
            rho_str,
            u8::from(curve.singular[i])
        ));
    }
    out
}

fn density_json(curve: &DensityCurve) -> Result<String> {
    let rows: Vec<_> = (0..curve.z.len())
        .map(|i| {
            serde_json::json!({
                "z": curve.z[i],
                "rho": if curve.singular[i] { serde_json::Value::Null } else { json_number(curve.rho[i]) },
                "singular": curve.singular[i],
            })
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

fn compute_curve(cfg: &RunConfig, bands: &BandStructure) -> Result<DensityCurve> {
    let grid = grid_for(cfg, bands);
    rho_curve(bands, &cfg.phi, grid.zmin, grid.zmax, grid.points)
}

fn run_density(cfg: &RunConfig, bands: &BandStructure) -> Result<RunOutput> {
    let curve = compute_curve(cfg, bands)?;
    let contents = match cfg.format {
        OutputFormat::Csv => density_csv(&curve),
        OutputFormat::Json => density_json(&curve)?,
    };
    Ok(RunOutput {
        files: vec![OutputFile {
            name: format!("density.{}", ext(cfg.format)),
            contents,
        }],
        passed: true,
    })
}

fn require_n(cfg: &RunConfig) -> Result<usize> {
    cfg.n
        .ok_or_else(|| Error::config("n", "this subcommand requires a block count n"))
}

fn run_spectrum(cfg: &RunConfig, coeffs: &PeriodicCoefficients) -> Result<RunOutput> {
    let n = require_n(cfg)?;
    let spec = scaled_spectrum(coeffs, &cfg.phi, n)?;
    let contents = match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("index,value\n");
            for (i, v) in spec.values.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i, fmt(*v)));
            }
            out
        }
        OutputFormat::Json => {
            serde_json::to_string_pretty(&serde_json::json!({
                "n": spec.n,
                "t": spec.t,
                "values": spec.values,
            }))? + "\n"
        }
    };
    Ok(RunOutput {
        files: vec![OutputFile {
            name: format!("spectrum.{}", ext(cfg.format)),
            contents,
        }],
        passed: true,
    })
}

fn moments_csv(rows: &[MomentReport]) -> String {
    let mut out = String::from("M,K_M,omega_factor,m_theory,m_empirical,abs_error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.order,
            fmt(r.k_m),
            fmt(r.omega_factor),
            fmt(r.m_theory),
            r.m_empirical.map(fmt).unwrap_or_default(),
            r.abs_error.map(fmt).unwrap_or_default(),
        ));
    }
    out
}

fn moments_json(rows: &[MomentReport]) -> Result<String> {
    let rows: Vec<_> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "M": r.order,
                "K_M": r.k_m,
                "omega_factor": r.omega_factor,
                "m_theory": r.m_theory,
                "m_empirical": r.m_empirical,
                "abs_error": r.abs_error,
            })
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

fn run_moments(cfg: &RunConfig, coeffs: &PeriodicCoefficients) -> Result<RunOutput> {
    let max_order = cfg.moments_max.unwrap_or(DEFAULT_MAX_ORDER);
    let spec = match cfg.n {
        Some(n) => Some(scaled_spectrum(coeffs, &cfg.phi, n)?),
        None => None,
    };
    let rows = moment_table(coeffs, &cfg.phi, max_order, spec.as_ref());
    let contents = match cfg.format {
        OutputFormat::Csv => moments_csv(&rows),
        OutputFormat::Json => moments_json(&rows)?,
    };
    Ok(RunOutput {
        files: vec![OutputFile {
            name: format!("moments.{}", ext(cfg.format)),
            contents,
        }],
        passed: true,
    })
}

struct ValidateRow {
    check: &'static str,
    order: Option<u32>,
    value: f64,
    threshold: f64,
    pass: bool,
}

fn run_validate(
    cfg: &RunConfig,
    coeffs: &PeriodicCoefficients,
    bands: &BandStructure,
) -> Result<RunOutput> {
    let n = require_n(cfg)?;
    let spec = scaled_spectrum(coeffs, &cfg.phi, n)?;
    let ks_threshold = cfg.ks_threshold.unwrap_or(DEFAULT_KS_THRESHOLD);
    let moment_threshold = cfg.moment_threshold.unwrap_or(DEFAULT_MOMENT_THRESHOLD);
    let max_order = cfg.moments_max.unwrap_or(DEFAULT_MAX_ORDER);

    let mut rows = Vec::new();
    let ks = ks_distance(&spec, bands, &cfg.phi)?;
    rows.push(ValidateRow {
        check: "ks",
        order: None,
        value: ks,
        threshold: ks_threshold,
        pass: ks <= ks_threshold,
    });
    let scale = coeffs.magnitude();
    for r in moment_table(coeffs, &cfg.phi, max_order, Some(&spec)) {
        let err = r.abs_error.unwrap_or(f64::NAN);
        let threshold = moment_threshold * scale.powi(r.order as i32);
        rows.push(ValidateRow {
            check: "moment",
            order: Some(r.order),
            value: err,
            threshold,
            pass: err <= threshold,
        });
    }
    let passed = rows.iter().all(|r| r.pass);

    let contents = match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("check,order,value,threshold,pass\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.check,
                    r.order.map(|o| o.to_string()).unwrap_or_default(),
                    fmt(r.value),
                    fmt(r.threshold),
                    u8::from(r.pass)
                ));
            }
            out
        }
        OutputFormat::Json => {
            let rows_json: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "check": r.check,
                        "order": r.order,
                        "value": r.value,
                        "threshold": r.threshold,
                        "pass": r.pass,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "passed": passed,
                "checks": rows_json,
            }))? + "\n"
        }
    };
    Ok(RunOutput {
        files: vec![OutputFile {
            name: format!("validate.{}", ext(cfg.format)),
            contents,
        }],
        passed,
    })
}

fn run_plot(
    cfg: &RunConfig,
    coeffs: &PeriodicCoefficients,
    bands: &BandStructure,
) -> Result<RunOutput> {
    let curve = compute_curve(cfg, bands)?;
    let mut files = vec![OutputFile {
        name: "density.csv".to_string(),
        contents: density_csv(&curve),
    }];

    let hist_file = if let Some(n) = cfg.n {
        let spec = scaled_spectrum(coeffs, &cfg.phi, n)?;
        let grid = grid_for(cfg, bands);
        let nbins = (grid.points / 8).clamp(16, 128);
        let hist = histogram(&spec, nbins, grid.zmin, grid.zmax);
        let mut out = String::from("center,density\n");
        for (c, d) in &hist {
            out.push_str(&format!("{},{}\n", fmt(*c), fmt(*d)));
        }
        files.push(OutputFile {
            name: "histogram.csv".to_string(),
            contents: out,
        });
        true
    } else {
        false
    };

    let mut script = String::new();
    script.push_str("set datafile separator ','\n");
    script.push_str("set xlabel 'z'\n");
    script.push_str("set ylabel 'rho(z)'\n");
    script.push_str("set key top right\n");
    if hist_file {
        script.push_str(
            "plot 'density.csv' using 1:2 skip 1 with lines title 'rho(z)', \\\n     'histogram.csv' using 1:2 skip 1 with boxes fs transparent solid 0.3 title 'eigenvalue histogram'\n",
        );
    } else {
        script.push_str("plot 'density.csv' using 1:2 skip 1 with lines title 'rho(z)'\n");
    }
    files.push(OutputFile {
        name: "plot.gnuplot".to_string(),
        contents: script,
    });
    Ok(RunOutput {
        files,
        passed: true,
    })
}

fn ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}
