//! Experiment harness behind the `lmg` binary: flat key-value
//! configuration, parameter-echoing CSV output, and the built-in
//! experiment suite (figure1, figure2, gap-scan, slowflow, classical,
//! kernels, stationarity).
//!
//! Output format: `#`-prefixed metadata lines (artifact version,
//! experiment name, every resolved parameter, notes and warnings), one
//! plain column-name row, data rows with floats printed to 17 significant
//! digits, and optional `#`-prefixed footer lines carrying summary
//! statistics and per-row diagnostics. Identical configuration produces
//! byte-identical output: the runners use no randomness, no timestamps,
//! and a fixed assembly order.
//!
//! Configuration files are plain text, one `key = value` per line, with
//! `#` comment lines; command-line overrides replace file values before
//! any key is read. Every runner resolves and validates its full
//! parameter set first, rejects keys it does not know, and only then
//! computes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::bath::{
    kappa_matrix, markov_parameter, noise_kernel, nu1, spectral_density, ModelParams,
    Temperature, MARKOV_WARN_THRESHOLD,
};
use crate::error::{LmgError, Result};
use crate::lindblad::{
    build_lindbladian, spectral_gap, stationarity_residual, DensityMatrix, SpectralEvolver,
};
use crate::matrix::CMat;
use crate::semiclassical::{
    equilibrium_expectations, ground_energy, integrate_classical, ClassicalState,
};
use crate::slowflow::{dissipation_a_of, dissipation_rate, elliptic_parameters, oscillation_period};
use crate::spin::{lmg_hamiltonian, SpinOperators};
use crate::thermal::{coherent_state_for_energy, GibbsState};
use num_complex::Complex64;

/// Version stamp written into every output header.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Float cell format used throughout the CSV output: scientific notation
/// with 17 significant digits, enough to round-trip an f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_float(x)).collect::<Vec<_>>().join(",")
}

/// Evenly spaced grid with exact endpoints; n >= 2.
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// The experiments the harness knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Figure1,
    Figure2,
    GapScan,
    SlowFlow,
    Classical,
    Kernels,
    Stationarity,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Figure1,
        Experiment::Figure2,
        Experiment::GapScan,
        Experiment::SlowFlow,
        Experiment::Classical,
        Experiment::Kernels,
        Experiment::Stationarity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Figure1 => "figure1",
            Experiment::Figure2 => "figure2",
            Experiment::GapScan => "gap-scan",
            Experiment::SlowFlow => "slowflow",
            Experiment::Classical => "classical",
            Experiment::Kernels => "kernels",
            Experiment::Stationarity => "stationarity",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = LmgError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .iter()
            .copied()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                LmgError::InvalidParameter(format!(
                    "unknown experiment '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Flat key-value configuration with read tracking. Every key a runner
/// reads is marked consumed; `reject_unknown` then catches typos and
/// stale keys before any computation starts.
#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Config {
    /// Parse `key = value` lines; blank lines and `#` comments are
    /// skipped. Duplicate keys are rejected rather than silently merged.
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                LmgError::InvalidParameter(format!(
                    "config line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if !valid_key(key) {
                return Err(LmgError::InvalidParameter(format!(
                    "config line {}: key '{key}' must be lowercase [a-z0-9_]",
                    lineno + 1
                )));
            }
            if cfg
                .values
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(LmgError::InvalidParameter(format!(
                    "config line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(cfg)
    }

    /// Insert or replace a key; command-line --set overrides go through
    /// here after the file is parsed, so the flag always wins.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !valid_key(key) {
            return Err(LmgError::InvalidParameter(format!(
                "override key '{key}' must be lowercase [a-z0-9_]",
            )));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// Raw string lookup; marks the key consumed.
    pub fn get_str(&mut self, key: &str) -> Option<String> {
        self.consumed.insert(key.to_string());
        self.values.get(key).cloned()
    }

    pub fn get_f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.get_str(key) {
            None => Ok(default),
            Some(v) => v.parse::<f64>().map_err(|_| {
                LmgError::InvalidParameter(format!("key '{key}': expected a number, got '{v}'"))
            }),
        }
    }

    pub fn get_usize(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.get_str(key) {
            None => Ok(default),
            Some(v) => v.parse::<usize>().map_err(|_| {
                LmgError::InvalidParameter(format!(
                    "key '{key}': expected a nonnegative integer, got '{v}'"
                ))
            }),
        }
    }

    /// Comma-separated float list; `None` when the key is absent.
    pub fn get_f64_list_opt(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(v) => {
                let mut out = Vec::new();
                for item in v.split(',') {
                    let item = item.trim();
                    out.push(item.parse::<f64>().map_err(|_| {
                        LmgError::InvalidParameter(format!(
                            "key '{key}': expected comma-separated numbers, got '{item}'"
                        ))
                    })?);
                }
                if out.is_empty() {
                    return Err(LmgError::InvalidParameter(format!(
                        "key '{key}': empty list"
                    )));
                }
                Ok(Some(out))
            }
        }
    }

    pub fn get_f64_list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        Ok(self.get_f64_list_opt(key)?.unwrap_or_else(|| default.to_vec()))
    }

    /// String restricted to a fixed set of choices.
    pub fn get_choice(&mut self, key: &str, default: &str, allowed: &[&str]) -> Result<String> {
        let v = self.get_str(key).unwrap_or_else(|| default.to_string());
        if allowed.contains(&v.as_str()) {
            Ok(v)
        } else {
            Err(LmgError::InvalidParameter(format!(
                "key '{key}': expected one of {}, got '{v}'",
                allowed.join(", ")
            )))
        }
    }

    /// Mark a key consumed without reading it (plumbing keys owned by the
    /// binary, such as the output path).
    pub fn mark_consumed(&mut self, key: &str) {
        self.consumed.insert(key.to_string());
    }

    /// Error listing every key that no runner read; called after a
    /// runner has resolved its full parameter set.
    pub fn reject_unknown(&self) -> Result<()> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| !self.consumed.contains(*k))
            .map(|k| k.as_str())
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(LmgError::InvalidParameter(format!(
                "unknown configuration keys: {}",
                unknown.join(", ")
            )))
        }
    }
}

/// Assembled experiment output: metadata lines, one column row, data
/// rows, footer lines. `to_csv` renders the final byte-stable text.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub meta: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub footers: Vec<String>,
}

impl Table {
    fn new(experiment: Experiment, columns: &[&'static str]) -> Table {
        Table {
            meta: vec![
                format!("lmg {ARTIFACT_VERSION}"),
                format!("experiment = {}", experiment.name()),
            ],
            columns: columns.to_vec(),
            rows: Vec::new(),
            footers: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push(format!("{key} = {value}"));
    }

    fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    /// Warning and note lines the binary also mirrors to stderr.
    pub fn notes(&self) -> impl Iterator<Item = &str> {
        self.meta
            .iter()
            .chain(self.footers.iter())
            .map(|s| s.as_str())
            .filter(|s| s.starts_with("warning") || s.starts_with("nonconverged") || s.starts_with("error"))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.meta {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        for line in &self.footers {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

fn check_positive(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(LmgError::InvalidParameter(format!(
            "key '{name}' must be positive and finite, got {x}"
        )))
    }
}

fn check_grid_size(name: &str, n: usize) -> Result<usize> {
    if n >= 2 {
        Ok(n)
    } else {
        Err(LmgError::InvalidParameter(format!(
            "key '{name}' must be at least 2, got {n}"
        )))
    }
}

/// Cutoff default: an order of magnitude above the largest Hamiltonian
/// frequency scale, where the dynamics is already cutoff-insensitive.
pub fn default_omega_c(lambda: f64) -> f64 {
    10.0 * lambda.max(1.0)
}

fn resolve_omega_c(cfg: &mut Config) -> Result<Option<f64>> {
    match cfg.get_str("omega_c") {
        None => Ok(None),
        Some(v) => {
            let x = v.parse::<f64>().map_err(|_| {
                LmgError::InvalidParameter(format!("key 'omega_c': expected a number, got '{v}'"))
            })?;
            check_positive("omega_c", x).map(Some)
        }
    }
}

/// Dispatch a named experiment against a configuration. The `out` and
/// `format` keys are plumbing owned by the caller and accepted here so
/// library use and binary use see the same key set.
pub fn run_experiment(experiment: Experiment, cfg: &mut Config) -> Result<Table> {
    cfg.mark_consumed("out");
    cfg.mark_consumed("format");
    match experiment {
        Experiment::Figure1 => run_figure1(cfg),
        Experiment::Figure2 => run_figure2(cfg),
        Experiment::GapScan => run_gap_scan(cfg),
        Experiment::SlowFlow => run_slowflow(cfg),
        Experiment::Classical => run_classical(cfg),
        Experiment::Kernels => run_kernels(cfg),
        Experiment::Stationarity => run_stationarity(cfg),
    }
}

/// Exit code the binary reports for a failed run: 2 for configuration
/// and domain errors, 3 for numeric failures (I/O is the binary's own
/// concern and maps to 4 there).
pub fn exit_code_for(err: &LmgError) -> i32 {
    match err {
        LmgError::InvalidParameter(_)
        | LmgError::Domain(_)
        | LmgError::DegenerateTemperature
        | LmgError::ResourceLimit(_) => 2,
        LmgError::ContractViolation(_)
        | LmgError::Numerical(_)
        | LmgError::FitQuality { .. }
        | LmgError::Linalg(_) => 3,
    }
}

/// Slow-flow dissipation coefficient A over the spectral range, one
/// curve per coupling. Zeros sit at the fixed points of the averaged
/// energy flow: the ground energy, the band top, and (above the
/// transition) the separatrix energy.
fn run_figure1(cfg: &mut Config) -> Result<Table> {
    let lambdas = cfg.get_f64_list("lambda", &[0.5, 2.0])?;
    let n_energy = check_grid_size("n_energy", cfg.get_usize("n_energy", 401)?)?;
    for &l in &lambdas {
        check_positive("lambda", l)?;
    }
    cfg.reject_unknown()?;

    let mut t = Table::new(Experiment::Figure1, &["lambda", "epsilon", "A"]);
    t.param("lambda", fmt_list(&lambdas));
    t.param("n_energy", n_energy);
    for &l in &lambdas {
        let eg = ground_energy(l);
        for eps in linspace(eg, 1.0, n_energy) {
            let state = elliptic_parameters(eps, l)?;
            let a = dissipation_a_of(&state);
            t.push_row(vec![fmt_float(l), fmt_float(eps), fmt_float(a)]);
        }
    }
    Ok(t)
}

/// Relaxation of the intensive energy toward the Gibbs value in the
/// extensive-temperature regime, one series per (coupling, temperature,
/// initial state). The Gibbs targets are echoed in the header; a series
/// still off its target at the end of the grid is flagged in a footer
/// line rather than truncated.
fn run_figure2(cfg: &mut Config) -> Result<Table> {
    let lambdas = cfg.get_f64_list("lambda", &[0.5, 2.0])?;
    let ttildes = cfg.get_f64_list("ttilde", &[0.5, 2.0])?;
    let s = cfg.get_f64("s", 20.0)?;
    let gamma = check_positive("gamma", cfg.get_f64("gamma", 0.05)?)?;
    let omega_c_fixed = resolve_omega_c(cfg)?;
    let t_max = check_positive("t_max", cfg.get_f64("t_max", 60.0)?)?;
    let n_times = check_grid_size("n_times", cfg.get_usize("n_times", 121)?)?;
    let initial_h = cfg.get_f64_list_opt("initial_h")?;
    let initial_frac = cfg.get_f64_list("initial_frac", &[0.1, 0.45, 0.8])?;
    let conv_tol = check_positive("conv_tol", cfg.get_f64("conv_tol", 5e-3)?)?;
    for &l in &lambdas {
        check_positive("lambda", l)?;
    }
    for &tt in &ttildes {
        check_positive("ttilde", tt)?;
    }
    for &f in &initial_frac {
        if !(f.is_finite() && f > 0.0 && f <= 1.0) {
            return Err(LmgError::InvalidParameter(format!(
                "key 'initial_frac': fractions must lie in (0, 1], got {f}"
            )));
        }
    }
    cfg.reject_unknown()?;

    let mut t = Table::new(
        Experiment::Figure2,
        &["lambda", "Ttilde", "label", "gamma_t", "h"],
    );
    t.param("lambda", fmt_list(&lambdas));
    t.param("ttilde", fmt_list(&ttildes));
    t.param("s", fmt_float(s));
    t.param("gamma", fmt_float(gamma));
    match omega_c_fixed {
        Some(w) => t.param("omega_c", fmt_float(w)),
        None => t.param("omega_c", "auto (10 max(1, lambda))"),
    }
    t.param("t_max", fmt_float(t_max));
    t.param("n_times", n_times);
    match &initial_h {
        Some(hs) => t.param("initial_h", fmt_list(hs)),
        None => t.param("initial_frac", fmt_list(&initial_frac)),
    }
    t.param("conv_tol", fmt_float(conv_tol));

    let gamma_ts = linspace(0.0, t_max, n_times);
    let ts: Vec<f64> = gamma_ts.iter().map(|&gt| gt / gamma).collect();

    // Resolve everything printable before the heavy spectral work so the
    // header block is complete even while series are still accumulating.
    struct Series {
        lambda: f64,
        ttilde: f64,
        label: String,
        values: Vec<f64>,
        gibbs_h: f64,
    }
    let mut series: Vec<Series> = Vec::new();
    for &l in &lambdas {
        let omega_c = omega_c_fixed.unwrap_or_else(|| default_omega_c(l));
        let ops = SpinOperators::new(s)?;
        let inv_s = Complex64::new(1.0 / s, 0.0);
        let h_op: CMat = lmg_hamiltonian(&ops, l).mapv(|e| e * inv_s);
        let eg = ground_energy(l);
        let energies: Vec<f64> = match &initial_h {
            Some(hs) => hs.clone(),
            None => initial_frac.iter().map(|f| eg + f * (1.0 - eg)).collect(),
        };
        t.meta
            .push(format!("initial energies lambda = {}: {}", fmt_float(l), fmt_list(&energies)));
        for &tt in &ttildes {
            let params = ModelParams {
                lambda: l,
                gamma,
                s,
                temperature: Temperature::Extensive(tt),
                omega_c,
                nu1_override: None,
            };
            if markov_parameter(&params) > MARKOV_WARN_THRESHOLD {
                t.meta.push(format!(
                    "warning: gamma tau_B = {} exceeds the Markov threshold {} at lambda = {}, Ttilde = {}",
                    fmt_float(markov_parameter(&params)),
                    fmt_float(MARKOV_WARN_THRESHOLD),
                    fmt_float(l),
                    fmt_float(tt)
                ));
            }
            let sup = build_lindbladian(&ops, &params)?;
            let evolver = SpectralEvolver::new(&sup)?;
            let gibbs = GibbsState::lmg(&ops, l, params.beta_tilde())?;
            let gibbs_h = gibbs.mean_energy();
            t.meta.push(format!(
                "gibbs lambda = {}, Ttilde = {}: h = {}",
                fmt_float(l),
                fmt_float(tt),
                fmt_float(gibbs_h)
            ));
            for &h0 in &energies {
                let (_theta, psi) = coherent_state_for_energy(&ops, l, h0)?;
                let rho0 = DensityMatrix::from_pure(&psi)?;
                let values = evolver.expectation_series(&rho0, &h_op, &ts)?;
                series.push(Series {
                    lambda: l,
                    ttilde: tt,
                    label: format!("h0={h0:.4e}"),
                    values,
                    gibbs_h,
                });
            }
        }
    }
    for sr in &series {
        for (gt, v) in gamma_ts.iter().zip(sr.values.iter()) {
            t.push_row(vec![
                fmt_float(sr.lambda),
                fmt_float(sr.ttilde),
                sr.label.clone(),
                fmt_float(*gt),
                fmt_float(*v),
            ]);
        }
        let dev = (sr.values.last().unwrap() - sr.gibbs_h).abs();
        if dev > conv_tol {
            t.footers.push(format!(
                "nonconverged lambda = {}, Ttilde = {}, {}: |h - gibbs| = {} at gamma_t = {}",
                fmt_float(sr.lambda),
                fmt_float(sr.ttilde),
                sr.label,
                fmt_float(dev),
                fmt_float(t_max)
            ));
        }
    }
    Ok(t)
}

/// Liouvillian spectral gap versus system size in the extensive
/// regime. Per-size solver failures are reported in footers and the scan
/// continues; the footer also carries the max/min flatness statistic
/// over the sizes that succeeded.
fn run_gap_scan(cfg: &mut Config) -> Result<Table> {
    let s_list = cfg.get_f64_list("s_list", &[5.0, 10.0, 20.0, 30.0])?;
    let lambda = check_positive("lambda", cfg.get_f64("lambda", 0.5)?)?;
    let ttilde = check_positive("ttilde", cfg.get_f64("ttilde", 1.0)?)?;
    let gamma = cfg.get_f64("gamma", 0.05)?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(LmgError::InvalidParameter(format!(
            "key 'gamma' must be nonnegative and finite, got {gamma}"
        )));
    }
    let omega_c = resolve_omega_c(cfg)?.unwrap_or_else(|| default_omega_c(lambda));
    cfg.reject_unknown()?;

    let mut t = Table::new(
        Experiment::GapScan,
        &["S", "gap", "lambda1_real", "lambda1_imag"],
    );
    t.param("s_list", fmt_list(&s_list));
    t.param("lambda", fmt_float(lambda));
    t.param("ttilde", fmt_float(ttilde));
    t.param("gamma", fmt_float(gamma));
    t.param("omega_c", fmt_float(omega_c));

    let mut gaps: Vec<f64> = Vec::new();
    let mut last_error: Option<LmgError> = None;
    for &s in &s_list {
        let result = (|| -> Result<crate::lindblad::SpectralGap> {
            let ops = SpinOperators::new(s)?;
            let params = ModelParams {
                lambda,
                gamma,
                s,
                temperature: Temperature::Extensive(ttilde),
                omega_c,
                nu1_override: None,
            };
            let sup = build_lindbladian(&ops, &params)?;
            spectral_gap(&sup)
        })();
        match result {
            Ok(g) => {
                gaps.push(g.gap);
                t.push_row(vec![
                    fmt_float(s),
                    fmt_float(g.gap),
                    fmt_float(g.lambda1.re),
                    fmt_float(g.lambda1.im),
                ]);
            }
            Err(e) => {
                t.footers.push(format!("error S = {}: {e}", fmt_float(s)));
                last_error = Some(e);
            }
        }
    }
    // A scan that produced no rows at all is a failure, not an empty table.
    if t.rows.is_empty() {
        if let Some(e) = last_error {
            return Err(e);
        }
    }
    let flatness = match (
        gaps.iter().copied().fold(f64::INFINITY, f64::min),
        gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ) {
        (min, max) if gaps.is_empty() || min <= 0.0 => {
            // Undefined without positive gaps (e.g. the gamma = 0 control).
            let _ = (min, max);
            f64::NAN
        }
        (min, max) => max / min,
    };
    t.footers.push(format!("flatness max/min = {}", fmt_float(flatness)));
    Ok(t)
}

/// The full slow-flow table over the spectral range: fast-orbit
/// amplitude, elliptic parameter, frequency scale, period, and the
/// dissipation coefficient A, one block per coupling. The near-ground
/// slope of A (the relaxation rate in units of gamma) is echoed per
/// coupling.
fn run_slowflow(cfg: &mut Config) -> Result<Table> {
    let lambdas = cfg.get_f64_list("lambda", &[0.5, 2.0])?;
    let n_energy = check_grid_size("n_energy", cfg.get_usize("n_energy", 201)?)?;
    for &l in &lambdas {
        check_positive("lambda", l)?;
    }
    cfg.reject_unknown()?;

    let mut t = Table::new(
        Experiment::SlowFlow,
        &["lambda", "epsilon", "a_sq", "k_sq", "omega", "period", "A"],
    );
    t.param("lambda", fmt_list(&lambdas));
    t.param("n_energy", n_energy);
    for &l in &lambdas {
        t.meta.push(format!(
            "slope at ground lambda = {}: {}",
            fmt_float(l),
            fmt_float(dissipation_rate(l))
        ));
    }
    for &l in &lambdas {
        let eg = ground_energy(l);
        for eps in linspace(eg, 1.0, n_energy) {
            let st = elliptic_parameters(eps, l)?;
            t.push_row(vec![
                fmt_float(l),
                fmt_float(eps),
                fmt_float(st.a2),
                fmt_float(st.k2),
                fmt_float(st.omega),
                fmt_float(oscillation_period(&st)),
                fmt_float(dissipation_a_of(&st)),
            ]);
        }
    }
    Ok(t)
}

/// A single damped semiclassical trajectory on the unit sphere, sampled
/// on a rescaled-time grid, with the late-time attractor echoed in the
/// header.
fn run_classical(cfg: &mut Config) -> Result<Table> {
    let lambda = check_positive("lambda", cfg.get_f64("lambda", 2.0)?)?;
    let gamma = check_positive("gamma", cfg.get_f64("gamma", 0.05)?)?;
    let theta = cfg.get_f64("theta", 2.0)?;
    let phi = cfg.get_f64("phi", 0.3)?;
    if !(theta.is_finite() && (0.0..=std::f64::consts::PI).contains(&theta)) {
        return Err(LmgError::InvalidParameter(format!(
            "key 'theta' must lie in [0, pi], got {theta}"
        )));
    }
    if !phi.is_finite() {
        return Err(LmgError::InvalidParameter(format!(
            "key 'phi' must be finite, got {phi}"
        )));
    }
    let t_max = check_positive("t_max", cfg.get_f64("t_max", 40.0)?)?;
    let n_times = check_grid_size("n_times", cfg.get_usize("n_times", 401)?)?;
    cfg.reject_unknown()?;

    let mut t = Table::new(Experiment::Classical, &["gamma_t", "x", "y", "z", "h"]);
    t.param("lambda", fmt_float(lambda));
    t.param("gamma", fmt_float(gamma));
    t.param("theta", fmt_float(theta));
    t.param("phi", fmt_float(phi));
    t.param("t_max", fmt_float(t_max));
    t.param("n_times", n_times);
    let (x2, z, y) = equilibrium_expectations(lambda);
    t.meta.push(format!(
        "equilibrium x_sq = {}, z = {}, y = {}",
        fmt_float(x2),
        fmt_float(z),
        fmt_float(y)
    ));

    let s0 = ClassicalState::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    );
    let gamma_ts = linspace(0.0, t_max, n_times);
    let ts: Vec<f64> = gamma_ts.iter().map(|&gt| gt / gamma).collect();
    let states = integrate_classical(&s0, lambda, gamma, &ts)?;
    for (gt, st) in gamma_ts.iter().zip(states.iter()) {
        t.push_row(vec![
            fmt_float(*gt),
            fmt_float(st.x),
            fmt_float(st.y),
            fmt_float(st.z),
            fmt_float(st.energy(lambda)),
        ]);
    }
    Ok(t)
}

/// Bath diagnostics: the spectral density profile, the dissipation
/// kernel profile, and the derived coefficient set (kernel moment,
/// diffusion matrix after positivity repair, correlation time, Markov
/// parameter) echoed in the header.
fn run_kernels(cfg: &mut Config) -> Result<Table> {
    let lambda = check_positive("lambda", cfg.get_f64("lambda", 0.5)?)?;
    let gamma = cfg.get_f64("gamma", 0.05)?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(LmgError::InvalidParameter(format!(
            "key 'gamma' must be nonnegative and finite, got {gamma}"
        )));
    }
    let s = cfg.get_f64("s", 20.0)?;
    let temperature = check_positive("temperature", cfg.get_f64("temperature", 1.0)?)?;
    let mode = cfg.get_choice("temperature_mode", "extensive", &["intensive", "extensive"])?;
    let omega_c = resolve_omega_c(cfg)?.unwrap_or_else(|| default_omega_c(lambda));
    let omega_max = check_positive("omega_max", cfg.get_f64("omega_max", 5.0 * omega_c)?)?;
    let n_omega = check_grid_size("n_omega", cfg.get_usize("n_omega", 201)?)?;
    let tau_max = check_positive("tau_max", cfg.get_f64("tau_max", 8.0 / omega_c)?)?;
    let n_tau = check_grid_size("n_tau", cfg.get_usize("n_tau", 201)?)?;
    cfg.reject_unknown()?;

    let params = ModelParams {
        lambda,
        gamma,
        s,
        temperature: if mode == "extensive" {
            Temperature::Extensive(temperature)
        } else {
            Temperature::Intensive(temperature)
        },
        omega_c,
        nu1_override: None,
    };
    params.validate()?;

    let mut t = Table::new(Experiment::Kernels, &["kind", "x", "value"]);
    t.param("lambda", fmt_float(lambda));
    t.param("gamma", fmt_float(gamma));
    t.param("s", fmt_float(s));
    t.param("temperature", fmt_float(temperature));
    t.param("temperature_mode", &mode);
    t.param("omega_c", fmt_float(omega_c));
    t.param("omega_max", fmt_float(omega_max));
    t.param("n_omega", n_omega);
    t.param("tau_max", fmt_float(tau_max));
    t.param("n_tau", n_tau);

    let moment = nu1(&params)?;
    t.meta.push(format!("nu1 = {}", fmt_float(moment)));
    let kappa = kappa_matrix(&params, true)?;
    t.meta.push(format!(
        "kappa_xx = {}, kappa_xy = {} + {} i, kappa_yy = {}",
        fmt_float(kappa.kxx),
        fmt_float(kappa.kxy.re),
        fmt_float(kappa.kxy.im),
        fmt_float(kappa.kyy)
    ));
    t.meta.push(format!(
        "bath correlation time = {}",
        fmt_float(crate::bath::bath_correlation_time(&params))
    ));
    let markov = markov_parameter(&params);
    t.meta.push(format!("markov parameter gamma tau_B = {}", fmt_float(markov)));
    if markov > MARKOV_WARN_THRESHOLD {
        t.meta.push(format!(
            "warning: gamma tau_B = {} exceeds the Markov threshold {}",
            fmt_float(markov),
            fmt_float(MARKOV_WARN_THRESHOLD)
        ));
    }

    for omega in linspace(0.0, omega_max, n_omega) {
        t.push_row(vec![
            "J".to_string(),
            fmt_float(omega),
            fmt_float(spectral_density(omega, omega_c)),
        ]);
    }
    // The dissipation kernel is odd with a jump at 0; sample tau > 0 only.
    for i in 1..=n_tau {
        let tau = tau_max * i as f64 / n_tau as f64;
        t.push_row(vec![
            "eta".to_string(),
            fmt_float(tau),
            fmt_float(noise_kernel(tau, omega_c)),
        ]);
    }
    Ok(t)
}

/// Frobenius residual of the Gibbs state under the extensive-temperature
/// generator versus system size. Consecutive-size residual ratios are
/// echoed in footers; the residual decays with S because the generator
/// leaves the Gibbs state stationary only up to subleading terms.
fn run_stationarity(cfg: &mut Config) -> Result<Table> {
    let s_list = cfg.get_f64_list("s_list", &[5.0, 10.0, 20.0, 40.0])?;
    let lambdas = cfg.get_f64_list("lambda", &[0.5, 2.0])?;
    let betas = cfg.get_f64_list("beta_tilde", &[1.0, 3.0])?;
    let gamma = cfg.get_f64("gamma", 0.05)?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(LmgError::InvalidParameter(format!(
            "key 'gamma' must be nonnegative and finite, got {gamma}"
        )));
    }
    let omega_c_fixed = resolve_omega_c(cfg)?;
    for &l in &lambdas {
        check_positive("lambda", l)?;
    }
    for &b in &betas {
        check_positive("beta_tilde", b)?;
    }
    cfg.reject_unknown()?;

    let mut t = Table::new(
        Experiment::Stationarity,
        &["lambda", "beta_tilde", "S", "residual"],
    );
    t.param("s_list", fmt_list(&s_list));
    t.param("lambda", fmt_list(&lambdas));
    t.param("beta_tilde", fmt_list(&betas));
    t.param("gamma", fmt_float(gamma));
    match omega_c_fixed {
        Some(w) => t.param("omega_c", fmt_float(w)),
        None => t.param("omega_c", "auto (10 max(1, lambda))"),
    }

    for &l in &lambdas {
        let omega_c = omega_c_fixed.unwrap_or_else(|| default_omega_c(l));
        for &b in &betas {
            let mut residuals: Vec<(f64, f64)> = Vec::new();
            for &s in &s_list {
                let ops = SpinOperators::new(s)?;
                let params = ModelParams {
                    lambda: l,
                    gamma,
                    s,
                    temperature: Temperature::Extensive(1.0 / b),
                    omega_c,
                    nu1_override: None,
                };
                let sup = build_lindbladian(&ops, &params)?;
                let gibbs = GibbsState::lmg(&ops, l, b)?;
                let r = stationarity_residual(&sup, &gibbs.rho);
                residuals.push((s, r));
                t.push_row(vec![
                    fmt_float(l),
                    fmt_float(b),
                    fmt_float(s),
                    fmt_float(r),
                ]);
            }
            for w in residuals.windows(2) {
                t.footers.push(format!(
                    "ratio lambda = {}, beta_tilde = {}, S {} -> {}: {}",
                    fmt_float(l),
                    fmt_float(b),
                    fmt_float(w[0].0),
                    fmt_float(w[1].0),
                    fmt_float(if w[0].1 > 0.0 { w[1].1 / w[0].1 } else { f64::NAN })
                ));
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn config_parses_comments_blanks_and_values_with_equals() {
        let mut cfg = Config::parse(
            "# a comment\n\nlambda = 0.5\nlabel = a=b\n  n_energy =  11 \n",
        )
        .unwrap();
        assert_eq!(cfg.get_f64("lambda", 0.0).unwrap(), 0.5);
        assert_eq!(cfg.get_str("label").unwrap(), "a=b");
        assert_eq!(cfg.get_usize("n_energy", 0).unwrap(), 11);
    }

    #[test]
    fn config_rejects_duplicates_bad_keys_and_bad_lines() {
        assert!(Config::parse("a = 1\na = 2\n").is_err());
        assert!(Config::parse("BadKey = 1\n").is_err());
        assert!(Config::parse("just a line\n").is_err());
        let mut cfg = Config::parse("n = x\n").unwrap();
        assert!(cfg.get_usize("n", 1).is_err());
        let mut cfg = Config::parse("v = 1,2,oops\n").unwrap();
        assert!(cfg.get_f64_list("v", &[]).is_err());
    }

    #[test]
    fn config_override_wins_and_unknown_keys_are_rejected() {
        let mut cfg = Config::parse("lambda = 0.5\nstray = 1\n").unwrap();
        cfg.set("lambda", "2.0").unwrap();
        assert_eq!(cfg.get_f64("lambda", 0.0).unwrap(), 2.0);
        let err = cfg.reject_unknown().unwrap_err();
        assert!(err.to_string().contains("stray"));
        cfg.mark_consumed("stray");
        assert!(cfg.reject_unknown().is_ok());
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[0.5, -1.25, 3.0e-17, 123456.789, f64::MIN_POSITIVE] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(Experiment::from_str(e.name()).unwrap(), e);
        }
        assert!(Experiment::from_str("figure3").is_err());
    }

    #[test]
    fn figure1_rows_cover_the_range_with_nonnegative_a() {
        let mut cfg = Config::parse("lambda = 0.5,2.0\nn_energy = 41\n").unwrap();
        let t = run_experiment(Experiment::Figure1, &mut cfg).unwrap();
        assert_eq!(t.rows.len(), 2 * 41);
        for row in &t.rows {
            let a: f64 = row[2].parse().unwrap();
            assert!(a >= -1e-12, "A = {a}");
        }
        // first and last epsilon of each block are the range endpoints
        let eps0: f64 = t.rows[0][1].parse().unwrap();
        let eps_last: f64 = t.rows[40][1].parse().unwrap();
        assert_eq!(eps0, -1.0);
        assert_eq!(eps_last, 1.0);
        let eps0b: f64 = t.rows[41][1].parse().unwrap();
        assert_eq!(eps0b, -1.25);
    }

    #[test]
    fn csv_output_is_deterministic_and_well_formed() {
        let run = || {
            let mut cfg = Config::parse("lambda = 2.0\nn_energy = 17\n").unwrap();
            run_experiment(Experiment::SlowFlow, &mut cfg).unwrap().to_csv()
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert!(lines.next().unwrap().starts_with("# lmg "));
        let column_row = a
            .lines()
            .find(|l| !l.starts_with('#'))
            .unwrap();
        assert_eq!(column_row, "lambda,epsilon,a_sq,k_sq,omega,period,A");
        let data_rows = a
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .count();
        assert_eq!(data_rows, 1 + 17);
    }

    #[test]
    fn classical_run_reports_attractor_and_reaches_it() {
        let mut cfg =
            Config::parse("lambda = 2.0\ngamma = 0.05\nt_max = 40\nn_times = 11\n").unwrap();
        let t = run_experiment(Experiment::Classical, &mut cfg).unwrap();
        let last = t.rows.last().unwrap();
        let x: f64 = last[1].parse().unwrap();
        let y: f64 = last[2].parse().unwrap();
        let z: f64 = last[3].parse().unwrap();
        assert!((x * x - 0.75).abs() < 1e-3, "x^2 = {}", x * x);
        assert!(y.abs() < 1e-3);
        assert!((z - 0.5).abs() < 1e-3);
    }

    #[test]
    fn kernels_run_echoes_coefficients() {
        let mut cfg = Config::parse("n_omega = 5\nn_tau = 4\n").unwrap();
        let t = run_experiment(Experiment::Kernels, &mut cfg).unwrap();
        assert!(t.meta.iter().any(|l| l.starts_with("nu1 = ")));
        assert!(t.meta.iter().any(|l| l.starts_with("kappa_xx = ")));
        assert_eq!(t.rows.len(), 5 + 4);
        assert_eq!(t.rows[0][0], "J");
        assert_eq!(t.rows.last().unwrap()[0], "eta");
    }

    #[test]
    fn stationarity_residuals_shrink_with_size() {
        let mut cfg = Config::parse(
            "s_list = 4,8\nlambda = 2.0\nbeta_tilde = 1.0\ngamma = 0.05\n",
        )
        .unwrap();
        let t = run_experiment(Experiment::Stationarity, &mut cfg).unwrap();
        assert_eq!(t.rows.len(), 2);
        let r4: f64 = t.rows[0][3].parse().unwrap();
        let r8: f64 = t.rows[1][3].parse().unwrap();
        assert!(r8 < 0.7 * r4, "r4 = {r4}, r8 = {r8}");
        assert!(t.footers.iter().any(|l| l.starts_with("ratio ")));
    }

    #[test]
    fn gap_scan_continues_past_bad_sizes() {
        // 3.3 is not a half-integer: its row fails, the others survive.
        let mut cfg = Config::parse("s_list = 2,3.3,4\ngamma = 0.05\n").unwrap();
        let t = run_experiment(Experiment::GapScan, &mut cfg).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.footers.iter().any(|l| l.starts_with("error S = ")));
        for row in &t.rows {
            let gap: f64 = row[1].parse().unwrap();
            assert!(gap > 0.0);
        }
    }

    #[test]
    fn figure2_small_case_converges_and_echoes_gibbs() {
        let mut cfg = Config::parse(
            "lambda = 0.5\nttilde = 2.0\ns = 4\ngamma = 0.05\nt_max = 80\nn_times = 9\ninitial_frac = 0.3\nconv_tol = 0.02\n",
        )
        .unwrap();
        let t = run_experiment(Experiment::Figure2, &mut cfg).unwrap();
        assert_eq!(t.rows.len(), 9);
        assert!(t.meta.iter().any(|l| l.starts_with("gibbs ")));
        assert!(
            t.footers.iter().all(|l| !l.starts_with("nonconverged")),
            "footers: {:?}",
            t.footers
        );
        // the final sample sits on the Gibbs value echoed in the header
        let gibbs: f64 = t
            .meta
            .iter()
            .find(|l| l.starts_with("gibbs "))
            .and_then(|l| l.rsplit_once("h = "))
            .unwrap()
            .1
            .parse()
            .unwrap();
        let h_end: f64 = t.rows[8][4].parse().unwrap();
        assert!((h_end - gibbs).abs() < 0.02, "h_end = {h_end}, gibbs = {gibbs}");
    }

    #[test]
    fn exit_codes_partition_the_error_type() {
        assert_eq!(exit_code_for(&LmgError::InvalidParameter("x".into())), 2);
        assert_eq!(exit_code_for(&LmgError::Domain("x".into())), 2);
        assert_eq!(exit_code_for(&LmgError::DegenerateTemperature), 2);
        assert_eq!(exit_code_for(&LmgError::ResourceLimit("x".into())), 2);
        assert_eq!(exit_code_for(&LmgError::ContractViolation("x".into())), 3);
        assert_eq!(exit_code_for(&LmgError::Numerical("x".into())), 3);
        assert_eq!(
            exit_code_for(&LmgError::FitQuality { r_squared: 0.0, required: 1.0 }),
            3
        );
    }
}
