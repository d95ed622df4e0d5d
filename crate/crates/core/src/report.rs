//! Method-versus-method comparison tables, beta sweeps and unit conversion.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::approximants::{self, ApproxMethod};
use crate::csv::CsvTable;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{self, OracleConfig};
use crate::solver::{self, DEFAULT_TERMS};

/// A trajectory source that can appear as a report column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Ladm,
    Hbm,
    Dtm,
    Hpm,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Ladm, Method::Hbm, Method::Dtm, Method::Hpm, Method::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ladm => "ladm",
            Method::Hbm => "hbm",
            Method::Dtm => "dtm",
            Method::Hpm => "hpm",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}` (expected ladm, hbm, dtm, hpm, oracle)")))
    }
}

/// Parses a comma-separated method list such as `ladm,hbm,oracle`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let methods = list.split(',').map(str::parse).collect::<Result<Vec<Method>>>()?;
    for (i, m) in methods.iter().enumerate() {
        if methods[..i].contains(m) {
            return Err(Error::Parse(format!("method `{m}` listed twice")));
        }
    }
    Ok(methods)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub max_abs: f64,
    pub rms: f64,
    /// Grid points that entered the summary.
    pub points: usize,
}

impl ErrorSummary {
    fn from_diffs(diffs: &[f64]) -> Self {
        let max_abs = diffs.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let rms = if diffs.is_empty() {
            0.0
        } else {
            (diffs.iter().map(|d| d * d).sum::<f64>() / diffs.len() as f64).sqrt()
        };
        Self {
            max_abs,
            rms,
            points: diffs.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencySummary {
    /// `(1 - beta^2)^(3/4)`, the frequency of the LADM series.
    pub ladm_omega: f64,
    /// Parametric harmonic-balance frequency.
    pub hbm_omega: f64,
    pub oracle_period: f64,
    /// `2 pi / oracle_period`
    pub oracle_omega: f64,
}

impl FrequencySummary {
    pub fn compute(beta: f64, tol: f64) -> Result<Self> {
        let ladm_omega = (1.0 - beta * beta).powf(0.75);
        let hbm_omega = approximants::hbm_omega(beta)?;
        let cfg = OracleConfig::with_t_end(oracle::horizon_for_periods(beta, 2.0)).with_tol(tol);
        let oracle_period = oracle::period(beta, &cfg)?;
        Ok(Self {
            ladm_omega,
            hbm_omega,
            oracle_period,
            oracle_omega: TAU / oracle_period,
        })
    }
}

/// One comparison study at fixed `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub beta: f64,
    pub grid: Vec<f64>,
    pub columns: BTreeMap<String, Vec<f64>>,
    /// Error against the oracle for every non-oracle method.
    pub errors: BTreeMap<String, ErrorSummary>,
    pub frequency_summary: FrequencySummary,
}

impl ComparisonReport {
    /// Columns in the canonical method order.
    pub fn methods(&self) -> Vec<Method> {
        Method::ALL
            .into_iter()
            .filter(|m| self.columns.contains_key(m.as_str()))
            .collect()
    }

    /// CSV with `t`, one column per method in `order`, then `err_<method>`
    /// (absolute error against the oracle) for each non-oracle method.
    pub fn to_csv(&self, order: &[Method], oracle_column: &[f64]) -> CsvTable {
        let mut header = vec!["t".to_owned()];
        header.extend(order.iter().map(|m| m.as_str().to_owned()));
        let err_methods: Vec<Method> = order.iter().copied().filter(|m| *m != Method::Oracle).collect();
        header.extend(err_methods.iter().map(|m| format!("err_{m}")));
        let mut table = CsvTable::new(header);
        for (i, &t) in self.grid.iter().enumerate() {
            let mut row = vec![t];
            row.extend(order.iter().map(|m| self.columns[m.as_str()][i]));
            row.extend(
                err_methods
                    .iter()
                    .map(|m| (self.columns[m.as_str()][i] - oracle_column[i]).abs()),
            );
            table.push(row);
        }
        table
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareParams {
    pub beta: f64,
    pub t_max: f64,
    pub dt: f64,
    pub methods: Vec<Method>,
    pub n_terms: usize,
    pub tol: f64,
}

impl CompareParams {
    pub fn new(beta: f64, methods: Vec<Method>) -> Self {
        Self {
            beta,
            t_max: 10.0,
            dt: 0.5,
            methods,
            n_terms: DEFAULT_TERMS,
            tol: 1e-12,
        }
    }
}

/// Output of [`compare`]: the report plus what is needed to render its CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub report: ComparisonReport,
    pub order: Vec<Method>,
    pub oracle_column: Vec<f64>,
}

impl Comparison {
    pub fn csv(&self) -> CsvTable {
        self.report.to_csv(&self.order, &self.oracle_column)
    }
}

/// Uniform grid `0, dt, 2 dt, ...` up to and including `t_max` (within rounding).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
    }
    let n = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * dt).collect())
}

/// Evaluates every requested method on the grid and measures it against the
/// oracle.
pub fn compare(params: &CompareParams, exec: Execution) -> Result<Comparison> {
    let beta = params.beta;
    crate::adomian::check_beta(beta)?;
    if params.methods.is_empty() {
        return Err(Error::Precondition("at least one method is required".into()));
    }
    let grid = time_grid(params.t_max, params.dt)?;

    let ladm = solver::oscillator_series(beta, params.n_terms)?.full_sum();
    let hbm = approximants::hbm(beta)?;
    let mut tabulated = BTreeMap::new();
    for m in &params.methods {
        let approx = match m {
            Method::Dtm => ApproxMethod::Dtm,
            Method::Hpm => ApproxMethod::Hpm,
            _ => continue,
        };
        tabulated.insert(*m, approximants::tabulated(approx, beta)?);
    }

    let t_end = grid[grid.len() - 1].max(params.t_max);
    let trajectory = oracle::integrate(beta, &OracleConfig::with_t_end(t_end).with_tol(params.tol))?;
    let horizon = trajectory.t_end();
    let in_horizon: Vec<f64> = grid.iter().copied().filter(|&t| t <= horizon).collect();
    let mut oracle_column = trajectory.sample_on_grid(&in_horizon)?;
    oracle_column.resize(grid.len(), f64::NAN);

    let mut columns = BTreeMap::new();
    for &m in &params.methods {
        let values = match m {
            Method::Ladm => exec.map(&grid, |&t| ladm.eval(t)),
            Method::Hbm => exec.map(&grid, |&t| hbm.eval(t)),
            Method::Dtm | Method::Hpm => {
                let s = &tabulated[&m];
                exec.map(&grid, |&t| s.eval(t))
            }
            Method::Oracle => oracle_column.clone(),
        };
        columns.insert(m.as_str().to_owned(), values);
    }

    let mut errors = BTreeMap::new();
    for (name, values) in &columns {
        if name == Method::Oracle.as_str() {
            continue;
        }
        let diffs: Vec<f64> = values
            .iter()
            .zip(&oracle_column)
            .take(in_horizon.len())
            .map(|(v, o)| v - o)
            .collect();
        errors.insert(name.clone(), ErrorSummary::from_diffs(&diffs));
    }

    let frequency_summary = FrequencySummary::compute(beta, params.tol)?;

    Ok(Comparison {
        report: ComparisonReport {
            beta,
            grid,
            columns,
            errors,
            frequency_summary,
        },
        order: params.methods.clone(),
        oracle_column,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    pub t_max: f64,
    pub dt: f64,
    pub n_terms: usize,
    pub tol: f64,
}

impl SweepParams {
    pub fn new(beta_min: f64, beta_max: f64, steps: usize) -> Self {
        Self {
            beta_min,
            beta_max,
            steps,
            t_max: 10.0,
            dt: 0.1,
            n_terms: DEFAULT_TERMS,
            tol: 1e-12,
        }
    }

    pub fn betas(&self) -> Vec<f64> {
        let span = self.beta_max - self.beta_min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.beta_min + span * i as f64 / last)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !(0.0 < self.beta_min && self.beta_min < self.beta_max && self.beta_max < 1.0) {
            return Err(Error::Domain(format!(
                "sweep needs 0 < beta_min < beta_max < 1, got [{}, {}]",
                self.beta_min, self.beta_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::Domain(format!(
                "sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    /// Max |LADM - oracle| on the sweep grid.
    pub ladm_max_abs_err: f64,
    pub ladm_omega: f64,
    pub hbm_omega: f64,
    pub oracle_period: f64,
}

/// Accuracy of the truncated LADM series across a range of initial velocities.
pub fn sweep(params: &SweepParams, exec: Execution) -> Result<Vec<SweepRow>> {
    params.validate()?;
    let grid = time_grid(params.t_max, params.dt)?;
    exec.try_map(&params.betas(), |&beta| sweep_point(beta, &grid, params))
}

fn sweep_point(beta: f64, grid: &[f64], params: &SweepParams) -> Result<SweepRow> {
    let ladm = solver::oscillator_series(beta, params.n_terms)?.full_sum();
    let t_end = grid[grid.len() - 1].max(params.t_max);
    let traj = oracle::integrate(beta, &OracleConfig::with_t_end(t_end).with_tol(params.tol))?;
    let mut err: f64 = 0.0;
    for &t in grid {
        err = err.max((ladm.eval(t) - traj.position_at(t)?).abs());
    }
    let freq = FrequencySummary::compute(beta, params.tol)?;
    Ok(SweepRow {
        beta,
        ladm_max_abs_err: err,
        ladm_omega: freq.ladm_omega,
        hbm_omega: freq.hbm_omega,
        oracle_period: freq.oracle_period,
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> CsvTable {
    let header = ["beta", "max_abs_err_ladm", "omega_ladm", "omega_hbm", "oracle_period"];
    let mut table = CsvTable::new(header.iter().map(|s| (*s).to_owned()).collect());
    for r in rows {
        table.push(vec![
            r.beta,
            r.ladm_max_abs_err,
            r.ladm_omega,
            r.hbm_omega,
            r.oracle_period,
        ]);
    }
    table
}

/// Conversion between dimensionless `(t, x)` and dimensional `(t_bar, x_bar)`
/// with `x = omega0 x_bar / c` and `t = omega0 t_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub omega0: f64,
    pub c: f64,
}

impl Units {
    pub fn new(omega0: f64, c: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) || !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!(
                "omega0 and c must be positive, got omega0 = {omega0}, c = {c}"
            )));
        }
        Ok(Self { omega0, c })
    }

    pub fn to_dimensional(&self, t: f64, x: f64) -> (f64, f64) {
        (t / self.omega0, self.c * x / self.omega0)
    }

    pub fn to_dimensionless(&self, t_bar: f64, x_bar: f64) -> (f64, f64) {
        (self.omega0 * t_bar, self.omega0 * x_bar / self.c)
    }
}

/// LADM trajectory on a grid in both unit systems: `t, x, t_bar, x_bar`.
pub fn dimensional_table(beta: f64, units: Units, t_max: f64, dt: f64, n_terms: usize) -> Result<CsvTable> {
    let ladm = solver::oscillator_series(beta, n_terms)?.full_sum();
    let mut table = CsvTable::new(["t", "x", "t_bar", "x_bar"].iter().map(|s| (*s).to_owned()).collect());
    for t in time_grid(t_max, dt)? {
        let x = ladm.eval(t);
        let (tb, xb) = units.to_dimensional(t, x);
        table.push(vec![t, x, tb, xb]);
    }
    Ok(table)
}
