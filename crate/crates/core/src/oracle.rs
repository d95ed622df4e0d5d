//! Reference solution of `x'' + (1 - x'^2)^(3/2) x = 0` by adaptive
//! Dormand-Prince 5(4) integration with continuous output.
//!
//! The relativistic energy `E = (1 - v^2)^(-1/2) + x^2/2` is an exact first
//! integral (`dE/dt = v v' (1 - v^2)^(-3/2) + x v = 0`); it is logged, never
//! enforced.

use serde::{Deserialize, Serialize};

use crate::adomian::check_beta;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    pub max_steps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            t_end: 10.0,
            max_steps: 1_000_000,
        }
    }
}

impl OracleConfig {
    pub fn with_t_end(t_end: f64) -> Self {
        Self {
            t_end,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self.abs_tol = tol * 1e-2;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Domain(format!("t_end must be positive, got {}", self.t_end)));
        }
        Ok(())
    }
}

/// An accepted state `(t, x, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

type State = [f64; 2];

/// Continuous extension of one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DenseStep {
    t0: f64,
    h: f64,
    rcont: [State; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> State {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        std::array::from_fn(|i| r[0][i] + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i]))))
    }
}

/// Dense numerical trajectory of the oscillator.
#[derive(Debug, Clone)]
pub struct OracleTrajectory {
    pub beta: f64,
    pub samples: Vec<Sample>,
    steps: Vec<DenseStep>,
    /// `max |E(t) - E(0)|` over the accepted samples.
    pub energy_drift: f64,
    pub rejected_steps: usize,
}

impl OracleTrajectory {
    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn accepted_steps(&self) -> usize {
        self.steps.len()
    }

    /// Position and velocity from the dense output.
    pub fn state_at(&self, t: f64) -> Result<(f64, f64)> {
        let t_end = self.t_end();
        if !(0.0..=t_end).contains(&t) {
            return Err(Error::Range { t, t_end });
        }
        // First step whose end point is >= t.
        let idx = self.samples.partition_point(|s| s.t < t);
        let sample = self.samples[idx];
        if sample.t == t {
            return Ok((sample.x, sample.v));
        }
        let [x, v] = self.steps[idx - 1].eval(t);
        Ok((x, v))
    }

    pub fn position_at(&self, t: f64) -> Result<f64> {
        self.state_at(t).map(|(x, _)| x)
    }

    /// Dense-output positions on a time grid.
    pub fn sample_on_grid(&self, ts: &[f64]) -> Result<Vec<f64>> {
        ts.iter().map(|&t| self.position_at(t)).collect()
    }

    /// Maximum `|v|` over the accepted samples.
    pub fn max_speed(&self) -> f64 {
        self.samples.iter().map(|s| s.v.abs()).fold(0.0, f64::max)
    }

    /// Upward zero crossings of `x`, including `t = 0`, each located by
    /// bisection on the dense output.
    pub fn upward_crossings(&self, x_tol: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if let Some(first) = self.samples.first() {
            if first.x == 0.0 && first.v > 0.0 {
                out.push(first.t);
            }
        }
        for (i, pair) in self.samples.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            if a.x < 0.0 && b.x >= 0.0 {
                out.push(self.bisect_root(&self.steps[i], a.t, b.t, x_tol));
            }
        }
        out
    }

    fn bisect_root(&self, step: &DenseStep, mut lo: f64, mut hi: f64, x_tol: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let x = step.eval(mid)[0];
            if x.abs() < x_tol && hi - lo < 1e-12 {
                return mid;
            }
            if x < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs() {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Dimensionless relativistic energy `(1 - v^2)^(-1/2) + x^2/2`.
pub fn energy(x: f64, v: f64) -> Result<f64> {
    if v.is_nan() || v.abs() >= 1.0 {
        return Err(Error::Domain(format!("speed must be below 1, got v = {v}")));
    }
    Ok((1.0 - v * v).powf(-0.5) + 0.5 * x * x)
}

fn rhs(y: &State) -> State {
    let v = y[1];
    [v, -(1.0 - v * v).powf(1.5) * y[0]]
}

// Dormand-Prince 5(4) tableau. The system is autonomous, so the nodes c_i
// are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// PI step-size control.
const SAFETY: f64 = 0.8;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const PI_BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - PI_BETA * 0.75;

fn combine(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

struct Trial {
    y_new: State,
    k7: State,
    err: f64,
    stages: [State; 6],
}

fn trial_step(y: &State, k1: &State, h: f64, rel_tol: f64, abs_tol: f64) -> Option<Trial> {
    let k2 = rhs(&combine(y, h, &[(A21, k1)]));
    let k3 = rhs(&combine(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(&combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(&combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = rhs(&combine(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let y_new = combine(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    if y_new.iter().any(|c| !c.is_finite()) || y_new[1].abs() >= 1.0 {
        return None;
    }
    let k7 = rhs(&y_new);
    let mut sq = 0.0;
    for i in 0..2 {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sk = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
        sq += (e / sk).powi(2);
    }
    let err = (sq / 2.0).sqrt();
    if !err.is_finite() {
        return None;
    }
    Some(Trial {
        y_new,
        k7,
        err,
        stages: [*k1, k2, k3, k4, k5, k6],
    })
}

fn initial_step(y: &State, k1: &State, cfg: &OracleConfig) -> f64 {
    let norm = |a: &State| {
        let s: f64 = (0..2)
            .map(|i| (a[i] / (cfg.abs_tol + cfg.rel_tol * y[i].abs())).powi(2))
            .sum();
        (s / 2.0).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(k1);
    let h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(cfg.t_end);
    let y1 = combine(y, h0, &[(1.0, k1)]);
    let k2 = rhs(&y1);
    let diff: State = [k2[0] - k1[0], k2[1] - k1[1]];
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(cfg.t_end)
}

/// Integrates the oscillator from `(x, v) = (0, beta)` to `cfg.t_end`.
pub fn integrate(beta: f64, cfg: &OracleConfig) -> Result<OracleTrajectory> {
    check_beta(beta)?;
    integrate_from(0.0, beta, cfg)
}

/// Integrates from an arbitrary state `(x0, v0)` at `t = 0`.
pub fn integrate_from(x0: f64, v0: f64, cfg: &OracleConfig) -> Result<OracleTrajectory> {
    cfg.validate()?;
    let e0 = energy(x0, v0)?;

    let mut t = 0.0;
    let mut y: State = [x0, v0];
    let mut k1 = rhs(&y);
    let mut h = initial_step(&y, &k1, cfg);
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut rejected = 0;
    let mut samples = vec![Sample { t, x: x0, v: v0 }];
    let mut steps = Vec::new();
    let mut drift: f64 = 0.0;
    let mut attempts = 0usize;

    while t < cfg.t_end {
        attempts += 1;
        if attempts > cfg.max_steps {
            return Err(Error::StepBudget {
                max_steps: cfg.max_steps,
                t,
            });
        }
        let landing = t + h >= cfg.t_end;
        if landing {
            h = cfg.t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure {
                t,
                x: y[0],
                v: y[1],
                reason: "step size underflow".into(),
            });
        }

        let Some(trial) = trial_step(&y, &k1, h, cfg.rel_tol, cfg.abs_tol) else {
            // A stage left |v| < 1; retreat sharply.
            h *= 0.25;
            last_rejected = true;
            rejected += 1;
            continue;
        };

        let fac11 = trial.err.powf(EXPO);
        let fac = (fac11 / fac_old.powf(PI_BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        let mut h_new = h / fac;

        if trial.err <= 1.0 {
            fac_old = trial.err.max(1e-4);
            let [k1s, _, k3, k4, k5, k6] = trial.stages;
            let ydiff: State = [trial.y_new[0] - y[0], trial.y_new[1] - y[1]];
            let bspl: State = std::array::from_fn(|i| h * k1s[i] - ydiff[i]);
            let rcont4: State = std::array::from_fn(|i| ydiff[i] - h * trial.k7[i] - bspl[i]);
            let rcont5: State = std::array::from_fn(|i| {
                h * (D1 * k1s[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * trial.k7[i])
            });
            steps.push(DenseStep {
                t0: t,
                h,
                rcont: [y, ydiff, bspl, rcont4, rcont5],
            });

            t = if landing { cfg.t_end } else { t + h };
            y = trial.y_new;
            k1 = trial.k7;
            let e = energy(y[0], y[1])?;
            drift = drift.max((e - e0).abs());
            samples.push(Sample { t, x: y[0], v: y[1] });

            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
        } else {
            h_new = h / (fac11 / SAFETY).min(1.0 / FAC_MIN);
            last_rejected = true;
            rejected += 1;
        }
        h = h_new;
    }

    Ok(OracleTrajectory {
        beta: v0,
        samples,
        steps,
        energy_drift: drift,
        rejected_steps: rejected,
    })
}

/// Oscillation period from the spacing of upward zero crossings of `x`.
pub fn period(beta: f64, cfg: &OracleConfig) -> Result<f64> {
    let traj = integrate(beta, cfg)?;
    period_of(&traj, cfg.abs_tol)
}

/// Mean spacing of the upward zero crossings of an existing trajectory.
pub fn period_of(traj: &OracleTrajectory, x_tol: f64) -> Result<f64> {
    let crossings = traj.upward_crossings(x_tol);
    if crossings.len() < 2 {
        return Err(Error::InsufficientHorizon { found: crossings.len() });
    }
    Ok((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// Horizon that covers at least `periods` oscillations for any `0 < beta < 1`.
///
/// The series frequency `(1 - beta^2)^(3/4)` never exceeds the true frequency,
/// so its period is a safe overestimate.
pub fn horizon_for_periods(beta: f64, periods: f64) -> f64 {
    let omega_lower = (1.0 - beta * beta).powf(0.75);
    (periods * std::f64::consts::TAU / omega_lower).max(1.0) * 1.05
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn energy_examples() {
        assert_eq!(energy(0.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(energy(0.0, 0.1).unwrap(), 1.005_037_815_259_212_3, epsilon = 1e-15);
        assert_eq!(energy(0.3, -0.4).unwrap(), energy(-0.3, 0.4).unwrap());
        assert!(matches!(energy(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(energy(0.0, -1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn initial_sample_is_exact() {
        let traj = integrate(0.3, &OracleConfig::with_t_end(1.0)).unwrap();
        assert_eq!(traj.samples[0], Sample { t: 0.0, x: 0.0, v: 0.3 });
        assert_eq!(traj.position_at(0.0).unwrap(), 0.0);
        assert_eq!(traj.t_end(), 1.0);
        assert!(traj.samples.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn energy_is_conserved_at_tight_tolerance() {
        let traj = integrate(0.1, &OracleConfig::with_t_end(10.0)).unwrap();
        assert!(traj.energy_drift <= 1e-9, "{}", traj.energy_drift);
    }

    #[test]
    fn non_relativistic_limit_is_a_sine() {
        let beta = 1e-6;
        let traj = integrate(beta, &OracleConfig::with_t_end(10.0)).unwrap();
        for i in 0..=100 {
            let t = 0.1 * f64::from(i);
            assert!((traj.position_at(t).unwrap() - beta * t.sin()).abs() < 1e-9);
        }
        let p = period(beta, &OracleConfig::with_t_end(20.0)).unwrap();
        assert!((p - TAU).abs() < 1e-6, "{p}");
    }

    #[test]
    fn period_values() {
        let cfg = OracleConfig::with_t_end(20.0);
        let p = period(0.1, &cfg).unwrap();
        assert!((p - TAU / 0.99874).abs() < 1e-2);
        // High-order reference integration gives 6.29504605.
        assert!((p - 6.295_046_05).abs() < 1e-7, "{p}");

        let mut last = 0.0;
        for beta in [0.1, 0.2, 0.5, 0.9] {
            let p = period(beta, &OracleConfig::with_t_end(horizon_for_periods(beta, 2.0))).unwrap();
            assert!(p > last, "{beta}: {p}");
            last = p;
        }
    }

    #[test]
    fn short_horizon_is_reported() {
        let err = period(0.1, &OracleConfig::with_t_end(3.0)).unwrap_err();
        assert!(matches!(err, Error::InsufficientHorizon { found: 1 }));
    }

    #[test]
    fn grid_sampling() {
        let traj = integrate(0.2, &OracleConfig::with_t_end(5.0)).unwrap();
        assert_eq!(traj.sample_on_grid(&[0.0]).unwrap(), vec![0.0]);
        let s = traj.samples[7];
        assert_eq!(traj.position_at(s.t).unwrap(), s.x);
        assert!(matches!(traj.position_at(5.5), Err(Error::Range { .. })));
        assert!(matches!(traj.position_at(-0.1), Err(Error::Range { .. })));
    }

    #[test]
    fn dense_output_midpoints_track_a_tighter_solution() {
        let cfg = OracleConfig::with_t_end(10.0).with_tol(1e-10);
        let coarse = integrate(0.5, &cfg).unwrap();
        let fine = integrate(0.5, &OracleConfig::with_t_end(10.0).with_tol(1e-13)).unwrap();
        let scale = coarse.samples.iter().map(|s| s.x.abs()).fold(0.0, f64::max);
        for w in coarse.samples.windows(2) {
            let mid = 0.5 * (w[0].t + w[1].t);
            let err = (coarse.position_at(mid).unwrap() - fine.position_at(mid).unwrap()).abs();
            assert!(err <= 10.0 * cfg.rel_tol * scale, "t = {mid}: {err}");
        }
    }

    #[test]
    fn bad_config_is_rejected() {
        let mut cfg = OracleConfig::with_t_end(-1.0);
        assert!(matches!(integrate(0.1, &cfg), Err(Error::Domain(_))));
        cfg.t_end = 10.0;
        cfg.rel_tol = 0.0;
        assert!(matches!(integrate(0.1, &cfg), Err(Error::Domain(_))));
        assert!(matches!(
            integrate(1.0, &OracleConfig::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn step_budget_is_enforced() {
        let cfg = OracleConfig {
            max_steps: 5,
            ..OracleConfig::with_t_end(100.0)
        };
        assert!(matches!(
            integrate(0.1, &cfg),
            Err(Error::StepBudget { max_steps: 5, .. })
        ));
    }
}
