//! The LADM recurrence `x_0 = alpha + beta t`, `x_(n+1) = -L^-1[s^-2 L{A_n}]`.
//!
//! The Laplace round trip is never performed numerically: on factorial-scaled
//! monomials it is exactly [`TimePolynomial::double_integrate`].

use serde::{Deserialize, Serialize};

use crate::adomian::{self, AnalyticNonlinearity};
use crate::error::{Error, Result};
use crate::series::TimePolynomial;

/// Number of terms used for the reference examples.
pub const DEFAULT_TERMS: usize = 14;

/// The nonlinear operator of `x'' + N(x) = 0`.
#[derive(Debug, Clone)]
pub enum Nonlinearity {
    /// A function of the state alone, expanded with the generic engine.
    Analytic(AnalyticNonlinearity),
    /// `N(x) = (1 - x'^2)^(3/2) x` with the frozen-velocity Adomian sequence.
    RelativisticOscillator,
}

/// Initial value problem `x'' + N(x) = 0`, `x(0) = alpha`, `x'(0) = beta`.
#[derive(Debug, Clone)]
pub struct IvpSpec {
    pub alpha: f64,
    pub beta: f64,
    pub nonlinearity: Nonlinearity,
}

impl IvpSpec {
    pub fn new(alpha: f64, beta: f64, nonlinearity: AnalyticNonlinearity) -> Self {
        Self {
            alpha,
            beta,
            nonlinearity: Nonlinearity::Analytic(nonlinearity),
        }
    }

    /// The relativistic oscillator with `x(0) = 0`, `x'(0) = beta`.
    pub fn oscillator(beta: f64) -> Self {
        Self {
            alpha: 0.0,
            beta,
            nonlinearity: Nonlinearity::RelativisticOscillator,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::Domain("initial data must be finite".into()));
        }
        if let Nonlinearity::RelativisticOscillator = self.nonlinearity {
            if self.alpha != 0.0 {
                return Err(Error::Domain(format!(
                    "the oscillator starts at x(0) = 0, got alpha = {}",
                    self.alpha
                )));
            }
            adomian::check_beta(self.beta)?;
        }
        Ok(())
    }
}

/// Decomposition components `x_0, x_1, ...` of an LADM solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub components: Vec<TimePolynomial>,
    pub alpha: f64,
    pub beta: f64,
    /// `(1 - beta^2)^(3/2)`; only set for oscillator solutions.
    pub kappa: Option<f64>,
}

/// Truncation error bound of an oscillator partial sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    /// Magnitude of the first omitted term.
    pub bound: f64,
    /// Whether the omitted terms decrease monotonically from the first one on,
    /// which is what makes `bound` rigorous.
    pub alternating: bool,
}

impl SeriesSolution {
    pub fn n_terms(&self) -> usize {
        self.components.len()
    }

    pub fn is_oscillator(&self) -> bool {
        self.kappa.is_some()
    }

    /// `x_0 + ... + x_k`.
    pub fn partial_sum(&self, k: usize) -> Result<TimePolynomial> {
        if k >= self.components.len() {
            return Err(Error::Index {
                index: k,
                len: self.components.len(),
            });
        }
        Ok(self.components[..=k].iter().cloned().sum())
    }

    /// Sum of every component.
    pub fn full_sum(&self) -> TimePolynomial {
        self.components.iter().cloned().sum()
    }

    /// Series fundamental frequency `kappa^(1/2) = (1 - beta^2)^(3/4)`.
    pub fn omega(&self) -> Option<f64> {
        self.kappa.map(f64::sqrt)
    }

    /// Alternating-series remainder bound
    /// `beta kappa^N |t|^(2N+1) / (2N+1)!` for `N = n_terms`.
    pub fn tail_bound(&self, t: f64) -> Result<TailBound> {
        let kappa = self
            .kappa
            .ok_or_else(|| Error::Precondition("tail bounds are only available for oscillator solutions".into()))?;
        let n = self.components.len();
        let degree = 2 * n + 1;
        let mut bound = self.beta * kappa.powi(n as i32);
        let at = t.abs();
        for k in 1..=degree {
            bound *= at / k as f64;
        }
        let ratio_denominator = ((2 * n + 2) * (2 * n + 3)) as f64;
        Ok(TailBound {
            bound,
            alternating: kappa * t * t < ratio_denominator,
        })
    }

    /// `|x'' + (1 - x'^2)^(3/2) x|` of the full partial sum at `t`.
    ///
    /// This measures the truncated series against the true nonlinear equation,
    /// not the frozen-coefficient one the recurrence solves.
    pub fn residual(&self, t: f64) -> Result<f64> {
        if !self.is_oscillator() {
            return Err(Error::Precondition(
                "residual is defined for oscillator solutions".into(),
            ));
        }
        let x = self.full_sum();
        let v = x.derivative();
        let a = v.derivative();
        let (xt, vt, at) = (x.eval(t), v.eval(t), a.eval(t));
        Ok((at + (1.0 - vt * vt).powf(1.5) * xt).abs())
    }
}

/// Runs the recurrence for `n_terms` components, dropping monomials above
/// `max_degree`.
pub fn solve_ivp(spec: &IvpSpec, n_terms: usize, max_degree: u32) -> Result<SeriesSolution> {
    if n_terms == 0 {
        return Err(Error::Precondition("n_terms must be at least 1".into()));
    }
    spec.validate()?;

    let mut components = Vec::with_capacity(n_terms);
    components.push(TimePolynomial::linear(spec.alpha, spec.beta).truncate(max_degree));

    let kappa = match &spec.nonlinearity {
        Nonlinearity::RelativisticOscillator => {
            for m in 0..n_terms - 1 {
                let a_m = adomian::oscillator_adomian(m, &components[m], spec.beta)?;
                components.push((-a_m.double_integrate()).truncate(max_degree));
            }
            Some(adomian::kappa(spec.beta)?)
        }
        Nonlinearity::Analytic(n) => {
            for m in 0..n_terms - 1 {
                let seq = adomian::adomian_polynomials(n, &components, m, max_degree)?;
                components.push((-seq.polys[m].double_integrate()).truncate(max_degree));
            }
            None
        }
    };

    Ok(SeriesSolution {
        components,
        alpha: spec.alpha,
        beta: spec.beta,
        kappa,
    })
}

/// Closed form of the oscillator series: `x_n = beta (-kappa)^n t^(2n+1)/(2n+1)!`.
pub fn oscillator_series(beta: f64, n_terms: usize) -> Result<SeriesSolution> {
    if n_terms == 0 {
        return Err(Error::Precondition("n_terms must be at least 1".into()));
    }
    let kappa = adomian::kappa(beta)?;
    let components = (0..n_terms)
        .map(|n| TimePolynomial::monomial(2 * n as u32 + 1, beta * (-kappa).powi(n as i32)))
        .collect();
    Ok(SeriesSolution {
        components,
        alpha: 0.0,
        beta,
        kappa: Some(kappa),
    })
}

/// Smallest oscillator series whose rigorous tail bound at `t_max` is below
/// `tol`, capped at `max_terms`.
pub fn oscillator_series_to_tolerance(beta: f64, t_max: f64, tol: f64, max_terms: usize) -> Result<SeriesSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    for n in 1..=max_terms {
        let sol = oscillator_series(beta, n)?;
        let tail = sol.tail_bound(t_max)?;
        if tail.alternating && tail.bound < tol {
            return Ok(sol);
        }
    }
    Err(Error::Precondition(format!(
        "{max_terms} terms do not reach tolerance {tol} at t = {t_max}"
    )))
}
