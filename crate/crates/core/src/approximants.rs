//! Periodic approximants of the relativistic oscillator from the literature:
//! the parametric harmonic-balance solution and the printed three-harmonic
//! fits (harmonic balance, differential transformation, homotopy perturbation)
//! for `beta = 0.1` and `beta = 0.2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adomian::check_beta;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ApproxMethod {
    /// Harmonic balance.
    Hbm,
    /// Differential transformation.
    Dtm,
    /// Homotopy perturbation.
    Hpm,
}

impl ApproxMethod {
    pub const ALL: [ApproxMethod; 3] = [ApproxMethod::Hbm, ApproxMethod::Dtm, ApproxMethod::Hpm];

    pub fn as_str(self) -> &'static str {
        match self {
            ApproxMethod::Hbm => "hbm",
            ApproxMethod::Dtm => "dtm",
            ApproxMethod::Hpm => "hpm",
        }
    }
}

impl fmt::Display for ApproxMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_uppercase())
    }
}

impl FromStr for ApproxMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hbm" => Ok(ApproxMethod::Hbm),
            "dtm" => Ok(ApproxMethod::Dtm),
            "hpm" => Ok(ApproxMethod::Hpm),
            other => Err(format!("unknown approximation method `{other}`")),
        }
    }
}

/// One harmonic `amplitude * sin(omega t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub amplitude: f64,
    pub omega: f64,
}

/// `sum_j a_j sin(omega_j t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinusoidSum {
    pub terms: Vec<Harmonic>,
    pub method: ApproxMethod,
    pub beta: f64,
}

impl SinusoidSum {
    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|h| h.amplitude * (h.omega * t).sin()).sum()
    }

    /// Fundamental angular frequency (first harmonic).
    pub fn omega(&self) -> f64 {
        self.terms[0].omega
    }
}

/// Harmonic-balance frequency `((2 - 2 beta^2) / (2 - beta^2))^(1/4)`.
pub fn hbm_omega(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let b2 = beta * beta;
    Ok(((2.0 - 2.0 * b2) / (2.0 - b2)).powf(0.25))
}

/// Parametric three-harmonic harmonic-balance solution.
pub fn hbm(beta: f64) -> Result<SinusoidSum> {
    let omega = hbm_omega(beta)?;
    let b2 = beta * beta;
    let b3 = b2 * beta;
    let a1 = beta / omega * (3.0 * b2 * b2 + 8.0 * b2 + 64.0) / 64.0;
    let a3 = -b3 / (24.0 * omega) * (3.0 * b2 + 128.0) / 128.0;
    let a5 = 3.0 * b3 * b2 / (640.0 * omega);
    Ok(SinusoidSum {
        terms: vec![
            Harmonic { amplitude: a1, omega },
            Harmonic {
                amplitude: a3,
                omega: 3.0 * omega,
            },
            Harmonic {
                amplitude: a5,
                omega: 5.0 * omega,
            },
        ],
        method: ApproxMethod::Hbm,
        beta,
    })
}

// (amplitude, omega) exactly as printed. The DTM beta = 0.1 third frequency
// (4.841) does not follow the odd-harmonic pattern; it is kept as printed.
const DTM_01: [(f64, f64); 3] = [(0.10033, 0.998), (-0.000047097, 2.997), (0.00000008254, 4.841)];
const HPM_01: [(f64, f64); 3] = [(0.10010, 0.999), (-0.00004689, 2.997), (0.00000005062, 4.995)];
const HBM_01: [(f64, f64); 3] = [(0.10025, 0.998), (-0.00004173, 2.996), (0.00000004369, 4.944)];
const DTM_02: [(f64, f64); 3] = [(0.203, 0.992), (-0.0003695, 3.051), (0.000009257, 4.29)];
const HPM_02: [(f64, f64); 3] = [(0.201, 0.995), (-0.0003768, 2.985), (0.000001652, 4.974)];
const HBM_02: [(f64, f64); 3] = [(0.202, 0.995), (-0.0003354, 2.985), (0.000001508, 4.974)];

/// Betas for which printed coefficients exist.
pub const TABULATED_BETAS: [f64; 2] = [0.1, 0.2];

/// Printed coefficients for `(method, beta)`; `beta` must be exactly 0.1 or 0.2.
pub fn tabulated(method: ApproxMethod, beta: f64) -> Result<SinusoidSum> {
    let [at_01, at_02] = match method {
        ApproxMethod::Dtm => [&DTM_01, &DTM_02],
        ApproxMethod::Hpm => [&HPM_01, &HPM_02],
        ApproxMethod::Hbm => [&HBM_01, &HBM_02],
    };
    let table = if beta == TABULATED_BETAS[0] {
        at_01
    } else if beta == TABULATED_BETAS[1] {
        at_02
    } else {
        return Err(Error::NotTabulated {
            method: method.to_string(),
            beta,
        });
    };
    Ok(SinusoidSum {
        terms: table
            .iter()
            .map(|&(amplitude, omega)| Harmonic { amplitude, omega })
            .collect(),
        method,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn hbm_instances() {
        let s = hbm(0.1).unwrap();
        assert_relative_eq!(s.omega(), (1.98_f64 / 1.99).powf(0.25), epsilon = 1e-15);
        assert!((s.omega() - 0.99874).abs() < 1e-5);
        assert!((s.terms[0].amplitude - 0.10025).abs() < 1e-3);

        let s = hbm(0.2).unwrap();
        assert!((s.terms[0].amplitude - 0.202).abs() < 1e-3);
        assert!((s.omega() - 0.995).abs() < 1e-3);
    }

    #[test]
    fn hbm_non_relativistic_limit() {
        let beta = 1e-4;
        let s = hbm(beta).unwrap();
        assert!((s.omega() - 1.0).abs() < 1e-8);
        assert_relative_eq!(s.terms[0].amplitude, beta, max_relative = 1e-8);
        assert!(s.terms[1].amplitude.abs() < beta.powi(3) / 24.0 * 1.01);
        assert!(s.terms[2].amplitude.abs() < 1e-20);
        for t in [0.5, 2.0, 7.0] {
            assert!((s.eval(t) - beta * t.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn hbm_rejects_out_of_range_beta() {
        assert!(matches!(hbm(0.0), Err(Error::Domain(_))));
        assert!(matches!(hbm(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn tabulated_examples() {
        let s = tabulated(ApproxMethod::Dtm, 0.1).unwrap();
        let expected = [(0.10033, 0.998), (-0.000047097, 2.997), (0.00000008254, 4.841)];
        for (h, (a, w)) in s.terms.iter().zip(expected) {
            assert_eq!((h.amplitude, h.omega), (a, w));
        }
        let s = tabulated(ApproxMethod::Hpm, 0.2).unwrap();
        assert_eq!(
            s.terms[1],
            Harmonic {
                amplitude: -0.0003768,
                omega: 2.985
            }
        );
        let s = tabulated(ApproxMethod::Hbm, 0.2).unwrap();
        assert_eq!(
            s.terms[2],
            Harmonic {
                amplitude: 0.000001508,
                omega: 4.974
            }
        );
        assert!(matches!(
            tabulated(ApproxMethod::Dtm, 0.3),
            Err(Error::NotTabulated { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        for m in ApproxMethod::ALL {
            for b in TABULATED_BETAS {
                assert_eq!(tabulated(m, b).unwrap().eval(0.0), 0.0);
            }
        }
        let single = SinusoidSum {
            terms: vec![Harmonic {
                amplitude: 1.0,
                omega: 1.0,
            }],
            method: ApproxMethod::Hbm,
            beta: 0.5,
        };
        assert_relative_eq!(single.eval(FRAC_PI_2), 1.0, epsilon = 1e-15);
        // Direct evaluation of the three printed DTM harmonics at t = 1.
        let dtm = tabulated(ApproxMethod::Dtm, 0.1).unwrap();
        assert_relative_eq!(dtm.eval(1.0), 0.084_309_330_033_614_25, epsilon = 1e-15);
    }

    #[test]
    fn sinusoid_sums_are_odd_with_positive_frequencies() {
        let mut all: Vec<SinusoidSum> = vec![hbm(0.35).unwrap(), hbm(0.9).unwrap()];
        for m in ApproxMethod::ALL {
            for b in TABULATED_BETAS {
                all.push(tabulated(m, b).unwrap());
            }
        }
        for s in &all {
            assert!(s.terms.iter().all(|h| h.omega > 0.0));
            for t in [0.3, 1.1, 4.7, 9.9] {
                assert_eq!(s.eval(-t), -s.eval(t));
            }
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in ApproxMethod::ALL {
            assert_eq!(m.as_str().parse::<ApproxMethod>().unwrap(), m);
        }
        assert!("ladm".parse::<ApproxMethod>().is_err());
    }
}
