//! Truncated power series in the time variable.
//!
//! A [`TimePolynomial`] stores the monomial `c_k * t^k / k!` as the pair `(k, c_k)`.
//! With this factorial scaling the LADM round trip `L^-1[s^-2 L{.}]` becomes a
//! plain degree shift by two, and the oscillator coefficients `beta * kappa^n`
//! are read off directly.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Sparse polynomial in `t` with factorial-scaled coefficients.
///
/// Invariant: no stored coefficient is exactly zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimePolynomial {
    terms: BTreeMap<u32, f64>,
}

impl TimePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c * t^degree / degree!`
    pub fn monomial(degree: u32, c: f64) -> Self {
        let mut p = Self::zero();
        p.accumulate(degree, c);
        p
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(0, c)
    }

    /// `alpha + beta * t`
    pub fn linear(alpha: f64, beta: f64) -> Self {
        let mut p = Self::zero();
        p.accumulate(0, alpha);
        p.accumulate(1, beta);
        p
    }

    /// Builds a polynomial from `(degree, scaled coefficient)` pairs; repeated
    /// degrees are summed.
    pub fn from_terms<I: IntoIterator<Item = (u32, f64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.accumulate(k, c);
        }
        p
    }

    fn accumulate(&mut self, degree: u32, c: f64) {
        let slot = self.terms.entry(degree).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&degree);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (non-zero) monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest stored degree, `None` for the zero polynomial.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Scaled coefficient at `degree` (zero when absent).
    pub fn coefficient(&self, degree: u32) -> f64 {
        self.terms.get(&degree).copied().unwrap_or(0.0)
    }

    /// `(degree, scaled coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, f64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    /// Evaluates `sum c_k t^k / k!`.
    ///
    /// The monomial basis `t^k / k!` is built by successive ratios `t / k`, so no
    /// factorial is ever formed.
    pub fn eval(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        let mut basis = 1.0;
        let mut k = 0u32;
        for (&degree, &c) in &self.terms {
            while k < degree {
                k += 1;
                basis *= t / f64::from(k);
            }
            sum += c * basis;
        }
        sum
    }

    /// Sum of the absolute values of the evaluated monomials at `t`. Useful as a
    /// scale for rounding-error allowances.
    pub fn eval_abs(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        let mut basis = 1.0;
        let mut k = 0u32;
        for (&degree, &c) in &self.terms {
            while k < degree {
                k += 1;
                basis *= t / f64::from(k);
            }
            sum += (c * basis).abs();
        }
        sum
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zero();
        }
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    /// Integrates twice from 0 with zero constants of integration.
    ///
    /// On factorial-scaled monomials this is `c t^k/k! -> c t^(k+2)/(k+2)!`,
    /// the time-domain image of `L^-1[s^-2 L{.}]`.
    pub fn double_integrate(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, &c)| (k + 2, c)).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&k, _)| k > 0)
                .map(|(&k, &c)| (k - 1, c))
                .collect(),
        }
    }

    /// Drops every monomial above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            terms: self.terms.range(..=max_degree).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    /// Cauchy product truncated above `max_degree`.
    ///
    /// With scaled coefficients the product coefficient at degree `n` is
    /// `sum_k C(n, k) a_k b_(n-k)`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero();
        for (&i, &a) in &self.terms {
            if i > max_degree {
                break;
            }
            for (&j, &b) in &other.terms {
                let n = i + j;
                if n > max_degree {
                    break;
                }
                out.accumulate(n, binomial(n, i) * a * b);
            }
        }
        out
    }

    /// True when only odd degrees are present.
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 1)
    }
}

/// `C(n, k)` in floating point, exact for the degrees used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc.round()
}

impl Add<&TimePolynomial> for &TimePolynomial {
    type Output = TimePolynomial;

    fn add(self, rhs: &TimePolynomial) -> TimePolynomial {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.accumulate(k, c);
        }
        out
    }
}

impl Add for TimePolynomial {
    type Output = TimePolynomial;

    fn add(self, rhs: TimePolynomial) -> TimePolynomial {
        &self + &rhs
    }
}

impl Neg for &TimePolynomial {
    type Output = TimePolynomial;

    fn neg(self) -> TimePolynomial {
        TimePolynomial {
            terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }
}

impl Neg for TimePolynomial {
    type Output = TimePolynomial;

    fn neg(self) -> TimePolynomial {
        -&self
    }
}

impl Sub<&TimePolynomial> for &TimePolynomial {
    type Output = TimePolynomial;

    fn sub(self, rhs: &TimePolynomial) -> TimePolynomial {
        self + &(-rhs)
    }
}

impl std::iter::Sum for TimePolynomial {
    fn sum<I: Iterator<Item = TimePolynomial>>(iter: I) -> Self {
        iter.fold(TimePolynomial::zero(), |acc, p| &acc + &p)
    }
}
