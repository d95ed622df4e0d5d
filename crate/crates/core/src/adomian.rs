//! Adomian polynomial sequences.
//!
//! The generic engine expands `N(sum_i x_i lambda^i)` in `lambda` and reads off
//! `A_n` as the `lambda^n` coefficient. Each `x_i` is a [`TimePolynomial`], so the
//! composition is carried out on truncated series in `lambda` whose coefficients
//! are themselves truncated series in `t`.
//!
//! The oscillator sequence is different: it freezes the velocity factor at
//! `x_0' = beta` and gives `A_m = kappa * x_m` with `kappa = (1 - beta^2)^(3/2)`.
//! That is not the standard Adomian expansion of `x (1 - x'^2)^(3/2)` (a standard
//! `A_1` would pick up terms in `x_1'`); it is kept here as the definition of the oscillator sequence.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimePolynomial;

type DerivFn = dyn Fn(f64, usize) -> f64 + Send + Sync;

/// A scalar nonlinearity `N(u)` together with its derivatives `N^(j)(u)`.
#[derive(Clone)]
pub struct AnalyticNonlinearity {
    name: String,
    max_order: usize,
    deriv: Arc<DerivFn>,
}

impl fmt::Debug for AnalyticNonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticNonlinearity")
            .field("name", &self.name)
            .field("max_order", &self.max_order)
            .finish_non_exhaustive()
    }
}

impl AnalyticNonlinearity {
    /// `deriv(u, j)` must return `N^(j)(u)` for every `j <= max_order`.
    pub fn new<F>(name: impl Into<String>, max_order: usize, deriv: F) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            max_order,
            deriv: Arc::new(deriv),
        }
    }

    /// `N(x) = x`
    pub fn linear() -> Self {
        Self::power(1)
    }

    /// `N(x) = x^p`; every derivative order is available.
    pub fn power(p: u32) -> Self {
        Self::new(format!("x^{p}"), usize::MAX, move |u, j| {
            let Ok(j) = u32::try_from(j) else { return 0.0 };
            if j > p {
                return 0.0;
            }
            let falling: f64 = (p - j + 1..=p).map(f64::from).product();
            falling * u.powi((p - j) as i32)
        })
    }

    /// `N(x) = exp(x)`
    pub fn exp() -> Self {
        Self::new("exp(x)", usize::MAX, |u, _| u.exp())
    }

    /// `N(x) = sin(x)`
    pub fn sin() -> Self {
        Self::new("sin(x)", usize::MAX, |u, j| match j % 4 {
            0 => u.sin(),
            1 => u.cos(),
            2 => -u.sin(),
            _ => -u.cos(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn value(&self, u: f64) -> f64 {
        (self.deriv)(u, 0)
    }

    pub fn derivative(&self, u: f64, order: usize) -> Result<f64> {
        self.check_order(order)?;
        Ok((self.deriv)(u, order))
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(Error::Capability {
                name: self.name.clone(),
                requested: order,
                supported: self.max_order,
            });
        }
        Ok(())
    }

    /// `N^(j)(x0(t))` as a truncated series in `t`, by Taylor expansion of
    /// `N^(j)` about `x0(0)`.
    fn derivative_along(&self, x0: &TimePolynomial, j: usize, max_degree: u32) -> Result<TimePolynomial> {
        let u0 = x0.coefficient(0);
        let delta = x0 - &TimePolynomial::constant(u0);
        let m_max = if delta.is_zero() { 0 } else { max_degree as usize };
        self.check_order(j.saturating_add(m_max))?;

        let mut out = TimePolynomial::constant((self.deriv)(u0, j));
        let mut delta_pow = TimePolynomial::constant(1.0);
        let mut inv_fact = 1.0;
        for m in 1..=m_max {
            delta_pow = delta_pow.mul_truncated(&delta, max_degree);
            if delta_pow.is_zero() {
                break;
            }
            inv_fact /= m as f64;
            let c = (self.deriv)(u0, j + m) * inv_fact;
            out = &out + &delta_pow.scale(c);
        }
        Ok(out)
    }
}

/// Which construction produced an [`AdomianSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdomianSource {
    Generic,
    OscillatorPaper,
}

/// `A_0, ..., A_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdomianSequence {
    pub polys: Vec<TimePolynomial>,
    pub source: AdomianSource,
}

impl AdomianSequence {
    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    /// Pointwise value of `A_n(t)` for every `n`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.polys.iter().map(|p| p.eval(t)).collect()
    }
}

/// Adomian polynomials `A_0..=A_order` of `nonlinearity` for the given
/// decomposition components, truncated above `max_degree` in `t`.
///
/// `A_n = (1/n!) d^n/dlambda^n N(sum_i x_i lambda^i) |_(lambda=0)`, computed as
/// `sum_j N^(j)(x_0) [lambda^n] D^j / j!` with `D = sum_(i>=1) x_i lambda^i`.
pub fn adomian_polynomials(
    nonlinearity: &AnalyticNonlinearity,
    components: &[TimePolynomial],
    order: usize,
    max_degree: u32,
) -> Result<AdomianSequence> {
    if components.is_empty() {
        return Err(Error::Precondition("at least one component is required".into()));
    }
    if order >= components.len() {
        return Err(Error::Precondition(format!(
            "order {order} needs components x_0..=x_{order}, only {} given",
            components.len()
        )));
    }
    nonlinearity.check_order(order)?;

    let x0 = components[0].truncate(max_degree);
    let derivs = (0..=order)
        .map(|j| nonlinearity.derivative_along(&x0, j, max_degree))
        .collect::<Result<Vec<_>>>()?;

    // D as a lambda-series; index = power of lambda.
    let mut shift = vec![TimePolynomial::zero(); order + 1];
    for i in 1..=order {
        shift[i] = components[i].truncate(max_degree);
    }

    let mut polys = vec![TimePolynomial::zero(); order + 1];
    let mut power = vec![TimePolynomial::zero(); order + 1];
    power[0] = TimePolynomial::constant(1.0);
    let mut inv_fact = 1.0;
    for (j, deriv) in derivs.iter().enumerate() {
        if j > 0 {
            power = lambda_mul(&power, &shift, max_degree);
            inv_fact /= j as f64;
        }
        // [lambda^n] D^j vanishes for n < j.
        for n in j..=order {
            if power[n].is_zero() {
                continue;
            }
            let term = deriv.mul_truncated(&power[n], max_degree).scale(inv_fact);
            polys[n] = &polys[n] + &term;
        }
    }

    Ok(AdomianSequence {
        polys,
        source: AdomianSource::Generic,
    })
}

fn lambda_mul(a: &[TimePolynomial], b: &[TimePolynomial], max_degree: u32) -> Vec<TimePolynomial> {
    let len = a.len();
    let mut out = vec![TimePolynomial::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &ai.mul_truncated(bj, max_degree);
        }
    }
    out
}

/// `kappa = (1 - beta^2)^(3/2)` after checking `0 < beta < 1`.
pub fn kappa(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((1.0 - beta * beta).powf(1.5))
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "initial velocity beta must satisfy 0 < beta < 1, got {beta}"
        )))
    }
}

/// The oscillator sequence: `A_m = x_m (1 - x_0'^2)^(3/2)` with
/// `x_0' = beta`. The index `m` does not enter.
pub fn oscillator_adomian(_m: usize, x_m: &TimePolynomial, beta: f64) -> Result<TimePolynomial> {
    Ok(x_m.scale(kappa(beta)?))
}

/// [`oscillator_adomian`] applied to every component.
pub fn oscillator_sequence(components: &[TimePolynomial], beta: f64) -> Result<AdomianSequence> {
    let k = kappa(beta)?;
    Ok(AdomianSequence {
        polys: components.iter().map(|x| x.scale(k)).collect(),
        source: AdomianSource::OscillatorPaper,
    })
}

/// Brute-force estimate of `A_0(t)..=A_order(t)` at a single time by finite
/// differences of `g(lambda) = N(sum_i x_i(t) lambda^i)` at `lambda = 0`.
///
/// The `n`-th derivative comes from symmetric central differences refined by
/// Ridders' extrapolation. The first step is `0.2 h^(2/(n+4))` (0.005 for
/// `n = 1` and `h = 1e-4`) and is shrunk geometrically until the extrapolation error
/// estimate stops improving.
pub fn lambda_expansion_oracle(
    nonlinearity: &AnalyticNonlinearity,
    components: &[TimePolynomial],
    order: usize,
    t_probe: f64,
    h: f64,
) -> Vec<f64> {
    let values: Vec<f64> = components.iter().take(order + 1).map(|x| x.eval(t_probe)).collect();
    let g = |lambda: f64| {
        let mut u = 0.0;
        let mut pow = 1.0;
        for v in &values {
            u += v * pow;
            pow *= lambda;
        }
        nonlinearity.value(u)
    };

    let mut out = Vec::with_capacity(order + 1);
    out.push(g(0.0));
    let mut fact = 1.0;
    for n in 1..=order {
        fact *= n as f64;
        let step = 0.2 * h.powf(2.0 / (n as f64 + 4.0));
        out.push(ridders(&g, n, step) / fact);
    }
    out
}

/// Ridders' polynomial extrapolation of `delta^n g(0) / h^n` to `h -> 0`.
fn ridders<G: Fn(f64) -> f64>(g: &G, n: usize, h0: f64) -> f64 {
    const SHRINK: f64 = 1.4;
    const SHRINK2: f64 = SHRINK * SHRINK;
    const ROWS: usize = 10;
    const SAFE: f64 = 2.0;

    let mut table = [[0.0; ROWS]; ROWS];
    let mut h = h0;
    table[0][0] = central_difference(g, n, h);
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    for i in 1..ROWS {
        h /= SHRINK;
        table[0][i] = central_difference(g, n, h);
        let mut fac = SHRINK2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK2;
            let e = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    best
}

/// `delta^n g(0) / h^n` with nodes at `(n/2 - k) h`, `k = 0..=n`.
fn central_difference<G: Fn(f64) -> f64>(g: &G, n: usize, h: f64) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=n {
        let node = (n as f64 / 2.0 - k as f64) * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * g(node);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    acc / h.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn poly(terms: &[(u32, f64)]) -> TimePolynomial {
        TimePolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn square_with_two_components() {
        // (x0 + lambda x1)^2 with x0 = t, x1 = t^2 and x2 = 0.
        let comps = vec![poly(&[(1, 1.0)]), poly(&[(2, 2.0)]), TimePolynomial::zero()];
        let seq = adomian_polynomials(&AnalyticNonlinearity::power(2), &comps, 2, 12).unwrap();
        assert_eq!(seq.source, AdomianSource::Generic);
        // t^2 = 2 t^2/2!, 2 t^3 = 12 t^3/3!, t^4 = 24 t^4/4!
        assert_eq!(seq.polys[0], poly(&[(2, 2.0)]));
        assert_eq!(seq.polys[1], poly(&[(3, 12.0)]));
        assert_eq!(seq.polys[2], poly(&[(4, 24.0)]));
    }

    #[test]
    fn linear_nonlinearity_returns_components() {
        let comps = vec![
            poly(&[(0, 0.3), (1, 1.0)]),
            poly(&[(3, -1.0)]),
            poly(&[(5, 1.0), (2, 0.5)]),
        ];
        let seq = adomian_polynomials(&AnalyticNonlinearity::linear(), &comps, 2, 20).unwrap();
        assert_eq!(seq.polys, comps);
    }

    #[test]
    fn cube_with_constant_components() {
        let (c, d) = (1.5, -0.5);
        let comps = vec![
            poly(&[(0, c)]),
            poly(&[(0, d)]),
            TimePolynomial::zero(),
            TimePolynomial::zero(),
        ];
        let seq = adomian_polynomials(&AnalyticNonlinearity::power(3), &comps, 3, 4).unwrap();
        let got: Vec<f64> = seq.polys.iter().map(|p| p.coefficient(0)).collect();
        let expected = [c * c * c, 3.0 * c * c * d, 3.0 * c * d * d, d * d * d];
        for (g, e) in got.iter().zip(expected) {
            assert_relative_eq!(*g, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn order_beyond_components_is_rejected() {
        let comps = vec![poly(&[(1, 1.0)])];
        let err = adomian_polynomials(&AnalyticNonlinearity::power(2), &comps, 1, 8).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err = adomian_polynomials(&AnalyticNonlinearity::power(2), &[], 0, 8).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn unsupported_derivative_order_is_a_capability_error() {
        let n = AnalyticNonlinearity::new("tabulated", 1, |u, j| if j == 0 { u * u } else { 2.0 * u });
        let comps = vec![poly(&[(0, 1.0)]), poly(&[(0, 1.0)]), poly(&[(0, 1.0)])];
        let err = adomian_polynomials(&n, &comps, 2, 4).unwrap_err();
        assert!(matches!(
            err,
            Error::Capability {
                requested: 2,
                supported: 1,
                ..
            }
        ));
        // Constant x0 needs no Taylor expansion in t.
        assert!(adomian_polynomials(&n, &comps, 1, 4).is_ok());
        // A time-dependent x0 needs higher derivatives for the expansion in t.
        let moving = vec![poly(&[(1, 1.0)]), poly(&[(0, 1.0)])];
        assert!(matches!(
            adomian_polynomials(&n, &moving, 1, 4),
            Err(Error::Capability { .. })
        ));
    }

    #[test]
    fn oscillator_sequence_examples() {
        let beta = 0.1;
        let a0 = oscillator_adomian(0, &poly(&[(1, 0.1)]), beta).unwrap();
        assert_relative_eq!(a0.coefficient(1), 0.1 * 0.985_037_562_735_553_8, epsilon = 1e-15);

        let beta = 0.37_f64;
        let k = (1.0 - beta * beta).powf(1.5);
        let x1 = poly(&[(3, -beta * k)]);
        let a1 = oscillator_adomian(1, &x1, beta).unwrap();
        assert_relative_eq!(a1.coefficient(3), -beta * k * k, epsilon = 1e-15);

        assert!(oscillator_adomian(4, &TimePolynomial::zero(), 0.5).unwrap().is_zero());
        for bad in [0.0, 1.0, -0.2, 1.3, f64::NAN] {
            assert!(matches!(
                oscillator_adomian(0, &poly(&[(1, 1.0)]), bad),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn oscillator_sequence_is_independent_of_index() {
        let x = poly(&[(3, 0.2), (5, -0.1)]);
        let a = oscillator_adomian(0, &x, 0.4).unwrap();
        let b = oscillator_adomian(7, &x, 0.4).unwrap();
        assert_eq!(a, b);
        let seq = oscillator_sequence(&[x.clone(), x.scale(2.0)], 0.4).unwrap();
        assert_eq!(seq.source, AdomianSource::OscillatorPaper);
        assert_eq!(seq.polys[1], x.scale(2.0).scale(kappa(0.4).unwrap()));
    }

    #[test]
    fn oracle_examples() {
        let comps = vec![poly(&[(0, 1.0)]), poly(&[(0, 1.0)])];
        let a = lambda_expansion_oracle(&AnalyticNonlinearity::power(2), &comps, 1, 1.0, 1e-4);
        assert_eq!(a[0], 1.0);
        assert!((a[1] - 2.0).abs() < 1e-6);

        let comps = vec![TimePolynomial::zero(), poly(&[(1, 1.0)]), TimePolynomial::zero()];
        let a = lambda_expansion_oracle(&AnalyticNonlinearity::exp(), &comps, 2, 1.0, 1e-4);
        assert_eq!(a[0], 1.0);
        assert!((a[2] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn oracle_order_zero_is_exact() {
        let comps = vec![poly(&[(1, 0.7), (2, 0.3)])];
        let n = AnalyticNonlinearity::exp();
        let a = lambda_expansion_oracle(&n, &comps, 0, 1.3, 1e-4);
        assert_eq!(a, vec![n.value(comps[0].eval(1.3))]);
    }
}
