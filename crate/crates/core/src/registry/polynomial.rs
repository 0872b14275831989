//! Polynomial test functions and the polynomial-instance evaluators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::Nome;
use crate::error::{Error, Result};
use crate::series::zeta_even;
use crate::summation::{SeriesResult, Tally, TruncationPolicy};
use crate::theta::{log_theta_derivatives_counted, theta4_imag, LogThetaKind, MAX_LOG_ORDER};

pub const MAX_DEGREE: usize = 8;

/// `f(x) = Σ f_n x^n` with degree at most [`MAX_DEGREE`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    coefficients: Vec<f64>,
}

impl PolynomialSpec {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        let mut coefficients = coefficients;
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        if coefficients.len() > MAX_DEGREE + 1 {
            return Err(Error::PolynomialShape(format!(
                "degree {} exceeds {MAX_DEGREE}",
                coefficients.len() - 1
            )));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::PolynomialShape(format!(
                "non-finite coefficient {c}"
            )));
        }
        Ok(Self { coefficients })
    }

    pub fn zero() -> Self {
        Self {
            coefficients: Vec::new(),
        }
    }

    /// `x^p`.
    pub fn monomial(power: usize) -> Result<Self> {
        let mut c = vec![0.0; power + 1];
        c[power] = 1.0;
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `f_n`, zero beyond the degree.
    pub fn coefficient(&self, n: usize) -> f64 {
        self.coefficients.get(n).copied().unwrap_or(0.0)
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }

    fn filtered(&self, keep_even: bool) -> Self {
        let c = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, &c)| if (n % 2 == 0) == keep_even { c } else { 0.0 })
            .collect();
        Self::new(c).expect("filtering keeps the degree bound")
    }

    /// `(f(x) + f(-x)) / 2`.
    pub fn even_part(&self) -> Self {
        self.filtered(true)
    }

    /// `(f(x) - f(-x)) / 2`.
    pub fn odd_part(&self) -> Self {
        self.filtered(false)
    }

    pub fn is_even(&self) -> bool {
        self.coefficients
            .iter()
            .skip(1)
            .step_by(2)
            .all(|&c| c == 0.0)
    }

    /// `g_n = n! f_n`.
    pub fn g_coefficients(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, &c)| {
                if n > 0 {
                    fact *= n as f64;
                }
                fact * c
            })
            .collect()
    }

    /// `f(iy)` for an even polynomial, which is real: `Σ f_{2k} (-1)^k y^{2k}`.
    pub fn eval_imaginary(&self, y: f64) -> Result<f64> {
        if !self.is_even() {
            return Err(Error::PolynomialShape(
                "f(iy) is real only for even f".into(),
            ));
        }
        let y2 = y * y;
        Ok(self
            .coefficients
            .iter()
            .step_by(2)
            .rev()
            .fold(0.0, |acc, c| -acc * y2 + c))
    }
}

fn check_flat_even(f: &PolynomialSpec) -> Result<()> {
    if !f.is_even() {
        return Err(Error::PolynomialShape("F must be even".into()));
    }
    if f.coefficient(0) != 0.0 || f.coefficient(2) != 0.0 {
        return Err(Error::PolynomialShape(
            "F(0), F'(0) and F''(0) must vanish".into(),
        ));
    }
    Ok(())
}

/// Coefficients `c_{2k}` of `Σ_n G(t/(2πin)) = Σ_k c_{2k} t^{2k}`.
fn inner_sum_coefficients(f: &PolynomialSpec) -> Result<Vec<(usize, f64)>> {
    check_flat_even(f)?;
    let g = f.g_coefficients();
    let mut out = Vec::new();
    for (n, &gn) in g.iter().enumerate().skip(4).step_by(2) {
        if gn == 0.0 {
            continue;
        }
        let k = n / 2;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        out.push((n, sign * gn * zeta_even(k)? / (2.0 * PI).powi(n as i32)));
    }
    Ok(out)
}

/// `Σ_{n≥1} G(t/(2πin))` for an even `F` with `F(0) = F'(0) = F''(0) = 0`.
///
/// The `n`-sum collapses to even zeta values:
/// `Σ_k g_{2k} (-1)^k ζ(2k) (2π)^{-2k} t^{2k}`.
pub fn zeta_inner_sum(f: &PolynomialSpec, t: f64) -> Result<f64> {
    Ok(inner_sum_coefficients(f)?
        .into_iter()
        .map(|(n, c)| c * t.powi(n as i32))
        .sum())
}

/// `2 ∫₁² (1/t) Σ_n G(t/(2πin)) dt`, integrated termwise.
pub fn zeta_integral_term(f: &PolynomialSpec) -> Result<f64> {
    Ok(inner_sum_coefficients(f)?
        .into_iter()
        .map(|(n, c)| 2.0 * c * (2f64.powi(n as i32) - 1.0) / n as f64)
        .sum())
}

/// The same integral by double-exponential quadrature of the inner sum.
pub fn zeta_integral_term_quadrature(f: &PolynomialSpec) -> Result<f64> {
    check_flat_even(f)?;
    let out = quadrature::integrate(
        |t| zeta_inner_sum(f, t).map(|v| v / t).unwrap_or(f64::NAN),
        1.0,
        2.0,
        1e-14,
    );
    if !out.integral.is_finite() {
        return Err(Error::Domain(
            "quadrature produced a non-finite value".into(),
        ));
    }
    Ok(2.0 * out.integral)
}

/// Which side of the generalised first identity [`theta4_weighted_log`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theta4LogForm {
    /// `Σ (-1)^n f_n ∂ⁿ_s log θ4(is/2, e^{-πa})`.
    Derivative,
    /// `Σ f_n log θ4(i(s+n)/2, e^{-πa})`.
    Shifted,
}

fn check_degree(f: &PolynomialSpec) -> Result<()> {
    if f.degree() > MAX_LOG_ORDER {
        return Err(Error::UnsupportedOrder(f.degree()));
    }
    Ok(())
}

/// `Σ c_n D^n`, where `D^n` are log-theta derivatives; `c_n = (-1)^n f_n`.
fn weighted_log_derivatives(
    f: &PolynomialSpec,
    kind: LogThetaKind,
    s: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_degree(f)?;
    if f.coefficients().is_empty() {
        return Ok(SeriesResult::exact(0.0));
    }
    let (d, terms) = log_theta_derivatives_counted(kind, f.degree(), s, q, policy)?;
    let mut tally = Tally::new();
    for (n, (&c, dn)) in f.coefficients().iter().zip(d).enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        tally.constant(sign * c * dn);
    }
    let mut out = tally.finish();
    out.terms_used = terms;
    Ok(out)
}

pub(crate) fn theta4_weighted_log_series(
    f: &PolynomialSpec,
    a: f64,
    s: f64,
    form: Theta4LogForm,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let q = Nome::from_pi_multiple(a)?;
    match form {
        Theta4LogForm::Derivative => {
            weighted_log_derivatives(f, LogThetaKind::Theta4ImagHalf, s, &q, policy)
        }
        Theta4LogForm::Shifted => {
            check_degree(f)?;
            let mut tally = Tally::new();
            for (n, &c) in f.coefficients().iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let th = theta4_imag((s + n as f64) / 2.0, &q, policy)?;
                if th.value <= 0.0 {
                    // θ4(it, e^{-πa}) first vanishes at t = πa/2
                    return Err(Error::Domain(format!(
                        "θ4(i{}, q) = {} is not positive; needs s + n < πa",
                        (s + n as f64) / 2.0,
                        th.value
                    )));
                }
                tally.add(c, &log_of(th));
            }
            Ok(tally.finish())
        }
    }
}

pub(crate) fn theta2_weighted_log_series(
    f: &PolynomialSpec,
    a: f64,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a must be positive, got {a}")));
    }
    let q = Nome::from_rate(1.0 / a)?;
    weighted_log_derivatives(f, LogThetaKind::Theta2, s, &q, policy)
}

/// Left side of the generalised first identity in either form.
pub fn theta4_weighted_log(
    f: &PolynomialSpec,
    a: f64,
    s: f64,
    form: Theta4LogForm,
    policy: &TruncationPolicy,
) -> Result<f64> {
    Ok(theta4_weighted_log_series(f, a, s, form, policy)?.value)
}

/// `Σ (-1)^n f_n ∂ⁿ_s log θ2(s, e^{-1/a})`.
pub fn theta2_weighted_log(
    f: &PolynomialSpec,
    a: f64,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    Ok(theta2_weighted_log_series(f, a, s, policy)?.value)
}

/// `log` of a positive series value; the tail bound becomes relative.
pub(crate) fn log_of(x: SeriesResult) -> SeriesResult {
    SeriesResult {
        value: x.value.ln(),
        terms_used: x.terms_used,
        tail_bound: x.tail_bound / x.value.abs(),
    }
}
