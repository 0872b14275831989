//! Jacobi theta functions θ2, θ3, θ4 on real and imaginary arguments,
//! their termwise derivatives, log-derivatives up to order 12, and the
//! q-products `Π(1 - q^{2n})` and `Π(1 - q^n)`.
//!
//! Conventions (nome `q`, argument `u`):
//!
//! ```text
//! θ2(u, q) = 2 Σ_{n≥0} q^{(n+1/2)²} cos((2n+1)u)
//! θ3(u, q) = 1 + 2 Σ_{n≥1} q^{n²} cos(2nu)
//! θ4(u, q) = 1 + 2 Σ_{n≥1} (-1)^n q^{n²} cos(2nu)
//! θ4(it, q) = 1 + 2 Σ_{n≥1} (-1)^n q^{n²} cosh(2nt)
//! ```

use serde::{Deserialize, Serialize};

use crate::elliptic::Nome;
use crate::error::{Error, Result};
use crate::summation::{sum_series, SeriesResult, Summed, Term, TruncationPolicy};

/// A theta series value with its truncation metadata.
pub type ThetaEval = SeriesResult;

/// Highest supported order for [`log_theta_derivative`].
pub const MAX_LOG_ORDER: usize = 12;

/// Relative size below which a theta value counts as a zero.
pub const POLE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThetaKind {
    Theta2,
    Theta4,
}

/// The function whose log is differentiated in [`log_theta_derivative`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogThetaKind {
    /// `s ↦ θ2(s, q)`.
    Theta2,
    /// `s ↦ θ4(is/2, q)`.
    Theta4ImagHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogThetaDerivative {
    pub order: usize,
    pub at: f64,
    pub nome: Nome,
    pub value: f64,
}

fn alternating(n: u64) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `q^{n²} cosh(x)` and `q^{n²} sinh(x)` without overflowing the hyperbolic factor.
fn damped_hyperbolic(log_weight: f64, x: f64) -> (f64, f64) {
    let up = (log_weight + x).exp();
    let down = (log_weight - x).exp();
    (0.5 * (up + down), 0.5 * (up - down))
}

/// The `order`-th derivative of `cos` at `x`.
fn cos_derivative(order: usize, x: f64) -> f64 {
    match order % 4 {
        0 => x.cos(),
        1 => -x.sin(),
        2 => -x.cos(),
        _ => x.sin(),
    }
}

/// d^order/dx^order of `1 + 2 Σ (-1)^n q^{n²} cosh(c n x)`.
fn theta4_hyperbolic(
    order: usize,
    x: f64,
    c: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<Summed> {
    let log_q = q.log_q();
    let mut summed = sum_series(policy, 1, |n| {
        if q.q() == 0.0 {
            return Term::plain(0.0);
        }
        let nf = n as f64;
        let freq = c * nf;
        let (ch, sh) = damped_hyperbolic(nf * nf * log_q, freq * x);
        let hyper = if order.is_multiple_of(2) { ch } else { sh };
        let factor = 2.0 * freq.powi(order as i32);
        Term::new(alternating(n) * factor * hyper, factor * ch)
    })?;
    if order == 0 {
        summed.result.value += 1.0;
        summed.magnitude += 1.0;
    }
    Ok(summed)
}

/// d^order/dx^order of `1 + 2 Σ s_n q^{n²} cos(2 n x)` with `s_n = (-1)^n` or `1`.
fn theta_even_cos(
    order: usize,
    x: f64,
    signed: bool,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<Summed> {
    let log_q = q.log_q();
    let mut summed = sum_series(policy, 1, |n| {
        if q.q() == 0.0 {
            return Term::plain(0.0);
        }
        let nf = n as f64;
        let freq = 2.0 * nf;
        let weight = 2.0 * (nf * nf * log_q).exp() * freq.powi(order as i32);
        let sign = if signed { alternating(n) } else { 1.0 };
        Term::new(sign * weight * cos_derivative(order, freq * x), weight)
    })?;
    if order == 0 {
        summed.result.value += 1.0;
        summed.magnitude += 1.0;
    }
    Ok(summed)
}

/// d^order/dx^order of `2 Σ_{n≥0} q^{(n+1/2)²} cos((2n+1) x)`.
fn theta2_raw(order: usize, x: f64, q: &Nome, policy: &TruncationPolicy) -> Result<Summed> {
    let log_q = q.log_q();
    sum_series(policy, 0, |n| {
        if q.q() == 0.0 {
            return Term::plain(0.0);
        }
        let half = n as f64 + 0.5;
        let freq = 2.0 * half;
        let weight = 2.0 * (half * half * log_q).exp() * freq.powi(order as i32);
        Term::new(weight * cos_derivative(order, freq * x), weight)
    })
}

pub fn theta4(u: f64, q: &Nome, policy: &TruncationPolicy) -> Result<ThetaEval> {
    Ok(theta_even_cos(0, u, true, q, policy)?.result)
}

/// θ4 at the imaginary argument `it`.
pub fn theta4_imag(t: f64, q: &Nome, policy: &TruncationPolicy) -> Result<ThetaEval> {
    Ok(theta4_hyperbolic(0, t, 2.0, q, policy)?.result)
}

/// `d^order/dt^order θ4(it, q)`.
///
/// With `Θ = ∂θ4/∂u`, `Θ(it, q) = -i · theta4_imag_derivative(1, t, q)`.
pub fn theta4_imag_derivative(
    order: usize,
    t: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<ThetaEval> {
    Ok(theta4_hyperbolic(order, t, 2.0, q, policy)?.result)
}

pub fn theta2(z: f64, q: &Nome, policy: &TruncationPolicy) -> Result<ThetaEval> {
    Ok(theta2_raw(0, z, q, policy)?.result)
}

pub fn theta3(z: f64, q: &Nome, policy: &TruncationPolicy) -> Result<ThetaEval> {
    Ok(theta_even_cos(0, z, false, q, policy)?.result)
}

/// Termwise derivative with respect to the (real) first argument.
pub fn theta_u_derivative(
    kind: ThetaKind,
    z: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<ThetaEval> {
    Ok(match kind {
        ThetaKind::Theta2 => theta2_raw(1, z, q, policy)?.result,
        ThetaKind::Theta4 => theta_even_cos(1, z, true, q, policy)?.result,
    })
}

fn raw_derivatives(
    kind: LogThetaKind,
    order: usize,
    s: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<(Vec<f64>, f64, usize)> {
    let mut values = Vec::with_capacity(order + 1);
    let mut scale = 0.0;
    let mut terms = 0;
    for j in 0..=order {
        let summed = match kind {
            LogThetaKind::Theta2 => theta2_raw(j, s, q, policy)?,
            LogThetaKind::Theta4ImagHalf => theta4_hyperbolic(j, s, 1.0, q, policy)?,
        };
        if j == 0 {
            scale = summed.magnitude;
        }
        terms += summed.result.terms_used;
        values.push(summed.result.value);
    }
    Ok((values, scale, terms))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `d^order/ds^order log F(s)` for `F(s) = θ2(s, q)` or `θ4(is/2, q)`.
///
/// Raw derivatives `F^(j)` come from termwise differentiation; the
/// log-derivatives `g^(j)` are recovered from
/// `F^(n) = Σ_{j<n} C(n-1, j) g^(j+1) F^(n-1-j)`.
pub fn log_theta_derivative(
    kind: LogThetaKind,
    order: usize,
    s: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<LogThetaDerivative> {
    let all = log_theta_derivatives(kind, order, s, q, policy)?;
    Ok(LogThetaDerivative {
        order,
        at: s,
        nome: *q,
        value: all[order],
    })
}

/// All log-derivatives of orders `0..=order` at once.
///
/// Index 0 holds `log |F(s)|`; it is an error for `F(s) <= 0` only when
/// order 0 itself is requested through [`log_theta_derivative`].
pub fn log_theta_derivatives(
    kind: LogThetaKind,
    order: usize,
    s: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<Vec<f64>> {
    Ok(log_theta_derivatives_counted(kind, order, s, q, policy)?.0)
}

/// As [`log_theta_derivatives`], also returning the number of series terms summed.
pub(crate) fn log_theta_derivatives_counted(
    kind: LogThetaKind,
    order: usize,
    s: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Result<(Vec<f64>, usize)> {
    if order > MAX_LOG_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let (raw, scale, terms) = raw_derivatives(kind, order, s, q, policy)?;
    let f0 = raw[0];
    if f0.abs() <= POLE_THRESHOLD * scale {
        return Err(Error::Pole { value: f0, scale });
    }
    if order == 0 && f0 < 0.0 {
        return Err(Error::Domain(format!("log of negative theta value {f0}")));
    }
    let mut g = vec![0.0; order + 1];
    g[0] = f0.abs().ln();
    for n in 1..=order {
        let mut acc = raw[n];
        for j in 0..n - 1 {
            acc -= binomial(n - 1, j) * g[j + 1] * raw[n - 1 - j];
        }
        g[n] = acc / f0;
    }
    Ok((g, terms))
}

fn log_product(q: &Nome, policy: &TruncationPolicy) -> Result<SeriesResult> {
    let summed = sum_series(policy, 1, |n| {
        let qn = q.pow(n as f64);
        Term::plain((-qn).ln_1p())
    })?;
    Ok(summed.result)
}

/// Euler's product `(q; q)_∞ = Π_{n≥1} (1 - q^n)`.
pub fn euler_product(q: &Nome, policy: &TruncationPolicy) -> Result<SeriesResult> {
    let log = log_product(q, policy)?;
    let value = log.value.exp();
    Ok(SeriesResult {
        value,
        terms_used: log.terms_used,
        tail_bound: value * log.tail_bound,
    })
}

/// `P0(q) = Π_{n≥1} (1 - q^{2n})`, i.e. the Euler product at `q²`.
pub fn q_product_p0(q: &Nome, policy: &TruncationPolicy) -> Result<SeriesResult> {
    euler_product(&q.squared(), policy)
}

/// `log P0(q)` summed directly, for identities that need the logarithm.
pub fn log_q_product_p0(q: &Nome, policy: &TruncationPolicy) -> Result<SeriesResult> {
    log_product(&q.squared(), policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn p() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn nome(q: f64) -> Nome {
        Nome::new(q).unwrap()
    }

    #[test]
    fn empty_series_at_zero_nome() {
        for u in [0.0, 0.7, 2.0] {
            assert_eq!(theta4(u, &nome(0.0), &p()).unwrap().value, 1.0);
            assert_eq!(theta3(u, &nome(0.0), &p()).unwrap().value, 1.0);
            assert_eq!(theta4_imag(u, &nome(0.0), &p()).unwrap().value, 1.0);
        }
        assert_eq!(q_product_p0(&nome(0.0), &p()).unwrap().value, 1.0);
        assert_eq!(euler_product(&nome(0.0), &p()).unwrap().value, 1.0);
    }

    #[test]
    fn theta4_direct_sums() {
        // 1 - 2(0.1) + 2(0.1)^4 - 2(0.1)^9 + ...
        let direct = 1.0 - 0.2 + 2e-4 - 2e-9 + 2e-16;
        assert!((theta4(0.0, &nome(0.1), &p()).unwrap().value - direct).abs() < 1e-15);
        let flipped = 1.0 + 0.2 + 2e-4 + 2e-9 + 2e-16;
        assert!((theta4(FRAC_PI_2, &nome(0.1), &p()).unwrap().value - flipped).abs() < 1e-15);
    }

    #[test]
    fn theta4_imag_matches_real_at_zero_and_direct_sum() {
        let q = nome(0.2);
        assert_eq!(
            theta4_imag(0.0, &q, &p()).unwrap().value,
            theta4(0.0, &q, &p()).unwrap().value
        );
        let q = Nome::from_pi_multiple(1.0).unwrap();
        let direct: f64 = 1.0
            + (1..8)
                .map(|n: i32| {
                    let nf = n as f64;
                    2.0 * (-1f64).powi(n) * (-PI * nf * nf).exp() * (0.6 * nf).cosh()
                })
                .sum::<f64>();
        assert!((theta4_imag(0.3, &q, &p()).unwrap().value - direct).abs() < 1e-14);
    }

    #[test]
    fn theta4_imag_is_even() {
        let q = Nome::from_pi_multiple(0.7).unwrap();
        for t in [0.1, 0.4, 0.9] {
            assert_eq!(
                theta4_imag(t, &q, &p()).unwrap().value,
                theta4_imag(-t, &q, &p()).unwrap().value
            );
        }
    }

    #[test]
    fn theta2_values() {
        for q in [0.1, 0.5, 0.9] {
            assert!(theta2(FRAC_PI_2, &nome(q), &p()).unwrap().value.abs() < 1e-14);
        }
        let direct =
            2.0 * (0.1f64.powf(0.25) + 0.1f64.powf(2.25) + 0.1f64.powf(6.25) + 0.1f64.powf(12.25));
        assert!((theta2(0.0, &nome(0.1), &p()).unwrap().value - direct).abs() < 1e-15);

        let q = Nome::from_rate(FRAC_PI_2).unwrap();
        let direct: f64 = (0..12)
            .map(|n| {
                let h = n as f64 + 0.5;
                2.0 * (-FRAC_PI_2 * h * h).exp() * ((2.0 * h) * FRAC_PI_4).cos()
            })
            .sum();
        let v = theta2(FRAC_PI_4, &q, &p()).unwrap().value;
        assert!(v > 0.0);
        assert!((v - direct).abs() < 1e-13);
    }

    #[test]
    fn theta3_values() {
        let v = theta3(0.0, &Nome::from_pi_multiple(1.0).unwrap(), &p())
            .unwrap()
            .value;
        assert!((v - 1.086_434_811_213_308).abs() < 1e-15);
        assert!(
            (theta3(FRAC_PI_2, &nome(0.1), &p()).unwrap().value
                - theta4(0.0, &nome(0.1), &p()).unwrap().value)
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn u_derivatives() {
        let q = nome(0.3);
        assert_eq!(
            theta_u_derivative(ThetaKind::Theta4, 0.0, &q, &p())
                .unwrap()
                .value,
            0.0
        );
        assert!(
            theta_u_derivative(ThetaKind::Theta2, 0.0, &q, &p())
                .unwrap()
                .value
                .abs()
                < 1e-300
        );
        let q = nome(0.1);
        let direct: f64 = (0..6)
            .map(|n| {
                let h = n as f64 + 0.5;
                -2.0 * 0.1f64.powf(h * h) * (2.0 * h) * ((2.0 * h) * FRAC_PI_2).sin()
            })
            .sum();
        let v = theta_u_derivative(ThetaKind::Theta2, FRAC_PI_2, &q, &p())
            .unwrap()
            .value;
        assert!(v < 0.0);
        assert!((v - direct).abs() < 1e-14);
    }

    #[test]
    fn log_derivative_orders() {
        let q = Nome::from_pi_multiple(1.0).unwrap();
        let d0 = log_theta_derivative(LogThetaKind::Theta4ImagHalf, 0, 0.4, &q, &p()).unwrap();
        let th = theta4_imag(0.2, &q, &p()).unwrap().value;
        assert!((d0.value - th.ln()).abs() < 1e-15);
        let d1 = log_theta_derivative(LogThetaKind::Theta4ImagHalf, 1, 0.0, &q, &p()).unwrap();
        assert_eq!(d1.value, 0.0);
        assert!(matches!(
            log_theta_derivative(LogThetaKind::Theta2, 13, 0.3, &q, &p()),
            Err(Error::UnsupportedOrder(13))
        ));
    }

    #[test]
    fn theta2_zero_is_a_pole() {
        let q = nome(0.3);
        assert!(matches!(
            log_theta_derivative(LogThetaKind::Theta2, 1, FRAC_PI_2, &q, &p()),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn products() {
        let direct: f64 = (1..60).map(|n| 1.0 - 0.5f64.powi(2 * n)).product();
        assert!((q_product_p0(&nome(0.5), &p()).unwrap().value - direct).abs() < 1e-12);
        let direct: f64 = (1..30).map(|n| 1.0 - 0.1f64.powi(n)).product();
        assert!((euler_product(&nome(0.1), &p()).unwrap().value - direct).abs() < 1e-12);
        let q = nome(0.3);
        assert_eq!(
            q_product_p0(&q, &p()).unwrap().value,
            euler_product(&q.squared(), &p()).unwrap().value
        );
    }
}
