//! Error-controlled evaluators for the Lambert-type and hyperbolic series
//! that appear in the audited identities, plus the Bernoulli table.
//!
//! Every hyperbolic ratio is rewritten in terms of decaying exponentials
//! (`cosh x / sinh y = (e^{x-y} + e^{-x-y}) / (1 - e^{-2y})`) so that no
//! intermediate overflows before the term itself is negligible.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::Nome;
use crate::error::{Error, Result};
use crate::summation::{sum_series, SeriesResult, Term, TruncationPolicy};

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

fn alternating(n: u64) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `1 / (1 - e^{-2y})` for `y > 0`.
fn inv_one_minus_exp(y: f64) -> f64 {
    -1.0 / (-2.0 * y).exp_m1()
}

/// `cosh(x) / sinh(y)` for `y > 0`, stable when both are large.
pub(crate) fn cosh_over_sinh(x: f64, y: f64) -> f64 {
    ((x.abs() - y).exp() + (-x.abs() - y).exp()) * inv_one_minus_exp(y)
}

/// `sinh(x) / sinh(y)` for `y > 0`, stable when both are large.
pub(crate) fn sinh_over_sinh(x: f64, y: f64) -> f64 {
    ((x - y).exp() - (-x - y).exp()) * inv_one_minus_exp(y)
}

/// `1 / sinh(y)` for `y > 0`.
pub(crate) fn csch(y: f64) -> f64 {
    2.0 * (-y).exp() * inv_one_minus_exp(y)
}

/// `1 / cosh(y)`.
pub(crate) fn sech(y: f64) -> f64 {
    let y = y.abs();
    2.0 * (-y).exp() / (1.0 + (-2.0 * y).exp())
}

/// Which hyperbolic scaling [`s1_cosh_over_sinh`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoshScaling {
    /// `cosh(2tn)`; converges for `2|t| < πa`.
    Double,
    /// `cosh(tn)`; converges for `|t| < πa`.
    Single,
}

/// `Σ_{n≥1} cosh(2tn) / (n sinh(πan))` (or `cosh(tn)` with [`CoshScaling::Single`]).
pub fn s1_cosh_over_sinh(
    a: f64,
    t: f64,
    scaling: CoshScaling,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    require_positive("a", a)?;
    let c = match scaling {
        CoshScaling::Double => 2.0,
        CoshScaling::Single => 1.0,
    };
    if !(c * t.abs() < PI * a) {
        return Err(Error::Domain(format!(
            "cosh/sinh series diverges: {c}|t| = {} >= πa = {}",
            c * t.abs(),
            PI * a
        )));
    }
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        Term::plain(cosh_over_sinh(c * t * nf, PI * a * nf) / nf)
    })?
    .result)
}

/// `Σ_{n≥1} (-1)^n n / (e^{cn} - 1)`.
pub fn s3_alt_n_over_expm1(c: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("c", c)?;
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        let mag = nf / (c * nf).exp_m1();
        Term::new(alternating(n) * mag, mag)
    })?
    .result)
}

/// `Σ_{n≥1} n / sinh(πbn)`.
pub fn s4_n_over_sinh(b: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("b", b)?;
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        Term::plain(nf * csch(PI * b * nf))
    })?
    .result)
}

/// `Σ_{n≥1} sech(nπa)`.
pub fn s5_sech(a: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("a", a)?;
    Ok(sum_series(policy, 1, |n| Term::plain(sech(PI * a * n as f64)))?.result)
}

/// `Σ_{n≥1} sech²(πnx)`.
pub fn s5sq_sech2(x: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("x", x)?;
    Ok(sum_series(policy, 1, |n| {
        let s = sech(PI * x * n as f64);
        Term::plain(s * s)
    })?
    .result)
}

/// `Σ_{n≥1} (-1)^n sin(nv) / (e^{an} - 1)`.
pub fn s6_alt_sin_over_expm1(a: f64, v: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("a", a)?;
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        let mag = 1.0 / (a * nf).exp_m1();
        Term::new(alternating(n) * (nf * v).sin() * mag, mag)
    })?
    .result)
}

/// `-(1/2) Σ_{n≥1} sin(v) / (cos(v) + cosh(an))`.
pub fn s6_closed(a: f64, v: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("a", a)?;
    let (sin_v, cos_v) = v.sin_cos();
    let summed = sum_series(policy, 1, |n| {
        let x = a * n as f64;
        // 1 / (cos v + cosh x) = 2 e^{-x} / (1 + 2 cos v e^{-x} + e^{-2x})
        let e = (-x).exp();
        let mag = 2.0 * e / (1.0 + 2.0 * cos_v * e + e * e);
        Term::new(sin_v * mag, mag)
    })?;
    Ok(summed.result.affine(-0.5, 0.0))
}

/// `Σ_{n≥1} csch(2nπ²/a) sinh(2πnv/a)`, for `|v| < π`.
pub fn s7_csch_sinh(a: f64, v: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("a", a)?;
    if !(v.abs() < PI) {
        return Err(Error::Domain(format!(
            "csch/sinh series needs |v| < π, got {v}"
        )));
    }
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        let x = 2.0 * PI * nf * v / a;
        let y = 2.0 * PI * PI * nf / a;
        Term::new(sinh_over_sinh(x, y), cosh_over_sinh(x, y))
    })?
    .result)
}

/// `Σ_{n≥1} e^{2nπ/b} / (1 + e^{2nπ/b})³`.
pub fn s8_exp_over_cube(b: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    require_positive("b", b)?;
    Ok(sum_series(policy, 1, |n| {
        let x = 2.0 * PI * n as f64 / b;
        let e = (-x).exp();
        let d = 1.0 + e;
        Term::plain(e * e / (d * d * d))
    })?
    .result)
}

/// `Σ_{n≥1} n q^n / (1 - q^n)`.
pub fn s9_lambert_e2(q: &Nome, policy: &TruncationPolicy) -> Result<SeriesResult> {
    if q.q() == 0.0 {
        return Ok(SeriesResult::exact(0.0));
    }
    let log_q = q.log_q();
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        let qn = (nf * log_q).exp();
        Term::plain(nf * qn / -(nf * log_q).exp_m1())
    })?
    .result)
}

/// `Σ_{n≥1} (-1)^n sin(2nz) q^{2n} / (1 - q^{2n})`.
pub fn s10_alt_sin_lambert(z: f64, q: &Nome, policy: &TruncationPolicy) -> Result<SeriesResult> {
    if q.q() == 0.0 {
        return Ok(SeriesResult::exact(0.0));
    }
    let log_q = q.log_q();
    Ok(sum_series(policy, 1, |n| {
        let nf = n as f64;
        let x = 2.0 * nf * log_q;
        let mag = x.exp() / -x.exp_m1();
        Term::new(alternating(n) * (2.0 * nf * z).sin() * mag, mag)
    })?
    .result)
}

/// Exact `B_{2n}` for `n = 0..=20` as `(numerator, denominator)`.
const BERNOULLI_EVEN: [(i128, i128); 21] = [
    (1, 1),
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
    (2577687858367, 6),
    (-26315271553053477373, 1919190),
    (2929993913841559, 6),
    (-261082718496449122051, 13530),
];

/// Largest `n` accepted by [`bernoulli_b2n`].
pub const BERNOULLI_MAX_INDEX: usize = 20;

/// `B_{2n}` as an exact fraction.
pub fn bernoulli_b2n_exact(n: usize) -> Result<(i128, i128)> {
    BERNOULLI_EVEN.get(n).copied().ok_or(Error::Range {
        value: n as f64,
        lo: 0.0,
        hi: BERNOULLI_MAX_INDEX as f64,
    })
}

/// `B_{2n}`.
pub fn bernoulli_b2n(n: usize) -> Result<f64> {
    let (num, den) = bernoulli_b2n_exact(n)?;
    Ok(num as f64 / den as f64)
}

/// `ζ(1 - 2ν) = -B_{2ν} / (2ν)` for `ν ≥ 1`.
pub fn zeta_neg(nu: usize) -> Result<f64> {
    if nu == 0 {
        return Err(Error::Domain("zeta_neg needs ν >= 1".into()));
    }
    Ok(-bernoulli_b2n(nu)? / (2 * nu) as f64)
}

/// `ζ(2k) = (-1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!)` for `k ≥ 1`.
pub fn zeta_even(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("zeta_even needs k >= 1".into()));
    }
    let b = bernoulli_b2n(k)?;
    let two_k = 2 * k;
    let factorial: f64 = (1..=two_k).map(|i| i as f64).product();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * b * (2.0 * PI).powi(two_k as i32) / (2.0 * factorial))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn direct<F: Fn(f64) -> f64>(n_max: usize, f: F) -> f64 {
        (1..=n_max).map(|n| f(n as f64)).sum()
    }

    #[test]
    fn s1_direct_and_parity() {
        let d = direct(30, |n| 1.0 / (n * (PI * n).sinh()));
        let v = s1_cosh_over_sinh(1.0, 0.0, CoshScaling::Double, &p())
            .unwrap()
            .value;
        assert!((v - d).abs() < 1e-15);
        assert!((v - 0.088_512_592_659_163_11).abs() < 1e-15);
        for t in [0.1, 0.5, 1.2] {
            assert_eq!(
                s1_cosh_over_sinh(2.0, t, CoshScaling::Double, &p())
                    .unwrap()
                    .value,
                s1_cosh_over_sinh(2.0, -t, CoshScaling::Double, &p())
                    .unwrap()
                    .value
            );
        }
        let near = s1_cosh_over_sinh(2.0, 1e-9, CoshScaling::Double, &p())
            .unwrap()
            .value;
        let at = s1_cosh_over_sinh(2.0, 0.0, CoshScaling::Double, &p())
            .unwrap()
            .value;
        assert!((near - at).abs() < 1e-15);
    }

    #[test]
    fn s1_domain_guard() {
        assert!(matches!(
            s1_cosh_over_sinh(1.0, PI / 2.0, CoshScaling::Double, &p()),
            Err(Error::Domain(_))
        ));
        assert!(s1_cosh_over_sinh(1.0, PI / 2.0, CoshScaling::Single, &p()).is_ok());
        assert!(s1_cosh_over_sinh(-1.0, 0.0, CoshScaling::Single, &p()).is_err());
    }

    #[test]
    fn s3_values() {
        let d = direct(20, |n| (-1f64).powf(n) * n / ((2.0 * PI * n).exp() - 1.0));
        let v = s3_alt_n_over_expm1(2.0 * PI, &p()).unwrap().value;
        assert!((v - d).abs() < 1e-16);
        assert!((v + 0.001_863_981_378_328_637_6).abs() < 1e-16);
        let big = s3_alt_n_over_expm1(50.0, &p()).unwrap().value;
        assert!((big + (-50f64).exp()).abs() < 1e-35);
    }

    #[test]
    fn s4_values() {
        let d1 = direct(30, |n| n / (PI * n).sinh());
        assert!((s4_n_over_sinh(1.0, &p()).unwrap().value - d1).abs() < 1e-15);
        let d2 = direct(30, |n| n / (2.0 * PI * n).sinh());
        let v2 = s4_n_over_sinh(2.0, &p()).unwrap().value;
        assert!((v2 - d2).abs() < 1e-16);
        assert!((v2 - 0.003_748_887_029_703_568).abs() < 1e-16);
    }

    #[test]
    fn s5_values() {
        let d = direct(30, |n| 1.0 / (PI * n).cosh());
        let v = s5_sech(1.0, &p()).unwrap().value;
        assert!((v - d).abs() < 1e-15);
        assert!((v - 0.090_170_299_508_048_11).abs() < 1e-15);
        let sq = s5sq_sech2(1.0, &p()).unwrap().value;
        assert!((sq - 0.007_455_925_513_314_551).abs() < 1e-16);
    }

    #[test]
    fn s6_values_and_parity() {
        for a in [0.5, 2.0] {
            assert_eq!(s6_alt_sin_over_expm1(a, 0.0, &p()).unwrap().value, 0.0);
            assert!(s6_alt_sin_over_expm1(a, PI, &p()).unwrap().value.abs() < 1e-14);
        }
        let open = s6_alt_sin_over_expm1(2.0, 1.0, &p()).unwrap().value;
        let closed = s6_closed(2.0, 1.0, &p()).unwrap().value;
        assert!((open - closed).abs() < 1e-12);
        assert_eq!(
            s6_alt_sin_over_expm1(1.5, -0.7, &p()).unwrap().value,
            -s6_alt_sin_over_expm1(1.5, 0.7, &p()).unwrap().value
        );
    }

    #[test]
    fn s7_values_and_parity() {
        assert_eq!(s7_csch_sinh(2.0, 0.0, &p()).unwrap().value, 0.0);
        let d = direct(12, |n| {
            (2.0 * PI * n / 2.0).sinh() / (2.0 * n * PI * PI / 2.0).sinh()
        });
        let r = s7_csch_sinh(2.0, 1.0, &p()).unwrap();
        assert!((r.value - d).abs() < 1e-16);
        assert!(r.tail_bound < 1e-14);
        for v in [0.3, 1.0, 3.0] {
            assert_eq!(
                s7_csch_sinh(1.0, -v, &p()).unwrap().value,
                -s7_csch_sinh(1.0, v, &p()).unwrap().value
            );
        }
        assert!(s7_csch_sinh(1.0, PI, &p()).is_err());
    }

    #[test]
    fn s8_values() {
        let first = (2.0 * PI).exp() / (1.0 + (2.0 * PI).exp()).powi(3);
        let v = s8_exp_over_cube(1.0, &p()).unwrap().value;
        assert!((v - 3.467_890_024_137_306e-6).abs() < 1e-19);
        assert!(v > first);
        let tiny = s8_exp_over_cube(0.1, &p()).unwrap().value;
        let first = (-40.0 * PI).exp();
        assert!(((tiny - first) / first).abs() < 1e-15);
        for b in [0.5f64, 1.0, 2.0] {
            let term = |n: f64| (2.0 * n * PI / b).exp() / (1.0 + (2.0 * n * PI / b).exp()).powi(3);
            assert!((1..10).all(|n| term(n as f64 + 1.0) < term(n as f64)));
        }
    }

    #[test]
    fn s9_values() {
        assert_eq!(
            s9_lambert_e2(&Nome::new(0.0).unwrap(), &p()).unwrap().value,
            0.0
        );
        let q = Nome::from_rate(2.0 * PI).unwrap();
        let v = s9_lambert_e2(&q, &p()).unwrap().value;
        assert!((v - (1.0 - 3.0 / PI) / 24.0).abs() < 1e-16);
        let d = direct(200, |n| n * 0.5f64.powf(n) / (1.0 - 0.5f64.powf(n)));
        assert!((s9_lambert_e2(&Nome::new(0.5).unwrap(), &p()).unwrap().value - d).abs() < 1e-12);
    }

    #[test]
    fn s10_values() {
        let q = Nome::new(0.3).unwrap();
        assert_eq!(s10_alt_sin_lambert(0.0, &q, &p()).unwrap().value, 0.0);
        assert!(s10_alt_sin_lambert(PI / 2.0, &q, &p()).unwrap().value.abs() < 1e-15);
        let d = direct(40, |n| {
            (-1f64).powf(n) * (0.8 * n).sin() * 0.09f64.powf(n) / (1.0 - 0.09f64.powf(n))
        });
        let r = s10_alt_sin_lambert(0.4, &q, &p()).unwrap();
        assert!((r.value - d).abs() < 1e-16);
        assert!(r.tail_bound < 1e-14);
    }

    #[test]
    fn bernoulli_and_zeta() {
        assert_eq!(bernoulli_b2n(1).unwrap(), 1.0 / 6.0);
        assert_eq!(zeta_neg(1).unwrap(), -1.0 / 12.0);
        assert_eq!(bernoulli_b2n(2).unwrap(), -1.0 / 30.0);
        assert!((zeta_neg(2).unwrap() - 1.0 / 120.0).abs() < 1e-18);
        assert!((zeta_neg(3).unwrap() + 1.0 / 252.0).abs() < 1e-18);
        assert!((zeta_even(1).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_even(2).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!(bernoulli_b2n(21).is_err());
        assert_eq!(bernoulli_b2n_exact(20).unwrap().1, 13530);
    }
}
