//! Complete elliptic integrals of the first and second kind by the
//! arithmetic-geometric mean, their derivatives, and the nome type shared by
//! the theta and Lambert series.
//!
//! Arguments carry an explicit convention tag: the same number means
//! different things as a modulus `k` and as a parameter `m = k²`, and the
//! audited identities use both.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Arguments at or above this value are treated as the logarithmic singularity of K.
pub const SINGULAR_CUTOFF: f64 = 1.0 - 1e-12;

const AGM_MAX_ITER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// The modulus `k`; the integrand is `1/sqrt(1 - k² sin²θ)`.
    Modulus,
    /// The parameter `m = k²`.
    Parameter,
}

/// A modulus or parameter value in `[0, 1]` with its convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticArgument {
    value: f64,
    convention: Convention,
}

impl EllipticArgument {
    pub fn new(value: f64, convention: Convention) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain(format!(
                "elliptic argument must lie in [0, 1], got {value}"
            )));
        }
        Ok(Self { value, convention })
    }

    pub fn modulus(k: f64) -> Result<Self> {
        Self::new(k, Convention::Modulus)
    }

    pub fn parameter(m: f64) -> Result<Self> {
        Self::new(m, Convention::Parameter)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `k`, whatever the stored convention.
    pub fn k(&self) -> f64 {
        match self.convention {
            Convention::Modulus => self.value,
            Convention::Parameter => self.value.sqrt(),
        }
    }

    /// `m = k²`, whatever the stored convention.
    pub fn m(&self) -> f64 {
        match self.convention {
            Convention::Modulus => self.value * self.value,
            Convention::Parameter => self.value,
        }
    }

    /// `k' = sqrt(1 - k²)`, computed without cancellation near `k = 1`.
    pub fn complementary_modulus(&self) -> f64 {
        match self.convention {
            Convention::Modulus => ((1.0 - self.value) * (1.0 + self.value)).sqrt(),
            Convention::Parameter => (1.0 - self.value).sqrt(),
        }
    }

    /// The complementary argument in the same convention (`k'` or `1 - m`).
    pub fn complement(&self) -> Self {
        let value = match self.convention {
            Convention::Modulus => self.complementary_modulus(),
            Convention::Parameter => 1.0 - self.value,
        };
        Self {
            value,
            convention: self.convention,
        }
    }

    pub fn to_parameter(&self) -> Self {
        Self {
            value: self.m(),
            convention: Convention::Parameter,
        }
    }

    pub fn to_modulus(&self) -> Self {
        Self {
            value: self.k(),
            convention: Convention::Modulus,
        }
    }

    fn check_regular(&self) -> Result<()> {
        if self.value >= SINGULAR_CUTOFF {
            Err(Error::Singular { value: self.value })
        } else {
            Ok(())
        }
    }

    fn check_interior(&self) -> Result<()> {
        self.check_regular()?;
        if self.value <= 0.0 {
            return Err(Error::Domain(format!(
                "argument must be strictly positive, got {}",
                self.value
            )));
        }
        Ok(())
    }
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!(
            "agm needs positive finite inputs, got ({x}, {y})"
        )));
    }
    if x == y {
        return Ok(x);
    }
    let (mut a, mut b) = (x, y);
    for _ in 0..AGM_MAX_ITER {
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        a = next_a;
        b = next_b;
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
    }
    Ok(a)
}

/// Number of AGM steps `agm` takes on `(x, y)`.
pub fn agm_iterations(x: f64, y: f64) -> Result<usize> {
    agm(x, y)?;
    if x == y {
        return Ok(0);
    }
    let (mut a, mut b) = (x, y);
    for i in 0..AGM_MAX_ITER {
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        a = next_a;
        b = next_b;
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            return Ok(i + 1);
        }
    }
    Ok(AGM_MAX_ITER)
}

/// Complete elliptic integral of the first kind, `K = π / (2 agm(1, k'))`.
#[allow(non_snake_case)]
pub fn ellint_K(arg: EllipticArgument) -> Result<f64> {
    arg.check_regular()?;
    complete_k_from_complement(arg.complementary_modulus())
}

/// `K` given the complementary modulus `k'` directly.
pub(crate) fn complete_k_from_complement(kprime: f64) -> Result<f64> {
    Ok(PI / (2.0 * agm(1.0, kprime)?))
}

/// K for any parameter `m < 1`, negative values included.
///
/// Needed where an identity feeds an imaginary modulus (`m < 0`) into K.
#[allow(non_snake_case)]
pub fn ellint_K_extended(m: f64) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::Domain(format!("parameter must be finite, got {m}")));
    }
    if m >= SINGULAR_CUTOFF {
        return Err(Error::Singular { value: m });
    }
    Ok(PI / (2.0 * agm(1.0, (1.0 - m).sqrt())?))
}

/// Complete elliptic integral of the second kind.
///
/// AGM with the correction sum `E = K (1 - Σ 2^(n-1) c_n²)`, `c_0 = k`,
/// `c_(n+1) = (a_n - b_n)/2`. `E(1) = 1` is returned directly.
#[allow(non_snake_case)]
pub fn ellint_E(arg: EllipticArgument) -> Result<f64> {
    if arg.value == 1.0 {
        return Ok(1.0);
    }
    arg.check_regular()?;
    complete_e_from_pair(arg.m(), arg.complementary_modulus())
}

/// `E` from `m = k²` and `k'`, so callers holding an accurate `k'` keep it.
pub(crate) fn complete_e_from_pair(m: f64, kprime: f64) -> Result<f64> {
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    if kprime == 0.0 {
        return Ok(1.0);
    }
    let mut a = 1.0;
    let mut b = kprime;
    let mut correction = CompensatedSum::new();
    correction.add(0.5 * m);
    let mut weight = 0.5;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        a = next_a;
        b = next_b;
        weight *= 2.0;
        correction.add(weight * c * c);
        if c.abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    Ok(k * (1.0 - correction.value()))
}

/// Derivative of K with respect to its argument, in the argument's own convention.
///
/// Modulus: `dK/dk = (E - k'² K) / (k k'²)`.
/// Parameter: `dK/dm = (E - (1 - m) K) / (2 m (1 - m))`.
#[allow(non_snake_case)]
pub fn dK(arg: EllipticArgument) -> Result<f64> {
    arg.check_interior()?;
    let k_val = ellint_K(arg)?;
    let e_val = ellint_E(arg)?;
    Ok(match arg.convention {
        Convention::Modulus => {
            let kp2 = (1.0 - arg.value) * (1.0 + arg.value);
            (e_val - kp2 * k_val) / (arg.value * kp2)
        }
        Convention::Parameter => {
            let m = arg.value;
            (e_val - (1.0 - m) * k_val) / (2.0 * m * (1.0 - m))
        }
    })
}

/// `E K' + E' K - K K' - π/2`; zero up to rounding for a correct K/E pair.
pub fn legendre_defect(arg: EllipticArgument) -> Result<f64> {
    arg.check_interior()?;
    let comp = arg.complement();
    comp.check_interior()?;
    let (k, e) = (ellint_K(arg)?, ellint_E(arg)?);
    let (kc, ec) = (ellint_K(comp)?, ellint_E(comp)?);
    let mut acc = CompensatedSum::new();
    acc.add(e * kc);
    acc.add(ec * k);
    acc.add(-k * kc);
    acc.add(-FRAC_PI_2);
    Ok(acc.value())
}

/// How a nome was constructed, kept for report provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NomeForm {
    Direct,
    /// `q = exp(-rate)`.
    Exponential {
        rate: f64,
    },
}

/// A nome `q` in `[0, 1)`; `log_q` is kept exact when built from an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nome {
    q: f64,
    log_q: f64,
    form: NomeForm,
}

impl Nome {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::Domain(format!("nome must lie in [0, 1), got {q}")));
        }
        Ok(Self {
            q,
            log_q: q.ln(),
            form: NomeForm::Direct,
        })
    }

    /// `q = exp(-rate)` with `rate > 0`.
    pub fn from_rate(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || rate.is_infinite() {
            return Err(Error::Domain(format!(
                "nome rate must be positive and finite, got {rate}"
            )));
        }
        Ok(Self {
            q: (-rate).exp(),
            log_q: -rate,
            form: NomeForm::Exponential { rate },
        })
    }

    /// `q = exp(-π a)`.
    pub fn from_pi_multiple(a: f64) -> Result<Self> {
        Self::from_rate(PI * a)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn log_q(&self) -> f64 {
        self.log_q
    }

    pub fn form(&self) -> NomeForm {
        self.form
    }

    /// `q^e` evaluated as `exp(e log q)`.
    pub fn pow(&self, e: f64) -> f64 {
        if self.q == 0.0 {
            return if e == 0.0 { 1.0 } else { 0.0 };
        }
        (e * self.log_q).exp()
    }

    /// The nome `q²`.
    pub fn squared(&self) -> Self {
        match self.form {
            NomeForm::Exponential { rate } => Self {
                q: (-2.0 * rate).exp(),
                log_q: -2.0 * rate,
                form: NomeForm::Exponential { rate: 2.0 * rate },
            },
            NomeForm::Direct => Self {
                q: self.q * self.q,
                log_q: 2.0 * self.log_q,
                form: NomeForm::Direct,
            },
        }
    }

    pub fn describe(&self) -> String {
        match self.form {
            NomeForm::Direct => format!("q = {}", self.q),
            NomeForm::Exponential { rate } => format!("q = exp(-{rate})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn agm_fixed_points() {
        assert_eq!(agm(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(agm(3.5, 3.5).unwrap(), 3.5);
    }

    #[test]
    fn agm_one_two() {
        // hand iteration: a1 = 1.5, b1 = sqrt 2, ... converges to 1.4567910310469068...
        let hand = {
            let (mut a, mut b) = (1.0f64, 2.0f64);
            for _ in 0..10 {
                let t = 0.5 * (a + b);
                b = (a * b).sqrt();
                a = t;
            }
            a
        };
        assert!(rel(agm(1.0, 2.0).unwrap(), hand) < 1e-15);
        assert!(rel(agm(1.0, 2.0).unwrap(), 1.456_791_031_046_907) < 1e-15);
    }

    #[test]
    fn agm_rejects_nonpositive() {
        assert!(agm(0.0, 1.0).is_err());
        assert!(agm(1.0, -2.0).is_err());
    }

    #[test]
    fn agm_iteration_budget() {
        assert!(agm_iterations(1.0, 1e-10).unwrap() <= 8);
        assert!(agm_iterations(1e5, 1e-5).unwrap() <= 8);
    }

    #[test]
    fn k_values() {
        let k0 = ellint_K(EllipticArgument::modulus(0.0).unwrap()).unwrap();
        assert_eq!(k0, FRAC_PI_2);
        let ks = ellint_K(EllipticArgument::modulus(SQRT_HALF).unwrap()).unwrap();
        assert!(rel(ks, 1.854_074_677_301_371_9) < 1e-15);
        let km = ellint_K(EllipticArgument::parameter(0.5).unwrap()).unwrap();
        assert!(rel(km, ks) < 1e-15);
    }

    #[test]
    fn e_values() {
        assert_eq!(
            ellint_E(EllipticArgument::modulus(0.0).unwrap()).unwrap(),
            FRAC_PI_2
        );
        assert_eq!(
            ellint_E(EllipticArgument::modulus(1.0).unwrap()).unwrap(),
            1.0
        );
        let es = ellint_E(EllipticArgument::modulus(SQRT_HALF).unwrap()).unwrap();
        assert!(rel(es, 1.350_643_881_047_675_5) < 1e-15);
    }

    #[test]
    fn singular_argument_rejected() {
        let arg = EllipticArgument::modulus(1.0 - 1e-13).unwrap();
        assert!(matches!(ellint_K(arg), Err(Error::Singular { .. })));
        assert!(ellint_E(arg).is_err());
        assert!(EllipticArgument::modulus(1.5).is_err());
        assert!(EllipticArgument::parameter(-0.1).is_err());
    }

    #[test]
    fn dk_examples() {
        let dm = dK(EllipticArgument::parameter(0.5).unwrap()).unwrap();
        assert!(rel(dm, 0.847_213_084_793_979) < 1e-13);
        let dk = dK(EllipticArgument::modulus(SQRT_HALF).unwrap()).unwrap();
        assert!(rel(dk, 1.198_140_234_735_592_2) < 1e-13);
        let near_zero = dK(EllipticArgument::parameter(1e-6).unwrap()).unwrap();
        assert!((near_zero - PI / 8.0).abs() < 1e-6);
        assert!(dK(EllipticArgument::parameter(0.0).unwrap()).is_err());
    }

    #[test]
    fn legendre_defect_is_small() {
        for arg in [
            EllipticArgument::modulus(SQRT_HALF).unwrap(),
            EllipticArgument::modulus(0.1).unwrap(),
            EllipticArgument::parameter(0.3).unwrap(),
        ] {
            assert!(legendre_defect(arg).unwrap().abs() < 1e-13, "{arg:?}");
        }
    }

    #[test]
    fn extended_k_matches_for_negative_parameter() {
        // K(-1) = K(1/2)/sqrt(2) by the imaginary-modulus transformation.
        let half = ellint_K(EllipticArgument::parameter(0.5).unwrap()).unwrap();
        let neg = ellint_K_extended(-1.0).unwrap();
        assert!(rel(neg, half / 2f64.sqrt()) < 1e-15);
    }

    #[test]
    fn nome_from_pi_multiple_keeps_log() {
        let n = Nome::from_pi_multiple(1.3).unwrap();
        assert!(rel(n.log_q(), -PI * 1.3) < 1e-15);
        assert!(rel(n.q(), (-PI * 1.3).exp()) < 1e-15);
        assert!(Nome::new(1.0).is_err());
        assert!(Nome::new(0.0).is_ok());
        assert_eq!(Nome::new(0.0).unwrap().pow(4.0), 0.0);
    }
}
