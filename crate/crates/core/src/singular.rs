//! Singular moduli: solving `K(k')/K(k) = a` for `k`, the inverse map
//! `k ↦ K(k')/K(k)`, and finite-difference oracles for its derivative.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::elliptic::{
    agm, complete_e_from_pair, complete_k_from_complement, dK, ellint_E, ellint_K, Convention,
    EllipticArgument,
};
use crate::error::{Error, Result};

pub const SOLVE_RANGE: (f64, f64) = (0.05, 20.0);

/// Central-difference base step used by [`dadk_fd`].
pub const FD_BASE_STEP: f64 = 1e-3;

const BISECTION_STEPS: usize = 52;
const SECANT_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularSolve {
    pub a: f64,
    /// The solved modulus (Modulus convention).
    pub k: EllipticArgument,
    /// `k' = sqrt(1 - k²)`, solved directly when `a < 1` so it stays accurate
    /// even when `k` itself rounds towards 1.
    pub complement: f64,
    pub iterations: usize,
    /// `|K(k')/K(k) - a|` evaluated from the `(k, k')` pair.
    pub residual: f64,
}

impl SingularSolve {
    /// `(K(k), E(k))` computed from the accurate `(k, k')` pair.
    pub fn integrals(&self) -> Result<(f64, f64)> {
        let kk = complete_k_from_complement(self.complement)?;
        let ee = complete_e_from_pair(self.k.m(), self.complement)?;
        Ok((kk, ee))
    }
}

/// `K(κ')/K(κ)` for a modulus `κ = e^x`, as a ratio of AGMs.
fn period_ratio_log(x: f64) -> Result<f64> {
    let kappa = x.exp();
    let kappa_c = ((1.0 - kappa) * (1.0 + kappa)).sqrt();
    Ok(agm(1.0, kappa_c)? / agm(1.0, kappa)?)
}

/// Solves `K(k')/K(k) = a` for the modulus `k`.
///
/// Works on the smaller of the pair: for `a >= 1` it finds `k <= 1/√2`, for
/// `a < 1` it finds `k' = k(1/a)` and sets `k = sqrt(1 - k'²)`. Bisection in
/// `log k` brackets the root, a few secant steps polish it.
pub fn solve_k(a: f64) -> Result<SingularSolve> {
    let (lo, hi) = SOLVE_RANGE;
    if !(lo..=hi).contains(&a) {
        return Err(Error::Range { value: a, lo, hi });
    }
    let s = if a >= 1.0 { a } else { 1.0 / a };
    let target = s.ln();
    let g = |x: f64| -> Result<f64> { Ok(period_ratio_log(x)?.ln() - target) };

    // g is decreasing in x; g(ln 1e-30) > 0 for every s <= 20.
    let mut x_lo = (1e-30f64).ln();
    let mut x_hi = FRAC_1_SQRT_2.ln();
    let mut g_lo = g(x_lo)?;
    let mut g_hi = g(x_hi)?;
    let mut iterations = 0;
    if g_hi == 0.0 {
        x_lo = x_hi;
        g_lo = g_hi;
    }
    for _ in 0..BISECTION_STEPS {
        if g_lo == 0.0 {
            break;
        }
        let mid = 0.5 * (x_lo + x_hi);
        let g_mid = g(mid)?;
        iterations += 1;
        if g_mid > 0.0 {
            x_lo = mid;
            g_lo = g_mid;
        } else {
            x_hi = mid;
            g_hi = g_mid;
        }
    }

    let (mut x0, mut g0, mut x1, mut g1) = (x_lo, g_lo, x_hi, g_hi);
    if g0.abs() < g1.abs() {
        std::mem::swap(&mut x0, &mut x1);
        std::mem::swap(&mut g0, &mut g1);
    }
    for _ in 0..SECANT_STEPS {
        if g1 == 0.0 || g1 == g0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if !x2.is_finite() {
            break;
        }
        let g2 = g(x2)?;
        iterations += 1;
        if g2.abs() >= g1.abs() {
            break;
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g2;
    }

    let kappa = x1.exp();
    let kappa_c = ((1.0 - kappa) * (1.0 + kappa)).sqrt();
    let (k, complement) = if a >= 1.0 {
        (kappa, kappa_c)
    } else {
        (kappa_c, kappa)
    };
    // ratio = K(k')/K(k) = agm(1, k') / agm(1, k)
    let ratio = agm(1.0, complement)? / agm(1.0, k)?;
    Ok(SingularSolve {
        a,
        k: EllipticArgument::modulus(k)?,
        complement,
        iterations,
        residual: (ratio - a).abs(),
    })
}

/// `K(complement)/K(arg)` in the argument's own convention.
pub fn a_of_k(arg: EllipticArgument) -> Result<f64> {
    if arg.value() <= 0.0 {
        return Err(Error::Domain(format!(
            "a_of_k needs a positive argument, got {}",
            arg.value()
        )));
    }
    Ok(ellint_K(arg.complement())? / ellint_K(arg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdEstimate {
    pub value: f64,
    /// Difference between the two highest Richardson levels.
    pub error: f64,
}

/// Central difference with two levels of Richardson extrapolation
/// (steps `h`, `h/2`, `h/4`; error `O(h^6)`).
pub fn richardson_derivative<F>(f: F, x: f64, h: f64) -> Result<FdEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let central = |step: f64| -> Result<f64> { Ok((f(x + step)? - f(x - step)?) / (2.0 * step)) };
    let d0 = central(h)?;
    let d1 = central(h / 2.0)?;
    let d2 = central(h / 4.0)?;
    let r1 = (4.0 * d1 - d0) / 3.0;
    let r1b = (4.0 * d2 - d1) / 3.0;
    let r2 = (16.0 * r1b - r1) / 15.0;
    Ok(FdEstimate {
        value: r2,
        error: (r2 - r1b).abs(),
    })
}

fn check_fd_range(arg: EllipticArgument) -> Result<()> {
    if !(0.05..=0.95).contains(&arg.value()) {
        return Err(Error::Domain(format!(
            "finite-difference oracle needs an argument in [0.05, 0.95], got {}",
            arg.value()
        )));
    }
    Ok(())
}

/// Finite-difference oracle for `da/dk` (or `da/dm`), `a = K(complement)/K`.
pub fn dadk_fd(arg: EllipticArgument) -> Result<FdEstimate> {
    dadk_fd_with_step(arg, FD_BASE_STEP)
}

pub fn dadk_fd_with_step(arg: EllipticArgument, h: f64) -> Result<FdEstimate> {
    check_fd_range(arg)?;
    let convention = arg.convention();
    richardson_derivative(
        |v| a_of_k(EllipticArgument::new(v, convention)?),
        arg.value(),
        h,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub value: f64,
}

/// Analytic candidates for `da/dk` in the argument's convention.
///
/// * `printed-<convention>`: `dK/d(arg) / (E K - K²)`;
/// * `classical-<convention>`: `-π/(2 k k'² K²)` (modulus) or
///   `-π/(4 m (1-m) K²)` (parameter).
pub fn dadk_candidates(arg: EllipticArgument) -> Result<Vec<Candidate>> {
    check_fd_range(arg)?;
    let kk = ellint_K(arg)?;
    let ee = ellint_E(arg)?;
    let slope = dK(arg)?;
    let (tag, classical) = match arg.convention() {
        Convention::Modulus => {
            let k = arg.value();
            let kp2 = (1.0 - k) * (1.0 + k);
            ("modulus", -PI / (2.0 * k * kp2 * kk * kk))
        }
        Convention::Parameter => {
            let m = arg.value();
            ("parameter", -PI / (4.0 * m * (1.0 - m) * kk * kk))
        }
    };
    Ok(vec![
        Candidate {
            label: format!("printed-{tag}"),
            value: slope / (ee * kk - kk * kk),
        },
        Candidate {
            label: format!("classical-{tag}"),
            value: classical,
        },
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateVerdict {
    pub label: String,
    pub value: f64,
    pub oracle: f64,
    pub relative_deviation: f64,
    pub matches: bool,
}

/// Compares each candidate against the finite-difference oracle (match: ≤ 1e-6 relative).
pub fn adjudicate_dadk(arg: EllipticArgument) -> Result<Vec<CandidateVerdict>> {
    let oracle = dadk_fd(arg)?.value;
    Ok(dadk_candidates(arg)?
        .into_iter()
        .map(|c| {
            let dev = ((c.value - oracle) / oracle).abs();
            CandidateVerdict {
                label: c.label,
                value: c.value,
                oracle,
                relative_deviation: dev,
                matches: dev <= 1e-6,
            }
        })
        .collect())
}
