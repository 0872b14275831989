//! The catalog. Each side is a plain function of the grid point; the two
//! sides of a variant never share an identity-specific intermediate.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::polynomial::{
    log_of, theta2_weighted_log_series, theta4_weighted_log_series, zeta_integral_term,
    zeta_integral_term_quadrature, PolynomialSpec, Theta4LogForm,
};
use super::{Expectation, GridPoint, IdentityRecord, ParamSpec, Side, Variant};
use crate::elliptic::{ellint_K, ellint_K_extended, Convention, EllipticArgument, Nome};
use crate::error::{Error, Result};
use crate::series::{
    s10_alt_sin_lambert, s1_cosh_over_sinh, s3_alt_n_over_expm1, s4_n_over_sinh, s5_sech,
    s5sq_sech2, s6_alt_sin_over_expm1, s6_closed, s7_csch_sinh, s8_exp_over_cube, s9_lambert_e2,
    zeta_neg, CoshScaling,
};
use crate::singular::{
    a_of_k, dadk_candidates, dadk_fd, richardson_derivative, solve_k, FD_BASE_STEP,
};
use crate::summation::{sum_series, SeriesResult, Tally, Term, TruncationPolicy};
use crate::theta::{
    log_q_product_p0, log_theta_derivatives_counted, theta2, theta4, theta4_imag,
    theta4_imag_derivative, theta_u_derivative, LogThetaKind, ThetaKind,
};

type Out = Result<SeriesResult>;

macro_rules! side {
    ($f:ident) => {
        Side {
            name: stringify!($f),
            eval: $f,
        }
    };
}

fn variant(id: &'static str, lhs: Side, rhs: Side, note: &'static str) -> Variant {
    Variant { id, lhs, rhs, note }
}

fn param(name: &'static str, grid: &[f64], lo: f64, hi: f64) -> ParamSpec {
    ParamSpec {
        name,
        grid: grid.to_vec(),
        range: (lo, hi),
    }
}

fn exact(v: f64) -> SeriesResult {
    SeriesResult::exact(v)
}

fn positive_log(x: SeriesResult, what: &str) -> Out {
    if x.value > 0.0 {
        Ok(log_of(x))
    } else {
        Err(Error::Domain(format!(
            "log of non-positive {what} = {}",
            x.value
        )))
    }
}

/// `(K, E)` at the singular modulus `k_a`.
fn singular_integrals(a: f64) -> Result<(f64, f64)> {
    solve_k(a)?.integrals()
}

fn alternating(n: u64) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `e^{x} / sinh(y)` for `y > 0`, as decaying exponentials.
fn exp_over_sinh(x: f64, y: f64) -> f64 {
    2.0 * (x - y).exp() / -(-2.0 * y).exp_m1()
}

fn integer_param(
    p: &GridPoint,
    name: &str,
    lo: usize,
    hi: usize,
) -> std::result::Result<usize, String> {
    let v = p.get(name);
    if v.fract() != 0.0 || v < lo as f64 || v > hi as f64 {
        return Err(format!(
            "{name} must be an integer in [{lo}, {hi}], got {v}"
        ));
    }
    Ok(v as usize)
}

fn monomial(p: &GridPoint) -> Result<PolynomialSpec> {
    PolynomialSpec::monomial(p.get("power") as usize)
}

fn log_theta_side(
    kind: LogThetaKind,
    order: usize,
    s: f64,
    q: &Nome,
    policy: &TruncationPolicy,
) -> Out {
    let (d, terms) = log_theta_derivatives_counted(kind, order, s, q, policy)?;
    Ok(SeriesResult {
        value: d[order],
        terms_used: terms,
        tail_bound: 0.0,
    })
}

// ---------------------------------------------------------------- P1

fn p1_cosh2_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s1_cosh_over_sinh(p.get("a"), p.get("t"), CoshScaling::Double, pol)
}

fn p1_cosh1_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s1_cosh_over_sinh(p.get("a"), p.get("t"), CoshScaling::Single, pol)
}

fn p1_theta_side(a: f64, t: f64, pol: &TruncationPolicy) -> Out {
    let q = Nome::from_pi_multiple(a)?;
    let lp = log_q_product_p0(&q, pol)?;
    let lt = positive_log(theta4_imag(t, &q, pol)?, "theta4")?;
    Ok(Tally::new().add(1.0, &lp).add(-1.0, &lt).finish())
}

fn p1_log_product_minus_log_theta(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p1_theta_side(p.get("a"), p.get("t"), pol)
}

fn p1_log_product_minus_log_theta_half(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p1_theta_side(p.get("a"), p.get("t") / 2.0, pol)
}

fn p1() -> IdentityRecord {
    IdentityRecord {
        id: "P1",
        anchor: "Σ cosh(2tn)/(n sinh(πan)) = log(P_0) − log(θ4(it, e^{−aπ})), P_0 = Π(1 − e^{−2naπ})",
        params: vec![param("a", &[0.8, 1.0, 1.5], 0.05, 20.0), param("t", &[0.0, 0.1, 0.3], -10.0, 10.0)],
        constraint: Some(|p| {
            if 2.0 * p.get("t").abs() < PI * p.get("a") {
                Ok(())
            } else {
                Err("needs 2|t| < πa".into())
            }
        }),
        variants: vec![
            variant(
                "base",
                side!(p1_cosh2_series),
                side!(p1_log_product_minus_log_theta),
                "as stated",
            ),
            variant(
                "single-scaling",
                side!(p1_cosh1_series),
                side!(p1_log_product_minus_log_theta_half),
                "cosh(tn) paired with θ4(it/2), the form used when generalising to polynomial weights",
            ),
            variant(
                "mixed-scaling",
                side!(p1_cosh1_series),
                side!(p1_log_product_minus_log_theta),
                "cosh(tn) paired with θ4(it)",
            ),
        ],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

// ---------------------------------------------------------------- P2

fn p2_sin_squared_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (a, th) = (p.get("a"), p.get("theta"));
    Ok(sum_series(pol, 1, |n| {
        let nf = n as f64;
        let mag = 4.0 / ((2.0 * PI * nf * a).exp_m1() * nf);
        let s = (th * nf).sin();
        Term::new(alternating(n) * s * s * mag, mag)
    })?
    .result)
}

fn p2_theta_ratio(a: f64, th: f64, arg: f64, pol: &TruncationPolicy) -> Out {
    let q = Nome::from_rate(PI / a)?;
    let num = positive_log(theta4_imag(arg, &q, pol)?, "theta4")?;
    let den = positive_log(theta4(0.0, &q, pol)?, "theta4")?;
    let c = th.cos();
    if c <= 0.0 {
        return Err(Error::Domain(format!("cos θ = {c} is not positive")));
    }
    Ok(Tally::new()
        .add(1.0, &num)
        .add(-1.0, &den)
        .constant(-c.ln() - th * th / (a * PI))
        .finish())
}

fn p2_log_theta_ratio(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (a, th) = (p.get("a"), p.get("theta"));
    p2_theta_ratio(a, th, th / a, pol)
}

fn p2_log_theta_ratio_unscaled(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (a, th) = (p.get("a"), p.get("theta"));
    p2_theta_ratio(a, th, th, pol)
}

fn p2_sinh_squared_form(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (a, c) = (p.get("a"), p.get("theta"));
    let series = sum_series(pol, 1, |n| {
        let nf = n as f64;
        let x = c * nf;
        let y = 2.0 * PI * nf / a;
        // sinh²(x) / (e^y - 1)
        let mag = ((2.0 * x - y).exp() - 2.0 * (-y).exp() + (-2.0 * x - y).exp())
            / (4.0 * -(-y).exp_m1())
            / nf;
        Term::new(alternating(n) * mag, mag)
    })?
    .result;
    Ok(Tally::new()
        .add(-4.0, &series)
        .constant(-a * c * c / PI + c.cosh().ln())
        .finish())
}

fn p2_real_argument_theta_ratio(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (a, c) = (p.get("a"), p.get("theta"));
    let q = Nome::from_pi_multiple(a)?;
    let num = positive_log(theta4(a * c, &q, pol)?, "theta4")?;
    let den = positive_log(theta4(0.0, &q, pol)?, "theta4")?;
    Ok(Tally::new().add(1.0, &num).add(-1.0, &den).finish())
}

fn p2() -> IdentityRecord {
    IdentityRecord {
        id: "P2",
        anchor: "4 Σ (−1)ⁿ sin²(θn)/((e^{2πna} − 1)n) = log(θ4(iθ/a, e^{−π/a}) / (θ4(0, e^{−π/a}) cos θ)) − θ²/(aπ)",
        params: vec![param("a", &[0.5, 1.0, 2.0], 0.05, 20.0), param("theta", &[0.2, 0.5], -1.5, 1.5)],
        constraint: Some(|p| {
            let bound = (PI / 2.0).min(PI / p.get("a"));
            if p.get("theta").abs() < bound {
                Ok(())
            } else {
                Err("needs |θ| < min(π/2, π/a)".into())
            }
        }),
        variants: vec![
            variant("base", side!(p2_sin_squared_series), side!(p2_log_theta_ratio), "as stated"),
            variant(
                "proof-sinh",
                side!(p2_sinh_squared_form),
                side!(p2_real_argument_theta_ratio),
                "the sinh² relation the derivation starts from, with c = θ",
            ),
            variant(
                "unscaled-argument",
                side!(p2_sin_squared_series),
                side!(p2_log_theta_ratio_unscaled),
                "θ4 argument iθ instead of iθ/a",
            ),
        ],
        expected: Expectation::Contested,
        note: Some("θ range is not stated with the identity; grid kept to small θ"),
    }
}

// ---------------------------------------------------------------- P2b

fn p2b_theta4_slope(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let z = p.get("z");
    theta4_imag_derivative(1, z, &Nome::from_rate(z)?, pol)
}

fn p2b_twice_theta4(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let z = p.get("z");
    Ok(theta4_imag(z, &Nome::from_rate(z)?, pol)?.affine(2.0, 0.0))
}

fn p2b_minus_twice_theta4(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let z = p.get("z");
    Ok(theta4_imag(z, &Nome::from_rate(z)?, pol)?.affine(-2.0, 0.0))
}

fn p2b() -> IdentityRecord {
    IdentityRecord {
        id: "P2b",
        anchor: "Θ(iz, e^{−z}) + 2iθ4(iz, e^{−z}) = 0, Θ = ∂θ4/∂u; with Θ(it) = −i d/dt θ4(it) this reads d/dt θ4(it)|_{t=z} = 2θ4(iz)",
        params: vec![param("z", &[0.5, 1.0, 2.0], 0.01, 50.0)],
        constraint: None,
        variants: vec![
            variant("base", side!(p2b_theta4_slope), side!(p2b_twice_theta4), "as stated"),
            variant(
                "sign-flipped",
                side!(p2b_theta4_slope),
                side!(p2b_minus_twice_theta4),
                "Θ − 2iθ4 = 0",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P3

fn p3_log_theta_curvature(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let a = p.get("a");
    let q = Nome::from_rate(2.0 * PI * a)?;
    // ∂²_t at t = a with s = πt
    Ok(
        log_theta_side(LogThetaKind::Theta4ImagHalf, 2, PI * a, &q, pol)?
            .affine(2.0 * PI * PI, 0.0),
    )
}

fn p3_ke_minus_k2(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let (k, e) = singular_integrals(p.get("a"))?;
    Ok(exact(k * e - k * k))
}

fn p3() -> IdentityRecord {
    IdentityRecord {
        id: "P3",
        anchor:
            "2 ∂²/∂t² log θ4(itπ/2, e^{−2πa}) |_{t=a} = K(k_a)E(k_a) − K(k_a)², K(k_a')/K(k_a) = a",
        params: vec![param("a", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![variant(
            "base",
            side!(p3_log_theta_curvature),
            side!(p3_ke_minus_k2),
            "as stated",
        )],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- E4, E5, E5b, E5c

fn e4_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s3_alt_n_over_expm1(2.0 * PI / p.get("a"), pol)
}

fn e4_closed(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let a = p.get("a");
    let (k, e) = singular_integrals(a)?;
    Ok(exact(
        0.125 - a / (4.0 * PI) + a * a * k * (e - k) / (2.0 * PI * PI),
    ))
}

fn e4() -> IdentityRecord {
    IdentityRecord {
        id: "E4",
        anchor: "Σ (−1)ⁿ n/(e^{2πn/a} − 1) = 1/8 − a/(4π) + a²K(k_a)(E(k_a) − K(k_a))/(2π²)",
        params: vec![param("a", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![variant(
            "base",
            side!(e4_lambert),
            side!(e4_closed),
            "as stated",
        )],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

fn e5_combination(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let a = p.get("a");
    let lambert = s3_alt_n_over_expm1(2.0 * PI / a, pol)?;
    let hyper = sum_series(pol, 1, |n| {
        let nf = n as f64;
        // cosh(x)/sinh(2x) = e^{-x} (1 + e^{-2x}) / (1 - e^{-4x})
        let x = a * nf * PI;
        let e = (-x).exp();
        Term::plain(nf * e * (1.0 + e * e) / -(-4.0 * x).exp_m1())
    })?
    .result;
    Ok(Tally::new()
        .constant(-0.25 + a / (2.0 * PI))
        .add(2.0, &lambert)
        .add(2.0 * a * a, &hyper)
        .finish())
}

fn zero_side(_: &GridPoint, _: &TruncationPolicy) -> Out {
    Ok(exact(0.0))
}

fn e5() -> IdentityRecord {
    IdentityRecord {
        id: "E5",
        anchor: "−1/4 + a/(2π) + 2 Σ (−1)ⁿ n/(e^{2πn/a} − 1) + 2a² Σ n cosh(anπ)/sinh(2anπ) = 0",
        params: vec![param("a", &[0.5, 1.0, 2.0], 0.01, 100.0)],
        constraint: None,
        variants: vec![variant(
            "base",
            side!(e5_combination),
            side!(zero_side),
            "as stated",
        )],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

fn e5b_n_over_sinh(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s4_n_over_sinh(p.get("b"), pol)
}

fn e5b_closed(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let (k, e) = singular_integrals(p.get("b"))?;
    Ok(exact(k * (k - e) / (PI * PI)))
}

fn e5b() -> IdentityRecord {
    IdentityRecord {
        id: "E5b",
        anchor: "Σ n/sinh(πbn) = (K(k_b)/π²)(K(k_b) − E(k_b))",
        params: vec![param("b", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![variant(
            "base",
            side!(e5b_n_over_sinh),
            side!(e5b_closed),
            "as stated",
        )],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

fn e5c_sech_squared(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s5sq_sech2(p.get("x"), pol)
}

fn e5c_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    Ok(s3_alt_n_over_expm1(2.0 * PI * p.get("x"), pol)?.affine(-4.0, 0.0))
}

fn e5c() -> IdentityRecord {
    IdentityRecord {
        id: "E5c",
        anchor: "Σ 1/cosh²(πnx) = −4 Σ (−1)ⁿ n/(e^{2πnx} − 1)",
        params: vec![param("x", &[0.5, 1.0, 2.0], 0.01, 100.0)],
        constraint: None,
        variants: vec![variant(
            "base",
            side!(e5c_sech_squared),
            side!(e5c_lambert),
            "as stated",
        )],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

// ---------------------------------------------------------------- E7, E7b

fn e7_half_tan(p: &GridPoint, _: &TruncationPolicy) -> Out {
    Ok(exact(p.get("a") / 2.0 * (p.get("v") / 2.0).tan()))
}

fn e7_series(a: f64, v: f64, csch_sign: f64, pol: &TruncationPolicy) -> Out {
    let s6 = s6_alt_sin_over_expm1(a, v, pol)?;
    let s7 = s7_csch_sinh(a, v, pol)?;
    Ok(Tally::new()
        .constant(v)
        .add(2.0 * a, &s6)
        .add(csch_sign * 2.0 * PI, &s7)
        .finish())
}

fn e7_expansion(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    e7_series(p.get("a"), p.get("v"), 1.0, pol)
}

fn e7_expansion_minus_csch(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    e7_series(p.get("a"), p.get("v"), -1.0, pol)
}

fn e7() -> IdentityRecord {
    IdentityRecord {
        id: "E7",
        anchor:
            "(a/2) tan(v/2) = v + 2a Σ (−1)ⁿ sin(nv)/(e^{an} − 1) + 2π Σ csch(2nπ²/a) sinh(2πnv/a)",
        params: vec![
            param("a", &[2.0, 4.0], 0.1, 50.0),
            param("v", &[0.5, 1.0, 2.0], -PI, PI),
        ],
        constraint: Some(|p| {
            if p.get("v").abs() < PI {
                Ok(())
            } else {
                Err("needs |v| < π".into())
            }
        }),
        variants: vec![
            variant("base", side!(e7_half_tan), side!(e7_expansion), "as stated"),
            variant(
                "sign-flipped-csch",
                side!(e7_half_tan),
                side!(e7_expansion_minus_csch),
                "csch series subtracted",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

fn e7b_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s6_alt_sin_over_expm1(p.get("a"), p.get("v"), pol)
}

fn e7b_closed(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s6_closed(p.get("a"), p.get("v"), pol)
}

fn e7b() -> IdentityRecord {
    IdentityRecord {
        id: "E7b",
        anchor: "Σ (−1)ⁿ sin(nv)/(e^{an} − 1) = −(1/2) Σ sin(v)/(cos(v) + cosh(an))",
        params: vec![
            param("a", &[1.0, 2.0], 0.01, 100.0),
            param("v", &[0.5, 1.0], -100.0, 100.0),
        ],
        constraint: None,
        variants: vec![variant(
            "base",
            side!(e7b_lambert),
            side!(e7b_closed),
            "as stated",
        )],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

// ---------------------------------------------------------------- E8

fn e8_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    Ok(s10_alt_sin_lambert(p.get("z"), &Nome::new(p.get("q"))?, pol)?.affine(4.0, 0.0))
}

fn e8_lambert_unsquared(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    Ok(s10_alt_sin_lambert(p.get("z"), &Nome::new(p.get("q").sqrt())?, pol)?.affine(4.0, 0.0))
}

fn e8_theta_side(z: f64, q: f64, tan_sign: f64, pol: &TruncationPolicy) -> Out {
    let ld = log_theta_side(LogThetaKind::Theta2, 1, z, &Nome::new(q)?, pol)?;
    Ok(ld.affine(1.0, tan_sign * z.tan()))
}

fn e8_tan_plus_log_theta2(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    e8_theta_side(p.get("z"), p.get("q"), 1.0, pol)
}

fn e8_minus_tan_plus_log_theta2(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    e8_theta_side(p.get("z"), p.get("q"), -1.0, pol)
}

fn e8() -> IdentityRecord {
    IdentityRecord {
        id: "E8",
        anchor: "4 Σ (−1)ⁿ sin(2nz) q^{2n}/(1 − q^{2n}) = tan(z) + (1/θ2(z, q)) ∂θ2(z, q)/∂z",
        params: vec![
            param("z", &[0.3, 0.6], -1.5, 1.5),
            param("q", &[0.2, (-PI).exp()], 0.0, 0.9),
        ],
        constraint: Some(|p| {
            if p.get("z").abs() < PI / 2.0 {
                Ok(())
            } else {
                Err("needs |z| < π/2 (θ2 vanishes at π/2)".into())
            }
        }),
        variants: vec![
            variant(
                "base",
                side!(e8_lambert),
                side!(e8_tan_plus_log_theta2),
                "as stated",
            ),
            variant(
                "minus-tan",
                side!(e8_lambert),
                side!(e8_minus_tan_plus_log_theta2),
                "−tan(z) on the right",
            ),
            variant(
                "unsquared-nome",
                side!(e8_lambert_unsquared),
                side!(e8_tan_plus_log_theta2),
                "qⁿ/(1 − qⁿ) in place of q^{2n}/(1 − q^{2n})",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P4, P4b

const P4_SAMPLES: [f64; 4] = [0.0, 0.1, 0.2, 0.3];

/// `e^{σ x²a/π} θ2(x, e^{−π/a}) / θ4(iax, e^{−aπ})` on the sample points.
fn p4_samples(a: f64, sign: f64, pol: &TruncationPolicy) -> Result<(Vec<f64>, usize)> {
    let q2 = Nome::from_rate(PI / a)?;
    let q4 = Nome::from_pi_multiple(a)?;
    let mut terms = 0;
    let mut out = Vec::with_capacity(P4_SAMPLES.len());
    for x in P4_SAMPLES {
        let t2 = theta2(x, &q2, pol)?;
        let t4 = theta4_imag(a * x, &q4, pol)?;
        terms += t2.terms_used + t4.terms_used;
        out.push((sign * x * x * a / PI).exp() * t2.value / t4.value);
    }
    Ok((out, terms))
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean.abs()
}

fn p4_relative_spread(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (v, terms) = p4_samples(p.get("a"), 1.0, pol)?;
    Ok(SeriesResult {
        value: spread(&v),
        terms_used: terms,
        tail_bound: 0.0,
    })
}

fn p4_relative_spread_negative(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (v, terms) = p4_samples(p.get("a"), -1.0, pol)?;
    Ok(SeriesResult {
        value: spread(&v),
        terms_used: terms,
        tail_bound: 0.0,
    })
}

fn p4_sample_mean(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (v, terms) = p4_samples(p.get("a"), 1.0, pol)?;
    Ok(SeriesResult {
        value: v.iter().sum::<f64>() / v.len() as f64,
        terms_used: terms,
        tail_bound: 0.0,
    })
}

fn p4_sqrt_a(p: &GridPoint, _: &TruncationPolicy) -> Out {
    Ok(exact(p.get("a").sqrt()))
}

fn p4() -> IdentityRecord {
    IdentityRecord {
        id: "P4",
        anchor: "∂_x (e^{x²a/π} θ2(x, e^{−π/a}) / θ4(iax, e^{−aπ})) = 0",
        params: vec![param("a", &[1.0, 2.0], 0.2, 20.0)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p4_relative_spread),
                side!(zero_side),
                "(max − min)/|mean| of the bracket over x ∈ {0, 0.1, 0.2, 0.3}",
            ),
            variant(
                "negative-exponent",
                side!(p4_relative_spread_negative),
                side!(zero_side),
                "e^{−x²a/π} in the bracket",
            ),
            variant(
                "value-sqrt-a",
                side!(p4_sample_mean),
                side!(p4_sqrt_a),
                "the constant value of the bracket compared with √a",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

fn p4b_sinh_ratio_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let (a, z) = (p.get("a"), p.get("z"));
    let s = sum_series(pol, 1, |n| {
        let nf = n as f64;
        let x = 2.0 * nf * PI * z * a;
        let y = nf * PI * PI * a;
        // sinh(x)/sinh(y), decaying form
        Term::new(
            ((x - y).exp() - (-x - y).exp()) / -(-2.0 * y).exp_m1(),
            ((x.abs() - y).exp() + (-x.abs() - y).exp()) / -(-2.0 * y).exp_m1(),
        )
    })?
    .result;
    Ok(s.affine(2.0 * PI, 0.0))
}

fn p4b_theta_side(a: f64, z: f64, linear: f64, pol: &TruncationPolicy) -> Out {
    let ld = log_theta_side(LogThetaKind::Theta2, 1, z, &Nome::from_rate(1.0 / a)?, pol)?;
    Ok(ld.affine(-1.0 / a, -linear * 2.0 * z))
}

fn p4b_log_theta2_slope(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p4b_theta_side(p.get("a"), p.get("z"), 1.0, pol)
}

fn p4b_log_theta2_slope_only(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p4b_theta_side(p.get("a"), p.get("z"), 0.0, pol)
}

fn p4b() -> IdentityRecord {
    IdentityRecord {
        id: "P4b",
        anchor: "2π Σ sinh(2nπza)/sinh(nπ²a) = −2z − (1/a) ∂_z log θ2(z, e^{−1/a})",
        params: vec![
            param("a", &[1.0, 2.0], 0.05, 20.0),
            param("z", &[0.2, 0.5], -1.5, 1.5),
        ],
        constraint: Some(|p| {
            if p.get("z").abs() < PI / 2.0 {
                Ok(())
            } else {
                Err("needs |z| < π/2".into())
            }
        }),
        variants: vec![
            variant(
                "base",
                side!(p4b_sinh_ratio_series),
                side!(p4b_log_theta2_slope),
                "as stated",
            ),
            variant(
                "no-linear-term",
                side!(p4b_sinh_ratio_series),
                side!(p4b_log_theta2_slope_only),
                "without the −2z term",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P5

/// `Σ (−1)ⁿ w(n)/(e^{2nπ/b} − 1)`.
fn p5_weighted_lambert(b: f64, weight: fn(f64) -> f64, pol: &TruncationPolicy) -> Out {
    Ok(sum_series(pol, 1, |n| {
        let nf = n as f64;
        let mag = weight(nf) / (2.0 * PI * nf / b).exp_m1();
        Term::new(alternating(n) * mag, mag)
    })?
    .result)
}

fn p5_left(b: f64, weight: fn(f64) -> f64, pol: &TruncationPolicy) -> Out {
    let s8 = s8_exp_over_cube(b, pol)?;
    let w = p5_weighted_lambert(b, weight, pol)?;
    Ok(Tally::new().add(-2.0, &s8).add(1.0, &w).finish())
}

fn p5_n_squared_form(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p5_left(p.get("b"), |n| n * n, pol)
}

fn p5_n_n_plus_1_form(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p5_left(p.get("b"), |n| n * (n + 1.0), pol)
}

fn p5_closed(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let b = p.get("b");
    let (k, e) = singular_integrals(b)?;
    Ok(exact(
        0.125 - b / (4.0 * PI) + b * b / (2.0 * PI * PI) * (e * k - k * k),
    ))
}

fn p5_proof_left(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let b = p.get("b");
    let s8 = s8_exp_over_cube(b, pol)?;
    let w = p5_weighted_lambert(b, |n| n * (n + 1.0), pol)?;
    Ok(Tally::new()
        .constant(-1.0 + 2.0 * b / PI)
        .add(-8.0, &s8)
        .add(4.0, &w)
        .finish())
}

fn p5_proof_right(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let b = p.get("b");
    Ok(s4_n_over_sinh(b, pol)?.affine(-4.0 * b * b, 0.0))
}

fn p5() -> IdentityRecord {
    IdentityRecord {
        id: "P5",
        anchor: "−2 Σ e^{2nπ/b}/(1 + e^{2nπ/b})³ + Σ (−1)ⁿ n²/(e^{2nπ/b} − 1) = 1/8 − b/(4π) + b²(E(k_b)K(k_b) − K(k_b)²)/(2π²)",
        params: vec![param("b", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![
            variant("base", side!(p5_n_squared_form), side!(p5_closed), "as stated"),
            variant(
                "n-times-n-plus-1",
                side!(p5_n_n_plus_1_form),
                side!(p5_closed),
                "n(n+1) in place of n²",
            ),
            variant(
                "proof-identity",
                side!(p5_proof_left),
                side!(p5_proof_right),
                "−1 − 8Σe^{2nπ/b}/(1+e^{2nπ/b})³ + 4Σ(−1)ⁿn(n+1)/(e^{2nπ/b}−1) + 2b/π = −4b² Σ n/sinh(πnb)",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P6, P6b

fn p6_theta2_slope(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let q = Nome::from_rate(PI / (2.0 * p.get("a")))?;
    theta_u_derivative(ThetaKind::Theta2, PI / 4.0, &q, pol)
}

fn p6_scaled_theta2(a: f64, sign: f64, pol: &TruncationPolicy) -> Out {
    let q = Nome::from_rate(PI / (2.0 * a))?;
    let (k, _) = singular_integrals(a)?;
    Ok(theta2(PI / 4.0, &q, pol)?.affine(sign * 2.0 * a / PI * k, 0.0))
}

fn p6_minus_scaled_theta2(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p6_scaled_theta2(p.get("a"), -1.0, pol)
}

fn p6_plus_scaled_theta2(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p6_scaled_theta2(p.get("a"), 1.0, pol)
}

fn p6() -> IdentityRecord {
    IdentityRecord {
        id: "P6",
        anchor: "∂_z θ2(z, e^{−π/(2a)}) |_{z=π/4} = −(2a/π) θ2(π/4, e^{−π/(2a)}) K(k_a)",
        params: vec![param("a", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p6_theta2_slope),
                side!(p6_minus_scaled_theta2),
                "as stated",
            ),
            variant(
                "sign-flipped",
                side!(p6_theta2_slope),
                side!(p6_plus_scaled_theta2),
                "+(2a/π) on the right",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

fn p6b_sech_sum(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    s5_sech(p.get("a"), pol)
}

fn p6b_k_over_pi(a: f64, offset: f64) -> Out {
    let (k, _) = singular_integrals(a)?;
    Ok(exact(offset + k / PI))
}

fn p6b_half_plus_k(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p6b_k_over_pi(p.get("a"), 0.5)
}

fn p6b_k_minus_half(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p6b_k_over_pi(p.get("a"), -0.5)
}

fn p6b() -> IdentityRecord {
    IdentityRecord {
        id: "P6b",
        anchor: "Σ 1/cosh(nπa) = 1/2 + K(k_a)/π",
        params: vec![param("a", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p6b_sech_sum),
                side!(p6b_half_plus_k),
                "as stated",
            ),
            variant(
                "minus-half",
                side!(p6b_sech_sum),
                side!(p6b_k_minus_half),
                "K(k_a)/π − 1/2",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P7, P7b

fn p7_fd(x: f64, convention: Convention) -> Out {
    let est = dadk_fd(EllipticArgument::new(x, convention)?)?;
    Ok(SeriesResult {
        value: est.value,
        terms_used: 0,
        tail_bound: est.error,
    })
}

fn p7_candidate(x: f64, convention: Convention, label: &str) -> Out {
    let c = dadk_candidates(EllipticArgument::new(x, convention)?)?;
    c.into_iter()
        .find(|c| c.label == label)
        .map(|c| exact(c.value))
        .ok_or_else(|| Error::Domain(format!("no candidate {label}")))
}

fn p7_fd_parameter(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p7_fd(p.get("x"), Convention::Parameter)
}

fn p7_fd_modulus(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p7_fd(p.get("x"), Convention::Modulus)
}

fn p7_printed_parameter(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p7_candidate(p.get("x"), Convention::Parameter, "printed-parameter")
}

fn p7_printed_modulus(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p7_candidate(p.get("x"), Convention::Modulus, "printed-modulus")
}

fn p7_classical_parameter(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p7_candidate(p.get("x"), Convention::Parameter, "classical-parameter")
}

fn p7_classical_modulus(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p7_candidate(p.get("x"), Convention::Modulus, "classical-modulus")
}

fn p7() -> IdentityRecord {
    IdentityRecord {
        id: "P7",
        anchor: "K(1−k)/K(k) = a ⇒ da = K'(k)/(E(k)K(k) − K(k)²) dk, K'(k) = dK/dk = (E − (1−k)K)/(2(1−k)k)",
        params: vec![param("x", &[0.3, 0.5, FRAC_1_SQRT_2, 0.7], 0.05, 0.95)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p7_fd_parameter),
                side!(p7_printed_parameter),
                "printed formula with x = m (the K(1−k) reading); left side is a finite-difference oracle",
            ),
            variant(
                "printed-modulus",
                side!(p7_fd_modulus),
                side!(p7_printed_modulus),
                "printed formula with x = k and dK/dk",
            ),
            variant(
                "classical-modulus",
                side!(p7_fd_modulus),
                side!(p7_classical_modulus),
                "−π/(2kk'²K²)",
            ),
            variant(
                "classical-parameter",
                side!(p7_fd_parameter),
                side!(p7_classical_parameter),
                "−π/(4m(1−m)K²)",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

fn p7b_log_theta_slope(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let x = p.get("x");
    let q = Nome::from_rate(2.0 * PI * x)?;
    Ok(log_theta_side(LogThetaKind::Theta4ImagHalf, 1, PI * x, &q, pol)?.affine(2.0 * PI, 0.0))
}

fn p7b_half_pi_minus_k(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let (k, _) = singular_integrals(p.get("x"))?;
    Ok(exact(PI / 2.0 - k))
}

fn p7b_k_minus_half_pi(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let (k, _) = singular_integrals(p.get("x"))?;
    Ok(exact(k - PI / 2.0))
}

fn p7b_minus_pi_sech_sum(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    Ok(s5_sech(p.get("x"), pol)?.affine(-PI, 0.0))
}

fn p7b() -> IdentityRecord {
    IdentityRecord {
        id: "P7b",
        anchor: "2 ∂/∂t log θ4(itπ/2, e^{−2πx}) |_{t=x} = −π Σ 1/cosh(nπx) = π/2 − K(k_x)",
        params: vec![param("x", &[0.5, 1.0, 2.0], 0.05, 20.0)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p7b_log_theta_slope),
                side!(p7b_half_pi_minus_k),
                "outer equality",
            ),
            variant(
                "sech-sum",
                side!(p7b_log_theta_slope),
                side!(p7b_minus_pi_sech_sum),
                "first equality",
            ),
            variant(
                "flipped",
                side!(p7b_log_theta_slope),
                side!(p7b_k_minus_half_pi),
                "K(k_x) − π/2",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P8

fn p8_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    Ok(s9_lambert_e2(&Nome::from_pi_multiple(p.get("r"))?, pol)?.affine(24.0, 0.0))
}

/// `1 + (6E + (m − 5)K)/(π m (1 − m) K D)` at `m = k_r²` for a slope `D = dr/dm`.
fn p8_closed(r: f64, slope: fn(f64, f64, f64) -> Result<f64>) -> Out {
    let solve = solve_k(r)?;
    let (k, e) = solve.integrals()?;
    let m = solve.k.m();
    let d = slope(m, k, e)?;
    Ok(exact(
        1.0 + (6.0 * e + (m - 5.0) * k) / (PI * m * (1.0 - m) * k * d),
    ))
}

fn p8_printed_slope(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p8_closed(p.get("r"), |m, k, e| {
        let dk = (e - (1.0 - m) * k) / (2.0 * m * (1.0 - m));
        Ok(dk / (e * k - k * k))
    })
}

fn p8_classical_slope(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p8_closed(
        p.get("r"),
        |m, k, _| Ok(-PI / (4.0 * m * (1.0 - m) * k * k)),
    )
}

fn p8_fd_slope(p: &GridPoint, _: &TruncationPolicy) -> Out {
    p8_closed(p.get("r"), |m, _, _| {
        let h = FD_BASE_STEP.min(m / 4.0).min((1.0 - m) / 4.0);
        Ok(richardson_derivative(|v| a_of_k(EllipticArgument::parameter(v)?), m, h)?.value)
    })
}

fn p8() -> IdentityRecord {
    IdentityRecord {
        id: "P8",
        anchor: "{r,k} = dr/dk = K'(k)/(E(k)K(k) − K(k)²), q = e^{−πr}: 24 Σ nqⁿ/(1 − qⁿ) = 1 + (6E(k_r) + (k_r − 5)K(k_r))/(π k_r(1 − k_r) K(k_r) {r,k})",
        params: vec![param("r", &[1.0, 2.0], 0.2, 5.0)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p8_lambert),
                side!(p8_printed_slope),
                "k read as the parameter m = k_r², {r,k} from the printed derivative formula",
            ),
            variant(
                "classical-parameter",
                side!(p8_lambert),
                side!(p8_classical_slope),
                "{r,k} = −π/(4m(1−m)K²)",
            ),
            variant(
                "finite-difference",
                side!(p8_lambert),
                side!(p8_fd_slope),
                "{r,k} from a Richardson difference of K(1−m)/K(m)",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P9

fn p9_transformed_parameter(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let x = p.get("x");
    Ok(exact(ellint_K_extended(x / (x - 1.0))? / (1.0 - x).sqrt()))
}

fn p9_k_parameter(p: &GridPoint, _: &TruncationPolicy) -> Out {
    Ok(exact(ellint_K(EllipticArgument::parameter(p.get("x"))?)?))
}

fn p9_transformed_modulus(p: &GridPoint, _: &TruncationPolicy) -> Out {
    let x = p.get("x");
    let k = x / (x - 1.0);
    if k.abs() >= 1.0 {
        return Err(Error::Domain(format!("modulus x/(x−1) = {k} has |k| >= 1")));
    }
    Ok(exact(ellint_K_extended(k * k)? / (1.0 - x).sqrt()))
}

fn p9_k_modulus(p: &GridPoint, _: &TruncationPolicy) -> Out {
    Ok(exact(ellint_K(EllipticArgument::modulus(p.get("x"))?)?))
}

fn p9() -> IdentityRecord {
    IdentityRecord {
        id: "P9",
        anchor: "(1/√(1−x)) K(x/(x−1)) = K(x)",
        params: vec![param("x", &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7], 0.0, 0.95)],
        constraint: None,
        variants: vec![
            variant(
                "base",
                side!(p9_transformed_parameter),
                side!(p9_k_parameter),
                "x read as the parameter m",
            ),
            variant(
                "modulus",
                side!(p9_transformed_modulus),
                side!(p9_k_modulus),
                "x read as the modulus k",
            ),
        ],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

// ---------------------------------------------------------------- P10, P10a

fn even_power(p: &GridPoint, lo: usize) -> std::result::Result<(), String> {
    let n = integer_param(p, "power", lo, 8)?;
    if n % 2 == 0 {
        Ok(())
    } else {
        Err("power must be even".into())
    }
}

/// `2 Σ (−1)ⁿ F(n)/(n(e^{an} − 1))`.
fn p10_lambert(f: &PolynomialSpec, a: f64, pol: &TruncationPolicy) -> Out {
    Ok(sum_series(pol, 1, |n| {
        let nf = n as f64;
        let mag = 2.0 * f.eval(nf).abs() / (nf * (a * nf).exp_m1());
        Term::new(
            alternating(n) * 2.0 * f.eval(nf) / (nf * (a * nf).exp_m1()),
            mag,
        )
    })?
    .result)
}

/// `Σ F(ibn)/(n sinh(bnπ))`, `b = 2π/a`.
fn p10_imaginary_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let f = monomial(p)?;
    let b = 2.0 * PI / p.get("a");
    if !f.is_even() {
        return Err(Error::PolynomialShape("F must be even".into()));
    }
    Ok(sum_series(pol, 1, |n| {
        let nf = n as f64;
        let v = f.eval_imaginary(b * nf).unwrap_or(f64::NAN) * exp_over_sinh(0.0, b * nf * PI) / nf;
        Term::plain(v)
    })?
    .result)
}

fn p10_with_integral(
    p: &GridPoint,
    pol: &TruncationPolicy,
    integral: fn(&PolynomialSpec) -> Result<f64>,
) -> Out {
    let f = monomial(p)?;
    let i = integral(&f)?;
    Ok(p10_lambert(&f, p.get("a"), pol)?.affine(1.0, i))
}

fn p10_integral_plus_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p10_with_integral(p, pol, zeta_integral_term)
}

fn p10_quadrature_plus_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    p10_with_integral(p, pol, zeta_integral_term_quadrature)
}

fn p10() -> IdentityRecord {
    IdentityRecord {
        id: "P10",
        anchor: "2∫₁²((1/t) Σ G(t/(2πin))) dt + 2 Σ (−1)ⁿF(n)/(n(e^{an} − 1)) − Σ F(ibn)/(n sinh(bnπ)) = 0, ab = 2π, F even, F(0) = F'(0) = F''(0) = 0",
        params: vec![
            param("a", &[2.0 * PI, PI], 0.5, 50.0),
            param("power", &[4.0, 6.0], 4.0, 8.0),
        ],
        constraint: Some(|p| even_power(p, 4)),
        variants: vec![
            variant(
                "base",
                side!(p10_integral_plus_lambert),
                side!(p10_imaginary_series),
                "F(x) = x^power; integral integrated termwise",
            ),
            variant(
                "quadrature",
                side!(p10_quadrature_plus_lambert),
                side!(p10_imaginary_series),
                "integral by quadrature of the inner sum",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

fn p10a_zeta_plus_lambert(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let f = monomial(p)?;
    let mut zeta_part = 0.0;
    for nu in 1..=f.degree() / 2 {
        let c = f.coefficient(2 * nu);
        if c != 0.0 {
            zeta_part += c * (2f64.powi(2 * nu as i32) - 1.0) * zeta_neg(nu)?;
        }
    }
    Ok(p10_lambert(&f, p.get("a"), pol)?.affine(1.0, zeta_part))
}

fn p10a() -> IdentityRecord {
    IdentityRecord {
        id: "P10a",
        anchor: "Σ (f_e^{(2ν)}(0)/(2ν)!)(2^{2ν} − 1) ζ(1 − 2ν) + 2 Σ (−1)ⁿ f_e(n)/(n(e^{an} − 1)) − Σ f_e(ibn)/(n sinh(bnπ)) = 0, ab = 2π",
        params: vec![
            param("a", &[2.0 * PI, PI], 0.5, 50.0),
            param("power", &[2.0, 4.0], 2.0, 8.0),
        ],
        constraint: Some(|p| even_power(p, 2)),
        variants: vec![variant(
            "base",
            side!(p10a_zeta_plus_lambert),
            side!(p10_imaginary_series),
            "f_e(x) = x^power",
        )],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P11a, P11b

fn p11a_log_theta_derivatives(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    theta4_weighted_log_series(
        &monomial(p)?,
        p.get("a"),
        p.get("s"),
        Theta4LogForm::Derivative,
        pol,
    )
}

/// `f(c) log P0 − Σ_{n≠0} g(n) e^{−ns}/(2n sinh(πan))`, with `n` and `−n` paired.
fn p11_right(f_const: f64, a: f64, s: f64, g: impl Fn(f64) -> f64, pol: &TruncationPolicy) -> Out {
    let q = Nome::from_pi_multiple(a)?;
    let lp = log_q_product_p0(&q, pol)?;
    let series = sum_series(pol, 1, |n| {
        let nf = n as f64;
        let y = PI * a * nf;
        let v =
            (g(nf) * exp_over_sinh(-nf * s, y) + g(-nf) * exp_over_sinh(nf * s, y)) / (2.0 * nf);
        Term::plain(v)
    })?
    .result;
    Ok(Tally::new().add(f_const, &lp).add(-1.0, &series).finish())
}

fn p11a_product_and_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let f = monomial(p)?;
    p11_right(f.eval(0.0), p.get("a"), p.get("s"), |x| f.eval(x), pol)
}

fn p11a() -> IdentityRecord {
    IdentityRecord {
        id: "P11a",
        anchor: "Σ (−1)ⁿ fₙ ∂ⁿ/∂sⁿ log θ4(is/2, e^{−πa}) = f(0) log Π(1 − e^{−2nπa}) − Σ_{n≠0} f(n)e^{−ns}/(2n sinh(πan))",
        params: vec![
            param("power", &[2.0, 3.0, 4.0], 0.0, 8.0),
            param("a", &[1.0, 2.0], 0.2, 20.0),
            param("s", &[0.0, 0.2], -10.0, 10.0),
        ],
        constraint: Some(|p| {
            integer_param(p, "power", 0, 8)?;
            if p.get("s").abs() < PI * p.get("a") {
                Ok(())
            } else {
                Err("needs |s| < πa".into())
            }
        }),
        variants: vec![variant(
            "base",
            side!(p11a_log_theta_derivatives),
            side!(p11a_product_and_series),
            "f(x) = x^power",
        )],
        expected: Expectation::ExpectPass,
        note: None,
    }
}

fn p11b_shifted_log_thetas(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    theta4_weighted_log_series(
        &monomial(p)?,
        p.get("a"),
        p.get("s"),
        Theta4LogForm::Shifted,
        pol,
    )
}

fn p11b_product_and_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let f = monomial(p)?;
    p11_right(
        f.eval(1.0),
        p.get("a"),
        p.get("s"),
        |x| f.eval((-x).exp()),
        pol,
    )
}

fn p11b() -> IdentityRecord {
    IdentityRecord {
        id: "P11b",
        anchor: "Σ fₙ log θ4(i(s+n)/2, e^{−πa}) = f(1) log Π(1 − e^{−2nπa}) − Σ_{n≠0} f(e^{−n})e^{−ns}/(2n sinh(πan))",
        params: vec![
            param("power", &[1.0, 2.0], 0.0, 8.0),
            param("a", &[1.0, 2.0], 0.2, 20.0),
            param("s", &[0.0, 0.5], -10.0, 10.0),
        ],
        constraint: Some(|p| {
            let d = integer_param(p, "power", 0, 8)?;
            if p.get("s").abs() + (d as f64) < PI * p.get("a") {
                Ok(())
            } else {
                Err("needs |s| + degree < πa".into())
            }
        }),
        variants: vec![variant(
            "base",
            side!(p11b_shifted_log_thetas),
            side!(p11b_product_and_series),
            "f(x) = x^power",
        )],
        expected: Expectation::Contested,
        note: None,
    }
}

// ---------------------------------------------------------------- P12

fn p12_log_theta2_derivatives(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    theta2_weighted_log_series(&monomial(p)?, p.get("a"), p.get("s"), pol)
}

fn p12_printed_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let f = monomial(p)?;
    let (a, s) = (p.get("a"), p.get("s"));
    let series = sum_series(pol, 1, |n| {
        let nf = n as f64;
        let c = 2.0 * PI * nf * a;
        let y = PI * PI * a * nf;
        Term::plain(f.eval(c) * exp_over_sinh(-c * s, y) - f.eval(-c) * exp_over_sinh(c * s, y))
    })?
    .result;
    Ok(series.affine(a * PI, 2.0 * a - 2.0 * a * f.eval(0.0) * s))
}

fn p12_derived_series(p: &GridPoint, pol: &TruncationPolicy) -> Out {
    let f = monomial(p)?;
    let (a, s) = (p.get("a"), p.get("s"));
    let lp = log_q_product_p0(&Nome::from_rate(PI * PI * a)?, pol)?;
    let series = sum_series(pol, 1, |n| {
        let nf = n as f64;
        let c = 2.0 * PI * nf * a;
        let y = PI * PI * a * nf;
        Term::plain(
            (f.eval(c) * exp_over_sinh(-c * s, y) + f.eval(-c) * exp_over_sinh(c * s, y))
                / (2.0 * nf),
        )
    })?
    .result;
    let (f0, f1, f2) = (f.coefficient(0), f.coefficient(1), f.coefficient(2));
    Ok(Tally::new()
        .add(f0, &lp)
        .constant(f0 * (0.5 * (PI * a).ln() - a * s * s) + 2.0 * a * f1 * s - 2.0 * a * f2)
        .add(-1.0, &series)
        .finish())
}

fn p12() -> IdentityRecord {
    IdentityRecord {
        id: "P12",
        anchor: "Σ (−1)ⁿ fₙ ∂ⁿ/∂sⁿ log θ2(s, e^{−1/a}) = 2a − 2af(0)s + aπ Σ_{n≠0} f(2πna)e^{−2πnsa}/sinh(π²an)",
        params: vec![
            param("power", &[1.0, 2.0, 3.0], 1.0, 8.0),
            param("a", &[1.0, 2.0], 0.2, 20.0),
            param("s", &[0.3, 0.6], -1.5, 1.5),
        ],
        constraint: Some(|p| {
            integer_param(p, "power", 1, 8)?;
            let s = p.get("s").abs();
            if s > 0.0 && s < PI / 2.0 {
                Ok(())
            } else {
                Err("needs 0 < |s| < π/2".into())
            }
        }),
        variants: vec![
            variant(
                "base",
                side!(p12_log_theta2_derivatives),
                side!(p12_printed_series),
                "f(x) = x^power",
            ),
            variant(
                "derived",
                side!(p12_log_theta2_derivatives),
                side!(p12_derived_series),
                "termwise differentiation of log θ2(s, e^{−1/a}) = ½log(πa) − as² + log Π(1 − e^{−2π²an}) − Σ cosh(2πasn)/(n sinh(π²an))",
            ),
        ],
        expected: Expectation::Contested,
        note: None,
    }
}

pub(super) fn all() -> Vec<IdentityRecord> {
    vec![
        p1(),
        p2(),
        p2b(),
        p3(),
        e4(),
        e5(),
        e5b(),
        e5c(),
        e7(),
        e7b(),
        e8(),
        p4(),
        p4b(),
        p5(),
        p6(),
        p6b(),
        p7(),
        p7b(),
        p8(),
        p9(),
        p10(),
        p10a(),
        p11a(),
        p11b(),
        p12(),
    ]
}
