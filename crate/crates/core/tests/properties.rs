use std::f64::consts::PI;

use ellid::elliptic::{agm, dK, ellint_E, ellint_K, legendre_defect, EllipticArgument, Nome};
use ellid::registry::{report, zeta_inner_sum, Classification, PolynomialSpec};
use ellid::series::{
    s10_alt_sin_lambert, s1_cosh_over_sinh, s6_alt_sin_over_expm1, s7_csch_sinh, CoshScaling,
};
use ellid::singular::{a_of_k, solve_k};
use ellid::summation::TruncationPolicy;
use ellid::theta::{
    log_theta_derivatives, theta2, theta3, theta4, theta4_imag, theta_u_derivative, LogThetaKind,
    ThetaKind,
};
use ellid::Error;
use proptest::prelude::*;

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * 1f64.max(a.abs()).max(b.abs())
}

fn rank(c: Classification) -> u8 {
    match c {
        Classification::Pass => 0,
        Classification::Inconclusive => 1,
        Classification::Fail => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convention_round_trip(k in 0.01f64..0.99) {
        let arg = EllipticArgument::modulus(k).unwrap();
        let back = arg.to_parameter().to_modulus();
        prop_assert!(close(back.value(), k, 4.0 * f64::EPSILON));
        let by_m = EllipticArgument::parameter(k * k).unwrap();
        prop_assert!(close(ellint_K(arg).unwrap(), ellint_K(by_m).unwrap(), 1e-14));
        prop_assert!(close(ellint_E(arg).unwrap(), ellint_E(by_m).unwrap(), 1e-14));
    }

    #[test]
    fn agm_symmetric_and_homogeneous(x in 0.01f64..10.0, y in 0.01f64..10.0, lambda in 0.1f64..10.0) {
        let g = agm(x, y).unwrap();
        prop_assert!(close(g, agm(y, x).unwrap(), 1e-15));
        prop_assert!(close(agm(lambda * x, lambda * y).unwrap(), lambda * g, 1e-14));
        prop_assert!(g >= x.min(y) && g <= x.max(y));
    }

    #[test]
    fn k_increases_and_e_decreases(m1 in 0.0f64..0.98, gap in 1e-4f64..0.01) {
        let m2 = m1 + gap;
        let a = EllipticArgument::parameter(m1).unwrap();
        let b = EllipticArgument::parameter(m2).unwrap();
        prop_assert!(ellint_K(a).unwrap() < ellint_K(b).unwrap());
        prop_assert!(ellint_E(a).unwrap() > ellint_E(b).unwrap());
    }

    #[test]
    fn legendre_relation_holds(m in 0.01f64..0.99) {
        let d = legendre_defect(EllipticArgument::parameter(m).unwrap()).unwrap();
        prop_assert!(d.abs() <= 1e-12, "defect {d:e} at m = {m}");
    }

    #[test]
    fn dk_matches_finite_difference(m in 0.05f64..0.95) {
        let h = 1e-5;
        let k = |m: f64| ellint_K(EllipticArgument::parameter(m).unwrap()).unwrap();
        let fd = (k(m + h) - k(m - h)) / (2.0 * h);
        let exact = dK(EllipticArgument::parameter(m).unwrap()).unwrap();
        prop_assert!(close(exact, fd, 1e-7), "dK {exact} vs fd {fd}");
    }

    #[test]
    fn theta_u_derivative_matches_finite_difference(z in -1.5f64..1.5, q in 0.05f64..0.6) {
        let nome = Nome::new(q).unwrap();
        let h = 1e-5;
        let p = policy();
        let fd2 = (theta2(z + h, &nome, &p).unwrap().value - theta2(z - h, &nome, &p).unwrap().value) / (2.0 * h);
        let fd4 = (theta4(z + h, &nome, &p).unwrap().value - theta4(z - h, &nome, &p).unwrap().value) / (2.0 * h);
        let d2 = theta_u_derivative(ThetaKind::Theta2, z, &nome, &p).unwrap().value;
        let d4 = theta_u_derivative(ThetaKind::Theta4, z, &nome, &p).unwrap().value;
        prop_assert!((d2 - fd2).abs() < 1e-8, "θ2' {d2} vs {fd2}");
        prop_assert!((d4 - fd4).abs() < 1e-8, "θ4' {d4} vs {fd4}");
    }

    #[test]
    fn log_derivatives_consistent_across_orders(s in 0.1f64..1.2, a in 1.0f64..3.0, order in 1usize..=8) {
        let nome = Nome::from_pi_multiple(a).unwrap();
        let p = policy();
        for kind in [LogThetaKind::Theta2, LogThetaKind::Theta4ImagHalf] {
            let high = log_theta_derivatives(kind, order, s, &nome, &p).unwrap();
            for j in 0..=order {
                let low = log_theta_derivatives(kind, j, s, &nome, &p).unwrap();
                prop_assert!(close(low[j], high[j], 1e-13));
            }
        }
        // first derivative of log θ4(is/2) against a central difference
        let f = |s: f64| theta4_imag(s / 2.0, &nome, &p).unwrap().value.ln();
        let h = 1e-5;
        let fd = (f(s + h) - f(s - h)) / (2.0 * h);
        let g = log_theta_derivatives(LogThetaKind::Theta4ImagHalf, 1, s, &nome, &p).unwrap();
        prop_assert!(close(g[0], f(s), 1e-14));
        prop_assert!((g[1] - fd).abs() < 1e-8);
    }

    #[test]
    fn theta3_squared_is_two_k_over_pi(k in 0.1f64..0.9) {
        let arg = EllipticArgument::modulus(k).unwrap();
        let nome = Nome::from_pi_multiple(a_of_k(arg).unwrap()).unwrap();
        let t3 = theta3(0.0, &nome, &policy()).unwrap().value;
        prop_assert!(close(t3 * t3, 2.0 * ellint_K(arg).unwrap() / PI, 1e-13));
    }

    #[test]
    fn loose_tolerance_stays_within_its_budget(a in 0.5f64..3.0, frac in -0.9f64..0.9) {
        let t = frac * PI * a / 2.0;
        let tight = s1_cosh_over_sinh(a, t, CoshScaling::Double, &policy()).unwrap().value;
        let loose = s1_cosh_over_sinh(a, t, CoshScaling::Double, &policy().with_tolerance(1e-10)).unwrap().value;
        prop_assert!((tight - loose).abs() <= 1.1e-10);
    }

    #[test]
    fn series_parity(a in 0.5f64..3.0, frac in 0.0f64..0.9, q in 0.05f64..0.5) {
        let p = policy();
        let t = frac * PI * a / 2.0;
        let even = |t| s1_cosh_over_sinh(a, t, CoshScaling::Double, &p).unwrap().value;
        prop_assert_eq!(even(t), even(-t));
        let v = frac * PI;
        let s6 = |v| s6_alt_sin_over_expm1(a, v, &p).unwrap().value;
        prop_assert!(close(s6(v), -s6(-v), 1e-15));
        let s7 = |v| s7_csch_sinh(a, v, &p).unwrap().value;
        prop_assert!(close(s7(v), -s7(-v), 1e-15));
        let nome = Nome::new(q).unwrap();
        let s10 = |z| s10_alt_sin_lambert(z, &nome, &p).unwrap().value;
        prop_assert!(close(s10(v), -s10(-v), 1e-15));
    }

    #[test]
    fn divergent_arguments_are_rejected(a in 0.5f64..3.0, over in 1.0f64..2.0) {
        let t = over * PI * a / 2.0;
        let is_domain = |r: Result<_, Error>| matches!(r, Err(Error::Domain(_)));
        prop_assert!(is_domain(s1_cosh_over_sinh(a, t, CoshScaling::Double, &policy())));
        prop_assert!(is_domain(s7_csch_sinh(a, over * PI, &policy())));
        prop_assert!(is_domain(s7_csch_sinh(a, -over * PI, &policy())));
    }

    #[test]
    fn solve_k_round_trips(a in 0.2f64..5.0) {
        let s = solve_k(a).unwrap();
        prop_assert!(s.residual <= 1e-12 * a);
        prop_assert!(close(a_of_k(s.k).unwrap(), a, 1e-9));
        let k = s.k.value();
        prop_assert!(close(s.complement, ((1.0 - k) * (1.0 + k)).sqrt(), 1e-8));
    }

    #[test]
    fn complementary_moduli(a in 0.05f64..20.0) {
        let k = solve_k(a).unwrap().k.value();
        let kc = solve_k(1.0 / a).unwrap().k.value();
        prop_assert!((k * k + kc * kc - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn period_ratio_decreases(k in 0.05f64..0.94, gap in 1e-3f64..0.05) {
        let a = |k| a_of_k(EllipticArgument::modulus(k).unwrap()).unwrap();
        prop_assert!(a(k) > a(k + gap));
    }

    #[test]
    fn classification_is_pure_and_monotone(r1 in 0.0f64..1e-3, r2 in 0.0f64..1e-3) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        prop_assert_eq!(Classification::from_relative(lo), Classification::from_relative(lo));
        prop_assert!(rank(Classification::from_relative(lo)) <= rank(Classification::from_relative(hi)));
    }

    #[test]
    fn formatted_numbers_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let text = report::format_number(x);
        prop_assert_eq!(text.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn polynomial_even_odd_split(coeffs in proptest::collection::vec(-3.0f64..3.0, 1..=9), x in -2.0f64..2.0) {
        let f = PolynomialSpec::new(coeffs).unwrap();
        let (e, o) = (f.even_part(), f.odd_part());
        prop_assert!(e.is_even());
        prop_assert!(close(e.eval(x) + o.eval(x), f.eval(x), 1e-12));
        prop_assert_eq!(e.eval(-x), e.eval(x));
        prop_assert_eq!(o.eval(-x), -o.eval(x));
    }

    #[test]
    fn zeta_inner_sum_is_linear(c4 in -2.0f64..2.0, c6 in -2.0f64..2.0, c8 in -2.0f64..2.0, t in 0.0f64..1.5) {
        let f = PolynomialSpec::new(vec![0.0, 0.0, 0.0, 0.0, c4, 0.0, c6, 0.0, c8]).unwrap();
        let parts: f64 = [(4, c4), (6, c6), (8, c8)]
            .iter()
            .map(|&(p, c)| c * zeta_inner_sum(&PolynomialSpec::monomial(p).unwrap(), t).unwrap())
            .sum();
        prop_assert!((zeta_inner_sum(&f, t).unwrap() - parts).abs() <= 1e-12);
    }
}

#[test]
fn classification_bands() {
    assert_eq!(Classification::from_relative(0.0), Classification::Pass);
    assert_eq!(Classification::from_relative(1e-9), Classification::Pass);
    assert_eq!(
        Classification::from_relative(2e-9),
        Classification::Inconclusive
    );
    assert_eq!(
        Classification::from_relative(1e-6),
        Classification::Inconclusive
    );
    assert_eq!(Classification::from_relative(2e-6), Classification::Fail);
    assert_eq!(
        Classification::from_relative(f64::NAN),
        Classification::Inconclusive
    );
    assert_eq!(
        Classification::from_relative(f64::INFINITY),
        Classification::Inconclusive
    );
}
