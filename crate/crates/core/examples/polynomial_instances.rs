//! Polynomial test functions for the zeta-sum and log-theta-derivative identities.

use ellid::registry::{
    theta2_weighted_log, theta4_weighted_log, zeta_inner_sum, zeta_integral_term,
    zeta_integral_term_quadrature, PolynomialSpec, Theta4LogForm,
};
use ellid::summation::TruncationPolicy;

fn main() -> ellid::Result<()> {
    let policy = TruncationPolicy::default();

    let x4 = PolynomialSpec::monomial(4)?;
    let x6 = PolynomialSpec::monomial(6)?;
    println!(
        "Σ G(t/2πin) for F = x⁴ at t = 1.5: {:.15}  (t⁴/60 = {:.15})",
        zeta_inner_sum(&x4, 1.5)?,
        1.5f64.powi(4) / 60.0
    );
    for (name, f) in [("x⁴", &x4), ("x⁶", &x6)] {
        println!(
            "integral term for {name}: termwise {:.15}  quadrature {:.15}",
            zeta_integral_term(f)?,
            zeta_integral_term_quadrature(f)?
        );
    }
    if let Err(e) = zeta_inner_sum(&PolynomialSpec::monomial(2)?, 1.0) {
        println!("x² is rejected: {e}");
    }

    let f = PolynomialSpec::new(vec![0.0, 1.0, -0.5, 0.25])?;
    println!(
        "\nf(x) = x - x²/2 + x³/4; even part at 2: {}, odd part at 2: {}",
        f.even_part().eval(2.0),
        f.odd_part().eval(2.0)
    );
    for s in [0.0, 0.2] {
        println!(
            "  a = 2, s = {s}: derivative form {:+.15}  shifted form {:+.15}",
            theta4_weighted_log(&f, 2.0, s, Theta4LogForm::Derivative, &policy)?,
            theta4_weighted_log(&f, 2.0, s, Theta4LogForm::Shifted, &policy)?
        );
    }
    // The shifted arguments must stay below the first zero of θ4(it), at t = πa/2.
    if let Err(e) = theta4_weighted_log(&f, 1.0, 0.2, Theta4LogForm::Shifted, &policy) {
        println!("  a = 1, s = 0.2: {e}");
    }
    println!(
        "  θ2 form, a = 1, s = 0.3: {:+.15}",
        theta2_weighted_log(&f, 1.0, 0.3, &policy)?
    );

    // θ2(s, ·) vanishes at s = π/2: the log-derivative has a pole there.
    if let Err(e) = theta2_weighted_log(
        &PolynomialSpec::monomial(1)?,
        1.0,
        std::f64::consts::FRAC_PI_2,
        &policy,
    ) {
        println!("  at s = π/2: {e}");
    }
    Ok(())
}
