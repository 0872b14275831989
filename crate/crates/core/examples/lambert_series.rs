//! The hyperbolic and Lambert-type series, with their truncation metadata.

use std::f64::consts::PI;

use ellid::elliptic::Nome;
use ellid::series::{
    s10_alt_sin_lambert, s1_cosh_over_sinh, s3_alt_n_over_expm1, s4_n_over_sinh, s5_sech,
    s5sq_sech2, s6_alt_sin_over_expm1, s6_closed, s7_csch_sinh, s8_exp_over_cube, s9_lambert_e2,
    zeta_even, CoshScaling,
};
use ellid::summation::{SeriesResult, TruncationPolicy};

fn show(name: &str, r: ellid::Result<SeriesResult>) {
    match r {
        Ok(r) => println!(
            "{name:<34} {:+.15e}  {:>4} terms  tail ≤ {:.1e}",
            r.value, r.terms_used, r.tail_bound
        ),
        Err(e) => println!("{name:<34} {e}"),
    }
}

fn main() -> ellid::Result<()> {
    let p = TruncationPolicy::default();
    show(
        "S1  Σcosh(2tn)/(n sinh πan) a=1 t=.3",
        s1_cosh_over_sinh(1.0, 0.3, CoshScaling::Double, &p),
    );
    show(
        "S1  at 2|t| = πa",
        s1_cosh_over_sinh(1.0, PI / 2.0, CoshScaling::Double, &p),
    );
    show("S3  Σ(-1)ⁿn/(e^{2πn}-1)", s3_alt_n_over_expm1(2.0 * PI, &p));
    show("S4  Σ n/sinh(πn)", s4_n_over_sinh(1.0, &p));
    show("S5  Σ sech(nπ)", s5_sech(1.0, &p));
    show("S5² Σ sech²(πn)", s5sq_sech2(1.0, &p));
    show("S6  a=1 v=.5", s6_alt_sin_over_expm1(1.0, 0.5, &p));
    show("S6  closed form a=1 v=.5", s6_closed(1.0, 0.5, &p));
    show("S7  a=2 v=1", s7_csch_sinh(2.0, 1.0, &p));
    show("S8  b=1", s8_exp_over_cube(1.0, &p));
    show(
        "S9  Σ nqⁿ/(1-qⁿ) q=e^-π",
        s9_lambert_e2(&Nome::from_pi_multiple(1.0)?, &p),
    );
    show(
        "S10 z=.3 q=.2",
        s10_alt_sin_lambert(0.3, &Nome::new(0.2)?, &p),
    );

    // A slowly converging case: the term cap is reported, not hidden.
    show("S5  a=0.001 cap=100", s5_sech(0.001, &p.with_cap(100)));

    // Loosening the tolerance trims the tail but the value moves by less than it.
    let tight = s4_n_over_sinh(0.3, &p)?;
    let loose = s4_n_over_sinh(0.3, &p.with_tolerance(1e-8))?;
    println!(
        "\nS4(0.3): {} terms vs {} terms, difference {:.1e}, loose tail bound {:.1e}",
        tight.terms_used,
        loose.terms_used,
        (tight.value - loose.value).abs(),
        loose.tail_bound
    );
    println!(
        "ζ(4) = {:.15}  π⁴/90 = {:.15}",
        zeta_even(2)?,
        PI.powi(4) / 90.0
    );
    Ok(())
}
