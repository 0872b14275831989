//! Singular moduli and the derivative of the period ratio.

use ellid::elliptic::{Convention, EllipticArgument};
use ellid::singular::{a_of_k, adjudicate_dadk, solve_k};

fn main() -> ellid::Result<()> {
    println!("   a        k_a                  k_a'                 residual");
    for a in [0.05, 0.5, 1.0, 2.0, 3.0, 20.0] {
        let s = solve_k(a)?;
        println!(
            "  {a:<6} {:.17}  {:.17}  {:.1e}",
            s.k.value(),
            s.complement,
            s.residual
        );
    }
    // k_2 is the classical singular value (√2 - 1)².
    println!("\n(√2 - 1)² = {:.17}", (2f64.sqrt() - 1.0).powi(2));
    println!(
        "a_of_k(k=0.3) = {:.15}",
        a_of_k(EllipticArgument::modulus(0.3)?)?
    );

    // Compare the analytic candidates for da/dk with a finite-difference oracle.
    for (x, conv) in [
        (0.5, Convention::Parameter),
        (std::f64::consts::FRAC_1_SQRT_2, Convention::Modulus),
    ] {
        let arg = EllipticArgument::new(x, conv)?;
        println!(
            "\nda/d{} at {x:.6}:",
            if conv == Convention::Modulus {
                "k"
            } else {
                "m"
            }
        );
        for v in adjudicate_dadk(arg)? {
            println!(
                "  {:<20} {:+.12}  oracle {:+.12}  deviation {:.2e}  {}",
                v.label,
                v.value,
                v.oracle,
                v.relative_deviation,
                if v.matches { "match" } else { "differs" }
            );
        }
    }
    Ok(())
}
