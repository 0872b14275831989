//! Complete elliptic integrals in both argument conventions.

use std::f64::consts::FRAC_1_SQRT_2;

use ellid::elliptic::{agm, dK, ellint_E, ellint_K, legendre_defect, EllipticArgument};

fn main() -> ellid::Result<()> {
    println!("agm(1, √2) = {:.15}", agm(1.0, 2f64.sqrt())?);

    // The same point, once as a modulus and once as a parameter.
    let k = EllipticArgument::modulus(FRAC_1_SQRT_2)?;
    let m = EllipticArgument::parameter(0.5)?;
    println!(
        "K(k=1/√2) = {:.15}   K(m=1/2) = {:.15}",
        ellint_K(k)?,
        ellint_K(m)?
    );
    println!(
        "E(k=1/√2) = {:.15}   E(m=1/2) = {:.15}",
        ellint_E(k)?,
        ellint_E(m)?
    );

    // Derivatives differ: each is taken in its own variable.
    println!("dK/dk = {:.12}   dK/dm = {:.12}", dK(k)?, dK(m)?);

    println!("\n   k        K(k)               E(k)               Legendre defect");
    for i in 1..=9 {
        let arg = EllipticArgument::modulus(i as f64 / 10.0)?;
        println!(
            "  {:.1}  {:.15}  {:.15}  {:.1e}",
            arg.value(),
            ellint_K(arg)?,
            ellint_E(arg)?,
            legendre_defect(arg)?
        );
    }

    match ellint_K(EllipticArgument::modulus(1.0)?) {
        Ok(v) => println!("K(1) = {v}"),
        Err(e) => println!("\nK(1): {e}"),
    }
    Ok(())
}
