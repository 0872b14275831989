//! Jacobi theta functions, their log-derivatives and the q-products.

use std::f64::consts::PI;

use ellid::elliptic::{ellint_K, EllipticArgument, Nome};
use ellid::summation::TruncationPolicy;
use ellid::theta::{
    euler_product, log_theta_derivatives, q_product_p0, theta2, theta3, theta4, theta4_imag,
    LogThetaKind,
};

fn main() -> ellid::Result<()> {
    let policy = TruncationPolicy::default();
    let q = Nome::new(0.1)?;

    for z in [0.0, 0.5, PI / 2.0] {
        let (t2, t3, t4) = (
            theta2(z, &q, &policy)?,
            theta3(z, &q, &policy)?,
            theta4(z, &q, &policy)?,
        );
        println!(
            "z = {z:.4}: θ2 = {:.15}  θ3 = {:.15}  θ4 = {:.15}  ({} terms)",
            t2.value, t3.value, t4.value, t4.terms_used
        );
    }

    // The imaginary-argument series grows with t but still converges.
    let qa = Nome::from_pi_multiple(1.0)?;
    for t in [0.0, 0.5, 1.0, 1.5] {
        let r = theta4_imag(t, &qa, &policy)?;
        println!(
            "θ4(i·{t}, e^-π) = {:.15}  tail ≤ {:.1e}",
            r.value, r.tail_bound
        );
    }

    // θ3(0, q)² = 2K/π at the nome of the modulus 1/√2.
    let k = ellint_K(EllipticArgument::parameter(0.5)?)?;
    let t3 = theta3(0.0, &Nome::from_pi_multiple(1.0)?, &policy)?.value;
    println!(
        "\nθ3(0, e^-π)² = {:.15}   2K/π = {:.15}",
        t3 * t3,
        2.0 * k / PI
    );

    let d = log_theta_derivatives(LogThetaKind::Theta4ImagHalf, 4, 0.3, &qa, &policy)?;
    println!("\nd^j/ds^j log θ4(is/2, e^-π) at s = 0.3:");
    for (j, v) in d.iter().enumerate() {
        println!("  j = {j}: {v:+.15e}");
    }

    println!(
        "\nΠ(1 - qⁿ) at q = 0.5: {:.15}",
        euler_product(&Nome::new(0.5)?, &policy)?.value
    );
    println!(
        "Π(1 - q²ⁿ) at q = 0.5: {:.15}",
        q_product_p0(&Nome::new(0.5)?, &policy)?.value
    );
    Ok(())
}
