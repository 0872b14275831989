//! Auditing a single identity: one point, then its whole grid.

use ellid::registry::{evaluate_identity, run_grid, GridOverrides, GridPoint, Registry};
use ellid::summation::TruncationPolicy;

fn main() -> ellid::Result<()> {
    let registry = Registry::standard();
    let policy = TruncationPolicy::default();

    let record = registry.get("E4")?;
    println!("{}: {}", record.id, record.anchor);
    let r = evaluate_identity(
        &registry,
        "E4",
        "base",
        &GridPoint::new(vec![("a", 1.0)]),
        &policy,
    )?;
    println!(
        "  a = 1: lhs {:+.15e} rhs {:+.15e} rel {:.1e} {}",
        r.lhs.unwrap_or(f64::NAN),
        r.rhs.unwrap_or(f64::NAN),
        r.rel_residual.unwrap_or(f64::NAN),
        r.classification.as_str()
    );

    // Points outside the declared domain are refused, not evaluated.
    let bad = GridPoint::new(vec![("a", 1.0), ("t", 2.0)]);
    if let Err(e) = evaluate_identity(&registry, "P1", "base", &bad, &policy) {
        println!("  P1 at t = 2: {e}");
    }

    // The printed sech-sum constant against its sign variant.
    let record = registry.get("P6b")?;
    println!("\n{}: {}", record.id, record.anchor);
    for v in &record.variants {
        println!("  variant {:<12} {}", v.id, v.note);
    }
    for r in run_grid(&registry, "P6b", &policy, &GridOverrides::new())? {
        println!(
            "  {:<12} a = {:<4} |lhs - rhs| = {:.3e}  {}",
            r.variant,
            r.params[0].1,
            r.abs_residual.unwrap_or(f64::NAN),
            r.classification.as_str()
        );
    }

    // Grids can be replaced per parameter.
    let mut overrides = GridOverrides::new();
    overrides.insert("a".into(), vec![0.25, 4.0]);
    println!();
    for r in run_grid(&registry, "E4", &policy, &overrides)? {
        println!(
            "  E4 a = {:<5} rel {:.1e} {}",
            r.params[0].1,
            r.rel_residual.unwrap_or(f64::NAN),
            r.classification.as_str()
        );
    }
    Ok(())
}
