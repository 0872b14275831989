//! Runs every registered identity on its default grid.
//!
//! `cargo run --example full_audit -- json` prints the JSON report instead.

use ellid::cli::{render, Format};
use ellid::registry::{run_all, Registry, RunOptions};
use ellid::summation::TruncationPolicy;

fn main() -> ellid::Result<()> {
    let format = match std::env::args().nth(1) {
        Some(f) => f.parse()?,
        None => Format::Pretty,
    };
    let registry = Registry::standard();
    let reports = run_all(
        &registry,
        &TruncationPolicy::default(),
        &RunOptions::default(),
    )?;
    print!("{}", render(&registry, &reports, format)?);
    if format == Format::Pretty {
        println!(
            "\n{} reports over {} identities",
            reports.len(),
            registry.len()
        );
    }
    Ok(())
}
