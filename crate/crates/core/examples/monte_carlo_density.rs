//! Monte-Carlo estimate of the density of models smooth over all F_2-points of P^2.
//!
//! Pass a sample count as the first argument (default 500).

use elldensity::density::{mc_density, McConfig};

fn main() -> elldensity::Result<()> {
    let samples = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let cfg = McConfig {
        samples,
        ..McConfig::default()
    };
    let rep = mc_density(&cfg)?;
    println!(
        "exact   {} = {}",
        rep.exact_density, rep.exact_density_decimal
    );
    println!(
        "sampled {:.5} +- {:.5} ({} of {samples}, {} with zero discriminant)",
        rep.estimate, rep.standard_error, rep.smooth, rep.delta_zero
    );
    println!("within 3 SE: {}", rep.within_standard_errors(3.0));
    Ok(())
}
