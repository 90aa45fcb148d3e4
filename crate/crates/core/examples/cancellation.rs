//! Prints the bare and renormalized second-order ε series for a width sweep.

use pointspec_core::perturbation::renormalized_series;
use pointspec_core::{Epsilon, Ring, Width};

fn main() -> pointspec_core::Result<()> {
    let ring = Ring::two_pi();
    let c = Epsilon::new(1e-3)?;
    println!("{:>8} {:>16} {:>16} {:>16} {:>16}", "a", "divergent", "bare", "renormalized", "exact");
    for a in [0.1, 0.05, 0.025, 0.0125] {
        let rep = renormalized_series(c, Width::new(a)?, &ring, 1, 8000)?.report;
        println!(
            "{a:>8} {:>16.9e} {:>16.10} {:>16.10} {:>16.10}",
            rep.divergent_piece, rep.bare_total, rep.renormalized_total, rep.reference_exact
        );
    }
    Ok(())
}
