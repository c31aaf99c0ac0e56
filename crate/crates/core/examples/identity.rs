//! Seeded check of the exact decomposition at random torus points.

use simplex_lebesgue::norm::verify_identity;
use simplex_lebesgue::simplex::DilationVector;

fn main() -> simplex_lebesgue::Result<()> {
    for entries in [vec![2.0, 3.0], vec![7.3, 19.6], vec![5.0, 9.5, 23.0]] {
        let n = DilationVector::new(entries)?;
        for nu_max in [1 << 10, 1 << 12] {
            let r = verify_identity(&n, 100, nu_max, 1)?;
            println!(
                "n = {n:<16} ν ≤ {nu_max:>5}: median {:.2e}, max {:.2e}, passed {}",
                r.median_residual, r.max_residual, r.passed
            );
        }
    }
    Ok(())
}
