//! Certified continued fractions of exact α specifications.
//!
//! cargo run --example continued_fraction -- sqrt:7

use simplex_lebesgue::irrational::{cf_expand, AlphaSpec};

fn main() -> simplex_lebesgue::Result<()> {
    let specs: Vec<String> = match std::env::args().nth(1) {
        Some(s) => vec![s],
        None => ["rational:415/93", "golden", "sqrt:7", "liouville:2,4", "dec:0.70710678..."]
            .map(String::from)
            .to_vec(),
    };
    for s in specs {
        let alpha = AlphaSpec::parse(&s)?;
        let cf = cf_expand(&alpha, 15);
        let q: Vec<String> = cf.quotients.iter().map(|a| a.to_string()).collect();
        let dens: Vec<String> = cf.denominators().take(8).map(|d| d.to_string()).collect();
        println!("{alpha} ≈ {:.15}", alpha.to_f64());
        println!("  [{}; {}]{}", cf.a0, q.join(", "), if cf.precision_exhausted { " (precision exhausted)" } else { "" });
        println!("  denominators {}", dens.join(" "));
    }
    Ok(())
}
