//! Lattice points of a dilated simplex and its nested bounds.
//!
//! cargo run --example lattice -- 3.5,7,10

use simplex_lebesgue::simplex::{build_lattice, count_points, DilationVector};

fn main() -> simplex_lebesgue::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "3.5,7,10".into());
    let n = simplex_lebesgue::run::parse_dilation(&arg)?;
    let d = n.dim();
    println!("n = {n}, box extents {:?}", n.box_extents());
    for s in 1..=d {
        println!("  points in the first {s} coordinates: {}", count_points(&n, s));
    }

    let lam = n.lambda();
    let head = build_lattice(&n, d - 1)?;
    println!("points of the first {} coordinates and the bound on the last:", d - 1);
    for k in head.points().take(10) {
        let k: Vec<i64> = k.iter().map(|v| *v as i64).collect();
        println!("  {k:?}  Λ_{d} = {:.4} = {} + {:.4}", lam.at(d, &k), lam.floor_at(d, &k), lam.frac_at(d, &k));
    }

    let iso = DilationVector::isotropic(4.0, 2)?;
    println!("isotropic (4,4) has {} points", count_points(&iso, 2));
    Ok(())
}
