//! Evaluating a kernel on a full torus grid by inverse FFT, checked against
//! direct summation.

use simplex_lebesgue::kernel::{grid_eval, GridSpec};
use simplex_lebesgue::simplex::{build_lattice, indicator_coefficients, DilationVector};

fn main() -> simplex_lebesgue::Result<()> {
    let n = DilationVector::new(vec![5.0, 9.5, 23.0])?;
    let lattice = build_lattice(&n, 3)?;
    let field = indicator_coefficients(&lattice)?;
    let grid = GridSpec::for_extents(&lattice.extents(), 2);
    let values = grid_eval(&field, &grid)?;
    println!("grid {} ({} nodes), P = {}", grid.label(), grid.total(), lattice.len());
    println!("mean |D|² = {:.6} (equals P by Parseval)", values.mean_square());

    let mut worst = 0.0f64;
    for t in [[0, 0, 0], [3, 7, 11], [grid.sizes()[0] - 1, 1, 40]] {
        let x: Vec<f64> = t.iter().enumerate().map(|(a, &i)| grid.node(a, i)).collect();
        let direct = field.eval_direct(&x);
        worst = worst.max((values.get(&t) - direct).norm());
        println!("  t = {t:?}: fft {:.9}, direct {:.9}", values.get(&t), direct);
    }
    println!("worst difference {worst:.2e}");
    Ok(())
}
