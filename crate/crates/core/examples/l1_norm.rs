//! L1 norm of a kernel with the refinement history and the Parseval audit.
//!
//! cargo run --example l1_norm -- S 16,64

use simplex_lebesgue::norm::{Kernel, NormEngine};

fn main() -> simplex_lebesgue::Result<()> {
    let mut args = std::env::args().skip(1);
    let kernel = Kernel::parse(&args.next().unwrap_or_else(|| "D".into()))?;
    let n = simplex_lebesgue::run::parse_dilation(&args.next().unwrap_or_else(|| "16,64".into()))?;

    let engine = NormEngine::default();
    let r = engine.l1_norm(kernel, &n)?;
    println!("‖{}‖ for n = {n}: {:.10} (normalized {:.10})", kernel.name(), r.value, r.normalized);
    for step in &r.history {
        match step.extrapolated {
            Some(x) => println!("  {:?}: riemann {:.10}, extrapolated {x:.10}", step.grid, step.riemann),
            None => println!("  {:?}: riemann {:.10}", step.grid, step.riemann),
        }
    }
    println!("error estimate {:.2e}", r.error_estimate);
    for a in engine.parseval_audit().iter().take(4) {
        println!("  parseval {:?}: {:.3e} relative", a.grid, a.rel_error);
    }
    Ok(())
}
