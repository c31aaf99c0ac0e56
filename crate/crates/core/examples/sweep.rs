//! A parameter sweep driven from code, printing the same CSV as
//! `lebesgue sweep`.

use simplex_lebesgue::run::{sweep_csv, RunConfig};

fn main() -> simplex_lebesgue::Result<()> {
    let cfg = RunConfig::parse(
        "n1 = geom(8, 64, 4)\n\
         n2 = n1^2\n\
         mu_range = theorem\n",
    )?;
    print!("{}", sweep_csv(&cfg)?);
    Ok(())
}
