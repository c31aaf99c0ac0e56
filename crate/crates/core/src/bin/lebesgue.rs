use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use simplex_lebesgue::run::{self, RunConfig};

#[derive(Parser)]
#[command(name = "lebesgue", version, about = "L1 norms of simplex Dirichlet kernels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    max_doublings: Option<String>,
    #[arg(long)]
    nu_max: Option<String>,
    /// Grid memory cap in complex cells.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    parseval_tol: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long, short)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// L1 norm of one kernel.
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kernel: Option<String>,
        /// Comma-separated dilation, e.g. 8,64.
        #[arg(long)]
        n: Option<String>,
    },
    /// Pointwise check of D = S + F + R at random torus points.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        seed: Option<String>,
    },
    /// CSV of norms and predictor terms over a grid of dilations.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n1: Option<String>,
        #[arg(long)]
        n2: Option<String>,
        #[arg(long)]
        n3: Option<String>,
        #[arg(long)]
        n4: Option<String>,
        #[arg(long)]
        n5: Option<String>,
        #[arg(long)]
        n6: Option<String>,
        #[arg(long)]
        t_nodes: Option<String>,
        /// theorem or proof.
        #[arg(long)]
        mu_range: Option<String>,
        #[arg(long)]
        with_s: Option<String>,
        #[arg(long)]
        with_frak: Option<String>,
        #[arg(long)]
        timing: Option<String>,
    },
    /// Growth of the fractional-part norm I_n(alpha) against ln^2 n.
    Irrational {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: Option<String>,
        /// Explicit list of n; otherwise nmin..nmax by octaves.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        nmin: Option<String>,
        #[arg(long)]
        nmax: Option<String>,
        #[arg(long)]
        per_octave: Option<String>,
        #[arg(long)]
        include_convergents: Option<String>,
        #[arg(long)]
        dip: Option<String>,
        /// Where the JSON summary goes (default stderr).
        #[arg(long)]
        summary: Option<String>,
    },
}

fn build(common: &Common, extra: &[(&str, &Option<String>)]) -> simplex_lebesgue::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::new(),
    };
    let shared = [
        ("tol", &common.tol),
        ("rho", &common.rho),
        ("max_doublings", &common.max_doublings),
        ("nu_max", &common.nu_max),
        ("budget", &common.budget),
        ("parseval_tol", &common.parseval_tol),
        ("workers", &common.workers),
        ("output", &common.output),
    ];
    for (k, v) in shared.iter().chain(extra) {
        if let Some(v) = v {
            cfg.set(k, v.as_str())?;
        }
    }
    run::configure_workers(&cfg)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (common, extra, f): (_, Vec<(&str, &Option<String>)>, fn(&RunConfig, &mut dyn Write, &mut dyn Write) -> i32) =
        match &cli.cmd {
            Cmd::Norm { common, kernel, n } => {
                (common, vec![("kernel", kernel), ("n", n)], run::cmd_norm)
            }
            Cmd::Verify { common, n, points, seed } => (
                common,
                vec![("n", n), ("points", points), ("seed", seed)],
                run::cmd_verify,
            ),
            Cmd::Sweep { common, n1, n2, n3, n4, n5, n6, t_nodes, mu_range, with_s, with_frak, timing } => (
                common,
                vec![
                    ("n1", n1),
                    ("n2", n2),
                    ("n3", n3),
                    ("n4", n4),
                    ("n5", n5),
                    ("n6", n6),
                    ("t_nodes", t_nodes),
                    ("mu_range", mu_range),
                    ("with_s", with_s),
                    ("with_frak", with_frak),
                    ("timing", timing),
                ],
                run::cmd_sweep,
            ),
            Cmd::Irrational { common, alpha, n, nmin, nmax, per_octave, include_convergents, dip, summary } => (
                common,
                vec![
                    ("alpha", alpha),
                    ("n", n),
                    ("nmin", nmin),
                    ("nmax", nmax),
                    ("per_octave", per_octave),
                    ("include_convergents", include_convergents),
                    ("dip", dip),
                    ("summary", summary),
                ],
                run::cmd_irrational,
            ),
        };
    let mut stderr = std::io::stderr().lock();
    let cfg = match build(common, &extra) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return ExitCode::from(run::EXIT_USAGE as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let code = f(&cfg, &mut stdout, &mut stderr);
    let _ = stdout.flush();
    ExitCode::from(code as u8)
}
