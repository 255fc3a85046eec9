use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qframes_cli::{emit, exit_code, run_streaming, Format, RunConfig, Suite, CONFIG_ERROR_EXIT, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "qframes", version, about = "Verify quantum-switch frame identities")]
struct Cli {
    /// Target-system dimension
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Random samples per sampled check
    #[arg(long, default_value_t = 100)]
    samples: usize,

    /// Master seed
    #[arg(long, env = "QFRAMES_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Tolerance for sampled identities
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Suites to run, comma separated
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    suite: Vec<Suite>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// No-go search restarts
    #[arg(long, default_value_t = 50)]
    restarts: usize,

    /// No-go search iterations per restart
    #[arg(long, default_value_t = 200)]
    max_iters: usize,

    /// Ancilla dimension of the no-go ansatz
    #[arg(long, default_value_t = 1)]
    ancilla_dim: usize,

    /// Also write the rendered output here
    #[arg(long)]
    report_file: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(CONFIG_ERROR_EXIT as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let config = RunConfig {
        dim: cli.dim,
        samples: cli.samples,
        seed: cli.seed,
        tol: cli.tol,
        suites: cli.suite,
        format: cli.format,
        restarts: cli.restarts,
        max_iters: cli.max_iters,
        ancilla_dim: cli.ancilla_dim,
    };
    let text = config.format == Format::Text;
    let result = run_streaming(&config, |r| {
        if text {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", emit::text_line(r));
            let _ = out.flush();
        }
    });
    let reports = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR_EXIT as u8);
        }
    };
    let rendered = emit::render(&config, &reports);
    if !text {
        print!("{rendered}");
    }
    if let Some(path) = cli.report_file {
        if let Err(e) = std::fs::write(&path, &rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(CONFIG_ERROR_EXIT as u8);
        }
    }
    ExitCode::from(exit_code(&reports) as u8)
}
