use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use practical_bounds::checkpoint::DumpFormat;
use practical_bounds::run::DEFAULT_MEM_BUDGET;
use practical_bounds::selftest::Level;
use practical_bounds::{cmd_bounds, cmd_selftest, cmd_table, Error, OutputFormat, RunConfig, VerifyLevel};

/// Certified bounds for the density constant of practical numbers.
#[derive(Parser)]
#[command(name = "practical-bounds", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the certified interval for c.
    Bounds {
        #[command(flatten)]
        run: RunArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in checks.
    Selftest {
        #[arg(value_enum)]
        level: Level,
        #[arg(long, env = "PRACTICAL_BOUNDS_THREADS", default_value_t = 0)]
        threads: usize,
    },
    /// Dump the practical-number table for reuse.
    Table {
        #[command(flatten)]
        run: RunArgs,
        /// Output directory (defaults to --checkpoint).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = DumpFormat::Csv)]
        dump_format: DumpFormat,
        /// Also write the table joined with the prime functionals.
        #[arg(long)]
        augmented: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Truncation point N.
    #[arg(long, env = "PRACTICAL_BOUNDS_N_MAX", value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    /// Truncation order J of the W series.
    #[arg(long = "j", env = "PRACTICAL_BOUNDS_J", default_value_t = 13)]
    j: u32,
    /// Extend the M_k table downward from 2^k0.
    #[arg(long, env = "PRACTICAL_BOUNDS_K0", default_value_t = 24)]
    k0: u32,
    #[arg(long, env = "PRACTICAL_BOUNDS_MEM_BUDGET", default_value_t = DEFAULT_MEM_BUDGET)]
    mem_budget: u64,
    #[arg(long, env = "PRACTICAL_BOUNDS_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long, env = "PRACTICAL_BOUNDS_CHECKPOINT")]
    checkpoint: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "PRACTICAL_BOUNDS_THREADS", default_value_t = 0)]
    threads: usize,
    #[arg(long, env = "PRACTICAL_BOUNDS_VERIFY", value_enum, default_value_t = VerifyLevel::None)]
    verify: VerifyLevel,
}

impl RunArgs {
    fn config(self) -> RunConfig {
        RunConfig {
            n_max: self.n_max,
            j_order: self.j,
            extension_k0: self.k0,
            mem_budget_bytes: self.mem_budget,
            output_format: self.format,
            checkpoint_dir: self.checkpoint,
            verify_level: self.verify,
            threads: self.threads,
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Bounds { run, out } => {
            let doc = cmd_bounds(&run.config())?;
            match out {
                Some(path) => std::fs::write(path, doc)?,
                None => print!("{doc}"),
            }
        }
        Cmd::Selftest { level, threads } => println!("{}", cmd_selftest(level, threads)?),
        Cmd::Table { run, out, dump_format, augmented } => {
            let t = cmd_table(&run.config(), out.as_deref(), dump_format, augmented)?;
            println!("{} rows -> {}", t.row_count, t.rows.display());
            if let Some(a) = t.augmented {
                println!("augmented -> {}", a.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
