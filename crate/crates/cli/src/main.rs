use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linrank::commands::{self, Format, FuzzOptions, InputError, Method, Outcome, EXIT_INPUT};
use linrank::gen::GenConfig;

#[derive(Parser)]
#[command(name = "linrank", version, about = "Synthesize linear ranking functions for linear loops")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Ms,
    Pr,
    PrAlt,
    Svg,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ms => Method::Ms,
            MethodArg::Pr => Method::Pr,
            MethodArg::PrAlt => Method::PrAlt,
            MethodArg::Svg => Method::Svg,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(clap::Args)]
struct LoopArgs {
    /// Loop file
    file: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a linear ranking function exists
    Check(LoopArgs),
    /// Print one ranking function and its decrease
    Rank(LoopArgs),
    /// Print the space of all ranking functions over mu0, mu1..muN
    Space {
        #[command(flatten)]
        args: LoopArgs,
        /// Print the decreasing and bounded spaces separately (MS only)
        #[arg(long)]
        conditional: bool,
    },
    /// Cross-check both engines on one loop
    Compare {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Analyze every .loop file of a directory and print CSV
    Bench { dir: PathBuf },
    /// Cross-check random loops, optionally saving them
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Directory receiving the generated loop files
        #[arg(long)]
        out: Option<PathBuf>,
        /// Generate guard/update loops with total updates
        #[arg(long)]
        guarded: bool,
    },
    #[command(hide = true)]
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

fn run(cmd: Cmd) -> Result<Outcome, InputError> {
    match cmd {
        Cmd::Check(a) => commands::analyze(&commands::load(&a.file)?, a.method.into(), a.format.into(), false),
        Cmd::Rank(a) => commands::analyze(&commands::load(&a.file)?, a.method.into(), a.format.into(), true),
        Cmd::Space { args: a, conditional } => {
            commands::space(&commands::load(&a.file)?, a.method.into(), a.format.into(), conditional)
        }
        Cmd::Compare { file, format } => commands::compare(&commands::load(&file)?, format.into()),
        Cmd::Bench { dir } => Ok(Outcome { code: 0, stdout: linrank::bench::bench(&dir)? }),
        Cmd::Fuzz { seed, count, out, guarded } => {
            commands::fuzz(&FuzzOptions { seed, count, guarded, out, config: GenConfig::default() })
        }
        Cmd::Selftest { seed, count } => {
            commands::fuzz(&FuzzOptions { seed, count, guarded: false, out: None, config: GenConfig::default() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
