use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use repcoh_cli::{cap_from_env, run, BasisMode, Emit, InputSource, RunConfig};
use repcoh_core::{family, Variant, DEFAULT_INTERVAL_CAP};

#[derive(Parser)]
#[command(name = "repcoh", version, about = "Representation cohomology of finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a poset from a named family in the poset file format.
    Family {
        /// chain, dandelion, corolla, pseudo_circle, antichain or tree
        name: String,
        params: Vec<usize>,
    },
    /// Compute cohomology groups.
    Compute(ComputeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "E")]
    E,
    #[value(name = "G")]
    G,
    #[value(name = "tildeE")]
    TildeE,
    #[value(name = "tildeG")]
    TildeG,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::E => Variant::CheckE,
            VariantArg::G => Variant::CheckG,
            VariantArg::TildeE => Variant::TildeE,
            VariantArg::TildeG => Variant::TildeG,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Intervals,
    Singletons,
    Nerve,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "family"])))]
struct ComputeArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Poset file, or `-` for standard input.
    #[arg(long)]
    input: Option<String>,
    /// Family spec such as "dandelion 3".
    #[arg(long)]
    family: Option<String>,
    /// Highest degree; defaults to the composition length for E and G.
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, value_enum, default_value = "intervals")]
    basis: BasisArg,
    #[arg(long, value_enum, default_value = "table")]
    emit: EmitArg,
    /// Also print cocycle representatives.
    #[arg(long)]
    generators: bool,
    /// Maximum number of intervals per level (default 5000000, or the
    /// REPCOH_INTERVAL_CAP environment variable).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Family { name, params } => match family(&name, &params) {
            Ok(p) => match std::io::stdout().lock().write_all(p.to_text().as_bytes()) {
                Ok(()) => 0,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    1
                }
            },
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Command::Compute(args) => compute(args),
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code as u8)
}

fn compute(args: ComputeArgs) -> i32 {
    let input = match (args.input, args.family) {
        (Some(p), None) if p == "-" => InputSource::Stdin,
        (Some(p), None) => InputSource::File(PathBuf::from(p)),
        (None, Some(f)) => InputSource::Family(f),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let cap = match args.cap {
        Some(c) => c as usize,
        None => match cap_from_env() {
            Ok(c) => c.unwrap_or(DEFAULT_INTERVAL_CAP),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
    };
    let cfg = RunConfig {
        variant: args.variant.into(),
        input,
        max_dim: args.max_dim,
        basis: match args.basis {
            BasisArg::Intervals => BasisMode::Intervals,
            BasisArg::Singletons => BasisMode::Singletons,
            BasisArg::Nerve => BasisMode::Nerve,
        },
        emit: match args.emit {
            EmitArg::Table => Emit::Table,
            EmitArg::Json => Emit::Json,
            EmitArg::Csv => Emit::Csv,
        },
        generators: args.generators,
        cap,
        threads: args.threads.map(|t| t as usize),
    };
    run(
        &cfg,
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
