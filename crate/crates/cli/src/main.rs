use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ei_hereditary::{CoefficientField, Side};
use ei_hereditary_cli::{parse_input, run_job, Command, JobSpec, OracleTask};

#[derive(Parser)]
#[command(name = "eicat", version, about = "Hereditarity of category algebras of finite EI categories")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Field characteristics, comma separated; overrides the job section
    #[arg(long = "char", global = true, value_delimiter = ',')]
    chars: Vec<u64>,
    #[arg(long, global = true, value_enum)]
    side: Option<SideArg>,
    /// Run the linear algebra oracle
    #[arg(long, global = true)]
    oracle: Option<bool>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest algebra dimension handed to the oracle
    #[arg(long = "limit-dim", global = true)]
    limit_dim: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time per input
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide and verify the categories and quivers of an input file
    Check { input: PathBuf },
    /// Transporter categories of the declared G-posets
    Transporter { input: PathBuf },
    /// Orbit categories of the declared families
    Orbit { input: PathBuf },
    /// Quillen categories of the declared families
    Quillen { input: PathBuf },
    /// Normaliser finiteness in graphs of groups
    Normaliser { input: PathBuf },
    /// Oracle computations on the declared categories
    Oracle {
        #[command(subcommand)]
        task: OracleCmd,
    },
    /// List the generated corpus
    Corpus { input: Option<PathBuf> },
    /// Decider against oracle over the generated corpus
    VerifyAll { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum OracleCmd {
    Gldim {
        input: PathBuf,
        #[arg(long)]
        max: Option<usize>,
    },
    Hereditary {
        input: PathBuf,
    },
    Omega {
        input: PathBuf,
    },
    Induced {
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn load(path: Option<&PathBuf>) -> Result<JobSpec, String> {
    let Some(path) = path else {
        return Ok(JobSpec::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_input(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, input, gldim_max) = match &cli.command {
        Cmd::Check { input } => (Command::Check, Some(input), None),
        Cmd::Transporter { input } => (Command::Transporter, Some(input), None),
        Cmd::Orbit { input } => (Command::Orbit, Some(input), None),
        Cmd::Quillen { input } => (Command::Quillen, Some(input), None),
        Cmd::Normaliser { input } => (Command::Normaliser, Some(input), None),
        Cmd::Oracle { task } => match task {
            OracleCmd::Gldim { input, max } => (Command::Oracle(OracleTask::Gldim), Some(input), *max),
            OracleCmd::Hereditary { input } => (Command::Oracle(OracleTask::Hereditary), Some(input), None),
            OracleCmd::Omega { input } => (Command::Oracle(OracleTask::Omega), Some(input), None),
            OracleCmd::Induced { input } => (Command::Oracle(OracleTask::Induced), Some(input), None),
        },
        Cmd::Corpus { input } => (Command::Corpus, input.as_ref(), None),
        Cmd::VerifyAll { input } => (Command::VerifyAll, input.as_ref(), None),
    };
    let mut spec = match load(input) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("eicat: {e}");
            return ExitCode::from(2);
        }
    };
    let s = &mut spec.settings;
    if !cli.chars.is_empty() {
        match cli.chars.iter().map(|&p| CoefficientField::new(p)).collect::<Result<Vec<_>, _>>() {
            Ok(chars) => s.chars = chars,
            Err(e) => {
                eprintln!("eicat: {e}");
                return ExitCode::from(2);
            }
        }
    } else if command == Command::VerifyAll && input.is_none() {
        s.chars = [0, 2, 3, 5].iter().map(|&p| CoefficientField::new(p).unwrap()).collect();
    }
    match cli.side {
        Some(SideArg::Left) => s.sides = vec![Side::Left],
        Some(SideArg::Right) => s.sides = vec![Side::Right],
        Some(SideArg::Both) => s.sides = vec![Side::Left, Side::Right],
        None => {}
    }
    if let Some(o) = cli.oracle {
        s.oracle = o;
    }
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    if let Some(l) = cli.limit_dim {
        if l == 0 {
            eprintln!("eicat: --limit-dim must be positive");
            return ExitCode::from(2);
        }
        s.limit_dim = l;
    }
    if let Some(m) = gldim_max {
        s.gldim_max = m;
    }
    let report = run_job(command, &spec, cli.timings);
    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("eicat: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
