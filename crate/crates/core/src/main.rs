//! `quadbetti`: Betti numbers of one or two complex quadrics from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadbetti::qparse::{run, Command, Format, InputSpec, QuadricSource};
use quadbetti::symlin::MAX_N;

#[derive(Parser)]
#[command(
    name = "quadbetti",
    version,
    about = "Z2 Betti numbers of intersections of complex quadrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the full pipeline and report Betti numbers.
    Analyze(Opts),
    /// Print the rank stratification of the pencil only.
    Profile(Opts),
    /// Print every page of the reported branch with its differentials.
    E2(Opts),
    /// Count points in CP^2 by elimination and compare with the report.
    Oracle(Opts),
}

#[derive(Args)]
struct Opts {
    /// JSON input file with `n`, `quadrics` and optional `flags`.
    #[arg(long, conflicts_with_all = ["q0", "q1"])]
    input: Option<PathBuf>,
    /// First quadric, e.g. "z0*z2 - z1^2".
    #[arg(long, requires = "n")]
    q0: Option<String>,
    /// Second quadric.
    #[arg(long, requires = "q0")]
    q1: Option<String>,
    /// Projective dimension: variables are z0..zn.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Print every page, not just E_2 and E_inf.
    #[arg(long)]
    dump_pages: bool,
    /// Drop the b0(C) >= 1 filter for pencils.
    #[arg(long)]
    no_nonempty_constraint: bool,
    /// Seed for the oracle's coordinate changes.
    #[arg(long)]
    seed: Option<u64>,
    /// Refuse inputs with n above this bound.
    #[arg(long, default_value_t = MAX_N)]
    max_n: usize,
}

impl Opts {
    fn spec(&self) -> anyhow::Result<InputSpec> {
        let mut spec = match (&self.input, &self.q0) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
                let mut spec = InputSpec::from_json(&text)?;
                if let Some(n) = self.n {
                    spec.n = n;
                }
                spec
            }
            (None, Some(q0)) => {
                let mut quadrics = vec![QuadricSource::Text(q0.clone())];
                quadrics.extend(self.q1.iter().map(|q| QuadricSource::Text(q.clone())));
                InputSpec {
                    n: self.n.expect("clap enforces --n with --q0"),
                    quadrics,
                    flags: Default::default(),
                }
            }
            (None, None) => anyhow::bail!("either --input or --q0 is required"),
        };
        let flags = &mut spec.flags;
        flags.format = self.format;
        flags.dump_pages |= self.dump_pages;
        if self.no_nonempty_constraint {
            flags.assume_nonempty = Some(false);
        }
        if let Some(seed) = self.seed {
            flags.seed = seed;
        }
        flags.max_n = self.max_n;
        Ok(spec)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, command) = match &cli.command {
        Sub::Analyze(o) => (o, Command::Analyze),
        Sub::Profile(o) => (o, Command::Profile),
        Sub::E2(o) => (o, Command::E2),
        Sub::Oracle(o) => (o, Command::Oracle),
    };
    let result = opts
        .spec()
        .and_then(|spec| run(&spec, command).map_err(anyhow::Error::from));
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if out.exit_code == 1 {
                eprintln!("error: oracle point count disagrees with the spectral report");
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
