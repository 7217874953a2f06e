//! `listdec`: command-line front end for the list-decoding experiments.
//!
//! Exit status: 0 on success, 2 on invalid parameters or usage errors,
//! 3 when a request exceeds an enumeration budget.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use listdec::{Error, Fraction};
use output::{manifest_path, Format, RunManifest};

pub const SEED_ENV: &str = "LISTDEC_SEED";

#[derive(Debug, Parser)]
#[command(name = "listdec", version, about = "List-decoding combinatorics of random linear codes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Master seed for every stochastic subcommand.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel trials (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Emit line-delimited JSON records.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit a CSV table.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write results here (and the run manifest next to it) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include per-trial records where available.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Re-run the invocation recorded in a manifest file.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// q-ary entropy H_q(x).
    Entropy {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        x: f64,
    },
    /// Exact number of vectors within radius r (or ⌊pn⌋) of a point.
    BallVolume {
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present = "p", conflicts_with = "p")]
        r: Option<usize>,
        /// Error fraction, as a/b or a decimal; radius = ⌊pn⌋.
        #[arg(long)]
        p: Option<Fraction>,
        #[arg(long)]
        q: usize,
    },
    /// Uniform samples from the ball B(0, ⌊pn⌋).
    SampleBall {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Fraction,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Random linear code; prints the generator in the code file format.
    GenCode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
        /// Keep the i.i.d. matrix even if rank-deficient.
        #[arg(long)]
        iid: bool,
    },
    /// List-decodability of a code file.
    CheckLd {
        #[command(subcommand)]
        mode: CheckLdCmd,
    },
    /// Span of random ball points intersected with the ball.
    SpanExp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Fraction,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = listdec::experiments::DEFAULT_C_THRESHOLD)]
        c_threshold: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Probability that the sum of two ball samples lands in a ball.
    PairSum {
        /// Comma-separated lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long)]
        p: Fraction,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = CenterArg::Both)]
        center: CenterArg,
    },
    /// Exact list sizes of random codes along a rate grid.
    RateSweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long)]
        p: Fraction,
        /// Comma-separated gaps below capacity.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        codes: usize,
        /// Constant C in the candidate list size ⌈C/ε⌉.
        #[arg(long, default_value_t = 1.0)]
        c_const: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Directory receiving every sampled generator as a code file.
        #[arg(long)]
        save_codes: Option<PathBuf>,
    },
    /// Increasing chains.
    Chain {
        #[command(subcommand)]
        action: ChainCmd,
    },
    /// q-ary shattering sets.
    Shatter {
        #[command(subcommand)]
        action: ShatterCmd,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckLdCmd {
    /// Exact maximum list size.
    Exact {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        p: Fraction,
        /// Report whether the code is (p, L)-list-decodable.
        #[arg(long)]
        list_size: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Monte Carlo list sizes at codeword-plus-noise centers.
    Mc {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        p: Fraction,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainCmd {
    /// Construct a translate and an increasing chain for a vector set.
    Find {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Check a chain file.
    Verify {
        #[arg(long)]
        chain: PathBuf,
    },
    /// Exact longest chain of a vector set (optionally over all translates).
    Oracle {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        scan_translates: bool,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShatterCmd {
    /// Find c coordinates avoided pattern-wise by the set.
    Find {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Check a witness file, or a bare coordinate list, against a set.
    Verify {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, required_unless_present = "coords")]
        witness: Option<PathBuf>,
        /// Comma-separated 0-based coordinates.
        #[arg(long, value_delimiter = ',')]
        coords: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Candidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterArg {
    Zero,
    Random,
    Both,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Resource(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Usage(e) => write!(f, "{e}"),
        }
    }
}

/// The invocation minus output-location flags, with the seed made explicit.
fn normalized_argv(raw: &[String], seed: u64) -> Vec<String> {
    const DROP_WITH_VALUE: [&str; 4] = ["--out", "--manifest", "--seed", "--workers"];
    let mut out = vec![raw.first().cloned().unwrap_or_else(|| "listdec".into())];
    let mut it = raw.iter().skip(1);
    while let Some(a) = it.next() {
        if DROP_WITH_VALUE.contains(&a.as_str()) {
            it.next();
            continue;
        }
        if DROP_WITH_VALUE.iter().any(|f| a.starts_with(&format!("{f}="))) {
            continue;
        }
        out.push(a.clone());
    }
    out.push("--seed".into());
    out.push(seed.to_string());
    out
}

fn subcommand_name(cmd: &Command) -> String {
    let v = serde_json::to_value(cmd).unwrap_or_default();
    match &v {
        serde_json::Value::Object(m) => m.keys().next().cloned().unwrap_or_default(),
        serde_json::Value::String(s) => s.clone(),
        _ => String::new(),
    }
}

fn run(raw: Vec<String>) -> Result<(), CliError> {
    let cli = Cli::try_parse_from(&raw).map_err(|e| {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = e.print();
            std::process::exit(0);
        }
        CliError::Usage(e.render().to_string())
    })?;

    let (cli, argv) = match &cli.global.manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let m: RunManifest =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad manifest {}: {e}", path.display())))?;
            let mut argv = m.argv.clone();
            // output location and worker count come from the current invocation
            if let Some(out) = &cli.global.out {
                argv.push("--out".into());
                argv.push(out.display().to_string());
            }
            if let Some(w) = cli.global.workers {
                argv.push("--workers".into());
                argv.push(w.to_string());
            }
            let again = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.render().to_string()))?;
            (again, m.argv)
        }
        None => {
            let argv = normalized_argv(&raw, cli.global.seed);
            (cli, argv)
        }
    };

    let Some(command) = cli.command.clone() else {
        return Err(CliError::Usage("no subcommand given (see --help)".into()));
    };
    let format = if cli.global.json {
        Format::Json
    } else if cli.global.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let ctx = commands::Ctx { seed: cli.global.seed, verbose: cli.global.verbose };
    let report = listdec::par::with_workers(cli.global.workers, || commands::execute(&command, &ctx))?;

    let run_info = json!({
        "tool": "listdec",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand_name(&command),
        "params": &command,
        "seed": cli.global.seed,
        "argv": &argv[1..],
    });
    let rendered = report.render(format, &run_info);
    match &cli.global.out {
        Some(path) => {
            std::fs::write(path, &rendered).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let manifest = RunManifest {
                tool: "listdec".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                subcommand: subcommand_name(&command),
                argv,
                params: serde_json::to_value(&command).unwrap_or_default(),
                seed: cli.global.seed,
                outputs: vec![path.clone()],
                created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            };
            let mpath = manifest_path(path);
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            std::fs::write(&mpath, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", mpath.display())))?;
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("listdec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
