mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::FileConfig;

pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "popsynth", version, about = "Synthetic populations from census block aggregates")]
struct Cli {
    /// TOML file with defaults for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker thread cap
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset
    Generate(Opts),
    /// Test a dataset against the statistics it came from
    Validate(Opts),
    /// Per-group distance to the nearest resource, and disparity
    Audit(Opts),
    /// Lines from sampled persons to their nearest resource (GeoJSON)
    Explain(Opts),
}

/// Shared flag set; each command reads the subset it needs.
#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    /// Per-block group counts CSV (fips + one column per group)
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Block boundaries GeoJSON
    #[arg(long)]
    pub geo: Option<PathBuf>,
    /// GeoJSON property holding the block FIPS
    #[arg(long)]
    pub fips_property: Option<String>,
    /// zip,fips crosswalk CSV
    #[arg(long)]
    pub crosswalk: Option<PathBuf>,
    /// Existing dataset CSV
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Resource file as <label>=<path> (repeatable)
    #[arg(long = "resources", value_name = "LABEL=PATH")]
    pub resources: Vec<String>,
    /// Attribute table as <name>=<path> (repeatable)
    #[arg(long = "attribute", value_name = "NAME=PATH")]
    pub attributes: Vec<String>,
    /// Number of records (explain: number of persons, default 2000)
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Zip codes (comma separated or repeated)
    #[arg(long)]
    pub zip: Vec<String>,
    /// Block FIPS codes (comma separated or repeated)
    #[arg(long)]
    pub blocks: Vec<String>,
    /// Group labels (comma separated or repeated)
    #[arg(long)]
    pub groups: Vec<String>,
    /// Name of the group column (default "race")
    #[arg(long)]
    pub group_column: Option<String>,
    /// group,merged CSV; a '*' row names the fallback group
    #[arg(long)]
    pub merge_map: Option<PathBuf>,
    /// Only audit persons inside this GeoJSON polygon
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    /// Block aggregation width for validation
    #[arg(long)]
    pub agg_m: Option<usize>,
    /// Significance level for validation (default 0.05)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output file (stdout for JSON reports when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary JSON for generate (default <out>.summary.json)
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Per-group chart data CSV for audit
    #[arg(long)]
    pub chart_csv: Option<PathBuf>,
}

impl Opts {
    fn merge(mut self, file: FileConfig) -> Self {
        fn or<T>(a: &mut Option<T>, b: Option<T>) {
            if a.is_none() {
                *a = b;
            }
        }
        or(&mut self.stats, file.stats);
        or(&mut self.geo, file.geo);
        or(&mut self.fips_property, file.fips_property);
        or(&mut self.crosswalk, file.crosswalk);
        or(&mut self.dataset, file.dataset);
        or(&mut self.n, file.n);
        or(&mut self.seed, file.seed);
        or(&mut self.group_column, file.group_column);
        or(&mut self.merge_map, file.merge_map);
        or(&mut self.boundary, file.boundary);
        or(&mut self.agg_m, file.agg_m);
        or(&mut self.alpha, file.alpha);
        or(&mut self.out, file.out);
        or(&mut self.summary, file.summary);
        or(&mut self.chart_csv, file.chart_csv);
        let pairs = |m: std::collections::BTreeMap<String, PathBuf>| {
            m.into_iter().map(|(k, v)| format!("{k}={}", v.display())).collect()
        };
        if self.resources.is_empty() {
            self.resources = pairs(file.resources);
        }
        if self.attributes.is_empty() {
            self.attributes = pairs(file.attributes);
        }
        for (mine, theirs) in [
            (&mut self.zip, file.zip),
            (&mut self.blocks, file.blocks),
            (&mut self.groups, file.groups),
        ] {
            if mine.is_empty() {
                *mine = theirs;
            }
        }
        self
    }
}

/// Command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<popsynth::Error> for Failure {
    fn from(e: popsynth::Error) -> Self {
        if e.is_input_error() {
            Failure::input(e.to_string())
        } else {
            Failure::internal(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(Failure::input)?,
        None => FileConfig::default(),
    };
    let threads = cli.threads.or(file.threads);
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::internal(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Generate(o) => commands::generate(&o.merge(file)),
        Command::Validate(o) => commands::validate(&o.merge(file)),
        Command::Audit(o) => commands::audit(&o.merge(file)),
        Command::Explain(o) => commands::explain(&o.merge(file)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::new().parse_filters(level).format_timestamp(None).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
