//! Command-line front end. Exit status is 0 on success, 1 on domain errors
//! and 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::codes::{bin_event_list, parse_event_csv, OccurrenceLog, SpikeMatrix};
use crate::compare::{compare_levels_with, CompareOptions};
use crate::error::{Error, Result};
use crate::homology::{
    barcode_sequence, barcodes_to_csv, betti, frequency_filtration, persistence, DEFAULT_DIM_CAP,
};
use crate::hyperstructure::{build_hyperstructure, BuildConfig, Decomposition, Hyperstructure};
use crate::synth::{synth_generate, triad_spec, SynthSpec};
use crate::topology::{
    delta_correspondence, gluing_graph, level_complex, nerve, NerveConfig, NerveRule,
    DEFAULT_CLIQUE_BUDGET,
};

/// Environment variable overriding the face dimension cap.
pub const DIM_CAP_ENV: &str = "HYPERCODE_DIM_CAP";

pub const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "\nschemas: log 1, hyperstructure 1, complex 1, correspondence 1, barcode-csv 1, report 1, synth-spec 1"
);

#[derive(Parser, Debug)]
#[command(name = "hypercode", version = VERSION, about = "Hyperstructures of neural cofiring patterns and their topology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turn a spike matrix or event list into an occurrence log
    Ingest(IngestArgs),
    /// Build the hyperstructure of an occurrence log
    Build(BuildArgs),
    /// Print Betti numbers of a level complex or of the nerve
    Betti(BettiArgs),
    /// Export the nerve, a level complex, a correspondence or a gluing graph
    Nerve(NerveArgs),
    /// Frequency persistence barcodes as CSV
    Persist(PersistArgs),
    /// Compare two hyperstructures level by level
    Compare(CompareArgs),
    /// Generate a spike matrix from a pattern schedule
    Synth(SynthArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Matrix,
    Events,
}

#[derive(Args, Debug)]
struct IngestArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "matrix")]
    format: InputFormat,
    /// Skip the first line of the input
    #[arg(long)]
    header: bool,
    /// Bin width in seconds (events only)
    #[arg(long, required_if_eq("format", "events"))]
    dt: Option<f64>,
    /// Number of neurons (events only; defaults to the largest id + 1)
    #[arg(long)]
    neurons: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    log: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_level: usize,
    #[arg(long, value_enum, default_value = "exact-cover")]
    decomposition: Decomposition,
    #[arg(long, default_value_t = 1)]
    min_count: usize,
    #[arg(long)]
    two_pass: bool,
    #[arg(long)]
    keep_union_words: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct NerveOptions {
    #[arg(long, value_enum, default_value = "pairwise")]
    rule: NerveRule,
    /// Levels whose bonds enter the nerve (default: all)
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Gluing depths for one level, e.g. `--depths 3=0,2`; repeatable
    #[arg(long, value_parser = parse_depths)]
    depths: Vec<(usize, Vec<usize>)>,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
    clique_budget: usize,
}

impl NerveOptions {
    fn config(&self) -> NerveConfig {
        let mut include_j: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, js) in &self.depths {
            include_j.entry(*i).or_default().extend(js);
        }
        NerveConfig {
            rule: self.rule,
            include_levels: self.levels.clone(),
            include_j,
            clique_budget: self.clique_budget,
        }
    }
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected I,J, got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad level in {s:?}: {e}"))
    };
    Ok((parse(i)?, parse(j)?))
}

fn parse_depths(s: &str) -> std::result::Result<(usize, Vec<usize>), String> {
    let (level, js) = s
        .split_once('=')
        .ok_or_else(|| format!("expected LEVEL=J1,J2,..., got {s:?}"))?;
    let level = level
        .trim()
        .parse()
        .map_err(|e| format!("bad level in {s:?}: {e}"))?;
    let js = js
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|e| format!("bad depth in {s:?}: {e}"))
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok((level, js))
}

#[derive(Args, Debug)]
struct BettiArgs {
    hyperstructure: PathBuf,
    #[arg(long, default_value_t = 1, conflicts_with = "nerve")]
    level: usize,
    /// Use the nerve instead of a level complex
    #[arg(long)]
    nerve: bool,
    /// Highest homology dimension (default: dimension of the complex)
    #[arg(long)]
    max_dim: Option<usize>,
    #[command(flatten)]
    nerve_options: NerveOptions,
}

#[derive(Args, Debug)]
struct NerveArgs {
    hyperstructure: PathBuf,
    #[command(flatten)]
    nerve_options: NerveOptions,
    /// Write the level-I complex instead of the nerve
    #[arg(long, value_name = "I", conflicts_with_all = ["correspondence", "gluing"])]
    level_complex: Option<usize>,
    /// Write the correspondence from level I+1 to level I
    #[arg(long, value_name = "I", conflicts_with = "gluing")]
    correspondence: Option<usize>,
    /// Write the gluing graph of level I at depth J as DOT
    #[arg(long, value_name = "I,J", value_parser = parse_pair)]
    gluing: Option<(usize, usize)>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PersistArgs {
    hyperstructure: PathBuf,
    /// Single level (default: every level)
    #[arg(long)]
    level: Option<usize>,
    /// Keep zero-length intervals
    #[arg(long)]
    keep_zero: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Args, Debug)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Also report Betti numbers of both nerves
    #[arg(long)]
    with_nerve: bool,
    #[command(flatten)]
    nerve_options: NerveOptions,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Synth spec JSON
    #[arg(required_unless_present = "triad", conflicts_with = "triad")]
    spec: Option<PathBuf>,
    /// Use the built-in three-group fixture
    #[arg(long)]
    triad: bool,
    /// Write the spec JSON instead of the matrix
    #[arg(long)]
    print_spec: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Runs the CLI on `args` (including the program name), writing primary
/// output to `out` when no `-o` is given. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = e.print();
                    2
                }
            };
        }
    };
    let dim_cap = match dim_cap_from_env() {
        Ok(cap) => cap,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    match dispatch(cli.command, dim_cap, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dim_cap_from_env() -> std::result::Result<usize, String> {
    match std::env::var(DIM_CAP_ENV) {
        Err(_) => Ok(DEFAULT_DIM_CAP),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{DIM_CAP_ENV}={v:?} is not a non-negative integer")),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn dispatch(command: Command, dim_cap: usize, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Ingest(a) => {
            let text = read(&a.input)?;
            let log = match a.format {
                InputFormat::Matrix => SpikeMatrix::parse(&text, a.header)?.to_log(),
                InputFormat::Events => {
                    let events = parse_event_csv(&text, a.header)?;
                    let n = a
                        .neurons
                        .unwrap_or_else(|| events.iter().map(|e| e.0 + 1).max().unwrap_or(0));
                    bin_event_list(&events, a.dt.expect("clap requires --dt for events"), n)?
                }
            };
            emit(&a.output, &to_json(&log)?, out)
        }
        Command::Build(a) => {
            let log: OccurrenceLog = read_json(&a.log)?;
            let config = BuildConfig {
                max_level: a.max_level,
                decomposition: a.decomposition,
                min_count: a.min_count,
                two_pass: a.two_pass,
                keep_union_words: a.keep_union_words,
            };
            let h = build_hyperstructure(&log, &config)?;
            emit(&a.output, &to_json(&h)?, out)
        }
        Command::Betti(a) => {
            let h: Hyperstructure = read_json(&a.hyperstructure)?;
            let k = if a.nerve {
                nerve(&h, &a.nerve_options.config())?
            } else {
                level_complex(&h, a.level)?
            };
            let values = match (a.max_dim, k.dim()) {
                (Some(d), _) => betti(&k, d, dim_cap)?,
                (None, Some(d)) => betti(&k, d, dim_cap)?,
                (None, None) => Vec::new(),
            };
            writeln!(out, "{}", join(&values))?;
            Ok(())
        }
        Command::Nerve(a) => {
            let h: Hyperstructure = read_json(&a.hyperstructure)?;
            let text = if let Some(i) = a.level_complex {
                to_json(&level_complex(&h, i)?)?
            } else if let Some(i) = a.correspondence {
                to_json(&delta_correspondence(&h, i)?)?
            } else if let Some((i, j)) = a.gluing {
                gluing_graph(&h, i, j)?.to_dot()
            } else {
                to_json(&nerve(&h, &a.nerve_options.config())?)?
            };
            emit(&a.output, &text, out)
        }
        Command::Persist(a) => {
            let h: Hyperstructure = read_json(&a.hyperstructure)?;
            let sequence = match a.level {
                Some(i) => vec![(
                    i,
                    persistence(&frequency_filtration(&h, i, dim_cap)?, a.keep_zero)?,
                )],
                None => barcode_sequence(&h, dim_cap, a.keep_zero)?,
            };
            emit(&a.output, &barcodes_to_csv(&sequence), out)
        }
        Command::Compare(a) => {
            let ha: Hyperstructure = read_json(&a.a)?;
            let hb: Hyperstructure = read_json(&a.b)?;
            let opts = CompareOptions {
                with_nerve: a.with_nerve,
                nerve: a.nerve_options.config(),
                dim_cap,
            };
            let report = compare_levels_with(&ha, &hb, &opts)?;
            let text = match a.format {
                ReportFormat::Json => to_json(&report)?,
                ReportFormat::Table => report.to_table(),
            };
            emit(&a.output, &text, out)
        }
        Command::Synth(a) => {
            let spec: SynthSpec = match &a.spec {
                Some(path) => read_json(path)?,
                None => triad_spec(),
            };
            let text = if a.print_spec {
                spec.validate()?;
                to_json(&spec)?
            } else {
                synth_generate(&spec)?.render()
            };
            emit(&a.output, &text, out)
        }
    }
}
