use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use boxgt::constructions::verify_claims;
use boxgt::io;
use boxgt::patterns::{cover_with, covering_check, CoverOptions, CoveringWitness, GridPoint, Scheme};
use boxgt::setsystem::{Outcome, SubsetMode, VerifyOptions, DEFAULT_BUDGET};
use boxgt::{Error, SetSystem, Verdict, Witness};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod registry;
mod stats;

/// Name of the generator behind `--random`, printed in simulation headers.
const RNG_ID: &str = "chacha8-rand_chacha-0.3";

#[derive(Parser)]
#[command(name = "boxgt", version, about = "Group testing with points and axis-parallel boxes")]
struct Cli {
    /// Maximum number of subsets a single check may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named construction as JSON.
    Generate(GenerateArgs),
    /// Check a property of a configuration or set system.
    Verify(VerifyArgs),
    /// Run the tests on a defective set and decode the outcome.
    Simulate(SimulateArgs),
    /// Build a rectangle covering of a grid and weigh it.
    Cover(CoverArgs),
    /// Summarize configuration files as CSV.
    Stats(StatsArgs),
    /// Rewrite a grid-line configuration in the plane or a subspace
    /// configuration one dimension lower.
    Embed(EmbedArgs),
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Construction name.
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Number of long-rectangle steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Built-in base for long-rect.
    #[arg(long)]
    base: Option<String>,
    /// Configuration file to use as the long-rect base.
    #[arg(long)]
    base_file: Option<PathBuf>,
    /// Verify every attached claim before writing.
    #[arg(long)]
    assert_claims: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("property").required(true).args(["separable", "bar_separable", "disjunct"])))]
struct VerifyArgs {
    /// Configuration or set system file.
    input: PathBuf,
    #[arg(long)]
    separable: Option<usize>,
    /// Separability over all subsets of size at most t.
    #[arg(long)]
    bar_separable: Option<usize>,
    #[arg(long)]
    disjunct: Option<usize>,
    /// Leave the empty set out of --bar-separable.
    #[arg(long)]
    nonempty: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Decoder {
    Disjunct,
    Signature,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exactly,
    AtMost,
    AtMostNonempty,
}

impl From<Mode> for SubsetMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exactly => SubsetMode::Exactly,
            Mode::AtMost => SubsetMode::AtMost,
            Mode::AtMostNonempty => SubsetMode::AtMostNonEmpty,
        }
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("defects").required(true).args(["defectives", "random"])))]
struct SimulateArgs {
    input: PathBuf,
    /// Item labels; give the flag alone for no defectives.
    #[arg(long, num_args = 0..)]
    defectives: Option<Vec<String>>,
    /// Draw this many defectives uniformly with --seed.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, value_enum, default_value_t = Decoder::Disjunct)]
    decoder: Decoder,
    /// Decoder size bound; defaults to the number of defectives.
    #[arg(long)]
    t: Option<usize>,
    /// Subset sizes the signature decoder admits.
    #[arg(long, value_enum, default_value_t = Mode::AtMost)]
    mode: Mode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Zar,
    Zshape,
    Star,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Zar => Scheme::Zar,
            SchemeArg::Zshape => Scheme::ZShape,
            SchemeArg::Star => Scheme::Star,
        }
    }
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// JSON list of grid points that no box may hold strictly inside.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Axis along which boxes are split.
    #[arg(long, default_value_t = 0)]
    split_axis: usize,
    /// Covering JSON destination; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Weight report destination.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Glob patterns of configuration files.
    #[arg(required = true)]
    patterns: Vec<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    input: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// A run that finished but found a counterexample or mismatch.
struct Refuted;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Refuted)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<std::result::Result<(), Refuted>> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let opts = VerifyOptions {
        budget: cli.budget,
        ..Default::default()
    };
    match &cli.command {
        Command::Generate(a) => generate(a, &opts),
        Command::Verify(a) => verify(a, &opts, cli.format),
        Command::Simulate(a) => simulate(a, &opts, cli.seed, cli.format),
        Command::Cover(a) => cover(a, cli.format),
        Command::Stats(a) => {
            let rows = stats::collect(&stats::expand(&a.patterns)?)?;
            let text = match cli.format {
                Some(Format::Json) => stats::to_json(&rows)?,
                _ => stats::to_csv(&rows),
            };
            emit(a.out.as_deref(), &text)?;
            Ok(Ok(()))
        }
        Command::Embed(a) => {
            let config = io::parse_config(&read(&a.input)?)?;
            emit(a.out.as_deref(), &io::to_json(&registry::embed(&config)?)?)?;
            Ok(Ok(()))
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(a: &GenerateArgs, opts: &VerifyOptions) -> Result<std::result::Result<(), Refuted>> {
    let generated = registry::generate(&a.name, a)?;
    if a.assert_claims {
        let registry::Generated::Config(config) = &generated else {
            bail!("{} carries no claims", a.name);
        };
        let mut failed = false;
        for check in verify_claims(config, opts)? {
            let negation = if check.expected { "" } else { "not " };
            let status = if check.confirmed() { "confirmed" } else { "FAILED" };
            eprintln!("claim {negation}{}-{}: {status}", check.t, check.property);
            failed |= !check.confirmed();
        }
        if failed {
            return Ok(Err(Refuted));
        }
    }
    emit(a.out.as_deref(), &registry::to_json(&generated)?)?;
    Ok(Ok(()))
}

/// Accepts either a configuration or a bare set system.
fn load_system(path: &Path) -> Result<SetSystem> {
    let bytes = read(path)?;
    match io::parse_config(&bytes) {
        Ok(config) => Ok(config.induce()?),
        Err(config_err) => io::parse_set_system(&bytes)
            .map_err(|_| config_err)
            .with_context(|| format!("parsing {}", path.display())),
    }
}

fn labels(sys: &SetSystem, items: &[usize]) -> Vec<String> {
    items.iter().map(|&i| sys.item_label(i).into_owned()).collect()
}

fn verify(a: &VerifyArgs, opts: &VerifyOptions, format: Option<Format>) -> Result<std::result::Result<(), Refuted>> {
    let sys = load_system(&a.input)?;
    let (property, verdict) = if let Some(t) = a.separable {
        (
            format!("{t}-separable"),
            sys.verify_separable(t, SubsetMode::Exactly, opts)?,
        )
    } else if let Some(t) = a.bar_separable {
        let mode = if a.nonempty {
            SubsetMode::AtMostNonEmpty
        } else {
            SubsetMode::AtMost
        };
        (format!("{t}-bar-separable"), sys.verify_separable(t, mode, opts)?)
    } else if let Some(t) = a.disjunct {
        (format!("{t}-disjunct"), sys.verify_disjunct(t, opts)?)
    } else {
        bail!("no property given");
    };
    let holds = verdict.holds();
    let fields: Vec<(&str, Vec<String>)> = match &verdict {
        Verdict::Holds => vec![],
        Verdict::Refuted(Witness::SeparabilityCollision { first, second }) => {
            vec![("first", labels(&sys, first)), ("second", labels(&sys, second))]
        }
        Verdict::Refuted(Witness::DisjunctCover { item, cover }) => {
            vec![("item", labels(&sys, &[*item])), ("cover", labels(&sys, cover))]
        }
        Verdict::Refuted(w) => bail!("unexpected witness {w:?}"),
    };
    let status = if holds { "holds" } else { "refuted" };
    let text = match format {
        Some(Format::Json) => {
            let mut map = serde_json::Map::new();
            map.insert("property".into(), property.into());
            map.insert("verdict".into(), status.into());
            for (k, v) in &fields {
                map.insert(k.to_string(), v.clone().into());
            }
            io::to_json(&map)?
        }
        Some(Format::Csv) => {
            let cell = |k: &str| {
                fields
                    .iter()
                    .find(|f| f.0 == k)
                    .map(|f| f.1.join(" "))
                    .unwrap_or_default()
            };
            format!(
                "property,verdict,first,second,item,cover\n{property},{status},\"{}\",\"{}\",\"{}\",\"{}\"\n",
                cell("first"),
                cell("second"),
                cell("item"),
                cell("cover")
            )
        }
        None => {
            let mut out = format!("property: {property}\nverdict: {status}\n");
            for (k, v) in &fields {
                out.push_str(&format!("{k}: {}\n", v.join(" ")));
            }
            out
        }
    };
    print!("{text}");
    Ok(if holds { Ok(()) } else { Err(Refuted) })
}

fn simulate(
    a: &SimulateArgs,
    opts: &VerifyOptions,
    seed: u64,
    format: Option<Format>,
) -> Result<std::result::Result<(), Refuted>> {
    let sys = load_system(&a.input)?;
    let m = sys.item_count();
    let mut header = String::new();
    let mut defectives: Vec<usize> = if let Some(t) = a.random {
        if t >= m {
            bail!("cannot draw {t} defectives from {m} items");
        }
        header = format!("# rng: {RNG_ID} seed={seed}\n");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::index::sample(&mut rng, m, t).into_vec()
    } else {
        a.defectives
            .iter()
            .flatten()
            .map(|l| sys.item_index(l).with_context(|| format!("no item labelled {l:?}")))
            .collect::<Result<_>>()?
    };
    defectives.sort_unstable();
    defectives.dedup();
    let t = a.t.unwrap_or(defectives.len());
    let outcome: Outcome = sys.run_tests(&defectives)?;
    let decoded = match a.decoder {
        Decoder::Disjunct => sys.decode_disjunct(&outcome, t),
        Decoder::Signature => sys.decode_by_signature(&outcome, t, a.mode.into(), opts),
    };
    let (decoded_text, matched) = match decoded {
        Ok(items) => (labels(&sys, &items).join(" "), items == defectives),
        Err(e @ (Error::Ambiguous(..) | Error::NoMatch | Error::CardinalityMismatch { .. })) => {
            (format!("failed ({e})"), false)
        }
        Err(e) => return Err(e.into()),
    };
    let bits: String = outcome
        .results
        .to_bools()
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    let positives: Vec<String> = outcome
        .positives()
        .iter()
        .map(|&j| sys.test_label(j).into_owned())
        .collect();
    let defect_text = labels(&sys, &defectives).join(" ");
    let text = match format {
        Some(Format::Json) => {
            let value = serde_json::json!({
                "rng": if a.random.is_some() { Some(format!("{RNG_ID} seed={seed}")) } else { None },
                "defectives": labels(&sys, &defectives),
                "outcome": bits,
                "positive_tests": positives,
                "decoded": decoded_text,
                "match": matched,
            });
            io::to_json(&value)?
        }
        Some(Format::Csv) => format!(
            "{header}defectives,outcome,positive_tests,decoded,match\n\"{defect_text}\",{bits},\"{}\",\"{decoded_text}\",{matched}\n",
            positives.join(" ")
        ),
        None => format!(
            "{header}defectives: {defect_text}\noutcome: {bits}\npositive tests: {}\ndecoded: {decoded_text}\nmatch: {matched}\n",
            positives.join(" ")
        ),
    };
    print!("{text}");
    Ok(if matched { Ok(()) } else { Err(Refuted) })
}

fn cover(a: &CoverArgs, format: Option<Format>) -> Result<std::result::Result<(), Refuted>> {
    let v: Vec<GridPoint> = match &a.points {
        Some(path) => serde_json::from_slice(&read(path)?).with_context(|| format!("parsing {}", path.display()))?,
        None => Vec::new(),
    };
    let opts = CoverOptions {
        split_axis: a.split_axis,
    };
    let cov = cover_with(a.n, a.d, &v, a.scheme.into(), &opts)?;
    let report = match covering_check(&cov, &v)? {
        Ok(r) => r,
        Err(w) => {
            let detail = match w {
                CoveringWitness::UncoveredPoint { point } => format!("point {point:?} is uncovered"),
                CoveringWitness::InteriorPoint { box_index, point } => {
                    format!("point {point:?} lies inside box {box_index}")
                }
            };
            bail!("covering is invalid: {detail}");
        }
    };
    let csv = report.to_csv(&cov);
    emit(a.out.as_deref(), &io::to_json(&cov)?)?;
    match (&a.report, format) {
        (Some(path), _) => emit(Some(path), &csv)?,
        (None, Some(Format::Csv)) if a.out.is_some() => print!("{csv}"),
        _ => {}
    }
    eprintln!("boxes: {}, total weight: {}", cov.boxes().len(), report.total);
    Ok(Ok(()))
}
