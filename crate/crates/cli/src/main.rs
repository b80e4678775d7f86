//! `bondminer`: mine bond-correlated patterns, query and regenerate their
//! condensed representations, and derive classification rules.

mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use bondminer_core::config::parse_minbond;
use bondminer_core::corpus::{discretize, read_matrix_csv, DiscretizationConfig};
use bondminer_core::miner_gmjp::mine_with;
use bondminer_core::miner_opt::mine_opt_with;
use bondminer_core::oracle::{Lattice, ORACLE_CAP_ENV};
use bondminer_core::representations::{self as reps, fmt_ratio, MiningOutput};
use bondminer_core::rules::{self, RulePairing};
use bondminer_core::{Error, Item, Itemset, MinSupport, RepresentationKind, Scenario, Thresholds, TransactionDb};

use manifest::{InputFile, RunManifest};

#[derive(Parser)]
#[command(name = "bondminer", version, about = "Correlated pattern mining under the bond measure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine a FIMI file for one scenario
    Mine(MineArgs),
    /// Answer a membership and support query against a representation file
    Query(QueryArgs),
    /// Reduce an RCPR file to MMaxCR, MinMCR or MinMMaxCR
    Derive(DeriveArgs),
    /// Rebuild the full rare correlated set from an RCPR file
    Regenerate(RegenerateArgs),
    /// Derive generic association rules from an RCPR or RFCCP file
    Rules(RulesArgs),
    /// Classify labelled transactions with a rule file
    Classify(ClassifyArgs),
    /// Turn a CSV of reals into FIMI transactions by z-score cutoffs
    Discretize(DiscretizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Fcp,
    Rfccp,
    Rcp,
    Rcpr,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Fcp => Scenario::Fcp,
            ScenarioArg::Rfccp => Scenario::Rfccp,
            ScenarioArg::Rcp => Scenario::Rcp,
            ScenarioArg::Rcpr => Scenario::Rcpr,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MinerArg {
    Gmjp,
    Opt,
    Oracle,
}

#[derive(clap::Args)]
struct MineArgs {
    #[arg(long)]
    input: PathBuf,
    /// Absolute count or percentage such as 35%
    #[arg(long)]
    minsupp: String,
    /// Fraction such as 1/5 or decimal such as 0.15
    #[arg(long)]
    minbond: String,
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum, default_value = "gmjp")]
    miner: MinerArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
    /// Manifest path, defaults to OUT.manifest.json
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Also count the full pattern set and report the compactness rate
    #[arg(long)]
    full_count: bool,
    /// Write the oracle lattice as Graphviz (oracle miner only)
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(clap::Args)]
struct QueryArgs {
    #[arg(long)]
    rep: PathBuf,
    /// Space-separated item ids
    #[arg(long)]
    itemset: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum DerivedKind {
    Mmaxcr,
    Minmcr,
    Minmmaxcr,
}

#[derive(clap::Args)]
struct DeriveArgs {
    #[arg(long)]
    rep: PathBuf,
    #[arg(long, value_enum)]
    kind: DerivedKind,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct RegenerateArgs {
    #[arg(long)]
    rep: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    Containing,
    Own,
}

#[derive(clap::Args)]
struct RulesArgs {
    #[arg(long)]
    rep: PathBuf,
    #[arg(long, default_value = "1/2")]
    minconf: String,
    #[arg(long, value_enum, default_value = "containing")]
    pairing: PairingArg,
    /// Keep every generic rule instead of the IGB subset
    #[arg(long)]
    no_igb: bool,
    /// Keep only rules concluding on one of these item ids
    #[arg(long)]
    class_items: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct ClassifyArgs {
    #[arg(long)]
    rules: PathBuf,
    /// FIMI file whose transactions each hold one class item
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    class_items: String,
    /// Training FIMI file for the majority-class default; defaults to --input
    #[arg(long)]
    train: Option<PathBuf>,
    /// CSV report path; printed to stdout when absent
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DiscretizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    header: bool,
    #[arg(long, default_value_t = 1.96, allow_hyphen_values = true)]
    over: f64,
    #[arg(long, default_value_t = -1.96, allow_hyphen_values = true)]
    under: f64,
    #[arg(long)]
    out: PathBuf,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) => 2,
            Error::OracleCapExceeded { .. } | Error::KindMismatch { .. } => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn flag_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => cmd_mine(a),
        Command::Query(a) => cmd_query(a),
        Command::Derive(a) => cmd_derive(a),
        Command::Regenerate(a) => cmd_regenerate(a),
        Command::Rules(a) => cmd_rules(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Discretize(a) => cmd_discretize(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_ids(s: &str) -> CliResult<Itemset> {
    let ids = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Item>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| flag_error(format!("bad item list {s:?}")))?;
    if ids.is_empty() {
        return Err(flag_error("item list is empty"));
    }
    Ok(ids)
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn write_manifest(m: &RunManifest, out: &Path, explicit: Option<&Path>) -> CliResult<()> {
    let path = explicit.map_or_else(|| manifest::default_path(out), Path::to_path_buf);
    m.write(&path).map_err(|e| io_error(&path, e))
}

fn digest(path: &Path) -> CliResult<InputFile> {
    InputFile::digest(path).map_err(|e| io_error(path, e))
}

fn load_rep(path: &Path) -> CliResult<MiningOutput> {
    Ok(MiningOutput::parse(&read_text(path)?)?)
}

fn expect_rep(out: MiningOutput) -> CliResult<reps::CondensedRepresentation> {
    match out {
        MiningOutput::Representation(r) => Ok(r),
        MiningOutput::Patterns(p) => Err(Error::KindMismatch {
            expected: "condensed".into(),
            found: p.scenario.name().to_uppercase(),
        }
        .into()),
    }
}

fn run_oracle(db: &TransactionDb, th: &Thresholds, scenario: Scenario, dot: Option<&Path>) -> CliResult<MiningOutput> {
    let lattice = Lattice::build(db)?;
    if let Some(path) = dot {
        write_text(path, &lattice.to_dot(th))?;
    }
    let f = lattice.families(th);
    let t = db.transaction_count() as u64;
    Ok(match scenario {
        Scenario::Fcp => MiningOutput::patterns(scenario, f.fcp, t, *th),
        Scenario::Rcp => MiningOutput::patterns(scenario, f.rcp, t, *th),
        Scenario::Rcpr => MiningOutput::condensed(scenario, f.mrcp, f.crcp, t, *th),
        Scenario::Rfccp => MiningOutput::condensed(scenario, f.fmcp, f.fccp, t, *th),
    })
}

fn run_miner(miner: MinerArg, db: &TransactionDb, th: &Thresholds, scenario: Scenario, workers: usize, dot: Option<&Path>) -> CliResult<MiningOutput> {
    Ok(match miner {
        MinerArg::Gmjp => mine_with(db, th, scenario, workers)?,
        MinerArg::Opt => mine_opt_with(db, th, scenario, workers)?,
        MinerArg::Oracle => run_oracle(db, th, scenario, dot)?,
    })
}

fn cmd_mine(a: MineArgs) -> CliResult<()> {
    let minsupp: MinSupport = a.minsupp.parse()?;
    let minbond = parse_minbond(&a.minbond)?;
    let scenario: Scenario = a.scenario.into();
    if a.workers == 0 {
        return Err(flag_error("--workers must be at least 1"));
    }
    if a.dot.is_some() && a.miner != MinerArg::Oracle {
        return Err(flag_error("--dot needs --miner oracle"));
    }

    let mut m = RunManifest::new("mine");
    let started = Instant::now();
    let db = TransactionDb::load_fimi(&a.input)?;
    m.inputs.push(digest(&a.input)?);
    m.time("load", started);
    let t = db.transaction_count() as u64;
    let th = Thresholds::new(minsupp.resolve(t)?, minbond)?;

    m.param("minsupp", &a.minsupp);
    m.param("minsupp_absolute", th.minsupp);
    m.param("minbond", fmt_ratio(&th.minbond));
    m.param("scenario", scenario);
    m.param(
        "miner",
        match a.miner {
            MinerArg::Gmjp => "gmjp",
            MinerArg::Opt => "opt",
            MinerArg::Oracle => "oracle",
        },
    );
    m.param("workers", a.workers);
    if a.miner == MinerArg::Oracle {
        m.param("oracle_cap", bondminer_core::oracle::oracle_cap());
        m.param("oracle_cap_env", ORACLE_CAP_ENV);
    }
    m.count("items", db.item_count());
    m.count("transactions", db.transaction_count());

    let started = Instant::now();
    let out = run_miner(a.miner, &db, &th, scenario, a.workers, a.dot.as_deref())?;
    m.time("mine", started);

    let started = Instant::now();
    write_text(&a.out, &out.to_file_string())?;
    m.outputs.push(a.out.clone());
    if let Some(dot) = &a.dot {
        m.outputs.push(dot.clone());
    }
    m.time("write", started);

    let mut summary = vec![format!("kind={}", out.kind_name())];
    match &out {
        MiningOutput::Patterns(p) => {
            m.count("patterns", p.records.len());
            summary.push(format!("patterns={}", p.records.len()));
        }
        MiningOutput::Representation(rep) => {
            let (min_label, min_count) = match rep.kind {
                RepresentationKind::Rfccp => ("generators", rep.generators.len()),
                _ => ("minimal", rep.minimal_part.len()),
            };
            m.count(min_label, min_count);
            m.count("closed", rep.closed_part.len());
            m.count("distinct", rep.distinct_count());
            summary.push(format!("{min_label}={min_count}"));
            summary.push(format!("closed={}", rep.closed_part.len()));
            summary.push(format!("distinct={}", rep.distinct_count()));
        }
    }

    if a.full_count {
        let started = Instant::now();
        let (label, full) = match &out {
            MiningOutput::Patterns(p) => (p.scenario.name(), p.records.len()),
            MiningOutput::Representation(rep) if rep.kind == RepresentationKind::Rcpr => {
                ("rcp", reps::regenerate_rcp(rep)?.len())
            }
            MiningOutput::Representation(_) => {
                let fcp = run_miner(a.miner, &db, &th, Scenario::Fcp, a.workers, None)?;
                ("fcp", fcp.records().len())
            }
        };
        m.time("full_count", started);
        m.count(&format!("full_{label}"), full);
        summary.push(format!("{label}={full}"));
        if let Some(rep) = out.representation() {
            if full > 0 {
                let rate = reps::compactness(rep, full)?;
                m.param("compactness", fmt_ratio(&rate));
                summary.push(format!(
                    "compactness={} ({:.2}%)",
                    fmt_ratio(&rate),
                    100.0 * *rate.numer() as f64 / *rate.denom() as f64
                ));
            }
        }
    }
    println!("{}", summary.join(" "));
    write_manifest(&m, &a.out, a.manifest.as_deref())
}

fn cmd_query(a: QueryArgs) -> CliResult<()> {
    let rep = expect_rep(load_rep(&a.rep)?)?;
    let itemset = parse_ids(&a.itemset)?;
    println!("{}", reps::answer(&rep, &itemset)?);
    Ok(())
}

fn cmd_derive(a: DeriveArgs) -> CliResult<()> {
    let rep = expect_rep(load_rep(&a.rep)?)?;
    let kind = match a.kind {
        DerivedKind::Mmaxcr => RepresentationKind::MMaxCr,
        DerivedKind::Minmcr => RepresentationKind::MinMcr,
        DerivedKind::Minmmaxcr => RepresentationKind::MinMMaxCr,
    };
    let derived = reps::derive(kind, &rep)?;
    let count = derived.distinct_count();
    write_text(&a.out, &MiningOutput::Representation(derived).to_file_string())?;
    let mut m = RunManifest::new("derive");
    m.inputs.push(digest(&a.rep)?);
    m.param("kind", kind);
    m.outputs.push(a.out.clone());
    m.count("distinct", count);
    println!("kind={kind} distinct={count}");
    write_manifest(&m, &a.out, None)
}

fn cmd_regenerate(a: RegenerateArgs) -> CliResult<()> {
    let rep = expect_rep(load_rep(&a.rep)?)?;
    let started = Instant::now();
    let rcp = reps::regenerate_rcp(&rep)?;
    let mut m = RunManifest::new("regenerate");
    m.time("regenerate", started);
    let n = rcp.len();
    let out = MiningOutput::patterns(Scenario::Rcp, rcp, rep.transaction_count, rep.thresholds);
    write_text(&a.out, &out.to_file_string())?;
    m.inputs.push(digest(&a.rep)?);
    m.outputs.push(a.out.clone());
    m.count("patterns", n);
    println!("kind=RCP patterns={n}");
    write_manifest(&m, &a.out, None)
}

fn parse_confidence(s: &str) -> CliResult<rules::Confidence> {
    parse_minbond(s).map_err(|_| flag_error(format!("bad minconf {s:?}")))
}

fn cmd_rules(a: RulesArgs) -> CliResult<()> {
    let minconf = parse_confidence(&a.minconf)?;
    let class_items = a.class_items.as_deref().map(parse_ids).transpose()?;
    let rep = expect_rep(load_rep(&a.rep)?)?;
    let pairing = match a.pairing {
        PairingArg::Containing => RulePairing::ContainingClosures,
        PairingArg::Own => RulePairing::OwnClosure,
    };
    let generic = rules::generate_generic_rules(&rep, minconf, pairing)?;
    let mut kept = if a.no_igb { generic.clone() } else { rules::filter_igb(&generic) };
    if let Some(classes) = &class_items {
        kept = rules::classification_rules(&kept, classes)?;
    }
    let mut buf = Vec::new();
    rules::write_rules(&kept, &mut buf).expect("writing to memory");
    fs::write(&a.out, buf).map_err(|e| io_error(&a.out, e))?;

    let exact = kept.iter().filter(|r| r.exact).count();
    let mut m = RunManifest::new("rules");
    m.inputs.push(digest(&a.rep)?);
    m.param("minconf", fmt_ratio(&minconf));
    m.param("igb", !a.no_igb);
    m.outputs.push(a.out.clone());
    m.count("generic", generic.len());
    m.count("rules", kept.len());
    m.count("exact", exact);
    m.count("approx", kept.len() - exact);
    println!("rules={} exact={} approx={}", kept.len(), exact, kept.len() - exact);
    if let Some(classes) = &class_items {
        for c in classes {
            let n = kept.iter().filter(|r| r.class_label == Some(*c)).count();
            m.count(&format!("class_{c}"), n);
            println!("class={c} rules={n}");
        }
    }
    write_manifest(&m, &a.out, None)
}

fn cmd_classify(a: ClassifyArgs) -> CliResult<()> {
    let classes = parse_ids(&a.class_items)?;
    let rule_set = rules::parse_rules(&read_text(&a.rules)?)?;
    let test = TransactionDb::load_fimi(&a.input)?;
    let (labeled, skipped) = rules::split_labeled(&test.transactions(), &classes);
    if skipped > 0 {
        log::warn!("{skipped} transactions without exactly one class item were skipped");
    }
    let train_labels = match &a.train {
        Some(p) => rules::split_labeled(&TransactionDb::load_fimi(p)?.transactions(), &classes).0,
        None => labeled.clone(),
    };
    let default = rules::majority_label(train_labels.iter().map(|(_, l)| *l))
        .ok_or_else(|| Failure {
            code: 3,
            message: "no labelled transactions".into(),
        })?;
    let eval = rules::evaluate(&rule_set, &labeled, default);
    let mut csv = Vec::new();
    eval.write_csv(&mut csv).expect("writing to memory");
    match &a.report {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| io_error(path, e))?;
            let mut m = RunManifest::new("classify");
            m.inputs.push(digest(&a.rules)?);
            m.inputs.push(digest(&a.input)?);
            m.param("default_label", default);
            m.outputs.push(path.clone());
            m.count("classified", eval.total);
            m.count("correct", eval.correct);
            m.count("skipped", skipped);
            write_manifest(&m, path, None)?;
            println!("accuracy={}", fmt_ratio(&eval.accuracy()));
        }
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    Ok(())
}

fn cmd_discretize(a: DiscretizeArgs) -> CliResult<()> {
    let matrix = read_matrix_csv(&a.input, a.header)?;
    let cfg = DiscretizationConfig {
        over_cutoff: a.over,
        under_cutoff: a.under,
        item_offset: None,
    };
    let out = discretize(&matrix, &cfg)?;
    let mut buf = Vec::new();
    out.db.write_fimi(&mut buf).expect("writing to memory");
    fs::write(&a.out, buf).map_err(|e| io_error(&a.out, e))?;
    let mut m = RunManifest::new("discretize");
    m.inputs.push(digest(&a.input)?);
    m.param("over_cutoff", a.over);
    m.param("under_cutoff", a.under);
    m.param("std", "population");
    m.outputs.push(a.out.clone());
    m.count("transactions", out.db.transaction_count());
    m.count("dropped_rows", out.dropped_rows);
    m.count("skipped_columns", out.skipped_columns.len());
    println!(
        "transactions={} dropped_rows={} skipped_columns={:?}",
        out.db.transaction_count(),
        out.dropped_rows,
        out.skipped_columns
    );
    write_manifest(&m, &a.out, None)
}
