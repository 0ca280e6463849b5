//! `mdcu` command-line front end. Every subcommand loads its inputs, hands
//! them to the library and writes the resulting report.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use log::{warn, LevelFilter};
use mdcu::experiment::{classic_all, compare, normalize_all, score_run, sweep, TopicSet};
use mdcu::io::{read_corpus, read_run, write_report, Format, ReportSet};
use mdcu::{ideal_ranking, score_ranking, EvalConfig, IdealRanking, RankedList, RelevanceCorpus};

#[derive(Parser)]
#[command(
    name = "mdcu",
    version,
    about = "Multidimensional cumulated utility evaluation of ranked results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score each topic of a run rank by rank
    Score {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, required = true)]
        run: PathBuf,
        #[command(flatten)]
        discounts: Discounts,
        #[command(flatten)]
        output: Output,
    },
    /// Build the greedy ideal ranking of each corpus
    Ideal {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        discounts: Discounts,
        #[command(flatten)]
        output: Output,
    },
    /// Search, ideal and normalized gain vectors of a run
    Normalize {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, required = true)]
        run: PathBuf,
        #[command(flatten)]
        discounts: Discounts,
        #[command(flatten)]
        output: Output,
    },
    /// Mono-dimensional baseline: CG, P@rank, DCG, nDCG, AP
    Classic {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, required = true)]
        run: PathBuf,
        /// 1-based theme numbers to collapse over (default: all)
        #[arg(long, value_delimiter = ',')]
        themes: Option<Vec<usize>>,
        /// Average relevance a document needs to count as relevant
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0])]
        threshold: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        dcg_base: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Score a run once per overlap base and emit long-form curves
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, required = true)]
        run: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        b_values: Vec<f64>,
        /// 1-based theme numbers to emit per-theme curves for (default: all)
        #[arg(long, value_delimiter = ',')]
        themes: Option<Vec<usize>>,
        #[command(flatten)]
        discounts: Discounts,
        #[command(flatten)]
        output: Output,
    },
    /// Gain and normalized gain curves of several runs side by side
    Compare {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, required = true)]
        run: Vec<PathBuf>,
        #[command(flatten)]
        discounts: Discounts,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Inputs {
    /// Topic manifest (JSON); pair each with a --corpus, in order
    #[arg(long, required = true)]
    manifest: Vec<PathBuf>,
    /// Relevance corpus (CSV)
    #[arg(long, required = true)]
    corpus: Vec<PathBuf>,
    /// Rank cutoff (default: run length)
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct Discounts {
    /// Overlap log base (default: the manifest's, else 2)
    #[arg(long)]
    b: Option<f64>,
    /// Per-theme overlap bases, comma separated
    #[arg(long, value_delimiter = ',')]
    per_theme_b: Option<Vec<f64>>,
    #[arg(long)]
    no_overlap: bool,
    #[arg(long)]
    no_attributes: bool,
    /// Enable the rank discount, optionally with its log base
    #[arg(long, value_name = "BASE", num_args = 0..=1, default_missing_value = "2")]
    rank_discount: Option<f64>,
}

#[derive(Args)]
struct Output {
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, msg).exit()
}

impl Discounts {
    /// Flag-level config with the overlap base still unresolved.
    fn partial(&self) -> EvalConfig {
        let defaults = EvalConfig::default();
        EvalConfig {
            b: self.b.unwrap_or(defaults.b),
            per_theme_b: self.per_theme_b.clone(),
            overlap_on: !self.no_overlap,
            attributes_on: !self.no_attributes,
            rank_discount_on: self.rank_discount.is_some(),
            rank_discount_base: self.rank_discount.unwrap_or(defaults.rank_discount_base),
        }
    }

    fn check(&self) {
        if let Err(e) = self.partial().validate() {
            usage_error(e);
        }
    }

    /// Fills unset overlap bases from the manifests.
    fn resolve(&self, topics: &TopicSet) -> Result<EvalConfig> {
        let mut cfg = self.partial();
        let manifests: Vec<_> = topics.iter().map(RelevanceCorpus::manifest).collect();
        if self.b.is_none() {
            if let Some(first) = manifests.first() {
                if manifests
                    .iter()
                    .any(|m| m.overlap_base_default != first.overlap_base_default)
                {
                    bail!("manifests disagree on overlap_base_default; pass --b");
                }
                cfg.b = first.overlap_base_default;
            }
        }
        if self.per_theme_b.is_none() {
            if let Some(first) = manifests.first() {
                if manifests.iter().any(|m| m.per_theme_b != first.per_theme_b) {
                    bail!("manifests disagree on per_theme_b; pass --per-theme-b");
                }
                cfg.per_theme_b = first.per_theme_b.clone();
            }
        }
        Ok(cfg)
    }
}

impl Inputs {
    fn check(&self) {
        if self.manifest.len() != self.corpus.len() {
            usage_error(format!(
                "{} --manifest but {} --corpus; give one manifest per corpus",
                self.manifest.len(),
                self.corpus.len()
            ));
        }
        if self.k == Some(0) {
            usage_error("--k must be at least 1");
        }
    }

    fn load(&self) -> Result<TopicSet> {
        let corpora = self
            .manifest
            .iter()
            .zip(&self.corpus)
            .map(|(m, c)| {
                let loaded = read_corpus(m, c)?;
                report_warnings(&loaded.warnings);
                Ok(loaded.value)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TopicSet::new(corpora)?)
    }

    fn truncate(&self, lists: Vec<RankedList>) -> Vec<RankedList> {
        match self.k {
            Some(k) => lists.iter().map(|l| l.truncated(k)).collect(),
            None => lists,
        }
    }
}

impl Output {
    fn emit(&self, set: ReportSet<'_>) -> Result<()> {
        let text = write_report(set, self.format.into())?;
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn report_warnings(warnings: &[String]) {
    for w in warnings {
        warn!("{w}");
    }
}

fn load_run(path: &Path) -> Result<Vec<RankedList>> {
    let loaded = read_run(path)?;
    report_warnings(&loaded.warnings);
    Ok(loaded.value)
}

fn theme_set(themes: &Option<Vec<usize>>) -> Option<BTreeSet<usize>> {
    themes.as_ref().map(|list| {
        if list.is_empty() || list.contains(&0) {
            usage_error("--themes takes 1-based theme numbers");
        }
        list.iter().map(|t| t - 1).collect()
    })
}

/// Run names for `compare`: file stems, suffixed when they collide.
fn run_names(paths: &[PathBuf]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    paths
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
            let mut name = stem.clone();
            let mut n = 2;
            while !seen.insert(name.clone()) {
                name = format!("{stem}-{n}");
                n += 1;
            }
            name
        })
        .collect()
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Score {
            inputs,
            run,
            discounts,
            output,
        } => {
            inputs.check();
            discounts.check();
            let topics = inputs.load()?;
            let cfg = discounts.resolve(&topics)?;
            let lists = inputs.truncate(load_run(&run)?);
            let reports = score_run(&lists, &topics, &cfg)?;
            output.emit(ReportSet::Scores(&reports))
        }
        Command::Ideal {
            inputs,
            discounts,
            output,
        } => {
            inputs.check();
            discounts.check();
            let topics = inputs.load()?;
            let cfg = discounts.resolve(&topics)?;
            let ideals = topics
                .iter()
                .map(|corpus| {
                    let ideal = ideal_ranking(corpus, &cfg)?;
                    Ok(match inputs.k {
                        Some(k) if k < ideal.ordering.len() => {
                            let list = ideal.as_ranked_list().truncated(k);
                            IdealRanking {
                                report: score_ranking(&list, corpus, &cfg)?,
                                ordering: list.entries().to_vec(),
                            }
                        }
                        _ => ideal,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            output.emit(ReportSet::Ideals(&ideals))
        }
        Command::Normalize {
            inputs,
            run,
            discounts,
            output,
        } => {
            inputs.check();
            discounts.check();
            let topics = inputs.load()?;
            let cfg = discounts.resolve(&topics)?;
            let runs = normalize_all(&load_run(&run)?, &topics, &cfg, inputs.k)?;
            output.emit(ReportSet::Normalized {
                runs: &runs,
                config: &cfg,
            })
        }
        Command::Classic {
            inputs,
            run,
            themes,
            threshold,
            dcg_base,
            output,
        } => {
            inputs.check();
            let themes = theme_set(&themes);
            if dcg_base.is_nan() || dcg_base <= 1.0 {
                usage_error(format!("--dcg-base {dcg_base} must be > 1"));
            }
            if let Some(t) = threshold.iter().find(|t| t.is_nan() || **t < 0.0) {
                usage_error(format!("--threshold {t} must be >= 0"));
            }
            let topics = inputs.load()?;
            let lists = inputs.truncate(load_run(&run)?);
            let reports = classic_all(&lists, &topics, themes.as_ref(), &threshold, dcg_base)?;
            output.emit(ReportSet::Classic(&reports))
        }
        Command::Sweep {
            inputs,
            run,
            b_values,
            themes,
            discounts,
            output,
        } => {
            inputs.check();
            if discounts.b.is_some() {
                usage_error("--b and --b-values cannot be combined");
            }
            discounts.check();
            if let Some(b) = b_values.iter().find(|b| b.is_nan() || **b <= 1.0) {
                usage_error(format!("--b-values entry {b} must be > 1"));
            }
            let themes = theme_set(&themes);
            let topics = inputs.load()?;
            let cfg = discounts.resolve(&topics)?;
            let points = sweep(&load_run(&run)?, &topics, &cfg, &b_values, themes.as_ref(), inputs.k)?;
            output.emit(ReportSet::Series {
                points: &points,
                group_label: "b",
            })
        }
        Command::Compare {
            inputs,
            run,
            discounts,
            output,
        } => {
            inputs.check();
            discounts.check();
            let topics = inputs.load()?;
            let cfg = discounts.resolve(&topics)?;
            let runs = run_names(&run)
                .into_iter()
                .zip(&run)
                .map(|(name, path)| Ok((name, load_run(path)?)))
                .collect::<Result<Vec<_>>>()?;
            let points = compare(&runs, &topics, &cfg, inputs.k)?;
            output.emit(ReportSet::Series {
                points: &points,
                group_label: "run",
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(LevelFilter::Warn)
        .format(|buf, record| writeln!(buf, "{}: {}", record.level().as_str().to_lowercase(), record.args()))
        .init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
