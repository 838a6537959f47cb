//! The `nl2domain` command line: compile, serve, suggest and eval.

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nl2domain::config::{ConceptNetMode, Config, CONFIG_ENV};
use nl2domain::domain::DomainBundle;
use nl2domain::eval::{load_gold, parse_gold, score, BUNDLED_GOLD};
use nl2domain::pipeline::{Category, Compiler, Report, SentenceOutcome};

use crate::api::{router, AppState};
use crate::session::{emit, SessionStore, Target};
use crate::spellcheck::Dictionary;

#[derive(Debug, Parser)]
#[command(name = "nl2domain", version, about = "Compile character descriptions into planning domains")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Configuration file (TOML).
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Word-embedding table (GloVe text format).
    #[arg(long, global = true)]
    pub embeddings: Option<PathBuf>,
    /// Minimum similarity for matching a condition to a known state.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Affordance and affect pattern catalog.
    #[arg(long, global = true)]
    pub patterns: Option<PathBuf>,
    /// ConceptNet fixture file to answer queries from, without network.
    #[arg(long, global = true)]
    pub offline_conceptnet: Option<PathBuf>,
    /// Refuse to add new states while matching conditions.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetArg {
    Sexpr,
    Pddl,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Sexpr => Target::Sexpr,
            TargetArg::Pddl => Target::Pddl,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CategoryArg {
    State,
    Affordance,
    Affect,
}

impl From<CategoryArg> for Category {
    fn from(c: CategoryArg) -> Self {
        match c {
            CategoryArg::State => Category::State,
            CategoryArg::Affordance => Category::Affordance,
            CategoryArg::Affect => Category::Affect,
        }
    }
}

#[derive(Debug, Args)]
pub struct Input {
    /// Text file to read, or `-` for standard input.
    pub input: PathBuf,
    /// CoNLL-U parse of the input, used instead of the built-in parser.
    #[arg(long)]
    pub conllu: Option<PathBuf>,
    /// Treat every sentence as this category instead of classifying it.
    #[arg(long, value_enum)]
    pub category: Option<CategoryArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile text into domain code.
    Compile {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "sexpr")]
        target: TargetArg,
        /// Write the code here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Directory for persisted sessions; in memory when omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Spell-check word list (`word<TAB>frequency` per line).
        #[arg(long)]
        dictionary: Option<PathBuf>,
    },
    /// Compile text and print the pending suggestions.
    Suggest {
        #[command(flatten)]
        input: Input,
        /// Print JSON instead of one line per suggestion.
        #[arg(long)]
        json: bool,
    },
    /// Score the compiler on a gold corpus.
    Eval {
        /// Corpus file; the bundled corpus when omitted.
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        min_recall: f64,
        #[arg(long, default_value_t = 1.0)]
        min_accuracy: f64,
        #[arg(long)]
        json: bool,
    },
}

/// Failure of a command, reported on standard error.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

impl Common {
    /// The configuration file (or defaults) with command-line overrides.
    pub fn config(&self) -> Result<Config, CliError> {
        let mut config = match &self.config {
            Some(p) => Config::from_file(p)?,
            None => Config::default(),
        };
        if let Some(p) = &self.embeddings {
            config.embeddings = Some(p.clone());
        }
        if let Some(t) = self.threshold {
            config.matcher_threshold = t;
        }
        if let Some(p) = &self.patterns {
            config.patterns = Some(p.clone());
        }
        if let Some(p) = &self.offline_conceptnet {
            config.offline_conceptnet = Some(p.clone());
            config.conceptnet_mode = ConceptNetMode::Replay;
        }
        config.strict |= self.strict;
        config.check()?;
        Ok(config)
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
    }
}

fn compile_input(compiler: &Compiler, input: &Input) -> Result<(DomainBundle, Report), CliError> {
    let text = read_input(&input.input)?;
    let conllu = match &input.conllu {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let mut bundle = compiler.new_bundle();
    let report = compiler.submit(&mut bundle, &text, input.category.map(Into::into), conllu.as_deref());
    if let Some(e) = report.errors.first() {
        return Err(CliError(e.clone()));
    }
    Ok((bundle, report))
}

fn print_report(report: &Report) {
    for s in &report.sentences {
        let at = format!("line {}", s.provenance.line);
        match &s.outcome {
            SentenceOutcome::Failed { error } => eprintln!("{at}: error: {error}"),
            _ => {
                for w in &s.warnings {
                    eprintln!("{at}: warning: {w}");
                }
            }
        }
    }
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let config = cli.common.config()?;
    match cli.command {
        Command::Compile { input, target, output } => {
            let compiler = Compiler::from_config(config)?;
            let (bundle, report) = compile_input(&compiler, &input)?;
            print_report(&report);
            let code = emit(&bundle, target.into())?;
            match output {
                Some(p) => std::fs::write(&p, code).map_err(|e| CliError(format!("{}: {e}", p.display())))?,
                None => print!("{code}"),
            }
            let failed = report.sentences.iter().any(|s| s.failed());
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Suggest { input, json } => {
            let compiler = Compiler::from_config(config)?;
            let (bundle, report) = compile_input(&compiler, &input)?;
            print_report(&report);
            let client = compiler.conceptnet_client()?;
            let list = compiler.suggestions(&bundle, Some(client.as_ref()))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&list)?);
            } else {
                for s in &list {
                    println!("{:.3}\t{}\t{}", s.score, s.id, s.prompt);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { corpus, min_recall, min_accuracy, json } => {
            let cases = match &corpus {
                Some(p) => load_gold(p)?,
                None => parse_gold(BUNDLED_GOLD, Path::new("."))?,
            };
            let compiler = Compiler::from_config(config)?;
            let report = score(&cases, &compiler);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
            let pass = report.state_recall() >= min_recall && report.condition_accuracy() >= min_accuracy;
            if !pass {
                eprintln!(
                    "below threshold: state recall {:.4} (min {min_recall}), condition accuracy {:.4} (min {min_accuracy})",
                    report.state_recall(),
                    report.condition_accuracy()
                );
            }
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Serve { addr, data, dictionary } => {
            let dictionary = match dictionary {
                Some(p) => Dictionary::parse(&std::fs::read_to_string(&p)?)?,
                None => Dictionary::bundled(),
            };
            let store = SessionStore::new(config, data)?;
            let state = AppState { store: Arc::new(store), dictionary: Arc::new(dictionary) };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(&addr).await?;
                log::info!("listening on {}", listener.local_addr()?);
                eprintln!("listening on {}", listener.local_addr()?);
                axum::serve(listener, router(state))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await
            })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
