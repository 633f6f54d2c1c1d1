mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paes_core::harness::RunConfig;

#[derive(Parser)]
#[command(name = "paes", version, about = "Cross-prompt automated essay scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-prompt counts, mean length and extreme-score counts.
    Stats(RunArgs),
    /// Prompt-independent feature extraction.
    Features {
        #[command(subcommand)]
        action: FeaturesAction,
    },
    /// Train on every prompt except --target-prompt and score it.
    Train(RunArgs),
    /// Score essays with a saved checkpoint.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Prompt to score; defaults to the checkpoint's held-out prompt.
        #[arg(long)]
        prompt: Option<u8>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prompt-wise cross-validation over all prompts in the data.
    Cv {
        /// Extra seeds run after --seed; the report adds their mean.
        #[arg(long, default_value_t = 0)]
        extra_seeds: u64,
        /// Comma-separated fractions for the target-normalization curve.
        #[arg(long, value_delimiter = ',')]
        curve: Vec<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Quadratic weighted kappa of a two-column CSV (human, predicted).
    Qwk {
        file: PathBuf,
        /// Score range as MIN:MAX.
        #[arg(long, conflicts_with = "prompt", required_unless_present = "prompt")]
        range: Option<String>,
        /// Take the score range from an ASAP prompt.
        #[arg(long)]
        prompt: Option<u8>,
    },
    /// Tokenize, split and POS-tag text.
    PosTag {
        /// Text file to tag; reads stdin when absent and --data is not given.
        input: Option<PathBuf>,
        /// Tag every essay of a dataset instead, writing an id-keyed corpus.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FeaturesAction {
    /// Write raw and set-wise normalized feature CSVs.
    Extract(RunArgs),
}

/// Flags shared by the run-oriented subcommands; each overrides --config.
#[derive(Args, Clone, Default)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<String>,
    #[arg(long)]
    target_prompt: Option<String>,
    /// pos, word, or none for the features-only model.
    #[arg(long)]
    mode: Option<String>,
    /// on or off.
    #[arg(long)]
    features: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    epochs: Option<String>,
    #[arg(long)]
    batch: Option<String>,
    #[arg(long)]
    subsample: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    pretagged: Option<String>,
    /// Further key=value settings, as in a config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    extra: Vec<String>,
}

impl RunArgs {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("data", &self.data),
            ("target_prompt", &self.target_prompt),
            ("mode", &self.mode),
            ("features", &self.features),
            ("seed", &self.seed),
            ("epochs", &self.epochs),
            ("batch", &self.batch),
            ("subsample", &self.subsample),
            ("out", &self.out),
            ("pretagged", &self.pretagged),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                c.set(key, v)?;
            }
        }
        for kv in &self.extra {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got `{kv}`"))?;
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Stats(run) => run.config().and_then(|c| commands::stats(&c)),
        Command::Features {
            action: FeaturesAction::Extract(run),
        } => run.config().and_then(|c| commands::features_extract(&c)),
        Command::Train(run) => run.config().and_then(|c| commands::train(&c)),
        Command::Eval {
            checkpoint,
            prompt,
            run,
        } => run
            .config()
            .and_then(|c| commands::eval(&c, &checkpoint, prompt)),
        Command::Cv {
            extra_seeds,
            curve,
            run,
        } => run
            .config()
            .and_then(|c| commands::cv(&c, extra_seeds, &curve)),
        Command::Qwk {
            file,
            range,
            prompt,
        } => commands::qwk(&file, range.as_deref(), prompt),
        Command::PosTag {
            input,
            data,
            output,
        } => commands::pos_tag(input.as_deref(), data.as_deref(), output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
