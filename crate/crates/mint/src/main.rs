use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mint::cli::{
    cmd_decode, cmd_score, cmd_tradeoff, expand_configs, join_scores_with_factuality,
    load_records, read_factuality, read_points_csv, read_score_csv, CliError, DecodeOptions,
    Outcome, ScoreOptions, TradeoffOptions,
};
use mint::lm::NgramModel;
use mint::nac::{NacConfig, NacMode};
use mint::text::TokenizerOptions;

#[derive(Parser)]
#[command(
    name = "mint",
    version,
    about = "Measure summary abstractiveness, control it at decoding time, \
             and quantify the abstractiveness-factuality tradeoff"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score each record's summary against its source, emitting per-record
    /// metric rows and a final mean row as CSV.
    Score {
        /// Input records, one JSON object per line.
        input: PathBuf,
        /// Output CSV path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Truncate sources to this many words before scoring.
        #[arg(long)]
        max_input_words: Option<usize>,
        /// Worker threads for per-record scoring (0 = automatic).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Decode a summary for every record under the configured constraints.
    Decode {
        /// Input records, one JSON object per line.
        input: PathBuf,
        /// Trained model file (see `mint train`).
        #[arg(long)]
        model: PathBuf,
        /// Output CSV path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Constraint mode.
        #[arg(long, default_value = "off")]
        mode: NacMode,
        /// Half-life fragment length; repeat for one decode per value.
        #[arg(long = "h")]
        h: Vec<f64>,
        /// Exponent of the discount curve.
        #[arg(long, default_value_t = 2.0)]
        exponent: f64,
        #[arg(long, default_value_t = 4)]
        beam_size: usize,
        #[arg(long, default_value_t = 1)]
        min_len: usize,
        #[arg(long, default_value_t = 30)]
        max_len: usize,
        /// Length-normalization exponent for the model term.
        #[arg(long)]
        length_norm: Option<f64>,
        /// Truncate sources to this many words before decoding.
        #[arg(long)]
        max_input_words: Option<usize>,
        /// Worker threads for per-record decoding (0 = automatic).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Fit trend lines and mu-scores over (abstractiveness, factuality)
    /// points, either given directly or joined from score output.
    Tradeoff {
        /// Points CSV with columns series,label,abstractiveness,factuality.
        #[arg(long, conflicts_with_all = ["scores", "factuality"])]
        points: Option<PathBuf>,
        /// Score CSV produced by `mint score`; requires --factuality.
        #[arg(long, requires = "factuality")]
        scores: Option<PathBuf>,
        /// Factuality per record id: a CSV with id,factuality columns or a
        /// record file with factuality fields.
        #[arg(long, requires = "scores")]
        factuality: Option<PathBuf>,
        /// Series name for joined score/factuality input.
        #[arg(long, default_value = "corpus")]
        series: String,
        /// Output CSV path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Factuality weight in the mu-score.
        #[arg(long, default_value_t = 2.0)]
        phi: f64,
        /// Also write a scatter plot with trend lines to this SVG path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Train the built-in n-gram scoring model on a record file (summaries
    /// when present, sources otherwise) and save it.
    Train {
        /// Input records, one JSON object per line.
        input: PathBuf,
        /// Model output path.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 0.1)]
        smoothing: f64,
        /// Weight of the copy component during decoding.
        #[arg(long, default_value_t = 0.5)]
        copy_alpha: f64,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            use clap::error::ErrorKind;
            let code: u8 = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args.command) {
        Ok(outcome) if outcome.errors > 0 => {
            eprintln!("completed with {} record error(s)", outcome.errors);
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Score {
            input,
            output,
            max_input_words,
            workers,
        } => {
            let records = load_records(&input)?;
            let opts = ScoreOptions {
                max_input_words,
                workers,
                tokenizer: TokenizerOptions::default(),
            };
            with_output(output.as_deref(), |out| cmd_score(&records, &opts, out))
        }
        Command::Decode {
            input,
            model,
            output,
            mode,
            h,
            exponent,
            beam_size,
            min_len,
            max_len,
            length_norm,
            max_input_words,
            workers,
        } => {
            let records = load_records(&input)?;
            let model = NgramModel::load(&model)?;
            let base = NacConfig {
                mode: NacMode::Off,
                half_life: 2.0,
                exponent,
                beam_size,
                min_len,
                max_len,
                length_norm,
            };
            let opts = DecodeOptions {
                configs: expand_configs(&base, mode, &h),
                max_input_words,
                workers,
                tokenizer: TokenizerOptions::default(),
            };
            with_output(output.as_deref(), |out| {
                cmd_decode(&records, &model, &opts, out)
            })
        }
        Command::Tradeoff {
            points,
            scores,
            factuality,
            series,
            output,
            phi,
            svg,
        } => {
            let series_data = match (points, scores, factuality) {
                (Some(points), None, None) => {
                    let file = open_data(&points)?;
                    read_points_csv(file)?
                }
                (None, Some(scores), Some(factuality)) => {
                    let score_rows = read_score_csv(open_data(&scores)?)?;
                    let fact_rows = read_factuality(open_data(&factuality)?)?;
                    join_scores_with_factuality(&series, &score_rows, &fact_rows)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "pass either --points or both --scores and --factuality".into(),
                    ))
                }
            };
            let opts = TradeoffOptions { phi };
            let mut svg_file = match &svg {
                Some(path) => Some(std::fs::File::create(path)?),
                None => None,
            };
            with_output(output.as_deref(), |out| {
                cmd_tradeoff(
                    &series_data,
                    &opts,
                    out,
                    svg_file.as_mut().map(|f| f as &mut dyn Write),
                )
            })
        }
        Command::Train {
            input,
            output,
            order,
            smoothing,
            copy_alpha,
        } => {
            let records = load_records(&input)?;
            let tokenizer = TokenizerOptions::default();
            let corpus: Vec<_> = records
                .iter()
                .map(|r| {
                    r.summary_tokens(&tokenizer)
                        .unwrap_or_else(|| r.source_tokens(&tokenizer, None))
                })
                .collect();
            let model = NgramModel::train(&corpus, order, smoothing)
                .map_err(|e| CliError::Data(e.to_string()))?
                .with_copy_alpha(copy_alpha)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            model.save(&output)?;
            Ok(Outcome::default())
        }
    }
}

fn open_data(path: &std::path::Path) -> Result<std::fs::File, CliError> {
    std::fs::File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))
}

fn with_output(
    path: Option<&std::path::Path>,
    f: impl FnOnce(&mut dyn Write) -> Result<Outcome, CliError>,
) -> Result<Outcome, CliError> {
    match path {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            let mut writer = std::io::BufWriter::new(file);
            let outcome = f(&mut writer)?;
            writer.flush()?;
            Ok(outcome)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}
