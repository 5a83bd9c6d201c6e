//! `textcorr`: build resources, corrupt corpora, correct text and
//! score the results.
//!
//! Exit codes: 0 success, 2 configuration or parse problem, 3 I/O
//! failure, 4 token alignment mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use textcorr_core::error::read_utf8;
use textcorr_core::evaluate::{consistency_check, count_outcomes};
use textcorr_core::inject::{format_ten_per_line, inject, inject_with_ops, EditOp};
use textcorr_core::lexicon::{build_lexicon, LexiconLabel, LexiconSet};
use textcorr_core::ngram::{build_ngram_model, NGramModel, NGramUnit};
use textcorr_core::normalize::AbbrevTable;
use textcorr_core::pipeline::{
    corrections_to_tsv, detections_from_tsv, detections_to_tsv, run_correction, token_lines,
    token_lines_from_file, Resources,
};
use textcorr_core::tagger::{parse_tagged_sentences, TaggerModel};
use textcorr_core::{Error, Mode};

#[derive(Parser)]
#[command(name = "textcorr", version, about = "Automatic text error correction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a word list into a lexicon file (dedup, NFC, lowercase).
    BuildLexicon {
        /// Input word list, one word per line.
        input: PathBuf,
        /// Output lexicon file.
        output: PathBuf,
    },
    /// Count word or tag n-grams of a corpus into a model file.
    BuildLm {
        /// Corpus file; n-grams are counted per line.
        corpus: PathBuf,
        /// Output model file.
        output: PathBuf,
        /// N-gram order (2 or 3).
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Unit: word or tag.
        #[arg(long, default_value = "word")]
        unit: String,
    },
    /// Train the transformation-based tagger from a word/TAG corpus.
    TrainTagger {
        /// Annotated corpus, one sentence per line.
        corpus: PathBuf,
        /// Output model file.
        output: PathBuf,
        /// Maximum number of rules to learn.
        #[arg(long, default_value_t = 200)]
        max_rules: usize,
        /// Minimum net errors a rule must fix to be accepted.
        #[arg(long, default_value_t = 1)]
        min_gain: usize,
    },
    /// Reflow a text to ten words per line and plant one seeded error per line.
    Inject {
        input: PathBuf,
        output: PathBuf,
        /// RNG seed; identical seeds reproduce identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the injection log (TSV) here.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Write the reflowed, uncorrupted text here.
        #[arg(long)]
        gold_out: Option<PathBuf>,
        /// Draw from all seven edit operations instead of the
        /// insertion/deletion/substitution simulation set.
        #[arg(long)]
        extended: bool,
    },
    /// Detect and correct errors in a text.
    Correct(CorrectArgs),
    /// Score a corrected text against the gold and corrupted versions.
    Evaluate {
        gold: PathBuf,
        corrupted: PathBuf,
        corrected: PathBuf,
        /// Detections dump produced by `correct --dump-detections`.
        detections: PathBuf,
        /// Report output path.
        report: PathBuf,
        /// Write the report as JSON instead of key=value lines.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CorrectArgs {
    input: PathBuf,
    output: PathBuf,
    /// paec (POS-tagged) or maec (general lexicon only).
    #[arg(long, default_value = "maec")]
    mode: String,
    /// Directory holding lex.<label>.txt files.
    #[arg(long)]
    lexicon_dir: PathBuf,
    /// Word bigram model file.
    #[arg(long)]
    lm_bigram: PathBuf,
    /// Optional word trigram model file.
    #[arg(long)]
    lm_trigram: Option<PathBuf>,
    /// Tagger model file (required for paec).
    #[arg(long)]
    tagger: Option<PathBuf>,
    /// Abbreviation table file.
    #[arg(long)]
    abbrev: Option<PathBuf>,
    /// Fixed edit-distance budget; default is 2 for words of four or
    /// more characters and 1 otherwise.
    #[arg(long)]
    max_ed: Option<usize>,
    /// Tag bigram model; unseen tag pairs then count as unseen bigrams
    /// during detection (never the other way around).
    #[arg(long)]
    use_tag_lm: Option<PathBuf>,
    /// Dump detections as line<TAB>token<TAB>word.
    #[arg(long)]
    dump_detections: Option<PathBuf>,
    /// Dump corrections as line<TAB>token<TAB>original<TAB>replacement.
    #[arg(long)]
    dump_corrections: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Decode { .. } | Error::Parse { .. } | Error::Config(_) | Error::Record(_) => 2,
        Error::Io(_) => 3,
        Error::Alignment { .. } => 4,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(Error::Io)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::BuildLexicon { input, output } => {
            let text = read_utf8(&input)?;
            let lexicon = build_lexicon(text.lines(), LexiconLabel::General)?;
            lexicon.save(&output)?;
            eprintln!("{} words -> {}", lexicon.len(), output.display());
            Ok(())
        }
        Command::BuildLm {
            corpus,
            output,
            order,
            unit,
        } => {
            let unit: NGramUnit = unit.parse().map_err(Error::Config)?;
            let lines = token_lines_from_file(&corpus)?;
            let model = build_ngram_model(&lines, order, unit)?;
            model.save(&output)?;
            eprintln!(
                "{} {}-grams ({} total) -> {}",
                model.len(),
                model.order(),
                model.total_count(),
                output.display()
            );
            Ok(())
        }
        Command::TrainTagger {
            corpus,
            output,
            max_rules,
            min_gain,
        } => {
            let text = read_utf8(&corpus)?;
            let sentences = parse_tagged_sentences(&text, &corpus.display().to_string())?;
            if sentences.is_empty() {
                return Err(Error::Config(format!(
                    "{}: corpus has no sentences",
                    corpus.display()
                )));
            }
            if min_gain < 1 {
                return Err(Error::Config("min-gain must be at least 1".to_string()));
            }
            let model = TaggerModel::train(&sentences, max_rules, min_gain);
            println!(
                "initial errors: {}",
                model.training_errors_with_rules(&sentences, 0)
            );
            for (idx, rule) in model.rules.iter().enumerate() {
                println!(
                    "rule {}: {} -> errors {}",
                    idx + 1,
                    rule,
                    model.training_errors_with_rules(&sentences, idx + 1)
                );
            }
            model.save(&output)?;
            Ok(())
        }
        Command::Inject {
            input,
            output,
            seed,
            log,
            gold_out,
            extended,
        } => {
            let text = read_utf8(&input)?;
            let formatted = format_ten_per_line(&text);
            let (mutated, injection_log) = if extended {
                inject_with_ops(&formatted, seed, &EditOp::ALL)
            } else {
                inject(&formatted, seed)
            };
            if let Some(path) = gold_out {
                write_file(&path, &formatted)?;
            }
            write_file(&output, &mutated)?;
            if let Some(path) = log {
                write_file(&path, &injection_log.to_tsv())?;
            }
            eprintln!(
                "{} errors planted over {} lines",
                injection_log.entries.len(),
                formatted.lines().count()
            );
            Ok(())
        }
        Command::Correct(args) => {
            let mode: Mode = args.mode.parse().map_err(Error::Config)?;
            if mode == Mode::Paec && args.tagger.is_none() {
                return Err(Error::Config("paec mode requires --tagger".to_string()));
            }
            let lexicons = LexiconSet::load_dir(&args.lexicon_dir, mode)?;
            let resources = Resources {
                lexicons,
                word_bigrams: NGramModel::load(&args.lm_bigram)?,
                word_trigrams: args
                    .lm_trigram
                    .as_deref()
                    .map(NGramModel::load)
                    .transpose()?,
                tag_bigrams: args
                    .use_tag_lm
                    .as_deref()
                    .map(NGramModel::load)
                    .transpose()?,
                tagger: args.tagger.as_deref().map(TaggerModel::load).transpose()?,
                abbrev: args
                    .abbrev
                    .as_deref()
                    .map(AbbrevTable::load)
                    .transpose()?
                    .unwrap_or_default(),
                max_ed: args.max_ed,
            };
            let raw = read_utf8(&args.input)?;
            let out = run_correction(&raw, mode, &resources)?;
            write_file(&args.output, &out.corrected_text)?;
            if let Some(path) = args.dump_detections {
                write_file(&path, &detections_to_tsv(&out.detections))?;
            }
            if let Some(path) = args.dump_corrections {
                write_file(&path, &corrections_to_tsv(&out.corrections))?;
            }
            eprintln!(
                "{} detections, {} substitutions",
                out.detections.len(),
                out.corrections
                    .iter()
                    .filter(|c| c.replacement.is_some())
                    .count()
            );
            Ok(())
        }
        Command::Evaluate {
            gold,
            corrupted,
            corrected,
            detections,
            report,
            json,
        } => {
            let gold_lines = token_lines_from_file(&gold)?;
            let corrupted_lines = token_lines_from_file(&corrupted)?;
            let corrected_lines = token_lines(&read_utf8(&corrected)?);
            let detections =
                detections_from_tsv(&read_utf8(&detections)?, &detections.display().to_string())?;
            let counts =
                count_outcomes(&gold_lines, &corrupted_lines, &corrected_lines, &detections)?;
            let body = if json {
                counts.report_json()
            } else {
                counts.report_kv()
            };
            write_file(&report, &body)?;
            print!("{body}");
            for violation in consistency_check(&counts) {
                eprintln!("warning: {violation}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
