//! End-to-end correction runs: normalize, tag (PAEC), detect, correct,
//! denormalize.

use std::path::Path;

use crate::correct::{correct_document, Correction, CorrectionResources};
use crate::detect::{detect, DetectionInput, DetectionResult};
use crate::error::{Error, Result};
use crate::lexicon::{LexiconSet, PosTag};
use crate::ngram::{NGramModel, NGramUnit};
use crate::normalize::{denormalize, normalize, AbbrevTable, Document};
use crate::tagger::TaggerModel;
use crate::Mode;

/// Loaded resources for a correction run.
#[derive(Debug, Clone)]
pub struct Resources {
    pub lexicons: LexiconSet,
    pub word_bigrams: NGramModel,
    pub word_trigrams: Option<NGramModel>,
    /// Optional tag-bigram filter for detection; off unless set.
    pub tag_bigrams: Option<NGramModel>,
    /// Required for PAEC runs without an external tag override.
    pub tagger: Option<TaggerModel>,
    pub abbrev: AbbrevTable,
    /// Overrides the per-word-length edit budget when set.
    pub max_ed: Option<usize>,
}

impl Resources {
    /// Minimal MAEC setup: general lexicon plus word bigram model.
    pub fn maec(lexicons: LexiconSet, word_bigrams: NGramModel) -> Self {
        Self {
            lexicons,
            word_bigrams,
            word_trigrams: None,
            tag_bigrams: None,
            tagger: None,
            abbrev: AbbrevTable::new(),
            max_ed: None,
        }
    }

    fn validate(&self, mode: Mode, have_tag_override: bool) -> Result<()> {
        if self.word_bigrams.order() != 2 || self.word_bigrams.unit() != NGramUnit::Word {
            return Err(Error::Config(
                "word bigram model must have order 2 and unit word".to_string(),
            ));
        }
        if let Some(t) = &self.word_trigrams {
            if t.order() != 3 || t.unit() != NGramUnit::Word {
                return Err(Error::Config(
                    "word trigram model must have order 3 and unit word".to_string(),
                ));
            }
        }
        if let Some(t) = &self.tag_bigrams {
            if t.order() != 2 || t.unit() != NGramUnit::Tag {
                return Err(Error::Config(
                    "tag bigram model must have order 2 and unit tag".to_string(),
                ));
            }
        }
        if mode == Mode::Paec && self.tagger.is_none() && !have_tag_override {
            return Err(Error::Config(
                "PAEC mode requires a tagger model".to_string(),
            ));
        }
        Ok(())
    }
}

/// Everything produced by one correction run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub corrected_text: String,
    pub document: Document,
    pub detections: DetectionResult,
    pub corrections: Vec<Correction>,
    /// Tags per word line; present in PAEC runs.
    pub tags: Option<Vec<Vec<PosTag>>>,
}

/// Runs the automatic correction pipeline over `raw`.
pub fn run_correction(raw: &str, mode: Mode, resources: &Resources) -> Result<RunOutput> {
    run_correction_with_tags(raw, mode, resources, None)
}

/// Like [`run_correction`] but accepting external per-word-line tags
/// (e.g. reference tags from an annotated corpus) instead of running
/// the tagger. Only meaningful in PAEC mode.
pub fn run_correction_with_tags(
    raw: &str,
    mode: Mode,
    resources: &Resources,
    tag_override: Option<&[Vec<PosTag>]>,
) -> Result<RunOutput> {
    resources.validate(mode, tag_override.is_some())?;
    let doc = normalize(raw, &resources.abbrev);
    let word_lines = doc.word_lines();

    let tags: Option<Vec<Vec<PosTag>>> = match (mode, tag_override) {
        (Mode::Maec, _) => None,
        (Mode::Paec, Some(given)) => {
            if given.len() != word_lines.len()
                || given
                    .iter()
                    .zip(&word_lines)
                    .any(|(tags, words)| tags.len() != words.len())
            {
                return Err(Error::Config(
                    "tag override is not aligned to the document's word lines".to_string(),
                ));
            }
            Some(given.to_vec())
        }
        (Mode::Paec, None) => {
            let tagger = resources.tagger.as_ref().expect("validated above");
            Some(
                word_lines
                    .iter()
                    .map(|line| {
                        let words: Vec<&str> = line.iter().map(|(_, w)| *w).collect();
                        tagger
                            .tag(&words)
                            .into_iter()
                            .map(|(word, tag)| {
                                // numerals and symbol runs stay MISC no
                                // matter what the tagger guessed
                                if word.chars().any(|c| c.is_alphabetic()) {
                                    tag
                                } else {
                                    PosTag::Misc
                                }
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
    };

    let input = DetectionInput::from_document(&doc, tags.as_deref());
    let detections = detect(
        &input,
        |word, tag| resources.lexicons.lookup(word, tag, mode),
        &resources.word_bigrams,
        resources.tag_bigrams.as_ref(),
    );

    let correction_resources = CorrectionResources {
        lexicons: &resources.lexicons,
        bigrams: &resources.word_bigrams,
        trigrams: resources.word_trigrams.as_ref(),
        tags: tags.as_deref(),
        max_ed: resources.max_ed,
    };
    let (corrected_doc, corrections) =
        correct_document(&doc, &detections, mode, &correction_resources);
    let corrected_text = denormalize(&corrected_doc)?;

    Ok(RunOutput {
        corrected_text,
        document: corrected_doc,
        detections,
        corrections,
        tags,
    })
}

/// Serializes detections as `line<TAB>token<TAB>word` rows.
pub fn detections_to_tsv(detections: &DetectionResult) -> String {
    let mut out = String::new();
    for d in &detections.detections {
        out.push_str(&format!("{}\t{}\t{}\n", d.line, d.token, d.word));
    }
    out
}

/// Parses a detections dump written by [`detections_to_tsv`].
pub fn detections_from_tsv(text: &str, context: &str) -> Result<DetectionResult> {
    let mut detections = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                context,
                idx + 1,
                "expected line<TAB>token<TAB>word",
            ));
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(context, idx + 1, format!("bad index {s:?}")))
        };
        detections.push(crate::detect::Detection {
            line: parse(fields[0])?,
            token: parse(fields[1])?,
            word: fields[2].to_string(),
        });
    }
    Ok(DetectionResult { detections })
}

/// Serializes corrections as `line<TAB>token<TAB>original<TAB>
/// replacement` rows, with `-` for positions left unchanged.
pub fn corrections_to_tsv(corrections: &[Correction]) -> String {
    let mut out = String::new();
    for c in corrections {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            c.line,
            c.token,
            c.original,
            c.replacement.as_deref().unwrap_or("-")
        ));
    }
    out
}

/// Splits a plain text into whitespace token lines for evaluation.
pub fn token_lines(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

/// Reads a file and splits it into token lines.
pub fn token_lines_from_file(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(token_lines(&crate::error::read_utf8(path)?))
}
