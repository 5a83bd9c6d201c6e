//! Automatic detection and correction of word-level errors in text.
//!
//! The toolkit pairs a reversible normalizer with two correction
//! pipelines: PAEC, which POS-tags the text and works against per-tag
//! lexicons, and MAEC, a tag-free baseline over a single general
//! lexicon. Detection combines dictionary lookup with word-bigram
//! evidence; correction generates candidates through letter-n-gram and
//! skeleton-key indices and ranks them by context counts, edit distance
//! and shape. Error injection and outcome counting close the loop for
//! corpus experiments.

pub mod correct;
pub mod detect;
pub mod error;
pub mod evaluate;
pub mod inject;
pub mod lexicon;
pub mod ngram;
pub mod normalize;
pub mod pipeline;
pub mod rng;
pub mod similarity;
pub mod tagger;

pub use error::{Error, Result};

/// Which correction pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// POS-tagged correction: per-tag lexicons, tagger required.
    Paec,
    /// Morphological baseline: general lexicon only.
    Maec,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Paec => "paec",
            Mode::Maec => "maec",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paec" => Ok(Mode::Paec),
            "maec" => Ok(Mode::Maec),
            other => Err(format!("unknown mode `{other}` (expected paec or maec)")),
        }
    }
}
