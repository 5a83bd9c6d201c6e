//! Candidate generation and best-candidate selection for flagged words.
//!
//! Candidates come from the letter-n-gram and skeleton indices of the
//! lexicon matching the word's grammatical category (the general one in
//! MAEC mode), filtered by edit distance. Selection ranks by context
//! n-gram count mass first, then edit distance, skeleton distance,
//! length difference and finally the word itself, which makes the
//! choice a total order: candidate list order never matters.

use std::collections::HashMap;

use crate::detect::{DetectionInput, DetectionResult};
use crate::lexicon::{LexiconSet, PosTag};
use crate::ngram::NGramModel;
use crate::normalize::{Document, LINE_START};
use crate::similarity::{edit_distance, skeleton};
use crate::Mode;

pub use crate::lexicon::LexiconLabel;

/// A correction candidate with its comparison features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub word: String,
    pub source: LexiconLabel,
    pub edit_dist: usize,
    pub skeleton_dist: usize,
    pub len_diff: usize,
    /// Bigram/trigram count mass with the actual neighbours; filled in
    /// by [`select`].
    pub context_score: u64,
}

/// Outcome for one detected position. `replacement` is absent when no
/// candidate was found and the word was left unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub line: usize,
    pub token: usize,
    pub original: String,
    pub replacement: Option<String>,
}

/// Edit-distance budget for a word of the given character length:
/// 2 for words of four or more characters, 1 below that.
pub fn default_max_ed(word_len: usize) -> usize {
    if word_len >= 4 {
        2
    } else {
        1
    }
}

/// Candidates for `err` out of the lexicon selected by `tag` and
/// `mode`, keeping words within `max_ed` edits. The error word itself
/// is never a candidate.
pub fn generate_candidates(
    err: &str,
    tag: Option<PosTag>,
    mode: Mode,
    lexicons: &LexiconSet,
    max_ed: usize,
) -> Vec<Candidate> {
    assert!(!err.is_empty(), "candidate generation for empty word");
    let lexicon = lexicons.lexicon_for(tag, mode);
    let err_skeleton = skeleton(err);
    let err_len = err.chars().count();
    let mut out = Vec::new();
    for word in lexicon.candidates_by_overlap(err) {
        if word == err {
            continue;
        }
        let dist = edit_distance(err, word);
        if dist > max_ed {
            continue;
        }
        out.push(Candidate {
            word: word.to_string(),
            source: lexicon.label(),
            edit_dist: dist,
            skeleton_dist: edit_distance(&err_skeleton, &skeleton(word)),
            len_diff: err_len.abs_diff(word.chars().count()),
            context_score: 0,
        });
    }
    out.sort_by(|a, b| a.word.cmp(&b.word));
    out
}

/// Picks the best candidate for the original neighbours `left` and
/// `right` (absent at line boundaries). The context score of a
/// candidate c is count(left, c) + count(c, right) from the bigram
/// model, plus count(left, c, right) when a trigram model is given.
pub fn select(
    candidates: Vec<Candidate>,
    left: Option<&str>,
    right: Option<&str>,
    bigrams: &NGramModel,
    trigrams: Option<&NGramModel>,
) -> Option<Candidate> {
    assert_eq!(bigrams.order(), 2, "selection needs a bigram model");
    if let Some(t) = trigrams {
        assert_eq!(t.order(), 3, "trigram model has wrong order");
    }
    candidates
        .into_iter()
        .map(|mut c| {
            let mut score = 0u64;
            if let Some(l) = left {
                score += bigrams.count(&[l, &c.word]);
            }
            if let Some(r) = right {
                score += bigrams.count(&[&c.word, r]);
            }
            if let (Some(model), Some(l), Some(r)) = (trigrams, left, right) {
                score += model.count(&[l, &c.word, r]);
            }
            c.context_score = score;
            c
        })
        .min_by(|a, b| {
            (
                std::cmp::Reverse(a.context_score),
                a.edit_dist,
                a.skeleton_dist,
                a.len_diff,
                &a.word,
            )
                .cmp(&(
                    std::cmp::Reverse(b.context_score),
                    b.edit_dist,
                    b.skeleton_dist,
                    b.len_diff,
                    &b.word,
                ))
        })
}

/// Everything the corrector needs besides the document itself. `tags`
/// must be parallel to the word lines of the document in PAEC mode.
/// `max_ed` overrides the per-word-length default budget when set.
#[derive(Debug, Clone, Copy)]
pub struct CorrectionResources<'a> {
    pub lexicons: &'a LexiconSet,
    pub bigrams: &'a NGramModel,
    pub trigrams: Option<&'a NGramModel>,
    pub tags: Option<&'a [Vec<PosTag>]>,
    pub max_ed: Option<usize>,
}

/// Corrects every detected position of `doc` independently, against the
/// original (pre-correction) neighbours, and returns the new document
/// plus one [`Correction`] per detection. Undetected positions are
/// never modified.
pub fn correct_document(
    doc: &Document,
    detections: &DetectionResult,
    mode: Mode,
    resources: &CorrectionResources,
) -> (Document, Vec<Correction>) {
    let input = DetectionInput::from_document(doc, resources.tags);
    // document token index -> word position within its line
    let mut word_pos: HashMap<(usize, usize), usize> = HashMap::new();
    for (li, line) in input.lines.iter().enumerate() {
        for (wi, token) in line.iter().enumerate() {
            word_pos.insert((li, token.token_index), wi);
        }
    }

    let mut corrected = doc.clone();
    let mut corrections = Vec::with_capacity(detections.len());
    for detection in &detections.detections {
        let wi = *word_pos
            .get(&(detection.line, detection.token))
            .unwrap_or_else(|| {
                panic!(
                    "detection ({}, {}) does not address a word token",
                    detection.line, detection.token
                )
            });
        let line = &input.lines[detection.line];
        let err = &line[wi];
        let max_ed = resources
            .max_ed
            .unwrap_or_else(|| default_max_ed(err.word.chars().count()));
        let candidates = generate_candidates(&err.word, err.tag, mode, resources.lexicons, max_ed);
        let left = if wi == 0 {
            Some(LINE_START)
        } else {
            Some(line[wi - 1].word.as_str())
        };
        let right = line.get(wi + 1).map(|t| t.word.as_str());
        let chosen = select(
            candidates,
            left,
            right,
            resources.bigrams,
            resources.trigrams,
        );
        let replacement = chosen.map(|c| c.word);
        if let Some(ref word) = replacement {
            corrected.lines[detection.line][detection.token].normalized = word.clone();
        }
        corrections.push(Correction {
            line: detection.line,
            token: detection.token,
            original: err.word.clone(),
            replacement,
        });
    }
    (corrected, corrections)
}
