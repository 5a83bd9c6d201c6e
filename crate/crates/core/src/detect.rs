//! Contextual error detection.
//!
//! Each line is scanned as the word list `[<I>, w0, .., wn]`: a word
//! absent from its lexicon is flagged outright; a word present in its
//! lexicon falls under suspicion when its left bigram is unseen, and the
//! blame is routed between it and its neighbours depending on which of
//! them are themselves valid or already flagged. Bigrams touching the
//! line-start pseudo-word or the virtual end-of-line sentinel are always
//! treated as seen — sentinels are never evidence of error.

use std::collections::BTreeSet;

use crate::lexicon::PosTag;
use crate::ngram::NGramModel;
use crate::normalize::Document;

/// One word position under detection: its document token index, its
/// normalized form and, in PAEC mode, its POS tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionToken {
    pub token_index: usize,
    pub word: String,
    pub tag: Option<PosTag>,
}

/// Word lines to scan. `token_index` values refer back to document
/// token positions so detections can drive the corrector; the
/// line-start pseudo-word is added internally and never indexed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectionInput {
    pub lines: Vec<Vec<DetectionToken>>,
}

impl DetectionInput {
    /// Untagged input; token indices are word positions within each line.
    pub fn from_words(lines: &[Vec<String>]) -> Self {
        Self {
            lines: lines
                .iter()
                .map(|line| {
                    line.iter()
                        .enumerate()
                        .map(|(i, w)| DetectionToken {
                            token_index: i,
                            word: w.clone(),
                            tag: None,
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Tagged input; the tag lists must be parallel to the word lists.
    pub fn from_tagged(lines: &[Vec<String>], tags: &[Vec<PosTag>]) -> Self {
        assert_eq!(lines.len(), tags.len(), "tag line count mismatch");
        Self {
            lines: lines
                .iter()
                .zip(tags)
                .map(|(line, line_tags)| {
                    assert_eq!(line.len(), line_tags.len(), "tag list length mismatch");
                    line.iter()
                        .zip(line_tags)
                        .enumerate()
                        .map(|(i, (w, t))| DetectionToken {
                            token_index: i,
                            word: w.clone(),
                            tag: Some(*t),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Word tokens of a document, optionally tagged. Tags are parallel
    /// to the word tokens of each line.
    pub fn from_document(doc: &Document, tags: Option<&[Vec<PosTag>]>) -> Self {
        let word_lines = doc.word_lines();
        if let Some(tags) = tags {
            assert_eq!(word_lines.len(), tags.len(), "tag line count mismatch");
        }
        Self {
            lines: word_lines
                .iter()
                .enumerate()
                .map(|(li, line)| {
                    if let Some(tags) = tags {
                        assert_eq!(line.len(), tags[li].len(), "tag list length mismatch");
                    }
                    line.iter()
                        .enumerate()
                        .map(|(wi, (token_index, word))| DetectionToken {
                            token_index: *token_index,
                            word: (*word).to_string(),
                            tag: tags.map(|t| t[li][wi]),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// A flagged word position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub line: usize,
    pub token: usize,
    pub word: String,
}

/// Flagged positions, ordered by (line, token), without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectionResult {
    pub detections: Vec<Detection>,
}

impl DetectionResult {
    pub fn len(&self) -> usize {
        self.detections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detections.is_empty()
    }

    pub fn contains(&self, line: usize, token: usize) -> bool {
        self.detections
            .iter()
            .any(|d| d.line == line && d.token == token)
    }

    pub fn positions(&self) -> std::collections::HashSet<(usize, usize)> {
        self.detections.iter().map(|d| (d.line, d.token)).collect()
    }
}

/// Scans `input` and returns the suspect positions.
///
/// `in_lexicon` is consulted with each word's own tag (the per-POS
/// lexicon in PAEC mode, the general one in MAEC mode). `word_bigrams`
/// must be a word bigram model. When `tag_bigrams` is given, a word
/// pair whose tag bigram is unseen is treated as unseen even if the
/// word bigram exists: the extra filter can strengthen a flag but never
/// suppress one.
pub fn detect<L>(
    input: &DetectionInput,
    in_lexicon: L,
    word_bigrams: &NGramModel,
    tag_bigrams: Option<&NGramModel>,
) -> DetectionResult
where
    L: Fn(&str, Option<PosTag>) -> bool,
{
    assert_eq!(word_bigrams.order(), 2, "detection needs a bigram model");

    let mut detections = Vec::new();
    for (li, line) in input.lines.iter().enumerate() {
        let n = line.len();
        // flagged word positions of this line, in document token order
        let mut flagged: BTreeSet<usize> = BTreeSet::new();

        let bigram_seen = |a: &DetectionToken, b: &DetectionToken| -> bool {
            if !word_bigrams.contains(&[&a.word, &b.word]) {
                return false;
            }
            match (tag_bigrams, a.tag, b.tag) {
                (Some(model), Some(ta), Some(tb)) => model.contains(&[ta.name(), tb.name()]),
                _ => true,
            }
        };

        for k in 0..n {
            let mut flag = 0u8;
            let pa = &line[k];
            if !in_lexicon(&pa.word, pa.tag) {
                flagged.insert(k);
                continue;
            }
            // left bigram; k == 0 pairs with the line-start pseudo-word
            let left_seen = k == 0 || bigram_seen(&line[k - 1], pa);
            if left_seen {
                continue;
            }
            let ant = &line[k - 1];
            if !in_lexicon(&ant.word, ant.tag) {
                flagged.insert(k - 1);
            } else {
                flag = 1;
            }
            // right bigram, only examined once the left one is missing;
            // the last word pairs with the end sentinel
            let right_seen = k + 1 >= n || bigram_seen(pa, &line[k + 1]);
            if !right_seen {
                let post = &line[k + 1];
                if !in_lexicon(&post.word, post.tag) {
                    flagged.insert(k + 1);
                } else if !flagged.contains(&(k + 1)) {
                    flag = 2;
                }
            }
            if flag == 2 {
                flagged.insert(k);
            }
            if flag == 1 && !flagged.contains(&(k - 1)) {
                flagged.insert(k);
            }
        }

        detections.extend(flagged.into_iter().map(|k| Detection {
            line: li,
            token: line[k].token_index,
            word: line[k].word.clone(),
        }));
    }
    DetectionResult { detections }
}
