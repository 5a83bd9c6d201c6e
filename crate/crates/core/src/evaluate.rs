//! Outcome counting and the correction rate for a corrected text.
//!
//! Positions are compared across three token-aligned texts (gold,
//! corrupted, corrected) plus the detection list:
//!
//! * `C` — corrected: error, detected, fixed to the gold token
//! * `F` — false correction: error, detected, still wrong afterwards
//! * `e` — missed: error, not detected
//! * `I` — introduced: no error, token changed anyway
//! * `E` — detected: total flagged positions
//! * `o` — original errors; `p` — total tokens
//! * `i` — residual errors, e + F + I
//! * `c` — correction rate, (p - i) / p

use std::fmt;

use crate::detect::DetectionResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalCounts {
    /// p: total tokens.
    pub total_words: usize,
    /// o: original errors.
    pub original_errors: usize,
    /// i: residual errors after correction.
    pub residual_errors: usize,
    /// C: real errors corrected to the gold token.
    pub corrected: usize,
    /// E: positions flagged by detection.
    pub detected: usize,
    /// e: errors never detected.
    pub missed: usize,
    /// I: valid tokens damaged by a spurious correction.
    pub introduced: usize,
    /// F: detected errors fixed to the wrong token.
    pub false_corrections: usize,
    /// c: correction rate (p - i) / p.
    pub rate: f64,
}

impl EvalCounts {
    /// `key=value` report in the order p, o, i, C, E, e, I, F, c;
    /// the rate is printed with three decimals.
    pub fn report_kv(&self) -> String {
        format!(
            "p={}\no={}\ni={}\nC={}\nE={}\ne={}\nI={}\nF={}\nc={:.3}\n",
            self.total_words,
            self.original_errors,
            self.residual_errors,
            self.corrected,
            self.detected,
            self.missed,
            self.introduced,
            self.false_corrections,
            self.rate
        )
    }

    /// Same keys as [`report_kv`], as a JSON object.
    pub fn report_json(&self) -> String {
        format!(
            "{{\"p\":{},\"o\":{},\"i\":{},\"C\":{},\"E\":{},\"e\":{},\"I\":{},\"F\":{},\"c\":{:.3}}}\n",
            self.total_words,
            self.original_errors,
            self.residual_errors,
            self.corrected,
            self.detected,
            self.missed,
            self.introduced,
            self.false_corrections,
            self.rate
        )
    }
}

/// Correction rate (p - i) / p for p tokens and i residual errors.
pub fn correction_rate(total_words: usize, residual_errors: usize) -> f64 {
    assert!(total_words > 0, "correction rate needs at least one token");
    assert!(
        residual_errors <= total_words,
        "more residual errors than tokens"
    );
    (total_words - residual_errors) as f64 / total_words as f64
}

/// Classifies every token position of the corrected text. The three
/// texts must be token-aligned; the first line where their token counts
/// diverge is reported as an alignment error.
pub fn count_outcomes(
    gold: &[Vec<String>],
    corrupted: &[Vec<String>],
    corrected: &[Vec<String>],
    detections: &DetectionResult,
) -> Result<EvalCounts> {
    let line_count = gold.len().max(corrupted.len()).max(corrected.len());
    for li in 0..line_count {
        let g = gold.get(li).map(Vec::len);
        let x = corrupted.get(li).map(Vec::len);
        let c = corrected.get(li).map(Vec::len);
        if g != x || g != c {
            return Err(Error::Alignment {
                line: li + 1,
                message: format!(
                    "token counts diverge (gold {:?}, corrupted {:?}, corrected {:?})",
                    g, x, c
                ),
            });
        }
    }

    let detected_positions = detections.positions();
    let mut counts = EvalCounts {
        total_words: 0,
        original_errors: 0,
        residual_errors: 0,
        corrected: 0,
        detected: detections.len(),
        missed: 0,
        introduced: 0,
        false_corrections: 0,
        rate: 1.0,
    };

    for (li, gold_line) in gold.iter().enumerate() {
        for (ti, gold_token) in gold_line.iter().enumerate() {
            counts.total_words += 1;
            let was_error = &corrupted[li][ti] != gold_token;
            let flagged = detected_positions.contains(&(li, ti));
            let fixed = &corrected[li][ti] == gold_token;
            if was_error {
                counts.original_errors += 1;
                if !flagged {
                    counts.missed += 1;
                } else if fixed {
                    counts.corrected += 1;
                } else {
                    counts.false_corrections += 1;
                }
            } else if !fixed {
                counts.introduced += 1;
            }
        }
    }

    counts.residual_errors = counts.missed + counts.false_corrections + counts.introduced;
    counts.rate = if counts.total_words == 0 {
        1.0
    } else {
        correction_rate(counts.total_words, counts.residual_errors)
    };
    Ok(counts)
}

/// One failed bookkeeping identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityViolation {
    /// The identity, e.g. `"E = C + F + I"`.
    pub identity: &'static str,
    /// The count as reported.
    pub reported: usize,
    /// The value derived from the right-hand side.
    pub derived: usize,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated ({} vs {})",
            self.identity, self.reported, self.derived
        )
    }
}

/// Checks the three bookkeeping identities E = C + F + I,
/// o = C + F + e and i = e + F + I, returning every violated one.
pub fn consistency_check(counts: &EvalCounts) -> Vec<IdentityViolation> {
    let mut violations = Vec::new();
    let checks = [
        (
            "E = C + F + I",
            counts.detected,
            counts.corrected + counts.false_corrections + counts.introduced,
        ),
        (
            "o = C + F + e",
            counts.original_errors,
            counts.corrected + counts.false_corrections + counts.missed,
        ),
        (
            "i = e + F + I",
            counts.residual_errors,
            counts.missed + counts.false_corrections + counts.introduced,
        ),
    ];
    for (identity, reported, derived) in checks {
        if reported != derived {
            violations.push(IdentityViolation {
                identity,
                reported,
                derived,
            });
        }
    }
    violations
}
