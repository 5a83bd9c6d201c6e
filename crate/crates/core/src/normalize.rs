//! Reversible text normalization.
//!
//! `normalize` expands abbreviations, lowercases words, detaches
//! punctuation and splits the input into lines of tokens, recording
//! everything it removed. `denormalize` plays the record back, so a
//! document whose tokens were not substituted reproduces the original
//! input byte for byte. Token substitutions of equal count (the
//! corrector's output) keep the record applicable: case positions past
//! the end of a shorter replacement are dropped.
//!
//! Lines are hard boundaries throughout the pipeline. Within a line,
//! sentences end at a token whose detached trailing punctuation
//! contains '.', '?' or '!'.

use std::collections::HashMap;
use std::ops::Range;

use unicode_categories::UnicodeCategories;

use crate::error::{read_utf8, Error, Result};

/// Pseudo-word marking the beginning of each line in detection input
/// and language-model corpora.
pub const LINE_START: &str = "<I>";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Original whitespace-delimited form (for abbreviation expansions,
    /// the expansion word itself).
    pub surface: String,
    /// Lowercase form with the recorded punctuation removed. Empty for
    /// chunks that consist of punctuation only; such tokens are not
    /// word tokens and are skipped by tagging, detection and correction.
    pub normalized: String,
    pub line_index: usize,
    pub token_index: usize,
}

impl Token {
    pub fn is_word(&self) -> bool {
        !self.normalized.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    Leading,
    Trailing,
}

/// Positions (char indices into the punctuation-stripped chunk) of the
/// uppercase characters of one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseMark {
    pub line: usize,
    pub token: usize,
    pub char_positions: Vec<usize>,
}

/// One detached punctuation character of one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PunctMark {
    pub line: usize,
    pub token: usize,
    pub attachment: Attachment,
    pub symbol: char,
}

/// Records that the chunk `original` was replaced by the tokens of
/// `expansion` starting at `token`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbbrevExpansion {
    pub line: usize,
    pub token: usize,
    pub original: String,
    pub expansion: String,
}

impl AbbrevExpansion {
    pub fn token_count(&self) -> usize {
        self.expansion.split_whitespace().count().max(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalizationRecord {
    pub case_marks: Vec<CaseMark>,
    pub punct_marks: Vec<PunctMark>,
    pub abbrev_expansions: Vec<AbbrevExpansion>,
    // Inter-chunk whitespace per line: a line of n chunks stores n + 1
    // gap strings (leading, between each pair, trailing), so unusual
    // spacing survives the round trip.
    gaps: Vec<Vec<String>>,
    ends_with_newline: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub lines: Vec<Vec<Token>>,
    pub record: NormalizationRecord,
}

impl Document {
    pub fn token_count(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }

    /// Word tokens per line as (token index, normalized form) pairs;
    /// punctuation-only tokens are skipped.
    pub fn word_lines(&self) -> Vec<Vec<(usize, &str)>> {
        self.lines
            .iter()
            .map(|line| {
                line.iter()
                    .filter(|t| t.is_word())
                    .map(|t| (t.token_index, t.normalized.as_str()))
                    .collect()
            })
            .collect()
    }

    /// Sentence spans as (line index, token range) pairs. A sentence
    /// ends at a token whose trailing punctuation contains '.', '?' or
    /// '!', or at the end of a line.
    pub fn sentence_ranges(&self) -> Vec<(usize, Range<usize>)> {
        let mut closers: HashMap<(usize, usize), bool> = HashMap::new();
        for mark in &self.record.punct_marks {
            if mark.attachment == Attachment::Trailing && matches!(mark.symbol, '.' | '?' | '!') {
                closers.insert((mark.line, mark.token), true);
            }
        }
        let mut out = Vec::new();
        for (li, line) in self.lines.iter().enumerate() {
            let mut start = 0;
            for ti in 0..line.len() {
                if closers.contains_key(&(li, ti)) {
                    out.push((li, start..ti + 1));
                    start = ti + 1;
                }
            }
            if start < line.len() {
                out.push((li, start..line.len()));
            }
        }
        out
    }
}

/// Abbreviation expansion table. Keys are lowercase and end in '.'.
#[derive(Debug, Clone, Default)]
pub struct AbbrevTable {
    map: HashMap<String, String>,
}

impl AbbrevTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut map = HashMap::new();
        for (lineno, (abbrev, expansion)) in pairs.into_iter().enumerate() {
            let abbrev: String = abbrev.into();
            let expansion: String = expansion.into();
            validate_entry(&abbrev, &expansion, lineno + 1, "abbreviation table")?;
            map.insert(abbrev, expansion);
        }
        Ok(Self { map })
    }

    /// Loads a `abbrev<TAB>expansion` file, one entry per line.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = read_utf8(path)?;
        let context = path.display().to_string();
        let mut map = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (abbrev, expansion) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&context, idx + 1, "expected abbrev<TAB>expansion"))?;
            validate_entry(abbrev, expansion, idx + 1, &context)?;
            map.insert(abbrev.to_string(), expansion.to_string());
        }
        Ok(Self { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }
}

fn validate_entry(abbrev: &str, expansion: &str, line: usize, context: &str) -> Result<()> {
    if !abbrev.ends_with('.') {
        return Err(Error::parse(
            context,
            line,
            format!("abbreviation {abbrev:?} does not end in '.'"),
        ));
    }
    if abbrev != abbrev.to_lowercase() {
        return Err(Error::parse(
            context,
            line,
            format!("abbreviation {abbrev:?} is not lowercase"),
        ));
    }
    if expansion.split_whitespace().next().is_none() {
        return Err(Error::parse(context, line, "empty expansion"));
    }
    Ok(())
}

fn is_punct(c: char) -> bool {
    // Unicode categories P and S; digits remain part of tokens.
    c.is_punctuation() || c.is_symbol()
}

/// Splits a line into its whitespace gaps and non-whitespace chunks.
/// Always returns one more gap than chunks.
fn split_line(line: &str) -> (Vec<String>, Vec<String>) {
    let mut gaps = vec![String::new()];
    let mut chunks: Vec<String> = Vec::new();
    let mut in_chunk = false;
    for c in line.chars() {
        if c.is_whitespace() {
            if in_chunk {
                gaps.push(String::new());
                in_chunk = false;
            }
            gaps.last_mut().unwrap().push(c);
        } else {
            if !in_chunk {
                chunks.push(String::new());
                in_chunk = true;
            }
            chunks.last_mut().unwrap().push(c);
        }
    }
    if in_chunk {
        gaps.push(String::new());
    }
    (gaps, chunks)
}

/// Normalizes raw text into a [`Document`]: one document line per input
/// line, abbreviations from `table` expanded, punctuation detached and
/// words lowercased, with every removal recorded for [`denormalize`].
pub fn normalize(raw: &str, table: &AbbrevTable) -> Document {
    let mut doc = Document::default();
    if raw.is_empty() {
        return doc;
    }
    doc.record.ends_with_newline = raw.ends_with('\n');
    let mut raw_lines: Vec<&str> = raw.split('\n').collect();
    if doc.record.ends_with_newline {
        raw_lines.pop();
    }

    for (li, raw_line) in raw_lines.iter().enumerate() {
        let (gaps, chunks) = split_line(raw_line);
        let mut tokens: Vec<Token> = Vec::with_capacity(chunks.len());
        for chunk in &chunks {
            let lowered = chunk.to_lowercase();
            if let Some(expansion) = table.get(&lowered) {
                doc.record.abbrev_expansions.push(AbbrevExpansion {
                    line: li,
                    token: tokens.len(),
                    original: chunk.clone(),
                    expansion: expansion.to_string(),
                });
                for word in expansion.split_whitespace() {
                    tokens.push(Token {
                        surface: word.to_string(),
                        normalized: word.to_lowercase(),
                        line_index: li,
                        token_index: tokens.len(),
                    });
                }
                continue;
            }

            let chars: Vec<char> = chunk.chars().collect();
            let mut start = 0;
            while start < chars.len() && is_punct(chars[start]) {
                start += 1;
            }
            let mut end = chars.len();
            while end > start && is_punct(chars[end - 1]) {
                end -= 1;
            }
            let token_index = tokens.len();
            for &c in &chars[..start] {
                doc.record.punct_marks.push(PunctMark {
                    line: li,
                    token: token_index,
                    attachment: Attachment::Leading,
                    symbol: c,
                });
            }
            for &c in &chars[end..] {
                doc.record.punct_marks.push(PunctMark {
                    line: li,
                    token: token_index,
                    attachment: Attachment::Trailing,
                    symbol: c,
                });
            }
            let core = &chars[start..end];
            let upper_positions: Vec<usize> = core
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_uppercase())
                .map(|(i, _)| i)
                .collect();
            if !upper_positions.is_empty() {
                doc.record.case_marks.push(CaseMark {
                    line: li,
                    token: token_index,
                    char_positions: upper_positions,
                });
            }
            let normalized = core.iter().collect::<String>().to_lowercase();
            tokens.push(Token {
                surface: chunk.clone(),
                normalized,
                line_index: li,
                token_index,
            });
        }
        doc.record.gaps.push(gaps);
        doc.lines.push(tokens);
    }
    doc
}

fn uppercase_char(c: char) -> char {
    let mut upper = c.to_uppercase();
    let first = upper.next().unwrap();
    // leave characters with multi-char uppercase mappings alone
    if upper.next().is_none() {
        first
    } else {
        c
    }
}

/// Reapplies the normalization record: abbreviations, case and
/// punctuation are reattached at their recorded positions. Without
/// token substitutions the result equals the original input exactly.
pub fn denormalize(doc: &Document) -> Result<String> {
    let record = &doc.record;
    if record.gaps.len() != doc.lines.len() {
        return Err(Error::Record(format!(
            "{} gap lines for {} document lines",
            record.gaps.len(),
            doc.lines.len()
        )));
    }

    let check_pos = |line: usize, token: usize, what: &str| -> Result<()> {
        if line >= doc.lines.len() || token >= doc.lines[line].len() {
            return Err(Error::Record(format!(
                "{what} references missing token ({line}, {token})"
            )));
        }
        Ok(())
    };

    let mut case: HashMap<(usize, usize), &[usize]> = HashMap::new();
    for mark in &record.case_marks {
        check_pos(mark.line, mark.token, "case mark")?;
        case.insert((mark.line, mark.token), &mark.char_positions);
    }
    let mut leading: HashMap<(usize, usize), String> = HashMap::new();
    let mut trailing: HashMap<(usize, usize), String> = HashMap::new();
    for mark in &record.punct_marks {
        check_pos(mark.line, mark.token, "punctuation mark")?;
        let slot = match mark.attachment {
            Attachment::Leading => leading.entry((mark.line, mark.token)).or_default(),
            Attachment::Trailing => trailing.entry((mark.line, mark.token)).or_default(),
        };
        slot.push(mark.symbol);
    }
    let mut abbrev: HashMap<(usize, usize), &AbbrevExpansion> = HashMap::new();
    for exp in &record.abbrev_expansions {
        check_pos(exp.line, exp.token, "abbreviation expansion")?;
        abbrev.insert((exp.line, exp.token), exp);
    }

    let mut out = String::new();
    for (li, tokens) in doc.lines.iter().enumerate() {
        let gaps = &record.gaps[li];
        out.push_str(&gaps[0]);
        let mut ti = 0;
        let mut chunk_i = 0;
        while ti < tokens.len() {
            if let Some(exp) = abbrev.get(&(li, ti)) {
                out.push_str(&exp.original);
                ti += exp.token_count();
            } else {
                let token = &tokens[ti];
                if let Some(p) = leading.get(&(li, ti)) {
                    out.push_str(p);
                }
                if let Some(positions) = case.get(&(li, ti)) {
                    let mut chars: Vec<char> = token.normalized.chars().collect();
                    for &p in positions.iter() {
                        // positions past a shorter replacement are dropped
                        if p < chars.len() {
                            chars[p] = uppercase_char(chars[p]);
                        }
                    }
                    out.extend(chars);
                } else {
                    out.push_str(&token.normalized);
                }
                if let Some(p) = trailing.get(&(li, ti)) {
                    out.push_str(p);
                }
                ti += 1;
            }
            chunk_i += 1;
            match gaps.get(chunk_i) {
                Some(gap) => out.push_str(gap),
                None => {
                    return Err(Error::Record(format!(
                        "line {li}: more chunks than recorded gaps"
                    )))
                }
            }
        }
        if chunk_i + 1 != gaps.len() {
            return Err(Error::Record(format!(
                "line {li}: {} recorded gaps for {} chunks",
                gaps.len(),
                chunk_i
            )));
        }
        if li + 1 < doc.lines.len() {
            out.push('\n');
        }
    }
    if record.ends_with_newline {
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(doc: &Document, line: usize) -> Vec<&str> {
        doc.lines[line]
            .iter()
            .filter(|t| t.is_word())
            .map(|t| t.normalized.as_str())
            .collect()
    }

    #[test]
    fn lowercases_and_detaches_trailing_period() {
        let doc = normalize("El gato corre.", &AbbrevTable::new());
        assert_eq!(words(&doc, 0), vec!["el", "gato", "corre"]);
        assert_eq!(
            doc.record.punct_marks,
            vec![PunctMark {
                line: 0,
                token: 2,
                attachment: Attachment::Trailing,
                symbol: '.',
            }]
        );
        assert_eq!(
            doc.record.case_marks,
            vec![CaseMark {
                line: 0,
                token: 0,
                char_positions: vec![0],
            }]
        );
    }

    #[test]
    fn empty_input_gives_empty_document() {
        let doc = normalize("", &AbbrevTable::new());
        assert!(doc.lines.is_empty());
        assert_eq!(denormalize(&doc).unwrap(), "");
    }

    #[test]
    fn expands_abbreviations_and_records_them() {
        let table = AbbrevTable::from_pairs([("dr.", "doctor")]).unwrap();
        let doc = normalize("Dr. Pérez", &table);
        assert_eq!(words(&doc, 0), vec!["doctor", "pérez"]);
        assert_eq!(
            doc.record.abbrev_expansions,
            vec![AbbrevExpansion {
                line: 0,
                token: 0,
                original: "Dr.".to_string(),
                expansion: "doctor".to_string(),
            }]
        );
        assert_eq!(denormalize(&doc).unwrap(), "Dr. Pérez");
    }

    #[test]
    fn multi_word_expansion_shifts_token_indices() {
        let table = AbbrevTable::from_pairs([("p.ej.", "por ejemplo")]).unwrap();
        let doc = normalize("p.ej. Casa", &table);
        assert_eq!(words(&doc, 0), vec!["por", "ejemplo", "casa"]);
        // the case mark for "Casa" must use its shifted index
        assert_eq!(doc.record.case_marks[0].token, 2);
        assert_eq!(denormalize(&doc).unwrap(), "p.ej. Casa");
    }

    #[test]
    fn round_trip_is_exact() {
        let inputs = [
            "El gato corre.",
            "Hola,  mundo...\n\n¿Qué tal?\t(bien)\n",
            "UNA Línea CON MAYÚSCULAS ñÑ",
            "  espacios  raros \n",
            "\n",
            "sólo-minúsculas sin puntuación",
            "retorno\r\nde carro\r\n",
        ];
        for raw in inputs {
            let doc = normalize(raw, &AbbrevTable::new());
            assert_eq!(denormalize(&doc).unwrap(), raw, "round trip of {raw:?}");
        }
    }

    #[test]
    fn substitution_keeps_surrounding_decoration() {
        let mut doc = normalize("La cassa.", &AbbrevTable::new());
        doc.lines[0][1].normalized = "casa".to_string();
        assert_eq!(denormalize(&doc).unwrap(), "La casa.");
    }

    #[test]
    fn case_positions_past_replacement_end_are_dropped() {
        let mut doc = normalize("CASA x", &AbbrevTable::new());
        doc.lines[0][0].normalized = "ir".to_string();
        assert_eq!(denormalize(&doc).unwrap(), "IR x");
    }

    #[test]
    fn punctuation_only_chunk_is_not_a_word() {
        let doc = normalize("hola — mundo", &AbbrevTable::new());
        assert_eq!(doc.lines[0].len(), 3);
        assert!(!doc.lines[0][1].is_word());
        assert_eq!(words(&doc, 0), vec!["hola", "mundo"]);
        assert_eq!(denormalize(&doc).unwrap(), "hola — mundo");
    }

    #[test]
    fn digits_stay_inside_tokens() {
        let doc = normalize("tema 3.14 fin", &AbbrevTable::new());
        assert_eq!(words(&doc, 0), vec!["tema", "3.14", "fin"]);
    }

    #[test]
    fn normalization_is_idempotent_on_normalized_text() {
        let table = AbbrevTable::new();
        let first = normalize("el gato corre", &table);
        let text = denormalize(&first).unwrap();
        let second = normalize(&text, &table);
        assert_eq!(first, second);
    }

    #[test]
    fn token_count_preserved_modulo_expansions() {
        let table = AbbrevTable::from_pairs([("p.ej.", "por ejemplo")]).unwrap();
        let raw = "uno p.ej. dos tres";
        let doc = normalize(raw, &table);
        let extra: usize = doc
            .record
            .abbrev_expansions
            .iter()
            .map(|e| e.token_count() - 1)
            .sum();
        assert_eq!(doc.token_count() - extra, raw.split_whitespace().count());
    }

    #[test]
    fn record_referencing_missing_token_is_an_error() {
        let mut doc = normalize("hola", &AbbrevTable::new());
        doc.record.case_marks.push(CaseMark {
            line: 0,
            token: 9,
            char_positions: vec![0],
        });
        assert!(matches!(denormalize(&doc), Err(Error::Record(_))));
    }

    #[test]
    fn sentences_split_on_terminal_punctuation() {
        let doc = normalize("Hola. ¿Qué tal? bien", &AbbrevTable::new());
        let ranges = doc.sentence_ranges();
        assert_eq!(ranges, vec![(0, 0..1), (0, 1..3), (0, 3..4)]);
    }

    #[test]
    fn abbreviation_does_not_end_a_sentence() {
        let table = AbbrevTable::from_pairs([("dr.", "doctor")]).unwrap();
        let doc = normalize("el dr. vino", &table);
        assert_eq!(doc.sentence_ranges(), vec![(0, 0..3)]);
    }

    #[test]
    fn abbrev_table_rejects_bad_entries() {
        assert!(AbbrevTable::from_pairs([("dr", "doctor")]).is_err());
        assert!(AbbrevTable::from_pairs([("Dr.", "doctor")]).is_err());
        assert!(AbbrevTable::from_pairs([("dr.", " ")]).is_err());
    }
}
