//! Seeded corpus corruption for evaluating the correctors.
//!
//! The simulation protocol reflows text to ten words per line and then
//! plants exactly one random single-character error per line: a word is
//! drawn uniformly (one-character words are excluded, deleting them
//! would leave an empty token), then a character position, then one of
//! insertion / deletion / substitution. The remaining edit operations
//! are available through [`inject_with_ops`] for extended experiments.

use std::fmt;
use std::str::FromStr;

use crate::rng::SplitMix64;

/// The word-level edit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditOp {
    /// Add one character.
    Insertion,
    /// Double the character at the position.
    Duplication,
    /// Remove one character.
    Deletion,
    /// Replace one character by a different one.
    Substitution,
    /// Swap two adjacent characters.
    Transposition,
    /// Split one word in two by inserting a space.
    Segmentation,
    /// Join two words by removing the space between them.
    Union,
}

impl EditOp {
    pub const ALL: [EditOp; 7] = [
        EditOp::Insertion,
        EditOp::Duplication,
        EditOp::Deletion,
        EditOp::Substitution,
        EditOp::Transposition,
        EditOp::Segmentation,
        EditOp::Union,
    ];

    /// The three operations used by the typing simulation.
    pub const SIMULATION: [EditOp; 3] = [EditOp::Insertion, EditOp::Deletion, EditOp::Substitution];

    pub fn name(self) -> &'static str {
        match self {
            EditOp::Insertion => "INSERTION",
            EditOp::Duplication => "DUPLICATION",
            EditOp::Deletion => "DELETION",
            EditOp::Substitution => "SUBSTITUTION",
            EditOp::Transposition => "TRANSPOSITION",
            EditOp::Segmentation => "SEGMENTATION",
            EditOp::Union => "UNION",
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EditOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown edit operation `{s}`"))
    }
}

/// Pool the injector draws inserted and replacement characters from.
pub const ALPHABET: [char; 33] = [
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's',
    't', 'u', 'v', 'w', 'x', 'y', 'z', 'á', 'é', 'í', 'ó', 'ú', 'ü', 'ñ',
];

/// One planted error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionEntry {
    pub line: usize,
    pub token: usize,
    pub op: EditOp,
    pub char_pos: usize,
    pub original: String,
    pub mutated: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InjectionLog {
    pub entries: Vec<InjectionEntry>,
}

impl InjectionLog {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                e.line, e.token, e.op, e.char_pos, e.original, e.mutated
            ));
        }
        out
    }
}

/// Reflows whitespace-separated words to ten per line; the final line
/// may hold fewer. Empty input stays empty.
pub fn format_ten_per_line(text: &str) -> String {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.is_empty() {
        return String::new();
    }
    let mut out = String::with_capacity(text.len());
    for chunk in words.chunks(10) {
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
    out
}

/// Applies one edit operation to a word.
///
/// `replacement` supplies the character for insertion and substitution
/// and is ignored otherwise. Union expects its input to be the two
/// words joined by the space at `char_pos` and removes that space; it
/// is the inverse of segmentation.
pub fn apply_edit(word: &str, op: EditOp, char_pos: usize, replacement: Option<char>) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let len = chars.len();
    match op {
        EditOp::Insertion => {
            assert!(char_pos <= len, "insertion position out of range");
            let c = replacement.expect("insertion needs a replacement character");
            chars.insert(char_pos, c);
        }
        EditOp::Duplication => {
            assert!(char_pos < len, "duplication position out of range");
            chars.insert(char_pos, chars[char_pos]);
        }
        EditOp::Deletion => {
            assert!(char_pos < len, "deletion position out of range");
            chars.remove(char_pos);
        }
        EditOp::Substitution => {
            assert!(char_pos < len, "substitution position out of range");
            let c = replacement.expect("substitution needs a replacement character");
            assert!(
                c != chars[char_pos],
                "substitution must change the character"
            );
            chars[char_pos] = c;
        }
        EditOp::Transposition => {
            assert!(char_pos + 1 < len, "transposition position out of range");
            chars.swap(char_pos, char_pos + 1);
        }
        EditOp::Segmentation => {
            assert!(
                char_pos >= 1 && char_pos <= len.saturating_sub(1),
                "segmentation position out of range"
            );
            chars.insert(char_pos, ' ');
        }
        EditOp::Union => {
            assert!(
                char_pos < len && chars[char_pos] == ' ',
                "union position must hold the joining space"
            );
            chars.remove(char_pos);
        }
    }
    chars.into_iter().collect()
}

/// Typing-error simulation: exactly one insertion/deletion/substitution
/// per non-empty line, fully deterministic for a given seed. Input is
/// expected in ten-words-per-line format. Lines without an eligible
/// word (at least two characters) are passed through unchanged.
pub fn inject(formatted: &str, seed: u64) -> (String, InjectionLog) {
    inject_with_ops(formatted, seed, &EditOp::SIMULATION)
}

/// Like [`inject`] but drawing from an arbitrary operation set.
/// Segmentation and union change the token count of the line, so their
/// output cannot be evaluated with token-aligned comparison.
pub fn inject_with_ops(formatted: &str, seed: u64, ops: &[EditOp]) -> (String, InjectionLog) {
    assert!(!ops.is_empty(), "operation set must not be empty");
    let mut rng = SplitMix64::new(seed);
    let mut log = InjectionLog::default();
    let mut out = String::with_capacity(formatted.len() + 16);
    let ends_with_newline = formatted.ends_with('\n');
    let mut lines: Vec<&str> = formatted.split('\n').collect();
    if ends_with_newline {
        lines.pop();
    }
    let line_count = lines.len();

    for (li, line) in lines.into_iter().enumerate() {
        let words: Vec<&str> = line.split_whitespace().collect();
        let eligible: Vec<usize> = (0..words.len())
            .filter(|&i| words[i].chars().count() >= 2)
            .collect();
        if eligible.is_empty() {
            out.push_str(line);
        } else {
            let mut wi = eligible[rng.below(eligible.len())];
            let word = words[wi];
            let len = word.chars().count();
            let mut pos = rng.below(len);
            let mut op = *rng.pick(ops);

            // keep positions valid for the drawn operation
            match op {
                EditOp::Transposition if pos + 1 >= len => pos = len - 2,
                EditOp::Segmentation => pos = pos.clamp(1, len - 1),
                // union joins to the right; the last word joins leftwards
                // instead, and a single-word line falls back to substitution
                EditOp::Union if wi + 1 >= words.len() && wi > 0 => wi -= 1,
                EditOp::Union if wi + 1 >= words.len() => op = EditOp::Substitution,
                _ => {}
            }

            let mut mutated_words: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            let entry = if op == EditOp::Union {
                let joined_input = format!("{} {}", words[wi], words[wi + 1]);
                let space_pos = words[wi].chars().count();
                let mutated = apply_edit(&joined_input, op, space_pos, None);
                mutated_words.splice(wi..wi + 2, [mutated.clone()]);
                InjectionEntry {
                    line: li,
                    token: wi,
                    op,
                    char_pos: space_pos,
                    original: joined_input,
                    mutated,
                }
            } else {
                let target = words[wi];
                let target_len = target.chars().count();
                let replacement = match op {
                    EditOp::Insertion => Some(*rng.pick(&ALPHABET)),
                    EditOp::Substitution => {
                        let current = target.chars().nth(pos.min(target_len - 1)).unwrap();
                        let mut c = *rng.pick(&ALPHABET);
                        while c == current {
                            c = *rng.pick(&ALPHABET);
                        }
                        Some(c)
                    }
                    _ => None,
                };
                let mutated = apply_edit(target, op, pos, replacement);
                mutated_words[wi] = mutated.clone();
                InjectionEntry {
                    line: li,
                    token: wi,
                    op,
                    char_pos: pos,
                    original: target.to_string(),
                    mutated,
                }
            };
            log.entries.push(entry);
            out.push_str(&mutated_words.join(" "));
        }
        if li + 1 < line_count {
            out.push('\n');
        }
    }
    if ends_with_newline {
        out.push('\n');
    }
    (out, log)
}
