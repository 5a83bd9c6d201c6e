//! POS-specific and general word lexicons with letter-n-gram and
//! skeleton indices.
//!
//! Indexing rule: words of one or two letters are indexed under their
//! monograms only, three-letter words under their bigrams, and words of
//! four letters or more under both their bigrams and trigrams. Every
//! word is additionally indexed under its skeleton key. Retrieval uses
//! the same length rule on the query word.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use unicode_normalization::UnicodeNormalization;

use crate::error::{read_utf8, Error, Result};
use crate::similarity::skeleton;
use crate::Mode;

/// The closed ten-tag grammatical category set. All tags except `Misc`
/// own a dedicated lexicon; `Misc` falls back to the general one.
///
/// Declaration order doubles as the tie-break order wherever a
/// deterministic choice between tags is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosTag {
    Verb,
    Noun,
    Conj,
    Prep,
    Art,
    Adj,
    Adv,
    Pron,
    Intj,
    Misc,
}

impl PosTag {
    pub const ALL: [PosTag; 10] = [
        PosTag::Verb,
        PosTag::Noun,
        PosTag::Conj,
        PosTag::Prep,
        PosTag::Art,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Intj,
        PosTag::Misc,
    ];

    /// The nine tags that own a dedicated lexicon (everything but `Misc`).
    pub fn lexicon_tags() -> impl Iterator<Item = PosTag> {
        Self::ALL.into_iter().filter(|t| *t != PosTag::Misc)
    }

    pub fn name(self) -> &'static str {
        match self {
            PosTag::Verb => "VERB",
            PosTag::Noun => "NOUN",
            PosTag::Conj => "CONJ",
            PosTag::Prep => "PREP",
            PosTag::Art => "ART",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Intj => "INTJ",
            PosTag::Misc => "MISC",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown tag `{s}`"))
    }
}

/// Identifies a lexicon: one per POS tag plus the general one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexiconLabel {
    Pos(PosTag),
    General,
}

impl LexiconLabel {
    /// Stem used in the `lex.<stem>.txt` file naming convention.
    pub fn file_stem(self) -> &'static str {
        match self {
            LexiconLabel::General => "general",
            LexiconLabel::Pos(PosTag::Verb) => "verb",
            LexiconLabel::Pos(PosTag::Noun) => "noun",
            LexiconLabel::Pos(PosTag::Conj) => "conj",
            LexiconLabel::Pos(PosTag::Prep) => "prep",
            LexiconLabel::Pos(PosTag::Art) => "art",
            LexiconLabel::Pos(PosTag::Adj) => "adj",
            LexiconLabel::Pos(PosTag::Adv) => "adv",
            LexiconLabel::Pos(PosTag::Pron) => "pron",
            LexiconLabel::Pos(PosTag::Intj) => "intj",
            LexiconLabel::Pos(PosTag::Misc) => "general",
        }
    }

    pub fn file_name(self) -> String {
        format!("lex.{}.txt", self.file_stem())
    }
}

impl fmt::Display for LexiconLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconLabel::Pos(t) => write!(f, "{t}"),
            LexiconLabel::General => f.write_str("GENERAL"),
        }
    }
}

/// Contiguous character n-grams of `word`, in order. Returns the empty
/// list when the word is shorter than `n`.
pub fn letter_ngrams(word: &str, n: usize) -> Vec<String> {
    assert!(n >= 1, "n-gram order must be at least 1");
    let chars: Vec<char> = word.chars().collect();
    if chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

/// N-gram orders used to index (and query) a word of the given length.
fn orders_for_len(len: usize) -> &'static [usize] {
    match len {
        0..=2 => &[1],
        3 => &[2],
        _ => &[2, 3],
    }
}

/// An immutable word set with letter-n-gram and skeleton indices.
#[derive(Debug, Clone)]
pub struct Lexicon {
    label: LexiconLabel,
    words: Vec<String>,
    index_of: HashMap<String, u32>,
    ngram_index: HashMap<String, Vec<u32>>,
    skeleton_index: HashMap<String, Vec<u32>>,
}

/// Builds a lexicon from raw words. Words are NFC-normalized and
/// lowercased, duplicates are dropped. An empty word is rejected with
/// its 1-based position in the input.
pub fn build_lexicon<I, S>(words: I, label: LexiconLabel) -> Result<Lexicon>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut lex = Lexicon {
        label,
        words: Vec::new(),
        index_of: HashMap::new(),
        ngram_index: HashMap::new(),
        skeleton_index: HashMap::new(),
    };
    for (lineno, raw) in words.into_iter().enumerate() {
        let word: String = raw.as_ref().trim().nfc().collect::<String>().to_lowercase();
        if word.is_empty() {
            return Err(Error::parse(
                format!("lexicon {label}"),
                lineno + 1,
                "empty word",
            ));
        }
        if lex.index_of.contains_key(&word) {
            continue;
        }
        let id = lex.words.len() as u32;
        let len = word.chars().count();
        for &n in orders_for_len(len) {
            for gram in letter_ngrams(&word, n) {
                lex.ngram_index.entry(gram).or_default().push(id);
            }
        }
        lex.skeleton_index
            .entry(skeleton(&word))
            .or_default()
            .push(id);
        lex.index_of.insert(word.clone(), id);
        lex.words.push(word);
    }
    Ok(lex)
}

impl Lexicon {
    pub fn empty(label: LexiconLabel) -> Self {
        build_lexicon(std::iter::empty::<&str>(), label).expect("empty lexicon")
    }

    pub fn label(&self) -> LexiconLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Exact membership test; `word` must already be normalized.
    pub fn contains(&self, word: &str) -> bool {
        self.index_of.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Words sharing at least one indexed letter n-gram with `word`
    /// (orders chosen by the same length rule used for indexing) or its
    /// skeleton key. Returned sorted, without duplicates.
    pub fn candidates_by_overlap(&self, word: &str) -> Vec<&str> {
        assert!(!word.is_empty(), "overlap query for empty word");
        let mut ids: HashSet<u32> = HashSet::new();
        let len = word.chars().count();
        for &n in orders_for_len(len) {
            for gram in letter_ngrams(word, n) {
                if let Some(bucket) = self.ngram_index.get(&gram) {
                    ids.extend(bucket);
                }
            }
        }
        if let Some(bucket) = self.skeleton_index.get(&skeleton(word)) {
            ids.extend(bucket);
        }
        let mut out: Vec<&str> = ids
            .into_iter()
            .map(|id| self.words[id as usize].as_str())
            .collect();
        out.sort_unstable();
        out
    }

    /// Loads a one-word-per-line lexicon file. Blank lines count as
    /// empty words and are rejected with their line number.
    pub fn load(path: &Path, label: LexiconLabel) -> Result<Self> {
        let text = read_utf8(path)?;
        build_lexicon(text.lines(), label)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut words: Vec<&str> = self.words().collect();
        words.sort_unstable();
        let mut out = String::new();
        for w in words {
            out.push_str(w);
            out.push('\n');
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// The full lexicon family used by a correction run: the general
/// lexicon plus the per-tag ones.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    general: Lexicon,
    by_tag: HashMap<PosTag, Lexicon>,
}

impl LexiconSet {
    pub fn new(general: Lexicon, by_tag: HashMap<PosTag, Lexicon>) -> Self {
        Self { general, by_tag }
    }

    /// A set holding only the general lexicon.
    pub fn general_only(general: Lexicon) -> Self {
        Self {
            general,
            by_tag: HashMap::new(),
        }
    }

    pub fn general(&self) -> &Lexicon {
        &self.general
    }

    /// Lexicon consulted for a word with the given tag. MAEC always uses
    /// the general lexicon; PAEC uses the tag's lexicon, with `Misc`,
    /// untagged words and missing per-tag lexicons falling back to the
    /// general one.
    pub fn lexicon_for(&self, tag: Option<PosTag>, mode: Mode) -> &Lexicon {
        match (mode, tag) {
            (Mode::Paec, Some(tag)) if tag != PosTag::Misc => {
                self.by_tag.get(&tag).unwrap_or(&self.general)
            }
            _ => &self.general,
        }
    }

    /// Membership test routed through `lexicon_for`.
    pub fn lookup(&self, word: &str, tag: Option<PosTag>, mode: Mode) -> bool {
        self.lexicon_for(tag, mode).contains(word)
    }

    /// Loads `lex.general.txt` (always) and the nine per-tag files
    /// (required for PAEC, optional for MAEC) from a directory.
    pub fn load_dir(dir: &Path, mode: Mode) -> Result<Self> {
        let general_path = dir.join(LexiconLabel::General.file_name());
        if !general_path.is_file() {
            return Err(Error::Config(format!(
                "missing lexicon file {}",
                general_path.display()
            )));
        }
        let general = Lexicon::load(&general_path, LexiconLabel::General)?;
        let mut by_tag = HashMap::new();
        for tag in PosTag::lexicon_tags() {
            let path = dir.join(LexiconLabel::Pos(tag).file_name());
            if path.is_file() {
                by_tag.insert(tag, Lexicon::load(&path, LexiconLabel::Pos(tag))?);
            } else if mode == Mode::Paec {
                return Err(Error::Config(format!(
                    "missing lexicon file {}",
                    path.display()
                )));
            }
        }
        Ok(Self { general, by_tag })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_ngrams_match_known_decomposition() {
        assert_eq!(
            letter_ngrams("informatics", 1),
            vec!["i", "n", "f", "o", "r", "m", "a", "t", "i", "c", "s"]
        );
        assert_eq!(
            letter_ngrams("informatics", 2),
            vec!["in", "nf", "fo", "or", "rm", "ma", "at", "ti", "ic", "cs"]
        );
        assert_eq!(
            letter_ngrams("informatics", 3),
            vec!["inf", "nfo", "for", "orm", "rma", "mat", "ati", "tic", "ics"]
        );
    }

    #[test]
    fn letter_ngrams_short_word_is_empty() {
        assert_eq!(letter_ngrams("a", 2), Vec::<String>::new());
    }

    #[test]
    fn letter_ngram_count_and_reconstruction() {
        for w in ["casa", "informatics", "xy", "a", "ñandú"] {
            for n in 1..=3usize {
                let grams = letter_ngrams(w, n);
                let len = w.chars().count();
                assert_eq!(grams.len(), len.saturating_sub(n - 1));
                if !grams.is_empty() {
                    // first chars of each gram plus the tail of the last one
                    let mut rebuilt: String =
                        grams.iter().map(|g| g.chars().next().unwrap()).collect();
                    rebuilt.extend(grams.last().unwrap().chars().skip(1));
                    assert_eq!(rebuilt, w);
                }
            }
        }
    }

    #[test]
    fn build_indexes_short_words_under_monograms() {
        let lex = build_lexicon(["el", "la"], LexiconLabel::Pos(PosTag::Art)).unwrap();
        assert_eq!(lex.len(), 2);
        for gram in ["e", "l", "a"] {
            assert!(lex.ngram_index.contains_key(gram), "missing bucket {gram}");
        }
        assert!(lex.ngram_index.keys().all(|g| g.chars().count() == 1));
    }

    #[test]
    fn build_deduplicates() {
        let lex = build_lexicon(["casa", "casa"], LexiconLabel::Pos(PosTag::Noun)).unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn build_rejects_empty_word_with_line() {
        let err = build_lexicon(["casa", ""], LexiconLabel::General).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_lexicon_contains_nothing() {
        let lex = Lexicon::empty(LexiconLabel::General);
        assert!(!lex.contains("x"));
        assert!(lex.candidates_by_overlap("anything").is_empty());
    }

    #[test]
    fn contains_is_exact() {
        let lex = build_lexicon(["casa"], LexiconLabel::General).unwrap();
        assert!(lex.contains("casa"));
        assert!(!lex.contains("cassa"));
    }

    #[test]
    fn overlap_finds_bigram_neighbours() {
        let lex = build_lexicon(["casa", "perro"], LexiconLabel::General).unwrap();
        // "cassa" shares bigrams ca/as/sa (and its skeleton) with "casa"
        assert_eq!(lex.candidates_by_overlap("cassa"), vec!["casa"]);
    }

    #[test]
    fn overlap_misses_disjoint_word() {
        let lex = build_lexicon(["casa"], LexiconLabel::General).unwrap();
        assert!(lex.candidates_by_overlap("zzz").is_empty());
    }

    #[test]
    fn every_word_retrieves_itself() {
        let words = ["y", "el", "mar", "casa", "puerta", "informática"];
        let lex = build_lexicon(words, LexiconLabel::General).unwrap();
        for w in lex.words().collect::<Vec<_>>() {
            assert!(
                lex.candidates_by_overlap(w).contains(&w),
                "{w} does not retrieve itself"
            );
        }
    }

    #[test]
    fn index_entries_are_consistent_with_letter_ngrams() {
        let lex = build_lexicon(["el", "mar", "casa", "puerta"], LexiconLabel::General).unwrap();
        for (gram, bucket) in &lex.ngram_index {
            for &id in bucket {
                let word = &lex.words[id as usize];
                assert!(
                    letter_ngrams(word, gram.chars().count()).contains(gram),
                    "bucket {gram} wrongly lists {word}"
                );
            }
        }
    }

    #[test]
    fn lexicon_file_round_trips() {
        let dir = std::env::temp_dir().join(format!("textcorr-lex-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("lex.general.txt");
        let lex = build_lexicon(["perro", "casa", "árbol"], LexiconLabel::General).unwrap();
        lex.save(&path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "casa\nperro\nárbol\n"
        );
        let loaded = Lexicon::load(&path, LexiconLabel::General).unwrap();
        let mut a: Vec<&str> = lex.words().collect();
        let mut b: Vec<&str> = loaded.words().collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn load_rejects_blank_lines_with_their_number() {
        let dir = std::env::temp_dir().join(format!("textcorr-lex-blank-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("lex.general.txt");
        std::fs::write(&path, "casa\n\nperro\n").unwrap();
        match Lexicon::load(&path, LexiconLabel::General).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn lookup_routes_by_mode_and_tag() {
        let nouns = build_lexicon(["casa"], LexiconLabel::Pos(PosTag::Noun)).unwrap();
        let general = build_lexicon(["casa", "rápido"], LexiconLabel::General).unwrap();
        let mut by_tag = HashMap::new();
        by_tag.insert(PosTag::Noun, nouns);
        by_tag.insert(
            PosTag::Verb,
            Lexicon::empty(LexiconLabel::Pos(PosTag::Verb)),
        );
        let set = LexiconSet::new(general, by_tag);

        assert!(set.lookup("casa", Some(PosTag::Noun), Mode::Paec));
        // tagging errors surface as detection: wrong lexicon, no match
        assert!(!set.lookup("casa", Some(PosTag::Verb), Mode::Paec));
        assert!(set.lookup("casa", None, Mode::Maec));
        // MISC falls back to the general lexicon
        assert!(set.lookup("rápido", Some(PosTag::Misc), Mode::Paec));
    }
}
