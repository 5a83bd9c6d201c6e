//! Transformation-based POS tagger over the ten-tag set.
//!
//! Training is the classic greedy loop: tag the corpus with the current
//! model, enumerate every rule instantiable at an error position, apply
//! the one that fixes the most net errors, repeat until no rule gains at
//! least `min_gain`. Each accepted rule strictly reduces training error.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{read_utf8, Error, Result};
use crate::lexicon::PosTag;

/// Context templates a rule can condition on. Declaration order is the
/// tie-break order during rule selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTemplate {
    /// Tag of the previous token equals the trigger.
    PrevTag,
    /// Tag of the next token equals the trigger.
    NextTag,
    /// Previous word equals the trigger.
    PrevWord,
    /// Next word equals the trigger.
    NextWord,
    /// Tag two tokens back equals the trigger.
    Prev2Tag,
    /// Tag two tokens ahead equals the trigger.
    Next2Tag,
}

impl RuleTemplate {
    pub const ALL: [RuleTemplate; 6] = [
        RuleTemplate::PrevTag,
        RuleTemplate::NextTag,
        RuleTemplate::PrevWord,
        RuleTemplate::NextWord,
        RuleTemplate::Prev2Tag,
        RuleTemplate::Next2Tag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTemplate::PrevTag => "PREV_TAG",
            RuleTemplate::NextTag => "NEXT_TAG",
            RuleTemplate::PrevWord => "PREV_WORD",
            RuleTemplate::NextWord => "NEXT_WORD",
            RuleTemplate::Prev2Tag => "PREV2_TAG",
            RuleTemplate::Next2Tag => "NEXT2_TAG",
        }
    }
}

impl fmt::Display for RuleTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleTemplate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown rule template `{s}`"))
    }
}

/// Rewrites `from_tag` to `to_tag` where the template condition holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformRule {
    pub from_tag: PosTag,
    pub to_tag: PosTag,
    pub template: RuleTemplate,
    pub trigger: String,
}

impl fmt::Display for TransformRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} when {} = {}",
            self.from_tag, self.to_tag, self.template, self.trigger
        )
    }
}

impl TransformRule {
    fn matches(&self, words: &[&str], tags: &[PosTag], i: usize) -> bool {
        if tags[i] != self.from_tag {
            return false;
        }
        let trigger = self.trigger.as_str();
        match self.template {
            RuleTemplate::PrevTag => i >= 1 && tags[i - 1].name() == trigger,
            RuleTemplate::NextTag => i + 1 < tags.len() && tags[i + 1].name() == trigger,
            RuleTemplate::PrevWord => i >= 1 && words[i - 1] == trigger,
            RuleTemplate::NextWord => i + 1 < words.len() && words[i + 1] == trigger,
            RuleTemplate::Prev2Tag => i >= 2 && tags[i - 2].name() == trigger,
            RuleTemplate::Next2Tag => i + 2 < tags.len() && tags[i + 2].name() == trigger,
        }
    }

    /// Single left-to-right pass; changes are visible to later positions
    /// within the same pass. No fixpoint iteration.
    fn apply_pass(&self, words: &[&str], tags: &mut [PosTag]) {
        for i in 0..tags.len() {
            if self.matches(words, tags, i) {
                tags[i] = self.to_tag;
            }
        }
    }

    /// Key realizing the selection order: higher gain first, then
    /// earlier template, then lexicographic trigger, then tag order.
    fn tie_break_key(&self) -> (RuleTemplate, &str, PosTag, PosTag) {
        (self.template, &self.trigger, self.from_tag, self.to_tag)
    }
}

#[derive(Debug, Clone)]
pub struct TaggerModel {
    /// Most frequent tag per training word.
    pub lexical_table: HashMap<String, PosTag>,
    /// Tag for words absent from the table.
    pub default_tag: PosTag,
    /// Learned rules, applied in order.
    pub rules: Vec<TransformRule>,
}

/// Builds the lexical table: each word maps to its most frequent
/// training tag, ties broken by tag declaration order. The default tag
/// for unknown words is NOUN.
pub fn train_initial(sentences: &[Vec<(String, PosTag)>]) -> (HashMap<String, PosTag>, PosTag) {
    let mut counts: HashMap<&str, [u32; 10]> = HashMap::new();
    for sentence in sentences {
        for (word, tag) in sentence {
            let slot = counts.entry(word.as_str()).or_insert([0; 10]);
            slot[PosTag::ALL.iter().position(|t| t == tag).unwrap()] += 1;
        }
    }
    let mut table = HashMap::with_capacity(counts.len());
    for (word, tag_counts) in counts {
        let mut best = PosTag::ALL[0];
        let mut best_count = tag_counts[0];
        for (idx, &count) in tag_counts.iter().enumerate().skip(1) {
            if count > best_count {
                best = PosTag::ALL[idx];
                best_count = count;
            }
        }
        table.insert(word.to_string(), best);
    }
    (table, PosTag::Noun)
}

fn initial_tags(
    words: &[Vec<&str>],
    table: &HashMap<String, PosTag>,
    default_tag: PosTag,
) -> Vec<Vec<PosTag>> {
    words
        .iter()
        .map(|sentence| {
            sentence
                .iter()
                .map(|w| table.get(*w).copied().unwrap_or(default_tag))
                .collect()
        })
        .collect()
}

fn error_count(current: &[Vec<PosTag>], gold: &[Vec<PosTag>]) -> usize {
    current
        .iter()
        .zip(gold)
        .map(|(c, g)| c.iter().zip(g).filter(|(a, b)| a != b).count())
        .sum()
}

/// Greedy rule acquisition. Stops when `max_rules` are learned or no
/// candidate rule fixes at least `min_gain` net errors.
pub fn learn_rules(
    sentences: &[Vec<(String, PosTag)>],
    table: &HashMap<String, PosTag>,
    default_tag: PosTag,
    max_rules: usize,
    min_gain: usize,
) -> Vec<TransformRule> {
    assert!(min_gain >= 1, "min_gain must be at least 1");
    let words: Vec<Vec<&str>> = sentences
        .iter()
        .map(|s| s.iter().map(|(w, _)| w.as_str()).collect())
        .collect();
    let gold: Vec<Vec<PosTag>> = sentences
        .iter()
        .map(|s| s.iter().map(|(_, t)| *t).collect())
        .collect();
    let mut current = initial_tags(&words, table, default_tag);
    let mut rules = Vec::new();

    while rules.len() < max_rules {
        let errors_before = error_count(&current, &gold);
        if errors_before == 0 {
            break;
        }

        // every rule instantiable at an error position
        let mut candidates: HashSet<TransformRule> = HashSet::new();
        for (si, sentence) in current.iter().enumerate() {
            for i in 0..sentence.len() {
                if sentence[i] == gold[si][i] {
                    continue;
                }
                let from_tag = sentence[i];
                let to_tag = gold[si][i];
                for template in RuleTemplate::ALL {
                    let trigger = match template {
                        RuleTemplate::PrevTag if i >= 1 => sentence[i - 1].name().to_string(),
                        RuleTemplate::NextTag if i + 1 < sentence.len() => {
                            sentence[i + 1].name().to_string()
                        }
                        RuleTemplate::PrevWord if i >= 1 => words[si][i - 1].to_string(),
                        RuleTemplate::NextWord if i + 1 < sentence.len() => {
                            words[si][i + 1].to_string()
                        }
                        RuleTemplate::Prev2Tag if i >= 2 => sentence[i - 2].name().to_string(),
                        RuleTemplate::Next2Tag if i + 2 < sentence.len() => {
                            sentence[i + 2].name().to_string()
                        }
                        _ => continue,
                    };
                    candidates.insert(TransformRule {
                        from_tag,
                        to_tag,
                        template,
                        trigger,
                    });
                }
            }
        }

        // score by full simulation so gains reflect the actual in-pass
        // visibility semantics of rule application
        let mut best: Option<(usize, TransformRule)> = None;
        for rule in candidates {
            let mut scratch = current.clone();
            for (si, tags) in scratch.iter_mut().enumerate() {
                rule.apply_pass(&words[si], tags);
            }
            let errors_after = error_count(&scratch, &gold);
            if errors_after >= errors_before {
                continue;
            }
            let gain = errors_before - errors_after;
            let better = match &best {
                None => true,
                Some((best_gain, best_rule)) => {
                    (gain, std::cmp::Reverse(rule.tie_break_key()))
                        > (*best_gain, std::cmp::Reverse(best_rule.tie_break_key()))
                }
            };
            if better {
                best = Some((gain, rule));
            }
        }

        match best {
            Some((gain, rule)) if gain >= min_gain => {
                for (si, tags) in current.iter_mut().enumerate() {
                    rule.apply_pass(&words[si], tags);
                }
                rules.push(rule);
            }
            _ => break,
        }
    }
    rules
}

impl TaggerModel {
    /// Full training: lexical table plus learned rules.
    pub fn train(sentences: &[Vec<(String, PosTag)>], max_rules: usize, min_gain: usize) -> Self {
        let (lexical_table, default_tag) = train_initial(sentences);
        let rules = learn_rules(sentences, &lexical_table, default_tag, max_rules, min_gain);
        Self {
            lexical_table,
            default_tag,
            rules,
        }
    }

    /// Tags a token sequence: lexical lookup (default for unknown
    /// words), then every rule in learned order.
    pub fn tag(&self, tokens: &[&str]) -> Vec<(String, PosTag)> {
        let mut tags: Vec<PosTag> = tokens
            .iter()
            .map(|w| {
                self.lexical_table
                    .get(*w)
                    .copied()
                    .unwrap_or(self.default_tag)
            })
            .collect();
        for rule in &self.rules {
            rule.apply_pass(tokens, &mut tags);
        }
        tokens
            .iter()
            .zip(tags)
            .map(|(w, t)| (w.to_string(), t))
            .collect()
    }

    /// Training errors on `sentences` after applying only the first
    /// `rule_count` rules; used to report the learning trajectory.
    pub fn training_errors_with_rules(
        &self,
        sentences: &[Vec<(String, PosTag)>],
        rule_count: usize,
    ) -> usize {
        let truncated = TaggerModel {
            lexical_table: self.lexical_table.clone(),
            default_tag: self.default_tag,
            rules: self.rules[..rule_count].to_vec(),
        };
        sentences
            .iter()
            .map(|sentence| {
                let words: Vec<&str> = sentence.iter().map(|(w, _)| w.as_str()).collect();
                truncated
                    .tag(&words)
                    .iter()
                    .zip(sentence)
                    .filter(|((_, predicted), (_, gold))| predicted != gold)
                    .count()
            })
            .sum()
    }

    /// Plain-text model file: a `#default=<TAG>` header, `word<TAB>TAG`
    /// lexical entries sorted by word, then `RULE<TAB>from<TAB>to<TAB>
    /// template<TAB>trigger` lines in learned order.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = format!("#default={}\n", self.default_tag);
        let mut entries: Vec<(&str, PosTag)> = self
            .lexical_table
            .iter()
            .map(|(w, t)| (w.as_str(), *t))
            .collect();
        entries.sort();
        for (word, tag) in entries {
            out.push_str(&format!("{word}\t{tag}\n"));
        }
        for rule in &self.rules {
            out.push_str(&format!(
                "RULE\t{}\t{}\t{}\t{}\n",
                rule.from_tag, rule.to_tag, rule.template, rule.trigger
            ));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_utf8(path)?;
        let context = path.display().to_string();
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(&context, 1, "missing #default header"))?;
        let default_tag: PosTag = header
            .strip_prefix("#default=")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(&context, 1, format!("malformed header {header:?}")))?;
        let mut model = TaggerModel {
            lexical_table: HashMap::new(),
            default_tag,
            rules: Vec::new(),
        };
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields[0] == "RULE" {
                if fields.len() != 5 {
                    return Err(Error::parse(&context, lineno, "malformed rule line"));
                }
                let parse_tag = |s: &str| -> Result<PosTag> {
                    s.parse()
                        .map_err(|e: String| Error::parse(&context, lineno, e))
                };
                let rule = TransformRule {
                    from_tag: parse_tag(fields[1])?,
                    to_tag: parse_tag(fields[2])?,
                    template: fields[3]
                        .parse()
                        .map_err(|e: String| Error::parse(&context, lineno, e))?,
                    trigger: fields[4].to_string(),
                };
                if rule.from_tag == rule.to_tag {
                    return Err(Error::parse(
                        &context,
                        lineno,
                        format!("rule rewrites {} to itself", rule.from_tag),
                    ));
                }
                model.rules.push(rule);
            } else {
                if fields.len() != 2 {
                    return Err(Error::parse(&context, lineno, "expected word<TAB>TAG"));
                }
                let tag: PosTag = fields[1]
                    .parse()
                    .map_err(|e: String| Error::parse(&context, lineno, e))?;
                model.lexical_table.insert(fields[0].to_string(), tag);
            }
        }
        Ok(model)
    }
}

/// Parses a `word/TAG` annotated corpus, one sentence per line. Tokens
/// split on the last '/' so words containing slashes stay intact.
pub fn parse_tagged_sentences(text: &str, context: &str) -> Result<Vec<Vec<(String, PosTag)>>> {
    let mut sentences = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut sentence = Vec::new();
        for token in line.split(' ').filter(|t| !t.is_empty()) {
            let (word, tag) = token.rsplit_once('/').ok_or_else(|| {
                Error::parse(context, lineno, format!("token {token:?} has no /TAG"))
            })?;
            if word.is_empty() {
                return Err(Error::parse(
                    context,
                    lineno,
                    format!("empty word in {token:?}"),
                ));
            }
            let tag: PosTag = tag
                .parse()
                .map_err(|e: String| Error::parse(context, lineno, e))?;
            sentence.push((word.to_string(), tag));
        }
        sentences.push(sentence);
    }
    Ok(sentences)
}
