//! Word and POS-tag n-gram models (bigram, trigram).
//!
//! Counts are raw maximum-likelihood counts over contiguous n-grams
//! within each line; n-grams never cross line boundaries. No smoothing:
//! detection uses set membership and candidate selection uses raw count
//! mass, never smoothed probabilities.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{read_utf8, Error, Result};

/// Separator used for the internal tuple keys; tokens may not contain it.
const KEY_SEP: char = '\t';

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NGramUnit {
    Word,
    Tag,
}

impl NGramUnit {
    pub fn name(self) -> &'static str {
        match self {
            NGramUnit::Word => "word",
            NGramUnit::Tag => "tag",
        }
    }
}

impl fmt::Display for NGramUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NGramUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "word" => Ok(NGramUnit::Word),
            "tag" => Ok(NGramUnit::Tag),
            other => Err(format!("unknown n-gram unit `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NGramModel {
    order: usize,
    unit: NGramUnit,
    counts: HashMap<String, u64>,
    context_totals: HashMap<String, u64>,
    vocabulary: HashSet<String>,
}

fn key_of(tokens: &[&str]) -> String {
    tokens.join("\t")
}

/// Counts contiguous n-grams per line of `lines`. Only orders 2 and 3
/// are supported; anything else is a configuration error.
pub fn build_ngram_model(
    lines: &[Vec<String>],
    order: usize,
    unit: NGramUnit,
) -> Result<NGramModel> {
    if !(2..=3).contains(&order) {
        return Err(Error::Config(format!(
            "unsupported n-gram order {order} (expected 2 or 3)"
        )));
    }
    let mut model = NGramModel {
        order,
        unit,
        counts: HashMap::new(),
        context_totals: HashMap::new(),
        vocabulary: HashSet::new(),
    };
    for line in lines {
        for token in line {
            if token.contains(KEY_SEP) || token.contains('\n') {
                return Err(Error::Config(format!(
                    "token {token:?} contains a tab or newline"
                )));
            }
            model.vocabulary.insert(token.clone());
        }
        if line.len() < order {
            continue;
        }
        for window in line.windows(order) {
            let refs: Vec<&str> = window.iter().map(String::as_str).collect();
            *model.counts.entry(key_of(&refs)).or_insert(0) += 1;
            *model
                .context_totals
                .entry(key_of(&refs[..order - 1]))
                .or_insert(0) += 1;
        }
    }
    Ok(model)
}

impl NGramModel {
    pub fn empty(order: usize, unit: NGramUnit) -> Result<Self> {
        build_ngram_model(&[], order, unit)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn unit(&self) -> NGramUnit {
        self.unit
    }

    /// Number of distinct n-grams.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum of all n-gram counts.
    pub fn total_count(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn vocabulary(&self) -> &HashSet<String> {
        &self.vocabulary
    }

    /// Raw count of an n-gram; the tuple length must equal the order.
    pub fn count(&self, tuple: &[&str]) -> u64 {
        assert_eq!(
            tuple.len(),
            self.order,
            "tuple length {} does not match model order {}",
            tuple.len(),
            self.order
        );
        self.counts.get(&key_of(tuple)).copied().unwrap_or(0)
    }

    pub fn contains(&self, tuple: &[&str]) -> bool {
        self.count(tuple) > 0
    }

    /// Maximum-likelihood transition probability of `next` given an
    /// (order-1)-tuple context: count(context + next) / count(context).
    /// Zero when the context or the pair was never seen.
    pub fn transition_probability(&self, context: &[&str], next: &str) -> f64 {
        assert_eq!(
            context.len(),
            self.order - 1,
            "context length {} does not match model order {}",
            context.len(),
            self.order
        );
        let total = match self.context_totals.get(&key_of(context)) {
            Some(&t) if t > 0 => t,
            _ => return 0.0,
        };
        let mut tuple: Vec<&str> = context.to_vec();
        tuple.push(next);
        self.counts.get(&key_of(&tuple)).copied().unwrap_or(0) as f64 / total as f64
    }

    /// All (tuple, count) entries, sorted by tuple.
    pub fn entries(&self) -> Vec<(Vec<String>, u64)> {
        let mut out: Vec<(Vec<String>, u64)> = self
            .counts
            .iter()
            .map(|(k, &c)| (k.split(KEY_SEP).map(str::to_string).collect(), c))
            .collect();
        out.sort();
        out
    }

    /// Writes the model as TSV: a `#order=<n> unit=<word|tag>` header,
    /// then one `tok1<TAB>tok2[<TAB>tok3]<TAB>count` row per n-gram.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = format!("#order={} unit={}\n", self.order, self.unit);
        for (tuple, count) in self.entries() {
            out.push_str(&tuple.join("\t"));
            out.push('\t');
            out.push_str(&count.to_string());
            out.push('\n');
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
            .ok_or_else(|| Error::parse(&context, 1, "missing #order header"))?;
        let (order, unit) = parse_header(header)
            .ok_or_else(|| Error::parse(&context, 1, format!("malformed header {header:?}")))?;
        if !(2..=3).contains(&order) {
            return Err(Error::parse(
                &context,
                1,
                format!("unsupported n-gram order {order}"),
            ));
        }
        let mut model = NGramModel {
            order,
            unit,
            counts: HashMap::new(),
            context_totals: HashMap::new(),
            vocabulary: HashSet::new(),
        };
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(KEY_SEP).collect();
            if fields.len() != order + 1 {
                return Err(Error::parse(
                    &context,
                    lineno,
                    format!("expected {} tab-separated fields", order + 1),
                ));
            }
            let count: u64 = fields[order].parse().map_err(|_| {
                Error::parse(&context, lineno, format!("bad count {:?}", fields[order]))
            })?;
            if count == 0 {
                return Err(Error::parse(&context, lineno, "count must be positive"));
            }
            let tokens = &fields[..order];
            if tokens.iter().any(|t| t.is_empty()) {
                return Err(Error::parse(&context, lineno, "empty token"));
            }
            for t in tokens {
                model.vocabulary.insert((*t).to_string());
            }
            *model.counts.entry(key_of(tokens)).or_insert(0) += count;
            *model
                .context_totals
                .entry(key_of(&tokens[..order - 1]))
                .or_insert(0) += count;
        }
        Ok(model)
    }
}

fn parse_header(line: &str) -> Option<(usize, NGramUnit)> {
    let rest = line.strip_prefix("#order=")?;
    let (order_str, unit_str) = rest.split_once(" unit=")?;
    let order: usize = order_str.parse().ok()?;
    let unit: NGramUnit = unit_str.trim().parse().ok()?;
    Some((order, unit))
}
