//! String similarity primitives: Levenshtein distance and the skeleton
//! key used for coarse dictionary matching.

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Minimal number of single-character insertions, deletions and
/// substitutions turning `a` into `b`. Characters are Unicode scalar
/// values, not bytes.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn strip_diacritics(word: &str) -> String {
    word.nfd().filter(|c| !is_combining_mark(*c)).collect()
}

/// Skeleton key of a lowercase word: its first character, then the
/// remaining distinct consonants in first-occurrence order, then the
/// remaining distinct vowels in first-occurrence order. Diacritics are
/// stripped to their base letters before classification, so e.g. "ñ"
/// counts as the consonant "n". Any non-vowel character (including
/// digits) is treated as a consonant.
pub fn skeleton(word: &str) -> String {
    assert!(!word.is_empty(), "skeleton of empty word");
    let mut stripped = strip_diacritics(word);
    if stripped.is_empty() {
        // input was pure combining marks; fall back to the raw form
        stripped = word.to_string();
    }
    let mut unique: Vec<char> = Vec::new();
    for c in stripped.chars() {
        if !unique.contains(&c) {
            unique.push(c);
        }
    }
    let mut out = String::with_capacity(unique.len());
    out.push(unique[0]);
    for &c in &unique[1..] {
        if !is_vowel(c) {
            out.push(c);
        }
    }
    for &c in &unique[1..] {
        if is_vowel(c) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edit_distance_identity() {
        assert_eq!(edit_distance("abc", "abc"), 0);
    }

    #[test]
    fn edit_distance_single_substitution() {
        assert_eq!(edit_distance("casa", "caza"), 1);
    }

    #[test]
    fn edit_distance_kitten_sitting() {
        // full DP table gives 3: k->s, e->i, +g
        assert_eq!(edit_distance("kitten", "sitting"), 3);
    }

    #[test]
    fn edit_distance_empty_sides() {
        assert_eq!(edit_distance("", "abc"), 3);
        assert_eq!(edit_distance("abc", ""), 3);
        assert_eq!(edit_distance("", ""), 0);
    }

    #[test]
    fn edit_distance_counts_chars_not_bytes() {
        assert_eq!(edit_distance("años", "anos"), 1);
    }

    #[test]
    fn skeleton_keeps_first_letter_then_consonants_then_vowels() {
        assert_eq!(skeleton("informatics"), "infrmtcsoa");
        assert_eq!(skeleton("casa"), "csa");
        assert_eq!(skeleton("a"), "a");
    }

    #[test]
    fn skeleton_strips_diacritics() {
        assert_eq!(skeleton("árbol"), skeleton("arbol"));
        assert_eq!(skeleton("niño"), skeleton("nino"));
    }

    #[test]
    fn skeleton_is_idempotent() {
        for w in ["informatics", "casa", "perro", "útil", "zzz", "aeiou"] {
            let s = skeleton(w);
            assert_eq!(skeleton(&s), s, "skeleton not idempotent for {w}");
        }
    }

    #[test]
    fn skeleton_never_grows_past_the_stripped_word() {
        for w in [
            "informatics",
            "casa",
            "perro",
            "pingüino",
            "ñandú",
            "a",
            "oso",
        ] {
            assert!(
                skeleton(w).chars().count() <= strip_diacritics(w).chars().count(),
                "skeleton longer than {w}"
            );
        }
    }

    #[test]
    #[should_panic(expected = "empty word")]
    fn skeleton_rejects_empty() {
        skeleton("");
    }
}
