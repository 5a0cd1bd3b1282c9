//! Orthographic normalization of Buckwalter transcripts.
//!
//! Three character classes that are written inconsistently in dialectal
//! Arabic are folded to one representative each:
//!
//! | class       | members         | representative |
//! |-------------|-----------------|----------------|
//! | Alif        | `A > < \|`      | `A`            |
//! | Ya          | `y Y`           | `y`            |
//! | Ta-Marbuta  | `p h`           | `h`            |
//!
//! Cleaning additionally removes diacritics, punctuation, zero-width
//! characters and single-letter words.

use serde::{Deserialize, Serialize};

use super::buckwalter::{arabic_to_bw, is_arabic_script, is_bw_char};
use super::Transcript;

/// Harakat (`F N K a u i ~ o`) plus tatweel (`_`), in Buckwalter.
pub const DIACRITICS: [char; 9] = ['F', 'N', 'K', 'a', 'u', 'i', '~', 'o', '_'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationPolicy {
    pub fold_alif: bool,
    pub fold_ya: bool,
    pub fold_ta_marbuta: bool,
    pub strip_diacritics: bool,
    pub strip_punctuation: bool,
    pub drop_single_char_words: bool,
}

impl Default for NormalizationPolicy {
    fn default() -> Self {
        NormalizationPolicy {
            fold_alif: true,
            fold_ya: true,
            fold_ta_marbuta: true,
            strip_diacritics: true,
            strip_punctuation: true,
            drop_single_char_words: true,
        }
    }
}

impl NormalizationPolicy {
    /// Only the three character folds, no cleaning.
    pub fn folds_only() -> Self {
        NormalizationPolicy {
            fold_alif: true,
            fold_ya: true,
            fold_ta_marbuta: true,
            strip_diacritics: false,
            strip_punctuation: false,
            drop_single_char_words: false,
        }
    }

    pub fn none() -> Self {
        NormalizationPolicy {
            fold_alif: false,
            fold_ya: false,
            fold_ta_marbuta: false,
            strip_diacritics: false,
            strip_punctuation: false,
            drop_single_char_words: false,
        }
    }
}

pub fn is_diacritic(c: char) -> bool {
    DIACRITICS.contains(&c)
}

fn is_zero_width(c: char) -> bool {
    matches!(c, '\u{200B}'..='\u{200F}' | '\u{2060}' | '\u{FEFF}')
}

/// Punctuation that is not part of the Buckwalter alphabet. Several ASCII
/// symbols (`' | > < & } * $ ~ _ { \``) encode letters and are kept.
pub fn is_punctuation(c: char) -> bool {
    if is_bw_char(c) {
        return false;
    }
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{060C}' | '\u{061B}' | '\u{061F}' | '\u{066A}'..='\u{066D}' | '\u{06D4}'
                | '\u{00A1}' | '\u{00A7}' | '\u{00AB}' | '\u{00B6}' | '\u{00B7}' | '\u{00BB}'
                | '\u{00BF}' | '\u{2010}'..='\u{2027}' | '\u{2030}'..='\u{205E}'
        )
}

fn is_letter(c: char) -> bool {
    (is_bw_char(c) && !is_diacritic(c)) || c.is_alphabetic()
}

fn fold(c: char, policy: &NormalizationPolicy) -> char {
    match c {
        '>' | '<' | '|' if policy.fold_alif => 'A',
        'Y' if policy.fold_ya => 'y',
        'p' if policy.fold_ta_marbuta => 'h',
        _ => c,
    }
}

/// Normalizes a single token. Returns `None` when the token is removed.
/// Tokens containing Arabic script are transliterated to Buckwalter first.
pub fn normalize_token(token: &str, policy: &NormalizationPolicy) -> Option<String> {
    let bw;
    let token = if token.chars().any(is_arabic_script) {
        bw = arabic_to_bw(token);
        bw.as_str()
    } else {
        token
    };
    let out: String = token
        .chars()
        .filter(|&c| !is_zero_width(c))
        .filter(|&c| !(policy.strip_punctuation && is_punctuation(c)))
        .filter(|&c| !(policy.strip_diacritics && is_diacritic(c)))
        .map(|c| fold(c, policy))
        .collect();
    let mut chars = out.chars();
    match (chars.next(), chars.next()) {
        (None, _) => None,
        (Some(c), None) if policy.drop_single_char_words && is_letter(c) => None,
        _ => Some(out),
    }
}

pub fn normalize(transcript: &Transcript, policy: &NormalizationPolicy) -> Transcript {
    transcript.map_tokens(|t| normalize_token(t, policy).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(text: &str, policy: NormalizationPolicy) -> String {
        normalize(&Transcript::from_text("u", text), &policy).text()
    }

    #[test]
    fn alif_fold() {
        let p = NormalizationPolicy {
            fold_alif: true,
            ..NormalizationPolicy::none()
        };
        assert_eq!(norm(">nh", p), "Anh");
        assert_eq!(norm("<nh", p), "Anh");
        assert_eq!(norm("|nh", p), "Anh");
    }

    #[test]
    fn ya_fold_everywhere() {
        assert_eq!(norm("AldEwY", NormalizationPolicy::default()), "AldEwy");
        assert_eq!(norm("<lY", NormalizationPolicy::folds_only()), "Aly");
    }

    #[test]
    fn ta_marbuta_fold() {
        assert_eq!(norm("AldEwp", NormalizationPolicy::folds_only()), "AldEwh");
    }

    #[test]
    fn cleaning() {
        let p = NormalizationPolicy::default();
        assert_eq!(norm("kataba , w ktAb.", p), "ktb ktAb");
        assert_eq!(norm("5 b", p), "5");
        assert_eq!(norm("k\u{200D}tAb", p), "ktAb");
        // shadda+fatha on a single letter still leaves one letter
        assert_eq!(norm("b~a ktb", p), "ktb");
    }

    #[test]
    fn bw_symbols_are_not_punctuation() {
        let p = NormalizationPolicy::default();
        assert_eq!(norm("$y' *lk", p), "$y' *lk");
        assert_eq!(norm("{lmslmyn", p), "{lmslmyn");
    }

    #[test]
    fn arabic_script_is_transliterated() {
        let p = NormalizationPolicy::default();
        assert_eq!(norm("أنه، كتاب", p), "Anh ktAb");
    }

    #[test]
    fn disabled_policy_is_identity() {
        assert_eq!(
            norm(">nh AldEwY p . k", NormalizationPolicy::none()),
            ">nh AldEwY p . k"
        );
    }
}
