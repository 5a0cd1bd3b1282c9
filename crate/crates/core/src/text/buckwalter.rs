//! Buckwalter transliteration between Arabic script and its one-to-one Latin
//! encoding. The table ships as `data/buckwalter.tsv`.

use std::collections::HashMap;
use std::sync::OnceLock;

const TABLE_SOURCE: &str = include_str!("../../data/buckwalter.tsv");

struct Table {
    entries: Vec<(char, char)>,
    to_arabic: HashMap<char, char>,
    to_bw: HashMap<char, char>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut entries = Vec::new();
        for line in TABLE_SOURCE.lines() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let bw = fields.next().and_then(|f| f.chars().next());
            let cp = fields
                .next()
                .and_then(|f| f.strip_prefix("U+"))
                .and_then(|hex| u32::from_str_radix(hex, 16).ok())
                .and_then(char::from_u32);
            match (bw, cp) {
                (Some(bw), Some(cp)) => entries.push((bw, cp)),
                _ => panic!("malformed buckwalter table line: {line:?}"),
            }
        }
        let to_arabic: HashMap<_, _> = entries.iter().copied().collect();
        let to_bw: HashMap<_, _> = entries.iter().map(|&(b, a)| (a, b)).collect();
        assert_eq!(
            to_arabic.len(),
            entries.len(),
            "duplicate buckwalter source"
        );
        assert_eq!(to_bw.len(), entries.len(), "duplicate buckwalter target");
        Table {
            entries,
            to_arabic,
            to_bw,
        }
    })
}

/// All `(buckwalter, arabic)` pairs of the table, in file order.
pub fn table_entries() -> &'static [(char, char)] {
    &table().entries
}

pub fn is_bw_char(c: char) -> bool {
    table().to_arabic.contains_key(&c)
}

pub fn is_arabic_char(c: char) -> bool {
    table().to_bw.contains_key(&c)
}

/// True for any code point in the basic Arabic block.
pub fn is_arabic_script(c: char) -> bool {
    ('\u{0600}'..='\u{06FF}').contains(&c)
}

/// Maps Buckwalter characters to Arabic script; other characters pass through.
pub fn bw_to_arabic(text: &str) -> String {
    let t = table();
    text.chars()
        .map(|c| t.to_arabic.get(&c).copied().unwrap_or(c))
        .collect()
}

/// Maps Arabic-script characters to Buckwalter; other characters pass through.
pub fn arabic_to_bw(text: &str) -> String {
    let t = table();
    text.chars()
        .map(|c| t.to_bw.get(&c).copied().unwrap_or(c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_words() {
        assert_eq!(bw_to_arabic("ktAb"), "كتاب");
        assert_eq!(arabic_to_bw("كتاب"), "ktAb");
        assert_eq!(bw_to_arabic(""), "");
        assert_eq!(arabic_to_bw(&bw_to_arabic("nHn")), "nHn");
    }

    #[test]
    fn fold_classes_are_in_table() {
        for c in ['A', '>', '<', '|', 'y', 'Y', 'p', 'h'] {
            assert!(is_bw_char(c), "{c}");
        }
        assert_eq!(bw_to_arabic(">"), "\u{0623}");
        assert_eq!(bw_to_arabic("<"), "\u{0625}");
        assert_eq!(bw_to_arabic("|"), "\u{0622}");
        assert_eq!(bw_to_arabic("Y"), "\u{0649}");
        assert_eq!(bw_to_arabic("p"), "\u{0629}");
    }

    #[test]
    fn pass_through_outside_table() {
        assert_eq!(bw_to_arabic("12 ?"), "12 ?");
        assert_eq!(arabic_to_bw("abc ٣"), "abc ٣");
    }

    #[test]
    fn table_is_bijective() {
        for &(b, a) in table_entries() {
            assert_eq!(arabic_to_bw(&bw_to_arabic(&b.to_string())), b.to_string());
            assert_eq!(bw_to_arabic(&arabic_to_bw(&a.to_string())), a.to_string());
        }
    }
}
