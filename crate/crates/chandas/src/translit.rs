//! Script handling: Devanagari-to-IAST conversion and segmentation of IAST
//! text into a phoneme stream.
//!
//! One Sanskrit sound often spans several Latin characters ("kh", "ai", "ṭh"),
//! so all downstream analysis works on [`Phoneme`]s rather than chars. The
//! tokenizer is longest-match: an aspirated stop like "th" is always one
//! consonant phoneme, never a "t" + "h" cluster, unless the writer forces the
//! cluster reading with an interpunct ("t·h").

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Errors from script conversion and tokenization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslitError {
    /// A code point with no mapping, at the given byte offset of the
    /// (normalized) input.
    #[error("unknown character {ch:?} at byte offset {offset}")]
    UnknownCharacter { ch: char, offset: usize },
    /// A dependent vowel sign or virama with no consonant to attach to.
    #[error("orphan vowel sign or virama {ch:?} at byte offset {offset}")]
    OrphanSign { ch: char, offset: usize },
}

/// Kind of a single phoneme after tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhonemeKind {
    ShortVowel,
    LongVowel,
    /// Varga consonant (stops and class nasals), including aspirated stops as
    /// single units.
    Consonant,
    SemiVowel,
    Sibilant,
    /// "h".
    Aspirate,
    Anusvara,
    Visarga,
    /// "|", half-verse terminator.
    Danda,
    /// "||", verse terminator.
    DoubleDanda,
    Space,
    LineFeed,
    /// "'" (avagraha); transparent for weight purposes.
    Avagraha,
}

impl PhonemeKind {
    /// True for short and long vowels.
    pub fn is_vowel(self) -> bool {
        matches!(self, PhonemeKind::ShortVowel | PhonemeKind::LongVowel)
    }

    /// True for the four consonantal kinds that participate in cluster
    /// detection.
    pub fn is_consonantal(self) -> bool {
        matches!(
            self,
            PhonemeKind::Consonant
                | PhonemeKind::SemiVowel
                | PhonemeKind::Sibilant
                | PhonemeKind::Aspirate
        )
    }

    /// True for phonemes that are invisible to weight analysis (clusters see
    /// through them).
    pub fn is_transparent(self) -> bool {
        matches!(
            self,
            PhonemeKind::Space | PhonemeKind::LineFeed | PhonemeKind::Avagraha
        )
    }
}

/// One Sanskrit sound unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phoneme {
    pub kind: PhonemeKind,
    /// Canonical IAST spelling ("kh", "ai", "ḥ", ...).
    pub surface: &'static str,
    /// Byte offsets into the normalized input text.
    pub span: Range<usize>,
}

impl Phoneme {
    /// True if this consonant is an unaspirated stop (column 1 or 3 of the
    /// varga grid).
    pub fn is_column_1_or_3(&self) -> bool {
        COLUMNS_1_AND_3.contains(&self.surface)
    }

    /// True if this consonant is an aspirated stop (column 2 or 4).
    pub fn is_column_2_or_4(&self) -> bool {
        COLUMNS_2_AND_4.contains(&self.surface)
    }
}

impl fmt::Display for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.surface)
    }
}

pub const SHORT_VOWELS: &[&str] = &["a", "i", "u", "ṛ", "ḷ"];
pub const LONG_VOWELS: &[&str] = &["ā", "ī", "ū", "ṝ", "ḹ", "e", "ai", "o", "au"];
pub const CONSONANTS: &[&str] = &[
    "k", "kh", "g", "gh", "ṅ", "c", "ch", "j", "jh", "ñ", "ṭ", "ṭh", "ḍ", "ḍh", "ṇ", "t", "th",
    "d", "dh", "n", "p", "ph", "b", "bh", "m", "ḻ",
];
pub const SEMI_VOWELS: &[&str] = &["y", "r", "l", "v"];
pub const SIBILANTS: &[&str] = &["ś", "ṣ", "s"];
pub const ASPIRATE: &[&str] = &["h"];
pub const COLUMNS_1_AND_3: &[&str] = &["k", "g", "c", "j", "ṭ", "ḍ", "t", "d", "p", "b"];
pub const COLUMNS_2_AND_4: &[&str] =
    &["kh", "gh", "ch", "jh", "ṭh", "ḍh", "th", "dh", "ph", "bh"];

/// The letter sets the weight rules are phrased in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhonemeClass {
    ShortVowels,
    LongVowels,
    Vowels,
    Consonants,
    SemiVowels,
    Sibilants,
    Aspirate,
    Anusvara,
    Visarga,
    Columns1And3,
    Columns2And4,
    FullStop,
}

impl PhonemeClass {
    /// Canonical surfaces belonging to this set.
    pub fn members(self) -> Vec<&'static str> {
        match self {
            PhonemeClass::ShortVowels => SHORT_VOWELS.to_vec(),
            PhonemeClass::LongVowels => LONG_VOWELS.to_vec(),
            PhonemeClass::Vowels => {
                let mut v = SHORT_VOWELS.to_vec();
                v.extend_from_slice(LONG_VOWELS);
                v
            }
            PhonemeClass::Consonants => CONSONANTS.to_vec(),
            PhonemeClass::SemiVowels => SEMI_VOWELS.to_vec(),
            PhonemeClass::Sibilants => SIBILANTS.to_vec(),
            PhonemeClass::Aspirate => ASPIRATE.to_vec(),
            PhonemeClass::Anusvara => vec!["ṁ"],
            PhonemeClass::Visarga => vec!["ḥ"],
            PhonemeClass::Columns1And3 => COLUMNS_1_AND_3.to_vec(),
            PhonemeClass::Columns2And4 => COLUMNS_2_AND_4.to_vec(),
            PhonemeClass::FullStop => vec!["|", "||"],
        }
    }

    pub fn contains(self, surface: &str) -> bool {
        self.members().contains(&surface)
    }
}

/// A tokenizer table entry: IAST spelling as typed, canonical surface, kind.
struct Entry {
    spelling: &'static str,
    surface: &'static str,
    kind: PhonemeKind,
}

const fn e(spelling: &'static str, surface: &'static str, kind: PhonemeKind) -> Entry {
    Entry {
        spelling,
        surface,
        kind,
    }
}

/// Full match table. Alternate spellings (anusvara variants, curly
/// apostrophe) normalize to one canonical surface.
static ENTRIES: &[Entry] = &[
    e("ā", "ā", PhonemeKind::LongVowel),
    e("ī", "ī", PhonemeKind::LongVowel),
    e("ū", "ū", PhonemeKind::LongVowel),
    e("ṝ", "ṝ", PhonemeKind::LongVowel),
    e("ḹ", "ḹ", PhonemeKind::LongVowel),
    e("e", "e", PhonemeKind::LongVowel),
    e("ai", "ai", PhonemeKind::LongVowel),
    e("o", "o", PhonemeKind::LongVowel),
    e("au", "au", PhonemeKind::LongVowel),
    e("a", "a", PhonemeKind::ShortVowel),
    e("i", "i", PhonemeKind::ShortVowel),
    e("u", "u", PhonemeKind::ShortVowel),
    e("ṛ", "ṛ", PhonemeKind::ShortVowel),
    e("ḷ", "ḷ", PhonemeKind::ShortVowel),
    e("k", "k", PhonemeKind::Consonant),
    e("kh", "kh", PhonemeKind::Consonant),
    e("g", "g", PhonemeKind::Consonant),
    e("gh", "gh", PhonemeKind::Consonant),
    e("ṅ", "ṅ", PhonemeKind::Consonant),
    e("c", "c", PhonemeKind::Consonant),
    e("ch", "ch", PhonemeKind::Consonant),
    e("j", "j", PhonemeKind::Consonant),
    e("jh", "jh", PhonemeKind::Consonant),
    e("ñ", "ñ", PhonemeKind::Consonant),
    e("ṭ", "ṭ", PhonemeKind::Consonant),
    e("ṭh", "ṭh", PhonemeKind::Consonant),
    e("ḍ", "ḍ", PhonemeKind::Consonant),
    e("ḍh", "ḍh", PhonemeKind::Consonant),
    e("ṇ", "ṇ", PhonemeKind::Consonant),
    e("t", "t", PhonemeKind::Consonant),
    e("th", "th", PhonemeKind::Consonant),
    e("d", "d", PhonemeKind::Consonant),
    e("dh", "dh", PhonemeKind::Consonant),
    e("n", "n", PhonemeKind::Consonant),
    e("p", "p", PhonemeKind::Consonant),
    e("ph", "ph", PhonemeKind::Consonant),
    e("b", "b", PhonemeKind::Consonant),
    e("bh", "bh", PhonemeKind::Consonant),
    e("m", "m", PhonemeKind::Consonant),
    e("ḻ", "ḻ", PhonemeKind::Consonant),
    e("y", "y", PhonemeKind::SemiVowel),
    e("r", "r", PhonemeKind::SemiVowel),
    e("l", "l", PhonemeKind::SemiVowel),
    e("v", "v", PhonemeKind::SemiVowel),
    e("ś", "ś", PhonemeKind::Sibilant),
    e("ṣ", "ṣ", PhonemeKind::Sibilant),
    e("s", "s", PhonemeKind::Sibilant),
    e("h", "h", PhonemeKind::Aspirate),
    // all anusvara spellings collapse to "ṁ"
    e("ṁ", "ṁ", PhonemeKind::Anusvara),
    e("ṃ", "ṁ", PhonemeKind::Anusvara),
    e("m̐", "ṁ", PhonemeKind::Anusvara),
    e("ḥ", "ḥ", PhonemeKind::Visarga),
    e("||", "||", PhonemeKind::DoubleDanda),
    e("|", "|", PhonemeKind::Danda),
    e(" ", " ", PhonemeKind::Space),
    e("\t", " ", PhonemeKind::Space),
    e("\r", " ", PhonemeKind::Space),
    e("\n", "\n", PhonemeKind::LineFeed),
    e("'", "'", PhonemeKind::Avagraha),
    e("\u{2019}", "'", PhonemeKind::Avagraha),
];

fn entry_map() -> &'static HashMap<&'static str, (&'static str, PhonemeKind)> {
    static MAP: OnceLock<HashMap<&'static str, (&'static str, PhonemeKind)>> = OnceLock::new();
    MAP.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|entry| (entry.spelling, (entry.surface, entry.kind)))
            .collect()
    })
}

fn max_spelling_chars() -> usize {
    static MAX: OnceLock<usize> = OnceLock::new();
    *MAX.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|entry| entry.spelling.chars().count())
            .max()
            .unwrap()
    })
}

/// NFC-normalize and case-fold text before tokenization. All byte offsets
/// reported downstream refer to the result of this function.
pub fn normalize(text: &str) -> String {
    text.nfc().flat_map(char::to_lowercase).collect()
}

/// Segment IAST text into phonemes by longest match.
///
/// The input must already be in the form produced by [`normalize`] (NFC,
/// lowercase); [`devanagari_to_latin`] output satisfies this. An interpunct
/// "·" breaks a match without emitting anything, so "t·h" reads as two
/// phonemes where "th" would read as one.
pub fn tokenize(text: &str) -> Result<Vec<Phoneme>, TranslitError> {
    let map = entry_map();
    let max_chars = max_spelling_chars();
    let mut out = Vec::new();
    let mut offset = 0;
    while offset < text.len() {
        let rest = &text[offset..];
        let first = rest.chars().next().unwrap();
        if first == '·' {
            offset += first.len_utf8();
            continue;
        }
        // candidate end offsets, longest first
        let mut ends: Vec<usize> = rest
            .char_indices()
            .take(max_chars)
            .map(|(i, c)| i + c.len_utf8())
            .collect();
        ends.reverse();
        let mut matched = None;
        for end in ends {
            if let Some(&(surface, kind)) = map.get(&rest[..end]) {
                matched = Some((end, surface, kind));
                break;
            }
        }
        match matched {
            Some((len, surface, kind)) => {
                out.push(Phoneme {
                    kind,
                    surface,
                    span: offset..offset + len,
                });
                offset += len;
            }
            None => {
                return Err(TranslitError::UnknownCharacter { ch: first, offset });
            }
        }
    }
    Ok(out)
}

/// Role of a Devanagari code point in the mapping table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Vowel,
    Sign,
    Consonant,
    Mark,
    Virama,
    Punct,
}

/// Devanagari-to-IAST code point table, loaded from a data file.
pub struct DevanagariMap {
    rows: HashMap<char, (Role, String)>,
}

/// The mapping table shipped with the crate (`data/deva_map.tsv`).
static BUILTIN_MAP: &str = include_str!("../data/deva_map.tsv");

impl DevanagariMap {
    /// The built-in table.
    pub fn builtin() -> &'static DevanagariMap {
        static MAP: OnceLock<DevanagariMap> = OnceLock::new();
        MAP.get_or_init(|| DevanagariMap::parse(BUILTIN_MAP).expect("builtin map is well-formed"))
    }

    /// Parse a mapping table; later lines override earlier ones.
    pub fn parse(data: &str) -> Result<DevanagariMap, String> {
        let mut rows = HashMap::new();
        for (lineno, line) in data.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (hex, role, surface) = match (fields.next(), fields.next(), fields.next()) {
                (Some(h), Some(r), Some(s)) => (h, r, s),
                _ => return Err(format!("line {}: expected 3 fields", lineno + 1)),
            };
            let cp = u32::from_str_radix(hex, 16)
                .map_err(|_| format!("line {}: bad code point {hex:?}", lineno + 1))?;
            let ch = char::from_u32(cp)
                .ok_or_else(|| format!("line {}: invalid code point {hex:?}", lineno + 1))?;
            let role = match role {
                "vowel" => Role::Vowel,
                "sign" => Role::Sign,
                "consonant" => Role::Consonant,
                "mark" => Role::Mark,
                "virama" => Role::Virama,
                "punct" => Role::Punct,
                other => return Err(format!("line {}: unknown role {other:?}", lineno + 1)),
            };
            rows.insert(ch, (role, surface.to_string()));
        }
        Ok(DevanagariMap { rows })
    }

    pub fn from_file(path: &std::path::Path) -> Result<DevanagariMap, String> {
        let data = std::fs::read_to_string(path).map_err(|err| err.to_string())?;
        DevanagariMap::parse(&data)
    }
}

/// True if the text contains any character of the Devanagari block.
pub fn contains_devanagari(text: &str) -> bool {
    text.chars().any(|c| ('\u{0900}'..='\u{097F}').contains(&c))
}

/// Convert Devanagari text to IAST.
///
/// A consonant followed by a virama emits bare; a consonant with neither
/// virama nor vowel sign emits with the inherent "a". Whitespace and ASCII
/// danda marks pass through; zero-width joiners are dropped.
pub fn devanagari_to_latin(map: &DevanagariMap, text: &str) -> Result<String, TranslitError> {
    let text = normalize(text);
    let mut out = String::with_capacity(text.len());
    // consonant awaiting its vowel
    let mut pending: Option<&str> = None;
    let mut flush = |out: &mut String, pending: &mut Option<&str>| {
        if let Some(c) = pending.take() {
            out.push_str(c);
            out.push('a');
        }
    };
    for (offset, ch) in text.char_indices() {
        match map.rows.get(&ch) {
            Some((Role::Consonant, surface)) => {
                flush(&mut out, &mut pending);
                pending = Some(surface);
            }
            Some((Role::Vowel, surface)) => {
                flush(&mut out, &mut pending);
                out.push_str(surface);
            }
            Some((Role::Sign, surface)) => match pending.take() {
                Some(c) => {
                    out.push_str(c);
                    out.push_str(surface);
                }
                None => return Err(TranslitError::OrphanSign { ch, offset }),
            },
            Some((Role::Virama, _)) => match pending.take() {
                Some(c) => out.push_str(c),
                None => return Err(TranslitError::OrphanSign { ch, offset }),
            },
            Some((Role::Mark, surface)) | Some((Role::Punct, surface)) => {
                flush(&mut out, &mut pending);
                out.push_str(surface);
            }
            None => match ch {
                ' ' | '\t' | '\r' | '\n' | '|' | '\'' => {
                    flush(&mut out, &mut pending);
                    out.push(ch);
                }
                '\u{200C}' | '\u{200D}' => {} // zero-width (non-)joiner
                _ => return Err(TranslitError::UnknownCharacter { ch, offset }),
            },
        }
    }
    flush(&mut out, &mut pending);
    Ok(normalize(&out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<&'static str> {
        tokenize(&normalize(text))
            .unwrap()
            .iter()
            .map(|p| p.surface)
            .collect()
    }

    #[test]
    fn devanagari_vra() {
        let map = DevanagariMap::builtin();
        assert_eq!(devanagari_to_latin(map, "व्र").unwrap(), "vra");
    }

    #[test]
    fn devanagari_lone_vowel() {
        let map = DevanagariMap::builtin();
        assert_eq!(devanagari_to_latin(map, "अ").unwrap(), "a");
    }

    #[test]
    fn devanagari_harih() {
        let map = DevanagariMap::builtin();
        assert_eq!(devanagari_to_latin(map, "हरिः").unwrap(), "hariḥ");
    }

    #[test]
    fn devanagari_inherent_and_signs() {
        let map = DevanagariMap::builtin();
        assert_eq!(devanagari_to_latin(map, "कर").unwrap(), "kara");
        assert_eq!(devanagari_to_latin(map, "कार").unwrap(), "kāra");
        assert_eq!(devanagari_to_latin(map, "वन्दे").unwrap(), "vande");
        assert_eq!(
            devanagari_to_latin(map, "धर्मक्षेत्रे").unwrap(),
            "dharmakṣetre"
        );
    }

    #[test]
    fn devanagari_danda_marks() {
        let map = DevanagariMap::builtin();
        assert_eq!(devanagari_to_latin(map, "क । ख ॥").unwrap(), "ka | kha ||");
        assert_eq!(devanagari_to_latin(map, "अंशः").unwrap(), "aṁśaḥ");
    }

    #[test]
    fn devanagari_unknown_character() {
        let map = DevanagariMap::builtin();
        let err = devanagari_to_latin(map, "क१").unwrap_err();
        assert!(matches!(err, TranslitError::UnknownCharacter { ch: '१', .. }));
    }

    #[test]
    fn tokenize_atha() {
        assert_eq!(surfaces("atha"), vec!["a", "th", "a"]);
    }

    #[test]
    fn tokenize_diphthong() {
        let ps = tokenize("ai").unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].kind, PhonemeKind::LongVowel);
        assert_eq!(ps[0].surface, "ai");
    }

    #[test]
    fn tokenize_double_danda() {
        let ps = tokenize("||").unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].kind, PhonemeKind::DoubleDanda);
    }

    #[test]
    fn tokenize_interpunct_forces_cluster() {
        assert_eq!(surfaces("t·ha"), vec!["t", "h", "a"]);
        assert_eq!(surfaces("tha"), vec!["th", "a"]);
    }

    #[test]
    fn tokenize_anusvara_variants() {
        for text in ["aṁ", "aṃ", "am̐"] {
            let ps = tokenize(&normalize(text)).unwrap();
            assert_eq!(ps.len(), 2, "{text}");
            assert_eq!(ps[1].kind, PhonemeKind::Anusvara);
            assert_eq!(ps[1].surface, "ṁ");
        }
    }

    #[test]
    fn tokenize_decomposed_input() {
        // "ā" typed as a + combining macron
        let ps = tokenize(&normalize("a\u{0304}")).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].surface, "ā");
    }

    #[test]
    fn tokenize_unknown() {
        let err = tokenize("aqa").unwrap_err();
        assert_eq!(err, TranslitError::UnknownCharacter { ch: 'q', offset: 1 });
    }

    #[test]
    fn class_membership() {
        assert_eq!(
            PhonemeClass::Vowels.members().len(),
            PhonemeClass::ShortVowels.members().len() + PhonemeClass::LongVowels.members().len()
        );
        for s in ["k", "g", "c", "j", "ṭ", "ḍ", "t", "d", "p", "b"] {
            assert!(PhonemeClass::Columns1And3.contains(s));
        }
        for s in ["kh", "gh", "ch", "jh", "ṭh", "ḍh", "th", "dh", "ph", "bh"] {
            assert!(PhonemeClass::Columns2And4.contains(s));
        }
        assert!(!PhonemeClass::Columns1And3.contains("kh"));
    }

    #[test]
    fn no_unfused_aspirate_pairs() {
        // longest match must fuse stop + h into the aspirated stop
        for text in ["katha", "gadha", "apha", "abhra"] {
            let ps = tokenize(text).unwrap();
            for pair in ps.windows(2) {
                let fused = format!("{}{}", pair[0].surface, pair[1].surface);
                assert!(
                    !(pair[0].is_column_1_or_3()
                        && pair[1].kind == PhonemeKind::Aspirate
                        && COLUMNS_2_AND_4.contains(&fused.as_str())),
                    "unfused aspirate in {text}: {fused}"
                );
            }
        }
    }

    #[test]
    fn round_trip_concatenation() {
        let map = DevanagariMap::builtin();
        for deva in ["व्र", "हरिः", "वन्दे गुरूनाम्", "अथ । इति ॥"] {
            let latin = devanagari_to_latin(map, deva).unwrap();
            let joined: String = tokenize(&latin).unwrap().iter().map(|p| p.surface).collect();
            assert_eq!(joined, latin);
        }
    }

    #[test]
    fn script_detection() {
        assert!(contains_devanagari("क"));
        assert!(!contains_devanagari("ka"));
    }
}
