//! Five-letter words and the lexicons they come from.
//!
//! Two lexicons ship with the crate: the acceptable-guess list and the list of
//! published solutions. Both are plain text, one word per line, lowercase on
//! disk and uppercase in memory.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of letters in every word.
pub const WORD_LEN: usize = 5;

/// Environment variable that points at a directory holding `guesses.txt` and
/// `solutions.txt`, replacing the copies compiled into the binary.
pub const DATA_DIR_ENV: &str = "RANK1_WORDLE_DATA_DIR";

const BUNDLED_GUESSES: &str = include_str!("../data/guesses.txt");
const BUNDLED_SOLUTIONS: &str = include_str!("../data/solutions.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{token:?} is not a five-letter A-Z word")]
pub struct InvalidWord {
    pub token: String,
}

/// A five-letter uppercase word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word([u8; WORD_LEN]);

impl Word {
    /// Parses a token, accepting either case and normalizing to uppercase.
    pub fn parse(token: &str) -> Result<Word, InvalidWord> {
        let bytes = token.as_bytes();
        if bytes.len() != WORD_LEN || !bytes.iter().all(u8::is_ascii_alphabetic) {
            return Err(InvalidWord {
                token: token.to_string(),
            });
        }
        let mut letters = [0u8; WORD_LEN];
        for (dst, src) in letters.iter_mut().zip(bytes) {
            *dst = src.to_ascii_uppercase();
        }
        Ok(Word(letters))
    }

    /// Uppercase ASCII letters.
    pub fn letters(&self) -> &[u8; WORD_LEN] {
        &self.0
    }

    /// Zero-based alphabet indices (A = 0 .. Z = 25), one per position.
    pub fn alphabet_indices(&self) -> [usize; WORD_LEN] {
        self.0.map(|b| usize::from(b - b'A'))
    }

    pub fn as_str(&self) -> &str {
        // Constructed only from ASCII letters.
        std::str::from_utf8(&self.0).expect("word is ASCII")
    }

    /// True if no letter occurs twice.
    pub fn has_distinct_letters(&self) -> bool {
        let mut seen = 0u32;
        for idx in self.alphabet_indices() {
            if seen & (1 << idx) != 0 {
                return false;
            }
            seen |= 1 << idx;
        }
        true
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.as_str())
    }
}

impl FromStr for Word {
    type Err = InvalidWord;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {token:?} is not a five-letter A-Z word")]
    Format { line: usize, token: String },
    #[error("line {line}: duplicate word {word}")]
    Duplicate { line: usize, word: Word },
}

/// An ordered, duplicate-free list of words.
///
/// Iteration follows the source order, which fixes matrix column order and
/// therefore tie-breaking.
#[derive(Debug, Clone)]
pub struct Lexicon {
    label: String,
    words: Vec<Word>,
    members: HashSet<Word>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.words == other.words
    }
}

impl Lexicon {
    pub fn empty(label: impl Into<String>) -> Lexicon {
        Lexicon {
            label: label.into(),
            words: Vec::new(),
            members: HashSet::new(),
        }
    }

    /// Parses newline-separated text. Blank lines (including a trailing one)
    /// are skipped; anything else must be a five-letter word.
    pub fn parse(label: impl Into<String>, text: &str) -> Result<Lexicon, LexiconError> {
        let mut words = Vec::new();
        let mut members = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let token = raw.trim_end_matches('\r');
            if token.trim().is_empty() {
                continue;
            }
            let word = Word::parse(token).map_err(|_| LexiconError::Format {
                line,
                token: token.to_string(),
            })?;
            if !members.insert(word) {
                return Err(LexiconError::Duplicate { line, word });
            }
            words.push(word);
        }
        Ok(Lexicon {
            label: label.into(),
            words,
            members,
        })
    }

    /// Builds a lexicon from already-parsed words, rejecting duplicates.
    pub fn from_words(
        label: impl Into<String>,
        words: impl IntoIterator<Item = Word>,
    ) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::empty(label);
        for (i, word) in words.into_iter().enumerate() {
            if !lex.members.insert(word) {
                return Err(LexiconError::Duplicate { line: i + 1, word });
            }
            lex.words.push(word);
        }
        Ok(lex)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.members.contains(word)
    }

    /// Words of `self` that `other` lacks, in `self` order.
    pub fn missing_from(&self, other: &Lexicon) -> Vec<Word> {
        self.words
            .iter()
            .filter(|w| !other.contains(w))
            .copied()
            .collect()
    }
}

/// Reads a lexicon file. The label is the file stem.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Lexicon::parse(label, &text)
}

/// The two lexicons that ship with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundledList {
    Guesses,
    Solutions,
}

impl BundledList {
    pub fn label(self) -> &'static str {
        match self {
            BundledList::Guesses => "guesses",
            BundledList::Solutions => "solutions",
        }
    }

    fn file_name(self) -> &'static str {
        match self {
            BundledList::Guesses => "guesses.txt",
            BundledList::Solutions => "solutions.txt",
        }
    }

    fn embedded(self) -> &'static str {
        match self {
            BundledList::Guesses => BUNDLED_GUESSES,
            BundledList::Solutions => BUNDLED_SOLUTIONS,
        }
    }

    /// Loads the list, honoring [`DATA_DIR_ENV`] when it is set.
    pub fn load(self) -> Result<Lexicon, LexiconError> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => {
                let path = Path::new(&dir).join(self.file_name());
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| LexiconError::Io { path, source })?;
                Lexicon::parse(self.label(), &text)
            }
            None => Lexicon::parse(self.label(), self.embedded()),
        }
    }
}

impl FromStr for BundledList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "guesses" => Ok(BundledList::Guesses),
            "solutions" => Ok(BundledList::Solutions),
            other => Err(format!("unknown word list {other:?}")),
        }
    }
}

/// Both bundled lexicons, with the solutions-within-guesses check applied.
#[derive(Debug, Clone)]
pub struct BundledLexicons {
    pub guesses: Lexicon,
    pub solutions: Lexicon,
    /// Solutions absent from the guess list. Logged as a warning on load.
    pub solutions_not_guessable: Vec<Word>,
}

impl BundledLexicons {
    pub fn load() -> Result<BundledLexicons, LexiconError> {
        let guesses = BundledList::Guesses.load()?;
        let solutions = BundledList::Solutions.load()?;
        let missing = solutions.missing_from(&guesses);
        if !missing.is_empty() {
            tracing::warn!(
                count = missing.len(),
                words = ?missing,
                "some published solutions are not in the acceptable-guess list"
            );
        }
        Ok(BundledLexicons {
            guesses,
            solutions,
            solutions_not_guessable: missing,
        })
    }

    pub fn get(&self, list: BundledList) -> &Lexicon {
        match list {
            BundledList::Guesses => &self.guesses,
            BundledList::Solutions => &self.solutions,
        }
    }
}
