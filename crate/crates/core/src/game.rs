//! Feedback scoring and candidate filtering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::wordlist::{InvalidWord, Word, WORD_LEN};

/// Guesses allowed in a standard game.
pub const MAX_GUESSES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Green,
    Yellow,
    Gray,
}

impl Color {
    /// Wire code: `G`, `Y`, or `B` (gray is drawn black in the dark theme).
    pub fn code(self) -> char {
        match self {
            Color::Green => 'G',
            Color::Yellow => 'Y',
            Color::Gray => 'B',
        }
    }

    pub fn from_code(c: char) -> Option<Color> {
        match c.to_ascii_uppercase() {
            'G' => Some(Color::Green),
            'Y' => Some(Color::Yellow),
            'B' => Some(Color::Gray),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{text:?} is not a five-character G/Y/B feedback string")]
pub struct InvalidFeedback {
    pub text: String,
}

/// Colors for the five positions of a guess.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Feedback([Color; WORD_LEN]);

impl Feedback {
    pub const ALL_GREEN: Feedback = Feedback([Color::Green; WORD_LEN]);

    pub fn new(colors: [Color; WORD_LEN]) -> Feedback {
        Feedback(colors)
    }

    pub fn colors(&self) -> &[Color; WORD_LEN] {
        &self.0
    }

    pub fn is_solved(&self) -> bool {
        *self == Feedback::ALL_GREEN
    }
}

impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.0 {
            write!(f, "{}", c.code())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Feedback({self})")
    }
}

impl FromStr for Feedback {
    type Err = InvalidFeedback;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || InvalidFeedback {
            text: s.to_string(),
        };
        let mut colors = [Color::Gray; WORD_LEN];
        let mut chars = s.chars();
        for slot in colors.iter_mut() {
            *slot = chars.next().and_then(Color::from_code).ok_or_else(err)?;
        }
        if chars.next().is_some() {
            return Err(err());
        }
        Ok(Feedback(colors))
    }
}

impl Serialize for Feedback {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Feedback {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Colors `guess` against `secret`.
///
/// Exact matches are marked first and use up their secret letter. The
/// remaining guess letters are then scanned left to right; each takes YELLOW
/// while an unused copy of that letter is left in the secret, GRAY otherwise.
pub fn score_guess(secret: &Word, guess: &Word) -> Feedback {
    let s = secret.letters();
    let g = guess.letters();
    let mut colors = [Color::Gray; WORD_LEN];
    let mut unused = [0u8; 26];
    for i in 0..WORD_LEN {
        if g[i] == s[i] {
            colors[i] = Color::Green;
        } else {
            unused[usize::from(s[i] - b'A')] += 1;
        }
    }
    for i in 0..WORD_LEN {
        if colors[i] == Color::Green {
            continue;
        }
        let slot = &mut unused[usize::from(g[i] - b'A')];
        if *slot > 0 {
            *slot -= 1;
            colors[i] = Color::Yellow;
        }
    }
    Feedback(colors)
}

/// Whether `candidate`, as the secret, would have produced `observed` for `guess`.
pub fn is_consistent(candidate: &Word, guess: &Word, observed: &Feedback) -> bool {
    score_guess(candidate, guess) == *observed
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub guess: Word,
    pub feedback: Feedback,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HistoryParseError {
    #[error("history entry {entry:?} is not WORD:FEEDBACK")]
    Shape { entry: String },
    #[error(transparent)]
    Word(#[from] InvalidWord),
    #[error(transparent)]
    Feedback(#[from] InvalidFeedback),
}

/// Guesses made so far with the colors each one received.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GuessHistory {
    entries: Vec<HistoryEntry>,
}

impl GuessHistory {
    pub fn new() -> GuessHistory {
        GuessHistory::default()
    }

    pub fn push(&mut self, guess: Word, feedback: Feedback) {
        self.entries.push(HistoryEntry { guess, feedback });
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_solved(&self) -> bool {
        self.entries.last().is_some_and(|e| e.feedback.is_solved())
    }

    pub fn admits(&self, candidate: &Word) -> bool {
        self.entries
            .iter()
            .all(|e| is_consistent(candidate, &e.guess, &e.feedback))
    }
}

impl FromIterator<HistoryEntry> for GuessHistory {
    fn from_iter<I: IntoIterator<Item = HistoryEntry>>(iter: I) -> Self {
        GuessHistory {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Comma-joined `WORD:FEEDBACK` pairs, e.g. `SLATE:GYBBB,CRONY:BBGYB`.
/// The empty string is the empty history.
impl FromStr for GuessHistory {
    type Err = HistoryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut history = GuessHistory::new();
        for entry in s.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (word, feedback) =
                entry
                    .split_once(':')
                    .ok_or_else(|| HistoryParseError::Shape {
                        entry: entry.to_string(),
                    })?;
            history.push(Word::parse(word.trim())?, feedback.trim().parse()?);
        }
        Ok(history)
    }
}

impl fmt::Display for GuessHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", e.guess, e.feedback)?;
        }
        Ok(())
    }
}

/// Words from `pool`, in order, that agree with every entry of `history`.
pub fn filter_candidates(pool: &[Word], history: &GuessHistory) -> Vec<Word> {
    pool.iter().filter(|w| history.admits(w)).copied().collect()
}
