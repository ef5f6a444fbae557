//! Word encodings and the column-per-word matrix built from them.
//!
//! Rows are documented 1-based (A = 1 .. Z = 26) to line up with how the
//! encodings are usually written down; in code every index is 0-based, and
//! `positional_row(letter, position)` is the single place the two meet.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wordlist::{Word, WORD_LEN};

pub const ALPHABET: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    /// Letter counts, 26 rows. Anagrams collide.
    Frequency,
    /// One-hot letter per position, 5 stacked blocks of 26 rows.
    Positional,
}

impl Encoding {
    pub fn dim(self) -> usize {
        match self {
            Encoding::Frequency => ALPHABET,
            Encoding::Positional => ALPHABET * WORD_LEN,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Frequency => "frequency",
            Encoding::Positional => "positional",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "frequency" => Ok(Encoding::Frequency),
            "positional" => Ok(Encoding::Positional),
            other => Err(format!("unknown encoding {other:?}")),
        }
    }
}

/// Dense encoding of a single word.
#[derive(Debug, Clone, PartialEq)]
pub struct WordVector {
    values: Vec<f64>,
}

impl WordVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// 0-based row of `letter` (0-based alphabet index) at 0-based `position`.
///
/// In 1-based terms this is `26·(j−1) + i` for letter `i` at position `j`.
#[inline]
pub fn positional_row(letter: usize, position: usize) -> usize {
    ALPHABET * position + letter
}

fn sparse_entries(word: &Word, enc: Encoding) -> impl Iterator<Item = usize> {
    word.alphabet_indices()
        .into_iter()
        .enumerate()
        .map(move |(pos, letter)| match enc {
            Encoding::Frequency => letter,
            Encoding::Positional => positional_row(letter, pos),
        })
}

pub fn encode(word: &Word, enc: Encoding) -> WordVector {
    let mut values = vec![0.0; enc.dim()];
    for row in sparse_entries(word, enc) {
        values[row] += 1.0;
    }
    WordVector { values }
}

pub fn encode_frequency(word: &Word) -> WordVector {
    encode(word, Encoding::Frequency)
}

pub fn encode_positional(word: &Word) -> WordVector {
    encode(word, Encoding::Positional)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// No words to encode: the history eliminated every candidate, or the
    /// secret was never in the pool.
    #[error("candidate pool is empty")]
    EmptyPool,
    #[error("column {column} has {len} rows, expected {dim}")]
    RaggedColumn {
        column: usize,
        len: usize,
        dim: usize,
    },
    #[error("entry ({row}, {column}) is negative or not finite")]
    BadEntry { row: usize, column: usize },
}

/// Compressed sparse columns of a nonnegative real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseColumns {
    rows: usize,
    col_start: Vec<usize>,
    row_index: Vec<u32>,
    value: Vec<f64>,
}

impl SparseColumns {
    /// Builds from dense columns, dropping zero entries.
    pub fn from_dense_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let mut m = SparseColumns::with_rows(rows);
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(MatrixError::RaggedColumn {
                    column: c,
                    len: col.len(),
                    dim: rows,
                });
            }
            for (r, &v) in col.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(MatrixError::BadEntry { row: r, column: c });
                }
                if v != 0.0 {
                    m.row_index.push(r as u32);
                    m.value.push(v);
                }
            }
            m.col_start.push(m.row_index.len());
        }
        Ok(m)
    }

    fn with_rows(rows: usize) -> Self {
        SparseColumns {
            rows,
            col_start: vec![0],
            row_index: Vec::new(),
            value: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.col_start.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.value.len()
    }

    /// Nonzero `(row, value)` pairs of column `c`.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_start[c]..self.col_start[c + 1];
        self.row_index[range.clone()]
            .iter()
            .zip(&self.value[range])
            .map(|(&r, &v)| (r as usize, v))
    }

    pub fn column_dense(&self, c: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (r, v) in self.column(c) {
            out[r] += v;
        }
        out
    }

    pub fn column_norm(&self, c: usize) -> f64 {
        self.column(c).map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    /// `out = Aᵀ·x`.
    pub fn mul_transpose_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols());
        for (c, slot) in out.iter_mut().enumerate() {
            *slot = self.column(c).map(|(r, v)| v * x[r]).sum();
        }
    }

    /// `out = A·y`.
    pub fn mul_into(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.cols());
        debug_assert_eq!(out.len(), self.rows);
        out.fill(0.0);
        for (c, &yc) in y.iter().enumerate() {
            if yc == 0.0 {
                continue;
            }
            for (r, v) in self.column(c) {
                out[r] += v * yc;
            }
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.value.iter().map(|v| v * v).sum()
    }
}

/// Encoded candidate words, one column per word, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct WordMatrix {
    encoding: Encoding,
    words: Vec<Word>,
    columns: SparseColumns,
}

impl WordMatrix {
    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn dim(&self) -> usize {
        self.columns.rows()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false for a built matrix; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn columns(&self) -> &SparseColumns {
        &self.columns
    }
}

impl AsRef<SparseColumns> for WordMatrix {
    fn as_ref(&self) -> &SparseColumns {
        &self.columns
    }
}

pub fn build_matrix(words: &[Word], enc: Encoding) -> Result<WordMatrix, MatrixError> {
    if words.is_empty() {
        return Err(MatrixError::EmptyPool);
    }
    let mut columns = SparseColumns::with_rows(enc.dim());
    columns.row_index.reserve(words.len() * WORD_LEN);
    columns.value.reserve(words.len() * WORD_LEN);
    for word in words {
        let start = columns.row_index.len();
        for row in sparse_entries(word, enc) {
            // Frequency columns may repeat a row; fold repeats into one entry.
            match columns.row_index[start..]
                .iter()
                .position(|&r| r as usize == row)
            {
                Some(k) => columns.value[start + k] += 1.0,
                None => {
                    columns.row_index.push(row as u32);
                    columns.value.push(1.0);
                }
            }
        }
        columns.col_start.push(columns.row_index.len());
    }
    Ok(WordMatrix {
        encoding: enc,
        words: words.to_vec(),
        columns,
    })
}
