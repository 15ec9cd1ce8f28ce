//! Alphabets of named symbols and words over them.

use serde::Serialize;
use thiserror::Error;

/// A word is a sequence of letter indices into an [`Alphabet`].
pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("letter index {0} is outside the alphabet")]
    UnknownLetter(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("duplicate symbol {0:?}")]
    Duplicate(String),
    #[error("symbol {0:?} must be nonempty and contain no whitespace")]
    BadSymbol(String),
}

/// Ordered list of distinct, nonempty symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self, AlphabetError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(AlphabetError::BadSymbol(s.clone()));
            }
            if symbols[..i].contains(s) {
                return Err(AlphabetError::Duplicate(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn check(&self, word: &[usize]) -> Result<(), WordError> {
        match word.iter().find(|&&l| l >= self.len()) {
            Some(&l) => Err(WordError::UnknownLetter(l)),
            None => Ok(()),
        }
    }

    pub fn word_of<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Word, WordError> {
        symbols
            .iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .ok_or_else(|| WordError::UnknownSymbol(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Parses a word from text. Whitespace separates tokens; a token that is
    /// not itself a symbol is split greedily by longest matching symbol.
    /// `""`, `"1"` (when `1` is not a symbol) and `"ε"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let t = text.trim();
        if t.is_empty() || ((t == "1" || t == "ε") && self.index_of(t).is_none()) {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        for token in t.split_whitespace() {
            if let Some(i) = self.index_of(token) {
                word.push(i);
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .symbols
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| rest.starts_with(s.as_str()))
                    .max_by_key(|(_, s)| s.len());
                match best {
                    Some((i, s)) => {
                        word.push(i);
                        rest = &rest[s.len()..];
                    }
                    None => return Err(WordError::UnknownSymbol(rest.to_string())),
                }
            }
        }
        Ok(word)
    }

    /// Letters joined directly when every symbol is one character, else by spaces.
    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&i| self.symbol(i)).collect();
        parts.join(if single { "" } else { " " })
    }

    /// All words of length at most `max_len`, shortest first, lexicographic
    /// within a length.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for a in 0..self.len() {
                    let mut v: Word = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}
