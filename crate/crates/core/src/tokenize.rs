//! Tokenizer modes for code retrieval.
//!
//! * `T0` default: word regex `\b\w\w+\b`, lowercase, stopword filter, no stemming.
//! * `T1` whitespace: Unicode whitespace split, lowercase, nothing else.
//! * `T2` identifier-aware: T0 tokens, each followed by its identifier sub-tokens.
//! * `T3` sub-tokens only: T0 tokens replaced by their sub-tokens.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Stopword list shipped with the crate, one word per line.
pub const STOPWORDS_TXT: &str = include_str!("../resources/stopwords.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TokenizerMode {
    #[default]
    T0Default,
    T1Whitespace,
    T2IdentifierAware,
    T3SubtokensOnly,
}

impl TokenizerMode {
    pub const ALL: [TokenizerMode; 4] = [
        TokenizerMode::T0Default,
        TokenizerMode::T1Whitespace,
        TokenizerMode::T2IdentifierAware,
        TokenizerMode::T3SubtokensOnly,
    ];

    pub fn code(self) -> u8 {
        match self {
            TokenizerMode::T0Default => 0,
            TokenizerMode::T1Whitespace => 1,
            TokenizerMode::T2IdentifierAware => 2,
            TokenizerMode::T3SubtokensOnly => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn short_name(self) -> &'static str {
        match self {
            TokenizerMode::T0Default => "t0",
            TokenizerMode::T1Whitespace => "t1",
            TokenizerMode::T2IdentifierAware => "t2",
            TokenizerMode::T3SubtokensOnly => "t3",
        }
    }
}

impl fmt::Display for TokenizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for TokenizerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "t0" | "default" => Ok(TokenizerMode::T0Default),
            "t1" | "whitespace" => Ok(TokenizerMode::T1Whitespace),
            "t2" | "identifier" | "ident" => Ok(TokenizerMode::T2IdentifierAware),
            "t3" | "subtokens" => Ok(TokenizerMode::T3SubtokensOnly),
            other => Err(Error::Invalid(format!("unknown tokenizer mode `{other}`"))),
        }
    }
}

pub fn default_stopwords() -> &'static HashSet<String> {
    static STOPWORDS: OnceLock<HashSet<String>> = OnceLock::new();
    STOPWORDS.get_or_init(|| parse_stopwords(STOPWORDS_TXT))
}

/// Parses a one-word-per-line list. Blank lines and `#` comments are skipped.
pub fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

fn word_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b\w\w+\b").expect("valid regex"))
}

/// Word-regex matches in their original case.
pub fn surfaces(text: &str) -> impl Iterator<Item = &str> {
    word_regex().find_iter(text).map(|m| m.as_str())
}

/// A tokenizer bound to a mode and a stopword set.
#[derive(Debug, Clone)]
pub struct Tokenizer<'a> {
    mode: TokenizerMode,
    stopwords: &'a HashSet<String>,
}

impl Tokenizer<'static> {
    pub fn new(mode: TokenizerMode) -> Self {
        Self {
            mode,
            stopwords: default_stopwords(),
        }
    }
}

impl<'a> Tokenizer<'a> {
    pub fn with_stopwords(mode: TokenizerMode, stopwords: &'a HashSet<String>) -> Self {
        Self { mode, stopwords }
    }

    pub fn mode(&self) -> TokenizerMode {
        self.mode
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        tokenize(text, self.mode, self.stopwords)
    }
}

pub fn tokenize(text: &str, mode: TokenizerMode, stopwords: &HashSet<String>) -> Vec<String> {
    match mode {
        TokenizerMode::T1Whitespace => text.split_whitespace().map(str::to_lowercase).collect(),
        TokenizerMode::T0Default => default_tokens(text, stopwords).map(|(_, lower)| lower).collect(),
        TokenizerMode::T2IdentifierAware => {
            let mut out = Vec::new();
            for (surface, lower) in default_tokens(text, stopwords) {
                let parts = split_identifier(surface);
                out.push(lower);
                for part in parts {
                    if out.last() != Some(&part) {
                        out.push(part);
                    }
                }
            }
            out
        }
        TokenizerMode::T3SubtokensOnly => {
            let mut out = Vec::new();
            for (surface, lower) in default_tokens(text, stopwords) {
                let parts = split_identifier(surface);
                if parts.is_empty() {
                    out.push(lower);
                } else {
                    out.extend(parts);
                }
            }
            out
        }
    }
}

fn default_tokens<'t>(
    text: &'t str,
    stopwords: &'t HashSet<String>,
) -> impl Iterator<Item = (&'t str, String)> + 't {
    surfaces(text)
        .map(|s| (s, s.to_lowercase()))
        .filter(move |(_, lower)| !stopwords.contains(lower))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Upper,
    Lower,
    Digit,
    Other,
}

fn classify(c: char) -> CharClass {
    if c.is_uppercase() {
        CharClass::Upper
    } else if c.is_numeric() {
        CharClass::Digit
    } else if c.is_alphabetic() {
        CharClass::Lower
    } else {
        CharClass::Other
    }
}

/// Splits an identifier on underscores, lower->upper transitions and
/// letter/digit transitions. An uppercase run followed by a lowercase letter
/// splits before its last capital (`HTTPServer` -> `http`, `server`).
/// Parts are lowercased; empty parts are dropped.
pub fn split_identifier(token: &str) -> Vec<String> {
    let chars: Vec<char> = token.chars().collect();
    let mut parts = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        if c == '_' {
            flush(&mut current, &mut parts);
            continue;
        }
        if let Some(&prev) = i.checked_sub(1).and_then(|j| chars.get(j)) {
            let (pc, cc) = (classify(prev), classify(c));
            let boundary = match (pc, cc) {
                (CharClass::Lower, CharClass::Upper) => true,
                (CharClass::Upper | CharClass::Lower, CharClass::Digit) => true,
                (CharClass::Digit, CharClass::Upper | CharClass::Lower) => true,
                (CharClass::Upper, CharClass::Upper) => chars
                    .get(i + 1)
                    .is_some_and(|&n| classify(n) == CharClass::Lower),
                _ => false,
            };
            if boundary {
                flush(&mut current, &mut parts);
            }
        }
        current.push(c);
    }
    flush(&mut current, &mut parts);
    parts
}

fn flush(current: &mut String, parts: &mut Vec<String>) {
    if !current.is_empty() {
        parts.push(current.to_lowercase());
        current.clear();
    }
}
