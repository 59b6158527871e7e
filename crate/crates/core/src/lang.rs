use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid language code `{0}`: expected 2-3 lowercase letters with an optional `_suffix`")]
pub struct InvalidLanguageCode(pub String);

/// A language or macrolanguage code such as `es`, `nn`, `hbs` or `hbs_lat`.
///
/// Codes are 2-3 lowercase ASCII letters, optionally followed by `_` and a
/// 2-8 letter script or variant suffix. Equality is exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LanguageCode(String);

impl LanguageCode {
    pub fn new(code: impl Into<String>) -> Result<Self, InvalidLanguageCode> {
        let code = code.into();
        if is_valid_code(&code) {
            Ok(LanguageCode(code))
        } else {
            Err(InvalidLanguageCode(code))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_valid_code(code: &str) -> bool {
    let lower = |s: &str, min: usize, max: usize| {
        (min..=max).contains(&s.len()) && s.bytes().all(|b| b.is_ascii_lowercase())
    };
    match code.split_once('_') {
        None => lower(code, 2, 3),
        Some((base, suffix)) => lower(base, 2, 3) && lower(suffix, 2, 8),
    }
}

impl FromStr for LanguageCode {
    type Err = InvalidLanguageCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LanguageCode::new(s)
    }
}

impl TryFrom<String> for LanguageCode {
    type Error = InvalidLanguageCode;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        LanguageCode::new(s)
    }
}

impl From<LanguageCode> for String {
    fn from(code: LanguageCode) -> String {
        code.0
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for LanguageCode {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for LanguageCode {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl PartialEq<str> for LanguageCode {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for LanguageCode {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}
