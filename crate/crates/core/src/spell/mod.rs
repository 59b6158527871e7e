//! Affix-dictionary spell checking.
//!
//! Supports the common subset of the `.aff`/`.dic` format: single-character
//! flags, `PFX`/`SFX` rules with strip, append and condition, and cross
//! products of one prefix with one suffix. Compounding, suggestions and
//! two-level affix stripping are not supported.
//!
//! Words are checked by reversing rules at query time: for every affix whose
//! surface string borders the word, the candidate root is rebuilt and looked
//! up.

mod aff;
mod dic;

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use thiserror::Error;

pub use aff::{parse_affix, AffixKind, AffixRule, AffixTable, CondElem, Condition};
pub use dic::{parse_dic, RootTable};

#[derive(Debug, Error)]
pub enum SpellError {
    #[error("line {line}: unsupported encoding `{encoding}` (only UTF-8 is supported)")]
    UnsupportedEncoding { line: usize, encoding: String },
    #[error("line {line}: malformed affix header: {message}")]
    MalformedHeader { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A parsed dictionary answering word-correctness queries.
#[derive(Debug, Clone, Default)]
pub struct SpellLexicon {
    roots: HashMap<String, BTreeSet<char>>,
    /// Prefix rules keyed by their appended string.
    prefixes: HashMap<String, Vec<AffixRule>>,
    /// Suffix rules keyed by their appended string.
    suffixes: HashMap<String, Vec<AffixRule>>,
    warnings: Vec<String>,
}

impl SpellLexicon {
    pub fn new(affixes: AffixTable, roots: RootTable) -> Self {
        let mut lexicon = SpellLexicon {
            roots: roots.roots,
            warnings: affixes.warnings,
            ..Default::default()
        };
        lexicon.warnings.extend(roots.warnings);
        let mut flags: Vec<_> = affixes.rules.into_iter().collect();
        flags.sort_by_key(|(flag, _)| *flag);
        for rule in flags.into_iter().flat_map(|(_, rules)| rules) {
            let index = match rule.kind {
                AffixKind::Prefix => &mut lexicon.prefixes,
                AffixKind::Suffix => &mut lexicon.suffixes,
            };
            index.entry(rule.append.clone()).or_default().push(rule);
        }
        lexicon
    }

    pub fn parse(aff: &str, dic: &str) -> Result<Self, SpellError> {
        Ok(Self::new(parse_affix(aff)?, parse_dic(dic)))
    }

    pub fn from_files(aff: &Path, dic: &Path) -> Result<Self, SpellError> {
        let read = |p: &Path| {
            fs::read_to_string(p).map_err(|source| SpellError::Io {
                path: p.display().to_string(),
                source,
            })
        };
        Self::parse(&read(aff)?, &read(dic)?)
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn rule_count(&self) -> usize {
        self.prefixes
            .values()
            .chain(self.suffixes.values())
            .map(Vec::len)
            .sum()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn root_has(&self, root: &str, flag: char) -> bool {
        self.roots
            .get(root)
            .is_some_and(|flags| flags.contains(&flag))
    }

    /// Is `word` a root, or a root with one prefix and/or one suffix?
    ///
    /// A word containing uppercase letters that fails verbatim is retried in
    /// full lowercase.
    pub fn check(&self, word: &str) -> bool {
        if word.is_empty() {
            return false;
        }
        if self.check_exact(word) {
            return true;
        }
        if word.chars().any(char::is_uppercase) {
            let lower = word.to_lowercase();
            return lower != word && self.check_exact(&lower);
        }
        false
    }

    fn check_exact(&self, word: &str) -> bool {
        self.roots.contains_key(word) || self.check_suffixed(word) || self.check_prefixed(word)
    }

    /// Root + one suffix.
    fn check_suffixed(&self, word: &str) -> bool {
        for (split, _) in word
            .char_indices()
            .skip(1)
            .chain(std::iter::once((word.len(), ' ')))
        {
            let (stem, append) = word.split_at(split);
            let Some(rules) = self.suffixes.get(append) else {
                continue;
            };
            for rule in rules {
                let root = format!("{stem}{}", rule.strip);
                if self.root_has(&root, rule.flag) && rule.condition.matches_end(&root) {
                    return true;
                }
            }
        }
        false
    }

    /// Prefix + root, or prefix + root + suffix.
    fn check_prefixed(&self, word: &str) -> bool {
        for (split, _) in std::iter::once((0, ' ')).chain(word.char_indices().skip(1)) {
            let (append, rest) = word.split_at(split);
            let Some(rules) = self.prefixes.get(append) else {
                continue;
            };
            for rule in rules {
                let candidate = format!("{}{rest}", rule.strip);
                // the root must keep at least one character of its own
                if rest.is_empty() {
                    continue;
                }
                if self.root_has(&candidate, rule.flag) && rule.condition.matches_start(&candidate)
                {
                    return true;
                }
                if rule.cross_product && self.check_cross(&candidate, rule) {
                    return true;
                }
            }
        }
        false
    }

    /// `candidate` is the word with the prefix undone; it still carries a
    /// suffix. The suffix split must leave the prefix's strip string intact.
    fn check_cross(&self, candidate: &str, prefix: &AffixRule) -> bool {
        let strip_len = prefix.strip.len();
        for (split, _) in candidate
            .char_indices()
            .skip(1)
            .chain(std::iter::once((candidate.len(), ' ')))
        {
            // at least one character between the prefix strip and the suffix
            if split <= strip_len {
                continue;
            }
            let (stem, append) = candidate.split_at(split);
            let Some(rules) = self.suffixes.get(append) else {
                continue;
            };
            for rule in rules.iter().filter(|r| r.cross_product) {
                let root = format!("{stem}{}", rule.strip);
                if self.root_has(&root, rule.flag)
                    && self.root_has(&root, prefix.flag)
                    && rule.condition.matches_end(&root)
                    && prefix.condition.matches_start(&root)
                {
                    return true;
                }
            }
        }
        false
    }
}
