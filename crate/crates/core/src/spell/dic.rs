//! `.dic` parsing.

use std::collections::{BTreeSet, HashMap};

/// Root words with their affix flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootTable {
    pub roots: HashMap<String, BTreeSet<char>>,
    pub warnings: Vec<String>,
}

/// Parses the text of a `.dic` file.
///
/// The first line is an approximate entry count and is only informational.
/// Each further line is `word` or `word/FLAGS`, optionally followed by
/// whitespace-separated morphological fields, which are ignored.
pub fn parse_dic(text: &str) -> RootTable {
    let mut table = RootTable::default();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            (
                i + 1,
                l.trim_start_matches('\u{feff}').trim_end_matches('\r'),
            )
        })
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();

    if let Some((lineno, first)) = lines.peek() {
        if first.trim().parse::<usize>().is_ok() {
            lines.next();
        } else {
            let message = format!("line {lineno}: missing entry count; reading it as a word");
            log::warn!("{message}");
            table.warnings.push(message);
        }
    }

    for (_, line) in lines {
        let Some(entry) = line.split_whitespace().next() else {
            continue;
        };
        let (word, flags) = match entry.split_once('/') {
            Some((word, flags)) => (word, flags),
            None => (entry, ""),
        };
        if word.is_empty() {
            continue;
        }
        table
            .roots
            .entry(word.to_string())
            .or_default()
            .extend(flags.chars());
    }
    table
}
