//! Similarity map, dictionary registry and tunable settings.
//!
//! Both files use a strict line-based subset of YAML. `similar.conf`:
//!
//! ```text
//! similar:
//!     af: [nl, de, af]
//!     cs: [sk, cs]
//! ```
//!
//! `dictionaries.conf`:
//!
//! ```text
//! dictpath: dicts
//! dictionaries:
//!     hbs: hbs_HBS
//! aliases:
//!     sr: hbs
//! settings:
//!     error_threshold: 0.25
//! ```
//!
//! Entries are indented by exactly four spaces. Lines starting with `#` and
//! trailing ` # ...` comments are ignored.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::LanguageCode;

pub const SIMILAR_FILE: &str = "similar.conf";
pub const DICTIONARIES_FILE: &str = "dictionaries.conf";
/// Environment variable naming the default configuration directory.
pub const CONFIG_ENV: &str = "SECONDLANG_CONFIG";

pub const DEFAULT_ERROR_THRESHOLD: f64 = 0.25;
pub const DEFAULT_UNKNOWN_CODE: &str = "unk";

const INDENT: &str = "    ";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("missing configuration file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Syntax {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: duplicate key `{key}`")]
    DuplicateKey {
        file: String,
        line: usize,
        key: String,
    },
    #[error("no dictionary for language `{language}`: {detail}")]
    MissingDictionary {
        language: LanguageCode,
        detail: String,
    },
}

impl ConfigError {
    /// True when the configuration is well-formed but a resource it refers
    /// to is absent.
    pub fn is_missing_resource(&self) -> bool {
        matches!(self, ConfigError::MissingDictionary { .. })
    }
}

/// Resolution strategy when spell-checking leaves more than one candidate,
/// or none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Always returns a language.
    #[default]
    Aggressive,
    /// Returns the unknown sentinel when there is no clear winner.
    Conservative,
}

impl Mode {
    pub fn short_name(self) -> &'static str {
        match self {
            Mode::Aggressive => "aggr",
            Mode::Conservative => "cons",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aggr" | "aggressive" => Ok(Mode::Aggressive),
            "cons" | "conservative" => Ok(Mode::Conservative),
            other => Err(format!(
                "unknown mode `{other}` (expected aggr, aggressive, cons or conservative)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// Highest error rate at which a language stays a candidate, in `[0, 1]`.
    pub error_threshold: f64,
    pub mode: Mode,
    /// Code returned when conservative mode abstains.
    pub unknown_code: LanguageCode,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            error_threshold: DEFAULT_ERROR_THRESHOLD,
            mode: Mode::default(),
            unknown_code: LanguageCode::new(DEFAULT_UNKNOWN_CODE).unwrap(),
        }
    }
}

/// Targeted language to the ordered list of languages it is confused with.
///
/// Order is kept exactly as configured; it decides ties. The relation is not
/// required to be symmetric.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityMap {
    entries: Vec<(LanguageCode, Vec<LanguageCode>)>,
}

impl SimilarityMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an entry. Fails on a repeated target or a repeated code in
    /// `similar`.
    pub fn insert(
        &mut self,
        target: LanguageCode,
        similar: Vec<LanguageCode>,
    ) -> Result<(), String> {
        if self.get(&target).is_some() {
            return Err(format!("duplicate key `{target}`"));
        }
        let mut seen = HashSet::new();
        for code in &similar {
            if !seen.insert(code) {
                return Err(format!("duplicate code `{code}` in list for `{target}`"));
            }
        }
        self.entries.push((target, similar));
        Ok(())
    }

    /// The configured list for `target`, or an empty slice.
    pub fn get(&self, target: &LanguageCode) -> Option<&[LanguageCode]> {
        self.entries
            .iter()
            .find(|(t, _)| t == target)
            .map(|(_, list)| list.as_slice())
    }

    /// Configured list for `target` with `target` itself unioned in.
    ///
    /// The target keeps its configured position when listed; otherwise it is
    /// appended. An unconfigured target yields `[target]`.
    pub fn similar_languages(&self, target: &LanguageCode) -> Vec<LanguageCode> {
        let mut langs = self.get(target).map(<[_]>::to_vec).unwrap_or_default();
        if !langs.contains(target) {
            langs.push(target.clone());
        }
        langs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LanguageCode, &[LanguageCode])> {
        self.entries.iter().map(|(t, l)| (t, l.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every code mentioned as a key or list member, first-mention order.
    pub fn languages(&self) -> Vec<LanguageCode> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (target, list) in &self.entries {
            for code in std::iter::once(target).chain(list) {
                if seen.insert(code) {
                    out.push(code.clone());
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        parse_similar(text, SIMILAR_FILE)
    }

    pub fn to_conf_string(&self) -> String {
        let mut out = String::from("similar:\n");
        for (target, list) in &self.entries {
            let joined: Vec<&str> = list.iter().map(LanguageCode::as_str).collect();
            writeln!(out, "{INDENT}{target}: [{}]", joined.join(", ")).unwrap();
        }
        out
    }
}

/// Where each language's `.aff`/`.dic` pair lives.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryRegistry {
    /// Directory holding the dictionaries. Relative paths are resolved
    /// against the configuration directory by [`load_config`].
    pub dictpath: PathBuf,
    entries: Vec<(LanguageCode, String)>,
    aliases: Vec<(LanguageCode, LanguageCode)>,
}

impl DictionaryRegistry {
    pub fn new(dictpath: impl Into<PathBuf>) -> Self {
        DictionaryRegistry {
            dictpath: dictpath.into(),
            ..Default::default()
        }
    }

    pub fn add_dictionary(&mut self, lang: LanguageCode, basename: impl Into<String>) {
        self.entries.push((lang, basename.into()));
    }

    pub fn add_alias(&mut self, lang: LanguageCode, target: LanguageCode) {
        self.aliases.push((lang, target));
    }

    pub fn dictionaries(&self) -> impl Iterator<Item = (&LanguageCode, &str)> {
        self.entries.iter().map(|(l, b)| (l, b.as_str()))
    }

    pub fn aliases(&self) -> impl Iterator<Item = (&LanguageCode, &LanguageCode)> {
        self.aliases.iter().map(|(l, t)| (l, t))
    }

    /// The language whose dictionary `lang` uses: itself, or its alias target.
    pub fn canonical<'a>(&'a self, lang: &'a LanguageCode) -> &'a LanguageCode {
        self.aliases
            .iter()
            .find(|(l, _)| l == lang)
            .map(|(_, t)| t)
            .unwrap_or(lang)
    }

    /// Dictionary base path (no extension) for `lang`, following one alias.
    pub fn base_path(&self, lang: &LanguageCode) -> Option<PathBuf> {
        let canonical = self.canonical(lang);
        self.entries
            .iter()
            .find(|(l, _)| l == canonical)
            .map(|(_, base)| self.dictpath.join(base))
    }

    /// `.aff` and `.dic` paths for `lang`.
    pub fn files(&self, lang: &LanguageCode) -> Option<(PathBuf, PathBuf)> {
        self.base_path(lang)
            .map(|base| (base.with_extension("aff"), base.with_extension("dic")))
    }

    /// Checks that `lang` maps to a dictionary pair present on disk.
    pub fn check_available(&self, lang: &LanguageCode) -> Result<(PathBuf, PathBuf), ConfigError> {
        let missing = |detail: String| ConfigError::MissingDictionary {
            language: lang.clone(),
            detail,
        };
        let (aff, dic) = self.files(lang).ok_or_else(|| {
            let canonical = self.canonical(lang);
            if canonical == lang {
                missing("not listed under `dictionaries:` or `aliases:`".into())
            } else {
                missing(format!(
                    "alias target `{canonical}` is not listed under `dictionaries:`"
                ))
            }
        })?;
        for path in [&aff, &dic] {
            if !path.is_file() {
                return Err(missing(format!("{} does not exist", path.display())));
            }
        }
        Ok((aff, dic))
    }

    pub fn to_conf_string(&self, settings: &Settings) -> String {
        let mut out = String::new();
        writeln!(out, "dictpath: {}", self.dictpath.display()).unwrap();
        out.push_str("dictionaries:\n");
        for (lang, base) in &self.entries {
            writeln!(out, "{INDENT}{lang}: {base}").unwrap();
        }
        out.push_str("aliases:\n");
        for (lang, target) in &self.aliases {
            writeln!(out, "{INDENT}{lang}: {target}").unwrap();
        }
        out.push_str("settings:\n");
        writeln!(out, "{INDENT}error_threshold: {}", settings.error_threshold).unwrap();
        writeln!(out, "{INDENT}mode: {}", settings.mode).unwrap();
        writeln!(out, "{INDENT}unknown_code: {}", settings.unknown_code).unwrap();
        out
    }
}

/// Everything read from a configuration directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub dir: PathBuf,
    pub similar: SimilarityMap,
    pub registry: DictionaryRegistry,
    pub settings: Settings,
}

/// Reads and validates `similar.conf` and `dictionaries.conf` from `dir`.
///
/// Every language mentioned in the similarity map must resolve to a
/// dictionary pair on disk.
pub fn load_config(dir: &Path) -> Result<Config, ConfigError> {
    let similar_text = read_config_file(&dir.join(SIMILAR_FILE))?;
    let dict_text = read_config_file(&dir.join(DICTIONARIES_FILE))?;

    let similar = parse_similar(&similar_text, SIMILAR_FILE)?;
    let (mut registry, settings) = parse_dictionaries(&dict_text, DICTIONARIES_FILE)?;
    registry.dictpath = dir.join(&registry.dictpath);

    for lang in similar.languages() {
        registry.check_available(&lang)?;
    }

    Ok(Config {
        dir: dir.to_path_buf(),
        similar,
        registry,
        settings,
    })
}

fn read_config_file(path: &Path) -> Result<String, ConfigError> {
    if !path.is_file() {
        return Err(ConfigError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One meaningful line of a config file.
enum Line<'a> {
    Section { key: &'a str, value: &'a str },
    Entry { key: &'a str, value: &'a str },
}

struct LineReader<'a> {
    file: &'a str,
}

impl<'a> LineReader<'a> {
    fn syntax(&self, line: usize, message: impl Into<String>) -> ConfigError {
        ConfigError::Syntax {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    fn duplicate(&self, line: usize, key: &str) -> ConfigError {
        ConfigError::DuplicateKey {
            file: self.file.to_string(),
            line,
            key: key.to_string(),
        }
    }

    fn code(&self, line: usize, s: &str) -> Result<LanguageCode, ConfigError> {
        LanguageCode::new(s).map_err(|e| self.syntax(line, e.to_string()))
    }

    /// Yields `(line_number, Line)` for every non-blank, non-comment line.
    fn lines(
        &self,
        text: &'a str,
    ) -> impl Iterator<Item = Result<(usize, Line<'a>), ConfigError>> + '_ {
        text.lines().enumerate().filter_map(move |(i, raw)| {
            let lineno = i + 1;
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let raw = strip_comment(raw);
            if raw.trim().is_empty() {
                return None;
            }
            let (indented, body) = match raw.strip_prefix(INDENT) {
                Some(rest) => (true, rest),
                None => (false, raw),
            };
            if body.starts_with(char::is_whitespace) {
                return Some(Err(
                    self.syntax(lineno, "entries must be indented by exactly four spaces")
                ));
            }
            let Some((key, value)) = body.split_once(':') else {
                return Some(Err(self.syntax(lineno, "expected `key: value`")));
            };
            let (key, value) = (key.trim_end(), value.trim());
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Some(Err(self.syntax(lineno, format!("invalid key `{key}`"))));
            }
            Some(Ok((
                lineno,
                if indented {
                    Line::Entry { key, value }
                } else {
                    Line::Section { key, value }
                },
            )))
        })
    }
}

fn strip_comment(line: &str) -> &str {
    if line.trim_start().starts_with('#') {
        return "";
    }
    match line.find(" #") {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_similar(text: &str, file: &str) -> Result<SimilarityMap, ConfigError> {
    let reader = LineReader { file };
    let mut map = SimilarityMap::new();
    let mut in_section = false;
    for item in reader.lines(text) {
        let (lineno, line) = item?;
        match line {
            Line::Section {
                key: "similar",
                value: "",
            } => {
                if in_section {
                    return Err(reader.duplicate(lineno, "similar"));
                }
                in_section = true;
            }
            Line::Section { key, .. } => {
                return Err(reader.syntax(lineno, format!("unexpected top-level key `{key}`")));
            }
            Line::Entry { key, value } => {
                if !in_section {
                    return Err(reader.syntax(lineno, "entry outside the `similar:` section"));
                }
                let target = reader.code(lineno, key)?;
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| reader.syntax(lineno, "expected a bracketed list `[a, b]`"))?;
                let list = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|c| reader.code(lineno, c.trim()))
                        .collect::<Result<Vec<_>, _>>()?
                };
                if map.get(&target).is_some() {
                    return Err(reader.duplicate(lineno, key));
                }
                map.insert(target, list)
                    .map_err(|message| reader.syntax(lineno, message))?;
            }
        }
    }
    Ok(map)
}

#[derive(Clone, Copy, PartialEq)]
enum DictSection {
    None,
    Dictionaries,
    Aliases,
    Settings,
}

/// Parses `dictionaries.conf` text. `dictpath` is left exactly as written.
pub fn parse_dictionaries(
    text: &str,
    file: &str,
) -> Result<(DictionaryRegistry, Settings), ConfigError> {
    let reader = LineReader { file };
    let mut registry = DictionaryRegistry::new(".");
    let mut settings = Settings::default();
    let mut section = DictSection::None;
    let mut seen_top: HashSet<&str> = HashSet::new();
    let mut seen_lang: HashMap<LanguageCode, usize> = HashMap::new();
    let mut seen_setting: HashSet<&str> = HashSet::new();

    for item in reader.lines(text) {
        let (lineno, line) = item?;
        match line {
            Line::Section { key, value } => {
                if !seen_top.insert(key) {
                    return Err(reader.duplicate(lineno, key));
                }
                section = match (key, value) {
                    ("dictpath", v) if !v.is_empty() => {
                        registry.dictpath = PathBuf::from(v);
                        DictSection::None
                    }
                    ("dictpath", _) => {
                        return Err(reader.syntax(lineno, "`dictpath` needs a directory"))
                    }
                    ("dictionaries", "") => DictSection::Dictionaries,
                    ("aliases", "") => DictSection::Aliases,
                    ("settings", "") => DictSection::Settings,
                    _ => {
                        return Err(
                            reader.syntax(lineno, format!("unexpected top-level key `{key}`"))
                        )
                    }
                };
            }
            Line::Entry { key, value } => match section {
                DictSection::None => {
                    return Err(reader.syntax(lineno, "entry outside of a section"));
                }
                DictSection::Dictionaries | DictSection::Aliases => {
                    let lang = reader.code(lineno, key)?;
                    if seen_lang.insert(lang.clone(), lineno).is_some() {
                        return Err(reader.duplicate(lineno, key));
                    }
                    if value.is_empty() || value.contains(char::is_whitespace) {
                        return Err(reader.syntax(lineno, format!("invalid value `{value}`")));
                    }
                    if section == DictSection::Dictionaries {
                        registry.add_dictionary(lang, value);
                    } else {
                        registry.add_alias(lang, reader.code(lineno, value)?);
                    }
                }
                DictSection::Settings => {
                    if !seen_setting.insert(key) {
                        return Err(reader.duplicate(lineno, key));
                    }
                    match key {
                        "error_threshold" => {
                            let t: f64 = value.parse().map_err(|_| {
                                reader.syntax(lineno, format!("invalid number `{value}`"))
                            })?;
                            if !(0.0..=1.0).contains(&t) {
                                return Err(reader.syntax(
                                    lineno,
                                    format!("error_threshold {t} outside [0, 1]"),
                                ));
                            }
                            settings.error_threshold = t;
                        }
                        "mode" => {
                            settings.mode = value.parse().map_err(|m| reader.syntax(lineno, m))?;
                        }
                        "unknown_code" => settings.unknown_code = reader.code(lineno, value)?,
                        other => {
                            return Err(reader.syntax(lineno, format!("unknown setting `{other}`")))
                        }
                    }
                }
            },
        }
    }
    Ok((registry, settings))
}
