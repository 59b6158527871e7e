//! `.aff` parsing for the supported subset: `SET`, `FLAG`, `PFX`, `SFX`.

use std::collections::HashMap;

use super::SpellError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AffixKind {
    Prefix,
    Suffix,
}

impl AffixKind {
    fn tag(self) -> &'static str {
        match self {
            AffixKind::Prefix => "PFX",
            AffixKind::Suffix => "SFX",
        }
    }
}

/// One element of an affix condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondElem {
    Any,
    Char(char),
    /// `[...]`, or `[^...]` when `negated`.
    Class {
        chars: Vec<char>,
        negated: bool,
    },
}

impl CondElem {
    fn matches(&self, c: char) -> bool {
        match self {
            CondElem::Any => true,
            CondElem::Char(x) => *x == c,
            CondElem::Class { chars, negated } => chars.contains(&c) != *negated,
        }
    }
}

/// Pattern a root's edge must match for an affix rule to apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition(Vec<CondElem>);

impl Condition {
    pub fn any() -> Self {
        Condition(vec![CondElem::Any])
    }

    pub fn parse(pattern: &str) -> Result<Self, String> {
        let mut elems = Vec::new();
        let mut chars = pattern.chars();
        while let Some(c) = chars.next() {
            match c {
                '.' => elems.push(CondElem::Any),
                '[' => {
                    let mut class = Vec::new();
                    let mut negated = false;
                    let mut closed = false;
                    let mut first = true;
                    for c in chars.by_ref() {
                        match c {
                            '^' if first => negated = true,
                            ']' => {
                                closed = true;
                                break;
                            }
                            c => class.push(c),
                        }
                        first = false;
                    }
                    if !closed {
                        return Err(format!("unclosed `[` in condition `{pattern}`"));
                    }
                    elems.push(CondElem::Class {
                        chars: class,
                        negated,
                    });
                }
                ']' => return Err(format!("stray `]` in condition `{pattern}`")),
                c => elems.push(CondElem::Char(c)),
            }
        }
        if elems.is_empty() {
            return Err("empty condition".into());
        }
        Ok(Condition(elems))
    }

    pub fn elements(&self) -> &[CondElem] {
        &self.0
    }

    /// True when the condition is a bare `.`.
    pub fn is_any(&self) -> bool {
        self.0 == [CondElem::Any]
    }

    /// Does the condition match the first characters of `word`?
    pub fn matches_start(&self, word: &str) -> bool {
        let mut chars = word.chars();
        self.0
            .iter()
            .all(|e| chars.next().is_some_and(|c| e.matches(c)))
    }

    /// Does the condition match the last characters of `word`?
    pub fn matches_end(&self, word: &str) -> bool {
        let mut chars = word.chars().rev();
        self.0
            .iter()
            .rev()
            .all(|e| chars.next().is_some_and(|c| e.matches(c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixRule {
    pub kind: AffixKind,
    pub flag: char,
    pub cross_product: bool,
    pub strip: String,
    pub append: String,
    pub condition: Condition,
}

impl AffixRule {
    /// Whether this rule can be attached to `root`: the condition matches the
    /// relevant edge and the strip string is present there.
    pub fn applies_to(&self, root: &str) -> bool {
        match self.kind {
            AffixKind::Prefix => {
                root.starts_with(&self.strip) && self.condition.matches_start(root)
            }
            AffixKind::Suffix => root.ends_with(&self.strip) && self.condition.matches_end(root),
        }
    }
}

/// Parsed affix rules, grouped by flag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AffixTable {
    pub rules: HashMap<char, Vec<AffixRule>>,
    /// Non-fatal problems found while parsing.
    pub warnings: Vec<String>,
}

impl AffixTable {
    pub fn iter(&self) -> impl Iterator<Item = &AffixRule> {
        self.rules.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.rules.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn warn(&mut self, line: usize, message: impl Into<String>) {
        let message = format!("line {line}: {}", message.into());
        log::warn!("{message}");
        self.warnings.push(message);
    }
}

struct OpenBlock {
    kind: AffixKind,
    flag: char,
    cross_product: bool,
    declared: usize,
    read: usize,
    header_line: usize,
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn is_header(fields: &[&str]) -> bool {
    fields.len() == 4 && matches!(fields[2], "Y" | "N") && fields[3].parse::<usize>().is_ok()
}

/// Parses the text of an `.aff` file.
///
/// Unsupported directives are skipped with a warning. A block with more or
/// fewer rule lines than its header declares is accepted with a warning.
pub fn parse_affix(text: &str) -> Result<AffixTable, SpellError> {
    let mut table = AffixTable::default();
    let mut block: Option<OpenBlock> = None;

    let close = |table: &mut AffixTable, block: Option<OpenBlock>| {
        if let Some(b) = block {
            if b.read != b.declared {
                table.warn(
                    b.header_line,
                    format!(
                        "{} {} declares {} rules but has {}",
                        b.kind.tag(),
                        b.flag,
                        b.declared,
                        b.read
                    ),
                );
            }
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_start_matches('\u{feff}').trim_end_matches('\r');
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(&directive) = fields.first() else {
            continue;
        };
        if directive.starts_with('#') {
            continue;
        }
        let kind = match directive {
            "PFX" => AffixKind::Prefix,
            "SFX" => AffixKind::Suffix,
            "SET" => {
                close(&mut table, block.take());
                match fields.get(1) {
                    Some(enc) if enc.eq_ignore_ascii_case("UTF-8") => {}
                    other => {
                        return Err(SpellError::UnsupportedEncoding {
                            line: lineno,
                            encoding: other.unwrap_or(&"").to_string(),
                        })
                    }
                }
                continue;
            }
            "FLAG" => {
                close(&mut table, block.take());
                if !fields
                    .get(1)
                    .is_some_and(|m| m.eq_ignore_ascii_case("UTF-8"))
                {
                    table.warn(
                        lineno,
                        format!(
                            "flag mode `{}` is not supported; flags are read as single characters",
                            fields.get(1).unwrap_or(&"")
                        ),
                    );
                }
                continue;
            }
            other => {
                close(&mut table, block.take());
                table.warn(lineno, format!("ignoring unsupported directive `{other}`"));
                continue;
            }
        };

        let flag_field = fields.get(1).copied().unwrap_or("");
        let continues_block = block
            .as_ref()
            .is_some_and(|b| b.kind == kind && single_char(flag_field) == Some(b.flag));
        let header_expected = !continues_block
            || block
                .as_ref()
                .is_some_and(|b| b.read >= b.declared && is_header(&fields));

        if header_expected {
            close(&mut table, block.take());
            let malformed = |message: &str| SpellError::MalformedHeader {
                line: lineno,
                message: format!("{}: `{}`", message, line.trim()),
            };
            if fields.len() < 4 {
                return Err(malformed("expected `PFX|SFX flag Y|N count`"));
            }
            let flag =
                single_char(flag_field).ok_or_else(|| malformed("flag must be one character"))?;
            let cross_product = match fields[2] {
                "Y" => true,
                "N" => false,
                _ => return Err(malformed("cross-product field must be Y or N")),
            };
            let declared = fields[3]
                .parse()
                .map_err(|_| malformed("rule count must be a number"))?;
            block = Some(OpenBlock {
                kind,
                flag,
                cross_product,
                declared,
                read: 0,
                header_line: lineno,
            });
            continue;
        }

        let b = block
            .as_mut()
            .expect("continues_block implies an open block");
        b.read += 1;
        if fields.len() < 4 {
            table.warn(lineno, "rule line needs strip and append fields; skipped");
            continue;
        }
        let empty_or = |s: &str| {
            if s == "0" {
                String::new()
            } else {
                s.to_string()
            }
        };
        let strip = empty_or(fields[2]);
        let mut append_field = fields[3];
        if let Some((affix, _)) = append_field.split_once('/') {
            table.warn(
                lineno,
                "continuation flags on affixes are not supported; ignored",
            );
            append_field = affix;
        }
        let append = empty_or(append_field);
        let condition = match fields.get(4) {
            None => Ok(Condition::any()),
            Some(pattern) => Condition::parse(pattern),
        };
        let condition = match condition {
            Ok(c) => c,
            Err(message) => {
                table.warn(lineno, format!("{message}; rule skipped"));
                continue;
            }
        };
        let rule = AffixRule {
            kind,
            flag: b.flag,
            cross_product: b.cross_product,
            strip,
            append,
            condition,
        };
        table.rules.entry(rule.flag).or_default().push(rule);
    }
    close(&mut table, block.take());
    Ok(table)
}
