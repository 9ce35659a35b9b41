//! Curve files: one branch per line as `name: series`, or `name: L` for the
//! reference line `x = 0`. `#` starts a comment.

use std::fmt;

use ewtree_core::{parse_branch, BranchRecord, Error};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub record: BranchRecord,
}

#[derive(Debug, Clone, Default)]
pub struct CurveFile {
    pub entries: Vec<Entry>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut file = CurveFile::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let err = |byte: usize, message: String| ParseError {
                line,
                column: raw[..byte].chars().count() + 1,
                message,
            };
            let colon = body.find(':').ok_or_else(|| err(0, "expected `name: series`".into()))?;
            let name = body[..colon].trim();
            let name_at = body.len() - body.trim_start().len();
            if !valid_name(name) {
                return Err(err(name_at, format!("invalid branch name `{}`", name)));
            }
            if let Some(prev) = file.entries.iter().find(|e| e.record.name() == name) {
                return Err(err(name_at, format!("branch `{}` already defined on line {}", name, prev.line)));
            }
            let rest = &body[colon + 1..];
            let value_at = colon + 1 + (rest.len() - rest.trim_start().len());
            let value = rest.trim();
            let record = if value == "L" {
                if let Some(prev) = file.entries.iter().find(|e| e.record.is_l()) {
                    return Err(err(value_at, format!("a second L entry (first on line {})", prev.line)));
                }
                BranchRecord::reference(name)
            } else {
                match parse_branch(value) {
                    Ok(series) => BranchRecord::series(name, series),
                    Err(Error::Parse { position, message }) => return Err(err(value_at + position, message)),
                    Err(e) => return Err(err(value_at, e.to_string())),
                }
            };
            file.entries.push(Entry { line, record });
        }
        if file.entries.is_empty() {
            return Err(ParseError { line: 1, column: 1, message: "no branches".into() });
        }
        Ok(file)
    }

    pub fn records(&self) -> Vec<BranchRecord> {
        self.entries.iter().map(|e| e.record.clone()).collect()
    }

    pub fn has_l(&self) -> bool {
        self.entries.iter().any(|e| e.record.is_l())
    }

    pub fn line_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.record.name() == name).map(|e| e.line)
    }

    pub fn record(&self, name: &str) -> Option<&BranchRecord> {
        self.entries.iter().map(|e| &e.record).find(|r| r.name() == name)
    }
}
