//! Parsers for the two machine-readable git outputs the miner consumes:
//! `git log --numstat` with a separator-delimited header, and
//! `git blame --line-porcelain`.

use crate::error::{Error, Result};

/// Header fields are separated by US (0x1f); each commit starts with RS (0x1e).
pub const LOG_FORMAT: &str = "%x1e%H%x1f%P%x1f%aN%x1f%aE%x1f%at";

const RECORD_SEP: char = '\x1e';
const FIELD_SEP: char = '\x1f';

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawChange {
    pub path: String,
    /// `None` when git reports `-` (binary content).
    pub added: Option<u64>,
    pub deleted: Option<u64>,
}

impl RawChange {
    pub fn is_binary(&self) -> bool {
        self.added.is_none() || self.deleted.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCommit {
    pub hash: String,
    pub parents: Vec<String>,
    pub author_name: String,
    pub author_email: String,
    pub timestamp: i64,
    pub changes: Vec<RawChange>,
}

impl RawCommit {
    pub fn is_merge(&self) -> bool {
        self.parents.len() > 1
    }
}

/// Parses `git log --numstat --format=LOG_FORMAT` output.
pub fn parse_numstat_log(input: &str) -> Result<Vec<RawCommit>> {
    let mut commits = Vec::new();
    for chunk in input.split(RECORD_SEP) {
        if chunk.trim().is_empty() {
            continue;
        }
        let mut lines = chunk.split('\n');
        let header = lines.next().unwrap_or_default();
        let fields: Vec<&str> = header.split(FIELD_SEP).collect();
        if fields.len() != 5 {
            return Err(Error::parse(
                "git log header",
                format!("expected 5 fields, got {}: {header:?}", fields.len()),
            ));
        }
        let hash = fields[0].trim();
        if !is_object_id(hash) {
            return Err(Error::parse("git log header", format!("bad hash {hash:?}")));
        }
        let timestamp = fields[4]
            .trim()
            .parse::<i64>()
            .map_err(|e| Error::parse("git log timestamp", format!("{:?}: {e}", fields[4])))?;
        let changes = lines
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .filter(|l| !l.is_empty())
            .map(parse_numstat_line)
            .collect::<Result<Vec<_>>>()?;
        commits.push(RawCommit {
            hash: hash.to_string(),
            parents: fields[1].split_whitespace().map(str::to_string).collect(),
            author_name: fields[2].to_string(),
            author_email: fields[3].to_string(),
            timestamp,
            changes,
        });
    }
    Ok(commits)
}

/// One `added<TAB>deleted<TAB>path` line.
pub fn parse_numstat_line(line: &str) -> Result<RawChange> {
    let mut parts = line.splitn(3, '\t');
    let (Some(added), Some(deleted), Some(path)) = (parts.next(), parts.next(), parts.next())
    else {
        return Err(Error::parse("numstat line", format!("{line:?}")));
    };
    let count = |field: &str| -> Result<Option<u64>> {
        if field == "-" {
            Ok(None)
        } else {
            field
                .parse::<u64>()
                .map(Some)
                .map_err(|e| Error::parse("numstat count", format!("{field:?}: {e}")))
        }
    };
    Ok(RawChange {
        added: count(added)?,
        deleted: count(deleted)?,
        path: unquote_path(path)?,
    })
}

/// Undoes git's C-style quoting of paths containing special characters.
/// Unquoted input is returned as is.
pub fn unquote_path(raw: &str) -> Result<String> {
    let Some(inner) = raw
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
    else {
        return Ok(raw.to_string());
    };
    let bytes = inner.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b != b'\\' {
            out.push(b);
            i += 1;
            continue;
        }
        let esc = *bytes
            .get(i + 1)
            .ok_or_else(|| Error::parse("quoted path", raw.to_string()))?;
        i += 2;
        match esc {
            b'n' => out.push(b'\n'),
            b't' => out.push(b'\t'),
            b'r' => out.push(b'\r'),
            b'a' => out.push(0x07),
            b'b' => out.push(0x08),
            b'f' => out.push(0x0c),
            b'v' => out.push(0x0b),
            b'\\' => out.push(b'\\'),
            b'"' => out.push(b'"'),
            b'0'..=b'3' => {
                let digits = bytes
                    .get(i..i + 2)
                    .ok_or_else(|| Error::parse("quoted path", raw.to_string()))?;
                let mut value = u32::from(esc - b'0');
                for d in digits {
                    if !(b'0'..=b'7').contains(d) {
                        return Err(Error::parse("quoted path", raw.to_string()));
                    }
                    value = value * 8 + u32::from(d - b'0');
                }
                out.push(value as u8);
                i += 2;
            }
            _ => return Err(Error::parse("quoted path", raw.to_string())),
        }
    }
    String::from_utf8(out).map_err(|_| Error::parse("quoted path", format!("non-UTF-8 path {raw}")))
}

fn is_object_id(s: &str) -> bool {
    (s.len() == 40 || s.len() == 64) && s.bytes().all(|b| b.is_ascii_hexdigit())
}

/// Author of one attributed line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlameLine {
    pub commit: String,
    pub author_name: String,
    pub author_email: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlameOutput {
    pub lines: Vec<BlameLine>,
    /// Set when any line's content carries a NUL byte.
    pub binary: bool,
}

/// Parses `git blame --line-porcelain` output. Every line group repeats the
/// full header, so each content line (prefixed by TAB) closes one record.
pub fn parse_line_porcelain(input: &[u8]) -> Result<BlameOutput> {
    let mut out = BlameOutput::default();
    let mut commit: Option<String> = None;
    let mut name = String::new();
    let mut mail = String::new();

    for raw in input.split(|&b| b == b'\n') {
        if let Some(content) = raw.strip_prefix(b"\t") {
            let Some(sha) = commit.take() else {
                return Err(Error::parse("blame porcelain", "content line without header"));
            };
            if content.contains(&0) {
                out.binary = true;
            }
            out.lines.push(BlameLine {
                commit: sha,
                author_name: std::mem::take(&mut name),
                author_email: std::mem::take(&mut mail),
            });
            continue;
        }
        if raw.is_empty() {
            continue;
        }
        let line = String::from_utf8_lossy(raw);
        if let Some(rest) = line.strip_prefix("author-mail ") {
            let rest = rest.trim();
            mail = rest
                .strip_prefix('<')
                .and_then(|s| s.strip_suffix('>'))
                .unwrap_or(rest)
                .to_string();
        } else if let Some(rest) = line.strip_prefix("author ") {
            name = rest.to_string();
        } else if commit.is_none() {
            let sha = line.split(' ').next().unwrap_or_default();
            if is_object_id(sha) {
                commit = Some(sha.to_string());
                name.clear();
                mail.clear();
            } else {
                return Err(Error::parse("blame porcelain", format!("unexpected line {line:?}")));
            }
        }
    }
    if commit.is_some() {
        return Err(Error::parse("blame porcelain", "truncated line group"));
    }
    Ok(out)
}
