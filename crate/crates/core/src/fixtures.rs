//! Published parameter tables, shipped verbatim.
//!
//! Each fixture is a small text file: `# key value` header lines followed by
//! whitespace-separated rows. The `sha256` header is the digest of the row
//! lines (each terminated by `\n`), so a transcription error shows up as a
//! checksum mismatch rather than as a failing code.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constructions::ConstructionTag;
use crate::ring::RingId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
    #[error("fixture {id}: checksum mismatch (header {expected}, data {found})")]
    Checksum { id: String, expected: String, found: String },
    #[error("fixture {id}, line {line}: {msg}")]
    Parse { id: String, line: usize, msg: String },
}

const FILES: &[(&str, &str)] = &[
    ("26-1", include_str!("../fixtures/26-1.tbl")),
    ("26-2", include_str!("../fixtures/26-2.tbl")),
    ("26-3", include_str!("../fixtures/26-3.tbl")),
    ("26-4", include_str!("../fixtures/26-4.tbl")),
    ("32-1", include_str!("../fixtures/32-1.tbl")),
    ("32-2", include_str!("../fixtures/32-2.tbl")),
    ("36-1", include_str!("../fixtures/36-1.tbl")),
    ("38-1", include_str!("../fixtures/38-1.tbl")),
    ("40-1", include_str!("../fixtures/40-1.tbl")),
    ("40-2", include_str!("../fixtures/40-2.tbl")),
    ("40-3", include_str!("../fixtures/40-3.tbl")),
];

pub fn fixture_ids() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(id, _)| *id)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub construction: ConstructionTag,
    pub ring: RingId,
    /// Code length over `ring`.
    pub length: usize,
    /// Minimum distance claimed for every row, if the table states one.
    pub claimed_d: Option<usize>,
    /// For building-up tables, the table holding the base codes.
    pub base: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<FixtureRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureRow {
    pub fields: BTreeMap<String, String>,
}

impl FixtureRow {
    pub fn get(&self, column: &str) -> Option<&str> {
        self.fields.get(column).map(String::as_str)
    }

    pub fn id(&self) -> usize {
        self.get("id").and_then(|s| s.parse().ok()).expect("validated on load")
    }

    pub fn alpha(&self) -> Option<u64> {
        self.get("alpha").and_then(|s| s.parse().ok())
    }
}

impl Fixture {
    pub fn row(&self, id: usize) -> Option<&FixtureRow> {
        self.rows.iter().find(|r| r.id() == id)
    }
}

pub fn load(id: &str) -> Result<Fixture, FixtureError> {
    let (_, text) = FILES
        .iter()
        .find(|(f, _)| *f == id)
        .ok_or_else(|| FixtureError::UnknownFixture(id.to_string()))?;
    parse(id, text)
}

pub fn data_digest(rows: &[&str]) -> String {
    let mut h = Sha256::new();
    for r in rows {
        h.update(r.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse(id: &str, text: &str) -> Result<Fixture, FixtureError> {
    let err = |line: usize, msg: String| FixtureError::Parse { id: id.to_string(), line, msg };
    let mut header = BTreeMap::new();
    let mut data = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(h) = line.strip_prefix('#') {
            let (k, v) = h.trim().split_once(' ').ok_or_else(|| err(i + 1, "bad header".into()))?;
            header.insert(k.to_string(), v.trim().to_string());
        } else if !line.trim().is_empty() {
            data.push((i + 1, line));
        }
    }
    let get = |k: &str| header.get(k).ok_or_else(|| err(0, format!("missing header '{k}'")));
    let expected = get("sha256")?.clone();
    let found = data_digest(&data.iter().map(|(_, l)| *l).collect::<Vec<_>>());
    if expected != found {
        return Err(FixtureError::Checksum { id: id.to_string(), expected, found });
    }
    let construction = get("construction")?.parse().map_err(|e: String| err(0, e))?;
    let ring = get("ring")?.parse().map_err(|e: crate::ring::RingError| err(0, e.to_string()))?;
    let length = get("length")?.parse().map_err(|_| err(0, "bad length".into()))?;
    let claimed_d = match get("d")?.as_str() {
        "-" => None,
        s => Some(s.parse().map_err(|_| err(0, "bad d".into()))?),
    };
    let columns: Vec<String> = get("columns")?.split_whitespace().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (line, text) in data {
        let cells: Vec<&str> = text.split_whitespace().collect();
        if cells.len() != columns.len() {
            return Err(err(line, format!("expected {} cells, found {}", columns.len(), cells.len())));
        }
        if cells[0].parse::<usize>().is_err() {
            return Err(err(line, format!("bad row id '{}'", cells[0])));
        }
        let fields = columns.iter().cloned().zip(cells.into_iter().map(str::to_string)).collect();
        rows.push(FixtureRow { fields });
    }
    Ok(Fixture {
        id: id.to_string(),
        construction,
        ring,
        length,
        claimed_d,
        base: header.get("base").cloned(),
        columns,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        let sizes: Vec<(String, usize)> = fixture_ids().map(|id| (id.to_string(), load(id).unwrap().rows.len())).collect();
        let want = [
            ("26-1", 20),
            ("26-2", 25),
            ("26-3", 15),
            ("26-4", 20),
            ("32-1", 25),
            ("32-2", 12),
            ("36-1", 2),
            ("38-1", 1),
            ("40-1", 25),
            ("40-2", 25),
            ("40-3", 3),
        ];
        assert_eq!(sizes, want.map(|(a, b)| (a.to_string(), b)));
    }

    #[test]
    fn tampering_is_detected() {
        let text = FILES[0].1.replace("(000333)", "(000332)");
        assert!(matches!(parse("26-1", &text), Err(FixtureError::Checksum { .. })));
        assert_eq!(load("99-9"), Err(FixtureError::UnknownFixture("99-9".into())));
    }

    #[test]
    fn row_fields() {
        let f = load("38-1").unwrap();
        assert_eq!(f.construction, ConstructionTag::Thm3);
        let r = f.row(1).unwrap();
        assert_eq!(r.get("a3"), Some("(210331)"));
        assert_eq!(r.alpha(), Some(10152));
        let b = load("26-4").unwrap();
        assert_eq!(b.base.as_deref(), Some("26-3"));
        assert_eq!(b.claimed_d, Some(8));
    }
}
