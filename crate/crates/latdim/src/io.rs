//! Set serialization: JSONL (one JSON integer array per line, optional header
//! object) and a plain-text alternative (whitespace-separated integers per
//! line). Round-trips are bit-exact; writers always emit LF line endings.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSet;

#[derive(Serialize, Deserialize)]
struct Header {
    dim: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    provenance: String,
}

/// Reads the JSONL set format: an optional leading `{"dim":d,"provenance":..}`
/// header, then one `[c_1,...,c_d]` array per line. Blank lines are ignored.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<LatticeSet> {
    let mut declared: Option<Header> = None;
    let mut dim: Option<usize> = None;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('{') {
            if lineno == 0 && declared.is_none() && rows.is_empty() {
                let h: Header = serde_json::from_str(trimmed)
                    .map_err(|e| Error::Format(format!("bad header line: {e}")))?;
                if h.dim == 0 {
                    return Err(Error::Format("header dim must be >= 1".into()));
                }
                dim = Some(h.dim);
                declared = Some(h);
                continue;
            }
            return Err(Error::Format(format!(
                "line {}: header object allowed only as the first line",
                lineno + 1
            )));
        }
        let row = parse_point_json(trimmed, lineno + 1)?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::Format(format!(
                    "line {}: point has dimension {}, expected {}",
                    lineno + 1,
                    row.len(),
                    d
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    let dim = dim.ok_or_else(|| Error::Format("empty input: no header and no points".into()))?;
    let set = LatticeSet::from_points(dim, rows)?;
    Ok(match declared {
        Some(h) => set.with_provenance(h.provenance),
        None => set,
    })
}

fn parse_point_json(line: &str, lineno: usize) -> Result<Vec<i64>> {
    let value: serde_json::Value = serde_json::from_str(line)
        .map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Format(format!("line {lineno}: expected a JSON array")))?;
    if arr.is_empty() {
        return Err(Error::Format(format!("line {lineno}: empty point")));
    }
    arr.iter()
        .map(|v| {
            v.as_i64().ok_or_else(|| {
                Error::Format(format!("line {lineno}: coordinate {v} is not a 64-bit integer"))
            })
        })
        .collect()
}

/// Reads the plain-text alternative: whitespace-separated integers, one point
/// per line. Lines starting with `#` are ignored.
pub fn read_text<R: BufRead>(reader: R) -> Result<LatticeSet> {
    let mut dim: Option<usize> = None;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row: Vec<i64> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::Format(format!(
                    "line {}: point has dimension {}, expected {}",
                    lineno + 1,
                    row.len(),
                    d
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    let dim = dim.ok_or_else(|| Error::Format("empty input".into()))?;
    LatticeSet::from_points(dim, rows)
}

/// Writes the JSONL format with a header line.
pub fn write_jsonl<W: Write>(mut w: W, set: &LatticeSet) -> Result<()> {
    let header = Header {
        dim: set.dim(),
        provenance: set.provenance().to_string(),
    };
    let mut line = serde_json::to_string(&header).expect("header serializes");
    line.push('\n');
    w.write_all(line.as_bytes())?;
    for p in set.points() {
        let mut line = serde_json::to_string(p).expect("point serializes");
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Writes the plain-text format.
pub fn write_text<W: Write>(mut w: W, set: &LatticeSet) -> Result<()> {
    for p in set.points() {
        let line: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        w.write_all(line.join(" ").as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a set from a file, sniffing the format from the first non-blank
/// byte: `{` or `[` means JSONL, anything else is plain text.
pub fn read_path(path: &Path) -> Result<LatticeSet> {
    let mut file = File::open(path)?;
    let mut buf = Vec::new();
    file.read_to_end(&mut buf)?;
    let first = buf.iter().find(|b| !b.is_ascii_whitespace());
    match first {
        Some(b'{') | Some(b'[') => read_jsonl(BufReader::new(&buf[..])),
        _ => read_text(BufReader::new(&buf[..])),
    }
}

/// Writes a set to a file in the JSONL format.
pub fn write_jsonl_path(path: &Path, set: &LatticeSet) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_jsonl(&mut w, set)?;
    w.flush()?;
    Ok(())
}
