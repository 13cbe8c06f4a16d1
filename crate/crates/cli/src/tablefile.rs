//! The gyrotable file formats.
//!
//! Plain text is canonical: a header line `gyrotable v1 n=<order>`,
//! optional `# key: value` metadata lines, then `n` rows of `n`
//! whitespace-separated indices (row `a` lists `a ⊕ 0 … a ⊕ (n-1)`).
//! Index 0 is the identity by convention. A JSON mirror with explicit
//! field names is accepted and written alongside.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use gyrolab_core::FiniteGyrogroupTable;

#[derive(Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub format: String,
    pub version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rows: Vec<Vec<usize>>,
}

/// Parses either format into raw rows plus metadata. Errors carry line and
/// column positions for the plain format.
pub fn parse_table_file(path: &Path) -> Result<(Vec<Vec<usize>>, Option<String>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading table file {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let parsed: TableJson = serde_json::from_str(&text)
            .with_context(|| format!("parsing JSON table {}", path.display()))?;
        if parsed.format != "gyrotable" || parsed.version != 1 {
            bail!(
                "{}: expected format \"gyrotable\" version 1",
                path.display()
            );
        }
        if parsed.rows.len() != parsed.n {
            bail!(
                "{}: header says n={} but {} rows present",
                path.display(),
                parsed.n,
                parsed.rows.len()
            );
        }
        check_entries(&parsed.rows, parsed.n).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        return Ok((parsed.rows, parsed.name));
    }
    parse_plain(&text).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn check_entries(rows: &[Vec<usize>], n: usize) -> Result<(), String> {
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(format!("row {r} has {} entries, expected {n}", row.len()));
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(format!("entry ({r}, {c}) = {v} out of range 0..{n}"));
            }
        }
    }
    Ok(())
}

/// Errors are formatted as `<line>:<column>: message` (1-based).
fn parse_plain(text: &str) -> Result<(Vec<Vec<usize>>, Option<String>), String> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or("1:1: empty file")?;
    let rest = header
        .strip_prefix("gyrotable v1 ")
        .ok_or("1:1: expected header 'gyrotable v1 n=<order>'")?;
    let n: usize = rest
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or("1:14: expected 'n=<order>' in header")?;
    if n == 0 {
        return Err("1:14: order must be at least 1".to_string());
    }

    let mut name = None;
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(meta) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = meta.split_once(':') {
                if key.trim() == "name" {
                    name = Some(value.trim().to_string());
                }
            }
            continue;
        }
        if rows.len() == n {
            return Err(format!("{lineno}:1: more than {n} rows"));
        }
        let mut row = Vec::with_capacity(n);
        let mut col_offset = 0usize;
        for tok in line.split_whitespace() {
            let col = line[col_offset..]
                .find(tok)
                .map(|p| col_offset + p + 1)
                .unwrap_or(1);
            col_offset = col - 1 + tok.len();
            let v: usize = tok
                .parse()
                .map_err(|_| format!("{lineno}:{col}: '{tok}' is not an index"))?;
            if v >= n {
                return Err(format!("{lineno}:{col}: entry {v} out of range 0..{n}"));
            }
            row.push(v);
        }
        if row.len() != n {
            return Err(format!(
                "{lineno}:1: row has {} entries, expected {n}",
                row.len()
            ));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(format!(
            "{}:1: found {} rows, expected {n}",
            text.lines().count(),
            rows.len()
        ));
    }
    Ok((rows, name))
}

/// Parses and validates into a carrier.
pub fn read_table(path: &Path) -> Result<FiniteGyrogroupTable> {
    let (rows, name) = parse_table_file(path)?;
    let table =
        FiniteGyrogroupTable::from_table(rows).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(match name {
        Some(name) => table.with_name(&name),
        None => table,
    })
}

pub fn render_plain(table: &FiniteGyrogroupTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gyrotable v1 n={}", table.order());
    if let Some(name) = table.name() {
        let _ = writeln!(out, "# name: {name}");
    }
    for row in table.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_plain(path: &Path, table: &FiniteGyrogroupTable) -> Result<()> {
    fs::write(path, render_plain(table)).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json(path: &Path, table: &FiniteGyrogroupTable) -> Result<()> {
    let doc = TableJson {
        format: "gyrotable".to_string(),
        version: 1,
        n: table.order(),
        name: table.name().map(str::to_string),
        rows: table.rows(),
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gyrolab_core::cyclic_group;

    #[test]
    fn plain_round_trip() {
        let z4 = cyclic_group(4).unwrap();
        let text = render_plain(&z4);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z4.tbl");
        fs::write(&path, &text).unwrap();
        let back = read_table(&path).unwrap();
        assert_eq!(back.rows(), z4.rows());
        assert_eq!(back.name(), Some("Z4"));
    }

    #[test]
    fn json_mirror_round_trip() {
        let z3 = cyclic_group(3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z3.json");
        write_json(&path, &z3).unwrap();
        let back = read_table(&path).unwrap();
        assert_eq!(back.rows(), z3.rows());
    }

    #[test]
    fn json_rejects_wrong_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v2.json");
        fs::write(
            &path,
            r#"{"format": "gyrotable", "version": 2, "n": 1, "rows": [[0]]}"#,
        )
        .unwrap();
        assert!(read_table(&path).is_err());
    }

    #[test]
    fn plain_parse_positions() {
        let err = parse_plain("gyrotable v1 n=2\n0 1\n1 x\n").unwrap_err();
        assert!(err.starts_with("3:3:"), "{err}");
        let err = parse_plain("not a header\n").unwrap_err();
        assert!(err.starts_with("1:1:"), "{err}");
    }
}
